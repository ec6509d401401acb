"""Finite groups on the index set ``0..order-1``.

A group is anything that can multiply index arrays with broadcasting
(``G.mul(x, y)``). ``FiniteGroup`` built from a Cayley table stores the table;
cyclic groups and products multiply arithmetically and only materialize a
table when one is asked for, so products far larger than a comfortable
Cayley table (automorphism groups, holomorphs) remain usable.

Products are indexed H-major: the pair ``(h, k)`` has index ``h * |K| + k``.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property

import numpy as np
from scipy.sparse import coo_matrix
from scipy.sparse.csgraph import connected_components

from . import kernels

TABLE_MAX = 8192
FAST_TABLE = 2048
ASSOC_FULL_MAX = 512
_POOL_CAP = 96
_POOL_CAP_LARGE = 16


class GroupError(ValueError):
    """Table, morphism or action data that does not describe what it claims."""


class ResourceBoundError(RuntimeError):
    """A configured size bound would be exceeded."""


class FiniteGroup:
    """Finite group given by its Cayley table (``table[i, j]`` is ``x_i * x_j``).

    Construction checks the Latin-square and identity laws, and associativity
    in full up to order 512. Above that, ``10 * order**2`` random triples
    are checked unless ``full_check`` is set.
    """

    def __init__(self, table, identity=None, labels=None, *, full_check=False):
        t = np.asarray(table)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise GroupError(f"Cayley table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        if n > TABLE_MAX:
            raise ResourceBoundError(f"order {n} exceeds the Cayley-table bound {TABLE_MAX}")
        if not np.issubdtype(t.dtype, np.integer):
            raise GroupError("Cayley table entries must be integers")
        if t.min() < 0 or t.max() >= n:
            raise GroupError("Cayley table entries must lie in 0..order-1")
        t = np.ascontiguousarray(t, dtype=np.int32)
        ar = np.arange(n)
        if identity is None:
            rows = np.nonzero((t == ar).all(axis=1))[0]
            if rows.size == 0:
                raise GroupError("no identity element")
            identity = int(rows[0])
        identity = int(identity)
        if not (t[identity] == ar).all() or not (t[:, identity] == ar).all():
            raise GroupError(f"element {identity} is not a two-sided identity")
        if not ((np.sort(t, axis=1) == ar).all() and (np.sort(t, axis=0) == ar[:, None]).all()):
            raise GroupError("Cayley table is not a Latin square")
        if full_check or n <= ASSOC_FULL_MAX:
            bad = kernels.assoc_violation(t)
        else:
            bad = kernels.assoc_violation_sampled(t, 10 * n * n)
        if bad is not None:
            raise GroupError(f"associativity fails at triple {bad}")
        self.order = n
        self.identity = identity
        self._table = t
        self._labels = None if labels is None else list(labels)
        if self._labels is not None and len(self._labels) != n:
            raise GroupError("one label per element is required")

    def _init_lazy(self, order, identity):
        self.order = int(order)
        self.identity = int(identity)
        self._table = None
        self._labels = None

    # multiplication -------------------------------------------------------

    def mul(self, x, y):
        return self.table[x, y]

    @property
    def table(self):
        if self._table is None:
            if self.order > TABLE_MAX:
                raise ResourceBoundError(
                    f"order {self.order} exceeds the Cayley-table bound {TABLE_MAX}"
                )
            ar = np.arange(self.order)
            self._table = np.ascontiguousarray(
                self.mul(ar[:, None], ar[None, :]), dtype=np.int32
            )
        return self._table

    def fast_table(self):
        """The Cayley table when it is stored or cheap to build, else ``None``."""
        if self._table is not None or self.order <= FAST_TABLE:
            return self.table
        return None

    def label(self, i):
        if self._labels is not None:
            return self._labels[i]
        return str(int(i))

    @property
    def labels(self):
        return [self.label(i) for i in range(self.order)]

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<{type(self).__name__} of order {self.order}>"

    # element data ---------------------------------------------------------

    @cached_property
    def _orders_inverses(self):
        t = self.fast_table()
        if t is not None:
            return kernels.element_orders(t, self.identity)
        n = self.order
        elems = np.arange(n)
        orders = np.zeros(n, dtype=np.int64)
        inverses = np.zeros(n, dtype=np.int64)
        prev = np.full(n, self.identity, dtype=np.int64)
        cur = elems.copy()
        pending = np.ones(n, dtype=bool)
        k = 1
        while pending.any():
            hit = pending & (cur == self.identity)
            orders[hit] = k
            inverses[hit] = prev[hit]
            pending &= ~hit
            idx = np.nonzero(pending)[0]
            prev[idx] = cur[idx]
            cur[idx] = self.mul(cur[idx], idx)
            k += 1
        return orders, inverses

    @property
    def orders(self):
        return self._orders_inverses[0]

    @property
    def inverses(self):
        return self._orders_inverses[1]

    def element_order(self, x):
        return int(self.orders[x])

    def inverse(self, x):
        return self.inverses[x]

    def power(self, x, k):
        x = int(x)
        k = int(k) % self.element_order(x)
        result, base = self.identity, x
        while k:
            if k & 1:
                result = int(self.mul(result, base))
            base = int(self.mul(base, base))
            k >>= 1
        return result

    def order_profile(self):
        """Count of elements of each order, as a dict ``{order: count}``."""
        vals, counts = np.unique(self.orders, return_counts=True)
        return {int(v): int(c) for v, c in zip(vals, counts)}

    def is_abelian(self):
        g = self.generators
        return bool((self.mul(g[:, None], g[None, :]) == self.mul(g[None, :], g[:, None])).all())

    # subgroups ------------------------------------------------------------

    def closure_mask(self, gens):
        gens = np.asarray(list(gens), dtype=np.int64)
        t = self.fast_table()
        if t is not None:
            return kernels.closure(t, gens, self.identity)
        mask = np.zeros(self.order, dtype=bool)
        mask[self.identity] = True
        if gens.size == 0:
            return mask
        frontier = np.array([self.identity], dtype=np.int64)
        while frontier.size:
            nxt = np.unique(self.mul(frontier[:, None], gens[None, :]).ravel())
            nxt = nxt[~mask[nxt]]
            mask[nxt] = True
            frontier = nxt
        return mask

    def subgroup(self, gens):
        """Elements of the subgroup generated by ``gens``, as a frozenset."""
        return frozenset(np.nonzero(self.closure_mask(gens))[0].tolist())

    @cached_property
    def generators(self):
        """A greedy generating set, sorted by descending element order.

        Each step adds the element whose closure with the current set is
        largest (ties: higher order, then lower index). Every step at least
        doubles the subgroup, so at most log2(order) generators result.
        Above 1024 elements the candidate pool per step is capped (more
        tightly above the Cayley-table bound, where closures are slow).
        """
        n = self.order
        orders = self.orders
        mask = np.zeros(n, dtype=bool)
        mask[self.identity] = True
        gens = []
        if n > 1:
            # a single element's closure is its cyclic group: the greedy first pick
            first = int(np.lexsort((np.arange(n), -orders))[0])
            gens.append(first)
            mask = self.closure_mask(gens)
        while not mask.all():
            pool = np.nonzero(~mask)[0]
            pool = pool[np.lexsort((pool, -orders[pool]))]
            cap = _POOL_CAP if n <= TABLE_MAX else _POOL_CAP_LARGE
            if n > 1024 and pool.size > cap:
                spread = pool[:: max(1, pool.size // (cap // 2))]
                pool = np.unique(np.concatenate([pool[: cap // 2], spread]))
                pool = pool[np.lexsort((pool, -orders[pool]))]
            best, best_mask, best_size = None, None, -1
            for x in pool:
                m = self.closure_mask(gens + [int(x)])
                size = int(m.sum())
                if size > best_size:
                    best, best_mask, best_size = int(x), m, size
                    if size == n:
                        break
            gens.append(best)
            mask = best_mask
        gens.sort(key=lambda g: (-int(orders[g]), g))
        out = np.array(gens, dtype=np.int64)
        out.setflags(write=False)
        return out

    @cached_property
    def conjugacy_labels(self):
        """Class label per element (labels are arbitrary but deterministic)."""
        n = self.order
        gens = self.generators
        if gens.size == 0:
            return np.zeros(n, dtype=np.int64)
        ar = np.arange(n)
        inv = self.inverses
        rows, cols = [], []
        for s in gens:
            rows.append(ar)
            cols.append(self.mul(self.mul(inv[s], ar), s))
        r = np.concatenate(rows)
        c = np.concatenate(cols)
        graph = coo_matrix((np.ones(r.size, dtype=np.int8), (r, c)), shape=(n, n))
        _, labels = connected_components(graph, directed=True, connection="weak")
        return labels.astype(np.int64)

    @cached_property
    def class_sizes(self):
        """Size of the conjugacy class of each element."""
        lab = self.conjugacy_labels
        return np.bincount(lab)[lab]


class CyclicGroup(FiniteGroup):
    def __init__(self, n):
        self._init_lazy(n, 0)
        self.n = int(n)

    def mul(self, x, y):
        return (np.asarray(x) + np.asarray(y)) % self.n

    def label(self, i):
        return f"x^{int(i)}"


class DirectProduct(FiniteGroup):
    def __init__(self, H, K):
        self.H, self.K = H, K
        self._init_lazy(H.order * K.order, H.identity * K.order + K.identity)

    def split(self, x):
        return np.divmod(np.asarray(x), self.K.order)

    def pair(self, h, k):
        return np.asarray(h) * self.K.order + np.asarray(k)

    def mul(self, x, y):
        h1, k1 = self.split(x)
        h2, k2 = self.split(y)
        return self.pair(self.H.mul(h1, h2), self.K.mul(k1, k2))

    def label(self, i):
        h, k = divmod(int(i), self.K.order)
        return f"({self.H.label(h)},{self.K.label(k)})"


class SemidirectProduct(FiniteGroup):
    """H ⋊ K for an ``ActionSpec`` ``act`` of K on H.

    Convention (the only place it is fixed): ``act.images[k]`` is the
    automorphism "k applied to h", written φ_k, and

        (h1, k1) * (h2, k2) = (h1 * φ_k1(h2), k1 * k2).

    So ``(h, k)`` is the element h·k, conjugation k h k⁻¹ equals φ_k(h), and
    k ↦ φ_k must be a homomorphism into Aut(H) under functional composition:
    φ_(k1 k2) = φ_k1 ∘ φ_k2.
    """

    def __init__(self, H, K, act):
        if act.acted is not H or act.actor is not K:
            raise GroupError("action must be an ActionSpec of K on H")
        self.H, self.K, self.act = H, K, act
        self._init_lazy(H.order * K.order, H.identity * K.order + K.identity)

    def split(self, x):
        return np.divmod(np.asarray(x), self.K.order)

    def pair(self, h, k):
        return np.asarray(h) * self.K.order + np.asarray(k)

    def mul(self, x, y):
        h1, k1 = self.split(x)
        h2, k2 = self.split(y)
        return self.pair(self.H.mul(h1, self.act.images[k1, h2]), self.K.mul(k1, k2))

    def label(self, i):
        h, k = divmod(int(i), self.K.order)
        return f"({self.H.label(h)},{self.K.label(k)})"


# morphisms and actions ------------------------------------------------------


def _hom_violation(source, target, images):
    """First ``(x, g)`` with ``images[x*g] != images[x]*images[g]``, or None.

    Checking ``x`` against a generating set of the source is equivalent to
    checking every pair: every element is a positive word in the generators.
    """
    gens = source.generators
    if gens.size == 0:
        return None if images[source.identity] == target.identity else (source.identity, source.identity)
    ar = np.arange(source.order)
    right = source.mul(ar[:, None], gens[None, :])
    lhs = images[right]
    rhs = target.mul(images[:, None], images[gens][None, :])
    bad = np.argwhere(lhs != rhs)
    if bad.size:
        x, i = bad[0]
        return int(x), int(gens[i])
    return None


@dataclass(frozen=True, eq=False)
class Morphism:
    """A homomorphism ``source -> target`` stored as an image array."""

    source: FiniteGroup
    target: FiniteGroup
    images: np.ndarray = field(repr=False)

    def __post_init__(self):
        img = np.array(self.images, dtype=np.int64)
        if img.shape != (self.source.order,):
            raise GroupError(f"expected {self.source.order} images, got shape {img.shape}")
        if img.size and (img.min() < 0 or img.max() >= self.target.order):
            raise GroupError("image index out of range")
        bad = _hom_violation(self.source, self.target, img)
        if bad is not None:
            raise GroupError(f"not a homomorphism: fails at (x, g) = {bad}")
        img.setflags(write=False)
        object.__setattr__(self, "images", img)

    @classmethod
    def identity(cls, G):
        return cls(G, G, np.arange(G.order))

    def __call__(self, x):
        return self.images[x]

    @property
    def is_bijective(self):
        return self.source.order == self.target.order and np.unique(self.images).size == self.target.order

    @property
    def is_automorphism(self):
        return self.source is self.target and self.is_bijective

    def then(self, other):
        """Apply ``self`` first, then ``other``."""
        if other.source is not self.target:
            raise GroupError("morphisms do not compose")
        return Morphism(self.source, other.target, other.images[self.images])

    def inverse(self):
        if not self.is_bijective:
            raise GroupError("only bijective morphisms are invertible")
        inv = np.empty_like(self.images)
        inv[self.images] = np.arange(self.images.size)
        return Morphism(self.target, self.source, inv)

    def check_all_pairs(self):
        """Exhaustive O(n^2) homomorphism check (the slow definition)."""
        s, t = self.source, self.target
        ar = np.arange(s.order)
        img = self.images
        return bool((img[s.mul(ar[:, None], ar[None, :])] == t.mul(img[:, None], img[None, :])).all())

    def __eq__(self, other):
        return (
            isinstance(other, Morphism)
            and self.source is other.source
            and self.target is other.target
            and np.array_equal(self.images, other.images)
        )

    def __hash__(self):
        return hash((id(self.source), id(self.target), self.images.tobytes()))


class ActionSpec:
    """An action of ``actor`` (K) on ``acted`` (H) by automorphisms.

    ``images[k]`` is φ_k as an image array on H. Validation checks that
    φ_e is the identity, that φ_s is an automorphism for each generator s of K,
    and that φ_(k s) = φ_k ∘ φ_s for every k and generator s, which makes
    k ↦ φ_k a homomorphism.
    """

    def __init__(self, actor, acted, images):
        K, H = actor, acted
        img = np.array(images, dtype=np.int64)
        if img.shape != (K.order, H.order):
            raise GroupError(f"action needs a {K.order}x{H.order} image array, got {img.shape}")
        ar = np.arange(H.order)
        if not np.array_equal(img[K.identity], ar):
            raise GroupError("the identity of K must act trivially")
        for s in K.generators:
            if np.unique(img[s]).size != H.order:
                raise GroupError(f"generator {int(s)} does not act bijectively")
            bad = _hom_violation(H, H, img[s])
            if bad is not None:
                raise GroupError(f"generator {int(s)} does not act by a homomorphism: {bad}")
            ks = K.mul(np.arange(K.order), s)
            if not np.array_equal(img[ks], img[:, img[s]]):
                raise GroupError("k -> phi_k is not a homomorphism into Aut(H)")
        img.setflags(write=False)
        self.actor, self.acted, self.images = K, H, img

    @classmethod
    def from_generators(cls, actor, acted, generator_images):
        """Extend ``{k: images}`` given on generators of K along the Cayley graph."""
        K, H = actor, acted
        img = np.full((K.order, H.order), -1, dtype=np.int64)
        img[K.identity] = np.arange(H.order)
        gens = {int(s): np.asarray(v, dtype=np.int64) for s, v in generator_images.items()}
        frontier = [K.identity]
        seen = np.zeros(K.order, dtype=bool)
        seen[K.identity] = True
        while frontier:
            nxt = []
            for k in frontier:
                for s, phi in gens.items():
                    ks = int(K.mul(k, s))
                    if not seen[ks]:
                        seen[ks] = True
                        img[ks] = img[k][phi]
                        nxt.append(ks)
            frontier = nxt
        if not seen.all():
            raise GroupError("the given elements do not generate the acting group")
        return cls(K, H, img)

    @classmethod
    def trivial(cls, actor, acted):
        return cls(actor, acted, np.tile(np.arange(acted.order), (actor.order, 1)))

    def __call__(self, k):
        return self.images[k]


# constructors ---------------------------------------------------------------


def cyclic(n):
    """The cyclic group C_n on residues mod n; ``i*j = (i + j) mod n``."""
    n = int(n)
    if n < 1:
        raise GroupError("cyclic groups need n >= 1")
    return CyclicGroup(n)


def direct_product(H, K):
    return DirectProduct(H, K)


def semidirect(H, K, act):
    return SemidirectProduct(H, K, act)


def from_table(table, identity=None, labels=None, full_check=False):
    return FiniteGroup(table, identity, labels, full_check=full_check)


def to_json(G):
    return {"order": G.order, "identity": G.identity, "table": G.table.tolist()}


def from_json(data, full_check=False):
    try:
        table = data["table"]
    except (KeyError, TypeError):
        raise GroupError("Cayley-table JSON needs a 'table' field") from None
    G = FiniteGroup(np.asarray(table, dtype=np.int64), data.get("identity"), full_check=full_check)
    if "order" in data and int(data["order"]) != G.order:
        raise GroupError(f"declared order {data['order']} but table has {G.order} rows")
    return G


# structural queries ---------------------------------------------------------


def _mask_to_set(mask):
    return frozenset(np.nonzero(mask)[0].tolist())


def _as_mask(G, elems):
    if isinstance(elems, np.ndarray) and elems.dtype == bool:
        return elems
    mask = np.zeros(G.order, dtype=bool)
    mask[list(elems)] = True
    return mask


def center_mask(G):
    g = G.generators
    ar = np.arange(G.order)
    return (G.mul(ar[:, None], g[None, :]) == G.mul(g[None, :], ar[:, None])).all(axis=1)


def center(G):
    """Elements commuting with every element (checked against generators)."""
    return _mask_to_set(center_mask(G))


def commutator(G, x, y):
    inv = G.inverses
    return G.mul(G.mul(inv[x], inv[y]), G.mul(x, y))


def normal_closure_mask(G, elems):
    gens = sorted(int(e) for e in elems)
    mask = G.closure_mask(gens)
    inv = G.inverses
    while True:
        members = np.nonzero(mask)[0]
        conj = G.mul(G.mul(inv[G.generators][:, None], members[None, :]), G.generators[:, None])
        new = np.unique(conj[~mask[conj]])
        if new.size == 0:
            return mask
        gens.extend(int(x) for x in new)
        mask = G.closure_mask(gens)


def derived_subgroup_mask(G):
    g = G.generators
    comms = np.unique(commutator(G, g[:, None], g[None, :]))
    return normal_closure_mask(G, comms)


def derived_subgroup(G):
    """The commutator subgroup: normal closure of generator commutators."""
    return _mask_to_set(derived_subgroup_mask(G))


def is_normal(G, elems):
    mask = _as_mask(G, elems)
    members = np.nonzero(mask)[0]
    inv = G.inverses
    g = G.generators
    conj = G.mul(G.mul(inv[g][:, None], members[None, :]), g[:, None])
    return bool(mask[conj].all())


def _prime_power_part(n, r):
    part = 1
    while n % r == 0:
        n //= r
        part *= r
    return part


def _is_power_of(n, r):
    while n % r == 0:
        n //= r
    return n == 1


def sylow_mask(G, r):
    r = int(r)
    if r < 2 or G.order % r:
        raise GroupError(f"{r} does not divide the group order {G.order}")
    target = _prime_power_part(G.order, r)
    orders = G.orders
    mask = np.zeros(G.order, dtype=bool)
    mask[G.identity] = True
    gens = []
    size = 1
    for x in range(G.order):
        if size == target:
            break
        if mask[x] or orders[x] == 1 or not _is_power_of(int(orders[x]), r):
            continue
        m = G.closure_mask(gens + [x])
        s = int(m.sum())
        if _is_power_of(s, r):
            gens.append(x)
            mask, size = m, s
    return mask


def sylow(G, r):
    """A Sylow r-subgroup, found by a deterministic scan in index order.

    Starting from the trivial subgroup, each element of r-power order that
    keeps the generated subgroup an r-group is added. A non-Sylow r-subgroup
    always has such an element in its normalizer, so the scan ends at
    full r-part.
    """
    return _mask_to_set(sylow_mask(G, r))


def is_isomorphic(G1, G2):
    """``(True, witness Morphism)`` if an isomorphism exists, else ``(False, None)``."""
    from .search import find_isomorphism

    images = find_isomorphism(G1, G2)
    if images is None:
        return False, None
    return True, Morphism(G1, G2, images)
