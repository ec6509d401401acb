"""Automorphism groups: brute force, holomorphs, and the predicted Aut column.

``brute_aut`` finds every automorphism by backtracking over generator
images (see ``search``). The result is itself a group: ``AutGroup`` stores
each automorphism as an image array, ordered by the images of the base
group's generators, and multiplies by looking products up by that key.

``predicted_aut`` assembles the expected structure for each table row from
cyclic groups, holomorphs, ``GL2Group`` and explicit semidirect actions,
and ``verify_table_row`` compares the two.
"""
from __future__ import annotations

import os
import time
from dataclasses import dataclass, field

import numpy as np

from . import catalog, gl2p, kernels
from .catalog import GroupSpec, zeta
from .numtheory import is_prime
from .groups import (
    FAST_TABLE,
    TABLE_MAX,
    ActionSpec,
    FiniteGroup,
    GroupError,
    Morphism,
    ResourceBoundError,
    cyclic,
    direct_product,
    is_isomorphic,
    semidirect,
)
from .search import all_automorphism_images, count_automorphisms

DEFAULT_MAX_ORDER = 1000
COUNT_MAX_ORDER = 6000
MAX_ELEMENTS = 10**5


def default_max_order():
    """Group-order bound for full automorphism lists (``P2Q_MAX_ORDER`` overrides)."""
    env = os.environ.get("P2Q_MAX_ORDER")
    return int(env) if env else DEFAULT_MAX_ORDER


class AutGroup(FiniteGroup):
    """Aut(G) with product "apply x, then y".

    ``images[i]`` is automorphism ``i`` as an image array on ``base``.
    Elements are sorted by the tuple of images of ``base_gens``, which also
    serves as the lookup key. When the count exceeds the materialization
    bound only ``order`` is kept and ``materialized`` is False.
    """

    def __init__(self, base, images, base_gens, count=None):
        self.base = base
        self.base_gens = np.asarray(base_gens, dtype=np.int64)
        self.radix = base.order
        if images is None:
            self.images = None
            self.keys = None
            self._init_lazy(count, 0)
            return
        k = self.base_gens.size
        if k and float(self.radix) ** k >= 2.0**62:
            raise ResourceBoundError("automorphism keys overflow 64 bits for this generating set")
        self._weights = self.radix ** np.arange(k - 1, -1, -1, dtype=np.int64)
        keys = np.asarray(images)[:, self.base_gens] @ self._weights
        order = np.argsort(keys, kind="stable")
        self.images = np.ascontiguousarray(np.asarray(images, dtype=np.int64)[order])
        self.images.setflags(write=False)
        self.keys = keys[order]
        ident = int(np.searchsorted(self.keys, self.base_gens @ self._weights))
        self._init_lazy(len(self.keys), ident)

    @property
    def materialized(self):
        return self.images is not None

    def _need(self):
        if self.images is None:
            raise ResourceBoundError(
                f"Aut group of order {self.order} was counted, not materialized "
                f"(bound {MAX_ELEMENTS})"
            )

    def index_of(self, images):
        self._need()
        key = np.asarray(images, dtype=np.int64)[self.base_gens] @ self._weights
        i = int(np.searchsorted(self.keys, key))
        if i >= self.order or self.keys[i] != key or not np.array_equal(self.images[i], images):
            raise GroupError("not an element of this automorphism group")
        return i

    def mul(self, x, y):
        self._need()
        x, y = np.broadcast_arrays(np.asarray(x), np.asarray(y))
        first = self.images[x.ravel()][:, self.base_gens]
        second = self.images[y.ravel()[:, None], first]
        return np.searchsorted(self.keys, second @ self._weights).reshape(x.shape)

    @property
    def table(self):
        if self._table is None:
            self._need()
            if self.order > TABLE_MAX:
                raise ResourceBoundError(
                    f"order {self.order} exceeds the Cayley-table bound {TABLE_MAX}"
                )
            self._table = kernels.compose_table(self.images, self.base_gens, self.keys, self.radix)
        return self._table

    @property
    def closed(self):
        """Cayley table of Aut(G) under composition."""
        return self.table

    def fast_table(self):
        if self._table is not None or (self.materialized and self.order <= FAST_TABLE):
            return self.table
        return None

    def element(self, i):
        self._need()
        return Morphism(self.base, self.base, self.images[i])

    @property
    def elements(self):
        """All automorphisms as validated ``Morphism`` objects."""
        return [self.element(i) for i in range(self.order)]

    def label(self, i):
        self._need()
        return "[" + ",".join(str(int(v)) for v in self.images[i][self.base_gens]) + "]"


def brute_aut(G, *, max_order=None, count_only=False, max_elements=MAX_ELEMENTS):
    """Every automorphism of ``G``, by backtracking over generator images.

    Full element lists need ``|G| <= max_order`` (default 1000, or
    ``P2Q_MAX_ORDER``). ``count_only`` allows up to ``COUNT_MAX_ORDER`` and
    skips storage; so does exceeding ``max_elements`` automorphisms.
    """
    bound = default_max_order() if max_order is None else int(max_order)
    limit = max(bound, COUNT_MAX_ORDER) if count_only else bound
    if G.order > limit:
        kind = "counting" if count_only else "full enumeration"
        raise ResourceBoundError(f"group order {G.order} exceeds the {kind} bound {limit}")
    if count_only:
        return AutGroup(G, None, G.generators, count=count_automorphisms(G))
    images, gens = all_automorphism_images(G, cap=max_elements)
    if isinstance(images, int):
        return AutGroup(G, None, gens, count=images)
    return AutGroup(G, images, gens)


# holomorphs -----------------------------------------------------------------


class UnitsGroup(FiniteGroup):
    """(Z/n)^x with elements in increasing residue order."""

    def __init__(self, n):
        self.n = int(n)
        ar = np.arange(self.n)
        self.units = ar[np.gcd(ar, self.n) == 1] if self.n > 1 else np.array([0])
        self._index = np.full(self.n, -1, dtype=np.int64)
        self._index[self.units] = np.arange(self.units.size)
        self._init_lazy(self.units.size, int(self._index[1 % self.n]))

    def mul(self, x, y):
        return self._index[(self.units[np.asarray(x)] * self.units[np.asarray(y)]) % self.n]

    def label(self, i):
        return str(int(self.units[i]))


def _cyclic_generator(C):
    hits = np.nonzero(C.orders == C.order)[0]
    return int(hits[0]) if hits.size else None


def _powers(C, g, n):
    out = np.empty(n, dtype=np.int64)
    cur = C.identity
    for j in range(n):
        out[j] = cur
        cur = int(C.mul(cur, g))
    return out


def _elementary_rank2(C):
    n = C.order
    p = int(round(n**0.5))
    if p * p != n or p < 2 or not is_prime(p):
        return None
    if not (C.orders[np.arange(n) != C.identity] == p).all():
        return None
    e1 = int(np.nonzero(C.orders == p)[0][0])
    line = C.closure_mask([e1])
    e2 = int(np.nonzero(~line)[0][0])
    pw1, pw2 = _powers(C, e1, p), _powers(C, e2, p)
    return p, C.mul(pw1[:, None], pw2[None, :])


def holomorph(C, *, max_order=None):
    """C ⋊ Aut(C) under the natural action.

    Cyclic C uses the units mod |C|; C_p x C_p uses ``GL2Group(p)`` acting on
    column vectors. Any other abelian group falls back to ``brute_aut`` with
    α acting as α⁻¹ (the inverse turns "apply x, then y" into an action).
    """
    if not C.is_abelian():
        raise GroupError("holomorph is implemented for abelian groups")
    n = C.order
    g = _cyclic_generator(C)
    if g is not None:
        U = UnitsGroup(n)
        pw = _powers(C, g, n)
        img = np.empty((U.order, n), dtype=np.int64)
        img[:, pw] = pw[(U.units[:, None] * np.arange(n)[None, :]) % n]
        return semidirect(C, U, ActionSpec(U, C, img))
    rank2 = _elementary_rank2(C)
    if rank2 is not None:
        p, E = rank2
        GL = gl2p.GL2Group(p)
        a, b, c, d = (v[:, None] for v in GL.entries)
        x, y = np.divmod(np.arange(n), p)
        img = np.empty((GL.order, n), dtype=np.int64)
        img[:, E.ravel()] = E[(a * x + b * y) % p, (c * x + d * y) % p]
        return semidirect(C, GL, ActionSpec(GL, C, img))
    A = brute_aut(C, max_order=max_order)
    if not A.materialized:
        raise ResourceBoundError("Aut(C) is too large to materialize")
    inv = np.empty_like(A.images)
    rows = np.arange(A.order)[:, None]
    inv[rows, A.images] = np.arange(n)[None, :]
    return semidirect(C, A, ActionSpec(A, C, inv))


# predicted structures ---------------------------------------------------------


def _hol_cyclic(n):
    return holomorph(cyclic(n))


def _row9(p, q):
    """C_2 ⋉ (Hol(C_p) x Hol(C_p)): the involution swaps the factors, scaling by -λ and -λ⁻¹."""
    H1, H2 = _hol_cyclic(p), _hol_cyclic(p)
    D = direct_product(H1, H2)
    lam = zeta(p, q)
    c1, c2 = (-lam) % p, (-pow(lam, -1, p)) % p
    h1, h2 = D.split(np.arange(D.order))
    x1, u1 = H1.split(h1)
    x2, u2 = H2.split(h2)
    swap = D.pair(H1.pair((c1 * x2) % p, u2), H2.pair((c2 * x1) % p, u1))
    C2 = cyclic(2)
    return semidirect(D, C2, ActionSpec.from_generators(C2, D, {1: swap}))


def _row10(p, q):
    """(C_2 ⋉ C_{p²-1}) ⋉ (C_p x C_p): torus and Frobenius swap acting on column vectors."""
    Z = gl2p.singer_element(p, q)
    T = gl2p.torus_generator(Z)
    S = gl2p.MatrixGL2.swap(p)
    m = p * p - 1
    Cm, C2 = cyclic(m), cyclic(2)
    K = semidirect(Cm, C2, ActionSpec.from_generators(C2, Cm, {1: (np.arange(m) * p) % m}))
    V = direct_product(cyclic(p), cyclic(p))
    t_idx, s_idx = int(K.pair(1, 0)), int(K.pair(0, 1))
    rho = ActionSpec.from_generators(
        K, V, {t_idx: gl2p.column_action_images(T), s_idx: gl2p.column_action_images(S)}
    )
    return semidirect(V, K, rho)


def predicted_aut(spec):
    """The Aut column of ``spec``'s row as a concrete group.

    The q = 2 scalar row (completeness extension) gets the row-7 structure
    Hol(C_p x C_p) as a hypothesis to test, not a claim.
    """
    t, p, q = spec.type, spec.p, spec.q
    if t == 1:
        return direct_product(cyclic(p), direct_product(cyclic(p - 1), cyclic(q - 1)))
    if t == 2:
        return direct_product(cyclic(p), _hol_cyclic(q))
    if t == 3:
        return _hol_cyclic(q)
    if t == 4:
        return _hol_cyclic(p * p)
    if t == 5:
        return direct_product(gl2p.GL2Group(p), cyclic(q - 1))
    if t == 6:
        return direct_product(cyclic(p - 1), _hol_cyclic(p))
    if t == 7:
        return holomorph(direct_product(cyclic(p), cyclic(p)))
    if t == 8:
        return direct_product(_hol_cyclic(p), _hol_cyclic(p))
    if t == 9:
        return _row9(p, q)
    if t == 10:
        return _row10(p, q)
    return direct_product(_hol_cyclic(p), _hol_cyclic(q))


def predicted_order(spec):
    """Closed-form order of the predicted Aut(G)."""
    t, p, q = spec.type, spec.p, spec.q
    gl2 = (p * p - 1) * (p * p - p)
    return {
        1: p * (p - 1) * (q - 1),
        2: p * q * (q - 1),
        3: q * (q - 1),
        4: p**3 * (p - 1),
        5: gl2 * (q - 1),
        6: (p - 1) * p * (p - 1),
        7: p * p * gl2,
        8: p * p * (p - 1) ** 2,
        9: 2 * p * p * (p - 1) ** 2,
        10: 2 * (p * p - 1) * p * p,
        11: p * (p - 1) * q * (q - 1),
    }[t]


# verification -----------------------------------------------------------------

LEVELS = ("order", "isomorphism")


@dataclass
class VerificationReport:
    spec: GroupSpec
    level: str
    brute_order: int
    predicted_order: int
    passed: bool
    millis: float
    extension: bool = False
    witness: Morphism | None = field(default=None, repr=False)

    def to_json(self, timing=False):
        return {
            "spec": self.spec.to_json(),
            "brute_order": self.brute_order,
            "predicted_order": self.predicted_order,
            "level": self.level,
            "pass": self.passed,
            "millis": round(self.millis, 1) if timing else None,
            "extension": self.extension,
        }


def verify_table_row(spec, level="order", *, max_order=None):
    """Compare brute-force Aut(build(spec)) with ``predicted_aut(spec)``.

    ``order`` compares group orders (the brute side only counts);
    ``isomorphism`` also requires an explicit isomorphism. A mismatch is
    reported with ``passed=False``; bounds raise ``ResourceBoundError``.
    """
    if level not in LEVELS:
        raise ValueError(f"level must be one of {LEVELS}")
    start = time.perf_counter()
    G = catalog.build(spec)
    predicted = predicted_aut(spec)
    witness = None
    if level == "order":
        A = brute_aut(G, max_order=max_order, count_only=True)
        passed = A.order == predicted.order
    else:
        A = brute_aut(G, max_order=max_order)
        if not A.materialized:
            raise ResourceBoundError(
                f"{A.order} automorphisms exceed the materialization bound {MAX_ELEMENTS}"
            )
        passed, witness = is_isomorphic(A, predicted) if A.order == predicted.order else (False, None)
    return VerificationReport(
        spec=spec,
        level=level,
        brute_order=int(A.order),
        predicted_order=int(predicted.order),
        passed=bool(passed),
        millis=(time.perf_counter() - start) * 1000.0,
        extension=spec.is_extension,
        witness=witness,
    )
