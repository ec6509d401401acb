"""Automorphisms of H ⋊ K and H × K as 2x2 "matrices" of maps.

For G = H ⋊ K with H abelian and normal (and characteristic), every
automorphism has the lower-triangular form ``[[a, 0], [b, d]]``:

    (h, k) -> (a(h) · b(k), d(k))

where a ∈ Aut(H), d ∈ Aut(K) and b: K -> H satisfy

    crossed law    b(xy) = b(x) · φ_{d(x)}(b(y))
    compatibility  a(φ_k(h)) = φ_{d(k)}(a(h))

with φ the action (``SemidirectProduct`` convention: φ_k(h) = k h k⁻¹).
For cyclic K = <z>, b is fixed by b0 = b(z), via
b(z^j) = b0 · Y(b0) ··· Y^{j-1}(b0) with Y = φ_{d(z)}.

For a direct product H × K the full matrix ``[[a, c], [b, d]]`` applies,
with b: K -> Z(H) and c: H -> Z(K) homomorphisms.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import catalog
from .aut import brute_aut
from .gl2p import MatrixGL2
from .groups import (
    DirectProduct,
    GroupError,
    Morphism,
    ResourceBoundError,
    SemidirectProduct,
    center_mask,
)
from .search import build_frames

SEMIDIRECT_TYPES = (2, 3, 4, 7, 8, 9, 10)
DIRECT_TYPES = (1, 5, 6, 11)
QUADRUPLE_CAP = 10**6


@dataclass(frozen=True, eq=False)
class SemidirectContext:
    """G = H ⋊ K with K cyclic, generated by ``z``."""

    G: SemidirectProduct
    z: int

    def __post_init__(self):
        if not isinstance(self.G, SemidirectProduct):
            raise GroupError("a semidirect context needs a SemidirectProduct")
        if self.K.element_order(self.z) != self.K.order:
            raise GroupError(f"z = {self.z} does not generate K")
        if not self.H.is_abelian():
            raise GroupError("the triangular form is implemented for abelian H")

    @property
    def H(self):
        return self.G.H

    @property
    def K(self):
        return self.G.K

    @property
    def act(self):
        return self.G.act.images

    @cached_property
    def z_powers(self):
        """``z_powers[j]`` is z^j, for j = 0..|K|-1."""
        K = self.K
        out = np.empty(K.order, dtype=np.int64)
        cur = K.identity
        for j in range(K.order):
            out[j] = cur
            cur = int(K.mul(cur, self.z))
        return out

    @cached_property
    def z_log(self):
        """Inverse of ``z_powers``: the exponent of each element of K."""
        out = np.empty(self.K.order, dtype=np.int64)
        out[self.z_powers] = np.arange(self.K.order)
        return out

    def embed_h(self, h):
        return self.G.pair(h, self.K.identity)

    def embed_k(self, k):
        return self.G.pair(self.H.identity, k)


def semidirect_context(spec):
    """Context for a catalog row built as H ⋊ C_m (K's generator is element 1)."""
    if spec.type not in SEMIDIRECT_TYPES and not spec.is_extension:
        raise GroupError(f"type {spec.type} is not built as a semidirect product")
    return SemidirectContext(catalog.build(spec), 1)


def _as_images(m):
    return m.images if isinstance(m, Morphism) else np.asarray(m, dtype=np.int64)


def d_exponent(d, ctx):
    """The i with d(z) = z^i (discrete log in <z>)."""
    return int(ctx.z_log[_as_images(d)[ctx.z]])


# triangular automorphisms -------------------------------------------------------


@dataclass(frozen=True, eq=False)
class TriangularAut:
    """``(a, b, d)`` on ``ctx``: a ∈ Aut(H), d ∈ Aut(K), b an array over K.

    Construction checks the crossed law on all pairs and the compatibility
    law on the generator z; failures name a witness.
    """

    a: Morphism
    b: np.ndarray
    d: Morphism
    ctx: SemidirectContext

    def __post_init__(self):
        ctx = self.ctx
        H, K = ctx.H, ctx.K
        if self.a.source is not H or self.a.target is not H or not self.a.is_bijective:
            raise GroupError("a must be an automorphism of H")
        if self.d.source is not K or self.d.target is not K or not self.d.is_bijective:
            raise GroupError("d must be an automorphism of K")
        b = np.array(self.b, dtype=np.int64)
        if b.shape != (K.order,):
            raise GroupError(f"b needs one value per element of K, got shape {b.shape}")
        b.setflags(write=False)
        object.__setattr__(self, "b", b)
        bad = crossed_law_violation(b, self.d, ctx)
        if bad is not None:
            raise GroupError(f"crossed law fails at (x, y) = {bad}")
        bad = compatibility_violation(self.a, self.d, ctx)
        if bad is not None:
            raise GroupError(f"compatibility fails at h = {bad}")

    @property
    def b0(self):
        return int(self.b[self.ctx.z])

    @classmethod
    def identity(cls, ctx):
        return cls(
            Morphism.identity(ctx.H),
            np.full(ctx.K.order, ctx.H.identity),
            Morphism.identity(ctx.K),
            ctx,
        )

    def then(self, other):
        """Apply ``self`` first, then ``other``: the triangular matrix product."""
        H = self.ctx.H
        d1 = self.d.images
        a2 = other.a.images
        b = H.mul(a2[self.b], other.b[d1])
        return TriangularAut(self.a.then(other.a), b, self.d.then(other.d), self.ctx)

    def to_json(self):
        return {
            "a": self.a.images.tolist(),
            "d": self.d.images.tolist(),
            "b": self.b.tolist(),
        }


def crossed_law_violation(b, d, ctx):
    """First ``(x, y)`` with b(xy) != b(x) · φ_{d(x)}(b(y)), or None."""
    K, H = ctx.K, ctx.H
    d = _as_images(d)
    b = np.asarray(b, dtype=np.int64)
    ar = np.arange(K.order)
    lhs = b[K.mul(ar[:, None], ar[None, :])]
    rhs = H.mul(b[:, None], ctx.act[d[:, None], b[None, :]])
    bad = np.argwhere(lhs != rhs)
    return None if bad.size == 0 else tuple(int(v) for v in bad[0])


def compatibility_violation(a, d, ctx):
    """First h with a(φ_z(h)) != φ_{d(z)}(a(h)), or None; z generates K."""
    a, d = _as_images(a), _as_images(d)
    lhs = a[ctx.act[ctx.z]]
    rhs = ctx.act[d[ctx.z]][a]
    bad = np.nonzero(lhs != rhs)[0]
    return None if bad.size == 0 else int(bad[0])


def fixed_points(Y, H):
    """Elements of H fixed by the automorphism ``Y`` (an image array)."""
    return np.nonzero(_as_images(Y) == np.arange(H.order))[0]


def _geometric_run(b0, Y, H, m):
    """``out[j] = b0 · Y(b0) ··· Y^{j-1}(b0)`` for j = 0..m."""
    out = np.empty(m + 1, dtype=np.int64)
    acc, term = H.identity, int(b0)
    for j in range(m + 1):
        out[j] = acc
        acc = int(H.mul(acc, term))
        term = int(Y[term])
    return out


def b_from_b0(b0, ctx, d):
    """The unique crossed map with b(z) = b0, for the twist Y = φ_{d(z)}.

    Y must fix only the identity of H. The value at z^|K| must come back to
    the identity (the geometric-sum identity); a violation raises.
    """
    d = _as_images(d)
    H, m = ctx.H, ctx.K.order
    Y = ctx.act[d[ctx.z]]
    fixed = fixed_points(Y, H)
    if fixed.size > 1:
        raise GroupError(
            f"Y = φ_d(z) fixes {fixed.size} elements (e.g. {int(fixed[fixed != H.identity][0])}); "
            "b is not determined uniquely"
        )
    run = _geometric_run(b0, Y, H, m)
    if run[m] != H.identity:
        raise GroupError(f"b0 = {b0}: b(z^{m}) = {int(run[m])} is not the identity")
    b = np.empty(m, dtype=np.int64)
    b[ctx.z_powers] = run[:m]
    return b


def geometric_sum_is_zero(Y, q):
    """Whether 1 + Y + ... + Y^{q-1} annihilates everything.

    ``Y`` is a ``MatrixGL2`` (the sum is taken as a matrix over F_p) or an
    automorphism ``Morphism`` of an abelian group (the sum is the map
    h -> h · Y(h) ··· Y^{q-1}(h)). ``Y^q`` must be the identity.
    """
    if isinstance(Y, MatrixGL2):
        if Y**q != MatrixGL2.identity(Y.p):
            raise ValueError(f"Y^{q} is not the identity")
        acc = np.zeros((2, 2), dtype=np.int64)
        cur = np.eye(2, dtype=np.int64)
        M = np.array(Y.rows(), dtype=np.int64)
        for _ in range(q):
            acc = (acc + cur) % Y.p
            cur = (cur @ M) % Y.p
        return not acc.any()
    G = Y.source
    img = Y.images
    ar = np.arange(G.order)
    cur = ar.copy()
    for _ in range(q):
        cur = img[cur]
    if not np.array_equal(cur, ar):
        raise ValueError(f"Y^{q} is not the identity")
    acc = np.full(G.order, G.identity)
    term = ar.copy()
    for _ in range(q):
        acc = G.mul(acc, term)
        term = img[term]
    return bool((acc == G.identity).all())


def triangular_to_aut(t):
    """The automorphism (h, k) -> (a(h) · b(k), d(k)) of G."""
    ctx = t.ctx
    G, H = ctx.G, ctx.H
    h, k = G.split(np.arange(G.order))
    images = G.pair(H.mul(t.a.images[h], t.b[k]), t.d.images[k])
    try:
        return Morphism(G, G, images)
    except GroupError as exc:
        raise GroupError(f"triple (a, b, d) does not induce an automorphism: {exc}") from None


def decompose_aut(phi, ctx):
    """The triple (a, b, d) with ``triangular_to_aut`` equal to ``phi``.

    a is phi restricted to H, and phi(k) = (b(k), d(k)) for k in the
    transversal {e} x K. Raises with a witness h when phi moves H off itself.
    """
    G, H, K = ctx.G, ctx.H, ctx.K
    img = _as_images(phi)
    hk = G.split(img[ctx.embed_h(np.arange(H.order))])
    off = np.nonzero(hk[1] != K.identity)[0]
    if off.size:
        h = int(off[0])
        raise GroupError(f"phi does not preserve H: h = {h} maps to {int(img[ctx.embed_h(h)])}")
    bk = G.split(img[ctx.embed_k(np.arange(K.order))])
    t = TriangularAut(Morphism(H, H, hk[0]), bk[0], Morphism(K, K, bk[1]), ctx)
    if not np.array_equal(triangular_to_aut(t).images, img):
        raise GroupError("phi is not of triangular form")
    return t


_BATCH = 4096


def decompose_all(images, ctx):
    """``decompose_aut`` over the rows of ``images`` at once.

    Returns arrays ``(a, b, d)`` of shapes (m, |H|), (m, |K|), (m, |K|) after
    the same checks as the single version (H invariance, crossed law,
    compatibility, exact round trip), applied row-wise in batches.
    """
    G, H, K = ctx.G, ctx.H, ctx.K
    images = np.asarray(images, dtype=np.int64)
    hs, ks = np.arange(H.order), np.arange(K.order)
    g_h, g_k = G.split(np.arange(G.order))
    kk = K.mul(ks[:, None], ks[None, :])
    out = []
    for lo in range(0, images.shape[0], _BATCH):
        img = images[lo : lo + _BATCH]
        ah, ak = G.split(img[:, ctx.embed_h(hs)])
        bad = np.argwhere(ak != K.identity)
        if bad.size:
            r, h = bad[0]
            raise GroupError(f"automorphism {lo + r} does not preserve H: h = {h} leaves it")
        b, d = G.split(img[:, ctx.embed_k(ks)])
        if (np.sort(d, axis=1) != ks).any():
            raise GroupError("d is not bijective on K")
        # crossed law b(xy) = b(x) · φ_{d(x)}(b(y)) for every row and pair
        lhs = b[:, kk]
        rhs = H.mul(b[:, :, None], ctx.act[d[:, :, None], b[:, None, :]])
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            r, x, y = bad[0]
            raise GroupError(f"automorphism {lo + r}: crossed law fails at (x, y) = ({x}, {y})")
        lhs = ah[:, ctx.act[ctx.z]]
        rows = np.arange(ah.shape[0])[:, None]
        rhs = ctx.act[d[:, ctx.z]][rows, ah]
        bad = np.argwhere(lhs != rhs)
        if bad.size:
            r, h = bad[0]
            raise GroupError(f"automorphism {lo + r}: compatibility fails at h = {h}")
        again = G.pair(H.mul(ah[:, g_h], b[:, g_k]), d[:, g_k])
        bad = np.argwhere(again != img)
        if bad.size:
            r, x = bad[0]
            raise GroupError(f"automorphism {lo + r} is not of triangular form at g = {x}")
        out.append((ah, b, d))
    return tuple(np.concatenate(parts) for parts in zip(*out))


def valid_b_maps(ctx, d):
    """All crossed maps for a given d, one per admissible b0, as an array (count, |K|).

    b0 runs over H; b0 is admissible when the run returns to the identity
    at z^|K|. The crossed law is rechecked on every resulting map.
    """
    d = _as_images(d)
    H, m = ctx.H, ctx.K.order
    Y = ctx.act[d[ctx.z]]
    out = []
    for b0 in range(H.order):
        run = _geometric_run(b0, Y, H, m)
        if run[m] != H.identity:
            continue
        b = np.empty(m, dtype=np.int64)
        b[ctx.z_powers] = run[:m]
        if crossed_law_violation(b, d, ctx) is None:
            out.append(b)
    return np.array(out, dtype=np.int64).reshape(len(out), m)


def compatible_a(ctx, d, aut_h=None):
    """Rows of Aut(H) (as an image array) compatible with d."""
    d = _as_images(d)
    A = (aut_h or brute_aut(ctx.H)).images
    lhs = A[:, ctx.act[ctx.z]]
    rhs = ctx.act[d[ctx.z]][A]
    return A[(lhs == rhs).all(axis=1)]


def count_triangular(ctx):
    """Number of valid (a, b, d) triples: sum over d of #a(d) · #b(d)."""
    aut_h, aut_k = brute_aut(ctx.H), brute_aut(ctx.K)
    total = 0
    for d in aut_k.images:
        na = compatible_a(ctx, d, aut_h).shape[0]
        if na:
            total += na * valid_b_maps(ctx, d).shape[0]
    return total


def s_subgroup(ctx):
    """S = {d ∈ Aut(K) : k⁻¹ d(k) ∈ C_K(H) for all k}, as Morphisms of K."""
    K, H = ctx.K, ctx.H
    kernel = (ctx.act == np.arange(H.order)).all(axis=1)
    ar = np.arange(K.order)
    out = []
    for d in brute_aut(K).images:
        if kernel[K.mul(K.inverses[ar], d[ar])].all():
            out.append(Morphism(K, K, d))
    return out


# direct products -------------------------------------------------------------------


@dataclass(frozen=True, eq=False)
class DirectAutMatrix:
    """``[[a, c], [b, d]]`` on H x K: (h, k) -> (a(h) · b(k), c(h) · d(k))."""

    a: Morphism
    b: Morphism
    c: Morphism
    d: Morphism
    G: DirectProduct

    def to_aut(self):
        G, H, K = self.G, self.G.H, self.G.K
        h, k = G.split(np.arange(G.order))
        images = G.pair(
            H.mul(self.a.images[h], self.b.images[k]),
            K.mul(self.c.images[h], self.d.images[k]),
        )
        return Morphism(G, G, images)


def direct_aut_matrix(phi, G):
    """Split an automorphism of G = H x K into (a, b, c, d).

    Raises when a or d is not bijective or b, c miss the centers, which is
    how a common direct factor of H and K shows up.
    """
    if not isinstance(G, DirectProduct):
        raise GroupError("direct_aut_matrix needs a DirectProduct")
    H, K = G.H, G.K
    img = _as_images(phi)
    ah, ch = G.split(img[G.pair(np.arange(H.order), K.identity)])
    bk, dk = G.split(img[G.pair(H.identity, np.arange(K.order))])
    if np.unique(ah).size != H.order or np.unique(dk).size != K.order:
        raise GroupError("phi is not decomposable: a or d is not bijective")
    zh, zk = center_mask(H), center_mask(K)
    if not zh[bk].all() or not zk[ch].all():
        raise GroupError("phi is not decomposable: b or c leaves the center")
    m = DirectAutMatrix(
        Morphism(H, H, ah), Morphism(K, H, bk), Morphism(H, K, ch), Morphism(K, K, dk), G
    )
    if not np.array_equal(m.to_aut().images, img):
        raise GroupError("phi is not of matrix form")
    return m


def homomorphisms_into(src, tgt, allowed):
    """All homomorphisms src -> tgt with values in the subgroup mask ``allowed``.

    Generator images are enumerated over ``allowed`` and extended along a
    BFS tree of the generators; every Cayley-graph edge is checked.
    """
    gens = src.generators
    if gens.size == 0:
        return [np.array([tgt.identity], dtype=np.int64)]
    frame = build_frames(src, gens)[-1]
    pool = np.nonzero(allowed)[0]
    out = []
    for choice in itertools.product(pool, repeat=gens.size):
        y = np.array(choice, dtype=np.int64)
        local = np.empty(frame.nodes.size, dtype=np.int64)
        local[0] = tgt.identity
        for t in range(1, frame.nodes.size):
            local[t] = tgt.mul(local[frame.ppos[t]], y[frame.pgen[t]])
        if np.array_equal(local[frame.rloc], tgt.mul(local[:, None], y[None, :])):
            img = np.empty(src.order, dtype=np.int64)
            img[frame.nodes] = local
            out.append(img)
    return out


def count_direct_quadruples(G):
    """``(candidates, bijective)``: all (a, b, c, d) and those inducing automorphisms."""
    H, K = G.H, G.K
    aut_h, aut_k = brute_aut(H), brute_aut(K)
    homs_b = homomorphisms_into(K, H, center_mask(H))
    homs_c = homomorphisms_into(H, K, center_mask(K))
    candidates = aut_h.order * aut_k.order * len(homs_b) * len(homs_c)
    if candidates > QUADRUPLE_CAP:
        raise ResourceBoundError(f"{candidates} quadruples exceed the cap {QUADRUPLE_CAP}")
    h, k = G.split(np.arange(G.order))
    good = 0
    for b in homs_b:
        for c in homs_c:
            # first coordinates for all a at once, second for all d at once
            first = H.mul(aut_h.images[:, h], b[k][None, :])
            second = K.mul(c[h][None, :], aut_k.images[:, k])
            for row in first:
                img = G.pair(row[None, :], second)
                good += sum(np.unique(r).size == G.order for r in img)
    return candidates, good
