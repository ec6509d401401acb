"""2x2 matrices over F_p, the quadratic extension F_{p^2}, and GL(2, p) as a group.

Matrices act on row vectors, ``h -> h @ M``, matching the exponent notation
``h^Z``. ``F_{p^2}`` is ``F_p[w]/(w^2 - r)`` with ``r`` the least quadratic
non-residue for odd ``p``, and ``F_2[w]/(w^2 + w + 1)`` for ``p = 2``.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .groups import FiniteGroup, GroupError
from .numtheory import is_prime


def _check_prime(p):
    if not is_prime(p):
        raise ValueError(f"{p} is not prime")


@dataclass(frozen=True)
class MatrixGL2:
    """``[[a, b], [c, d]]`` over F_p with non-zero determinant."""

    p: int
    a: int
    b: int
    c: int
    d: int

    def __post_init__(self):
        p = self.p
        for name in "abcd":
            object.__setattr__(self, name, getattr(self, name) % p)
        if self.det() == 0:
            raise ValueError(f"singular matrix {self.rows()} over F_{p}")

    @classmethod
    def of(cls, rows, p):
        (a, b), (c, d) = rows
        return cls(p, a, b, c, d)

    @classmethod
    def scalar(cls, x, p):
        return cls(p, x, 0, 0, x)

    @classmethod
    def diag(cls, x, y, p):
        return cls(p, x, 0, 0, y)

    @classmethod
    def identity(cls, p):
        return cls(p, 1, 0, 0, 1)

    @classmethod
    def swap(cls, p):
        return cls(p, 0, 1, 1, 0)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def det(self):
        return (self.a * self.d - self.b * self.c) % self.p

    def trace(self):
        return (self.a + self.d) % self.p

    def __matmul__(self, other):
        p = self.p
        return MatrixGL2(
            p,
            self.a * other.a + self.b * other.c,
            self.a * other.b + self.b * other.d,
            self.c * other.a + self.d * other.c,
            self.c * other.b + self.d * other.d,
        )

    def inverse(self):
        p = self.p
        di = pow(self.det(), -1, p)
        return MatrixGL2(p, self.d * di, -self.b * di, -self.c * di, self.a * di)

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = MatrixGL2.identity(self.p), self
        while k:
            if k & 1:
                result = result @ base
            base = base @ base
            k >>= 1
        return result

    def apply(self, x, y):
        """Row vector ``(x, y) @ M``."""
        p = self.p
        return (x * self.a + y * self.c) % p, (x * self.b + y * self.d) % p

    def is_scalar(self):
        return self.b == 0 and self.c == 0 and self.a == self.d


def mat_order(Z):
    """Least ``k >= 1`` with ``Z^k = I``."""
    ident = MatrixGL2.identity(Z.p)
    cur, k = Z, 1
    while cur != ident:
        cur = cur @ Z
        k += 1
    return k


# F_{p^2} ---------------------------------------------------------------------


@lru_cache(maxsize=None)
def _field_poly(p):
    """``(c1, c0)`` with ``w^2 = c1*w + c0``."""
    if p == 2:
        return 1, 1
    r = next(x for x in range(2, p) if pow(x, (p - 1) // 2, p) == p - 1)
    return 0, r


@dataclass(frozen=True, order=True)
class Fp2Element:
    """``u + v*w`` in F_{p^2}; ordering is lexicographic on ``(u, v)``."""

    p: int
    u: int
    v: int

    def __post_init__(self):
        object.__setattr__(self, "u", self.u % self.p)
        object.__setattr__(self, "v", self.v % self.p)

    def __add__(self, other):
        return Fp2Element(self.p, self.u + other.u, self.v + other.v)

    def __sub__(self, other):
        return Fp2Element(self.p, self.u - other.u, self.v - other.v)

    def __neg__(self):
        return Fp2Element(self.p, -self.u, -self.v)

    def __mul__(self, other):
        c1, c0 = _field_poly(self.p)
        uv = self.v * other.v
        return Fp2Element(
            self.p,
            self.u * other.u + uv * c0,
            self.u * other.v + self.v * other.u + uv * c1,
        )

    def __pow__(self, k):
        if k < 0:
            return self.inverse() ** (-k)
        result, base = Fp2Element(self.p, 1, 0), self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def is_zero(self):
        return self.u == 0 and self.v == 0

    def inverse(self):
        if self.is_zero():
            raise ZeroDivisionError("zero has no inverse in F_{p^2}")
        return self ** (self.p * self.p - 2)

    def frobenius(self):
        return self ** self.p

    def in_base_field(self):
        return self.v == 0

    def mult_order(self):
        one = Fp2Element(self.p, 1, 0)
        cur, k = self, 1
        while cur != one:
            cur = cur * self
            k += 1
        return k

    def __repr__(self):
        return f"({self.u}+{self.v}w mod {self.p})"


def fp2_elements(p):
    return [Fp2Element(p, u, v) for u in range(p) for v in range(p)]


def _sqrt_mod(x, p):
    x %= p
    for y in range(p):
        if y * y % p == x:
            return y
    return None


def eigenvalues(Z):
    """Roots of ``x^2 - tr(Z) x + det(Z)`` as two ``Fp2Element`` (with multiplicity).

    Roots lie in F_p (``v = 0``) when the polynomial splits, otherwise they
    are a Frobenius-conjugate pair in F_{p^2}.
    """
    p = Z.p
    tr, det = Z.trace(), Z.det()
    if p == 2:
        roots = [x for x in fp2_elements(2) if (x * x - Fp2Element(2, tr, 0) * x + Fp2Element(2, det, 0)).is_zero()]
        if len(roots) == 1:
            roots = roots * 2
        return tuple(sorted(roots))
    disc = (tr * tr - 4 * det) % p
    half = pow(2, -1, p)
    s = _sqrt_mod(disc, p)
    if s is not None:
        r1, r2 = sorted(((tr + s) * half % p, (tr - s) * half % p))
        return Fp2Element(p, r1, 0), Fp2Element(p, r2, 0)
    _, r = _field_poly(p)
    w = _sqrt_mod(disc * pow(r, -1, p), p)
    lam = Fp2Element(p, tr * half, w * half)
    return tuple(sorted((lam, lam.frobenius())))


def is_irreducible(Z):
    return not eigenvalues(Z)[0].in_base_field()


@lru_cache(maxsize=None)
def canonical_lambda(p, q):
    """The order-q element ``g^((p^2-1)/q)`` for the least generator ``g`` of F_{p^2}^x."""
    n = p * p - 1
    if n % q:
        raise ValueError(f"{q} does not divide p^2 - 1 = {n}")
    gen = next(x for x in fp2_elements(p) if not x.is_zero() and x.mult_order() == n)
    return gen ** (n // q)


def singer_element(p, q):
    """Companion matrix ``[[0, 1], [-1, t]]`` of order ``q`` with ``t = λ + λ^p``.

    ``λ`` is ``canonical_lambda(p, q)``. For ``q = 2`` (only meaningful for the
    order-2p² extension row) the order-2 element of the Singer cycle is ``-I``,
    which is returned as is.
    """
    _check_prime(p)
    _check_prime(q)
    if (p + 1) % q:
        raise ValueError(f"q = {q} does not divide p + 1 = {p + 1}")
    if q == 2:
        if p == 2:
            raise ValueError("p and q must be distinct")
        return MatrixGL2.scalar(-1, p)
    lam = canonical_lambda(p, q)
    t = lam + lam.frobenius()
    assert t.in_base_field()
    return MatrixGL2(p, 0, 1, -1, t.u)


def centralizer_in_gl2(Z):
    """The matrices ``u I + v Z`` (not both zero): the centralizer of an irreducible ``Z``."""
    if not is_irreducible(Z):
        raise ValueError("centralizer formula u + vZ needs an irreducible Z")
    p = Z.p
    out = []
    for u in range(p):
        for v in range(p):
            if u == 0 and v == 0:
                continue
            out.append(MatrixGL2(p, u + v * Z.a, v * Z.b, v * Z.c, u + v * Z.d))
    return out


def frobenius_conjugation_check(Z, S):
    """True iff ``S^-1 g S = g^p`` for every ``g`` in the centralizer of ``Z``."""
    Si = S.inverse()
    return all(Si @ g @ S == g ** Z.p for g in centralizer_in_gl2(Z))


def torus_generator(Z):
    """First element of ``centralizer_in_gl2(Z)`` of order ``p^2 - 1``."""
    n = Z.p * Z.p - 1
    return next(g for g in centralizer_in_gl2(Z) if mat_order(g) == n)


# GL(2, p) as a group --------------------------------------------------------


class GL2Group(FiniteGroup):
    """GL(2, p) with elements in lexicographic order of ``(a, b, c, d)``."""

    def __init__(self, p):
        _check_prime(p)
        self.p = p
        e = np.array(np.meshgrid(*[np.arange(p)] * 4, indexing="ij")).reshape(4, -1)
        keep = (e[0] * e[3] - e[1] * e[2]) % p != 0
        self.entries = e[:, keep]
        codes = ((self.entries[0] * p + self.entries[1]) * p + self.entries[2]) * p + self.entries[3]
        self._index = np.full(p ** 4, -1, dtype=np.int64)
        self._index[codes] = np.arange(codes.size)
        ident = int(self._index[(1 * p + 0) * p * p + 1])
        self._init_lazy(codes.size, ident)

    def index_of(self, M):
        p = self.p
        return int(self._index[((M.a * p + M.b) * p + M.c) * p + M.d])

    def matrix(self, i):
        a, b, c, d = (int(v) for v in self.entries[:, i])
        return MatrixGL2(self.p, a, b, c, d)

    def mul(self, x, y):
        p = self.p
        a1, b1, c1, d1 = self.entries[:, np.asarray(x)]
        a2, b2, c2, d2 = self.entries[:, np.asarray(y)]
        a = (a1 * a2 + b1 * c2) % p
        b = (a1 * b2 + b1 * d2) % p
        c = (c1 * a2 + d1 * c2) % p
        d = (c1 * b2 + d1 * d2) % p
        return self._index[((a * p + b) * p + c) * p + d]

    def label(self, i):
        return str(self.matrix(i).rows())


def vector_index(x, y, p):
    """Index of the vector ``(x, y)`` in ``C_p x C_p`` (first coordinate major)."""
    return (np.asarray(x) % p) * p + np.asarray(y) % p


def row_action_images(M):
    """Image array of ``h -> h @ M`` on ``C_p x C_p`` in H-major indexing."""
    p = M.p
    x, y = np.divmod(np.arange(p * p), p)
    return vector_index(x * M.a + y * M.c, x * M.b + y * M.d, p)


def column_action_images(M):
    """Image array of ``h -> M @ h`` (h as a column vector)."""
    p = M.p
    x, y = np.divmod(np.arange(p * p), p)
    return vector_index(M.a * x + M.b * y, M.c * x + M.d * y, p)


def matrix_of_images(images, p):
    """The matrix of a linear map of ``C_p x C_p`` given as a row-action image array."""
    r1 = divmod(int(images[vector_index(1, 0, p)]), p)
    r2 = divmod(int(images[vector_index(0, 1, p)]), p)
    M = MatrixGL2.of((r1, r2), p)
    if not np.array_equal(row_action_images(M), np.asarray(images)):
        raise GroupError("image array is not a linear map in the standard basis")
    return M
