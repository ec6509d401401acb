"""The eleven families of groups of order p²q: specs, builders, enumeration, classifier.

Concrete actions (ζ is the unit ``g^((p-1)/q)`` for the least primitive root
``g`` mod p):

====  ===========================  ===============================================
type  group                         action of the acting generator
====  ===========================  ===============================================
1     C_{p²} × C_q                  none
2     C_q ⋊ C_{p²}                  multiplication by a unit of order p mod q
3     C_q ⋊ C_{p²}                  multiplication by a unit of order p² mod q
4     C_{p²} ⋊ C_q                  multiplication by a unit of order q mod p²
5     C_p × C_p × C_q               none
6     C_p × (C_p ⋊ C_q)             ζ on the second factor
7     (C_p × C_p) ⋊ C_q             ζ·I
8     (C_p × C_p) ⋊ C_q             diag(ζ, ζ^s)
9     (C_p × C_p) ⋊ C_q             diag(ζ, ζ⁻¹)
10    (C_p × C_p) ⋊ C_q             singer_element(p, q)
11    C_p × (C_q ⋊ C_p)             multiplication by a unit of order p mod q
====  ===========================  ===============================================

In ``complete`` mode type 7 is also admitted for q = 2 (the action is -I),
which gives the generalized dihedral group of C_p × C_p. No other row
covers that group.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import gl2p
from .groups import (
    ActionSpec,
    GroupError,
    center_mask,
    cyclic,
    direct_product,
    is_normal,
    semidirect,
    sylow_mask,
)
from .numtheory import discrete_log, is_prime, p2q_factor, unit_of_order

STRICT = "strict-paper"
COMPLETE = "complete"
MODES = (STRICT, COMPLETE)

CONDITIONS = {
    1: "",
    2: "p | q-1",
    3: "p^2 | q-1",
    4: "q | p-1",
    5: "",
    6: "q | p-1",
    7: "2 < q | p-1",
    8: "3 < q | p-1",
    9: "2 < q | p-1",
    10: "2 < q | p+1",
    11: "p | q-1",
}

STRUCTURE = {
    1: "C_{p^2} x C_q",
    2: "C_{p^2} |x_p C_q",
    3: "C_{p^2} |x_1 C_q",
    4: "C_{p^2} x| C_q",
    5: "C_p x C_p x C_q",
    6: "C_p x (C_p x| C_q)",
    7: "(C_p x C_p) x|_S C_q",
    8: "(C_p x C_p) x|_D0 C_q",
    9: "(C_p x C_p) x|_D1 C_q",
    10: "(C_p x C_p) x|_C C_q",
    11: "C_p x (C_p |x C_q)",
}

AUT_STRUCTURE = {
    1: "C_p x C_{p-1} x C_{q-1}",
    2: "C_p x Hol(C_q)",
    3: "Hol(C_q)",
    4: "Hol(C_{p^2})",
    5: "GL(2,p) x C_{q-1}",
    6: "C_{p-1} x Hol(C_p)",
    7: "Hol(C_p x C_p)",
    8: "Hol(C_p) x Hol(C_p)",
    9: "C_2 |x (Hol(C_p) x Hol(C_p))",
    10: "(C_2 |x C_{p^2-1}) |x (C_p x C_p)",
    11: "Hol(C_p) x Hol(C_q)",
}


class ConditionError(ValueError):
    """A spec whose table-row condition fails (CLI exit code 2)."""


def _divides(a, b):
    return b % a == 0


def row_condition_failure(t, p, q, mode=COMPLETE):
    """``None`` if row ``t`` exists for ``(p, q)``, else a message naming what fails."""
    if t in (1, 5):
        return None
    if t in (2, 11):
        return None if _divides(p, q - 1) else f"p | q-1 fails: {p} does not divide {q - 1}"
    if t == 3:
        return None if _divides(p * p, q - 1) else f"p^2 | q-1 fails: {p * p} does not divide {q - 1}"
    if t in (4, 6, 7, 8, 9):
        if not _divides(q, p - 1):
            return f"q | p-1 fails: {q} does not divide {p - 1}"
        if t == 8 and q <= 3:
            return f"type 8 needs q > 3, got q = {q}"
        if t == 9 and q == 2:
            return "type 9 needs q > 2"
        if t == 7 and q == 2 and mode == STRICT:
            return "type 7 needs q > 2 in strict-paper mode (q = 2 is the completeness extension)"
        return None
    if t == 10:
        if not _divides(q, p + 1):
            return f"q | p+1 fails: {q} does not divide {p + 1}"
        if q == 2:
            return "type 10 needs q > 2"
        return None
    return f"unknown type {t}"


def canonical_s(s, q):
    """Representative of ``{s, s^-1 mod q}``: the smaller residue in 2..q-2."""
    s %= q
    if s in (0, 1, q - 1):
        raise ConditionError(f"s = {s} is excluded (s must avoid 0, 1, -1 mod {q})")
    return min(s, pow(s, -1, q))


@dataclass(frozen=True)
class GroupSpec:
    """One row of the table for concrete primes; ``s`` only for type 8.

    ``s`` may be any admissible residue; ``canonical()`` normalizes it.
    Type 7 with q = 2 is accepted as the completeness extension.
    """

    type: int
    p: int
    q: int
    s: int | None = None

    def __post_init__(self):
        t, p, q = self.type, self.p, self.q
        if t not in range(1, 12):
            raise ConditionError(f"type must be 1..11, got {t}")
        if not (is_prime(p) and is_prime(q)):
            raise ConditionError(f"p = {p} and q = {q} must both be prime")
        if p == q:
            raise ConditionError("p and q must be distinct")
        msg = row_condition_failure(t, p, q, COMPLETE)
        if msg:
            raise ConditionError(f"type {t}, p={p}, q={q}: {msg}")
        if t == 8:
            if self.s is None:
                raise ConditionError("type 8 needs the parameter s")
            object.__setattr__(self, "s", int(self.s) % q)
            canonical_s(self.s, q)
        elif self.s is not None:
            raise ConditionError("s is only meaningful for type 8")

    @property
    def order(self):
        return self.p * self.p * self.q

    @property
    def is_extension(self):
        """True for the q = 2 scalar row, which the classification table leaves out."""
        return self.type == 7 and self.q == 2

    def check_mode(self, mode):
        if mode == STRICT and self.is_extension:
            raise ConditionError(
                "type 7 with q = 2 is outside the strict-paper table (use complete mode)"
            )

    def canonical(self):
        if self.type != 8:
            return self
        return GroupSpec(8, self.p, self.q, canonical_s(self.s, self.q))

    def to_json(self):
        d = {"type": self.type, "p": self.p, "q": self.q}
        if self.s is not None:
            d["s"] = self.s
        return d

    @classmethod
    def from_json(cls, d):
        try:
            return cls(int(d["type"]), int(d["p"]), int(d["q"]), None if d.get("s") is None else int(d["s"]))
        except (KeyError, TypeError) as exc:
            raise ConditionError(f"malformed GroupSpec JSON: {exc}") from None

    def sort_key(self):
        return (self.p, self.q, self.type, self.s or 0)

    def __str__(self):
        extra = f", s={self.s}" if self.s is not None else ""
        return f"type {self.type} (p={self.p}, q={self.q}{extra})"


# builders -------------------------------------------------------------------


def zeta(p, q):
    """The fixed order-q unit mod p used by types 6-9."""
    return unit_of_order(q, p)


def action_matrix(spec):
    """Matrix of the generator of C_q on C_p x C_p for types 7-10."""
    p, q = spec.p, spec.q
    if spec.type == 10:
        return gl2p.singer_element(p, q)
    z = zeta(p, q)
    if spec.type == 7:
        return gl2p.MatrixGL2.scalar(z, p)
    if spec.type == 8:
        return gl2p.MatrixGL2.diag(z, pow(z, spec.s, p), p)
    if spec.type == 9:
        return gl2p.MatrixGL2.diag(z, pow(z, -1, p), p)
    raise ValueError(f"type {spec.type} has no matrix action")


def _mult_action(K, H, unit):
    """C_m acting on C_n with the generator 1 multiplying by ``unit``."""
    return ActionSpec.from_generators(K, H, {1: (np.arange(H.order) * unit) % H.order})


def build(spec, mode=COMPLETE):
    """A concrete group of order p²q realizing ``spec``.

    Semidirect rows come back as ``SemidirectProduct`` with the normal Sylow
    subgroup as ``H`` and a cyclic ``K`` whose generator is element 1.
    """
    spec.check_mode(mode)
    t, p, q = spec.type, spec.p, spec.q
    if t == 1:
        return direct_product(cyclic(p * p), cyclic(q))
    if t == 5:
        return direct_product(direct_product(cyclic(p), cyclic(p)), cyclic(q))
    if t in (2, 3):
        H, K = cyclic(q), cyclic(p * p)
        return semidirect(H, K, _mult_action(K, H, unit_of_order(p if t == 2 else p * p, q)))
    if t == 4:
        H, K = cyclic(p * p), cyclic(q)
        return semidirect(H, K, _mult_action(K, H, unit_of_order(q, p * p)))
    if t == 6:
        H, K = cyclic(p), cyclic(q)
        return direct_product(cyclic(p), semidirect(H, K, _mult_action(K, H, zeta(p, q))))
    if t == 11:
        H, K = cyclic(q), cyclic(p)
        return direct_product(cyclic(p), semidirect(H, K, _mult_action(K, H, unit_of_order(p, q))))
    H = direct_product(cyclic(p), cyclic(p))
    K = cyclic(q)
    Z = action_matrix(spec)
    return semidirect(H, K, ActionSpec.from_generators(K, H, {1: gl2p.row_action_images(Z)}))


def enumerate_specs(p, q, mode=COMPLETE):
    """One spec per isomorphism class, ascending by type and then canonical s."""
    if mode not in MODES:
        raise ConditionError(f"mode must be one of {MODES}")
    if not (is_prime(p) and is_prime(q)):
        raise ConditionError(f"p = {p} and q = {q} must both be prime")
    if p == q:
        raise ConditionError("p and q must be distinct")
    out = []
    for t in range(1, 12):
        if row_condition_failure(t, p, q, mode):
            continue
        if t == 8:
            out.extend(GroupSpec(8, p, q, s) for s in range(2, q - 1) if canonical_s(s, q) == s)
        else:
            out.append(GroupSpec(t, p, q))
    return out


# classifier -----------------------------------------------------------------


def _first_of_order(G, mask, order):
    idx = np.nonzero(mask & (G.orders == order))[0]
    return int(idx[0])


def _conj(G, g, x):
    """g x g^-1."""
    return G.mul(G.mul(g, x), G.inverses[g])


def _sylow_matrix(G, P, z, p):
    """Matrix of ``h -> z h z^-1`` on the elementary abelian ``P`` in a basis of ``P``."""
    e1 = _first_of_order(G, P, p)
    line = G.closure_mask([e1])
    e2 = _first_of_order(G, P & ~line, p)
    coords = {}
    a_pow = G.identity
    for a in range(p):
        x = a_pow
        for b in range(p):
            coords[int(x)] = (a, b)
            x = int(G.mul(x, e2))
        a_pow = int(G.mul(a_pow, e1))
    r1 = coords[int(_conj(G, z, e1))]
    r2 = coords[int(_conj(G, z, e2))]
    return gl2p.MatrixGL2.of((r1, r2), p)


def classify(G):
    """The spec (canonical s for type 8) whose build is isomorphic to ``G``.

    Decision tree: abelian or not; which Sylow subgroup is normal; whether
    the Sylow p-subgroup is cyclic; then the eigenvalue pattern of the
    C_q-action on C_p x C_p (scalar, eigenvalue 1, split with det 1, split
    otherwise, irreducible), or the order of the C_{p²}-action on C_q.
    """
    pq = p2q_factor(G.order)
    if pq is None:
        raise ConditionError(f"order {G.order} is not p^2 q for distinct primes")
    p, q = pq
    P = sylow_mask(G, p)
    Q = sylow_mask(G, q)
    p_cyclic = bool((G.orders[P] == p * p).any())
    if center_mask(G).all():
        return GroupSpec(1 if p_cyclic else 5, p, q)
    if is_normal(G, P):
        if p_cyclic:
            return GroupSpec(4, p, q)
        z = _first_of_order(G, Q, q)
        Z = _sylow_matrix(G, P, z, p)
        if Z.is_scalar():
            return GroupSpec(7, p, q)
        ev = gl2p.eigenvalues(Z)
        if not ev[0].in_base_field():
            return GroupSpec(10, p, q)
        lam, mu = ev[0].u, ev[1].u
        if 1 in (lam, mu):
            return GroupSpec(6, p, q)
        if Z.det() == 1:
            return GroupSpec(9, p, q)
        base = zeta(p, q)
        a, b = discrete_log(lam, base, p), discrete_log(mu, base, p)
        return GroupSpec(8, p, q, canonical_s(b * pow(a, -1, q), q))
    if is_normal(G, Q):
        if not p_cyclic:
            return GroupSpec(11, p, q)
        x = _first_of_order(G, P, p * p)
        z = _first_of_order(G, Q, q)
        image = int(_conj(G, x, z))
        # x z x^-1 = z^u; the action has order p or p^2
        u, cur = 1, z
        while cur != image:
            cur = int(G.mul(cur, z))
            u += 1
        action_order = 1
        acc = u % q
        while acc != 1:
            acc = acc * u % q
            action_order += 1
        return GroupSpec(3 if action_order == p * p else 2, p, q)
    raise GroupError("neither Sylow subgroup is normal; not a group of order p^2 q")
