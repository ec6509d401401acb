"""Slow, independent reference computations on plain Cayley tables.

Nothing here calls the library's algorithms: tables are lists of lists and
every answer comes from a direct scan or a naive closure. The tests use
these to derive expected values and to cross-check the fast paths.
"""
from __future__ import annotations

import itertools
from math import gcd


def as_lists(G):
    return [list(map(int, row)) for row in G.table]


def identity_of(T):
    n = len(T)
    return next(e for e in range(n) if all(T[e][x] == x for x in range(n)))


def element_orders(T):
    e = identity_of(T)
    out = []
    for x in range(len(T)):
        k, cur = 1, x
        while cur != e:
            cur = T[cur][x]
            k += 1
        out.append(k)
    return out


def order_census(T):
    census = {}
    for o in element_orders(T):
        census[o] = census.get(o, 0) + 1
    return dict(sorted(census.items()))


def center(T):
    n = len(T)
    return {z for z in range(n) if all(T[z][g] == T[g][z] for g in range(n))}


def closure(T, gens):
    e = identity_of(T)
    sub = {e}
    frontier = [e]
    while frontier:
        nxt = []
        for x in frontier:
            for g in gens:
                y = T[x][g]
                if y not in sub:
                    sub.add(y)
                    nxt.append(y)
        frontier = nxt
    return sub


def inverse(T, x):
    e = identity_of(T)
    return next(y for y in range(len(T)) if T[x][y] == e)


def derived_subgroup(T):
    n = len(T)
    inv = [inverse(T, x) for x in range(n)]
    comms = {T[T[inv[x]][inv[y]]][T[x][y]] for x in range(n) for y in range(n)}
    return closure(T, sorted(comms))


def is_normal(T, sub):
    n = len(T)
    inv = [inverse(T, x) for x in range(n)]
    return all(T[T[g][h]][inv[g]] in sub for g in range(n) for h in sub)


def is_associative(T):
    n = len(T)
    return all(T[T[a][b]][c] == T[a][T[b][c]] for a in range(n) for b in range(n) for c in range(n))


def is_latin(T):
    n = len(T)
    full = set(range(n))
    return all(set(row) == full for row in T) and all({T[i][j] for i in range(n)} == full for j in range(n))


def naive_generators(T):
    """First-fit generating set: scan elements by index, keep those outside the current subgroup."""
    e = identity_of(T)
    gens, sub = [], {e}
    for x in range(len(T)):
        if x not in sub:
            gens.append(x)
            sub = closure(T, gens)
    return gens


def _extend(T1, T2, gens, images):
    """The homomorphism with ``gens -> images`` as a dict, or None if it is ill defined."""
    e1, e2 = identity_of(T1), identity_of(T2)
    f = {e1: e2}
    frontier = [e1]
    while frontier:
        nxt = []
        for x in frontier:
            for g, y in zip(gens, images):
                xg, val = T1[x][g], T2[f[x]][y]
                if xg in f:
                    if f[xg] != val:
                        return None
                else:
                    f[xg] = val
                    nxt.append(xg)
        frontier = nxt
    n = len(T1)
    for a in range(n):
        for b in range(n):
            if f[T1[a][b]] != T2[f[a]][f[b]]:
                return None
    return f


def homomorphisms(T1, T2, allowed=None):
    gens = naive_generators(T1)
    pool = sorted(allowed) if allowed is not None else range(len(T2))
    out = []
    for images in itertools.product(pool, repeat=len(gens)):
        f = _extend(T1, T2, gens, images)
        if f is not None:
            out.append(f)
    return out


def automorphism_count(T):
    """|Aut| by trying every order-compatible image tuple of a first-fit generating set."""
    gens = naive_generators(T)
    orders = element_orders(T)
    pools = [[y for y in range(len(T)) if orders[y] == orders[g]] for g in gens]
    n = len(T)
    count = 0
    for images in itertools.product(*pools):
        f = _extend(T, T, gens, images)
        if f is not None and len(set(f.values())) == n:
            count += 1
    return count


def isomorphic(T1, T2):
    if len(T1) != len(T2) or order_census(T1) != order_census(T2):
        return False
    gens = naive_generators(T1)
    o1, o2 = element_orders(T1), element_orders(T2)
    pools = [[y for y in range(len(T2)) if o2[y] == o1[g]] for g in gens]
    for images in itertools.product(*pools):
        f = _extend(T1, T2, gens, images)
        if f is not None and len(set(f.values())) == len(T1):
            return True
    return False


def permutation_group_table(perms):
    """Cayley table of a list of permutations closed under composition (x*y = apply y, then x)."""
    index = {p: i for i, p in enumerate(perms)}
    return [[index[tuple(a[b[k]] for k in range(len(a)))] for b in perms] for a in perms]


def symmetric_group_table(n):
    return permutation_group_table(sorted(itertools.permutations(range(n))))


def alternating_group_table(n):
    def even(p):
        inv = sum(1 for i in range(n) for j in range(i + 1, n) if p[i] > p[j])
        return inv % 2 == 0

    return permutation_group_table(sorted(p for p in itertools.permutations(range(n)) if even(p)))


def units(n):
    return [u for u in range(1, n) if gcd(u, n) == 1]


def euler_phi(n):
    return len(units(n)) if n > 1 else 1


def gl2_order(p):
    return sum(
        1
        for a, b, c, d in itertools.product(range(p), repeat=4)
        if (a * d - b * c) % p
    )


def mult_order(u, n):
    k, cur = 1, u % n
    while cur != 1 % n:
        cur = cur * u % n
        k += 1
    return k
