"""Backtracking over generator images.

Both isomorphism testing and automorphism enumeration map the generating
set ``g_1..g_k`` of a domain group to candidate tuples ``y_1..y_k`` in a
codomain. Candidates must match element order and class size; pairs must
match a few short relator orders; each prefix ``y_1..y_j`` is then checked
by extending it along a BFS spanning tree of ``<g_1..g_j>`` and testing
every Cayley-graph edge (the batched kernel). A prefix survives exactly when
it defines an injective homomorphism on that subgroup.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from . import kernels


@dataclass
class Frame:
    """BFS spanning tree of ``<g_1..g_j>`` in local coordinates.

    ``nodes[0]`` is the identity; node ``t`` is reached from ``ppos[t]`` by
    generator ``pgen[t]``. ``rloc[t, i]`` is the local position of
    ``nodes[t] * g_i``. ``layers`` are the BFS levels as ``(lo, hi)`` slices.
    """

    nodes: np.ndarray
    ppos: np.ndarray
    pgen: np.ndarray
    rloc: np.ndarray
    layers: list

    @cached_property
    def checks(self):
        """Non-tree edges ``(t, i)`` grouped by the first layer at which both ends are known.

        Entry 0 covers the identity node alone; entry ``L`` pairs with ``layers[L - 1]``.
        """
        size = self.ppos.size
        level = np.zeros(size, dtype=np.int64)
        for L, (lo, hi) in enumerate(self.layers, 1):
            level[lo:hi] = L
        t, i = np.nonzero(np.ones_like(self.rloc, dtype=bool))
        dst = self.rloc[t, i]
        tree = (self.ppos[dst] == t) & (self.pgen[dst] == i) & (dst != 0)
        t, i, dst = t[~tree], i[~tree], dst[~tree]
        ready = np.maximum(level[t], level[dst])
        order = np.argsort(ready, kind="stable")
        t, i, ready = t[order], i[order], ready[order]
        cuts = np.searchsorted(ready, np.arange(len(self.layers) + 2))
        return [(t[a:b], i[a:b]) for a, b in zip(cuts[:-1], cuts[1:])]


def build_frames(G, gens):
    n = G.order
    ar = np.arange(n)
    right = np.stack([G.mul(ar, g) for g in gens], axis=1) if len(gens) else np.empty((n, 0), np.int64)
    frames = []
    for j in range(1, len(gens) + 1):
        pos = np.full(n, -1, dtype=np.int64)
        nodes = [np.array([G.identity], dtype=np.int64)]
        ppos = [np.zeros(1, dtype=np.int64)]
        pgen = [np.zeros(1, dtype=np.int64)]
        pos[G.identity] = 0
        count = 1
        frontier = nodes[0]
        layers = []
        while frontier.size:
            cand = right[frontier, :j].ravel()
            vals, first = np.unique(cand, return_index=True)
            fresh = pos[vals] < 0
            vals, first = vals[fresh], first[fresh]
            order = np.argsort(first, kind="stable")
            vals, first = vals[order], first[order]
            if vals.size == 0:
                break
            pos[vals] = np.arange(count, count + vals.size)
            layers.append((count, count + vals.size))
            count += vals.size
            nodes.append(vals)
            ppos.append(pos[frontier[first // j]])
            pgen.append(first % j)
            frontier = vals
        nodes = np.concatenate(nodes)
        frames.append(
            Frame(
                nodes=nodes,
                ppos=np.concatenate(ppos),
                pgen=np.concatenate(pgen).astype(np.int64),
                rloc=np.ascontiguousarray(pos[right[nodes, :j]]),
                layers=layers,
            )
        )
    return frames


def _invariants(G):
    """Per-element invariant preserved by isomorphisms: (order, class size)."""
    return G.orders * (G.order + 1) + G.class_sizes


_PAIR_TESTS = 48


def _pair_generators(G):
    """A generating pair that is cheap to search from, or ``None``.

    The first image ranges over class representatives and the second over a
    whole invariant class, so a pair ``(x, y)`` costs about
    ``classes(x) * |pool(y)|``. Pairs are tried in that order, a few sampled
    elements per invariant class, and the first that generates ``G`` wins
    unless the default generators look cheaper.
    """
    n = G.order
    if n < 64:
        return None
    inv = _invariants(G)
    vals, first, counts = np.unique(inv, return_index=True, return_counts=True)
    classes = counts // G.class_sizes[first]
    members = {v: np.nonzero(inv == v)[0] for v in vals}
    default = G.generators
    pool = dict(zip(vals, counts))
    d_inv = inv[default]
    default_cost = classes[np.searchsorted(vals, d_inv[0])] * np.prod([float(pool[v]) for v in d_inv[1:]])
    pairs = sorted(
        (int(classes[a]) * int(counts[b]), a, b)
        for a in range(vals.size) for b in range(vals.size)
        if G.orders[first[a]] > 1 and G.orders[first[b]] > 1
    )
    rng = np.random.default_rng(0)
    tests = 0
    for cost, a, b in pairs:
        if cost >= default_cost or tests >= _PAIR_TESTS:
            return None
        x = int(first[a])
        ys = members[vals[b]]
        for y in rng.choice(ys, size=min(3, ys.size), replace=False):
            tests += 1
            if G.closure_mask([x, int(y)]).all():
                return np.array([x, int(y)], dtype=np.int64)
    return None


class _Search:
    def __init__(self, dom, cod, gens=None):
        self.dom, self.cod = dom, cod
        self.gens = np.asarray(dom.generators if gens is None else gens, dtype=np.int64)
        self.frames = build_frames(dom, self.gens)
        self.table = cod.fast_table()
        inv1, inv2 = _invariants(dom), _invariants(cod)
        self.cands = [np.nonzero(inv2 == inv1[g])[0] for g in self.gens]
        o1 = dom.orders
        g = self.gens
        # relator orders for each ordered pair (i < j)
        gg = dom.mul(g[:, None], g[None, :])
        sq = dom.mul(g, g)
        self.rel_prod = o1[gg]
        self.rel_sq_left = o1[dom.mul(sq[:, None], g[None, :])]
        self.rel_sq_right = o1[dom.mul(g[:, None], sq[None, :])]

    def extend(self, level, prefix, cands, want):
        frame = self.frames[level]
        if self.table is not None:
            return kernels.extend_batch(self.table, self.cod.identity, frame, prefix, cands, want)
        return kernels.extend_batch_mul(self.cod.mul, self.cod.identity, frame, prefix, cands, want)

    def filter(self, level, prefix, cands):
        cod = self.cod
        o2 = cod.orders
        keep = np.ones(cands.size, dtype=bool)
        sq_c = cod.mul(cands, cands)
        for i, y in enumerate(prefix):
            keep &= o2[cod.mul(y, cands)] == self.rel_prod[i, level]
            keep &= o2[cod.mul(cod.mul(y, y), cands)] == self.rel_sq_left[i, level]
            keep &= o2[cod.mul(y, sq_c)] == self.rel_sq_right[i, level]
        return cands[keep]

    def run(self, mode, first_level_cands=None, cap=None):
        """Depth-first search. ``mode`` is ``first``, ``all`` or ``count``.

        Returns the list of full image arrays (``first``/``all``) or the
        count. In ``all`` mode with ``cap``, storage stops once more than
        ``cap`` maps are found and the count is returned instead.
        """
        k = len(self.gens)
        leaf_nodes = self.frames[-1].nodes if k else None
        found = []
        count = 0
        store = mode != "count"

        def rec(level, prefix):
            nonlocal count, store
            cands = self.cands[level] if level or first_level_cands is None else first_level_cands
            if level:
                cands = self.filter(level, prefix, cands)
            if cands.size == 0:
                return False
            last = level == k - 1
            ok, images = self.extend(level, np.asarray(prefix, dtype=np.int64), cands, last and store)
            if last:
                count += int(ok.sum())
                if store:
                    if cap is not None and count > cap:
                        store = False
                        found.clear()
                        return False
                    for local in images:
                        full = np.empty(self.dom.order, dtype=np.int64)
                        full[leaf_nodes] = local
                        found.append(full)
                        if mode == "first":
                            return True
                return False
            for y in cands[ok]:
                if rec(level + 1, prefix + [int(y)]) and mode == "first":
                    return True
            return False

        if k == 0:
            count = 1
            found.append(np.zeros(1, dtype=np.int64))
        else:
            rec(0, [])
        if mode == "count" or not store:
            return count
        return found


def _cheap_mismatch(G1, G2):
    if G1.order != G2.order:
        return True
    if G1.order_profile() != G2.order_profile():
        return True
    s1 = np.unique(_invariants(G1), return_counts=True)
    s2 = np.unique(_invariants(G2), return_counts=True)
    return not (np.array_equal(s1[0], s2[0]) and np.array_equal(s1[1], s2[1]))


def find_isomorphism(G1, G2):
    """Image array of an isomorphism ``G1 -> G2``, or ``None``.

    The first generator's image is tried only on conjugacy-class
    representatives of ``G2``: composing with an inner automorphism of ``G2``
    moves any isomorphism to one of these.
    """
    if _cheap_mismatch(G1, G2):
        return None
    s = _Search(G1, G2, _pair_generators(G1))
    if len(s.gens) == 0:
        return np.array([G2.identity], dtype=np.int64)
    c0 = s.cands[0]
    labels = G2.conjugacy_labels[c0]
    _, first = np.unique(labels, return_index=True)
    reps = np.sort(c0[first])
    found = s.run("first", first_level_cands=reps)
    return found[0] if found else None


def all_automorphism_images(G, cap=None):
    """All automorphisms of ``G`` as a (count, order) image array plus the generators used.

    With ``cap``, returns ``(count, gens)`` instead when more than ``cap`` exist.
    """
    s = _Search(G, G)
    found = s.run("all", cap=cap)
    if isinstance(found, int):
        return found, s.gens
    if not found:
        return np.empty((0, G.order), dtype=np.int64), s.gens
    return np.stack(found), s.gens


def count_automorphisms(G):
    return _Search(G, G).run("count")
