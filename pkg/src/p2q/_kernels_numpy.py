"""Pure-numpy implementations of the Cayley-table kernels.

Every function here has a twin of the same name in ``_kernels_numba``;
``p2q.kernels`` picks one at call time.
"""
import numpy as np


def assoc_violation(table):
    n = table.shape[0]
    for a in range(n):
        left = table[table[a]]          # (a*b)*c for all b, c
        right = table[a][table]         # a*(b*c) for all b, c
        bad = np.nonzero(left != right)
        if bad[0].size:
            return a, int(bad[0][0]), int(bad[1][0])
    return None


def assoc_violation_sampled(table, a, b, c):
    left = table[table[a, b], c]
    right = table[a, table[b, c]]
    bad = np.nonzero(left != right)[0]
    if bad.size:
        i = bad[0]
        return int(a[i]), int(b[i]), int(c[i])
    return None


def element_orders(table, identity):
    n = table.shape[0]
    elems = np.arange(n)
    orders = np.zeros(n, dtype=np.int64)
    inverses = np.zeros(n, dtype=np.int64)
    prev = np.full(n, identity, dtype=np.int64)
    cur = elems.copy()
    k = 1
    pending = np.ones(n, dtype=bool)
    while pending.any():
        hit = pending & (cur == identity)
        orders[hit] = k
        inverses[hit] = prev[hit]
        pending &= ~hit
        prev = cur
        cur = table[cur, elems]
        k += 1
    return orders, inverses


def closure(table, gens, identity):
    n = table.shape[0]
    mask = np.zeros(n, dtype=bool)
    mask[identity] = True
    gens = np.asarray(gens, dtype=np.int64)
    if gens.size == 0:
        return mask
    frontier = np.array([identity], dtype=np.int64)
    while frontier.size:
        nxt = np.unique(table[frontier[:, None], gens[None, :]].ravel())
        nxt = nxt[~mask[nxt]]
        mask[nxt] = True
        frontier = nxt
    return mask


def extend_batch(mul, identity, frame, prefix, cands, want_images=False):
    """Try every candidate image for the newest generator at once.

    ``frame`` describes the BFS spanning tree of the subgroup generated by
    the first ``j`` domain generators (see ``search.Frame``); ``prefix`` holds
    the images already fixed for the first ``j - 1`` of them.
    Returns a boolean mask over ``cands`` and, optionally, the local image
    arrays of the accepted candidates.
    """
    cands = np.asarray(cands, dtype=np.int64)
    c = cands.size
    j = frame.rloc.shape[1]
    ys = np.empty((c, j), dtype=np.int64)
    ys[:, : j - 1] = prefix
    ys[:, j - 1] = cands
    size = frame.nodes.size
    f = np.empty((c, size), dtype=np.int64)
    f[:, 0] = identity
    # rows still alive; edges are tested as soon as both ends exist so that
    # wrong candidates drop out after a few layers
    alive = np.arange(c)
    checks = frame.checks

    def prune(L):
        nonlocal f, ys, alive
        t, i = checks[L]
        if t.size == 0 or alive.size == 0:
            return
        good = (f[:, frame.rloc[t, i]] == mul(f[:, t], ys[:, i])).all(axis=1)
        if not good.all():
            f, ys, alive = f[good], ys[good], alive[good]

    prune(0)
    for L, (lo, hi) in enumerate(frame.layers, 1):
        if alive.size == 0:
            break
        f[:, lo:hi] = mul(f[:, frame.ppos[lo:hi]], ys[:, frame.pgen[lo:hi]])
        prune(L)
    if alive.size:
        s = np.sort(f, axis=1)
        inj = (s[:, 1:] != s[:, :-1]).all(axis=1)
        f, alive = f[inj], alive[inj]
    ok = np.zeros(c, dtype=bool)
    ok[alive] = True
    if want_images:
        return ok, f
    return ok, None


def compose_table(images, base, sorted_keys, radix):
    m = images.shape[0]
    out = np.empty((m, m), dtype=np.int32)
    weights = radix ** np.arange(len(base) - 1, -1, -1, dtype=np.int64)
    first = images[:, base]
    for i in range(m):
        # row i: apply automorphism i, then automorphism j
        keys = images[:, first[i]] @ weights
        out[i] = np.searchsorted(sorted_keys, keys)
    return out
