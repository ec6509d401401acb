"""numba twins of ``_kernels_numpy``; same names, same results."""
import numpy as np
from numba import njit


@njit(cache=True)
def _assoc_full(table):
    n = table.shape[0]
    for a in range(n):
        for b in range(n):
            ab = table[a, b]
            for c in range(n):
                if table[ab, c] != table[a, table[b, c]]:
                    return a, b, c
    return -1, -1, -1


def assoc_violation(table):
    a, b, c = _assoc_full(table)
    return None if a < 0 else (int(a), int(b), int(c))


@njit(cache=True)
def _assoc_sampled(table, a, b, c):
    for i in range(a.shape[0]):
        if table[table[a[i], b[i]], c[i]] != table[a[i], table[b[i], c[i]]]:
            return i
    return -1


def assoc_violation_sampled(table, a, b, c):
    i = _assoc_sampled(table, a, b, c)
    return None if i < 0 else (int(a[i]), int(b[i]), int(c[i]))


@njit(cache=True)
def element_orders(table, identity):
    n = table.shape[0]
    orders = np.zeros(n, dtype=np.int64)
    inverses = np.zeros(n, dtype=np.int64)
    for x in range(n):
        prev = identity
        cur = x
        k = 1
        while cur != identity:
            prev = cur
            cur = table[cur, x]
            k += 1
        orders[x] = k
        inverses[x] = prev
    return orders, inverses


@njit(cache=True)
def _closure(table, gens, identity):
    n = table.shape[0]
    mask = np.zeros(n, dtype=np.bool_)
    queue = np.empty(n, dtype=np.int64)
    mask[identity] = True
    queue[0] = identity
    head, tail = 0, 1
    while head < tail:
        x = queue[head]
        head += 1
        for g in gens:
            y = table[x, g]
            if not mask[y]:
                mask[y] = True
                queue[tail] = y
                tail += 1
    return mask


def closure(table, gens, identity):
    return _closure(table, np.asarray(gens, dtype=np.int64), identity)


@njit(cache=True)
def _extend_batch(table, identity, ppos, pgen, rloc, bounds, et, ei, ecut, prefix, cands, want, out):
    c = cands.shape[0]
    size = ppos.shape[0]
    j = rloc.shape[1]
    n2 = table.shape[0]
    ok = np.zeros(c, dtype=np.bool_)
    ys = np.empty(j, dtype=np.int64)
    for i in range(j - 1):
        ys[i] = prefix[i]
    f = np.empty(size, dtype=np.int64)
    seen = np.zeros(n2, dtype=np.int64)
    stamp = 0
    n_ok = 0
    n_layers = bounds.shape[0] - 1
    for ci in range(c):
        ys[j - 1] = cands[ci]
        f[0] = identity
        good = True
        # layer L fills nodes bounds[L]:bounds[L+1], then checks its ready edges
        for L in range(n_layers):
            for t in range(max(1, bounds[L]), bounds[L + 1]):
                f[t] = table[f[ppos[t]], ys[pgen[t]]]
            for e in range(ecut[L], ecut[L + 1]):
                t = et[e]
                if f[rloc[t, ei[e]]] != table[f[t], ys[ei[e]]]:
                    good = False
                    break
            if not good:
                break
        if good:
            stamp += 1
            for t in range(size):
                if seen[f[t]] == stamp:
                    good = False
                    break
                seen[f[t]] = stamp
        if good:
            ok[ci] = True
            if want:
                for t in range(size):
                    out[n_ok, t] = f[t]
            n_ok += 1
    return ok, n_ok


def extend_batch(table, identity, frame, prefix, cands, want_images=False):
    cands = np.asarray(cands, dtype=np.int64)
    prefix = np.asarray(prefix, dtype=np.int64)
    size = frame.nodes.size
    out = np.empty((cands.size if want_images else 0, size), dtype=np.int64)
    bounds = np.array([0, 1] + [hi for _, hi in frame.layers], dtype=np.int64)
    checks = frame.checks
    et = np.concatenate([t for t, _ in checks]).astype(np.int64)
    ei = np.concatenate([i for _, i in checks]).astype(np.int64)
    ecut = np.concatenate([[0], np.cumsum([t.size for t, _ in checks])]).astype(np.int64)
    ok, n_ok = _extend_batch(
        table, identity, frame.ppos, frame.pgen, frame.rloc, bounds, et, ei, ecut,
        prefix, cands, want_images, out,
    )
    return ok, (out[:n_ok] if want_images else None)


@njit(cache=True)
def compose_table(images, base, sorted_keys, radix):
    m = images.shape[0]
    k = base.shape[0]
    out = np.empty((m, m), dtype=np.int32)
    first = np.empty(k, dtype=np.int64)
    for i in range(m):
        for t in range(k):
            first[t] = images[i, base[t]]
        for j in range(m):
            key = 0
            for t in range(k):
                key = key * radix + images[j, first[t]]
            out[i, j] = np.searchsorted(sorted_keys, key)
    return out
