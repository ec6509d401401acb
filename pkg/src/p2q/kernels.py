"""Backend selection for the Cayley-table kernels.

The numba backend is used when numba imports and ``P2Q_NUMBA`` is not set to
``0``. ``set_backend`` overrides the environment for the current process
(the benchmark uses it to time both paths side by side).
"""
import os

import numpy as np

from . import _kernels_numpy

try:
    from . import _kernels_numba
except ImportError:  # pragma: no cover - numba is a declared dependency
    _kernels_numba = None

_override = None


def set_backend(name):
    """Force ``"numba"`` or ``"numpy"``; ``None`` returns control to the env flag."""
    global _override
    if name not in (None, "numba", "numpy"):
        raise ValueError(f"unknown backend {name!r}")
    if name == "numba" and _kernels_numba is None:
        raise RuntimeError("numba is not importable")
    _override = name


def backend():
    if _override is not None:
        return _override
    if _kernels_numba is None or os.environ.get("P2Q_NUMBA", "1") == "0":
        return "numpy"
    return "numba"


def _impl():
    return _kernels_numba if backend() == "numba" else _kernels_numpy


def assoc_violation(table):
    return _impl().assoc_violation(table)


def assoc_violation_sampled(table, n_triples, seed=0):
    rng = np.random.default_rng(seed)
    n = table.shape[0]
    a, b, c = (rng.integers(0, n, n_triples) for _ in range(3))
    return _impl().assoc_violation_sampled(table, a, b, c)


def element_orders(table, identity):
    return _impl().element_orders(table, int(identity))


def closure(table, gens, identity):
    return _impl().closure(table, gens, int(identity))


_CHUNK_CELLS = 1 << 21


def _chunked(fn, frame, prefix, cands, want_images):
    cands = np.asarray(cands, dtype=np.int64)
    step = max(1, _CHUNK_CELLS // max(1, frame.nodes.size))
    if cands.size <= step:
        return fn(cands)
    oks, imgs = [], []
    for lo in range(0, cands.size, step):
        ok, img = fn(cands[lo : lo + step])
        oks.append(ok)
        if want_images:
            imgs.append(img)
    return np.concatenate(oks), (np.concatenate(imgs) if want_images else None)


def extend_batch(table, identity, frame, prefix, cands, want_images=False):
    if backend() == "numba":
        return _kernels_numba.extend_batch(
            table, int(identity), frame, prefix, cands, want_images
        )
    return extend_batch_mul(lambda x, y: table[x, y], identity, frame, prefix, cands, want_images)


def extend_batch_mul(mul, identity, frame, prefix, cands, want_images=False):
    """Same contract as ``extend_batch`` for targets without a stored table."""
    return _chunked(
        lambda c: _kernels_numpy.extend_batch(mul, identity, frame, prefix, c, want_images),
        frame, prefix, cands, want_images,
    )


def compose_table(images, base, sorted_keys, radix):
    images = np.ascontiguousarray(images, dtype=np.int64)
    base = np.asarray(base, dtype=np.int64)
    return _impl().compose_table(images, base, sorted_keys, int(radix))
