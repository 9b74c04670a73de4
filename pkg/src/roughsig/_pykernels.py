"""Reference numpy implementations of the dense tensor kernels.

Every kernel works on batches: arrays of shape (m, size) holding m flattened
tensors of T^depth(R^d). A batch with a single row broadcasts against the
other operand.
"""
from __future__ import annotations

import numpy as np

from ._layout import offsets, tensor_size


def _as_batch(x: np.ndarray) -> np.ndarray:
    x = np.asarray(x, dtype=np.float64)
    return x.reshape(1, -1) if x.ndim == 1 else x


def mul(a: np.ndarray, b: np.ndarray, d: int, depth: int) -> np.ndarray:
    """Batched truncated tensor product, level k = sum_{i+j=k} a_i (x) b_j."""
    a = _as_batch(a)
    b = _as_batch(b)
    m = max(a.shape[0], b.shape[0])
    off = offsets(d, depth)
    out = np.zeros((m, tensor_size(d, depth)))
    for k in range(depth + 1):
        target = out[:, off[k] : off[k + 1]]
        for i in range(k + 1):
            j = k - i
            ai = a[:, off[i] : off[i + 1]]
            bj = b[:, off[j] : off[j + 1]]
            target += (ai[:, :, None] * bj[:, None, :]).reshape(-1, d**k)
    return out


def exp_increments(v: np.ndarray, d: int, depth: int) -> np.ndarray:
    """exp(v) for each row v of an (m, d) array of level-one vectors."""
    v = np.asarray(v, dtype=np.float64).reshape(-1, d)
    m = v.shape[0]
    off = offsets(d, depth)
    out = np.zeros((m, tensor_size(d, depth)))
    out[:, 0] = 1.0
    level = np.ones((m, 1))
    for k in range(1, depth + 1):
        level = (level[:, :, None] * v[:, None, :]).reshape(m, -1) / k
        out[:, off[k] : off[k + 1]] = level
    return out


def _mul_exp_inplace(a: np.ndarray, v: np.ndarray, d: int, depth: int, off) -> None:
    # top level first so lower levels are still the old ones when read
    for k in range(depth, 0, -1):
        r = a[0:1] * v / k
        for i in range(1, k):
            r = r + a[off[i] : off[i + 1]]
            r = np.multiply.outer(r, v).ravel() / (k - i)
        a[off[k] : off[k + 1]] += r


def chen_prefix(v: np.ndarray, d: int, depth: int) -> np.ndarray:
    """Running products unit, exp(v_0), exp(v_0) exp(v_1), ... (m+1 rows)."""
    v = np.asarray(v, dtype=np.float64).reshape(-1, d)
    off = offsets(d, depth)
    out = np.zeros((v.shape[0] + 1, tensor_size(d, depth)))
    cur = np.zeros(tensor_size(d, depth))
    cur[0] = 1.0
    out[0] = cur
    for n, row in enumerate(v, start=1):
        if row.any():
            _mul_exp_inplace(cur, row, d, depth, off)
        out[n] = cur
    return out
