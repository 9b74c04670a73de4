"""Flat storage layout of truncated tensors and the global entry cap.

A tensor in T^N(R^d) is stored as one contiguous float64 vector: level 0
first, then level 1, ..., level N. Inside level k the word a_1...a_k sits at
offset sum_i (a_i - 1) * d**(k - i), i.e. row-major order of a (d,)*k array.
"""
from __future__ import annotations

import threading
from contextlib import contextmanager
from functools import lru_cache

import numpy as np

from .errors import CapacityError, DomainError

DEFAULT_ENTRY_CAP = 10**7

_state = threading.local()


def get_entry_cap() -> int:
    return getattr(_state, "cap", DEFAULT_ENTRY_CAP)


def set_entry_cap(cap: int) -> None:
    if cap < 1:
        raise DomainError("entry cap must be positive")
    _state.cap = int(cap)


@contextmanager
def entry_cap(cap: int):
    """Temporarily change the entry cap for the current thread."""
    old = get_entry_cap()
    set_entry_cap(cap)
    try:
        yield
    finally:
        _state.cap = old


def tensor_size(d: int, depth: int) -> int:
    """Number of coefficients of T^depth(R^d), i.e. sum_k d**k."""
    if d == 1:
        return depth + 1
    return (d ** (depth + 1) - 1) // (d - 1)


def check_shape(d: int, depth: int) -> int:
    if d < 1:
        raise DomainError(f"alphabet size must be >= 1, got {d}")
    if depth < 0:
        raise DomainError(f"truncation depth must be >= 0, got {depth}")
    size = tensor_size(d, depth)
    cap = get_entry_cap()
    if size > cap:
        raise CapacityError(
            f"T^{depth}(R^{d}) has {size} coefficients, above the entry cap {cap}"
        )
    return size


@lru_cache(maxsize=None)
def offsets(d: int, depth: int) -> np.ndarray:
    """Start index of every level plus a trailing end index (length depth+2)."""
    out = np.zeros(depth + 2, dtype=np.intp)
    for k in range(depth + 1):
        out[k + 1] = out[k] + d**k
    out.flags.writeable = False
    return out
