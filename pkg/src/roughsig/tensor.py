"""Dense arithmetic in the truncated tensor algebra T^N(R^d)."""
from __future__ import annotations

import math
from numbers import Real

import numpy as np

from ._backend import kernels
from ._layout import check_shape, offsets, tensor_size
from .errors import DomainError, ShapeError

DEFAULT_TOL = 1e-9


class TruncatedTensor:
    """Immutable element of T^depth(R^d).

    Coefficients live in one flat float64 vector ordered by level and, within
    a level, lexicographically by word (see :mod:`roughsig._layout`).
    """

    __slots__ = ("d", "depth", "_flat")

    def __init__(self, d: int, depth: int, flat):
        size = check_shape(d, depth)
        arr = np.array(flat, dtype=np.float64).reshape(-1)
        if arr.size != size:
            raise ShapeError(f"T^{depth}(R^{d}) needs {size} coefficients, got {arr.size}")
        if not np.all(np.isfinite(arr)):
            raise DomainError("tensor coefficients must be finite")
        arr.flags.writeable = False
        self.d = int(d)
        self.depth = int(depth)
        self._flat = arr

    @classmethod
    def _wrap(cls, d: int, depth: int, arr: np.ndarray):
        obj = cls.__new__(cls)
        arr = np.asarray(arr, dtype=np.float64).reshape(-1)
        arr.flags.writeable = False
        obj.d, obj.depth, obj._flat = d, depth, arr
        return obj

    @classmethod
    def from_levels(cls, levels, d: int | None = None) -> TruncatedTensor:
        """Build from per-level arrays; level k may be flat or shaped (d,)*k."""
        levels = [np.asarray(x, dtype=np.float64).reshape(-1) for x in levels]
        if not levels:
            raise ShapeError("need at least level 0")
        if d is None:
            if len(levels) < 2:
                raise ShapeError("alphabet size is ambiguous for a depth-0 tensor")
            d = levels[1].size
        for k, lev in enumerate(levels):
            if lev.size != d**k:
                raise ShapeError(f"level {k} has {lev.size} entries, expected {d**k}")
        return cls(d, len(levels) - 1, np.concatenate(levels))

    @property
    def flat(self) -> np.ndarray:
        return self._flat

    @property
    def scalar(self) -> float:
        return float(self._flat[0])

    @property
    def levels(self) -> tuple[np.ndarray, ...]:
        off = offsets(self.d, self.depth)
        return tuple(self._flat[off[k] : off[k + 1]] for k in range(self.depth + 1))

    def level(self, k: int) -> np.ndarray:
        if not 0 <= k <= self.depth:
            raise DomainError(f"level {k} outside 0..{self.depth}")
        off = offsets(self.d, self.depth)
        return self._flat[off[k] : off[k + 1]]

    def level_array(self, k: int) -> np.ndarray:
        """Level k reshaped to a (d,)*k array, so that entry [i, j] is word (i+1)(j+1)."""
        return self.level(k).reshape((self.d,) * k)

    def __add__(self, other):
        if isinstance(other, TruncatedTensor):
            return add(self, other)
        return NotImplemented

    def __sub__(self, other):
        if isinstance(other, TruncatedTensor):
            return add(self, scale(-1.0, other))
        return NotImplemented

    def __neg__(self):
        return scale(-1.0, self)

    def __mul__(self, other):
        if isinstance(other, TruncatedTensor):
            return mul(self, other)
        if isinstance(other, Real):
            return scale(other, self)
        return NotImplemented

    def __rmul__(self, other):
        if isinstance(other, Real):
            return scale(other, self)
        return NotImplemented

    def __eq__(self, other):
        if not isinstance(other, TruncatedTensor):
            return NotImplemented
        return (
            self.d == other.d
            and self.depth == other.depth
            and np.array_equal(self._flat, other._flat)
        )

    __hash__ = None

    def __repr__(self) -> str:
        body = ", ".join(np.array2string(x, precision=6) for x in self.levels)
        return f"{type(self).__name__}(d={self.d}, depth={self.depth}, levels=[{body}])"


class GroupElement(TruncatedTensor):
    """A tensor with level-0 entry exactly 1, i.e. an element of 1 + I_N.

    ``geometric`` caches the outcome of the shuffle-character test once it
    has been run through :meth:`check_geometric`.
    """

    __slots__ = ("geometric",)

    def __init__(self, d: int, depth: int, flat):
        super().__init__(d, depth, flat)
        if self._flat[0] != 1.0:
            raise DomainError("group elements need level-0 entry 1")
        self.geometric = None

    @classmethod
    def _wrap(cls, d, depth, arr):
        obj = super()._wrap(d, depth, arr)
        obj.geometric = None
        return obj

    @classmethod
    def of(cls, x: TruncatedTensor) -> GroupElement:
        if isinstance(x, GroupElement):
            return x
        if x.flat[0] != 1.0:
            raise DomainError("group elements need level-0 entry 1")
        return cls._wrap(x.d, x.depth, x.flat)

    def check_geometric(self, tol: float = 1e-8) -> bool:
        from .grouplike import is_grouplike

        self.geometric = bool(is_grouplike(self, tol))
        return self.geometric


def _same_shape(a: TruncatedTensor, b: TruncatedTensor) -> None:
    if a.d != b.d or a.depth != b.depth:
        raise ShapeError(
            f"shape mismatch: T^{a.depth}(R^{a.d}) vs T^{b.depth}(R^{b.d})"
        )


def _result(d, depth, arr, group: bool):
    cls = GroupElement if group and arr[0] == 1.0 else TruncatedTensor
    return cls._wrap(d, depth, arr)


def unit(d: int, depth: int) -> GroupElement:
    arr = np.zeros(check_shape(d, depth))
    arr[0] = 1.0
    return GroupElement._wrap(d, depth, arr)


def zero(d: int, depth: int) -> TruncatedTensor:
    return TruncatedTensor._wrap(d, depth, np.zeros(check_shape(d, depth)))


def from_vector(v, depth: int) -> TruncatedTensor:
    """The level-one tensor (0, v, 0, ..., 0)."""
    v = np.asarray(v, dtype=np.float64).reshape(-1)
    arr = np.zeros(check_shape(v.size, depth))
    if depth >= 1:
        arr[1 : 1 + v.size] = v
    return TruncatedTensor(v.size, depth, arr)


def homogeneous(d: int, depth: int, k: int, values) -> TruncatedTensor:
    """Tensor concentrated in level k."""
    if not 0 <= k <= depth:
        raise DomainError(f"level {k} outside 0..{depth}")
    arr = np.zeros(check_shape(d, depth))
    off = offsets(d, depth)
    arr[off[k] : off[k + 1]] = np.asarray(values, dtype=np.float64).reshape(-1)
    return TruncatedTensor(d, depth, arr)


def mul(a: TruncatedTensor, b: TruncatedTensor) -> TruncatedTensor:
    """Truncated tensor product: level k is sum_{n+m=k} a_n (x) b_m."""
    _same_shape(a, b)
    out = kernels.mul(a.flat, b.flat, a.d, a.depth)[0]
    return _result(a.d, a.depth, out, isinstance(a, GroupElement) and isinstance(b, GroupElement))


def add(a: TruncatedTensor, b: TruncatedTensor) -> TruncatedTensor:
    _same_shape(a, b)
    return TruncatedTensor._wrap(a.d, a.depth, a.flat + b.flat)


def scale(lam: float, a: TruncatedTensor) -> TruncatedTensor:
    return TruncatedTensor._wrap(a.d, a.depth, float(lam) * a.flat)


def project(a: TruncatedTensor, n: int) -> TruncatedTensor:
    """Drop every level above n."""
    if not 0 <= n <= a.depth:
        raise DomainError(f"cannot project depth {a.depth} onto depth {n}")
    arr = a.flat[: tensor_size(a.d, n)].copy()
    return _result(a.d, n, arr, isinstance(a, GroupElement))


def inverse(a: TruncatedTensor) -> TruncatedTensor:
    """Inverse via the Neumann series a0^-1 sum_k (-b)^k, b = a/a0 - 1.

    b has no level-0 part, so b^(N+1) vanishes after truncation and the
    series is a polynomial; it is evaluated as r <- 1 - b r, N times.
    """
    a0 = a.flat[0]
    if a0 == 0.0:
        raise DomainError("not invertible: π₀(a) = 0")
    out = _inverse_flat(a.flat.reshape(1, -1), a.d, a.depth)[0]
    return _result(a.d, a.depth, out, isinstance(a, GroupElement))


def _inverse_flat(a: np.ndarray, d: int, depth: int) -> np.ndarray:
    a0 = a[:, :1]
    b = a / a0
    b[:, 0] = 0.0
    r = np.zeros_like(b)
    r[:, 0] = 1.0
    for _ in range(depth):
        r = -kernels.mul(b, r, d, depth)
        r[:, 0] += 1.0
    return r / a0


def exp(a: TruncatedTensor) -> GroupElement:
    """Tensor exponential sum_{n<=N} a^n / n! of an element with π₀(a) = 0."""
    if a.flat[0] != 0.0:
        raise DomainError("exp requires π₀(a) = 0")
    r = np.zeros_like(a.flat)
    r[0] = 1.0
    # Horner: r <- 1 + a r / n for n = N, ..., 1
    for n in range(a.depth, 0, -1):
        r = kernels.mul(a.flat, r, a.d, a.depth)[0] / n
        r[0] += 1.0
    return GroupElement._wrap(a.d, a.depth, r)


def log(a: TruncatedTensor) -> TruncatedTensor:
    """Tensor logarithm sum_{n<=N} (-1)^(n+1) (a-1)^n / n of an element with π₀(a) = 1."""
    if a.flat[0] != 1.0:
        raise DomainError("log requires π₀(a) = 1")
    x = a.flat.copy()
    x[0] = 0.0
    if a.depth == 0:
        return TruncatedTensor._wrap(a.d, 0, x)
    r = np.zeros_like(x)
    r[0] = 1.0 / a.depth
    for n in range(a.depth - 1, 0, -1):
        r = -kernels.mul(x, r, a.d, a.depth)[0]
        r[0] += 1.0 / n
    out = kernels.mul(x, r, a.d, a.depth)[0]
    return TruncatedTensor._wrap(a.d, a.depth, out)


def hs_norm_level(a: TruncatedTensor, k: int) -> float:
    """Euclidean norm of level k in the orthonormal word basis."""
    return float(np.linalg.norm(a.level(k)))


def hs_norm(a: TruncatedTensor) -> float:
    return float(np.linalg.norm(a.flat))


def level_norms(flat: np.ndarray, d: int, depth: int) -> np.ndarray:
    """Per-level Euclidean norms of a batch (m, size) -> (m, depth+1)."""
    flat = np.atleast_2d(flat)
    off = offsets(d, depth)
    sq = np.add.reduceat(flat * flat, off[:-1], axis=1)
    return np.sqrt(sq)


def _graded_max(norms: np.ndarray, depth: int) -> np.ndarray:
    k = np.arange(1, depth + 1)
    fact = np.array([math.factorial(int(j)) for j in k], dtype=np.float64)
    return np.max((fact * norms[:, 1:]) ** (1.0 / k), axis=1)


def homogeneous_norm_flat(flat: np.ndarray, d: int, depth: int, inv: np.ndarray | None = None):
    """Batched homogeneous norm; ``inv`` may supply precomputed inverses."""
    flat = np.atleast_2d(flat)
    if inv is None:
        inv = _inverse_flat(flat, d, depth)
    return _graded_max(level_norms(flat, d, depth), depth) + _graded_max(
        level_norms(np.atleast_2d(inv), d, depth), depth
    )


def homogeneous_norm(a: TruncatedTensor) -> float:
    """|a| = max_k (k! ||a_k||)^(1/k) + max_k (k! ||(a^-1)_k||)^(1/k)."""
    if a.flat[0] != 1.0:
        raise DomainError("homogeneous norm needs π₀(a) = 1")
    if a.depth < 1:
        raise DomainError("homogeneous norm needs depth >= 1")
    return float(homogeneous_norm_flat(a.flat, a.d, a.depth)[0])


def rho_metric(x: TruncatedTensor, y: TruncatedTensor) -> float:
    """Left-invariant distance |x^-1 (x) y|.

    x^-1 y - 1 is formed as x^-1 (y - x) (and its inverse as y^-1 (x - y)),
    so identical arguments give exactly 0 instead of the k-th roots of
    rounding noise.
    """
    _same_shape(x, y)
    if x.flat[0] != 1.0 or y.flat[0] != 1.0:
        raise DomainError("rho metric needs π₀ = 1 on both arguments")
    if x.depth < 1:
        raise DomainError("rho metric needs depth >= 1")
    diff = (y.flat - x.flat).reshape(1, -1)
    fwd = kernels.mul(_inverse_flat(x.flat.reshape(1, -1), x.d, x.depth), diff, x.d, x.depth)
    bwd = kernels.mul(_inverse_flat(y.flat.reshape(1, -1), y.d, y.depth), -diff, x.d, x.depth)
    return float(
        _graded_max(level_norms(fwd, x.d, x.depth), x.depth)[0]
        + _graded_max(level_norms(bwd, x.d, x.depth), x.depth)[0]
    )


def dilation(lam: float, a: TruncatedTensor) -> TruncatedTensor:
    """Scale level k by lam**k."""
    off = offsets(a.d, a.depth)
    powers = np.repeat(float(lam) ** np.arange(a.depth + 1), np.diff(off))
    powers[0] = 1.0
    return _result(a.d, a.depth, a.flat * powers, isinstance(a, GroupElement))


def rel_error(lhs: TruncatedTensor, rhs: TruncatedTensor) -> float:
    """||lhs - rhs|| / (1 + ||lhs||), the package-wide comparison measure."""
    _same_shape(lhs, rhs)
    return float(np.linalg.norm(lhs.flat - rhs.flat) / (1.0 + np.linalg.norm(lhs.flat)))


def allclose(lhs: TruncatedTensor, rhs: TruncatedTensor, tol: float = DEFAULT_TOL) -> bool:
    return rel_error(lhs, rhs) <= tol
