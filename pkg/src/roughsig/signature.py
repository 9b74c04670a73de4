"""Signatures of piecewise-linear sampled paths."""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from ._backend import kernels
from ._layout import check_shape, get_entry_cap, offsets, tensor_size
from .errors import CapacityError, DomainError, ShapeError
from .tensor import GroupElement, TruncatedTensor, _inverse_flat, log


@dataclass(frozen=True, eq=False)
class SampledPath:
    """Samples of a path [0, 1] -> R^d, read as piecewise linear.

    ``meta`` carries free-form provenance, e.g. the original time span of a
    CSV file before normalisation.
    """

    times: np.ndarray
    points: np.ndarray
    meta: dict = field(default_factory=dict, compare=False)

    def __post_init__(self):
        times = np.array(self.times, dtype=np.float64).reshape(-1)
        points = np.array(self.points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if times.size < 1:
            raise DomainError("a sampled path needs at least one sample")
        if points.shape[0] != times.size:
            raise ShapeError(f"{times.size} times but {points.shape[0]} points")
        if points.shape[1] < 1:
            raise DomainError("path dimension must be >= 1")
        if not (np.all(np.isfinite(times)) and np.all(np.isfinite(points))):
            raise DomainError("times and points must be finite")
        if np.any(np.diff(times) <= 0):
            raise DomainError("times must be strictly increasing")
        if times[0] < 0.0 or times[-1] > 1.0:
            raise DomainError("times must lie in [0, 1]")
        times.flags.writeable = False
        points.flags.writeable = False
        object.__setattr__(self, "times", times)
        object.__setattr__(self, "points", points)

    def __eq__(self, other):
        if not isinstance(other, SampledPath):
            return NotImplemented
        return np.array_equal(self.times, other.times) and np.array_equal(self.points, other.points)

    __hash__ = None

    @classmethod
    def from_points(cls, points, times=None) -> SampledPath:
        """Samples on a uniform grid of [0, 1] unless ``times`` is given."""
        points = np.asarray(points, dtype=np.float64)
        if points.ndim == 1:
            points = points.reshape(-1, 1)
        if times is None:
            n = points.shape[0]
            times = np.linspace(0.0, 1.0, n) if n > 1 else np.zeros(1)
        return cls(times, points)

    @property
    def d(self) -> int:
        return self.points.shape[1]

    def __len__(self) -> int:
        return self.times.size

    def value_at(self, t: float) -> np.ndarray:
        """Linear interpolation between samples."""
        return np.array([np.interp(t, self.times, self.points[:, i]) for i in range(self.d)])

    def scaled(self, lam: float) -> SampledPath:
        return SampledPath(self.times, lam * self.points, dict(self.meta))

    def window(self, s: float, t: float) -> tuple[np.ndarray, np.ndarray]:
        """Times and points of the polyline restricted to [s, t]."""
        lo, hi = self.times[0], self.times[-1]
        if s > t:
            raise DomainError(f"window start {s} exceeds end {t}")
        if s < lo or t > hi:
            raise DomainError(f"window [{s}, {t}] outside sampled range [{lo}, {hi}]")
        inner = (self.times > s) & (self.times < t)
        times = np.concatenate([[s], self.times[inner], [t]]) if s < t else np.array([s])
        pts = [self.value_at(s)]
        pts.extend(self.points[inner])
        if s < t:
            pts.append(self.value_at(t))
        return times, np.array(pts)


def reverse(p: SampledPath) -> SampledPath:
    """Run the path backwards over the same time span."""
    times = (p.times[0] + p.times[-1] - p.times)[::-1]
    # keep the endpoints exact so that reverse(reverse(p)) == p
    times[0], times[-1] = p.times[0], p.times[-1]
    return SampledPath(times, p.points[::-1].copy(), dict(p.meta))


def segment_sig(dx, depth: int) -> GroupElement:
    """Signature of a straight segment with increment ``dx``: exp(dx)."""
    dx = np.asarray(dx, dtype=np.float64).reshape(-1)
    check_shape(dx.size, depth)
    if not np.all(np.isfinite(dx)):
        raise DomainError("increment must be finite")
    return GroupElement._wrap(dx.size, depth, kernels.exp_increments(dx, dx.size, depth)[0])


def _tree_product(blocks: np.ndarray, d: int, depth: int) -> np.ndarray:
    # balanced pairwise reduction, left-to-right order preserved
    while blocks.shape[0] > 1:
        m = blocks.shape[0]
        paired = kernels.mul(blocks[0 : m - 1 : 2], blocks[1:m:2], d, depth)
        if m % 2:
            paired = np.vstack([paired, blocks[-1:]])
        blocks = paired
    return blocks[0]


def path_signature(p: SampledPath, depth: int, s: float | None = None,
                   t: float | None = None) -> GroupElement:
    """Signature of the polyline over [s, t] (defaults: the sampled range).

    Segment exponentials are combined by a balanced product tree; window
    ends inside a segment are handled by interpolating the endpoint.
    """
    check_shape(p.d, depth)
    s = p.times[0] if s is None else float(s)
    t = p.times[-1] if t is None else float(t)
    _, pts = p.window(s, t)
    inc = np.diff(pts, axis=0)
    inc = inc[np.any(inc != 0.0, axis=1)]
    if inc.shape[0] == 0:
        out = np.zeros(tensor_size(p.d, depth))
        out[0] = 1.0
        return GroupElement._wrap(p.d, depth, out)
    blocks = kernels.exp_increments(inc, p.d, depth)
    return GroupElement._wrap(p.d, depth, _tree_product(blocks, p.d, depth))


@dataclass(frozen=True, eq=False)
class SignaturePath:
    """One group element X_{0,t} per grid time; tensors[0] is the unit.

    The two-parameter map is derived as X_{s,t} = X_{0,s}^-1 (x) X_{0,t}.
    """

    d: int
    depth: int
    times: np.ndarray
    tensors: np.ndarray

    def __post_init__(self):
        size = check_shape(self.d, self.depth)
        tensors = np.array(self.tensors, dtype=np.float64)
        times = np.array(self.times, dtype=np.float64).reshape(-1)
        if tensors.shape != (times.size, size):
            raise ShapeError(f"expected tensors of shape {(times.size, size)}, got {tensors.shape}")
        if np.any(tensors[:, 0] != 1.0):
            raise DomainError("every tensor of a signature path needs level-0 entry 1")
        if np.any(np.diff(times) <= 0):
            raise DomainError("times must be strictly increasing")
        if not np.all(np.isfinite(tensors)):
            raise DomainError("tensor coefficients must be finite")
        tensors.flags.writeable = False
        times.flags.writeable = False
        object.__setattr__(self, "tensors", tensors)
        object.__setattr__(self, "times", times)

    def __len__(self) -> int:
        return self.times.size

    def tensor(self, i: int) -> GroupElement:
        return GroupElement._wrap(self.d, self.depth, self.tensors[i].copy())

    def increment(self, i: int, j: int) -> GroupElement:
        """X_{s,t} for s = times[i], t = times[j]."""
        inv = _inverse_flat(self.tensors[i : i + 1], self.d, self.depth)
        out = kernels.mul(inv, self.tensors[j], self.d, self.depth)[0]
        out[0] = 1.0
        return GroupElement._wrap(self.d, self.depth, out)

    def increments_from(self, i: int, js=None) -> np.ndarray:
        """Batch of X_{times[i], times[j]} for j in ``js`` (default j >= i)."""
        js = np.arange(i, len(self)) if js is None else np.asarray(js)
        inv = _inverse_flat(self.tensors[i : i + 1], self.d, self.depth)
        out = kernels.mul(inv, self.tensors[js], self.d, self.depth)
        out[:, 0] = 1.0
        return out

    def left_translate(self, b: TruncatedTensor) -> SignaturePath:
        """Replace every g_t by b (x) g_t; derived increments are unchanged."""
        if b.d != self.d or b.depth != self.depth or b.flat[0] != 1.0:
            raise ShapeError("translation element must be a group element of matching shape")
        out = kernels.mul(b.flat, self.tensors, self.d, self.depth)
        out[:, 0] = 1.0
        return SignaturePath(self.d, self.depth, self.times, out)


def signature_path(p: SampledPath, depth: int) -> SignaturePath:
    """Running Chen products X_{0,t} at every sample time."""
    check_shape(p.d, depth)
    if len(p) * tensor_size(p.d, depth) > get_entry_cap():
        raise CapacityError("signature path exceeds the entry cap")
    inc = np.diff(p.points, axis=0)
    return SignaturePath(p.d, depth, p.times, kernels.chen_prefix(inc, p.d, depth))


def log_signature(p: SampledPath, depth: int, s: float | None = None,
                  t: float | None = None) -> TruncatedTensor:
    return log(path_signature(p, depth, s, t))


def brute_force_sig(p: SampledPath, depth: int, mesh: int) -> TruncatedTensor:
    """Iterated integrals by the left-point Riemann-Stieltjes recursion.

    The polyline is resampled on ``mesh`` uniform time steps and level k is
    accumulated as S_k(t_{j+1}) = S_k(t_j) + S_{k-1}(t_j) (x) dX_j. This is
    an independent first-order oracle for :func:`path_signature`.
    """
    if mesh < 1:
        raise DomainError("mesh must be >= 1")
    size = check_shape(p.d, depth)
    if (mesh + 1) * p.d**depth > get_entry_cap():
        raise CapacityError("oracle grid exceeds the entry cap")
    d = p.d
    grid = np.linspace(p.times[0], p.times[-1], mesh + 1) if len(p) > 1 else np.full(mesh + 1, p.times[0])
    pts = np.column_stack([np.interp(grid, p.times, p.points[:, i]) for i in range(d)])
    dx = np.diff(pts, axis=0)
    out = np.zeros(size)
    out[0] = 1.0
    off = offsets(d, depth)
    prev = np.ones((mesh + 1, 1))
    for k in range(1, depth + 1):
        steps = (prev[:-1, :, None] * dx[:, None, :]).reshape(mesh, -1)
        cur = np.zeros((mesh + 1, d**k))
        np.cumsum(steps, axis=0, out=cur[1:])
        out[off[k] : off[k + 1]] = cur[-1]
        prev = cur
    return TruncatedTensor(d, depth, out)


def levy_area(p: SampledPath) -> np.ndarray:
    """Antisymmetric part of the depth-2 signature, A_ij = (S^ij - S^ji) / 2."""
    if p.d < 2:
        raise DomainError("Lévy area needs dimension >= 2")
    s2 = path_signature(p, 2).level_array(2)
    return 0.5 * (s2 - s2.T)
