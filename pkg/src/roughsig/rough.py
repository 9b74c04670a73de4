"""Hölder and rough-path analytics on sampled data.

All suprema are taken over the sample grid, so every reported constant is
a lower bound for the corresponding quantity of an underlying continuous
path and is exact only for the sampled restriction.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from ._backend import kernels
from ._layout import check_shape, get_entry_cap
from .errors import CapacityError, DomainError, ShapeError
from .grouplike import DEFAULT_TOL, shuffle_residuals
from .tensor import (
    GroupElement,
    TruncatedTensor,
    _graded_max,
    _inverse_flat,
    level_norms,
)
from .signature import SampledPath, SignaturePath

# above this many samples, suprema run over dyadic gaps (i, i + 2^j) only
ALL_PAIRS_LIMIT = 2000


def _check_alpha(alpha: float) -> float:
    alpha = float(alpha)
    if not 0.0 < alpha < 1.0:
        raise DomainError(f"Hölder exponent must lie in (0, 1), got {alpha}")
    return alpha


def _partners(i: int, n: int) -> np.ndarray:
    if n <= ALL_PAIRS_LIMIT:
        return np.arange(i + 1, n)
    gaps = 1 << np.arange(int(math.log2(n)) + 1)
    js = i + gaps
    return js[js < n]


class MultiplicativeFunctional:
    """Tabulated two-parameter map (s, t) -> X_{s,t} on a time grid.

    ``table[i, j]`` holds the flattened tensor X_{times[i], times[j]} for
    i <= j; entries below the diagonal are ignored. Used to validate
    functionals that were not produced by :func:`signature_path`.
    """

    def __init__(self, d: int, depth: int, times, table):
        size = check_shape(d, depth)
        times = np.asarray(times, dtype=np.float64).reshape(-1)
        n = times.size
        if n * n * size > get_entry_cap():
            raise CapacityError("functional table exceeds the entry cap")
        table = np.array(table, dtype=np.float64)
        if table.shape != (n, n, size):
            raise ShapeError(f"expected table of shape {(n, n, size)}, got {table.shape}")
        if np.any(np.diff(times) <= 0):
            raise DomainError("times must be strictly increasing")
        iu = np.triu_indices(n)
        if not np.all(np.isfinite(table[iu])):
            raise DomainError("tensor coefficients must be finite")
        if np.any(table[iu][:, 0] != 1.0):
            raise DomainError("a multiplicative functional needs level-0 entry 1")
        self.d, self.depth, self.times, self.table = d, depth, times, table

    @classmethod
    def from_signature_path(cls, sp: SignaturePath) -> MultiplicativeFunctional:
        n = len(sp)
        table = np.zeros((n, n, sp.tensors.shape[1]))
        table[..., 0] = 1.0
        for i in range(n):
            table[i, i:] = sp.increments_from(i)
        return cls(sp.d, sp.depth, sp.times, table)

    @classmethod
    def from_function(cls, d: int, depth: int, times, fn) -> MultiplicativeFunctional:
        """Tabulate ``fn(s, t)`` (a TruncatedTensor or flat array) for s <= t."""
        times = np.asarray(times, dtype=np.float64)
        n = times.size
        size = check_shape(d, depth)
        table = np.zeros((n, n, size))
        table[..., 0] = 1.0
        for i in range(n):
            for j in range(i, n):
                x = fn(times[i], times[j])
                table[i, j] = x.flat if isinstance(x, TruncatedTensor) else np.asarray(x)
        return cls(d, depth, times, table)

    def __len__(self) -> int:
        return self.times.size

    def increment(self, i: int, j: int) -> TruncatedTensor:
        return GroupElement._wrap(self.d, self.depth, self.table[i, j].copy())

    def increments_from(self, i: int, js=None) -> np.ndarray:
        js = np.arange(i, len(self)) if js is None else np.asarray(js)
        return self.table[i, js]

    def pointwise_inverse(self) -> MultiplicativeFunctional:
        """(s, t) -> X_{s,t}^-1, each entry inverted algebraically."""
        n, size = len(self), self.table.shape[2]
        flat = self.table.reshape(-1, size)
        inv = _inverse_flat(flat, self.d, self.depth).reshape(n, n, size)
        inv[..., 0] = 1.0
        return MultiplicativeFunctional(self.d, self.depth, self.times, inv)


def holder_norm(p: SampledPath, alpha: float) -> float:
    """max over sample pairs of |X_t - X_s| / |t - s|^alpha."""
    alpha = _check_alpha(alpha)
    n = len(p)
    if n < 2:
        raise DomainError("Hölder norm needs at least two samples")
    best = 0.0
    for i in range(n - 1):
        js = _partners(i, n)
        num = np.linalg.norm(p.points[js] - p.points[i], axis=1)
        best = max(best, float(np.max(num / (p.times[js] - p.times[i]) ** alpha)))
    return best


def graded_holder(sp, alpha: float) -> np.ndarray:
    """Per-level constants max ||X^k_{s,t}|| / |t - s|^(k alpha), k = 1..depth.

    ``sp`` is a :class:`SignaturePath` or a :class:`MultiplicativeFunctional`.
    """
    alpha = _check_alpha(alpha)
    n = len(sp)
    if n < 2:
        raise DomainError("graded Hölder constants need at least two grid times")
    k = np.arange(1, sp.depth + 1)
    best = np.zeros(sp.depth)
    for i in range(n - 1):
        js = _partners(i, n)
        norms = level_norms(sp.increments_from(i, js), sp.d, sp.depth)[:, 1:]
        dt = (sp.times[js] - sp.times[i])[:, None]
        best = np.maximum(best, np.max(norms / dt ** (k * alpha), axis=0))
    return best


@dataclass(frozen=True)
class RhoHolder:
    """ρ_N-Hölder constant with the bounds implied by the graded constants.

    With G = max_k (k! C_k)^(1/k) built from :func:`graded_holder`, a
    weakly geometric functional satisfies G <= value <= 2 G.
    """

    value: float
    lower: float
    upper: float
    graded: np.ndarray


def _check_geometric(sp, tol: float) -> None:
    n = len(sp)
    for i in range(n):
        flat = sp.increments_from(i, np.arange(i, n)) if isinstance(sp, MultiplicativeFunctional) \
            else sp.tensors[i : i + 1]
        if flat.size and sp.depth >= 2:
            _, rel = shuffle_residuals(flat, sp.d, sp.depth)
            if rel.size and rel.max() > tol:
                raise DomainError(
                    f"not weakly geometric: shuffle residual {rel.max():.3g} at grid index {i}"
                )


def rho_holder(sp, alpha: float, tol: float = DEFAULT_TOL) -> RhoHolder:
    """max over grid pairs of ρ_N(1, X_{s,t}) / |t - s|^alpha."""
    alpha = _check_alpha(alpha)
    n = len(sp)
    if n < 2:
        raise DomainError("ρ-Hölder constant needs at least two grid times")
    if sp.depth < 1:
        raise DomainError("ρ-Hölder constant needs depth >= 1")
    _check_geometric(sp, tol)
    best = 0.0
    for i in range(n - 1):
        js = _partners(i, n)
        x = sp.increments_from(i, js)
        inv = _inverse_flat(x, sp.d, sp.depth)
        rho = _graded_max(level_norms(x, sp.d, sp.depth), sp.depth) + _graded_max(
            level_norms(inv, sp.d, sp.depth), sp.depth
        )
        best = max(best, float(np.max(rho / (sp.times[js] - sp.times[i]) ** alpha)))
    graded = graded_holder(sp, alpha)
    k = np.arange(1, sp.depth + 1)
    fact = np.array([math.factorial(int(j)) for j in k], dtype=np.float64)
    g = float(np.max((fact * graded) ** (1.0 / k)))
    return RhoHolder(best, g, 2.0 * g, graded)


@dataclass(frozen=True)
class ChenReport:
    ok: bool
    worst: tuple[int, int, int] | None
    worst_times: tuple[float, float, float] | None
    residual: float
    tol: float

    def __bool__(self) -> bool:
        return self.ok

    def to_json(self) -> dict:
        return {
            "pass": self.ok,
            "worst": None if self.worst is None else {
                "indices": list(self.worst),
                "times": list(self.worst_times),
                "residual": self.residual,
            },
            "tol": self.tol,
        }


def is_multiplicative(sp, tol: float = 1e-9) -> ChenReport:
    """Check X_{s,t} = X_{s,u} (x) X_{u,t} for all grid triples s < u < t.

    The residual is ||X_{s,t} - X_{s,u} X_{u,t}|| / (1 + ||X_{s,t}||).
    """
    n = len(sp)
    if n < 3:
        raise DomainError("Chen check needs at least three grid times")
    mf = sp if isinstance(sp, MultiplicativeFunctional) else MultiplicativeFunctional.from_signature_path(sp)
    worst, worst_res = None, -1.0
    for i in range(n - 2):
        for j in range(i + 2, n):
            us = np.arange(i + 1, j)
            prod = kernels.mul(mf.table[i, us], mf.table[us, j], mf.d, mf.depth)
            target = mf.table[i, j]
            res = np.linalg.norm(prod - target, axis=1) / (1.0 + np.linalg.norm(target))
            m = int(np.argmax(res))
            if res[m] > worst_res:
                worst_res, worst = float(res[m]), (i, int(us[m]), j)
    times = tuple(float(mf.times[q]) for q in worst)
    return ChenReport(worst_res <= tol, worst, times, worst_res, tol)


def minimal_depth(alpha: float) -> int:
    """Smallest truncation depth floor(1/alpha) admitted for exponent alpha."""
    alpha = _check_alpha(alpha)
    return math.floor(1.0 / alpha)


@dataclass(frozen=True)
class YoungResult:
    value: np.ndarray
    condition_met: bool | None


def young_integral(y: SampledPath, x: SampledPath, refine: int | None = None,
                   strict: bool = False, alpha: float | None = None,
                   beta: float | None = None) -> YoungResult:
    """Left-point Riemann-Stieltjes sum of Y against X over their common interval.

    ``y`` is scalar (integrated against each coordinate of ``x``) or has
    e*d coordinates read row-major as an e x d matrix. With ``refine`` the
    sum runs over a uniform grid of that many steps, both paths linearly
    interpolated; otherwise over the union of their sample times. ``alpha``
    and ``beta`` are the declared Hölder exponents of X and Y; in strict
    mode alpha + beta > 1 is required.
    """
    d = x.d
    if y.d != 1 and y.d % d:
        raise ShapeError(f"integrand dimension {y.d} is neither 1 nor a multiple of {d}")
    declared = alpha is not None and beta is not None
    condition = (float(alpha) + float(beta) > 1.0) if declared else None
    if strict and not condition:
        raise DomainError("strict mode needs declared exponents with alpha + beta > 1")
    lo = max(x.times[0], y.times[0])
    hi = min(x.times[-1], y.times[-1])
    if hi < lo:
        raise DomainError("paths have no common interval")
    if refine is not None:
        if refine < 1:
            raise DomainError("refinement must be >= 1")
        grid = np.linspace(lo, hi, int(refine) + 1)
    else:
        grid = np.union1d(x.times, y.times)
        grid = grid[(grid >= lo) & (grid <= hi)]
    xs = np.column_stack([np.interp(grid, x.times, x.points[:, i]) for i in range(d)])
    ys = np.column_stack([np.interp(grid, y.times, y.points[:, i]) for i in range(y.d)])
    dx = np.diff(xs, axis=0)
    left = ys[:-1]
    if y.d == 1:
        value = left[:, 0] @ dx
    else:
        e = y.d // d
        value = np.einsum("nij,nj->i", left.reshape(-1, e, d), dx)
    return YoungResult(np.atleast_1d(value), condition)
