"""Membership tests for the free nilpotent group G^N(R^d) and its Lie algebra."""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from ._layout import get_entry_cap, offsets, tensor_size
from .errors import CapacityError, DomainError
from .tensor import GroupElement, TruncatedTensor, _same_shape, exp, mul
from .words import Word, enumerate_words, flat_index, shuffle

DEFAULT_TOL = 1e-8


@dataclass(frozen=True)
class Violation:
    """Worst shuffle-identity residual found by :func:`is_grouplike`.

    ``residual`` is |<a, u ш v> - <a, u><a, v>| and ``relative`` divides it
    by 1 + |<a, u><a, v>|, the quantity compared against the tolerance.
    """

    u: Word
    v: Word
    residual: float
    relative: float

    def to_json(self) -> dict:
        return {"u": list(self.u), "v": list(self.v), "residual": self.residual}


@dataclass(frozen=True)
class GrouplikeReport:
    ok: bool
    worst: Violation | None
    tol: float

    def __bool__(self) -> bool:
        return self.ok


@dataclass(frozen=True)
class _ShuffleTable:
    u_idx: np.ndarray
    v_idx: np.ndarray
    term_pair: np.ndarray
    term_idx: np.ndarray
    term_coef: np.ndarray
    pairs: tuple[tuple[Word, Word], ...]


@lru_cache(maxsize=64)
def _shuffle_table(d: int, depth: int) -> _ShuffleTable:
    words = [w for w in enumerate_words(d, depth - 1) if w] if depth >= 2 else []
    pairs, u_idx, v_idx = [], [], []
    term_pair, term_idx, term_coef = [], [], []
    for u in words:
        iu = flat_index(u, d)
        for v in words:
            iv = flat_index(v, d)
            # ш is commutative, so one ordering of each pair suffices
            if iv < iu or len(u) + len(v) > depth:
                continue
            p = len(pairs)
            pairs.append((u, v))
            u_idx.append(iu)
            v_idx.append(iv)
            for w, c in shuffle(u, v).items():
                term_pair.append(p)
                term_idx.append(flat_index(w, d))
                term_coef.append(c)
        if len(term_idx) > get_entry_cap():
            raise CapacityError("shuffle check table exceeds the entry cap")
    return _ShuffleTable(
        np.array(u_idx, dtype=np.intp),
        np.array(v_idx, dtype=np.intp),
        np.array(term_pair, dtype=np.intp),
        np.array(term_idx, dtype=np.intp),
        np.array(term_coef, dtype=np.float64),
        tuple(pairs),
    )


def shuffle_residuals(flat: np.ndarray, d: int, depth: int) -> tuple[np.ndarray, np.ndarray]:
    """Absolute and relative shuffle residuals for a batch (m, size).

    Returns two (m, n_pairs) arrays, columns ordered as the cached pair list.
    """
    flat = np.atleast_2d(flat)
    tab = _shuffle_table(d, depth)
    n = len(tab.pairs)
    prod = flat[:, tab.u_idx] * flat[:, tab.v_idx]
    lhs = np.zeros((flat.shape[0], n))
    np.add.at(lhs.T, tab.term_pair, (tab.term_coef * flat[:, tab.term_idx]).T)
    res = np.abs(lhs - prod)
    return res, res / (1.0 + np.abs(prod))


def is_grouplike(a: TruncatedTensor, tol: float = DEFAULT_TOL) -> GrouplikeReport:
    """Check that pairing with ``a`` is multiplicative over the shuffle product.

    Every pair of nonempty words with |u| + |v| <= depth is checked, and the
    pair with the largest relative residual is reported.
    """
    if a.flat[0] != 1.0:
        raise DomainError("group-like test needs π₀(a) = 1")
    tab = _shuffle_table(a.d, a.depth)
    if not tab.pairs:
        return GrouplikeReport(True, None, tol)
    res, rel = shuffle_residuals(a.flat, a.d, a.depth)
    j = int(np.argmax(rel[0]))
    u, v = tab.pairs[j]
    worst = Violation(u, v, float(res[0, j]), float(rel[0, j]))
    report = GrouplikeReport(bool(rel[0, j] <= tol), worst, tol)
    if isinstance(a, GroupElement):
        a.geometric = report.ok
    return report


@lru_cache(maxsize=64)
def _antipode_map(d: int, depth: int) -> tuple[np.ndarray, np.ndarray]:
    off = offsets(d, depth)
    perm = np.empty(tensor_size(d, depth), dtype=np.intp)
    sign = np.empty(tensor_size(d, depth))
    for k in range(depth + 1):
        idx = np.arange(d**k).reshape((d,) * k)
        perm[off[k] : off[k + 1]] = off[k] + idx.transpose().reshape(-1)
        sign[off[k] : off[k + 1]] = -1.0 if k % 2 else 1.0
    return perm, sign


def antipode_flat(flat: np.ndarray, d: int, depth: int) -> np.ndarray:
    perm, sign = _antipode_map(d, depth)
    return np.atleast_2d(flat)[:, perm] * sign


def grouplike_inverse(a: TruncatedTensor) -> TruncatedTensor:
    """Inverse of a character: <b, w> = (-1)^|w| <a, reversed w>.

    Agrees with :func:`roughsig.tensor.inverse` only when ``a`` is group-like.
    """
    if a.flat[0] != 1.0:
        raise DomainError("antipode inversion needs π₀(a) = 1")
    out = antipode_flat(a.flat, a.d, a.depth)[0]
    return GroupElement._wrap(a.d, a.depth, out)


def lie_bracket(a: TruncatedTensor, b: TruncatedTensor) -> TruncatedTensor:
    """Commutator ab - ba."""
    _same_shape(a, b)
    return mul(a, b) - mul(b, a)


def is_lie(x: TruncatedTensor, tol: float = DEFAULT_TOL) -> GrouplikeReport:
    """A tensor with π₀ = 0 is a Lie element iff its exponential is group-like."""
    if x.flat[0] != 0.0:
        raise DomainError("Lie test needs π₀(x) = 0")
    return is_grouplike(exp(x), tol)


def _independent_rows(rows: np.ndarray, tol: float = 1e-9) -> np.ndarray:
    """Row-reduce and keep a maximal independent subset (Gaussian elimination)."""
    basis: list[np.ndarray] = []
    pivots: list[int] = []
    kept = []
    for r, row in enumerate(rows):
        v = row.astype(np.float64).copy()
        for b, p in zip(basis, pivots):
            if v[p] != 0.0:
                v -= v[p] * b
        p = int(np.argmax(np.abs(v)))
        if abs(v[p]) > tol * max(1.0, np.abs(row).max()):
            basis.append(v / v[p])
            pivots.append(p)
            kept.append(r)
    return rows[kept]


def lie_project_dims(d: int, depth: int) -> list[int]:
    """Dimension of each homogeneous level 1..depth of the free Lie algebra.

    Level k+1 is spanned by brackets [e_i, y] with y running over a basis of
    level k; the span is measured by Gaussian elimination.
    """
    if d < 1 or depth < 1:
        raise DomainError("need d >= 1 and depth >= 1")
    if d**depth > get_entry_cap():
        raise CapacityError("bracket vectors exceed the entry cap")
    eye = np.eye(d)
    level = eye
    dims = [d]
    for _ in range(1, depth):
        gens = []
        for x in eye:
            for y in level:
                gens.append(np.outer(x, y).ravel() - np.outer(y, x).ravel())
        gens = np.array(gens) if gens else np.zeros((0, d * level.shape[1]))
        level = _independent_rows(gens) if len(gens) else gens
        dims.append(level.shape[0])
    return dims
