"""Exhaustive wovenness decisions and subspace distances.

A weaving of frames ``F_0, ..., F_{M-1}`` (all with ``m`` vectors in the same
dimension) is selected by an :class:`Assignment`: index ``i`` takes its vector
from frame ``labels[i]``.  Labels are 0-based.  The oracle enumerates all
``M**m`` assignments in lexicographic order (label of index 0 most
significant) and reduces by min/max, which is order independent, so chunked or
threaded evaluation gives identical reports.
"""
from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass
from typing import Sequence, Tuple

import numpy as np

from .core import DEFAULT_TOL, Frame, is_frame_bounds, optimal_bounds, singular_spectrum
from .errors import EnumerationTooLarge, NotRieszBasis, ShapeMismatch

DEFAULT_CAP = 2**20
CHUNK = 4096


@dataclass(frozen=True)
class Assignment:
    labels: Tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "labels", tuple(int(x) for x in self.labels))

    def __len__(self):
        return len(self.labels)

    def one_based(self) -> Tuple[int, ...]:
        return tuple(x + 1 for x in self.labels)

    def subset(self, label: int = 0) -> Tuple[int, ...]:
        """Indices that take their vector from frame ``label``."""
        return tuple(i for i, x in enumerate(self.labels) if x == label)


@dataclass(frozen=True)
class WovenReport:
    universal_lower: float
    universal_upper: float
    is_woven: bool
    worst_assignment: Assignment
    assignments_checked: int


@dataclass(frozen=True)
class SubspaceDistance:
    d_w1_of_w2: float
    d_w2_of_w1: float
    d: float


def _stack(frames: Sequence[Frame]) -> np.ndarray:
    if len(frames) < 1:
        raise ShapeMismatch("need at least one frame")
    dim, m = frames[0].dim, frames[0].m
    for f in frames[1:]:
        if f.dim != dim or f.m != m:
            raise ShapeMismatch(f"frames differ in shape: ({dim}, {m}) vs ({f.dim}, {f.m})")
    return np.stack([f.vectors for f in frames])  # (M, m, dim)


def _check_labels(labels, M: int, m: int) -> np.ndarray:
    lab = np.asarray(labels, dtype=np.int64)
    if lab.shape != (m,):
        raise ShapeMismatch(f"assignment needs {m} labels, got {lab.size}")
    if lab.size and (lab.min() < 0 or lab.max() >= M):
        raise ShapeMismatch(f"labels must lie in 0..{M - 1}")
    return lab


def weave(frames: Sequence[Frame], a) -> Frame:
    """Return the family whose ``i``-th vector comes from ``frames[a.labels[i]]``."""
    stack = _stack(frames)
    M, m, dim = stack.shape
    labels = a.labels if isinstance(a, Assignment) else a
    lab = _check_labels(labels, M, m)
    return Frame(dim, stack[lab, np.arange(m)], frames[0].tol)


def enumeration_size(M: int, m: int) -> int:
    return M**m


def _labels_block(start: int, stop: int, M: int, m: int) -> np.ndarray:
    k = np.arange(start, stop, dtype=np.int64)
    powers = M ** np.arange(m - 1, -1, -1, dtype=np.int64)
    return (k[:, None] // powers[None, :]) % M


def _weavings(stack: np.ndarray, labels: np.ndarray) -> np.ndarray:
    """Batch of weaving synthesis matrices, shape ``(batch, dim, m)``."""
    m = stack.shape[1]
    return np.swapaxes(stack[labels, np.arange(m)], 1, 2)


def _block_extremes(stack, start, stop):
    M, m, _ = stack.shape
    labels = _labels_block(start, stop, M, m)
    s = singular_spectrum(_weavings(stack, labels))
    lo = s[:, -1] ** 2
    hi = s[:, 0] ** 2
    j = int(np.argmin(lo))  # first minimiser within the block
    return float(lo[j]), start + j, float(hi.max())


def woven_oracle(frames: Sequence[Frame], tol: float = DEFAULT_TOL, cap: int = DEFAULT_CAP,
                 workers: int = 1) -> WovenReport:
    """Decide wovenness by enumerating every assignment.

    ``universal_lower`` is the smallest optimal lower bound over all weavings
    and ``universal_upper`` the largest optimal upper bound; the family is
    woven iff ``universal_lower > tol * universal_upper``.
    """
    stack = _stack(frames)
    M, m, _ = stack.shape
    total = enumeration_size(M, m)
    if total > cap:
        raise EnumerationTooLarge(total, cap)
    starts = list(range(0, total, CHUNK))
    jobs = [(s, min(s + CHUNK, total)) for s in starts]
    if workers > 1 and len(jobs) > 1:
        with ThreadPoolExecutor(workers) as pool:
            parts = list(pool.map(lambda j: _block_extremes(stack, *j), jobs))
    else:
        parts = [_block_extremes(stack, *j) for j in jobs]
    lower, worst, upper = math.inf, 0, 0.0
    for lo, idx, hi in parts:  # blocks are in enumeration order: strict < keeps the first
        if lo < lower:
            lower, worst = lo, idx
        upper = max(upper, hi)
    worst_labels = _labels_block(worst, worst + 1, M, m)[0]
    return WovenReport(
        universal_lower=lower,
        universal_upper=upper,
        is_woven=is_frame_bounds(lower, upper, tol),
        worst_assignment=Assignment(worst_labels),
        assignments_checked=total,
    )


def _spans(matrix: np.ndarray, tol: float) -> bool:
    """Rank test by pivoted Gram-Schmidt, deliberately independent of the SVD path."""
    d = matrix.shape[0]
    if matrix.shape[1] < d:
        return False
    cols = np.array(matrix, dtype=complex)
    norms = np.linalg.norm(cols, axis=0)
    scale = norms.max()
    if scale == 0:
        return False
    Q = np.zeros((d, 0), dtype=complex)
    for _ in range(d):
        resid = cols - Q @ (Q.conj().T @ cols)
        resid = resid - Q @ (Q.conj().T @ resid)
        rn = np.linalg.norm(resid, axis=0)
        k = int(np.argmax(rn))
        if rn[k] ** 2 <= tol * scale**2:
            return False
        Q = np.column_stack([Q, resid[:, k] / rn[k]])
    return True


def weakly_woven(frames: Sequence[Frame], tol: float = DEFAULT_TOL, cap: int = DEFAULT_CAP):
    """Spanning-only verdict: does every weaving span the space?

    Returns ``(verdict, first_failing_assignment_or_None)``.
    """
    stack = _stack(frames)
    M, m, _ = stack.shape
    total = enumeration_size(M, m)
    if total > cap:
        raise EnumerationTooLarge(total, cap)
    for start in range(0, total, CHUNK):
        labels = _labels_block(start, min(start + CHUNK, total), M, m)
        for lab, W in zip(labels, _weavings(stack, labels)):
            if not _spans(W, tol):
                return False, Assignment(lab)
    return True, None


def iter_weavings(frames: Sequence[Frame]):
    """Yield ``(assignment, weaving synthesis matrix)`` in enumeration order."""
    stack = _stack(frames)
    M, m, _ = stack.shape
    total = enumeration_size(M, m)
    for start in range(0, total, CHUNK):
        labels = _labels_block(start, min(start + CHUNK, total), M, m)
        for lab, W in zip(labels, _weavings(stack, labels)):
            yield Assignment(lab), W


def _orthonormal_basis(vectors, dim: int, rtol: float) -> np.ndarray:
    V = np.asarray(vectors, dtype=complex).reshape(-1, dim).T  # columns
    if V.shape[1] == 0:
        return np.zeros((dim, 0), dtype=complex)
    u, s, _ = np.linalg.svd(V, full_matrices=False)
    if s.size == 0 or s[0] == 0:
        return np.zeros((dim, 0), dtype=complex)
    r = int(np.sum(s > rtol * s[0]))
    return u[:, :r]


def _one_sided(Q1: np.ndarray, Q2: np.ndarray) -> float:
    """``inf{||f - g|| : f in W1, g unit in W2}`` = smallest singular value of ``(I - P1) Q2``."""
    if Q2.shape[1] == 0:
        return math.inf
    R = Q2 - Q1 @ (Q1.conj().T @ Q2)
    return float(np.linalg.svd(R, compute_uv=False)[-1])


def subspace_distance(basis1, basis2, dim: int | None = None, rtol: float = 1e-12) -> SubspaceDistance:
    """Distance between ``W1 = span(basis1)`` and ``W2 = span(basis2)``.

    Either list may be empty (the zero subspace); pass ``dim`` in that case.
    A one-sided infimum over an empty unit sphere is ``inf``.
    """
    if dim is None:
        for b in (basis1, basis2):
            if len(b):
                dim = np.asarray(b[0]).size
                break
        else:
            raise ShapeMismatch("dim is required when both spanning sets are empty")
    for b in (basis1, basis2):
        for v in b:
            if np.asarray(v).size != dim:
                raise ShapeMismatch(f"vectors must have {dim} entries")
    Q1 = _orthonormal_basis(basis1, dim, rtol)
    Q2 = _orthonormal_basis(basis2, dim, rtol)
    a = _one_sided(Q1, Q2)
    b = _one_sided(Q2, Q1)
    return SubspaceDistance(a, b, min(a, b))


def _require_riesz(f: Frame) -> None:
    if f.m != f.dim:
        raise NotRieszBasis(f"a Riesz basis needs m == dim, got m={f.m}, dim={f.dim}")
    b = optimal_bounds(f)
    if not is_frame_bounds(b.lower, b.upper, f.tol):
        raise NotRieszBasis("vectors are linearly dependent")


def partition_distances(phi: Frame, psi: Frame, cap: int = DEFAULT_CAP):
    """Yield ``(assignment, distance)`` for every ``J``: label 0 = ``J`` (from ``phi``), 1 = ``J^c``."""
    _require_riesz(phi)
    _require_riesz(psi)
    if phi.dim != psi.dim:
        raise ShapeMismatch("frames live in different dimensions")
    m = phi.m
    if 2**m > cap:
        raise EnumerationTooLarge(2**m, cap)
    for lab in _labels_block(0, 2**m, 2, m):
        J = lab == 0
        dist = subspace_distance(phi.vectors[J], psi.vectors[~J], dim=phi.dim)
        yield Assignment(lab), dist.d


def min_partition_distance(phi: Frame, psi: Frame, cap: int = DEFAULT_CAP):
    """Smallest ``d(span phi_J, span psi_{J^c})`` over all ``J`` and the first minimiser."""
    best, arg = math.inf, None
    for a, d in partition_distances(phi, psi, cap):
        if d < best:
            best, arg = d, a
    return best, arg
