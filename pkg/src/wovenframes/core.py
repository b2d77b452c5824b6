"""Frames in C^d: synthesis/analysis/frame operators, optimal bounds, classification.

Conventions: a frame of ``m`` vectors in dimension ``d`` is stored as an
``(m, d)`` complex array of vectors.  The synthesis operator is the ``(d, m)``
matrix whose columns are the vectors, the analysis operator is its conjugate
transpose, and the inner product is linear in the first slot,
``<f, g> = sum(f * conj(g))``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple, Optional

import numpy as np

from .errors import DimensionMismatch, EmptyFamily, NonFiniteEntry, NotAFrame

DEFAULT_TOL = 1e-10


def _readonly(a: np.ndarray) -> np.ndarray:
    a.setflags(write=False)
    return a


@dataclass(frozen=True, eq=False)
class Frame:
    """A finite family of vectors in C^dim.

    Construction validates shape and finiteness but does not require the
    family to span; use :func:`classify` for that.
    """

    dim: int
    vectors: np.ndarray
    tol: float = DEFAULT_TOL

    def __post_init__(self):
        dim = int(self.dim)
        if dim < 1:
            raise DimensionMismatch(f"dim must be positive, got {dim}")
        rows = self.vectors
        if isinstance(rows, np.ndarray) and rows.ndim == 2:
            arr = np.array(rows, dtype=complex)
        else:
            rows = list(rows)
            if len(rows) == 0:
                raise EmptyFamily("a frame needs at least one vector")
            for i, v in enumerate(rows):
                n = np.size(v)
                if np.ndim(v) != 1 or n != dim:
                    raise DimensionMismatch(f"vector {i} has {n} entries, expected {dim}")
            arr = np.array(rows, dtype=complex).reshape(len(rows), dim)
        if arr.shape[0] == 0:
            raise EmptyFamily("a frame needs at least one vector")
        if arr.shape[1] != dim:
            raise DimensionMismatch(f"vectors have {arr.shape[1]} entries, expected {dim}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteEntry("frame vectors must have finite entries")
        if not (self.tol >= 0 and np.isfinite(self.tol)):
            raise ValueError("tol must be a finite nonnegative number")
        object.__setattr__(self, "dim", dim)
        object.__setattr__(self, "vectors", _readonly(arr))

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def synthesis(self) -> np.ndarray:
        """``(dim, m)`` matrix with the frame vectors as columns."""
        return self.vectors.T

    def __len__(self):
        return self.m

    def __repr__(self):
        return f"Frame(dim={self.dim}, m={self.m}, tol={self.tol:g})"


def make_frame(dim: int, vectors, tol: float = DEFAULT_TOL) -> Frame:
    return Frame(dim, vectors, tol)


def frame_from_synthesis(matrix, tol: float = DEFAULT_TOL) -> Frame:
    """Build a frame from a ``(dim, m)`` matrix whose columns are the vectors."""
    matrix = np.asarray(matrix)
    if matrix.ndim != 2:
        raise DimensionMismatch("synthesis matrix must be two-dimensional")
    return Frame(matrix.shape[0], matrix.T, tol)


class OperatorViews(NamedTuple):
    synthesis: np.ndarray  # (dim, m): coefficients -> vector
    analysis: np.ndarray  # (m, dim): vector -> coefficients <f, phi_i>
    frame_operator: np.ndarray  # (dim, dim)


@dataclass(frozen=True)
class FrameBounds:
    lower: float
    upper: float
    optimal: bool = True


@dataclass(frozen=True)
class FrameClass:
    is_bessel_only: bool
    is_frame: bool
    is_riesz_basis: bool
    tight_constant: Optional[float]
    is_parseval: bool
    nearly_parseval_eps: float
    nearly_equal_norm_eps: float
    equal_norm_center: float


def frame_operator(frame: Frame) -> np.ndarray:
    phi = frame.synthesis
    return phi @ phi.conj().T


def operator_views(frame: Frame) -> OperatorViews:
    phi = frame.synthesis
    return OperatorViews(phi, phi.conj().T, phi @ phi.conj().T)


def synthesize(frame: Frame, coefficients) -> np.ndarray:
    """Return ``sum_i c_i phi_i``."""
    c = np.asarray(coefficients, dtype=complex)
    if c.shape != (frame.m,):
        raise DimensionMismatch(f"expected {frame.m} coefficients, got shape {c.shape}")
    return frame.synthesis @ c


def analyze(frame: Frame, f) -> np.ndarray:
    """Return the coefficients ``<f, phi_i>``."""
    f = np.asarray(f, dtype=complex)
    if f.shape != (frame.dim,):
        raise DimensionMismatch(f"expected a vector of length {frame.dim}, got shape {f.shape}")
    return frame.vectors.conj() @ f


def singular_spectrum(matrix: np.ndarray) -> np.ndarray:
    """Singular values of a ``(d, m)`` matrix, padded with zeros up to ``d``.

    Padding makes the smallest entry the square root of the smallest
    eigenvalue of ``matrix @ matrix^H`` even when ``m < d``.
    """
    d, m = matrix.shape[-2:]
    s = np.linalg.svd(matrix, compute_uv=False)
    if m < d:
        pad = np.zeros(s.shape[:-1] + (d - m,))
        s = np.concatenate([s, pad], axis=-1)
    return s


def spectral_norm(matrix) -> float:
    matrix = np.asarray(matrix)
    if matrix.size == 0:
        return 0.0
    return float(np.linalg.norm(matrix, 2))


def optimal_bounds(frame: Frame) -> FrameBounds:
    s = singular_spectrum(frame.synthesis)
    return FrameBounds(float(s[-1] ** 2), float(s[0] ** 2), True)


def is_frame_bounds(lower: float, upper: float, tol: float = DEFAULT_TOL) -> bool:
    """Scale-invariant frame test ``lower > tol * upper`` (false for the zero family)."""
    return upper > 0 and lower > tol * upper


def classify(frame: Frame) -> FrameClass:
    b = optimal_bounds(frame)
    tol = frame.tol
    is_frame = is_frame_bounds(b.lower, b.upper, tol)
    tight = None
    if is_frame and b.upper - b.lower <= tol * b.upper:
        tight = 0.5 * (b.lower + b.upper)
    is_parseval = tight is not None and abs(tight - 1.0) <= tol
    if is_parseval:
        tight = 1.0
    norms = np.linalg.norm(frame.vectors, axis=1)
    center = float(norms.mean())
    if center > 0:
        en_eps = float(np.max(np.abs(norms - center)) / center)
    else:
        en_eps = float("inf")
    return FrameClass(
        is_bessel_only=not is_frame,
        is_frame=is_frame,
        is_riesz_basis=is_frame and frame.m == frame.dim,
        tight_constant=tight,
        is_parseval=is_parseval,
        nearly_parseval_eps=max(1.0 - b.lower, b.upper - 1.0),
        nearly_equal_norm_eps=en_eps,
        equal_norm_center=center,
    )


def require_frame(frame: Frame) -> FrameBounds:
    b = optimal_bounds(frame)
    if not is_frame_bounds(b.lower, b.upper, frame.tol):
        raise NotAFrame(f"family is not a frame (bounds {b.lower:.3g}, {b.upper:.3g})")
    return b


def as_operator(T, dim: int) -> np.ndarray:
    T = np.asarray(T, dtype=complex)
    if T.shape != (dim, dim):
        raise DimensionMismatch(f"operator must be {dim}x{dim}, got shape {T.shape}")
    if not np.all(np.isfinite(T)):
        raise NonFiniteEntry("operator has non-finite entries")
    return T


def apply_operator(T, frame: Frame) -> Frame:
    """Return ``{T phi_i}``."""
    T = as_operator(T, frame.dim)
    return Frame(frame.dim, (T @ frame.synthesis).T, frame.tol)
