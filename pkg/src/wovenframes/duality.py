"""Canonical, alternate and approximate duals; excess and null Bessel directions."""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from .core import (
    DEFAULT_TOL,
    Frame,
    as_operator,
    frame_from_synthesis,
    frame_operator,
    require_frame,
    singular_spectrum,
    spectral_norm,
)
from .errors import (
    DimensionMismatch,
    DirectionNotNull,
    HypothesisFailed,
    NotAFrame,
    ThetaNotNull,
    ZeroDirection,
    ZeroExcess,
)

# Relative threshold on squared singular values, shared with the frame test.
RANK_TOL = DEFAULT_TOL


@dataclass(frozen=True, eq=False)
class BesselSequence:
    dim: int
    vectors: np.ndarray  # (m, dim)
    upper_bound: float

    @property
    def m(self) -> int:
        return self.vectors.shape[0]

    @property
    def synthesis(self) -> np.ndarray:
        return self.vectors.T

    def as_frame(self, tol: float = DEFAULT_TOL) -> Frame:
        return Frame(self.dim, self.vectors, tol)


def bessel_sequence(dim: int, vectors) -> BesselSequence:
    """Wrap a family as a Bessel sequence with its optimal upper bound."""
    fam = Frame(dim, vectors)
    s = singular_spectrum(fam.synthesis)
    return BesselSequence(fam.dim, fam.vectors, float(s[0] ** 2))


def zero_bessel(dim: int, m: int) -> BesselSequence:
    return BesselSequence(dim, np.zeros((m, dim), dtype=complex), 0.0)


@dataclass(frozen=True, eq=False)
class DualFamily:
    """One-parameter family ``member(a) = base + a * direction``.

    Members with ``0 < a < epsilon_star`` are (approximate) duals woven with the
    original frame, with universal lower bound at least
    ``target - quad * a**2 - lin * a``.
    """

    base: Frame
    direction: BesselSequence
    epsilon_star: float
    kind: str  # "alternate" or "approximate"
    target: float
    quad: float
    lin: float

    def member(self, alpha: float) -> Frame:
        vecs = self.base.vectors + alpha * self.direction.vectors
        return Frame(self.base.dim, vecs, self.base.tol)

    def admits(self, alpha: float) -> bool:
        return 0 < alpha < self.epsilon_star

    def lower_bound(self, alpha: float) -> float:
        return self.target - self.quad * alpha**2 - self.lin * alpha


def _positive_root(quad: float, lin: float, target: float) -> float:
    """Positive root of ``quad*x**2 + lin*x = target`` (``inf`` when both coefficients vanish)."""
    if quad == 0 and lin == 0:
        return math.inf
    if quad == 0:
        return target / lin
    # cancellation-free form of (-lin + sqrt(lin^2 + 4 quad target)) / (2 quad)
    return 2.0 * target / (lin + math.sqrt(lin * lin + 4.0 * quad * target))


def _check_pair(frame: Frame, other) -> None:
    if other.dim != frame.dim or other.m != frame.m:
        raise DimensionMismatch(
            f"families differ in shape: ({frame.dim}, {frame.m}) vs ({other.dim}, {other.m})"
        )


def canonical_dual(frame: Frame) -> Frame:
    require_frame(frame)
    S = frame_operator(frame)
    return frame_from_synthesis(np.linalg.solve(S, frame.synthesis), frame.tol)


def dual_defect(frame: Frame, psi) -> float:
    """Largest probe residual ``||sum_i <e_k, psi_i> phi_i - e_k||`` over the standard basis."""
    _check_pair(frame, psi)
    R = frame.synthesis @ psi.synthesis.conj().T - np.eye(frame.dim)
    return float(np.max(np.linalg.norm(R, axis=0)))


def is_dual(frame: Frame, psi: Frame, tol: float = DEFAULT_TOL) -> bool:
    return dual_defect(frame, psi) <= tol


def approximate_dual_defect(frame: Frame, psi) -> float:
    """``||I - T_psi T_phi^*||``; below 1 means ``psi`` is an approximate dual."""
    _check_pair(frame, psi)
    return spectral_norm(np.eye(frame.dim) - psi.synthesis @ frame.synthesis.conj().T)


def _rank(s: np.ndarray) -> int:
    if s.size == 0 or s[0] == 0:
        return 0
    return int(np.sum(s**2 > RANK_TOL * s[0] ** 2))


def excess_and_kernel(frame: Frame):
    """Return ``(excess, kernel_basis)``.

    ``kernel_basis`` is an ``(excess, m)`` array whose rows are an orthonormal
    basis of the null space of the synthesis operator.
    """
    phi = frame.synthesis
    _, s, vh = np.linalg.svd(phi, full_matrices=True)
    r = _rank(s)
    kernel = vh[r:].conj()
    return frame.m - r, kernel


def null_bessel(frame: Frame, coefficients) -> BesselSequence:
    """Bessel sequence ``U`` with ``sum_i <f, u_i> phi_i = 0`` for every ``f``.

    ``coefficients`` has shape ``(dim, excess)``: row ``k`` gives the kernel
    coordinates of the coefficient vector ``(<e_k, u_i>)_i``, so that
    ``U^H = N @ coefficients.T`` with ``N`` the kernel basis as columns.
    """
    excess, kernel = excess_and_kernel(frame)
    C = np.asarray(coefficients, dtype=complex)
    if C.size == 0:
        return zero_bessel(frame.dim, frame.m)
    if excess == 0:
        raise ZeroExcess("frame has zero excess; only the zero sequence is annihilated")
    if C.shape != (frame.dim, excess):
        raise DimensionMismatch(f"coefficients must have shape ({frame.dim}, {excess}), got {C.shape}")
    u_h = kernel.T @ C.T  # (m, dim), columns in Ker T_phi
    return bessel_sequence(frame.dim, u_h.conj())


def null_defect(frame: Frame, U: BesselSequence) -> float:
    """``||T_phi T_U^*||``, zero exactly when ``U`` is annihilated as in the dual parametrisation."""
    _check_pair(frame, U)
    return spectral_norm(frame.synthesis @ U.synthesis.conj().T)


def null_tolerance(frame: Frame, U_norm: float) -> float:
    return frame.tol * max(1.0, spectral_norm(frame.synthesis) * U_norm)


def alternate_dual_family(frame: Frame, U: BesselSequence) -> DualFamily:
    """Alternate duals ``S^{-1} phi + a U`` woven with ``phi`` for ``0 < a < epsilon_star``."""
    bounds = require_frame(frame)
    _check_pair(frame, U)
    A, B = bounds.lower, bounds.upper
    if null_defect(frame, U) > null_tolerance(frame, math.sqrt(U.upper_bound)):
        raise DirectionNotNull("direction is not annihilated by the synthesis operator")
    if U.upper_bound == 0:
        raise ZeroDirection("direction has Bessel bound 0; the family is a single point")
    S = frame_operator(frame)
    Sinv = np.linalg.inv(S)
    r = spectral_norm(np.eye(frame.dim) - Sinv)
    if not r * r < A / B:
        raise HypothesisFailed(
            f"||I - S^-1||^2 = {r * r:.6g} is not below A/B = {A / B:.6g}", "‖I−S⁻¹‖²<A/B"
        )
    target = (math.sqrt(A) - math.sqrt(B) * r) ** 2
    quad = U.upper_bound
    lin = 2.0 * math.sqrt(U.upper_bound / A)
    base = frame_from_synthesis(Sinv @ frame.synthesis, frame.tol)
    return DualFamily(base, U, _positive_root(quad, lin, target), "alternate", target, quad, lin)


def approximate_dual_family(frame: Frame, T, theta) -> DualFamily:
    """Approximate duals ``T^* S^{-1} phi + a theta^* delta`` woven with ``phi``.

    ``theta`` is the ``(m, dim)`` matrix of a map into coefficient space with
    ``T_phi theta = 0``; its conjugate transpose supplies the direction vectors.
    """
    bounds = require_frame(frame)
    A, B = bounds.lower, bounds.upper
    d = frame.dim
    T = as_operator(T, d)
    theta = np.asarray(theta, dtype=complex)
    if theta.shape != (frame.m, d):
        raise DimensionMismatch(f"theta must have shape ({frame.m}, {d}), got {theta.shape}")
    th_norm = spectral_norm(theta)
    if spectral_norm(frame.synthesis @ theta) > null_tolerance(frame, th_norm):
        raise ThetaNotNull("T_phi theta is not zero")
    eye = np.eye(d)
    r0 = spectral_norm(eye - T)
    if not r0 < 1:
        raise HypothesisFailed(f"||I - T|| = {r0:.6g} is not below 1", "‖I−T‖<1")
    Sinv = np.linalg.inv(frame_operator(frame))
    r = spectral_norm(eye - T.conj().T @ Sinv)
    if not r * r < A / B:
        raise HypothesisFailed(
            f"||I - T^* S^-1||^2 = {r * r:.6g} is not below A/B = {A / B:.6g}", "‖I−T*S⁻¹‖²<A/B"
        )
    target = (math.sqrt(A) - math.sqrt(B) * r) ** 2
    quad = th_norm**2
    lin = 2.0 * th_norm * spectral_norm(Sinv @ T) * math.sqrt(B)
    base = frame_from_synthesis(T.conj().T @ Sinv @ frame.synthesis, frame.tol)
    direction = BesselSequence(d, theta.conj(), quad)
    return DualFamily(base, direction, _positive_root(quad, lin, target), "approximate",
                      target, quad, lin)


def riesz_decompose(frame: Frame, rtol: Optional[float] = None):
    """Split indices into a Riesz basis part and the redundant remainder.

    Greedy column pivoting: at each step take the vector with the largest
    residual norm after projecting out the vectors already chosen; ties (to
    relative 1e-12) go to the larger original norm, then the smaller index.
    Returns two sorted tuples ``(riesz_indices, redundant_indices)``.
    """
    bounds = require_frame(frame)
    rtol = frame.tol if rtol is None else rtol
    cols = frame.synthesis.copy()
    norms0 = np.linalg.norm(cols, axis=0)
    chosen = []
    Q = np.zeros((frame.dim, 0), dtype=complex)
    for _ in range(frame.dim):
        resid = cols - Q @ (Q.conj().T @ cols)
        resid = resid - Q @ (Q.conj().T @ resid)
        rn = np.linalg.norm(resid, axis=0)
        rn[chosen] = -1.0
        best = rn.max()
        if best**2 <= rtol * bounds.upper:
            raise NotAFrame("vectors do not span the space")
        ties = np.flatnonzero(rn >= best * (1 - 1e-12))
        k = int(ties[np.lexsort((ties, -norms0[ties]))][0])
        chosen.append(k)
        Q = np.column_stack([Q, resid[:, k] / rn[k]])
    riesz = tuple(sorted(chosen))
    redundant = tuple(i for i in range(frame.m) if i not in set(chosen))
    return riesz, redundant
