"""Frame constructions: the leveled Parseval example, seeded random frames, harmonic frames."""
from __future__ import annotations

import math

import numpy as np

from .core import DEFAULT_TOL, Frame, frame_from_synthesis, frame_operator, require_frame
from .duality import bessel_sequence
from .errors import InfeasibleShape


def leveled_example(d: int):
    """Leveled Parseval frame truncated at level ``d`` and its null direction.

    Level ``k`` holds ``k`` copies of ``e_k / sqrt(k)``.  The companion
    sequence holds the zero vector at level 1 and, at level ``k >= 2``,
    ``k - 1`` copies of ``e_k / ((k-1) sqrt(k))`` followed by ``-e_k / sqrt(k)``.
    Level ``k`` of the companion has frame-operator entry ``1/(k-1)``, so its
    Bessel bound is 1, and each level cancels against the frame.
    """
    if d < 2:
        raise InfeasibleShape("the example needs at least two levels")
    phi, u = [], []
    for k in range(1, d + 1):
        e = np.zeros(d)
        e[k - 1] = 1.0
        r = math.sqrt(k)
        phi.extend([e / r] * k)
        if k == 1:
            u.append(np.zeros(d))
        else:
            u.extend([e / ((k - 1) * r)] * (k - 1))
            u.append(-e / r)
    return Frame(d, phi), bessel_sequence(d, u)


def random_unitary(n: int, rng: np.random.Generator, field: str = "complex") -> np.ndarray:
    z = rng.standard_normal((n, n))
    if field == "complex":
        z = (z + 1j * rng.standard_normal((n, n))) / math.sqrt(2)
    q, r = np.linalg.qr(z)
    ph = np.diag(r).copy()
    ph[ph == 0] = 1
    return q * (ph / np.abs(ph))


def random_frame(dim: int, m: int, target_bounds=(1.0, 1.0), seed=None, field: str = "complex",
                 tol: float = DEFAULT_TOL) -> Frame:
    """Seeded frame with prescribed optimal bounds ``(A, B)``.

    Synthesis matrix ``U diag(sigma) V^H`` with random unitaries and
    ``sigma**2`` spread between ``A`` and ``B`` (extremes attained exactly).
    """
    A, B = map(float, target_bounds)
    if dim < 1 or m < dim:
        raise InfeasibleShape(f"need m >= dim >= 1, got dim={dim}, m={m}")
    if not (0 < A <= B < math.inf):
        raise InfeasibleShape(f"need 0 < A <= B, got ({A}, {B})")
    if dim == 1 and A != B:
        raise InfeasibleShape("a one-dimensional frame has equal optimal bounds")
    rng = np.random.default_rng(seed)
    u = random_unitary(dim, rng, field)
    v = random_unitary(m, rng, field)
    sq = np.sort(rng.uniform(A, B, dim))[::-1]
    sq[0], sq[-1] = B, A
    phi = u @ np.diag(np.sqrt(sq)) @ v.conj().T[:dim]
    return frame_from_synthesis(phi, tol)


def random_riesz_basis(dim: int, seed=None, field: str = "complex", cond: float = 4.0) -> Frame:
    """Riesz basis with bounds drawn in ``[1/cond, 1]``."""
    rng = np.random.default_rng(seed)
    A = rng.uniform(1.0 / cond, 1.0)
    return random_frame(dim, dim, (A, 1.0), seed=rng, field=field)


def gaussian_frame(dim: int, m: int, seed=None, field: str = "complex") -> Frame:
    rng = np.random.default_rng(seed)
    z = rng.standard_normal((dim, m))
    if field == "complex":
        z = z + 1j * rng.standard_normal((dim, m))
    return frame_from_synthesis(z / math.sqrt(2 * m))


def harmonic_frame(dim: int, m: int) -> Frame:
    """Rows ``0..dim-1`` of the ``m``-point DFT, scaled to a Parseval frame."""
    if m < dim:
        raise InfeasibleShape(f"need m >= dim, got dim={dim}, m={m}")
    k = np.arange(dim)[:, None]
    i = np.arange(m)[None, :]
    return frame_from_synthesis(np.exp(2j * np.pi * k * i / m) / math.sqrt(m))


def parsevalize(frame: Frame) -> Frame:
    """``{S^{-1/2} phi_i}``, the canonical Parseval frame."""
    require_frame(frame)
    w, V = np.linalg.eigh(frame_operator(frame))
    root_inv = (V / np.sqrt(w)) @ V.conj().T
    return frame_from_synthesis(root_inv @ frame.synthesis, frame.tol)


def tight_frame(dim: int, m: int, A: float, seed=None, field: str = "complex") -> Frame:
    return random_frame(dim, m, (A, A), seed=seed, field=field)

