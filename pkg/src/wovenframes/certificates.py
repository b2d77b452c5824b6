"""Sufficient conditions for wovenness as fast, checkable certificates.

Each ``cert_*`` function evaluates the hypotheses of one sufficient condition
and returns a :class:`Certificate`.  ``holds`` is true exactly when every
reported margin is satisfied; ``implied_lower`` is then a universal lower
frame bound for the pair in ``subject``.  A failed certificate says nothing
about wovenness.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .core import (
    DEFAULT_TOL,
    Frame,
    apply_operator,
    as_operator,
    frame_from_synthesis,
    frame_operator,
    optimal_bounds,
    require_frame,
    spectral_norm,
)
from .duality import (
    BesselSequence,
    canonical_dual,
    excess_and_kernel,
    null_defect,
    null_tolerance,
    riesz_decompose,
)
from .errors import (
    DirectionNotNull,
    InfeasibleShape,
    InvalidAlpha,
    NotWovenInput,
    ShapeMismatch,
    SingularOperator,
    SpecInconsistent,
    ThetaNotNull,
)
from .weaving import DEFAULT_CAP, _require_riesz, min_partition_distance, woven_oracle

STRICT_SLACK = 1e-12


@dataclass(frozen=True)
class Margin:
    """One hypothesis inequality ``lhs < rhs`` (or ``lhs <= rhs`` when not strict)."""

    name: str
    lhs: float
    rhs: float
    strict: bool = True
    tol: float = 0.0

    @property
    def satisfied(self) -> bool:
        scale = abs(self.rhs) if self.rhs != 0 else 1.0
        if self.strict:
            return self.rhs - self.lhs > STRICT_SLACK * scale
        return self.lhs <= self.rhs + self.tol * max(scale, 1.0)

    def to_dict(self):
        return {"name": self.name, "lhs": self.lhs, "rhs": self.rhs,
                "strict": self.strict, "satisfied": self.satisfied}


@dataclass(frozen=True, eq=False)
class Certificate:
    kind: str
    holds: bool
    margins: tuple
    implied_lower: Optional[float]
    message: str
    subject: Optional[tuple] = None
    details: dict = field(default_factory=dict)

    def failing(self):
        return [m for m in self.margins if not m.satisfied]

    def to_dict(self):
        return {
            "kind": self.kind,
            "holds": self.holds,
            "margins": [m.to_dict() for m in self.margins],
            "implied_lower": self.implied_lower,
            "message": self.message,
            "details": self.details,
        }


def _certificate(kind, margins, implied, subject, message="", details=None) -> Certificate:
    margins = tuple(margins)
    holds = all(m.satisfied for m in margins)
    if not message:
        if holds:
            message = "all hypotheses hold"
        else:
            message = "hypothesis fails: " + ", ".join(m.name for m in margins if not m.satisfied)
    return Certificate(kind, holds, margins, implied if holds else None, message, subject,
                       details or {})


def _invertible(T: np.ndarray, tol: float) -> None:
    s = np.linalg.svd(T, compute_uv=False)
    if s[0] == 0 or s[-1] <= tol * s[0]:
        raise SingularOperator(f"operator is not invertible (condition number {s[0] / max(s[-1], 1e-300):.3g})")


def _plus(frame: Frame, direction: np.ndarray, alpha: float) -> Frame:
    return Frame(frame.dim, frame.vectors + alpha * direction, frame.tol)


# --- operator perturbation -------------------------------------------------------------

def cert_invertible_operator(phi: Frame, T) -> Certificate:
    """``phi`` and ``T phi`` are woven when ``||I - T||**2 < A/B``.

    Universal lower bound ``(sqrt(A) - sqrt(B) ||I - T^*||)**2``.
    """
    b = require_frame(phi)
    T = as_operator(T, phi.dim)
    _invertible(T, phi.tol)
    eye = np.eye(phi.dim)
    r = spectral_norm(eye - T)
    r_adj = spectral_norm(eye - T.conj().T)
    margins = [Margin("‖I−T‖²<A/B", r * r, b.lower / b.upper)]
    implied = (math.sqrt(b.lower) - math.sqrt(b.upper) * r_adj) ** 2
    return _certificate("invertible", margins, implied, (phi, apply_operator(T, phi)),
                        details={"A": b.lower, "B": b.upper, "norm_I_minus_T": r})


# --- duals -------------------------------------------------------------------------------

def _dual_constant(phi: Frame):
    b = require_frame(phi)
    Sinv = np.linalg.inv(frame_operator(phi))
    r = spectral_norm(np.eye(phi.dim) - Sinv)
    script_a = (math.sqrt(b.lower) - math.sqrt(b.upper) * r) ** 2
    return b, Sinv, r, script_a


def cert_dual_weaving(phi: Frame, U: BesselSequence, alpha: float) -> Certificate:
    """``phi`` is woven with the alternate dual ``S^{-1} phi + alpha U``."""
    if alpha < 0:
        raise InvalidAlpha("alpha must be nonnegative")
    b, Sinv, r, script_a = _dual_constant(phi)
    if U.dim != phi.dim or U.m != phi.m:
        raise ShapeMismatch("direction and frame differ in shape")
    if null_defect(phi, U) > null_tolerance(phi, math.sqrt(U.upper_bound)):
        raise DirectionNotNull("sum <f, u_i> phi_i is not identically zero")
    A, B, BU = b.lower, b.upper, U.upper_bound
    loss = alpha**2 * BU + 2 * alpha * math.sqrt(BU / A)
    margins = [
        Margin("‖I−S⁻¹‖²<A/B", r * r, A / B),
        Margin("α²B_U+2α√(B_U/A)<𝒜", loss, script_a),
    ]
    psi = _plus(frame_from_synthesis(Sinv @ phi.synthesis, phi.tol), U.vectors, alpha)
    return _certificate("dual", margins, script_a - loss, (phi, psi),
                        details={"A": A, "B": B, "B_U": BU, "script_A": script_a, "alpha": alpha})


def cert_approx_dual_weaving(phi: Frame, T, theta, alpha: float) -> Certificate:
    """``phi`` is woven with the approximate dual ``T^* S^{-1} phi + alpha theta^* delta``."""
    if alpha < 0:
        raise InvalidAlpha("alpha must be nonnegative")
    b = require_frame(phi)
    A, B = b.lower, b.upper
    d = phi.dim
    T = as_operator(T, d)
    theta = np.asarray(theta, dtype=complex)
    if theta.shape != (phi.m, d):
        raise ShapeMismatch(f"theta must have shape ({phi.m}, {d}), got {theta.shape}")
    th = spectral_norm(theta)
    if spectral_norm(phi.synthesis @ theta) > null_tolerance(phi, th):
        raise ThetaNotNull("T_phi theta is not zero")
    eye = np.eye(d)
    Sinv = np.linalg.inv(frame_operator(phi))
    r0 = spectral_norm(eye - T)
    r = spectral_norm(eye - T.conj().T @ Sinv)
    target = (math.sqrt(A) - math.sqrt(B) * r) ** 2
    loss = alpha**2 * th**2 + 2 * alpha * th * spectral_norm(Sinv @ T) * math.sqrt(B)
    margins = [
        Margin("‖I−T‖<1", r0, 1.0),
        Margin("‖I−T*S⁻¹‖²<A/B", r * r, A / B),
        Margin("α²‖θ‖²+2α‖θ‖‖S⁻¹T‖√B<(√A−√B‖I−T*S⁻¹‖)²", loss, target),
    ]
    base = frame_from_synthesis(T.conj().T @ Sinv @ phi.synthesis, phi.tol)
    psi = _plus(base, theta.conj(), alpha)
    return _certificate("approx-dual", margins, target - loss, (phi, psi),
                        details={"A": A, "B": B, "theta_norm": th, "target": target,
                                 "loss": loss, "alpha": alpha})


def cert_canonical_dual_woven(phi: Frame, reading: str = "frame", cap: int = DEFAULT_CAP) -> Certificate:
    """Sufficient conditions for ``phi`` being woven with its canonical dual.

    Three conditions are evaluated and every one that fires is reported:

    * ``riesz``: zero excess.  The enumeration oracle is also run when it fits
      under ``cap`` and its bound is used as ``implied_lower``.
    * ``small-redundancy``: the squared norms of the redundant vectors (after a
      pivoted Riesz/redundant split) sum to less than ``sqrt(A / B)``, where
      ``A`` is the oracle lower bound of the Riesz part woven with its image
      under ``S_phi`` (``reading="frame"``) or under the Riesz part's own frame
      operator (``reading="riesz"``).  The resulting bound
      ``(sqrt(A) - sqrt(B) * sum)**2`` holds for ``phi`` woven with
      ``S_phi phi``; multiplying every weaving by ``S_phi^{-1}`` turns it into
      ``bound / B**2`` for the canonical-dual pair.
    * ``commuting``: ``S^{-1} >= I`` and ``S`` commutes with every
      ``phi_i phi_i^*``; then every weaving's frame operator dominates ``S``.
    """
    if reading not in ("frame", "riesz"):
        raise ValueError("reading must be 'frame' or 'riesz'")
    b = require_frame(phi)
    A, B = b.lower, b.upper
    tol = phi.tol
    dual = canonical_dual(phi)
    S = frame_operator(phi)
    conditions = {}

    # riesz
    excess, _ = excess_and_kernel(phi)
    m_a = [Margin("E(φ)<1", float(excess), 1.0)]
    implied_a = None
    note_a = ""
    if excess == 0 and 2**phi.m <= cap:
        rep = woven_oracle([phi, dual], tol=tol, cap=cap)
        if rep.is_woven:
            implied_a = rep.universal_lower
        else:
            note_a = "oracle disagrees: Riesz basis not woven with its canonical dual"
            m_a.append(Margin("oracle discrepancy", 1.0, 0.0))
    conditions["riesz"] = (m_a, implied_a, note_a)

    # small-redundancy
    riesz_idx, redundant = riesz_decompose(phi)
    part = Frame(phi.dim, phi.vectors[list(riesz_idx)], tol)
    op = S if reading == "frame" else frame_operator(part)
    pair_rep = woven_oracle([part, apply_operator(op, part)], tol=tol, cap=cap)
    A_part = pair_rep.universal_lower
    red_sum = float(np.sum(np.linalg.norm(phi.vectors[list(redundant)], axis=1) ** 2)) if redundant else 0.0
    m_b = [Margin("Σ‖φ_i‖²<√(A/B)", red_sum, math.sqrt(A_part / B))]
    frame_pair_lower = (math.sqrt(A_part) - math.sqrt(B) * red_sum) ** 2
    conditions["small-redundancy"] = (m_b, frame_pair_lower / B**2, "")

    # commuting
    outer = np.einsum("id,ie->ide", phi.vectors, phi.vectors.conj())
    comm = S[None] @ outer - outer @ S[None]
    scale = B * max(float(np.max(np.linalg.norm(phi.vectors, axis=1) ** 2)), 1e-300)
    comm_defect = max(spectral_norm(c) for c in comm) / scale
    m_c = [
        Margin("λ_max(S)≤1 (S⁻¹≥I)", B, 1.0, strict=False, tol=tol),
        Margin("max_i‖[S,φ_iφ_i*]‖≤tol", comm_defect, tol, strict=False),
    ]
    conditions["commuting"] = (m_c, A, "")

    fired = [k for k, (ms, _, _) in conditions.items() if all(x.satisfied for x in ms)]
    details = {
        "reading": reading,
        "fired": fired,
        "excess": excess,
        "riesz_indices": list(riesz_idx),
        "redundant_indices": list(redundant),
        "riesz_part_pair_lower": A_part,
        "frame_operator_pair_lower": frame_pair_lower,
        "commutator_defect": comm_defect,
    }
    notes = [n for (_, _, n) in conditions.values() if n]
    if fired:
        margins = [x for k in fired for x in conditions[k][0]]
        implieds = [conditions[k][1] for k in fired if conditions[k][1] is not None]
        implied = max(implieds) if implieds else None
        message = "woven with canonical dual via " + ", ".join(fired)
    else:
        margins = [x for (ms, _, _) in conditions.values() for x in ms]
        implied = None
        message = "no sufficient condition applies"
    if notes:
        message += "; " + "; ".join(notes)
    return _certificate("canonical", margins, implied, (phi, dual), message, details)


# --- two operators on woven Riesz bases ------------------------------------------------------

def cert_two_operator(phi: Frame, psi: Frame, T1=None, T2=None, canonical: bool = False,
                      cap: int = DEFAULT_CAP) -> Certificate:
    """``T1 phi`` and ``T2 psi`` are woven when the smallest partition distance of
    ``(phi, psi)`` exceeds ``||T1 - T2|| * max(||T1^{-1}||, ||T2^{-1}||)``.

    With ``canonical=True`` the operators are ``S_phi^{-1}`` and ``S_psi^{-1}``.

    The implied bound: each weaving splits as ``x + y`` with both one-sided
    distances at least ``c = min(d1, d2, 1)``, so ``||x + y||**2 >= c**2 (||x||**2
    + ||y||**2) / 2``, and ``||x||**2 >= A_phi ||a||**2 / ||T1^{-1}||**2`` (same
    for ``y``), giving ``c**2 / 2 * min(A_phi / ||T1^{-1}||**2, A_psi / ||T2^{-1}||**2)``.
    """
    _require_riesz(phi)
    _require_riesz(psi)
    if phi.dim != psi.dim:
        raise ShapeMismatch("frames live in different dimensions")
    rep = woven_oracle([phi, psi], tol=phi.tol, cap=cap)
    if not rep.is_woven:
        raise NotWovenInput(f"input pair is not woven (worst assignment {rep.worst_assignment.one_based()})")
    if canonical:
        T1 = np.linalg.inv(frame_operator(phi))
        T2 = np.linalg.inv(frame_operator(psi))
    if T1 is None or T2 is None:
        raise ValueError("give T1 and T2, or canonical=True")
    T1 = as_operator(T1, phi.dim)
    T2 = as_operator(T2, phi.dim)
    _invertible(T1, phi.tol)
    _invertible(T2, phi.tol)
    c_min, argmin = min_partition_distance(phi, psi, cap)
    delta = spectral_norm(T1 - T2)
    n1 = spectral_norm(np.linalg.inv(T1))
    n2 = spectral_norm(np.linalg.inv(T2))
    d1 = (c_min / n1 - delta) / spectral_norm(T2)
    d2 = (c_min / n2 - delta) / spectral_norm(T1)
    c = min(d1, d2, 1.0)
    A_phi = optimal_bounds(phi).lower
    A_psi = optimal_bounds(psi).lower
    implied = 0.5 * c * c * min(A_phi / n1**2, A_psi / n2**2)
    margins = [Margin("max{‖T₁−T₂‖‖T₁⁻¹‖,‖T₁−T₂‖‖T₂⁻¹‖}<d_min", max(delta * n1, delta * n2), c_min)]
    return _certificate(
        "two-op", margins, implied, (apply_operator(T1, phi), apply_operator(T2, psi)),
        details={"d_min": c_min, "argmin": list(argmin.labels), "d1": d1, "d2": d2,
                 "operator_gap": delta, "canonical": canonical,
                 "input_universal_lower": rep.universal_lower},
    )


# --- admissible operators ---------------------------------------------------------------

@dataclass(frozen=True, eq=False)
class AdmissibleSpec:
    """Orthonormal families are ``(n, n)`` arrays whose rows are the vectors."""

    lambda_basis: np.ndarray
    omega_basis: np.ndarray
    alpha: np.ndarray
    beta: np.ndarray
    e_basis: np.ndarray


def eigen_spec(phi: Frame, e_basis=None, seed=None) -> AdmissibleSpec:
    """Spec with ``Lambda = Omega`` the eigenvectors of ``S_phi`` and ``alpha = beta`` its eigenvalues."""
    from .generators import random_unitary

    w, V = np.linalg.eigh(frame_operator(phi))
    if e_basis is None:
        e_basis = random_unitary(phi.dim, np.random.default_rng(seed)).T
    lam = V.T.copy()
    return AdmissibleSpec(lam, lam, w, w, np.asarray(e_basis, dtype=complex))


def admissible_operator(spec: AdmissibleSpec) -> np.ndarray:
    """The operator ``T`` with ``T^* lambda_i = sum_k sqrt(alpha_i/beta_k) <e_i, gamma_k> gamma_k``."""
    lam = np.asarray(spec.lambda_basis, dtype=complex)
    gam = np.asarray(spec.omega_basis, dtype=complex)
    e = np.asarray(spec.e_basis, dtype=complex)
    images = _admissible_images(spec, lam, gam, e)  # rows: T^* lambda_i
    t_adj = images.T @ lam.conj()  # columns of lam.T are orthonormal
    return t_adj.conj().T


def _admissible_images(spec, lam, gam, e):
    alpha = np.asarray(spec.alpha, dtype=float)
    beta = np.asarray(spec.beta, dtype=float)
    inner = e @ gam.conj().T  # inner[i, k] = <e_i, gamma_k>
    coef = np.sqrt(alpha[:, None] / beta[None, :]) * inner
    return coef @ gam


def _check_orthonormal(rows, name, tol):
    rows = np.asarray(rows, dtype=complex)
    n = rows.shape[0]
    if rows.ndim != 2 or rows.shape[1] != n:
        raise SpecInconsistent(f"{name} must be a square array of row vectors")
    if spectral_norm(rows @ rows.conj().T - np.eye(n)) > tol:
        raise SpecInconsistent(f"{name} is not orthonormal")
    return rows


def cert_admissible(phi: Frame, T, spec: Optional[AdmissibleSpec] = None,
                    tol: float = DEFAULT_TOL) -> Certificate:
    """Every weaving of ``phi`` and ``T phi`` has frame operator ``S_phi``.

    Holds iff ``T phi_i (T phi_i)^* = phi_i phi_i^*`` for every ``i``.  The
    weaker global identity ``T S T^* = S`` is reported alongside; it does not
    by itself control the weavings.
    """
    b = require_frame(phi)
    T = as_operator(T, phi.dim)
    S = frame_operator(phi)
    Tphi = apply_operator(T, phi)
    global_defect = spectral_norm(S - T @ S @ T.conj().T) / b.upper
    outer = np.einsum("id,ie->ide", phi.vectors, phi.vectors.conj())
    touter = np.einsum("id,ie->ide", Tphi.vectors, Tphi.vectors.conj())
    scale = max(float(np.max(np.linalg.norm(phi.vectors, axis=1) ** 2)), 1e-300)
    per_index = max(spectral_norm(x) for x in touter - outer) / scale
    global_ok = global_defect <= tol
    margins = [Margin("max_i‖Tφ_i(Tφ_i)*−φ_iφ_i*‖≤tol", per_index, tol, strict=False)]
    details = {"global_defect": global_defect, "global_invariance": global_ok,
               "per_index_defect": per_index}
    if spec is not None:
        n = phi.dim
        lam = _check_orthonormal(spec.lambda_basis, "lambda_basis", 1e3 * tol)
        gam = _check_orthonormal(spec.omega_basis, "omega_basis", 1e3 * tol)
        e = _check_orthonormal(spec.e_basis, "e_basis", 1e3 * tol)
        alpha = np.asarray(spec.alpha, dtype=float)
        beta = np.asarray(spec.beta, dtype=float)
        if alpha.shape != (n,) or beta.shape != (n,) or np.any(alpha <= 0) or np.any(beta <= 0):
            raise SpecInconsistent("alpha and beta must be positive sequences of length dim")
        resid = S @ lam.T - lam.T * alpha[None, :]
        if np.max(np.linalg.norm(resid, axis=0)) > 1e3 * tol * b.upper:
            raise SpecInconsistent("lambda_basis are not eigenvectors of S_phi with eigenvalues alpha")
        images = _admissible_images(spec, lam, gam, e)
        actual = (T.conj().T @ lam.T).T
        formula_resid = float(np.max(np.abs(actual - images)))
        details["admissibility_residual"] = formula_resid
        details["admissible"] = formula_resid <= 1e3 * tol * max(1.0, spectral_norm(T))
    if per_index <= tol:
        message = "per-index invariance holds: every weaving has frame operator S_phi"
    elif global_ok:
        message = ("global invariance T S T* = S holds but per-index invariance fails; "
                   "the weavings' frame operators are not controlled")
    else:
        message = "neither global nor per-index invariance holds"
    return _certificate("admissible", margins, b.lower, (phi, Tphi), message, details)


# --- perturbations ---------------------------------------------------------------------

def cert_perturbation(phi: Frame, psi: Frame, lambda1: float = 0.0, lambda2: float = 0.0,
                      mu: Optional[float] = None, mode: str = "exact-mu", probes: int = 1000,
                      seed=None) -> Certificate:
    """Perturbation condition ``lambda1 sqrt(B_phi) + lambda2 sqrt(B_psi) + mu < sqrt(A_phi)``.

    ``exact-mu`` takes ``lambda1 = lambda2 = 0`` and ``mu = ||T_phi - T_psi||``,
    which makes the three-term hypothesis true by construction.  ``probe``
    takes caller-supplied constants and can only falsify the hypothesis on
    random coefficient vectors; surviving the probes is not a proof.
    """
    if psi.dim != phi.dim or psi.m != phi.m:
        raise ShapeMismatch("phi and psi differ in shape")
    b = require_frame(phi)
    B_psi = optimal_bounds(psi).upper
    diff = phi.synthesis - psi.synthesis
    details = {"mode": mode, "A": b.lower, "B_phi": b.upper, "B_psi": B_psi}
    margins = []
    if mode == "exact-mu":
        if mu is not None or lambda1 or lambda2:
            raise ValueError("exact-mu mode computes mu itself and uses lambda1 = lambda2 = 0")
        lambda1 = lambda2 = 0.0
        mu = spectral_norm(diff)
        details["hypothesis"] = "proven: mu is the operator norm of T_phi - T_psi"
    elif mode == "probe":
        if mu is None or min(lambda1, lambda2, mu) < 0:
            raise ValueError("probe mode needs nonnegative lambda1, lambda2, mu")
        rng = np.random.default_rng(seed)
        c = rng.standard_normal((phi.m, probes)) + 1j * rng.standard_normal((phi.m, probes))
        c /= np.linalg.norm(c, axis=0)
        lhs = np.linalg.norm(diff @ c, axis=0)
        rhs = (lambda1 * np.linalg.norm(phi.synthesis @ c, axis=0)
               + lambda2 * np.linalg.norm(psi.synthesis @ c, axis=0) + mu)
        worst = float(np.max(lhs - rhs))
        margins.append(Margin("probe max(‖Σc_i(φ_i−ψ_i)‖−rhs)≤0", worst, 0.0, strict=False,
                              tol=1e-12))
        details["probes"] = probes
        details["hypothesis"] = (f"falsified by probes (excess {worst:.3g})" if worst > 1e-12
                                 else f"not falsified by {probes} probes (not a proof)")
    else:
        raise ValueError(f"unknown mode {mode!r}")
    total = lambda1 * math.sqrt(b.upper) + lambda2 * math.sqrt(B_psi) + mu
    margins.append(Margin("λ₁√B_φ+λ₂√B_ψ+μ<√A_φ", total, math.sqrt(b.lower)))
    details.update({"lambda1": lambda1, "lambda2": lambda2, "mu": mu})
    implied = (math.sqrt(b.lower) - total) ** 2
    cert = _certificate("perturb", margins, implied, (phi, psi), details=details)
    if mode == "probe" and cert.holds:
        return Certificate(cert.kind, True, cert.margins, cert.implied_lower,
                           "bound holds; hypothesis " + details["hypothesis"], cert.subject, details)
    return cert


def cert_rank_one(phi: Frame, h, lambdas, alpha: float) -> Certificate:
    """``phi`` is woven with ``{phi_i + lambda_i h}`` when ``sum |lambda_i|**2 < alpha A / ||h||**2``."""
    if not 0 < alpha < 1:
        raise InvalidAlpha("alpha must lie in (0, 1)")
    b = require_frame(phi)
    h = np.asarray(h, dtype=complex)
    lam = np.asarray(lambdas, dtype=complex)
    if h.shape != (phi.dim,) or lam.shape != (phi.m,):
        raise ShapeMismatch("h must have dim entries and lambdas m entries")
    hn = float(np.linalg.norm(h))
    if hn == 0:
        raise ValueError("h must be nonzero")
    psi = Frame(phi.dim, phi.vectors + lam[:, None] * h[None, :], phi.tol)
    lam2 = float(np.sum(np.abs(lam) ** 2))
    mu = math.sqrt(lam2) * hn
    margins = [
        Margin("Σ|λ_i|²<αA_φ/‖h‖²", lam2, alpha * b.lower / hn**2),
        Margin("λ₁√B_φ+λ₂√B_ψ+μ<√A_φ", mu, math.sqrt(b.lower)),
    ]
    return _certificate("perturb", margins, (math.sqrt(b.lower) - mu) ** 2, (phi, psi),
                        details={"mode": "rank-one", "mu": mu, "alpha": alpha, "A": b.lower})


def bemrose_mu_bound(A_phi: float, B_phi: float, B_psi: float) -> float:
    """Earlier sufficient perturbation size ``A / (2 (sqrt(B_phi) + sqrt(B_psi)))``."""
    return A_phi / (2.0 * (math.sqrt(B_phi) + math.sqrt(B_psi)))


# --- nearly equal-norm Parseval frames -------------------------------------------------------

def _paulsen_constant(m: int, n: int) -> float:
    return 4.0 * math.sqrt(m) + 27.0 * m**2 * n * (n - 1) ** 8


def paulsen_threshold(m: int, n: int, A_phi: float, alpha: float) -> float:
    """``min(1/2, 8 alpha sqrt(A) / (4 sqrt(m) + 27 m**2 n (n-1)**8))`` for ``n`` vectors in dimension ``m``."""
    if not 0 < alpha < 1:
        raise InvalidAlpha("alpha must lie in (0, 1)")
    if m < 1 or n < m:
        raise InfeasibleShape(f"need n >= m >= 1, got m={m}, n={n}")
    return min(0.5, 8.0 * alpha * math.sqrt(A_phi) / _paulsen_constant(m, n))


def paulsen_distance_bound(m: int, n: int, eps: float) -> float:
    """Guaranteed distance ``(sqrt(m)/2) eps + (27/8) m**2 n (n-1)**8 eps`` to an equal-norm Parseval frame."""
    return 0.5 * math.sqrt(m) * eps + 27.0 / 8.0 * m**2 * n * (n - 1) ** 8 * eps


def cert_equal_norm_parseval(phi: Frame, psi: Frame, eps: float, alpha: float) -> Certificate:
    """``phi`` is woven with the equal-norm Parseval candidate ``psi``.

    Checks that ``psi`` is equal-norm Parseval, that ``eps`` is below the
    threshold, that ``psi`` lies within the guaranteed distance of ``phi`` (in
    the root-sum-of-squares sense, which bounds ``||T_phi - T_psi||``), and
    then applies the perturbation condition with ``mu`` equal to that distance.
    """
    if psi.dim != phi.dim or psi.m != phi.m:
        raise ShapeMismatch("phi and psi differ in shape")
    b = require_frame(phi)
    m, n = phi.dim, phi.m
    threshold = paulsen_threshold(m, n, b.lower, alpha)
    bound = paulsen_distance_bound(m, n, eps)
    pb = optimal_bounds(psi)
    parseval_defect = max(abs(pb.lower - 1.0), abs(pb.upper - 1.0))
    norms = np.linalg.norm(psi.vectors, axis=1)
    en_defect = float(np.max(np.abs(norms - norms.mean())) / norms.mean())
    dist = float(np.linalg.norm(phi.vectors - psi.vectors))
    tol = phi.tol
    margins = [
        Margin("ψ Parseval defect≤tol", parseval_defect, tol, strict=False),
        Margin("ψ equal-norm defect≤tol", en_defect, tol, strict=False),
        Margin("0<ε", 0.0, eps),
        Margin("ε<threshold", eps, threshold),
        Margin("(Σ‖φ_i−ψ_i‖²)^½≤bound", dist, bound, strict=False, tol=tol),
        Margin("λ₁√B_φ+λ₂√B_ψ+μ<√A_φ", bound, math.sqrt(b.lower)),
    ]
    return _certificate(
        "paulsen", margins, (math.sqrt(b.lower) - bound) ** 2, (phi, psi),
        details={"threshold": threshold, "distance_bound": bound, "distance": dist,
                 "eps": eps, "alpha": alpha, "A": b.lower},
    )


def certify_by_oracle(cert: Certificate, cap: int = DEFAULT_CAP, tol: float = DEFAULT_TOL):
    """Run the enumeration oracle on a certificate's subject pair."""
    if cert.subject is None:
        raise ValueError("certificate has no subject pair")
    return woven_oracle(list(cert.subject), tol=tol, cap=cap)
