"""Randomised soundness sweep: every certificate that holds must agree with the oracle."""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, Dict, List, Optional

import numpy as np

from . import certificates as C
from .core import Frame, frame_from_synthesis, frame_operator, optimal_bounds, spectral_norm
from .duality import approximate_dual_family, excess_and_kernel, null_bessel
from .errors import FrameError, HypothesisFailed
from .generators import harmonic_frame, random_frame, random_riesz_basis, random_unitary
from .weaving import DEFAULT_CAP, woven_oracle

SOUNDNESS_SLACK = 1e-8
BESSEL_SLACK = 1e-9


@dataclass
class SweepRecord:
    kind: str
    variant: str
    dim: int
    m: int
    holds: bool
    implied_lower: Optional[float]
    oracle_lower: float
    oracle_upper: float
    bessel_sum: float
    is_woven: bool

    @property
    def violation(self) -> bool:
        if not self.holds:
            return False
        if not self.is_woven:
            return True
        return self.implied_lower is not None and self.oracle_lower < self.implied_lower - SOUNDNESS_SLACK

    @property
    def bessel_violation(self) -> bool:
        return self.oracle_upper > self.bessel_sum + BESSEL_SLACK


@dataclass
class SweepResult:
    seed: int
    records: List[SweepRecord] = field(default_factory=list)

    @property
    def violations(self) -> List[SweepRecord]:
        return [r for r in self.records if r.violation]

    @property
    def bessel_violations(self) -> List[SweepRecord]:
        return [r for r in self.records if r.bessel_violation]

    def summary(self) -> Dict[str, dict]:
        out: Dict[str, dict] = {}
        for r in self.records:
            s = out.setdefault(r.kind, {"instances": 0, "holds": 0, "woven_but_failed": 0,
                                        "violations": 0})
            s["instances"] += 1
            s["holds"] += int(r.holds)
            s["woven_but_failed"] += int((not r.holds) and r.is_woven)
            s["violations"] += int(r.violation)
        return out


def _bounds(rng, lo=0.3, hi=2.0, spread=2.0):
    A = rng.uniform(lo, hi)
    return A, A * rng.uniform(1.0, spread)


def _random_op(rng, d):
    z = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return z / spectral_norm(z)


def _shape(rng):
    d = int(rng.integers(2, 5))
    return d, int(rng.integers(d, 11))


def _redundant_shape(rng):
    d = int(rng.integers(2, 5))
    return d, int(rng.integers(d + 1, 11))


def _inst_invertible(rng):
    d, m = _shape(rng)
    phi = random_frame(d, m, _bounds(rng), seed=rng)
    b = optimal_bounds(phi)
    T = np.eye(d) + rng.uniform(0, 1.3) * math.sqrt(b.lower / b.upper) * _random_op(rng, d)
    return "random", C.cert_invertible_operator(phi, T)


def _null_direction(rng, phi):
    excess, _ = excess_and_kernel(phi)
    coef = rng.standard_normal((phi.dim, excess)) + 1j * rng.standard_normal((phi.dim, excess))
    return null_bessel(phi, coef * rng.uniform(0.1, 2.0))


def _inst_dual(rng):
    d, m = _redundant_shape(rng)
    phi = random_frame(d, m, _bounds(rng, 0.5, 2.0, 1.6), seed=rng)
    U = _null_direction(rng, phi)
    b = optimal_bounds(phi)
    r = spectral_norm(np.eye(d) - np.linalg.inv(frame_operator(phi)))
    script_a = max((math.sqrt(b.lower) - math.sqrt(b.upper) * r) ** 2, 1e-3)
    quad, lin = U.upper_bound, 2 * math.sqrt(U.upper_bound / b.lower)
    eps = 2 * script_a / (lin + math.sqrt(lin * lin + 4 * quad * script_a))
    return "random", C.cert_dual_weaving(phi, U, rng.uniform(0, 1.3) * eps)


def _inst_approx(rng):
    d, m = _redundant_shape(rng)
    phi = random_frame(d, m, _bounds(rng, 0.5, 2.0, 1.5), seed=rng)
    if rng.random() < 0.5:
        T = rng.uniform(0.5, 1.5) * np.eye(d)
        variant = "scalar"
    else:
        T = np.eye(d) + rng.uniform(0, 0.5) * _random_op(rng, d)
        variant = "general"
    theta = _null_direction(rng, phi).synthesis.conj().T * rng.uniform(0.05, 1.0)
    try:
        eps = approximate_dual_family(phi, T, theta).epsilon_star
    except HypothesisFailed:
        eps = 0.5
    alpha = rng.uniform(0, 1.3) * min(eps, 1.0)
    return variant, C.cert_approx_dual_weaving(phi, T, theta, alpha)


def _inst_canonical(rng):
    d = int(rng.integers(2, 5))
    reading = "frame" if rng.random() < 0.5 else "riesz"
    pick = rng.integers(4)
    if pick == 0:
        phi, variant = random_riesz_basis(d, seed=rng), "riesz"
    elif pick == 1:
        base = random_riesz_basis(d, seed=rng, cond=2.0)
        k = int(rng.integers(1, 11 - d))
        extra = rng.standard_normal((k, d)) + 1j * rng.standard_normal((k, d))
        extra *= 10 ** rng.uniform(-3, -0.5) / np.linalg.norm(extra)
        phi, variant = Frame(d, np.vstack([base.vectors, extra])), "small-redundancy"
    elif pick == 2:
        Q = random_unitary(d, rng)
        m = int(rng.integers(d, 11))
        which = np.concatenate([np.arange(d), rng.integers(0, d, m - d)])
        w = rng.uniform(0.2, 1.0, m)
        counts = np.bincount(which, weights=w**2, minlength=d)
        w = w / math.sqrt(counts.max() * rng.uniform(1.0, 1.5))
        phi, variant = Frame(d, (Q[:, which] * w).T), "commuting"
    else:
        m = int(rng.integers(d, 11))
        phi, variant = random_frame(d, m, _bounds(rng), seed=rng), "generic"
    return f"{variant}/{reading}", C.cert_canonical_dual_woven(phi, reading=reading)


def _inst_two_op(rng):
    d = int(rng.integers(2, 5))
    phi = random_riesz_basis(d, seed=rng, cond=2.0)
    if rng.random() < 0.5:
        psi = frame_from_synthesis(phi.synthesis + rng.uniform(0.01, 0.3) * _random_op(rng, d))
        return "canonical", C.cert_two_operator(phi, psi, canonical=True)
    psi = random_riesz_basis(d, seed=rng, cond=2.0)
    T1 = np.eye(d) + 0.3 * _random_op(rng, d)
    T2 = T1 + 10 ** rng.uniform(-3, -0.5) * _random_op(rng, d)
    return "operators", C.cert_two_operator(phi, psi, T1, T2)


def _inst_admissible(rng):
    d, m = _shape(rng)
    phi = random_frame(d, m, _bounds(rng), seed=rng)
    pick = rng.integers(3)
    if pick == 0:
        T, variant = np.exp(1j * rng.uniform(0, 2 * math.pi)) * np.eye(d), "phase"
    elif pick == 1:
        spec = C.eigen_spec(phi, seed=rng)
        return "eigen-spec", C.cert_admissible(phi, C.admissible_operator(spec), spec)
    else:
        phi = random_frame(d, m, (1.0, 1.0), seed=rng)
        T, variant = random_unitary(d, rng), "tight-unitary"
    return variant, C.cert_admissible(phi, T)


def _inst_perturb(rng):
    d, m = _shape(rng)
    phi = random_frame(d, m, _bounds(rng), seed=rng)
    A = optimal_bounds(phi).lower
    pick = rng.integers(3)
    if pick == 0:
        E = rng.standard_normal((d, m)) + 1j * rng.standard_normal((d, m))
        E *= rng.uniform(0, 1.3) * math.sqrt(A) / spectral_norm(E)
        psi = frame_from_synthesis(phi.synthesis + E)
        return "exact-mu", C.cert_perturbation(phi, psi)
    if pick == 1:
        h = rng.standard_normal(d) + 1j * rng.standard_normal(d)
        lam = rng.standard_normal(m) + 1j * rng.standard_normal(m)
        alpha = rng.uniform(0.2, 0.95)
        lam *= rng.uniform(0, 1.3) * math.sqrt(alpha * A) / (np.linalg.norm(lam) * np.linalg.norm(h))
        return "rank-one", C.cert_rank_one(phi, h, lam, alpha)
    E = rng.standard_normal((d, m)) + 1j * rng.standard_normal((d, m))
    E *= rng.uniform(0, 1.0) * math.sqrt(A) / spectral_norm(E)
    psi = frame_from_synthesis(phi.synthesis + E)
    # mu = ||E|| makes the hypothesis true for any nonnegative lambdas
    lam1, lam2 = rng.uniform(0, 0.2, 2)
    return "probe", C.cert_perturbation(phi, psi, lam1, lam2, spectral_norm(E), mode="probe",
                                         probes=200, seed=rng)


def _inst_paulsen(rng):
    d = int(rng.integers(2, 4))
    n = int(rng.integers(d, 8))
    psi = harmonic_frame(d, n)
    Q = random_unitary(d, rng)
    psi = frame_from_synthesis(Q @ psi.synthesis)
    alpha = rng.uniform(0.3, 0.9)
    eps = rng.uniform(0.05, 1.2) * C.paulsen_threshold(d, n, 1.0, alpha)
    bound = C.paulsen_distance_bound(d, n, eps)
    E = rng.standard_normal((d, n)) + 1j * rng.standard_normal((d, n))
    E *= rng.uniform(0, 1.0) * bound / np.linalg.norm(E)
    phi = frame_from_synthesis(psi.synthesis + E)
    return "harmonic", C.cert_equal_norm_parseval(phi, psi, eps, alpha)


GENERATORS: Dict[str, Callable] = {
    "invertible": _inst_invertible,
    "dual": _inst_dual,
    "approx-dual": _inst_approx,
    "canonical": _inst_canonical,
    "two-op": _inst_two_op,
    "admissible": _inst_admissible,
    "perturb": _inst_perturb,
    "paulsen": _inst_paulsen,
}


def soundness_sweep(seed: int = 0, trials: int = 240, kinds=None, cap: int = DEFAULT_CAP) -> SweepResult:
    """Run ``trials`` seeded instances, cycling through certificate kinds.

    Each instance draws its own child generator, so results are reproducible
    per ``(seed, trial index)``.  Instances whose inputs are rejected by a
    certificate's preconditions are redrawn.
    """
    kinds = list(kinds or GENERATORS)
    result = SweepResult(seed)
    root = np.random.SeedSequence(seed)
    children = root.spawn(trials)
    for t in range(trials):
        kind = kinds[t % len(kinds)]
        rng = np.random.default_rng(children[t])
        for _ in range(20):
            try:
                variant, cert = GENERATORS[kind](rng)
                break
            except FrameError:
                continue
        else:
            raise RuntimeError(f"could not draw a valid {kind} instance")
        phi, psi = cert.subject
        rep = woven_oracle([phi, psi], cap=cap)
        bsum = optimal_bounds(phi).upper + optimal_bounds(psi).upper
        result.records.append(SweepRecord(
            kind=kind, variant=variant, dim=phi.dim, m=phi.m, holds=cert.holds,
            implied_lower=cert.implied_lower, oracle_lower=rep.universal_lower,
            oracle_upper=rep.universal_upper, bessel_sum=bsum, is_woven=rep.is_woven,
        ))
    return result
