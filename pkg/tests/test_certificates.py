import cmath
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from wovenframes import certificates as C
from wovenframes.core import Frame, frame_operator, optimal_bounds
from wovenframes.duality import bessel_sequence, excess_and_kernel, null_bessel
from wovenframes.errors import (
    DirectionNotNull,
    InvalidAlpha,
    NotWovenInput,
    SingularOperator,
    SpecInconsistent,
)
from wovenframes.generators import (
    harmonic_frame,
    leveled_example,
    random_frame,
    random_riesz_basis,
    random_unitary,
    tight_frame,
)
from wovenframes.weaving import iter_weavings, woven_oracle

from conftest import small_frames


def check_sound(cert):
    """holds => the oracle finds the subject woven with at least the implied bound."""
    rep = C.certify_by_oracle(cert)
    if cert.holds:
        assert rep.is_woven
        if cert.implied_lower is not None:
            assert rep.universal_lower >= cert.implied_lower - 1e-8
    return rep


# --- margins -----------------------------------------------------------------------------

def test_strict_margin_fails_at_equality():
    assert not C.Margin("x", 1.0, 1.0).satisfied
    assert not C.Margin("x", 1.0 - 1e-14, 1.0).satisfied
    assert C.Margin("x", 0.9, 1.0).satisfied
    assert C.Margin("x", -1.0, 0.0).satisfied
    assert C.Margin("x", 1.0, 1.0, strict=False).satisfied
    assert not C.Margin("x", 1.1, 1.0, strict=False, tol=1e-3).satisfied


def test_failed_certificate_has_no_implied_bound():
    phi = Frame(2, np.eye(2))
    cert = C.cert_invertible_operator(phi, 3 * np.eye(2))
    assert not cert.holds and cert.implied_lower is None
    assert "‖I−T‖²<A/B" in cert.message
    assert [m.name for m in cert.failing()] == ["‖I−T‖²<A/B"]


# --- invertible operator -----------------------------------------------------------------

@given(small_frames(dims=(2, 3), max_m=6), st.integers(0, 2**31), st.floats(0.0, 1.5))
def test_invertible_operator_sound(phi, seed, size):
    rng = np.random.default_rng(seed)
    b = optimal_bounds(phi)
    E = rng.standard_normal((phi.dim, phi.dim))
    T = np.eye(phi.dim) + size * math.sqrt(b.lower / b.upper) * E / np.linalg.norm(E, 2)
    try:
        cert = C.cert_invertible_operator(phi, T)
    except SingularOperator:
        return
    check_sound(cert)


def test_invertible_operator_rejects_singular():
    with pytest.raises(SingularOperator):
        C.cert_invertible_operator(Frame(2, np.eye(2)), np.diag([1.0, 0.0]))


# --- duals -------------------------------------------------------------------------------

def test_example_dual_margin_at_one_third():
    phi, U = leveled_example(4)
    cert = C.cert_dual_weaving(phi, U, 1 / 3)
    lhs = cert.margins[1].lhs
    assert Fraction(1, 9) + Fraction(2, 3) == Fraction(7, 9)
    assert lhs == pytest.approx(7 / 9, abs=1e-14)
    assert cert.margins[1].rhs == pytest.approx(1.0, abs=1e-14)
    assert cert.holds
    check_sound(cert)


def test_dual_margin_fails_past_root():
    phi, U = leveled_example(3)
    cert = C.cert_dual_weaving(phi, U, 0.5)
    assert not cert.holds
    rep = check_sound(cert)
    assert rep.is_woven  # sufficient only: the pair is still woven


def test_dual_rejects_bad_inputs():
    phi, U = leveled_example(3)
    with pytest.raises(InvalidAlpha):
        C.cert_dual_weaving(phi, U, -0.1)
    with pytest.raises(DirectionNotNull):
        C.cert_dual_weaving(phi, bessel_sequence(3, np.ones((6, 3))), 0.1)


def test_example_approx_margin_at_one_fifth():
    phi, U = leveled_example(4)
    cert = C.cert_approx_dual_weaving(phi, 0.5 * np.eye(4), U.vectors.conj(), 0.2)
    quad = cert.margins[2]
    assert abs(quad.lhs - 6 / 25) <= 1e-15
    assert abs(quad.rhs - 1 / 4) <= 1e-15
    assert cert.holds
    check_sound(cert)


@given(small_frames(dims=(2, 3), max_m=6, redundant=True), st.integers(0, 2**31), st.floats(0, 1))
def test_dual_certificate_sound(phi, seed, alpha):
    rng = np.random.default_rng(seed)
    excess, _ = excess_and_kernel(phi)
    U = null_bessel(phi, rng.standard_normal((phi.dim, excess)))
    check_sound(C.cert_dual_weaving(phi, U, alpha))


# --- tight frames ---------------------------------------------------------------------

@pytest.mark.parametrize("A,expected", [(0.4, False), (0.5, False), (0.6, True), (1.0, True), (2.0, True)])
def test_tight_frame_grid(A, expected):
    phi = tight_frame(2, 4, A, seed=0)
    U = null_bessel(phi, np.eye(2))
    cert = C.cert_dual_weaving(phi, U, 1e-3)
    margin = cert.margins[0]
    assert margin.lhs == pytest.approx((1 - 1 / A) ** 2, abs=1e-12)
    assert margin.satisfied is expected


# --- canonical dual ----------------------------------------------------------------------

@given(st.integers(0, 2**31), st.integers(2, 5), st.sampled_from(["frame", "riesz"]))
def test_riesz_basis_woven_with_canonical_dual(seed, d, reading):
    phi = random_riesz_basis(d, seed=seed)
    cert = C.cert_canonical_dual_woven(phi, reading=reading)
    assert cert.holds and "riesz" in cert.details["fired"]
    check_sound(cert)


def test_small_redundancy_fires_and_is_sound(rng):
    for _ in range(10):
        base = random_riesz_basis(3, seed=rng, cond=2.0)
        extra = 1e-2 * rng.standard_normal((2, 3))
        phi = Frame(3, np.vstack([base.vectors, extra]))
        for reading in ("frame", "riesz"):
            cert = C.cert_canonical_dual_woven(phi, reading=reading)
            assert "small-redundancy" in cert.details["fired"]
            check_sound(cert)


def test_commuting_condition():
    # orthogonal directions, S = diag(0.5, 0.8) <= I
    phi = Frame(2, [[0.5, 0], [0.5, 0], [0, 0.8]])
    cert = C.cert_canonical_dual_woven(phi)
    assert "commuting" in cert.details["fired"]
    assert cert.implied_lower == pytest.approx(0.5)
    check_sound(cert)


def test_canonical_generic_frame_sound(rng):
    for _ in range(10):
        phi = random_frame(3, 6, (0.5, 2.0), seed=rng)
        check_sound(C.cert_canonical_dual_woven(phi))


def test_canonical_rejects_unknown_reading():
    with pytest.raises(ValueError):
        C.cert_canonical_dual_woven(Frame(1, [[1]]), reading="other")


# --- two operators -----------------------------------------------------------------------

def test_two_operator_canonical_near_pair(rng):
    holds = 0
    for _ in range(20):
        phi = random_riesz_basis(3, seed=rng, cond=2.0)
        psi = Frame(3, phi.vectors + 0.05 * rng.standard_normal((3, 3)))
        cert = C.cert_two_operator(phi, psi, canonical=True)
        holds += cert.holds
        check_sound(cert)
    assert holds > 0


def test_two_operator_needs_woven_input():
    e = Frame(2, np.eye(2))
    with pytest.raises(NotWovenInput):
        C.cert_two_operator(e, Frame(2, [[0, 1], [1, 0]]), canonical=True)


def test_two_operator_identical_operators(rng):
    phi = random_riesz_basis(3, seed=rng)
    psi = random_riesz_basis(3, seed=rng)
    T = random_unitary(3, rng)
    cert = C.cert_two_operator(phi, psi, T, T)
    assert cert.holds == woven_oracle([phi, psi]).is_woven
    check_sound(cert)


# --- admissible --------------------------------------------------------------------------

def test_phase_operator_preserves_every_weaving(rng):
    phi = random_frame(3, 7, (0.5, 2.0), seed=rng)
    T = cmath.exp(0.9j) * np.eye(3)
    cert = C.cert_admissible(phi, T)
    assert cert.holds and cert.implied_lower == pytest.approx(optimal_bounds(phi).lower)
    S = frame_operator(phi)
    for _, Wm in iter_weavings(list(cert.subject)):
        assert np.abs(Wm @ Wm.conj().T - S).max() <= 1e-12


def test_global_but_not_per_index_invariance(rng):
    phi = random_frame(3, 5, (1.0, 1.0), seed=rng)  # Parseval: any unitary keeps S
    T = random_unitary(3, rng)
    cert = C.cert_admissible(phi, T)
    assert not cert.holds
    assert cert.details["global_invariance"]
    assert "global invariance T S T* = S holds but per-index invariance fails" in cert.message


def test_eigen_spec_operator_satisfies_global_identity(rng):
    phi = random_frame(3, 5, (0.5, 2.0), seed=rng)
    spec = C.eigen_spec(phi, seed=1)
    T = C.admissible_operator(spec)
    S = frame_operator(phi)
    np.testing.assert_allclose(T @ S @ T.conj().T, S, atol=1e-12)
    cert = C.cert_admissible(phi, T, spec)
    assert cert.details["admissible"] and cert.details["global_invariance"]
    check_sound(cert)


def test_inconsistent_spec_rejected(rng):
    phi = random_frame(3, 5, (0.5, 2.0), seed=rng)
    spec = C.eigen_spec(phi, seed=1)
    bad = C.AdmissibleSpec(spec.lambda_basis, 2 * spec.omega_basis, spec.alpha, spec.beta, spec.e_basis)
    with pytest.raises(SpecInconsistent):
        C.cert_admissible(phi, np.eye(3), bad)


# --- perturbations -----------------------------------------------------------------------

def test_exact_mu_with_identical_frames(rng):
    phi = random_frame(3, 5, (0.5, 2.0), seed=rng)
    cert = C.cert_perturbation(phi, phi)
    assert cert.holds
    assert cert.implied_lower == pytest.approx(optimal_bounds(phi).lower, rel=1e-12)


def test_exact_mu_rejects_supplied_constants(rng):
    phi = random_frame(2, 3, (0.5, 2.0), seed=rng)
    with pytest.raises(ValueError):
        C.cert_perturbation(phi, phi, mu=0.1)


@given(small_frames(dims=(2, 3), max_m=6), st.integers(0, 2**31), st.floats(0, 1.3))
def test_exact_mu_sound(phi, seed, size):
    rng = np.random.default_rng(seed)
    E = rng.standard_normal((phi.dim, phi.m))
    E *= size * math.sqrt(optimal_bounds(phi).lower) / np.linalg.norm(E, 2)
    psi = Frame(phi.dim, (phi.synthesis + E).T)
    check_sound(C.cert_perturbation(phi, psi))


def test_probe_mode_falsifies(rng):
    phi = random_frame(2, 4, (1.0, 1.0), seed=rng)
    psi = Frame(2, phi.vectors + 0.3)
    cert = C.cert_perturbation(phi, psi, 0.0, 0.0, 1e-6, mode="probe", probes=100, seed=0)
    assert not cert.holds
    assert "falsified" in cert.details["hypothesis"]


def test_rank_one(rng):
    phi = random_frame(3, 5, (1.0, 2.0), seed=rng)
    h = np.array([1.0, 0, 0])
    lam = np.full(5, 0.1)
    cert = C.cert_rank_one(phi, h, lam, 0.5)
    assert cert.holds
    check_sound(cert)
    with pytest.raises(InvalidAlpha):
        C.cert_rank_one(phi, h, lam, 1.0)


def test_bemrose_bound():
    assert C.bemrose_mu_bound(1.0, 1.0, 1.0) == pytest.approx(0.25)


# --- nearly equal-norm Parseval ----------------------------------------------------------

def test_paulsen_threshold_value():
    # independent arithmetic: 8 * 0.5 * 1 / (4 sqrt 2 + 27 * 2**2 * 3 * 2**8)
    denom = 4 * 2 ** 0.5 + 27 * 4 * 3 * 256
    assert C.paulsen_threshold(2, 3, 1.0, 0.5) == pytest.approx(4 / denom, abs=1e-15)
    assert f"{C.paulsen_threshold(2, 3, 1.0, 0.5):.4g}" == "4.822e-05"


def test_paulsen_threshold_capped_at_half():
    assert C.paulsen_threshold(1, 1, 1.0, 0.9) == 0.5


def test_equal_norm_parseval_certificate(rng):
    psi = harmonic_frame(2, 3)
    eps = 0.5 * C.paulsen_threshold(2, 3, 1.0, 0.5)
    bound = C.paulsen_distance_bound(2, 3, eps)
    phi = Frame(2, psi.vectors + 0.5 * bound / math.sqrt(6))
    cert = C.cert_equal_norm_parseval(phi, psi, eps, 0.5)
    assert cert.holds
    check_sound(cert)
    far = Frame(2, psi.vectors + 0.2)  # distance 0.49 exceeds the bound 0.25
    assert not C.cert_equal_norm_parseval(far, psi, eps, 0.5).holds
