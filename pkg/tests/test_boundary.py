import math

import numpy as np
import pytest
from hypothesis import assume, given, settings
from hypothesis import strategies as st

from osc_complexity.boundary import (
    CENTRAL_DELTA,
    PoleRoot,
    TWO_PI,
    BoundaryProblem,
    branch_max,
    branch_max_asymptote,
    branch_max_seed,
    central_roots,
    complexity,
    enumerate_roots,
    f_of_nu,
    f_prime,
    length_at_root,
    minima_at_odd_pi,
    roots_in_interval,
    solve_central,
    solve_constants,
)
from osc_complexity.errors import EmptyWindow, PoleAtRoot, WindowCapExceeded
from osc_complexity.geodesics import GeodesicModel, GeodesicParams, Metric, geodesic_point, nu_tilde, speed
from osc_complexity.group import IDENTITY, GroupElement
from osc_complexity.reproduce import REFERENCE_METRIC, SHIFTED_CASES, shifted_target

from conftest import metrics, params

PAPER, LC = GeodesicModel.PAPER, GeodesicModel.LEVI_CIVITA
MODELS = [PAPER, LC]


def shifted_problem(i, model=PAPER):
    return BoundaryProblem(REFERENCE_METRIC, shifted_target(SHIFTED_CASES[i]), model)


# --------------------------------------------------------------------------- f and its maxima


def test_f_at_zero():
    for d in (0.1, 0.5, 2.0):
        assert f_of_nu(0.0, d) == 0.0


@settings(max_examples=200, deadline=None)
@given(st.floats(-40, 40), st.floats(-3, 3))
def test_f_is_odd(nu, d):
    assume(abs(nu - TWO_PI * round(nu / TWO_PI)) > 1e-3 or round(nu / TWO_PI) == 0)
    assert f_of_nu(-nu, d) == pytest.approx(-f_of_nu(nu, d), rel=1e-12, abs=1e-12)


def test_f_prime_matches_difference():
    h = 1e-6
    for nu in (0.3, 2.0, 8.0, -11.0):
        fd = (f_of_nu(nu + h, 0.4) - f_of_nu(nu - h, 0.4)) / (2 * h)
        assert f_prime(nu, 0.4) == pytest.approx(fd, rel=1e-6)


@pytest.mark.parametrize("k", [1, -2, 5])
def test_pole_raises(k):
    with pytest.raises(PoleAtRoot):
        f_of_nu(TWO_PI * k, 0.3)


def test_branch_max_rejects_negative_k():
    with pytest.raises(ValueError):
        branch_max(-1, 0.3)


def test_central_branch_max():
    assert branch_max(0, 0.2) == (0.0, 0.0)
    nu, fm = branch_max(0, 0.45)
    assert 0.0 < nu < TWO_PI and fm > 0.0
    assert f_prime(nu, 0.45) == pytest.approx(0.0, abs=1e-9)


@pytest.mark.parametrize("delta", [0.1, 0.5, 0.9, 1.0, 1.5, -0.3])
def test_branch_max_positions_follow_seed(delta):
    # the seed is accurate beyond 1/k^2: residual * k^2 shrinks with k
    scaled = []
    for k in (5, 10, 20, 40):
        nu, _ = branch_max(k, delta)
        assert TWO_PI * k < nu < TWO_PI * (k + 1)
        scaled.append(abs(nu - branch_max_seed(k, delta)) * k * k)
    assert max(scaled) < 0.01
    assert all(b <= a + 1e-9 for a, b in zip(scaled, scaled[1:]))


def test_seed_at_unit_delta_is_odd_pi():
    for k in (1, 4, 9):
        assert branch_max_seed(k, 1.0) == (2 * k + 1) * math.pi


@pytest.mark.parametrize("delta", [0.1, 0.3, 0.75, 1.4])
def test_corrected_asymptote_is_second_order(delta):
    for k in (10, 20, 40, 80):
        _, fm = branch_max(k, delta)
        assert abs(fm - branch_max_asymptote(k, delta)) * k * k < 0.05


@pytest.mark.parametrize("delta", [0.1, 0.3, 0.75])
def test_literal_asymptote_constant_is_off_at_first_order(delta):
    # with the constant 2(1-D)(2-D)/m the error decays only like 1/k
    k = 80
    m = (2 * k + 1) * math.pi
    _, fm = branch_max(k, delta)
    literal = (delta - 0.5) * m + 2.0 * (1 - delta) * (2 - delta) / m
    assert (literal - fm) * k == pytest.approx(2 * (1 - delta) / TWO_PI, rel=2e-2)


# --------------------------------------------------------------------------- root counting


@pytest.mark.parametrize("delta", [0.1, 1.0 / 3.0])
def test_single_central_root_below_one_third(delta):
    for gamma in np.linspace(-20, 20, 81):
        assert len(central_roots(delta, gamma)) == 1


def test_roots_in_interval_splits_central_interval():
    both = central_roots(0.45, 0.01)
    assert len(both) == 3
    assert roots_in_interval(0, 0.45, 0.01) == [r for r in both if r >= 0]
    assert roots_in_interval(-1, 0.45, 0.01) == [r for r in both if r < 0]


@pytest.mark.parametrize("delta", [0.4, 0.45])
def test_one_to_three_central_roots_above_one_third(delta):
    counts = {len(central_roots(delta, g)) for g in np.linspace(-2, 2, 201)}
    assert counts <= {1, 2, 3} and {1, 3} <= counts


def test_enumerate_roots_examples():
    bp = shifted_problem(0)
    assert bp.delta == pytest.approx(0.0870, abs=1e-4)
    roots = enumerate_roots(bp, 3)
    assert len(roots) == 1 and roots[0] == pytest.approx(-1.0, abs=1e-9)
    roots = enumerate_roots(shifted_problem(1), 3)
    for want in (-1.0, -2.116, 2.905):
        assert min(abs(r - want) for r in roots) < 1e-3


@pytest.mark.parametrize("model", MODELS)
def test_gamma_zero_has_zero_root(model):
    bp = BoundaryProblem(Metric(1.0, 0.0, 1.0), GroupElement(0.0, 0.0, 1.0, 2.0), model)
    assert bp.gamma == 0.0
    assert any(abs(r) < 1e-12 for r in enumerate_roots(bp, 3))


def test_empty_window():
    with pytest.raises(EmptyWindow):
        enumerate_roots(shifted_problem(0), -1)
    with pytest.raises(EmptyWindow):
        complexity(shifted_problem(0), window_start=-1)


def test_window_cap_exceeded():
    with pytest.raises(WindowCapExceeded):
        complexity(shifted_problem(4), window_start=0, window_cap=1)


# --------------------------------------------------------------------------- constants and lengths


@pytest.mark.parametrize("b", [-1.0, 0.0, 0.7])
def test_solve_constants_pure_alpha_paper(b):
    m, al = Metric(1.3, b, 2.0 + b * b), -2.2
    bp = BoundaryProblem(m, GroupElement(0.0, al, 0.0, 0.0), PAPER)
    nt = (b + 2.0) * al
    gp = solve_constants(bp, nt)
    assert gp.A == pytest.approx((nt - (b + 2) * al) / m.a, abs=1e-14)
    assert (gp.B, gp.D, gp.F) == (al, 0.0, 0.0)
    assert length_at_root(bp, nt) == pytest.approx(math.sqrt(m.d) * abs(al))


@pytest.mark.parametrize("model", MODELS)
def test_displacement_root_at_zero(model):
    m = Metric(1.0, 0.0, 1.0)
    bp = BoundaryProblem(m, GroupElement(0.0, 0.0, 3.0, 4.0), model)
    gp = solve_constants(bp, 0.0)
    assert (gp.F, gp.D) == pytest.approx((3.0, 4.0))
    assert length_at_root(bp, 0.0) == pytest.approx(5.0)
    assert complexity(bp).value == pytest.approx(5.0, rel=1e-12)


def test_reference_length_at_root():
    bp = shifted_problem(2)
    roots = enumerate_roots(bp, 3)
    nu = min(roots, key=lambda r: abs(r + 4.621))
    assert length_at_root(bp, nu) == pytest.approx(26.391, abs=1e-3)


def test_reference_complexity_fourth_case():
    res = complexity(shifted_problem(3))
    assert res.value == pytest.approx(48.325, abs=1e-3)
    assert res.winner.nu_tilde == pytest.approx(-4.698, abs=1e-3)
    for nu, length in ((-10.0, 72.111), (-8.112, 71.148)):
        c = min(res.candidates, key=lambda c: abs(c.nu_tilde - nu))
        assert c.length == pytest.approx(length, abs=1e-3)
        assert c.length > res.value


@pytest.mark.parametrize("model", MODELS)
def test_identity_has_zero_complexity(model):
    res = complexity(BoundaryProblem(Metric(1.0, -1.0, 2.0), IDENTITY, model))
    assert res.value == 0.0
    assert solve_central(BoundaryProblem(Metric(1.0, 0.0, 2.0), IDENTITY, model))[0].length == 0.0


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("b", [-1.5, 0.0, 0.7, 3.0])
def test_central_principal_length(model, b):
    m = Metric(1.0, b, 2.0 + b * b)
    cands = solve_central(BoundaryProblem(m, GroupElement(0.0, -5.0, 0.0, 0.0), model))
    principal = [c for c in cands if c.family == "principal"]
    assert principal[0].length == pytest.approx(math.sqrt(m.d) * 5.0, rel=1e-12)


@pytest.mark.parametrize(
    "model,b,alpha",
    [(LC, -1.5, -5.0), (LC, 0.7, -10.0), (LC, 3.0, -5.0), (PAPER, -1.5, -10.0), (PAPER, 3.0, -20.0)],
)
def test_loops_beat_principal_when_b_nonzero(model, b, alpha):
    m = Metric(1.0, b, 2.0 + b * b)
    bp = BoundaryProblem(m, GroupElement(0.0, alpha, 0.0, 0.0), model)
    res = complexity(bp)
    assert res.winner.family == "loop"
    assert res.value < math.sqrt(m.d) * abs(alpha) - 1e-6
    assert geodesic_point(m, res.winner.params, 1.0, model).distance_to(bp.target) < 1e-10


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("alpha", [-5.0, -20.0, 13.0])
def test_principal_is_minimal_when_b_zero(model, alpha):
    m = Metric(1.2, 0.0, 2.5)
    res = complexity(BoundaryProblem(m, GroupElement(0.0, alpha, 0.0, 0.0), model))
    assert res.value == pytest.approx(math.sqrt(m.d) * abs(alpha), rel=1e-12)


# --------------------------------------------------------------------------- properties


@pytest.mark.parametrize("model", MODELS)
@settings(max_examples=60, deadline=None)
@given(m=metrics(), gp=params)
def test_round_trip_recovers_params(model, m, gp):
    target = geodesic_point(m, gp, 1.0, model)
    assume(target.r2 > 1e-6)
    bp = BoundaryProblem(m, target, model)
    nt = nu_tilde(m, gp, model)
    assume(abs(nt - TWO_PI * round(nt / TWO_PI)) > 1e-3)
    roots = enumerate_roots(bp, max(3, int(abs(nt) / TWO_PI) + 2))
    root = min(roots, key=lambda r: abs(r - nt))
    assert np.allclose(solve_constants(bp, root).as_array(), gp.as_array(), atol=1e-8)
    assert length_at_root(bp, root) == pytest.approx(speed(m, gp), abs=1e-9)


@pytest.mark.parametrize("model", MODELS)
@settings(max_examples=40, deadline=None)
@given(m=metrics(), gp=params)
def test_every_candidate_reaches_target(model, m, gp):
    target = geodesic_point(m, gp, 1.0, model)
    res = complexity(BoundaryProblem(m, target, model))
    for c in res.candidates:
        assert geodesic_point(m, c.params, 1.0, model).distance_to(target) < 1e-8
        assert speed(m, c.params) == pytest.approx(c.length, rel=1e-9, abs=1e-12)
    assert res.value <= speed(m, gp) + 1e-9
    assert res.bound >= res.value
    assert res.value == min(c.length for c in res.candidates)


@pytest.mark.parametrize("k", [1, 2, 3])
@pytest.mark.parametrize("delta", [0.2, 0.5, 1.0, 2.0])
def test_adversarial_minima_at_odd_pi(k, delta):
    m = Metric(1.0, -1.0, 2.0)
    res = complexity(BoundaryProblem(m, minima_at_odd_pi(k, m, delta), PAPER))
    assert res.winner.nu_tilde == pytest.approx((2 * k + 1) * math.pi, abs=1e-6)


def test_minima_at_odd_pi_validation():
    with pytest.raises(ValueError):
        minima_at_odd_pi(0, Metric(1, 0, 1), 0.3)
    with pytest.raises(ValueError):
        minima_at_odd_pi(1, Metric(1, 0, 1), -0.3)


# --------------------------------------------------------------------------- targets close to the centre


@pytest.mark.parametrize("model", MODELS)
@pytest.mark.parametrize("r", [1e-3, 1e-6, 1e-8, 1e-10, 1e-12, 1e-14, 1e-40])
@pytest.mark.parametrize("eap", [(0.7, -3.0), (-2.0, 11.0), (0.0, 0.0), (3.0, 40.0)])
def test_small_radius_targets(model, r, eap):
    m = Metric(2.0, 0.3, 1.09 / 2.0)
    target = GroupElement(eap[0], eap[1], r, -r)
    res = complexity(BoundaryProblem(m, target, model))
    for c in res.candidates:
        assert geodesic_point(m, c.params, 1.0, model).distance_to(target) < 1e-9
    central = complexity(BoundaryProblem(m, GroupElement(eap[0], eap[1], 0.0, 0.0), model)).value
    # moving the endpoint by r changes the distance by at most ~r
    assert abs(res.value - central) <= 10 * r + 1e-9 or r >= 1e-3


def test_near_pole_roots_keep_offset():
    m = Metric(1.0, 0.3, 1.09)
    bp = BoundaryProblem(m, GroupElement(0.0, 0.0, 1e-9, 0.0), PAPER)
    res = complexity(bp)
    poles = [c for c in res.candidates if isinstance(c.nu_tilde, PoleRoot)]
    assert poles
    for c in poles:
        assert 0.0 < abs(c.nu_tilde.eps) < 1e-8
        assert c.branch_index == (c.nu_tilde.k if c.nu_tilde.eps > 0 else c.nu_tilde.k - 1)
    assert -poles[0].nu_tilde == PoleRoot(-poles[0].nu_tilde.k, -poles[0].nu_tilde.eps)


def test_tiny_radius_is_treated_as_central():
    m = Metric(1.0, 0.0, 1.0)
    r = math.sqrt(4.0 / (m.a * CENTRAL_DELTA)) / 2
    bp = BoundaryProblem(m, GroupElement(0.0, 1.0, r, 0.0))
    assert bp.is_central and bp.delta is None


@pytest.mark.parametrize("model", MODELS)
def test_shifted_oscillator_at_full_period(model):
    # sin(2 pi) rounds to -2.4e-16, leaving a target a hair off the centre
    target = shifted_target(type(SHIFTED_CASES[0])(10.0, TWO_PI, 0.0))
    assert 0.0 < target.r2 < 1e-28
    res = complexity(BoundaryProblem(REFERENCE_METRIC, target, model))
    assert math.isfinite(res.value)
