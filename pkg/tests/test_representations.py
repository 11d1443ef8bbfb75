import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from osc_complexity.boundary import BoundaryProblem, complexity
from osc_complexity.errors import InvalidRepresentation
from osc_complexity.geodesics import GeodesicModel, Metric, exp_is_geodesic
from osc_complexity.group import IDENTITY, AlgebraElement, GroupElement, exp
from osc_complexity.representations import (
    Displacement,
    Generic,
    KernelInfo,
    OscillatorEvolution,
    RepresentationSpec,
    ShiftedOscillator,
    canonical_representative,
    coset_complexity,
    kernel,
    length_lower_bound,
    quotient_reduce,
    shifted_oscillator_generator,
    spectrum,
    to_group_element,
    unitary_complexity,
    unitary_complexity_detail,
)
from osc_complexity.reproduce import sawtooth

from conftest import group_elements, metrics

PAPER, LC = GeodesicModel.PAPER, GeodesicModel.LEVI_CIVITA
IRRATIONAL = RepresentationSpec(1.0, math.sqrt(2.0) - 1.0)


def test_spec_validation():
    with pytest.raises(InvalidRepresentation):
        RepresentationSpec(0.0)
    with pytest.raises(InvalidRepresentation):
        RepresentationSpec(1.0, math.inf)
    with pytest.raises(InvalidRepresentation):
        RepresentationSpec(1.0, 0.0, (1, 3))
    with pytest.raises(InvalidRepresentation):
        RepresentationSpec(1.0, 0.0, (1, 0))
    assert RepresentationSpec(1.0, 0.0, (1, 2)).rationality == (1, 2)


def test_detected_rationality():
    assert RepresentationSpec.with_detected_rationality(1.0, 0.0).rationality == (1, 2)
    assert RepresentationSpec.with_detected_rationality(2.0, 1.0 / 3.0).rationality == (2, 3)
    assert IRRATIONAL.rationality is None
    assert RepresentationSpec.with_detected_rationality(1.0, math.sqrt(2.0)).rationality is None


def test_kernel_examples():
    assert kernel(RepresentationSpec(1.0, 0.0, (1, 2))).alpha_period == pytest.approx(4 * math.pi)
    assert kernel(IRRATIONAL).alpha_period is None
    assert kernel(RepresentationSpec(2 * math.pi)).e_period == pytest.approx(1.0)


def test_named_unitaries():
    spec = RepresentationSpec(1.0)
    assert to_group_element(OscillatorEvolution(1.0), spec) == GroupElement(0.0, -1.0, 0.0, 0.0)
    assert to_group_element(Displacement(0.0, 0.0), spec) == IDENTITY
    assert to_group_element(Displacement(3.0, 4.0), spec) == GroupElement(0.0, 0.0, 3.0, 4.0)
    x = AlgebraElement(0.1, 0.2, 0.3, 0.4)
    assert to_group_element(Generic(x), spec) == exp(x)
    with pytest.raises(TypeError):
        to_group_element("not a unitary", spec)


@settings(max_examples=100, deadline=None)
@given(st.floats(-20, 20), st.floats(-5, 5), st.floats(0.2, 3.0))
def test_shifted_oscillator_is_exponential(t, lam, omega):
    spec = RepresentationSpec(omega)
    u = ShiftedOscillator(t, lam)
    g = to_group_element(u, spec)
    x = shifted_oscillator_generator(u, spec)
    assert g.distance_to(exp(x)) < 1e-9 * max(1.0, abs(g.e))


def test_spectrum():
    assert spectrum(RepresentationSpec(1.0), 3) == [0.5, 1.5, 2.5, 3.5]
    assert spectrum(RepresentationSpec(2.0, 1.0), 2) == [1.0, 2.0, 3.0]
    with pytest.raises(ValueError):
        spectrum(RepresentationSpec(1.0), -1)


def test_canonical_representative():
    k = KernelInfo(2 * math.pi, 4 * math.pi)
    g = GroupElement(7.0, 13.0, 1.0, 2.0)
    c = canonical_representative(g, k)
    assert abs(c.e) <= math.pi and abs(c.alpha) <= 2 * math.pi
    assert (c.e - g.e) / (2 * math.pi) == pytest.approx(round((c.e - g.e) / (2 * math.pi)))
    assert (c.q, c.p) == (g.q, g.p)


def test_quotient_reduce_without_metric_is_singleton():
    g = GroupElement(0.5, 0.3, 1.0, 0.0)
    assert quotient_reduce(g, kernel(IRRATIONAL)) == [g]


def test_quotient_reduce_orders_by_lower_bound():
    m = Metric(1.0, 0.0, 2.0)
    g = GroupElement(0.5, -9.0, 1.0, 0.5)
    k = kernel(RepresentationSpec(1.0, 0.0, (1, 2)))
    reps = quotient_reduce(g, k, m)
    bounds = [length_lower_bound(m, r) for r in reps]
    assert bounds == sorted(bounds)
    for r in reps:
        de, da = r.e - g.e, r.alpha - g.alpha
        assert de / k.e_period == pytest.approx(round(de / k.e_period), abs=1e-9)
        assert da / k.alpha_period == pytest.approx(round(da / k.alpha_period), abs=1e-9)


@pytest.mark.parametrize("model", [PAPER, LC])
@settings(max_examples=60, deadline=None)
@given(m=metrics(), g=group_elements)
def test_lower_bound_is_valid(model, m, g):
    res = complexity(BoundaryProblem(m, g, model))
    assert length_lower_bound(m, g, model) <= res.value * (1 + 1e-9) + 1e-12


@pytest.mark.parametrize("model", [PAPER, LC])
@pytest.mark.parametrize("qp", [(3.0, 4.0), (-1.0, 0.5), (0.0, 2.0)])
def test_displacement_complexity(model, qp):
    c = unitary_complexity(Displacement(*qp), IRRATIONAL, Metric(1.3, 0.0, 1.0), model)
    assert c == pytest.approx(math.hypot(*qp), rel=1e-9)


@pytest.mark.parametrize("model", [PAPER, LC])
def test_oscillator_irrational_is_linear(model):
    m = Metric(1.0, 0.0, 3.0)
    for wt in (0.5, 4.0, 11.0, 30.0):
        c = unitary_complexity(OscillatorEvolution(wt), IRRATIONAL, m, model)
        assert c == pytest.approx(math.sqrt(3.0) * wt, rel=1e-9)


@pytest.mark.parametrize("model", [PAPER, LC])
def test_oscillator_sawtooth(model):
    m = Metric(1.0, 0.0, 2.0)
    spec = RepresentationSpec(1.0, 0.0, (1, 2))
    for wt in np.linspace(0.0, 12 * math.pi, 19):
        c = unitary_complexity(OscillatorEvolution(wt), spec, m, model)
        assert c == pytest.approx(sawtooth(wt, m.d), abs=1e-8)


def test_first_shifted_case_is_exponential_geodesic():
    m = Metric(1.0, -1.0, 2.0)
    spec = RepresentationSpec(1.0)
    u = ShiftedOscillator(1.0, math.sqrt(50.0))
    assert exp_is_geodesic(m, shifted_oscillator_generator(u, spec))
    for model in (PAPER, LC):
        g = to_group_element(u, spec)
        assert complexity(BoundaryProblem(m, g, model)).value == pytest.approx(math.sqrt(52.0), abs=1e-4)
    assert unitary_complexity(u, RepresentationSpec(1.0, 0.0, (1, 2)), m, PAPER) == pytest.approx(math.sqrt(52.0), abs=1e-4)


def test_kernel_translate_can_win_in_levi_civita_flow():
    m = Metric(1.0, -1.0, 2.0)
    u = ShiftedOscillator(1.0, math.sqrt(50.0))
    det = unitary_complexity_detail(u, RepresentationSpec(1.0), m, LC)
    assert det.value < math.sqrt(52.0) - 0.1
    assert det.representative != to_group_element(u, RepresentationSpec(1.0))
    assert det.representatives_checked >= 2


def test_coset_complexity_accepts_group_elements():
    m, spec = Metric(1.0, 0.0, 1.0), RepresentationSpec(1.0)
    g = GroupElement(2 * math.pi, 0.0, 3.0, 4.0)
    assert coset_complexity(g, spec, m).value == pytest.approx(5.0)
