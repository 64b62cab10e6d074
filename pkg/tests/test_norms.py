import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy import special

from expression.parser import parse
from norms.rearrangement import (StepRearrangement, equimeasurability_defect, from_cells, rearrange,
                                 rearrange_samples)
from norms.zygmund import (b_part_ratio, b_part_trend, log_weight, log_weight_primitive, norm_lexp, norm_lexp_equiv,
                           norm_llogl, norm_report, young_integral, young_report)
from operators.hilbert_operators import transform_handle
from quadrature.function_handle import FunctionHandle
from utils.errors import DomainError, RejectedInputError


def test_indicator_rearrangement_and_norms(chi):
    r = rearrange(chi)
    assert r.breakpoints.tolist() == [0.0, 2.0]
    assert r.levels.tolist() == [1.0]
    assert norm_lexp(r) == pytest.approx(1.0, abs=1e-10)
    assert norm_lexp_equiv(r) == pytest.approx(1.0, abs=1e-10)
    assert norm_llogl(r, 0.0) == pytest.approx(2.0, abs=1e-14)
    assert norm_llogl(r, 1.0) == pytest.approx(4.0, abs=1e-12)
    assert norm_llogl(r, 2.0) == pytest.approx(10.0, abs=1e-12)


def test_overlapping_steps_rearrange_exactly():
    r = rearrange(parse("2*chi(-0.5,0.2) + chi(0,0.7)"))
    assert np.allclose(r.levels, [3.0, 2.0, 1.0, 0.0])
    assert np.allclose(r.breakpoints, [0.0, 0.2, 0.7, 1.2, 2.0], atol=1e-15)


def test_absolute_value_profile(small_grid):
    r = rearrange(parse("abs(x)"))
    s = np.linspace(0.0, 1.99, 200)
    assert np.max(np.abs(r(s) - (1.0 - s / 2.0))) < 4e-3
    assert r.integral(2.0) == pytest.approx(1.0, abs=1e-3)


def test_equimeasurability_on_the_sampling_partition(small_grid):
    f = parse("x^2 - 0.3")
    r = rearrange(f)
    assert equimeasurability_defect(f, r, [0.05, 0.2, 0.5]) < 1e-12


def test_rearrange_samples():
    r = rearrange_samples([-0.5, 0.0, 0.5], [1.0, -3.0, 2.0])
    assert r.levels.tolist() == [3.0, 2.0, 1.0]
    assert np.allclose(r.breakpoints, [0.0, 0.5, 1.25, 2.0])


def test_invalid_rearrangements():
    with pytest.raises(DomainError):
        StepRearrangement(np.array([0.0, 1.0, 2.0]), np.array([1.0, 2.0]))
    with pytest.raises(DomainError):
        StepRearrangement(np.array([0.0, 1.5]), np.array([1.0]))
    with pytest.raises(RejectedInputError):
        from_cells([1.0, np.nan], [1.0, 1.0])
    with pytest.raises(DomainError):
        rearrange(parse("x"), grid=32)
    with pytest.raises(DomainError):
        norm_lexp(rearrange(FunctionHandle.constant(1.0)), -1.0)


def test_log_weight_primitive_matches_incomplete_gamma():
    t = np.array([1e-6, 0.5, 2.0])
    lt = log_weight(t)
    assert np.allclose(log_weight_primitive(t, 1.0), 2.0 * np.e * special.gammaincc(2.0, lt), rtol=1e-13)
    assert np.allclose(log_weight_primitive(t, 0.0), t)
    assert log_weight_primitive(np.array([0.0]), 2.5)[0] == 0.0
    # int_0^2 L^2 = 2e Gamma(3) Q(3, 1) = 10
    assert log_weight_primitive(np.array([2.0]), 2.0)[0] == pytest.approx(10.0, rel=1e-14)


def test_b_part_of_bounded_and_logarithmic_functions(chi):
    r = rearrange(chi)
    t = 2.0 ** -20
    assert b_part_ratio(r, t) == pytest.approx(1.0 / float(log_weight(t)), rel=1e-12)
    assert b_part_trend(r).verdict == "vanishing"
    log_profile = rearrange(transform_handle("T", chi).scaled(np.pi))
    assert b_part_ratio(log_profile, t) == pytest.approx(1.0, abs=0.05)
    assert b_part_trend(log_profile).verdict == "non-vanishing"
    with pytest.raises(DomainError):
        b_part_ratio(r, 2.5)


def test_young_integral(chi):
    assert young_integral(chi, 1.0) == pytest.approx(2.0 * (np.e - 2.0), abs=1e-12)
    assert young_integral(FunctionHandle.constant(0.0), 3.0) == 0.0
    report = young_report(chi, 1.0)
    assert report.exp_integral_upper == pytest.approx(3.0 + 4.0 * (np.e - 2.0))
    with pytest.raises(DomainError):
        young_integral(chi, 0.0)


def test_young_integral_divergence():
    f = parse("abs(log(x))*chi(0,1)")
    assert young_report(f, 2.0).divergent
    assert young_integral(f, 2.0) == float("inf")
    assert np.isfinite(young_integral(f, 0.5))


@pytest.mark.parametrize("lam", [0.5, 0.85, 0.9, 0.95])
def test_young_integral_of_log_below_one(lam):
    report = young_report(parse("abs(log(x))*chi(0,1)"), lam)
    assert not report.divergent
    assert report.value == pytest.approx(1.0 / (1.0 - lam) - lam - 1.0, rel=2e-2)


def test_norm_report_fields(chi):
    report = norm_report(chi, alpha=1.0)
    assert report.lexp_primary == pytest.approx(1.0, abs=1e-10)
    assert report.llogl == pytest.approx(4.0, abs=1e-12)
    assert report.b_part_verdict == "vanishing"
    assert len(report.norm_names) == 3


levels = st.lists(st.floats(0.0, 10.0), min_size=1, max_size=8)


@settings(max_examples=50, deadline=None)
@given(levels, st.floats(0.1, 5.0))
def test_norm_properties_on_step_rearrangements(values, c):
    values = sorted(values, reverse=True)
    widths = np.full(len(values), 2.0 / len(values))
    r = from_cells(values, widths)
    primary, equivalent = norm_lexp(r), norm_lexp_equiv(r)
    assert primary >= equivalent - 1e-12
    assert norm_lexp(r.scaled(c)) == pytest.approx(c * primary, rel=1e-12, abs=1e-300)
    assert norm_llogl(r, 2.0) >= norm_llogl(r, 1.0) - 1e-12 >= norm_llogl(r, 0.0) - 2e-12
