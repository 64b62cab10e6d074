import numpy as np
import pytest

from airfoil.solver import (away_from_breakpoints, check_range, classify_growth, holder_bound, solution_handle,
                            solution_values, solve)
from expression.parser import parse
from operators.hilbert_operators import evaluate, transform_handle, weighted_integral
from spectral.chebyshev import WeightedSeries
from utils.errors import DomainError, RangeError


def test_holder_bound():
    assert holder_bound(1.0, 1.0) == pytest.approx(4.0 / np.pi, rel=1e-14)
    assert holder_bound(2.0, 0.5) == pytest.approx(2.0 / np.pi * 2.0 * np.pi, rel=1e-12)
    with pytest.raises(DomainError):
        holder_bound(1.0, 0.0)
    with pytest.raises(DomainError):
        holder_bound(1.0, 1.5)
    with pytest.raises(DomainError):
        holder_bound(0.0, 1.0)


@pytest.mark.parametrize("sups, verdict", [
    ([1.0, 1.2, 1.205], "bounded"),
    ([1.0, 2.0, 4.0, 8.0], "growing"),
    ([1.0, 1.05], "inconclusive"),
    ([1.0], "inconclusive"),
    ([0.0, 0.0], "bounded"),
])
def test_classify_growth(sups, verdict):
    assert classify_growth(sups) == verdict


def test_indicator_is_not_in_the_range(chi):
    report = check_range(chi)
    assert report.phi_value == pytest.approx(np.pi, abs=1e-7)
    assert not report.phi_pass
    assert not report.overall
    with pytest.raises(RangeError) as info:
        solve(chi)
    assert info.value.report.phi_value == pytest.approx(np.pi, abs=1e-7)


def test_forced_solution_reports_defect(chi):
    solution = solve(chi, force=True)
    assert solution.forced
    assert solution.defect == pytest.approx(1.0, abs=1e-12)


def test_round_trip_of_a_polynomial(interior_points):
    p = parse("x^3 - 0.5*x + 0.25")
    solution = solve(transform_handle("T", p))
    assert solution.membership.overall
    assert solution.representation == "chebyshev"
    assert isinstance(solution.solution, WeightedSeries)
    assert np.max(np.abs(solution_values(solution, interior_points) - p(interior_points))) < 1e-7
    assert solution.residual_sup < 1e-7


def test_solution_of_x_is_minus_weight():
    solution = solve(parse("x"))
    t = np.array([-0.5, 0.0, 0.5])
    assert np.allclose(solution_values(solution, t), -np.sqrt(1.0 - t ** 2), atol=1e-12)
    image = transform_handle("T", solution_handle(solution))
    assert abs(weighted_integral(image).value) < 1e-10
    assert np.allclose(evaluate("T", solution_handle(solution), t).array, t, atol=1e-12)


def test_boundedness_probe_is_reported(half_chi):
    report = check_range(half_chi)
    assert report.boundedness_verdict in ("bounded", "growing", "inconclusive")
    assert [d for d, _ in report.tcheck_sup_by_refinement] == pytest.approx([1e-2, 1e-3, 1e-4, 1e-5, 1e-6, 1e-7, 1e-8])
    assert "heuristic" in report.classifier


def test_points_on_breakpoints_are_dropped(half_chi):
    x = away_from_breakpoints(half_chi, [-0.5, 0.0, 0.5])
    assert x.tolist() == [-0.5, 0.5]


def test_logarithmic_profile_is_in_the_range(chi):
    report = check_range(transform_handle("T", chi))
    assert report.phi_pass
    assert report.boundedness_verdict == "bounded"
    assert report.overall
    assert not report.errors


def test_inversion_recovers_the_indicator(chi, interior_points):
    solution = solve(transform_handle("T", chi))
    assert np.max(np.abs(solution_values(solution, interior_points) - 1.0)) < 1e-6


def test_inversion_recovers_a_chebyshev_polynomial(interior_points):
    p = parse("2*x^2 - 1")
    solution = solve(transform_handle("T", p))
    assert solution.membership.overall
    assert np.max(np.abs(solution_values(solution, interior_points) - p(interior_points))) < 1e-6
