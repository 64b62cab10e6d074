import numpy as np
import pytest

from expression.parser import parse
from operators.closed_forms import chi_transform
from quadrature.coordinates import AnchoredPoints, DualPoint, dual_difference
from quadrature.function_handle import FunctionHandle, Regularity
from quadrature.principal_value import integral, pv_fht, pv_fht_excision
from utils.config import load_config
from utils.errors import ConvergenceError, DomainError, RejectedInputError, SingularPointError


def test_dual_difference_near_one_keeps_precision():
    a, b = DualPoint.near_upper(1e-300), DualPoint.near_upper(3e-300)
    assert a.minus(b) == pytest.approx(2e-300, rel=1e-15)
    assert float(dual_difference(0.25, 0.75, -0.25, 0.75)) == 0.5


def test_shifted_point_tracks_distance():
    p = DualPoint.upper().shifted(-1e-200)
    assert p.d == 1e-200
    assert DualPoint.lower().shifted(1e-200).d == 1e-200
    assert DualPoint.from_x(0.1) < DualPoint.from_x(0.2)


def test_anchored_points():
    points = AnchoredPoints.around(DualPoint.upper(), [-1e-250, -0.5])
    assert points.d[0] == 1e-250
    assert points.x[1] == 0.5
    assert len(AnchoredPoints.concatenate([points, AnchoredPoints.from_x([0.0])])) == 3


@pytest.mark.parametrize("t", [-0.9, -0.3, 0.0, 0.5, 0.97])
def test_pv_of_constant(t):
    res = pv_fht(FunctionHandle.constant(1.0), t)
    assert res.value == pytest.approx(float(chi_transform(t)), abs=1e-10)
    assert res.subdivisions > 0


def test_pv_kernel_and_weight_identities():
    for t in (-0.4, 0.2, 0.8):
        assert abs(pv_fht(FunctionHandle.inverse_weight(), t).value) < 1e-9
        assert pv_fht(FunctionHandle.weight(), t).value == pytest.approx(-t, abs=1e-10)
        x_over_w = FunctionHandle.from_callable(lambda x: x, weight_power=-1)
        assert pv_fht(x_over_w, t).value == pytest.approx(1.0, abs=1e-9)


def test_pv_of_step_matches_closed_form():
    step = FunctionHandle.indicator(0.0, 1.0)
    for t in (-0.5, 0.25, 0.75):
        expected = np.log(abs((1.0 - t) / (0.0 - t))) / np.pi
        assert pv_fht(step, t).value == pytest.approx(expected, abs=1e-10)


def test_excision_agrees_with_subtraction():
    f = FunctionHandle.from_callable(np.exp)
    t = 0.3
    assert pv_fht_excision(f, t, eps=1e-7, tol=1e-10).value == pytest.approx(pv_fht(f, t).value, abs=1e-5)


def test_log_singularities_meet_the_tolerance():
    profile = parse("log((1-x)/(1+x))")
    result = integral(profile, tol=1e-11)
    assert result.value == pytest.approx(0.0, abs=1e-10)
    assert result.est_error <= 1e-11
    squared = parse("log(1-x)^2")
    log2 = np.log(2.0)
    assert integral(squared, tol=1e-11).value == pytest.approx(2.0 * log2 ** 2 - 4.0 * log2 + 4.0, rel=1e-10)


def test_integrals_with_weights():
    assert integral(FunctionHandle.weight()).value == pytest.approx(np.pi / 2.0, abs=1e-12)
    assert integral(FunctionHandle.inverse_weight()).value == pytest.approx(np.pi, abs=1e-12)
    assert integral(FunctionHandle.indicator(-0.5, 0.25)).value == pytest.approx(0.75, abs=1e-12)


def test_pv_rejects_endpoints_and_breakpoints():
    with pytest.raises(DomainError):
        pv_fht(FunctionHandle.constant(1.0), 1.0)
    with pytest.raises(SingularPointError) as info:
        pv_fht(FunctionHandle.indicator(0.0, 1.0), 0.0)
    assert info.value.point == 0.0


def test_tolerance_floor():
    with pytest.raises(DomainError):
        pv_fht(FunctionHandle.constant(1.0), 0.0, tol=1e-15)


def test_panel_budget_exhaustion(default_config):
    default_config.quadrature.max_panels = 4
    # an undeclared jump forces refinement
    f = FunctionHandle.from_callable(lambda x: np.where(x > 0.123, 1.0, 0.0), regularity=Regularity.JUMP)
    with pytest.raises(ConvergenceError) as info:
        integral(f, tol=1e-12)
    assert info.value.value is not None and info.value.subdivisions > 4


def test_non_finite_integrand_is_rejected():
    f = FunctionHandle.from_callable(lambda x: np.where(x > 0.0, np.nan, 1.0))
    with pytest.raises(RejectedInputError):
        integral(f)


def test_panel_budget_environment_override(monkeypatch, tmp_path):
    monkeypatch.setenv("FHT_MAX_PANELS", "128")
    config = load_config(str(tmp_path / "missing.json"))
    assert config.quadrature.max_panels == 128


def test_config_file_is_read(tmp_path):
    path = tmp_path / "config.json"
    path.write_text('{"norms": {"grid": 2048}}')
    config = load_config(str(path))
    assert config.norms.grid == 2048
    assert config.quadrature.gauss_order == 15
