import numpy as np
import pytest
from pydantic import ValidationError

from expression.parser import parse
from operators import closed_forms
from operators.hilbert_operators import (OperatorRequest, apply_Q, apply_T, evaluate, phi_1_over_w, select_method,
                                         transform_handle, weighted_integral)
from quadrature.coordinates import DualPoint
from quadrature.function_handle import FunctionHandle
from quadrature.principal_value import integral
from spectral.chebyshev import ChebSeries
from utils.errors import DomainError, SingularPointError


def test_indicator_transform_at_half(chi):
    result = evaluate("T", chi, [0.5], method="quadrature")
    assert result.array[0] == pytest.approx(-0.34969915, abs=1e-8)
    assert result.values[0][0] == 0.5
    assert result.method_used == "quadrature"


@pytest.mark.parametrize("method", ["spectral", "quadrature"])
def test_engines_agree_on_smooth_input(method, interior_points):
    f = parse("exp(x)*cos(x)")
    reference = evaluate("T", f, interior_points, method="quadrature").array
    assert np.max(np.abs(evaluate("T", f, interior_points, method=method).array - reference)) < 1e-9


def test_closed_form_and_quadrature_agree_on_steps():
    f = parse("2*chi(-0.5,0.2) - chi(0.1,0.9)")
    t = np.array([-0.8, -0.3, 0.15, 0.5, 0.95])
    closed = evaluate("T", f, t, method="closed_form").array
    quad = evaluate("T", f, t, method="quadrature").array
    assert np.max(np.abs(closed - quad)) < 1e-9


def test_check_transform_closed_forms(half_chi, chi):
    value = evaluate("T_check", half_chi, [-0.6]).array[0]
    assert value == pytest.approx(-np.log(3.0) / np.pi, abs=1e-12)
    assert np.max(np.abs(evaluate("T_check", chi, [-0.5, 0.3]).array)) < 1e-14


def test_hat_transform_of_constant():
    t = 0.5
    value = evaluate("T_hat", FunctionHandle.constant(1.0), [t]).array[0]
    assert value == pytest.approx(t / np.sqrt(1.0 - t * t), abs=1e-12)


def test_hat_transform_keeps_clear_of_endpoints():
    with pytest.raises(DomainError):
        evaluate("T_hat", FunctionHandle.constant(1.0), [1.0 - 1e-7])


def test_method_selection(half_chi):
    assert select_method("T", half_chi) == "closed_form"
    assert select_method("T", parse("x^2")) == "spectral"
    assert select_method("T", parse("log(2 - x)")) == "quadrature"
    with pytest.raises(DomainError):
        select_method("T", half_chi, "spectral")
    with pytest.raises(DomainError):
        select_method("T", parse("x"), "closed_form")


def test_request_validation(chi):
    with pytest.raises(ValidationError):
        OperatorRequest(operator="T", input=chi, points=[1.0])
    with pytest.raises(ValidationError):
        OperatorRequest(operator="T", input=chi, points=[0.1, 0.1])
    with pytest.raises(ValidationError):
        OperatorRequest(operator="T", input=chi, points=[])
    with pytest.raises(ValidationError):
        OperatorRequest(operator="T", input="x^2", points=[0.1])


def test_series_input_is_accepted():
    result = apply_T(OperatorRequest(operator="T", input=ChebSeries([0.0, 1.0]), points=[0.25]))
    expected = 0.25 * float(closed_forms.chi_transform(0.25)) + 2.0 / np.pi
    assert result.array[0] == pytest.approx(expected, abs=1e-14)


def test_points_on_a_jump_are_rejected(half_chi):
    with pytest.raises(SingularPointError):
        evaluate("T", half_chi, [0.0, 0.5])


def test_workers_do_not_change_values(chi):
    t = np.linspace(-0.9, 0.9, 9)
    serial = evaluate("T", chi, t, method="quadrature").array
    parallel = evaluate("T", chi, t, method="quadrature", workers=3).array
    assert np.array_equal(serial, parallel)


def test_projection_and_functional(chi):
    assert apply_Q(chi) == pytest.approx(1.0, abs=1e-14)
    assert apply_Q(FunctionHandle.indicator(0.0, 1.0)) == pytest.approx(0.5, abs=1e-14)
    with pytest.raises(DomainError):
        apply_Q(FunctionHandle.inverse_weight())
    assert apply_Q(parse("x")) == pytest.approx(0.0, abs=1e-12)
    phi = phi_1_over_w(chi)
    assert phi.value == pytest.approx(np.pi, abs=1e-12) and not phi.in_kernel
    assert phi_1_over_w(parse("x^3")).in_kernel


def test_step_weighted_integral_matches_quadrature(half_chi):
    closed = weighted_integral(half_chi).value
    quad = weighted_integral(half_chi, method="quadrature").value
    assert closed == pytest.approx(np.pi / 2.0, abs=1e-14)
    assert quad == pytest.approx(closed, abs=1e-9)


def test_left_inversion_of_polynomial(interior_points):
    f = parse("x^3 - 2*x + 0.5")
    recovered = evaluate("T_check", transform_handle("T", f), interior_points).array
    assert np.max(np.abs(recovered - f(interior_points))) < 1e-8


def test_right_inversion_leaves_projection_defect(half_chi):
    t = np.array([-0.7, -0.2, 0.4, 0.8])
    q = apply_Q(half_chi)
    values = evaluate("T", transform_handle("T_check", half_chi), t).array
    assert np.max(np.abs(values - (half_chi(t) - q))) < 1e-7


def test_annihilation_of_bounded_images(chi):
    assert abs(weighted_integral(transform_handle("T", parse("exp(x)"))).value) < 1e-9
    assert abs(weighted_integral(transform_handle("T", chi)).value) < 1e-7


def test_parseval_pairing(half_chi):
    w = FunctionHandle.weight()
    left = integral(half_chi.product(transform_handle("T", w))).value
    right = integral(w.product(transform_handle("T", half_chi))).value
    assert left == pytest.approx(-0.5, abs=1e-12)
    assert left + right == pytest.approx(0.0, abs=1e-7)


def test_transform_handle_keeps_precise_singular_points():
    step = FunctionHandle.step([(-1.0, DualPoint.near_upper(1e-40), 1.0)])
    image = transform_handle("T", step)
    assert image.singular_points()[0].d == 1e-40


def test_inverse_of_the_logarithmic_profile():
    values = evaluate("T_check", parse("log((1-x)/(1+x))/pi"), [-0.5, 0.0, 0.5]).array
    assert np.allclose(values, 1.0, atol=1e-7)


@pytest.mark.parametrize("source, method", [("x^2", "spectral"), ("abs(x)", "quadrature")])
def test_transform_handles_accept_nodes_that_round_to_one(source, method):
    image = transform_handle("T", parse(source), method=method)
    x, d = np.array([np.cos(1e-9), -np.cos(1e-9)]), np.array([5e-19, 5e-19])
    assert np.all(np.isfinite(image(x, d)))
