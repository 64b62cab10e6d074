import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from expression.parser import parse, tokenize
from quadrature.function_handle import Regularity
from utils.errors import ExpressionError


def test_arithmetic_and_functions():
    f = parse("x^2 + 2*sin(pi*x) - exp(-x)/e")
    x = np.array([-0.3, 0.1, 0.6])
    assert np.allclose(f(x), x ** 2 + 2.0 * np.sin(np.pi * x) - np.exp(-x) / np.e)


def test_unary_minus_binds_below_power():
    assert parse("-x^2")(np.array([0.5]))[0] == -0.25
    assert parse("2^-1")(np.array([0.0]))[0] == 0.5


@pytest.mark.parametrize("source, tag", [
    ("x^3 - x", "smooth"),
    ("chi(0,1)", "jump"),
    ("1/w", "inverse_weight"),
    ("exp(x)/w", "inverse_weight"),
    ("1/w*x", "inverse_weight"),
    ("x*(1/w)", "inverse_weight"),
    ("log(1-x)", "endpoint"),
    ("x*chi(-1,0)", "jump"),
])
def test_singularity_tags(source, tag):
    assert parse(source).singularity_tag == tag


def test_weight_factor_becomes_power():
    f = parse("x*w")
    assert f.weight_power == 1 and f.regularity is Regularity.SMOOTH
    x = np.array([0.5])
    assert f(x)[0] == pytest.approx(0.5 * np.sqrt(0.75))


@pytest.mark.parametrize("source", ["x/w", "1/w*x", "x*(1/w)", "x*(2/w)"])
def test_division_by_weight_inside_products(source):
    f = parse(source)
    x = np.array([-0.5, 0.25, 0.9])
    scale = 2.0 if "2" in source else 1.0
    assert np.allclose(f(x), scale * x / np.sqrt(1.0 - x ** 2))
    assert f.weight_power == -1 and f.regularity is Regularity.SMOOTH


def test_indicator_combinations_are_steps():
    f = parse("2*chi(-0.5,0.2) - chi(0,0.7)/2")
    assert f.is_step
    assert [p.value for p in f.steps] == [2.0, -0.5]
    assert f.breakpoints == (-0.5, 0.0, 0.2, 0.7)
    assert np.allclose(f(np.array([-0.6, -0.1, 0.1, 0.5])), [0.0, 2.0, 1.5, -0.5])


def test_endpoint_factors_use_the_distance_to_the_end():
    f = parse("log(1-x)")
    value = f(np.array([1.0]), np.array([1e-200]))[0]
    assert value == pytest.approx(np.log(1e-200), rel=1e-15)
    g = parse("log((1-x)/(1+x))")
    assert g(np.array([-1.0]), np.array([1e-100]))[0] == pytest.approx(np.log(2.0 / 1e-100), rel=1e-15)


def test_zero_factor_masks_undefined_values():
    f = parse("abs(log(x))*chi(0,1)")
    assert f(np.array([-0.5]))[0] == 0.0
    assert f(np.array([0.5]))[0] == pytest.approx(np.log(2.0))
    assert f.breakpoints == (0.0,)


@pytest.mark.parametrize("source, column", [
    ("x + * 2", 5),
    ("foo(x)", 1),
    ("sin(x", 6),
    ("chi(0.5, 0.2)", 1),
    ("chi(x, 1)", 5),
    ("2 $ x", 3),
    ("y", 1),
    ("", 1),
])
def test_errors_carry_positions(source, column):
    with pytest.raises(ExpressionError) as info:
        parse(source)
    assert info.value.line == 1
    assert info.value.column == column


def test_errors_on_second_line():
    with pytest.raises(ExpressionError) as info:
        parse("x +\n  )")
    assert (info.value.line, info.value.column) == (2, 3)


def test_tokenizer_positions():
    tokens = tokenize("2.5e-3*x")
    assert [(t.kind, t.text, t.pos) for t in tokens] == [
        ("number", "2.5e-3", 0), ("op", "*", 6), ("name", "x", 7), ("end", "", 8)]


@settings(max_examples=40, deadline=None)
@given(st.lists(st.floats(-5.0, 5.0, allow_nan=False).map(lambda v: round(v, 6)), min_size=1, max_size=6))
def test_polynomials_evaluate_like_numpy(coeffs):
    source = " + ".join(f"({c!r})*x^{k}" for k, c in enumerate(coeffs))
    x = np.linspace(-0.9, 0.9, 7)
    assert np.allclose(parse(source)(x), np.polynomial.polynomial.polyval(x, coeffs), atol=1e-12)
