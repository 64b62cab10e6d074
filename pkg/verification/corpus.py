"""Test functions and seeded random draws shared by the verification suites."""
import numpy as np

from expression.parser import parse
from quadrature.coordinates import DualPoint
from quadrature.function_handle import FunctionHandle
from spectral.chebyshev import ChebSeries
from utils.errors import DomainError

MIN_SET_MEASURE = 1e-3
MAX_INTERVALS = 5
LOWER_BOUND = 1.0 / (np.pi * np.e ** 2)

SMOOTH_EXPRESSIONS = [
    "1", "x", "x^2", "x^3 - x", "2*x^2 - 1", "4*x^3 - 3*x", "x^4", "x^5 - x^2 + 1",
    "exp(x)", "exp(-x)", "exp(x^2)", "sin(x)", "sin(3*x)", "cos(x)", "cos(2*x)", "sin(5*x)",
    "cos(4*x) + x", "x*exp(x)", "exp(x)*cos(x)", "sin(x)^2", "exp(sin(x))", "cos(x)^3",
    "w", "x*w", "w*exp(x)", "1/w", "x/w", "exp(x)/w", "cos(x)/w", "(1 + x^2)/w",
]

# (expression, Lipschitz constant on [-1, 1])
LIPSCHITZ_EXPRESSIONS = [
    ("x", 1.0), ("-x", 1.0), ("x^2", 2.0), ("x^3", 3.0), ("sin(x)", 1.0),
    ("cos(x)", float(np.sin(1.0))), ("sin(2*x)", 2.0), ("exp(x)", float(np.e)), ("exp(-x)", float(np.e)),
    ("x^2 - x", 3.0), ("0.5*x + 0.25*x^2", 1.0), ("sin(x) + cos(x)", float(np.sqrt(2.0))),
    ("x*exp(x)", float(2.0 * np.e)), ("cos(3*x)", 3.0), ("2*x^3 - x", 5.0),
]


def smooth_corpus():
    return [parse(source) for source in SMOOTH_EXPRESSIONS]


def bounded_smooth_corpus():
    return [f for f in smooth_corpus() if f.weight_power >= 0]


def lipschitz_corpus():
    return [(parse(source), constant) for source, constant in LIPSCHITZ_EXPRESSIONS]


def random_polynomial(rng, max_degree=12):
    """A Chebyshev series of degree <= max_degree with O(1) decaying coefficients."""
    degree = int(rng.integers(1, max_degree + 1))
    coeffs = rng.normal(size=degree + 1) / (1.0 + np.arange(degree + 1))
    return ChebSeries(coeffs)


def polynomial_handle(series, name=None):
    coeffs = series.coeffs
    return FunctionHandle(base=lambda x, d: np.polynomial.chebyshev.chebval(x, coeffs) * np.ones_like(x),
                          name=name or f"poly(deg {series.degree})")


def random_intervals(rng, max_intervals=MAX_INTERVALS, min_measure=MIN_SET_MEASURE, max_draws=1000):
    """Disjoint intervals in (-1, 1) with total measure >= min_measure; small draws are redrawn."""
    for _ in range(max_draws):
        k = int(rng.integers(1, max_intervals + 1))
        ends = np.sort(rng.uniform(-1.0, 1.0, size=2 * k))
        intervals = [(float(a), float(b)) for a, b in zip(ends[::2], ends[1::2]) if b > a]
        if intervals and sum(b - a for a, b in intervals) >= min_measure:
            return intervals
    raise DomainError(f"no interval union with measure >= {min_measure:g} in {max_draws} draws")


def indicator_of(intervals, value=1.0, name=None):
    label = " + ".join(f"chi({a:.6g},{b:.6g})" for a, b in intervals)
    return FunctionHandle.step([(a, b, value) for a, b in intervals], name=name or label)


def random_step(rng, max_pieces=4):
    """A bounded step function sum c_k chi_(a_k, b_k)."""
    intervals = random_intervals(rng, max_pieces)
    values = rng.uniform(-2.0, 2.0, size=len(intervals))
    return FunctionHandle.step([(a, b, float(v)) for (a, b), v in zip(intervals, values)],
                               name="step[" + ", ".join(f"{v:.3g}@({a:.4g},{b:.4g})"
                                                        for (a, b), v in zip(intervals, values)) + "]")


def restricted_steps(pieces, intervals):
    """Pieces of a step function restricted to a union of disjoint intervals."""
    out = []
    for piece in pieces:
        for a, b in intervals:
            left = max(piece.left, DualPoint.from_x(a), key=lambda p: (p.x, -p.d if p.x >= 0 else p.d))
            right = min(piece.right, DualPoint.from_x(b), key=lambda p: (p.x, -p.d if p.x >= 0 else p.d))
            if right.minus(left) > 0.0:
                out.append((left, right, piece.value))
    return out


def interior_grid(n=41, margin=0.02, avoid=()):
    """Interior points of (-1 + margin, 1 - margin) kept 1e-3 away from ``avoid``."""
    x = np.linspace(-1.0 + margin, 1.0 - margin, n)
    for b in avoid:
        x = x[np.abs(x - b) > 1e-3]
    return x
