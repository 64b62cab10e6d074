"""Chebyshev representation of functions on [-1, 1] and the exact transform
of Chebyshev polynomials under the finite Hilbert transform T.

With c_n = int_{-1}^{1} T_n (0 for odd n, 2/(1 - n^2) for even n),

    rho_0(t) = (1/pi) log((1 - t)/(1 + t)),   rho_1(t) = t rho_0(t) + 2/pi,
    rho_{n+1}(t) = 2 t rho_n(t) - rho_{n-1}(t) + (2/pi) c_n,

and rho_n = T(T_n). The logarithmic part of rho_n is exactly T_n(t) rho_0(t),
so the recurrence is run on the polynomial remainder p_n = rho_n - T_n rho_0,
which obeys the same relation with p_0 = 0, p_1 = 2/pi.
"""
import logging
from dataclasses import dataclass

import numpy as np
from numpy.polynomial import chebyshev as C

from utils.config import get_config
from utils.errors import DomainError, RejectedInputError

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ChebSeries:
    """f = sum_n coeffs[n] T_n."""

    coeffs: np.ndarray

    def __post_init__(self):
        coeffs = np.array(self.coeffs, dtype=float, ndmin=1)
        if coeffs.ndim != 1 or coeffs.size == 0:
            raise DomainError("a Chebyshev series needs a non-empty coefficient vector")
        if not np.all(np.isfinite(coeffs)):
            raise RejectedInputError("Chebyshev coefficients must be finite")
        coeffs.setflags(write=False)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def degree(self):
        return self.coeffs.size - 1

    def __call__(self, t):
        return eval_series(self, t)

    def __add__(self, other):
        return ChebSeries(C.chebadd(self.coeffs, other.coeffs))

    def __mul__(self, c):
        return ChebSeries(float(c) * self.coeffs)

    __rmul__ = __mul__

    def times_one_minus_x2(self):
        """The exact product (1 - x^2) * f, i.e. w^2 * f."""
        return ChebSeries(C.chebmul(self.coeffs, [0.5, 0.0, -0.5]))


@dataclass(frozen=True)
class ChebNodeGrid:
    """The ``order`` Chebyshev-Gauss points cos((2k+1) pi / (2 order)), decreasing."""

    order: int

    def __post_init__(self):
        if self.order < 1:
            raise DomainError("a node grid needs order >= 1")

    @property
    def nodes(self):
        k = np.arange(self.order)
        return np.cos((2 * k + 1) * np.pi / (2 * self.order))


@dataclass(frozen=True)
class WeightedSeries:
    """w^weight_power * sum_n a_n T_n with weight_power in {-1, 0, 1}."""

    series: ChebSeries
    weight_power: int = 0


def _sample(f, x):
    d = 1.0 - np.abs(x)
    if hasattr(f, "base"):
        return np.asarray(f.base(x, d), dtype=float)
    return np.asarray(f(x), dtype=float) * np.ones_like(x)


def _coefficients(values, nodes, degree):
    n = nodes.size
    coeffs = C.chebvander(nodes, degree).T @ values * (2.0 / n)
    coeffs[0] *= 0.5
    return coeffs


def fit(f, order=None):
    """Interpolate f at order + 1 Chebyshev-Gauss points (degree ``order``).

    ``f`` is a FunctionHandle (its weight factor included) or a vectorized
    callable. Nodes are interior, so f is never evaluated at ±1.
    """
    order = get_config().spectral.fit_order if order is None else int(order)
    if order < 0:
        raise DomainError("fit order must be >= 0")
    nodes = ChebNodeGrid(order + 1).nodes
    values = np.asarray(f(nodes), dtype=float) * np.ones_like(nodes)
    bad = ~np.isfinite(values)
    if bad.any():
        raise RejectedInputError(f"non-finite sample at node x={nodes[bad][0]!r}", location=float(nodes[bad][0]))
    return ChebSeries(_coefficients(values, nodes, order))


def fit_weighted(f, order=None):
    """Fit the regular factor u of f = w^p u; powers p >= 2 are folded into u."""
    order = get_config().spectral.fit_order if order is None else int(order)
    nodes = ChebNodeGrid(order + 1).nodes
    values = _sample(f, nodes)
    bad = ~np.isfinite(values)
    if bad.any():
        raise RejectedInputError(f"non-finite sample at node x={nodes[bad][0]!r}", location=float(nodes[bad][0]))
    series = ChebSeries(_coefficients(values, nodes, order))
    power = getattr(f, "weight_power", 0)
    if power < -1:
        raise DomainError(f"weight power {power} is not integrable")
    while power >= 2:
        series = series.times_one_minus_x2()
        power -= 2
    return WeightedSeries(series, power)


def _check_closed(t):
    t = np.asarray(t, dtype=float)
    if np.any(np.abs(t) > 1.0) or not np.all(np.isfinite(t)):
        raise DomainError("Chebyshev series are evaluated on [-1, 1] only")
    return t


def eval_series(s, t):
    """Clenshaw summation of sum a_n T_n(t)."""
    t = _check_closed(t)
    out = C.chebval(t, s.coeffs)
    return float(out) if out.ndim == 0 else out


def eval_u(coeffs, t):
    """Clenshaw summation of sum c_k U_k(t)."""
    t = _check_closed(t)
    b1 = np.zeros_like(t)
    b2 = np.zeros_like(t)
    for c in np.asarray(coeffs, dtype=float)[::-1]:
        b1, b2 = c + 2.0 * t * b1 - b2, b1
    return float(b1) if b1.ndim == 0 else b1


def t_to_u_coeffs(coeffs):
    """Coefficients in the U basis of sum a_n T_n."""
    a = np.asarray(coeffs, dtype=float)
    d = np.zeros_like(a)
    d[0] += a[0]
    if a.size > 1:
        d[1] += 0.5 * a[1]
    for n in range(2, a.size):
        d[n] += 0.5 * a[n]
        d[n - 2] -= 0.5 * a[n]
    return d


def _moment(n):
    return 0.0 if n % 2 else 2.0 / (1.0 - n * n)


def _check_open(t, d=None):
    """|t| < 1, or d = 1 - |t| > 0 when the precise distance is given (t may round to ±1)."""
    t = np.asarray(t, dtype=float)
    inside = np.abs(t) < 1.0 if d is None else np.asarray(d, dtype=float) > 0.0
    if not np.all(inside) or not np.all(np.isfinite(t)):
        raise DomainError("T of a Chebyshev polynomial has a logarithmic singularity at ±1; need |t| < 1")
    return t


def rho_table(degree, t, d=None):
    """rho_0..rho_degree at the points t, shape (degree + 1, len(t))."""
    if d is not None:
        d = np.atleast_1d(np.asarray(d, dtype=float))
    t = _check_open(np.atleast_1d(t), d)
    if d is None:
        one_minus, one_plus = 1.0 - t, 1.0 + t
    else:
        one_minus = np.where(t > 0.0, d, 2.0 - d)
        one_plus = np.where(t > 0.0, 2.0 - d, d)
    rho0 = np.log(one_minus / one_plus) / np.pi
    table = np.empty((degree + 1, t.size))
    t_prev, t_cur = np.ones_like(t), t.copy()
    p_prev, p_cur = np.zeros_like(t), np.full_like(t, 2.0 / np.pi)
    table[0] = rho0
    if degree >= 1:
        table[1] = t_cur * rho0 + p_cur
    for n in range(1, degree):
        t_prev, t_cur = t_cur, 2.0 * t * t_cur - t_prev
        p_prev, p_cur = p_cur, 2.0 * t * p_cur - p_prev + (2.0 / np.pi) * _moment(n)
        table[n + 1] = t_cur * rho0 + p_cur
    return table


def _oracle(coeffs, t):
    # imported here: the oracle module depends on nothing spectral
    from quadrature.function_handle import FunctionHandle
    from quadrature.principal_value import pv_fht

    handle = FunctionHandle.from_callable(lambda x: C.chebval(x, coeffs), name="chebyshev series")
    return pv_fht(handle, t).value


def fht_cheb_rho(n, t):
    """rho_n(t) = T(T_n)(t); recurrence for n <= n_max and |t| <= t_max, PV oracle beyond."""
    if n < 0:
        raise DomainError("Chebyshev index must be >= 0")
    t = float(_check_open(t))
    cfg = get_config().spectral
    if n > cfg.recurrence_n_max or abs(t) > cfg.recurrence_t_max:
        unit = np.zeros(n + 1)
        unit[n] = 1.0
        return _oracle(unit, t)
    return float(rho_table(n, [t])[n, 0])


@dataclass(frozen=True)
class SeriesTransform:
    value: float
    growth_ratio: float
    unstable: bool
    method: str


def _growth(coeffs, table):
    partial = np.cumsum(coeffs[:, None] * table, axis=0)
    peak = np.max(np.abs(partial), axis=0)
    final = np.abs(partial[-1])
    return peak / np.maximum(final, 1e-300), peak


def fht_series_values(s, t, d=None):
    """Vectorized sum a_n rho_n(t) for |t| < 1 (recurrence at every point)."""
    return s.coeffs @ rho_table(s.degree, t, d)


def fht_series_diagnostics(s, t):
    """T(f)(t) for f = sum a_n T_n with the partial-sum growth check."""
    t = float(_check_open(t))
    cfg = get_config().spectral
    if s.degree > cfg.recurrence_n_max or abs(t) > cfg.recurrence_t_max:
        return SeriesTransform(_oracle(s.coeffs, t), 1.0, False, "quadrature")
    table = rho_table(s.degree, [t])
    ratio, peak = _growth(s.coeffs, table)
    value = float(s.coeffs @ table[:, 0])
    unstable = bool(ratio[0] > cfg.instability_ratio and peak[0] > 1e-8)
    if unstable:
        logger.warning(f"[fht_series] partial sums grew by {ratio[0]:.3g} at t={t:.6g}")
    return SeriesTransform(value, float(ratio[0]), unstable, "spectral")


def fht_series(s, t):
    """T(sum a_n T_n)(t)."""
    return fht_series_diagnostics(s, t).value


def fht_weighted_values(ws, t, d=None):
    """T(w^p sum a_n T_n) at the points t (|t| < 1), exact for every p in {-1, 0, 1}.

    p = -1 drops a_0: T(1/w) = 0, so the constant term spans the kernel.
    """
    t = _check_open(np.atleast_1d(t), None if d is None else np.atleast_1d(d))
    a = ws.series.coeffs
    if ws.weight_power == 0:
        return fht_series_values(ws.series, t, d)
    if ws.weight_power == -1:
        if a.size == 1:
            return np.zeros_like(t)
        return np.atleast_1d(eval_u(a[1:], t))
    if ws.weight_power == 1:
        return -np.atleast_1d(C.chebval(t, np.concatenate([[0.0], t_to_u_coeffs(a)])))
    raise DomainError(f"weight power {ws.weight_power} has no spectral transform")


def eval_weighted(ws, t, d=None):
    t = _check_closed(np.atleast_1d(t))
    if d is None:
        d = 1.0 - np.abs(t)
    w = np.sqrt(np.maximum(d * (2.0 - d), 0.0))
    values = np.atleast_1d(C.chebval(t, ws.series.coeffs))
    return values * w ** ws.weight_power if ws.weight_power else values


def integrate_weighted(ws):
    """int_{-1}^{1} w^p sum a_n T_n dx for p in {-1, 0, 1}."""
    a = ws.series.coeffs
    if ws.weight_power == -1:
        return float(np.pi * a[0])
    if ws.weight_power == 0:
        return float(sum(c * _moment(n) for n, c in enumerate(a)))
    if ws.weight_power == 1:
        return float(0.5 * np.pi * t_to_u_coeffs(a)[0])
    raise DomainError(f"weight power {ws.weight_power} has no spectral integral")
