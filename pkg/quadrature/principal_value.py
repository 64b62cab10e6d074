"""Principal-value quadrature oracle for the finite Hilbert transform.

    T(f)(t) = (1/pi) p.v. int_{-1}^{1} f(x) / (x - t) dx

is computed by singularity subtraction,

    T(f)(t) = (1/pi) [ int (f(x) - f(t)) / (x - t) dx + f(t) log((1 - t)/(1 + t)) ],

with the remaining integral taken in the variable x = cos(theta). The
substitution turns the endpoint factors w^{±1} into smooth factors of theta and
never samples f at ±1. Panels are split at every jump of f and at the pole.
"""
import logging
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from utils.config import get_config
from utils.errors import ConvergenceError, DomainError, RejectedInputError, SingularPointError

logger = logging.getLogger(__name__)

MIN_TOL = 1e-13
# panel estimates below this multiple of int |f| are rounding noise
ROUNDOFF = 50.0 * np.finfo(float).eps


@dataclass(frozen=True)
class PVResult:
    value: float
    est_error: float
    subdivisions: int


@lru_cache(maxsize=8)
def _gauss_rule(order):
    return np.polynomial.legendre.leggauss(order)


def _theta_coordinates(theta):
    """x = cos(theta), d = 1 - |x| and w = sin(theta) without cancellation."""
    x = np.cos(theta)
    half = 0.5 * theta
    d = np.where(theta < 0.5 * np.pi, 2.0 * np.sin(half) ** 2, 2.0 * np.cos(half) ** 2)
    return x, d, np.sin(theta)


def adaptive_integrate(integrand, edges, tol, max_panels=None, order=None):
    """Globally adaptive Gauss-Legendre quadrature of a vectorized integrand.

    A panel's error estimate is the difference between its rule and the sum
    over its two halves. The panels carrying the largest estimates are bisected
    until the summed estimate is below ``tol``; the summed estimate is returned
    as ``est_error``.
    """
    cfg = get_config().quadrature
    max_panels = max_panels or cfg.max_panels
    nodes, weights = _gauss_rule(order or cfg.gauss_order)

    edges = np.unique(np.asarray(edges, dtype=float))
    floor = (edges[-1] - edges[0]) * 1e-15

    def rule(lo, hi):
        mid, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
        pts = mid[:, None] + half[:, None] * nodes[None, :]
        vals = np.asarray(integrand(pts.ravel()), dtype=float).reshape(pts.shape)
        return half * (vals @ weights), half * (np.abs(vals) @ weights)

    def refine(lo, hi, whole):
        m = 0.5 * (lo + hi)
        (left, left_abs), (right, right_abs) = rule(lo, m), rule(m, hi)
        fine = left + right
        if not np.all(np.isfinite(fine)):
            raise RejectedInputError("integrand is not finite on a quadrature node",
                                     location=float(lo[~np.isfinite(fine)][0]))
        return left, right, np.abs(fine - whole), ROUNDOFF * (left_abs + right_abs)

    a, b = edges[:-1], edges[1:]
    left, right, err, noise = refine(a, b, rule(a, b)[0])
    count = a.size
    while True:
        total_err = float(err.sum())
        if total_err <= max(tol, float(noise.sum())):
            break
        candidates = np.flatnonzero((b - a > floor) & (err > noise))
        if candidates.size == 0:
            logger.debug(f"[quadrature] panels at the width floor or at roundoff; error estimate {total_err:.3g}")
            break
        ranked = candidates[np.argsort(-err[candidates], kind="stable")]
        k = int(np.searchsorted(np.cumsum(err[ranked]), total_err - 0.5 * tol)) + 1
        split = ranked[:k]
        count += split.size
        if count > max_panels:
            raise ConvergenceError(
                f"tolerance {tol:g} not reached within {max_panels} panels",
                value=float(np.sum(left + right)), est_error=total_err, subdivisions=count)
        keep = np.ones(a.size, dtype=bool)
        keep[split] = False
        m = 0.5 * (a[split] + b[split])
        new_a, new_b = np.concatenate([a[split], m]), np.concatenate([m, b[split]])
        new_left, new_right, new_err, new_noise = refine(new_a, new_b, np.concatenate([left[split], right[split]]))
        a, b = np.concatenate([a[keep], new_a]), np.concatenate([b[keep], new_b])
        left, right = np.concatenate([left[keep], new_left]), np.concatenate([right[keep], new_right])
        err = np.concatenate([err[keep], new_err])
        noise = np.concatenate([noise[keep], new_noise])
    return PVResult(float(np.sum(left + right)), float(err.sum()), int(count))


def _check_tol(tol):
    if tol is None:
        tol = get_config().quadrature.default_tol
    if not tol >= MIN_TOL:
        raise DomainError(f"tolerance must be >= {MIN_TOL:g}, got {tol!r}")
    return float(tol)


def _theta_edges(f, extra=()):
    edges = [0.0, np.pi]
    edges += [float(np.arccos(p.x)) for p in f.singular_points() if -1.0 < p.x < 1.0]
    edges += list(extra)
    return edges


def _check_point(f, t):
    t = float(t)
    if not -1.0 < t < 1.0:
        raise DomainError(f"evaluation point {t!r} must satisfy |t| < 1")
    guard = get_config().quadrature.breakpoint_guard
    for p in f.singular_points():
        if abs(t - p.x) <= guard:
            raise SingularPointError(f"t={t!r} is at a breakpoint of {f.name}", point=p.x)
    return t


def pv_fht(f, t, tol=None):
    """T(f)(t) by singularity subtraction; raises ConvergenceError on budget exhaustion."""
    tol = _check_tol(tol)
    t = _check_point(f, t)
    if f.weight_power < -1:
        raise DomainError(f"{f.name} is not integrable: weight power {f.weight_power}")
    ft = f.value_at(t)
    if not np.isfinite(ft):
        raise RejectedInputError(f"{f.name} is not finite at t={t!r}", location=t)

    def integrand(theta):
        x, d, s = _theta_coordinates(theta)
        diff = x - t
        num = f.weighted(x, d, s) - ft * s
        safe = np.where(diff == 0.0, 1.0, diff)
        return np.where(diff == 0.0, 0.0, num / safe)

    res = adaptive_integrate(integrand, _theta_edges(f, [float(np.arccos(t))]), tol * np.pi)
    value = (res.value + ft * np.log((1.0 - t) / (1.0 + t))) / np.pi
    logger.debug(f"[pv_fht] {f.name} at t={t:.6g}: {value:.12g} ({res.subdivisions} panels)")
    return PVResult(float(value), res.est_error / np.pi, res.subdivisions)


def pv_fht_excision(f, t, eps=1e-6, tol=None):
    """Symmetric epsilon-excision estimate of T(f)(t); slow cross-check only."""
    tol = _check_tol(tol)
    t = _check_point(f, t)
    if not 0.0 < eps < min(1.0 - t, 1.0 + t):
        raise DomainError("excision radius must fit inside (-1, 1)")

    def integrand(theta):
        x, d, s = _theta_coordinates(theta)
        return f.weighted(x, d, s) / (x - t)

    upper = float(np.arccos(t + eps))
    lower = float(np.arccos(t - eps))
    right = adaptive_integrate(integrand, [e for e in _theta_edges(f) if e <= upper] + [0.0, upper], tol)
    left = adaptive_integrate(integrand, [e for e in _theta_edges(f) if e >= lower] + [lower, np.pi], tol)
    return PVResult((right.value + left.value) / np.pi, (right.est_error + left.est_error) / np.pi,
                    right.subdivisions + left.subdivisions)


def integral(f, tol=None):
    """int_{-1}^{1} f(x) dx, taken in x = cos(theta)."""
    tol = _check_tol(tol)

    def integrand(theta):
        x, d, s = _theta_coordinates(theta)
        return f.weighted(x, d, s)

    return adaptive_integrate(integrand, _theta_edges(f), tol)
