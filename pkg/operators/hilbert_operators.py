"""The finite Hilbert transform T and its companions on top of the engines.

    T(f)        principal-value transform
    Ť(f)        -w T(f/w)      (T_check, left inverse of T on bounded functions)
    T̂(f)        -(1/w) T(w f)  (T_hat)
    Q(f)        (1/pi) int f/w, the coefficient of the rank-one defect of T Ť
    phi(g)      int g/w, whose kernel contains the range of T

Methods: ``spectral`` (exact transforms of weighted Chebyshev fits),
``quadrature`` (principal-value oracle), ``closed_form`` (steps) and ``auto``.
"""
import logging
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List, Literal, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

from operators import closed_forms
from quadrature.function_handle import FunctionHandle, Regularity, weight_of
from quadrature.principal_value import integral, pv_fht
from spectral import chebyshev
from spectral.chebyshev import ChebSeries, WeightedSeries
from utils.config import get_config
from utils.errors import DomainError, FHTError, SingularPointError

logger = logging.getLogger(__name__)

Operator = Literal["T", "T_check", "T_hat", "Q", "Q_exp", "phi"]
Method = Literal["spectral", "quadrature", "closed_form", "auto"]

ENDPOINT_CLEARANCE = 1e-6
BELOW_ONE = float(np.nextafter(1.0, 0.0))


class OperatorRequest(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    operator: Operator = "T"
    input: Any
    points: List[float] = []
    method: Method = "auto"
    tol: float = Field(default_factory=lambda: get_config().quadrature.default_tol, gt=0.0)
    workers: int = Field(1, ge=1)

    @field_validator("input")
    @classmethod
    def _check_input(cls, value):
        if not isinstance(value, (FunctionHandle, ChebSeries)):
            raise ValueError("input must be a FunctionHandle or a ChebSeries")
        return value

    @field_validator("points")
    @classmethod
    def _check_points(cls, value):
        if any(not -1.0 < float(t) < 1.0 for t in value):
            raise ValueError("evaluation points must lie in (-1, 1)")
        if len(set(value)) != len(value):
            raise ValueError("evaluation points must be distinct")
        return [float(t) for t in value]

    @model_validator(mode="after")
    def _check_pointwise(self):
        if self.operator in ("T", "T_check", "T_hat") and not self.points:
            raise ValueError(f"operator {self.operator} needs at least one point")
        return self


class OperatorResult(BaseModel):
    values: List[Tuple[float, float]]
    method_used: str
    est_error: float = 0.0
    diagnostics: Dict[str, Any] = {}

    @property
    def array(self):
        return np.array([v for _, v in self.values])


class FunctionalValue(BaseModel):
    value: float
    est_error: float = 0.0
    in_kernel: bool = False
    method_used: str = "quadrature"


def as_handle(f):
    if isinstance(f, FunctionHandle):
        return f
    coeffs = f.coeffs
    return FunctionHandle(base=lambda x, d: np.polynomial.chebyshev.chebval(x, coeffs) * np.ones_like(x),
                          name=f"series(deg {f.degree})")


def select_method(op, f, method="auto"):
    """Resolve ``auto``; reject spectral requests on non-smooth inputs."""
    if isinstance(f, ChebSeries):
        return "spectral" if method in ("auto", "spectral") else method
    if method == "spectral" and f.regularity is not Regularity.SMOOTH:
        raise DomainError(f"method=spectral requires smooth input, {f.name} is {f.singularity_tag}")
    if method == "closed_form" and not f.is_step:
        raise DomainError(f"no closed form for {f.name}")
    if method != "auto":
        return method
    if f.is_step and op in ("T", "T_check", "Q", "Q_exp", "phi"):
        return "closed_form"
    if f.regularity is Regularity.SMOOTH:
        return "spectral"
    return "quadrature"


def _shift(f, op):
    """The power shift applied before T: Ť transforms f/w, T̂ transforms w f."""
    return {"T": 0, "T_check": -1, "T_hat": 1}[op]


def _weighted_fit(f, shift, order=None):
    if isinstance(f, ChebSeries):
        ws = WeightedSeries(f, shift)
        while ws.weight_power >= 2:
            ws = WeightedSeries(ws.series.times_one_minus_x2(), ws.weight_power - 2)
        if ws.weight_power < -1:
            raise DomainError(f"weight power {ws.weight_power} is not integrable")
        return ws
    shifted = f.with_weight(f.weight_power + shift) if shift else f
    return chebyshev.fit_weighted(shifted, order)


def _post(op, t, d, values):
    w = weight_of(d)
    if op == "T_check":
        return -w * values
    if op == "T_hat":
        return -values / w
    return values


def _fit_tail(ws):
    a = np.abs(ws.series.coeffs)
    return float(a[-2:].sum()) if a.size > 1 else 0.0


def _spectral_values(op, f, t, d=None):
    ws = _weighted_fit(f, _shift(f, op))
    diagnostics = {"degree": ws.series.degree, "weight_power": ws.weight_power, "fit_tail": _fit_tail(ws)}
    if d is None:
        d = 1.0 - np.abs(t)
    if ws.weight_power == 0:
        transforms = [chebyshev.fht_series_diagnostics(ws.series, ti) for ti in t]
        values = np.array([tr.value for tr in transforms])
        unstable = [float(ti) for ti, tr in zip(t, transforms) if tr.unstable]
        delegated = [float(ti) for ti, tr in zip(t, transforms) if tr.method == "quadrature"]
        diagnostics["unstable_points"] = unstable
        diagnostics["delegated_points"] = delegated
    else:
        values = chebyshev.fht_weighted_values(ws, t, d)
    return _post(op, t, d, values), diagnostics["fit_tail"], diagnostics


def _map_points(fn, points, workers):
    if workers > 1 and len(points) > 1:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            return list(pool.map(fn, points))
    return [fn(t) for t in points]


def _quadrature_values(op, f, t, tol, workers=1):
    handle = as_handle(f)
    target = {"T": handle, "T_check": handle.divide_by_weight(), "T_hat": handle.multiply_by_weight()}[op]

    def one(ti):
        try:
            return pv_fht(target, ti, tol)
        except FHTError as exc:
            exc.point = ti
            logger.error(f"[{op}] quadrature failed at t={ti!r}: {exc}")
            raise

    results = _map_points(one, list(t), workers)
    values = np.array([r.value for r in results])
    d = 1.0 - np.abs(t)
    diagnostics = {"subdivisions": int(sum(r.subdivisions for r in results))}
    return _post(op, t, d, values), float(max(r.est_error for r in results)), diagnostics


def _closed_form_values(op, f, t, d=None):
    points = closed_forms.step_points(t, d)
    if op == "T":
        return closed_forms.step_transform(f.steps, points)
    if op == "T_check":
        return closed_forms.step_check_transform(f.steps, points.x, points.d)
    raise DomainError(f"no closed form for {op}")


def _guard_breakpoints(f, t):
    if not isinstance(f, FunctionHandle):
        return
    guard = get_config().quadrature.breakpoint_guard
    for p in f.singular_points():
        hit = np.abs(t - p.x) <= guard
        if hit.any():
            raise SingularPointError(f"t={float(t[hit][0])!r} is at a breakpoint of {f.name}", point=p.x)


def _apply(op, req):
    method = select_method(op, req.input, req.method)
    if op == "T_hat" and method == "closed_form":
        method = "quadrature"
    t = np.array(req.points, dtype=float)
    _guard_breakpoints(req.input, t)
    if op == "T_hat" and np.any(1.0 - np.abs(t) < ENDPOINT_CLEARANCE):
        raise DomainError(f"T_hat divides by w: points must stay {ENDPOINT_CLEARANCE:g} away from ±1")
    if method == "spectral":
        values, est, diagnostics = _spectral_values(op, req.input, t)
    elif method == "closed_form":
        values, est, diagnostics = _closed_form_values(op, req.input, t), 0.0, {}
    else:
        values, est, diagnostics = _quadrature_values(op, req.input, t, req.tol, req.workers)
    logger.debug(f"[{op}] {len(t)} points via {method}")
    return OperatorResult(values=list(zip(t.tolist(), np.asarray(values, dtype=float).tolist())),
                          method_used=method, est_error=est, diagnostics=diagnostics)


def apply_T(req):
    """T(input) at the request points."""
    return _apply("T", req)


def apply_T_check(req):
    """Ť(input) = -w T(input/w); the constant term of the fit of input is annihilated."""
    return _apply("T_check", req)


def apply_T_hat(req):
    """T̂(input) = -(1/w) T(w input); points stay 1e-6 away from ±1."""
    return _apply("T_hat", req)


def weighted_integral(f, tol=None, method="auto"):
    """int f / w as a FunctionalValue (no kernel decision)."""
    method = select_method("phi", f, method)
    if method == "closed_form":
        return FunctionalValue(value=closed_forms.step_weighted_integral(f.steps), method_used=method)
    if method == "spectral":
        ws = _weighted_fit(f, -1)
        return FunctionalValue(value=chebyshev.integrate_weighted(ws), est_error=_fit_tail(ws), method_used=method)
    res = integral(as_handle(f).divide_by_weight(), tol)
    return FunctionalValue(value=res.value, est_error=res.est_error, method_used=method)


def apply_Q(f, tol=None, method="auto"):
    """The constant (1/pi) int f/w; Q(f) chi is the projection of f onto constants."""
    return weighted_integral(f, tol, method).value / np.pi


def apply_Q_exp(f, tol=None, method="auto"):
    """Q on L_exp: the same formula, f/w integrable for f in L_exp."""
    return apply_Q(f, tol, method)


def phi_1_over_w(g, tol=None, method="auto", kernel_tol=1e-7):
    """phi(g) = int g/w with the membership flag |phi| <= kernel_tol."""
    result = weighted_integral(g, tol, method)
    result.in_kernel = bool(abs(result.value) <= kernel_tol)
    return result


def evaluate(op, f, points, method="auto", tol=None, workers=1):
    """Shorthand for the pointwise operators."""
    req = OperatorRequest(operator=op, input=f, points=list(points), method=method,
                          tol=tol or get_config().quadrature.default_tol, workers=workers)
    return {"T": apply_T, "T_check": apply_T_check, "T_hat": apply_T_hat}[op](req)


# --- transforms as functions ---

_IMAGE_POWER = {"T": 0, "T_check": 1, "T_hat": -1}


def transform_handle(op, f, method="auto", tol=None):
    """op(f) as a FunctionHandle for nesting inside other operators and norms.

    Spectral images of polynomial parts are polynomials times a weight power and
    stay smooth; logarithmic images are tagged ``endpoint`` and keep the
    singular points of f.
    """
    method = select_method(op, f, method)
    if op == "T_hat" and method == "closed_form":
        method = "quadrature"
    name = f"{op}({getattr(f, 'name', 'series')})"
    breakpoints = f.breakpoints if isinstance(f, FunctionHandle) else ()
    singular = tuple(f.singular_points()) if isinstance(f, FunctionHandle) else None

    if method == "spectral":
        ws = _weighted_fit(f, _shift(f, op))
        polynomial_image = ws.weight_power != 0
        power = _IMAGE_POWER[op] if polynomial_image else 0

        def base(x, d):
            x, d = np.atleast_1d(x), np.atleast_1d(d)
            inside = d > 0.0
            out = np.zeros_like(x)
            values = chebyshev.fht_weighted_values(ws, x[inside], d[inside])
            out[inside] = _strip(op, values, polynomial_image, x[inside], d[inside])
            return out

        return FunctionHandle(base=base, regularity=Regularity.SMOOTH if polynomial_image else Regularity.ENDPOINT,
                              weight_power=power, breakpoints=breakpoints, name=name, singular=singular)

    if method == "closed_form":
        def closed(points):
            if op == "T":
                return closed_forms.step_transform(f.steps, points)
            return closed_forms.step_check_transform(f.steps, points.x, points.d)

        return FunctionHandle(base=lambda x, d: closed(closed_forms.step_points(x, d)),
                              regularity=Regularity.ENDPOINT, breakpoints=breakpoints, name=name,
                              closed_form=closed, singular=singular)

    tol = tol or get_config().quadrature.default_tol
    handle = as_handle(f)
    target = {"T": handle, "T_check": handle.divide_by_weight(), "T_hat": handle.multiply_by_weight()}[op]

    def base(x, d):
        x, d = np.atleast_1d(x), np.atleast_1d(d)
        # theta nodes within 1e-8 of 0 or pi round to x = ±1; their weight in any integral is O(1e-16)
        inner = np.clip(x, -BELOW_ONE, BELOW_ONE)
        values = np.array([pv_fht(target, xi, tol).value for xi in inner])
        return _post(op, x, d, values)

    return FunctionHandle(base=base, regularity=Regularity.ENDPOINT, breakpoints=breakpoints, name=name,
                          singular=singular)


def _strip(op, values, polynomial_image, x, d):
    """The regular factor of the image: the weight sign/power is carried by the handle."""
    if polynomial_image:
        return -values if op in ("T_check", "T_hat") else values
    return _post(op, x, d, values)
