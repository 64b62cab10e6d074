"""Airfoil equation T(f) = g for bounded f.

g lies in the range of T on bounded functions when int g/w = 0 and Ť(g) is
bounded; the unique bounded solution is then f = Ť(g) = -w T(g/w). Without the
kernel condition T(Ť(g)) = g - Q(g), so ``force`` returns Ť(g) together with
the constant defect Q(g).

Boundedness of Ť(g) cannot be decided from samples; the probe below is a
refinement-growth classifier with thresholds taken from the config.
"""
import logging
from typing import Any, List, Optional, Tuple

import numpy as np
from pydantic import BaseModel, ConfigDict
from scipy import interpolate, special

from norms.rearrangement import rearrange_samples
from norms.zygmund import norm_lexp
from operators.hilbert_operators import apply_Q, phi_1_over_w, transform_handle
from quadrature.function_handle import FunctionHandle, Regularity
from spectral import chebyshev
from spectral.chebyshev import ChebNodeGrid, WeightedSeries
from utils.config import get_config
from utils.errors import DomainError, FHTError, RangeError

logger = logging.getLogger(__name__)

CLASSIFIER_NOTE = "boundedness verdict is a refinement-growth heuristic, not a proof"
TAIL_TOLERANCE = 1e-8
AKIMA_NODES = 513


class RangeMembershipReport(BaseModel):
    phi_value: float
    phi_pass: bool
    tcheck_sup_by_refinement: List[Tuple[float, float]]
    boundedness_verdict: str
    overall: bool
    classifier: str = CLASSIFIER_NOTE
    errors: List[str] = []


class AirfoilSolution(BaseModel):
    model_config = ConfigDict(arbitrary_types_allowed=True)

    solution: Any
    representation: str
    residual_sup: float
    residual_lexp: float
    membership: RangeMembershipReport
    forced: bool = False
    defect: Optional[float] = None


def away_from_breakpoints(g, x, guard=1e-9):
    """Drop points within ``guard`` of a jump or singular point of g."""
    x = np.asarray(x, dtype=float)
    keep = np.ones(x.size, dtype=bool)
    for p in g.singular_points():
        keep &= np.abs(x - p.x) > guard
    return x[keep]


def _probe_points(g, n, distance, previous):
    nodes = away_from_breakpoints(g, ChebNodeGrid(n).nodes)
    edge = np.array([1.0 - dj for dj in previous + [distance]])
    return np.concatenate([nodes, edge, -edge])


def classify_growth(sups, cfg=None):
    """bounded | growing | inconclusive from the sequence of refined suprema."""
    cfg = cfg or get_config().airfoil
    sups = np.asarray(sups, dtype=float)
    if sups.size < 2 or not np.all(np.isfinite(sups)):
        return "inconclusive"
    if sups[-1] == 0.0:
        return "bounded"
    changes = np.diff(sups) / np.maximum(np.abs(sups[:-1]), np.finfo(float).tiny)
    if abs(changes[-1]) <= cfg.bounded_rel_change:
        return "bounded"
    if changes.size >= 3 and np.all(changes[-3:] >= cfg.growing_rel_increase):
        return "growing"
    return "inconclusive"


def check_range(g, tol=1e-7):
    """Range membership of g: the kernel condition and the Ť(g) boundedness probe."""
    cfg = get_config().airfoil
    errors = []
    try:
        phi = phi_1_over_w(g, kernel_tol=tol)
        phi_value, phi_pass = phi.value, phi.in_kernel
    except FHTError as exc:
        errors.append(f"phi: {exc}")
        phi_value, phi_pass = float("nan"), False

    sups = []
    try:
        image = transform_handle("T_check", g)
        running, previous = 0.0, []
        for distance in cfg.probe_distances:
            points = _probe_points(g, cfg.probe_points, distance, previous)
            running = max(running, float(np.max(np.abs(image(points)))))
            sups.append((float(distance), running))
            previous.append(distance)
    except FHTError as exc:
        errors.append(f"probe: {exc}")
    for message in errors:
        logger.warning(f"[check_range] {message}")
    verdict = "inconclusive" if errors else classify_growth([s for _, s in sups], cfg)
    report = RangeMembershipReport(phi_value=phi_value, phi_pass=phi_pass, tcheck_sup_by_refinement=sups,
                                   boundedness_verdict=verdict, overall=bool(phi_pass and verdict == "bounded"),
                                   errors=errors)
    logger.info(f"[check_range] {g.name}: phi={phi_value:.6g} verdict={verdict}")
    return report


def _akima_handle(image, name):
    theta = (np.arange(AKIMA_NODES) + 0.5) * np.pi / AKIMA_NODES
    values = image(np.cos(theta), 1.0 - np.abs(np.cos(theta)))
    spline = interpolate.Akima1DInterpolator(theta, values)
    return FunctionHandle.from_callable(lambda x: spline(np.arccos(np.clip(x, -1.0, 1.0)), extrapolate=True),
                                        name=name, regularity=Regularity.ENDPOINT)


def _represent(image, order):
    """The solution as a weighted Chebyshev series when the fit converges, else an Akima spline in theta."""
    if image.regularity is Regularity.SMOOTH:
        return chebyshev.fit_weighted(image, order), "chebyshev"
    ws = chebyshev.fit_weighted(image, order)
    a = np.abs(ws.series.coeffs)
    scale = max(float(a.max()), 1.0)
    if float(a[-3:].max()) <= TAIL_TOLERANCE * scale:
        return ws, "chebyshev"
    logger.info(f"[solve] Chebyshev fit of {image.name} does not converge; using an Akima spline")
    return _akima_handle(image, image.name), "akima"


def _transform_of(solution, x):
    if isinstance(solution, WeightedSeries):
        return chebyshev.fht_weighted_values(solution, x)
    handle = transform_handle("T", solution, method="quadrature")
    return handle(x)


def series_handle(ws, name="solution"):
    coeffs = ws.series.coeffs
    return FunctionHandle(base=lambda x, d: np.polynomial.chebyshev.chebval(x, coeffs) * np.ones_like(x),
                          weight_power=ws.weight_power, name=name)


def solve(g, tol=None, force=False, order=None):
    """f = Ť(g) with residual sup|T(f) - g| on the check grid."""
    cfg = get_config().airfoil
    tol = cfg.solver_tol if tol is None else tol
    membership = check_range(g, tol)
    if not membership.overall and not force:
        raise RangeError(f"{g.name} is not in the range of T on bounded functions "
                         f"(phi={membership.phi_value:.6g}, verdict={membership.boundedness_verdict})",
                         report=membership)
    image = transform_handle("T_check", g)
    solution, representation = _represent(image, order)
    x = away_from_breakpoints(g, ChebNodeGrid(cfg.check_points).nodes)
    residual = _transform_of(solution, x) - g(x)
    defect = None
    if force:
        defect = apply_Q(g)
        logger.info(f"[solve] forced solution of {g.name}: defect Q(g)={defect:.6g}")
    return AirfoilSolution(solution=solution, representation=representation,
                           residual_sup=float(np.max(np.abs(residual))),
                           residual_lexp=norm_lexp(rearrange_samples(x[::-1], residual[::-1]), 1.0),
                           membership=membership, forced=force, defect=defect)


def solution_handle(sol):
    """The solution of an AirfoilSolution as a FunctionHandle."""
    if isinstance(sol.solution, WeightedSeries):
        return series_handle(sol.solution)
    return sol.solution


def solution_values(sol, x):
    """Evaluate an AirfoilSolution's f at interior points."""
    x = np.asarray(x, dtype=float)
    if isinstance(sol.solution, WeightedSeries):
        return chebyshev.eval_weighted(sol.solution, x)
    return sol.solution(x)


def holder_bound(K, lam):
    """sup|Ť(g)| <= (2/pi) K B(1/2, lam) for g with Hölder constant K and exponent lam."""
    if not 0.0 < lam <= 1.0:
        raise DomainError(f"Hölder exponent must lie in (0, 1], got {lam!r}")
    if not K > 0.0:
        raise DomainError(f"Hölder constant must be positive, got {K!r}")
    return float(2.0 / np.pi * K * np.exp(special.betaln(0.5, lam)))
