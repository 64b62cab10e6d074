"""Decreasing rearrangement f* of |f| on [0, 2).

|f| is sampled on a graded partition of (-1, 1): uniform cells split at every
singular point of f (±1 and the breakpoints), with geometric ladders of cells
next to each singular point. Sorting the cell values in decreasing order and
accumulating the cell widths gives f* as a step function. Every position is
kept as (anchor, offset), so cells of width 2^-96 next to ±1 stay exact.
"""
import logging
from dataclasses import dataclass

import numpy as np

from quadrature.coordinates import AnchoredPoints, DualPoint
from utils.config import get_config
from utils.errors import DomainError, RejectedInputError

logger = logging.getLogger(__name__)

TOTAL_MEASURE = 2.0
MIN_GRID = 64


@dataclass(frozen=True)
class StepRearrangement:
    """f* = levels[i] on [breakpoints[i], breakpoints[i+1])."""

    breakpoints: np.ndarray
    levels: np.ndarray

    def __post_init__(self):
        s = np.asarray(self.breakpoints, dtype=float)
        v = np.asarray(self.levels, dtype=float)
        if s.size != v.size + 1 or s[0] != 0.0 or s[-1] != TOTAL_MEASURE:
            raise DomainError("a rearrangement needs breakpoints 0 = s_0 < ... < s_m = 2 and m levels")
        if np.any(np.diff(s) <= 0.0):
            raise DomainError("rearrangement breakpoints must increase")
        if np.any(np.diff(v) > 0.0) or np.any(v < 0.0):
            raise DomainError("rearrangement levels must be non-negative and non-increasing")
        object.__setattr__(self, "breakpoints", s)
        object.__setattr__(self, "levels", v)

    @property
    def widths(self):
        return np.diff(self.breakpoints)

    @property
    def cumulative(self):
        """F(s_i) = int_0^{s_i} f*, aligned with breakpoints."""
        return np.concatenate([[0.0], np.cumsum(self.levels * self.widths)])

    def __call__(self, s):
        s = np.asarray(s, dtype=float)
        index = np.clip(np.searchsorted(self.breakpoints, s, side="right") - 1, 0, self.levels.size - 1)
        return self.levels[index]

    def integral(self, t):
        """int_0^t f* for 0 <= t <= 2."""
        t = np.asarray(t, dtype=float)
        index = np.clip(np.searchsorted(self.breakpoints, t, side="right") - 1, 0, self.levels.size - 1)
        return self.cumulative[index] + self.levels[index] * (t - self.breakpoints[index])

    def distribution(self, lam):
        """|{s : f*(s) > lam}|."""
        return float(self.widths[self.levels > lam].sum())

    def scaled(self, c):
        c = abs(float(c))
        if c == 0.0:
            return StepRearrangement(np.array([0.0, TOTAL_MEASURE]), np.array([0.0]))
        return StepRearrangement(self.breakpoints, c * self.levels)


def from_cells(values, widths):
    """Sort cell values into f*; equal adjacent levels are merged."""
    values = np.abs(np.asarray(values, dtype=float))
    widths = np.asarray(widths, dtype=float)
    bad = ~np.isfinite(values)
    if bad.any():
        raise RejectedInputError(f"non-finite sample in cell {int(np.argmax(bad))}", location=int(np.argmax(bad)))
    keep = widths > 0.0
    values, widths = values[keep], widths[keep]
    order = np.argsort(-values, kind="stable")
    values, widths = values[order], widths[order]
    new_level = np.concatenate([[True], values[1:] != values[:-1]])
    starts = np.flatnonzero(new_level)
    levels = values[starts]
    merged = np.add.reduceat(widths, starts)
    breakpoints = np.minimum(np.concatenate([[0.0], np.cumsum(merged)]), TOTAL_MEASURE)
    breakpoints[-1] = TOTAL_MEASURE
    # segments below the rounding of the running total carry no measure
    keep = np.diff(breakpoints) > 0.0
    return StepRearrangement(np.concatenate([[0.0], breakpoints[1:][keep]]), levels[keep])


def _region_cells(left, right, n, depth, per_octave):
    """Cells of [left, right]: uniform in the middle, geometric ladders at both ends."""
    length = right.minus(left)
    n = max(2, int(n))
    h = length / n
    ladder = h * 2.0 ** (-np.arange(depth * per_octave + 1) / per_octave)
    ladder_edges = np.concatenate([[0.0], ladder[::-1]])
    half = n // 2
    cells = []
    for anchor, edges in ((left, np.concatenate([ladder_edges, h * np.arange(2, half + 1)])),
                          (right, -np.concatenate([ladder_edges, h * np.arange(2, n - half + 1)]))):
        widths = np.abs(np.diff(edges))
        mids = 0.5 * (edges[:-1] + edges[1:])
        cells.append((AnchoredPoints.around(anchor, mids), widths))
    return cells


def _regions(f):
    points = [DualPoint.lower()] + list(f.singular_points()) + [DualPoint.upper()]
    return [(a, b) for a, b in zip(points, points[1:]) if b.minus(a) > 0.0]


def sample_cells(f, grid=None, depth=None, per_octave=None):
    """Cell midpoints and widths of the graded partition for f."""
    cfg = get_config().norms
    grid = cfg.grid if grid is None else int(grid)
    depth = cfg.ladder_depth if depth is None else depth
    per_octave = cfg.ladder_per_octave if per_octave is None else per_octave
    if grid < MIN_GRID:
        raise DomainError(f"grid must be >= {MIN_GRID}, got {grid}")
    parts, widths = [], []
    for left, right in _regions(f):
        n = round(grid * right.minus(left) / TOTAL_MEASURE)
        for points, w in _region_cells(left, right, n, depth, per_octave):
            parts.append(points)
            widths.append(w)
    return AnchoredPoints.concatenate(parts), np.concatenate(widths)


def _step_cells(f):
    parts, widths = [], []
    for left, right in _regions(f):
        width = right.minus(left)
        anchor = left if left.d <= right.d else right
        offset = 0.5 * width if anchor is left else -0.5 * width
        parts.append(AnchoredPoints.around(anchor, [offset]))
        widths.append([width])
    return AnchoredPoints.concatenate(parts), np.concatenate(widths)


def rearrange(f, grid=None):
    """f* of a FunctionHandle; exact for step functions."""
    if f.is_step:
        points, widths = _step_cells(f)
    else:
        points, widths = sample_cells(f, grid)
    values = f.at_points(points)
    r = from_cells(values, widths)
    logger.debug(f"[rearrange] {f.name}: {len(points)} cells, {r.levels.size} levels")
    return r


def rearrange_samples(x, values):
    """f* of tabulated data: each sample owns the cell between midpoints of its neighbours."""
    x = np.asarray(x, dtype=float)
    edges = np.concatenate([[-1.0], 0.5 * (x[1:] + x[:-1]), [1.0]])
    return from_cells(values, np.diff(edges))


def equimeasurability_defect(f, r, levels, grid=None):
    """max over lam of |mu(|f| > lam) - |{f* > lam}|| with mu counted on the same partition."""
    points, widths = sample_cells(f, grid) if not f.is_step else _step_cells(f)
    values = np.abs(f.at_points(points))
    defects = [abs(float(widths[values > lam].sum()) - r.distribution(lam)) for lam in levels]
    return max(defects) if defects else 0.0
