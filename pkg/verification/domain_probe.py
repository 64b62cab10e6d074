"""Level-set probe of the optimal domain of T into L_exp.

For A_n = {n <= |f| < n+1} the step n*chi_(A_n) lies below |f|, so
n*||T(chi_(A_n))|| bounds sup_A ||T(f chi_A)|| from below. Values beyond a
fixed cap certify that f is not in the optimal domain. Level sets are found by
root finding in anchored coordinates, which resolves sets within 1e-300 of ±1
or of a breakpoint.
"""
import logging
import math
import time

import numpy as np
from scipy import optimize

from norms.rearrangement import rearrange
from norms.zygmund import norm_lexp
from operators.hilbert_operators import transform_handle
from quadrature.coordinates import AnchoredPoints, DualPoint
from quadrature.function_handle import FunctionHandle
from utils.config import get_config
from utils.errors import DomainError, RejectedInputError
from utils.ooda import OODAAgent
from verification.corpus import LOWER_BOUND
from verification.suite_agent import VerificationReport, case_record

UNIFORM_SAMPLES = 256
INNER_DISTANCE = 2.0 ** -20
BOUNDED_SLACK = 0.01
IDENTITY = "n ||T(chi_(A_n))||_Lexp <= sup_A ||T(f chi_A)||_Lexp, A_n = {n <= |f| < n+1}"
ANCHOR = "lower bound on level sets: unbounded f outside the optimal domain"


class _Half:
    """One half of a region between consecutive singular points, walked outward from its anchor."""

    def __init__(self, f, anchor, mid, sign, octaves):
        self.f, self.anchor, self.mid, self.sign = f, anchor, mid, sign
        self.length = abs(mid.minus(anchor))
        ladder = self.length * 2.0 ** -np.arange(1, octaves + 1, dtype=float)
        uniform = self.length * np.arange(1, UNIFORM_SAMPLES + 1) / UNIFORM_SAMPLES
        u = np.unique(np.concatenate([ladder, uniform]))
        self.u = u[u > 0.0]
        values = f.at_points(AnchoredPoints.around(anchor, sign * self.u))
        values = np.abs(np.asarray(values, dtype=float))
        values[-1] = abs(self.value_at(self.length))
        if np.isnan(values).any():
            raise RejectedInputError(f"{f.name} is undefined near x = {anchor.x:.17g}", location=anchor.x)
        self.values = values

    def point(self, u):
        if u <= 0.0:
            return self.anchor
        if u >= self.length:
            return self.mid
        return self.anchor.shifted(self.sign * u)

    def value_at(self, u):
        p = self.point(u)
        return float(self.f(np.array([p.x]), np.array([p.d]))[0])

    def crossing(self, c, lo, hi):
        try:
            return optimize.brentq(lambda u: abs(self.value_at(u)) - c, lo, hi,
                                   xtol=1e-300, rtol=4 * np.finfo(float).eps)
        except ValueError:
            # samples and scalar evaluation disagree on the side of c at a jump
            return 0.5 * (lo + hi)

    def superlevel(self, c):
        """{|f| >= c} on this half as (left, right) DualPoint pairs."""
        inside = self.values >= c
        spans, start = [], 0.0 if inside[0] else None
        for i in range(1, self.u.size):
            if inside[i] == inside[i - 1]:
                continue
            root = self.crossing(c, self.u[i - 1], self.u[i])
            if inside[i]:
                start = root
            else:
                spans.append((start, root))
                start = None
        if start is not None:
            spans.append((start, self.length))
        pairs = [(self.point(a), self.point(b)) for a, b in spans if b > a]
        return pairs if self.sign > 0 else [(right, left) for left, right in pairs]

    def inner_sup(self):
        keep = self.u >= INNER_DISTANCE * self.length
        return float(self.values[keep].max()) if keep.any() else 0.0


def _same(p, q):
    return p.x == q.x and p.d == q.d


def _merge(pairs):
    pairs = sorted(pairs, key=lambda pair: (pair[0].x, -pair[0].d if pair[0].x >= 0 else pair[0].d))
    merged = []
    for left, right in pairs:
        if merged and (_same(merged[-1][1], left) or merged[-1][1].minus(left) >= 0.0):
            merged[-1] = (merged[-1][0], max(merged[-1][1], right))
        else:
            merged.append((left, right))
    return merged


def _measure(pairs):
    return math.fsum(right.minus(left) for left, right in pairs)


class DomainProbe(OODAAgent):
    """Observe samples |f| and checks the precondition, orient builds A_n, decide/act report."""

    def __init__(self, n_max=None, cap=None, grid=None):
        super().__init__("DomainProbe")
        cfg = get_config().verification
        self.n_max = n_max
        self.cap = cfg.probe_cap if cap is None else float(cap)
        self.grid = cfg.lower_bound_grid if grid is None else int(grid)
        self.octaves = cfg.probe_ladder_octaves

    def observe(self, data):
        f = data["f"]
        if not isinstance(f, FunctionHandle):
            raise DomainError("probe input must be a FunctionHandle")
        n_max = int(data.get("n_max") or self.n_max or math.ceil(self.cap * np.pi * np.e ** 2))
        if n_max < 3:
            raise DomainError(f"n_max must be >= 3, got {n_max}")
        points = [DualPoint.lower()] + list(f.singular_points()) + [DualPoint.upper()]
        halves = []
        for left, right in zip(points, points[1:]):
            width = right.minus(left)
            if width <= 0.0:
                continue
            mid = left.shifted(0.5 * width)
            halves.append(_Half(f, left, mid, 1.0, self.octaves))
            halves.append(_Half(f, right, mid, -1.0, self.octaves))
        sup_all = max(float(h.values.max()) for h in halves)
        sup_inner = max(h.inner_sup() for h in halves)
        bounded = bool(np.isfinite(sup_all) and sup_all <= (1.0 + BOUNDED_SLACK) * sup_inner)
        self.log(f"{f.name}: sampled sup |f| = {sup_all:.6g} (away from singular points {sup_inner:.6g})")
        return {"f": f, "n_max": n_max, "halves": halves, "sup": sup_all, "bounded": bounded,
                "started": time.perf_counter()}

    def level_set(self, halves, c):
        return _merge([pair for h in halves for pair in h.superlevel(c)])

    def orient(self, data):
        records = []
        if data["bounded"]:
            self.log(f"{data['f'].name} is bounded on the sample grid; the probe is meaningless", logging.WARNING)
            data["records"] = [case_record("probe-precondition", IDENTITY, {"f": data["f"].name},
                                           passed=True, declined=True, sup=data["sup"],
                                           warning="f is bounded on the sample grid")]
            return data
        halves = data["halves"]
        upper = self.level_set(halves, 1.0)
        for n in range(1, data["n_max"] + 1):
            lower, upper = upper, self.level_set(halves, n + 1.0)
            measure = _measure(lower) - _measure(upper)
            if not lower or measure <= 4.0 * np.finfo(float).eps * _measure(lower):
                self.log(f"A_{n} has measure zero; skipped", logging.DEBUG)
                continue
            pieces = [(left, right, 1.0) for left, right in lower] + [(left, right, -1.0) for left, right in upper]
            a_n = FunctionHandle.step(pieces, name=f"chi(A_{n})")
            value = n * norm_lexp(rearrange(transform_handle("T", a_n, method="closed_form"), self.grid), 1.0)
            records.append(case_record(f"probe-{n:04d}", IDENTITY, {"n": n, "measure": measure},
                                       margin=value - n * LOWER_BOUND, strict=True, engines=("closed_form",),
                                       value=value, lower_bound=n * LOWER_BOUND, exceeds_cap=value > self.cap))
        data["records"] = records
        return data

    def decide(self, data):
        records = data["records"]
        if data["bounded"]:
            data["certified"] = False
            return data
        best = max((r["value"] for r in records), default=0.0)
        data["certified"] = bool(best > self.cap)
        records.append(case_record("probe-summary", IDENTITY, {"f": data["f"].name, "n_max": data["n_max"]},
                                   passed=all(r["pass"] for r in records), certified=data["certified"],
                                   cap=self.cap, max_lower_bound=best, nonempty_levels=len(records)))
        verdict = "not in the optimal domain" if data["certified"] else "not certified"
        self.log(f"{data['f'].name}: max lower bound {best:.6g} against cap {self.cap:g}: {verdict}")
        return data

    def act(self, data):
        for record in data["records"]:
            record["anchor"] = ANCHOR
        return VerificationReport(suite="probe-domain", cases=sorted(data["records"], key=lambda r: r["id"]),
                                  engines=["closed_form"], seed=0, wall_time=time.perf_counter() - data["started"])


def probe_optimal_domain(f, n_max=None):
    """Lower bounds n*||T(chi_(A_n))|| for n = 1..n_max; raises what the probe raised."""
    result = DomainProbe(n_max=n_max).run({"f": f, "n_max": n_max})
    if result["status"] != "success":
        raise result["error"]
    return result["data"]
