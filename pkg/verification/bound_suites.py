"""Suites checking inequalities (margin >= 0) and the norm engine."""
import numpy as np

from airfoil.solver import check_range, holder_bound, solution_handle, solution_values, solve
from expression.parser import parse
from norms.rearrangement import rearrange
from norms.zygmund import b_part_ratio, norm_lexp, norm_lexp_equiv, norm_llogl, young_report
from operators.hilbert_operators import evaluate, transform_handle, weighted_integral
from quadrature.function_handle import FunctionHandle
from spectral.chebyshev import ChebNodeGrid
from utils.config import get_config
from verification import corpus
from verification.suite_agent import SuiteAgent, case_record


def transform_norm(f, grid=None, alpha=1.0):
    """||T(f)|| in L_exp^alpha (averaged form) on the graded grid."""
    return norm_lexp(rearrange(transform_handle("T", f), grid), alpha)


class LowerBoundSuite(SuiteAgent):
    suite = "lowerbound"
    identity = "||T(chi_A)||_Lexp > 1/(pi e^2) whenever mu(A) > 0"
    anchor = "lower bound for T on sets of positive measure"
    engines = ("closed_form",)
    default_cases = 200

    def draw(self, rng, n):
        fixed = [[(-1.0, 1.0)], [(0.0, 1e-3)], [(-0.5, 0.5)]]
        cases = []
        for i in range(n):
            intervals = fixed[i] if i < len(fixed) else corpus.random_intervals(rng)
            measure = sum(b - a for a, b in intervals)
            cases.append({"id": f"lowerbound-{i:03d}", "intervals": intervals,
                          "inputs": {"intervals": intervals, "measure": measure}})
        return cases

    def check(self, case):
        grid = get_config().verification.lower_bound_grid
        value = transform_norm(corpus.indicator_of(case["intervals"]), grid)
        return case_record(case["id"], self.identity, case["inputs"], margin=value - corpus.LOWER_BOUND,
                           engines=self.engines, strict=True, value=value, bound=corpus.LOWER_BOUND)


def _holder_points():
    edge = 1.0 - 10.0 ** -np.arange(2, 9)
    return np.concatenate([ChebNodeGrid(201).nodes, edge, -edge])


class HolderSuite(SuiteAgent):
    suite = "holder"
    identity = "sup|Ť(g)| <= (2/pi) K B(1/2, lambda) for g Hölder with constant K"
    anchor = "Hölder bound for the inverse via the Beta function"
    engines = ("spectral",)
    default_cases = 15

    def draw(self, rng, n):
        pairs = corpus.lipschitz_corpus()[:n]
        return [{"id": f"holder-{i:03d}", "g": g, "K": K, "inputs": {"g": g.name, "K": K, "lambda": 1.0}}
                for i, (g, K) in enumerate(pairs)]

    def check(self, case):
        measured = float(np.max(np.abs(evaluate("T_check", case["g"], _holder_points()).array)))
        bound = holder_bound(case["K"], 1.0)
        return case_record(case["id"], self.identity, case["inputs"], margin=bound - measured,
                           engines=self.engines, measured=measured, bound=bound)


class AirfoilSuite(SuiteAgent):
    suite = "airfoil"
    identity = "the bounded solution of T(f) = g is f = Ť(g)"
    anchor = "inversion formula for the airfoil equation"
    engines = ("spectral", "quadrature")

    def draw(self, rng, n):
        cases = [{"id": "airfoil-000-nonrange", "kind": "reject", "inputs": {"g": "chi(-1,1)"}}]
        for i in range(1, n + 1):
            p = corpus.random_polynomial(rng)
            cases.append({"id": f"airfoil-{i:03d}", "kind": "roundtrip", "p": p,
                          "inputs": {"p": p.coeffs.tolist()}})
        return cases

    def check(self, case):
        if case["kind"] == "reject":
            report = check_range(parse("chi(-1,1)"))
            residual = abs(report.phi_value - np.pi) if not report.overall else float("inf")
            return case_record(case["id"], "g = chi is not in the range: phi(chi) = pi", case["inputs"],
                               residual=residual, tolerance=1e-7, engines=self.engines,
                               phi=report.phi_value, verdict=report.boundedness_verdict)
        p = corpus.polynomial_handle(case["p"])
        solution = solve(transform_handle("T", p))
        x = corpus.interior_grid(41, 0.01)
        error = float(np.max(np.abs(solution_values(solution, x) - p(x))))
        annihilated = abs(weighted_integral(transform_handle("T", solution_handle(solution))).value)
        record = case_record(case["id"], self.identity, case["inputs"], residual=error, tolerance=1e-7,
                             engines=self.engines, residual_sup=solution.residual_sup, phi_of_T=annihilated)
        record["pass"] = bool(record["pass"] and annihilated <= 1e-6)
        return record


EQUIMEASURABILITY_INPUTS = [
    "abs(x)", "chi(0,1)", "x^2", "2*chi(-0.5,0.2) + chi(0,0.7)", "sin(3*x)", "exp(x)",
    "abs(x - 0.3)", "x*chi(-1,0)", "cos(2*x)*chi(-0.8,0.8)", "1 - x^2",
]


def brute_force_distribution(f, levels, samples=200000):
    x = -1.0 + (np.arange(samples) + 0.5) * (2.0 / samples)
    values = np.abs(f(x))
    return np.array([2.0 * np.mean(values > lam) for lam in levels])


class NormsSuite(SuiteAgent):
    suite = "norms"
    identity = "Zygmund norms on exact step rearrangements"
    anchor = "Zygmund norms and their equivalent norm"
    engines = ("closed_form", "spectral")

    def draw(self, rng, n):
        kinds = ["chi-primary", "chi-equiv", "chi-llogl", "abs-profile", "equimeasurability",
                 "bpart-limit", "equivalence-bracket", "nesting", "operator-ratio"]
        return [{"id": f"norms-{i:02d}-{kind}", "kind": kind, "inputs": {"check": kind}}
                for i, kind in enumerate(kinds)]

    def check(self, case):
        kind = case["kind"]
        chi = parse("chi(-1,1)")
        if kind == "chi-primary":
            value = norm_lexp(rearrange(chi), 1.0)
            return case_record(case["id"], "||chi||_Lexp = 1", case["inputs"], residual=abs(value - 1.0),
                               tolerance=1e-10, value=value)
        if kind == "chi-equiv":
            value = norm_lexp_equiv(rearrange(chi), 1.0)
            return case_record(case["id"], "sup chi*/log(2e/t) = 1", case["inputs"], residual=abs(value - 1.0),
                               tolerance=1e-10, value=value)
        if kind == "chi-llogl":
            value = norm_llogl(rearrange(chi), 1.0)
            return case_record(case["id"], "int_0^2 log(2e/t) dt = 4", case["inputs"], residual=abs(value - 4.0),
                               tolerance=1e-12, value=value)
        if kind == "abs-profile":
            r = rearrange(parse("abs(x)"))
            s = np.linspace(0.0, 1.999, 2000)
            return case_record(case["id"], "|x|* = 1 - s/2", case["inputs"],
                               residual=float(np.max(np.abs(r(s) - (1.0 - s / 2.0)))), tolerance=1e-3)
        if kind == "equimeasurability":
            worst = 0.0
            for source in EQUIMEASURABILITY_INPUTS:
                f = parse(source)
                r = rearrange(f)
                levels = np.quantile(r.levels, [0.1, 0.3, 0.5, 0.7, 0.9]) * 0.999
                worst = max(worst, float(np.max(np.abs(brute_force_distribution(f, levels)
                                                          - [r.distribution(lam) for lam in levels]))))
            return case_record(case["id"], "mu(|f| > lam) = |{f* > lam}|", case["inputs"], residual=worst,
                               tolerance=5e-3)
        if kind == "bpart-limit":
            r = rearrange(transform_handle("T", chi).scaled(np.pi))
            ratio = b_part_ratio(r, 2.0 ** -20)
            return case_record(case["id"], "pi T(chi) has b-part ratio -> 1", case["inputs"],
                               residual=abs(ratio - 1.0), tolerance=0.05, value=ratio)
        if kind == "operator-ratio":
            ratios = []
            for f in corpus.bounded_smooth_corpus() + [chi, parse("chi(0,1)"), parse("chi(-0.5,0.5)")]:
                sup = float(rearrange(f).levels[0])
                if sup > 0.0:
                    ratios.append(transform_norm(f) / sup)
            # informational: no theoretical constant is asserted
            return case_record(case["id"], "empirical sup ||T(f)||_Lexp / ||f||_inf", case["inputs"],
                               passed=True, value=max(ratios), functions=len(ratios))
        functions = corpus.bounded_smooth_corpus() + [transform_handle("T", chi), parse("abs(log(x))*chi(0,1)")]
        if kind == "equivalence-bracket":
            bracket = get_config().norms.equivalence_bracket
            margins = []
            for f in functions:
                r = rearrange(f)
                primary = norm_lexp(r, 1.0)
                if primary > 0.0:
                    ratio = norm_lexp_equiv(r, 1.0) / primary
                    margins.append(min(ratio - 1.0 / bracket, bracket - ratio))
            return case_record(case["id"], "equivalent Lexp norms within the bracket", case["inputs"],
                               margin=min(margins))
        margins = []
        for f in functions:
            r = rearrange(f)
            values = [norm_llogl(r, a) for a in (0.0, 0.5, 1.0, 2.0)]
            margins.append(min(np.diff(values)))
        return case_record(case["id"], "L(log L)^beta norm dominates L(log L)^alpha for alpha <= beta",
                           case["inputs"], margin=float(min(margins)))


class YoungSuite(SuiteAgent):
    suite = "young"
    identity = "int Phi(lambda |f|) with Phi(u) = e^u - u - 1"
    anchor = "Young function of the exponential class"
    engines = ("closed_form", "quadrature")

    def draw(self, rng, n):
        rows = [
            ("0", 1.0, "value", 0.0),
            ("chi(-1,1)", 1.0, "value", 2.0 * (np.e - 2.0)),
            ("abs(log(x))*chi(0,1)", 0.9, "finite", None),
            ("abs(log(x))*chi(0,1)", 2.0, "divergent", None),
            ("T(chi)", 1.0, "finite", None),
        ]
        return [{"id": f"young-{i:02d}", "f": source, "lam": lam, "expect": expect, "value": value,
                 "inputs": {"f": source, "lambda": lam}} for i, (source, lam, expect, value) in enumerate(rows)]

    def check(self, case):
        f = transform_handle("T", parse("chi(-1,1)")) if case["f"] == "T(chi)" else parse(case["f"])
        report = young_report(f, case["lam"])
        extra = {"value": report.value, "divergent": report.divergent,
                 "exp_integral_upper": report.exp_integral_upper}
        if case["expect"] == "value":
            return case_record(case["id"], self.identity, case["inputs"], residual=abs(report.value - case["value"]),
                               tolerance=1e-12, **extra)
        expected = case["expect"] == "divergent"
        return case_record(case["id"], self.identity, case["inputs"], passed=report.divergent == expected, **extra)


class BracketSuite(SuiteAgent):
    suite = "bracket"
    identity = "sup_theta ||T(theta f)|| <= 4 sup_A ||T(chi_A f)||"
    anchor = "optimal domain norm equivalence with factor 4"
    engines = ("closed_form",)
    sets_per_case = 8

    def draw(self, rng, n):
        cases = []
        for i in range(n):
            f = parse("chi(-1,1)") if i == 0 else corpus.random_step(rng)
            sets = [[(-1.0, 1.0)]] + [corpus.random_intervals(rng) for _ in range(self.sets_per_case)]
            cases.append({"id": f"bracket-{i:03d}", "f": f, "sets": sets, "inputs": {"f": f.name}})
        return cases

    def check(self, case):
        f = case["f"]
        sup_a, sup_theta = 0.0, 0.0
        for intervals in case["sets"]:
            restricted = corpus.restricted_steps(f.steps, intervals)
            sign = [(l, r, 2.0 * v) for l, r, v in restricted] + [(p.left, p.right, -p.value) for p in f.steps]
            sup_a = max(sup_a, transform_norm(FunctionHandle.step(restricted)))
            sup_theta = max(sup_theta, transform_norm(FunctionHandle.step(sign)))
        return case_record(case["id"], self.identity, case["inputs"], margin=4.0 * sup_a - sup_theta,
                           engines=self.engines, sup_indicator=sup_a, sup_sign=sup_theta)
