"""Suites checking exact operator identities (residual <= tolerance)."""
import numpy as np

from expression.parser import parse
from operators.closed_forms import chi_transform
from operators.hilbert_operators import apply_Q, evaluate, transform_handle, weighted_integral
from quadrature.function_handle import FunctionHandle
from quadrature.principal_value import integral
from verification import corpus
from verification.suite_agent import SuiteAgent, case_record


def _sup(values):
    return float(np.max(np.abs(values)))


class ClosedFormSuite(SuiteAgent):
    suite = "closedform"
    identity = "T(chi_(-1,1))(t) = (1/pi) log((1 - t)/(1 + t))"
    anchor = "explicit transform of the indicator of (-1, 1)"
    engines = ("spectral", "quadrature", "closed_form")

    def draw(self, rng, n):
        return [
            {"id": "closedform-00-spectral", "kind": "chi", "method": "spectral"},
            {"id": "closedform-01-quadrature", "kind": "chi", "method": "quadrature"},
            {"id": "closedform-02-closed_form", "kind": "chi", "method": "closed_form"},
            {"id": "closedform-03-tcheck-half", "kind": "tcheck"},
            {"id": "closedform-04-weight", "kind": "weight"},
        ]

    def check(self, case):
        t = np.arange(-49, 50) / 50.0
        if case["kind"] == "chi":
            f = FunctionHandle.constant(1.0, name="chi(-1,1)") if case["method"] == "spectral" \
                else FunctionHandle.indicator(-1.0, 1.0)
            values = evaluate("T", f, t, method=case["method"]).array
            return case_record(case["id"], self.identity, {"points": len(t), "method": case["method"]},
                               residual=_sup(values - chi_transform(t)), tolerance=1e-9,
                               engines=(case["method"],))
        if case["kind"] == "tcheck":
            f = FunctionHandle.indicator(0.0, 1.0)
            closed = evaluate("T_check", f, [-0.6], method="closed_form").array[0]
            quad = evaluate("T_check", f, [-0.6], method="quadrature").array[0]
            expected = -np.log(3.0) / np.pi
            return case_record(case["id"], "Ť(chi_[0,1))(-3/5) = -(1/pi) log 3", {"t": -0.6},
                               residual=max(abs(closed - expected), abs(quad - expected)), tolerance=1e-9,
                               engines=("closed_form", "quadrature"), value=closed)
        value = evaluate("T", FunctionHandle.weight(), [0.25], method="quadrature").array[0]
        return case_record(case["id"], "T(w)(t) = -t", {"t": 0.25}, residual=abs(value + 0.25),
                           tolerance=1e-9, engines=("quadrature",), value=value)


class KernelSuite(SuiteAgent):
    suite = "kernel"
    identity = "T(1/w) = 0"
    engines = ("spectral", "quadrature")
    default_cases = 100

    def draw(self, rng, n):
        t = np.sort(rng.uniform(-0.99, 0.99, size=n))
        return [{"id": f"kernel-{i:02d}-{method}", "method": method, "points": t, "inputs": {"points": n}}
                for i, method in enumerate(self.engines)]

    def check(self, case):
        values = evaluate("T", FunctionHandle.inverse_weight(), case["points"], method=case["method"]).array
        return case_record(case["id"], self.identity, case["inputs"], residual=_sup(values), tolerance=1e-7,
                           engines=(case["method"],))


def _pair_integral(f, g):
    """int f T(g)."""
    return integral(f.product(transform_handle("T", g))).value


class ParsevalSuite(SuiteAgent):
    suite = "parseval"
    identity = "int f T(g) = -int g T(f)"
    anchor = "Parseval formula for T"
    engines = ("closed_form", "spectral", "quadrature")
    default_cases = 50

    def draw(self, rng, n):
        fixed = [("chi(-1,1)", "w"), ("chi(0,1)", "w"), ("chi(-1,1)", "1/w")]
        partners = [g.name for g in corpus.bounded_smooth_corpus()] + ["1/w", "x/w", "exp(x)/w"]
        cases = []
        for i in range(n):
            if i < len(fixed):
                f, g = parse(fixed[i][0]), parse(fixed[i][1])
            else:
                f = corpus.random_step(rng) if i % 2 else corpus.polynomial_handle(corpus.random_polynomial(rng))
                g = parse(partners[int(rng.integers(len(partners)))])
            cases.append({"id": f"parseval-{i:03d}", "f": f, "g": g, "inputs": {"f": f.name, "g": g.name}})
        return cases

    def check(self, case):
        left = _pair_integral(case["f"], case["g"])
        right = _pair_integral(case["g"], case["f"])
        return case_record(case["id"], self.identity, case["inputs"], residual=abs(left + right),
                           tolerance=1e-7, engines=self.engines, value=left)


def _inversion_function(rng, i):
    if i == 0:
        return parse("chi(-1,1)")
    if i == 1:
        return parse("x")
    if i == 2:
        return parse("chi(0,1)")
    if i % 2:
        return corpus.polynomial_handle(corpus.random_polynomial(rng))
    return corpus.indicator_of(corpus.random_intervals(rng))


class InversionSuite(SuiteAgent):
    suite = "inversion"
    identity = "Ť T(f) = f and T Ť(f) = f - Q(f)"
    anchor = "left and right inversion by Ť"
    engines = ("spectral", "closed_form", "quadrature")

    def draw(self, rng, n):
        cases = []
        for i in range(n):
            f = _inversion_function(rng, i)
            cases.append({"id": f"inversion-{i:03d}", "f": f, "inputs": {"f": f.name}})
        return cases

    def check(self, case):
        f = case["f"]
        t = corpus.interior_grid(21, 0.05, avoid=[p.x for p in f.singular_points()])
        exact = f(t)
        left = evaluate("T_check", transform_handle("T", f), t).array
        q = apply_Q(f)
        right = evaluate("T", transform_handle("T_check", f), t).array
        residual_left = _sup(left - exact)
        residual_right = _sup(right - (exact - q))
        return case_record(case["id"], self.identity, case["inputs"], residual=max(residual_left, residual_right),
                           tolerance=1e-6, engines=self.engines, left_residual=residual_left,
                           right_residual=residual_right, q=q)


class AnnihilationSuite(SuiteAgent):
    suite = "annihilation"
    identity = "int T(f)/w = 0 for bounded f"
    anchor = "1/w annihilates the range of T on bounded functions"
    engines = ("spectral", "closed_form", "quadrature")

    def draw(self, rng, n):
        functions = corpus.bounded_smooth_corpus() + [parse("chi(-1,1)"), parse("chi(0,1)")]
        functions += [corpus.random_step(rng) for _ in range(max(0, n - len(functions)))]
        return [{"id": f"annihilation-{i:03d}", "f": f, "inputs": {"f": f.name}} for i, f in enumerate(functions)]

    def check(self, case):
        value = weighted_integral(transform_handle("T", case["f"])).value
        return case_record(case["id"], self.identity, case["inputs"], residual=abs(value), tolerance=1e-6,
                           engines=self.engines, value=value)


class DualitySuite(SuiteAgent):
    suite = "duality"
    identity = "int T̂(g) f = -int g Ť(f)"
    anchor = "duality between T̂ and Ť"
    engines = ("spectral", "closed_form", "quadrature")

    def draw(self, rng, n):
        partners = corpus.bounded_smooth_corpus()
        cases = []
        for i in range(n):
            if i == 0:
                f, g = parse("chi(0,1)"), parse("x")
            else:
                f = corpus.random_step(rng) if i % 2 else corpus.polynomial_handle(corpus.random_polynomial(rng))
                g = partners[int(rng.integers(len(partners)))]
            cases.append({"id": f"duality-{i:03d}", "f": f, "g": g, "inputs": {"f": f.name, "g": g.name}})
        return cases

    def check(self, case):
        f, g = case["f"], case["g"]
        left = integral(transform_handle("T_hat", g).product(f)).value
        right = integral(g.product(transform_handle("T_check", f))).value
        return case_record(case["id"], self.identity, case["inputs"], residual=abs(left + right),
                           tolerance=1e-7, engines=self.engines, value=left)


class EnginesSuite(SuiteAgent):
    suite = "engines"
    identity = "spectral T(f) = quadrature T(f) for smooth f"
    anchor = "agreement of the spectral and quadrature engines"
    engines = ("spectral", "quadrature")
    default_cases = 20

    def draw(self, rng, n):
        return [{"id": f"engines-{i:03d}", "f": f, "points": np.sort(rng.uniform(-0.98, 0.98, size=n)),
                 "inputs": {"f": f.name, "points": n}}
                for i, f in enumerate(corpus.smooth_corpus())]

    def check(self, case):
        spectral = evaluate("T", case["f"], case["points"], method="spectral").array
        quadrature = evaluate("T", case["f"], case["points"], method="quadrature").array
        return case_record(case["id"], self.identity, case["inputs"], residual=_sup(spectral - quadrature),
                           tolerance=1e-7, engines=self.engines)
