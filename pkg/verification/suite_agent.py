import logging
import time
from concurrent.futures import ThreadPoolExecutor
from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel

from utils.config import get_config
from utils.ooda import OODAAgent


class VerificationReport(BaseModel):
    suite: str
    cases: List[Dict[str, Any]]
    engines: List[str]
    seed: int
    wall_time: float

    @property
    def passed(self):
        return all(c["pass"] for c in self.cases)


def case_record(case_id, identity, inputs, residual=None, margin=None, tolerance=None,
                engines=(), strict=False, **extra):
    """One verification case; pass <=> residual <= tolerance, or margin >= 0 (> 0 when strict)."""
    if residual is not None:
        passed = bool(np.isfinite(residual) and residual <= tolerance)
    elif margin is not None:
        passed = bool(margin > 0.0 if strict else margin >= 0.0)
    else:
        passed = bool(extra.pop("passed", True))
    record = {"id": case_id, "identity": identity, "inputs": inputs, "residual": residual, "margin": margin,
              "tolerance": tolerance, "engines": list(engines), "pass": passed}
    record.update(extra)
    return record


class SuiteAgent(OODAAgent):
    """A verification suite: observe draws the cases, orient evaluates them, decide and act report.

    Subclasses set ``suite``, ``identity``, ``anchor`` (the named result the cases check)
    and ``engines``, and implement ``draw(rng, n)`` (case descriptions) and ``check(case)`` (a case_record).
    """

    suite = "suite"
    identity = ""
    anchor = ""
    engines = ("quadrature",)
    default_cases = 20

    def __init__(self, workers=None):
        super().__init__(f"{type(self).__name__}")
        self.workers = workers or get_config().verification.workers

    def draw(self, rng, n):
        raise NotImplementedError("draw method not implemented")

    def check(self, case):
        raise NotImplementedError("check method not implemented")

    def observe(self, data):
        seed = int(data.get("seed", 0))
        n = int(data.get("n") or self.default_cases)
        if n < 1:
            raise ValueError("a suite needs at least one case")
        rng = np.random.default_rng(seed)
        cases = self.draw(rng, n)
        self.log(f"Drew {len(cases)} cases (seed {seed})")
        return {"seed": seed, "cases": cases, "started": time.perf_counter()}

    def _safe_check(self, case):
        try:
            return self.check(case)
        except Exception as e:
            self.log(f"Case {case['id']} failed: {e}", logging.WARNING)
            return case_record(case["id"], self.identity, case.get("inputs", {}), engines=self.engines,
                               passed=False, reason=f"{type(e).__name__}: {e}")

    def orient(self, data):
        cases = data["cases"]
        if self.workers > 1 and len(cases) > 1:
            with ThreadPoolExecutor(max_workers=self.workers) as pool:
                records = list(pool.map(self._safe_check, cases))
        else:
            records = [self._safe_check(case) for case in cases]
        data["records"] = sorted(records, key=lambda r: r["id"])
        return data

    def decide(self, data):
        failed = [r["id"] for r in data["records"] if not r["pass"]]
        if failed:
            self.log(f"{len(failed)} case(s) failed: {', '.join(failed[:5])}", logging.WARNING)
        for record in data["records"]:
            record["suite"] = self.suite
            record["anchor"] = self.anchor
        return data

    def act(self, data):
        report = VerificationReport(suite=self.suite, cases=data["records"], engines=list(self.engines),
                                    seed=data["seed"], wall_time=time.perf_counter() - data["started"])
        self.log(f"{sum(r['pass'] for r in report.cases)}/{len(report.cases)} cases pass")
        return report
