"""Suite names accepted by ``verify --suite``."""
from utils.errors import FHTError
from verification.bound_suites import (AirfoilSuite, BracketSuite, HolderSuite, LowerBoundSuite, NormsSuite,
                                       YoungSuite)
from verification.identity_suites import (AnnihilationSuite, ClosedFormSuite, DualitySuite, EnginesSuite,
                                          InversionSuite, KernelSuite, ParsevalSuite)

SUITES = {
    suite.suite: suite
    for suite in (ClosedFormSuite, KernelSuite, ParsevalSuite, InversionSuite, AnnihilationSuite, LowerBoundSuite,
                  HolderSuite, AirfoilSuite, DualitySuite, NormsSuite, YoungSuite, BracketSuite, EnginesSuite)
}


def run_suite(name, seed=0, n=None, workers=None):
    """Run one suite and return its VerificationReport; unknown names raise KeyError."""
    if name not in SUITES:
        raise KeyError(f"unknown suite {name!r}; choose from {', '.join(SUITES)}")
    result = SUITES[name](workers=workers).run({"seed": seed, "n": n})
    if result["status"] != "success":
        error = result.get("error")
        raise error if isinstance(error, Exception) else FHTError(result.get("message", "suite failed"))
    return result["data"]


def verify_parseval(seed, n_cases):
    return run_suite("parseval", seed, n_cases)


def verify_inversion(seed, n_cases):
    return run_suite("inversion", seed, n_cases)


def verify_lower_bound(seed, n_sets):
    return run_suite("lowerbound", seed, n_sets)
