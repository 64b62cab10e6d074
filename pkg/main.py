import argparse
import logging
import os
import sys
from datetime import datetime, timezone

import numpy as np
from pydantic import ValidationError

from airfoil.solver import solution_values, solve
from collector.sample_collector import load_samples
from expression.parser import parse
from norms.zygmund import norm_report
from operators.hilbert_operators import (OperatorRequest, apply_Q, apply_Q_exp, apply_T, apply_T_check,
                                         apply_T_hat, phi_1_over_w)
from reporting.report_agent import ReportAgent
from spectral.chebyshev import ChebNodeGrid
from utils.config import load_config, set_config
from utils.errors import ConvergenceError, FHTError, RangeError
from utils.logs import configure_logging
from verification.domain_probe import probe_optimal_domain
from verification.registry import SUITES, run_suite

logger = logging.getLogger("fht")

EXIT_OK, EXIT_FAILED, EXIT_USAGE = 0, 1, 2
POINTWISE = {"T": apply_T, "T_check": apply_T_check, "T_hat": apply_T_hat}
FUNCTIONALS = {"Q": apply_Q, "Q_exp": apply_Q_exp}


def parse_arguments(argv=None):
    """Parse command line arguments."""
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument('--config', type=str, default='config.json',
                        help='Path to configuration file')
    common.add_argument('--debug', action='store_true',
                        help='Enable debug logging')
    common.add_argument('--out', type=str, default=None,
                        help='Write the report here instead of stdout')
    common.add_argument('--format', choices=['json', 'csv'], default='json',
                        help='Report format')
    common.add_argument('--workers', type=int, default=None,
                        help='Worker threads for points and verification cases')
    common.add_argument('--method', choices=['auto', 'spectral', 'quadrature', 'closed_form'], default='auto',
                        help='Evaluation engine')
    common.add_argument('--tol', type=float, default=None,
                        help='Absolute tolerance of the quadrature engine')

    parser = argparse.ArgumentParser(prog='fht', description='Finite Hilbert transform toolkit')
    commands = parser.add_subparsers(dest='command', required=True)

    evaluate = commands.add_parser('eval', parents=[common], help='Apply T, T_check, T_hat, Q, Q_exp or phi')
    evaluate.add_argument('--op', choices=['T', 'T_check', 'T_hat', 'Q', 'Q_exp', 'phi'], default='T')
    evaluate.add_argument('--f', required=True, help='Expression or csv:PATH')
    evaluate.add_argument('--points', type=str, default='',
                          help='Comma separated evaluation points in (-1, 1)')

    invert = commands.add_parser('invert', parents=[common], help='Solve the airfoil equation T(f) = g')
    invert.add_argument('--g', required=True, help='Expression or csv:PATH')
    invert.add_argument('--points', type=str, default='', help='Where to report the solution')
    invert.add_argument('--force', action='store_true',
                        help='Return Ť(g) and the defect Q(g) when g fails the range test')

    norm = commands.add_parser('norm', parents=[common], help='Zygmund norms of f')
    norm.add_argument('--f', required=True, help='Expression or csv:PATH')
    norm.add_argument('--alpha', type=float, default=1.0)

    verify = commands.add_parser('verify', parents=[common], help='Run a verification suite')
    verify.add_argument('--suite', choices=sorted(SUITES) + ['all'], default='all')
    verify.add_argument('--seed', type=int, default=0)
    verify.add_argument('--n', type=int, default=None, help='Number of cases')

    probe = commands.add_parser('probe-domain', parents=[common], help='Level-set probe of the optimal domain')
    probe.add_argument('--f', required=True, help='Expression or csv:PATH')
    probe.add_argument('--n', type=int, default=None, help='Largest level n_max')
    return parser.parse_args(argv)


def load_function(source):
    """An expression, or ``csv:PATH`` for tabulated samples."""
    if source.startswith('csv:'):
        return load_samples(source[4:])['handle']
    return parse(source)


def parse_points(text):
    if not text.strip():
        return []
    try:
        return [float(item) for item in text.split(',') if item.strip()]
    except ValueError as e:
        raise argparse.ArgumentTypeError(f"--points expects comma separated numbers: {e}")


def run_eval(args):
    f = load_function(args.f)
    if args.op in POINTWISE:
        req = OperatorRequest(operator=args.op, input=f, points=parse_points(args.points), method=args.method,
                              workers=args.workers or 1, **({'tol': args.tol} if args.tol else {}))
        result = POINTWISE[args.op](req)
        return [{"id": f"point-{i:04d}", "operator": args.op, "f": f.name, "t": t, "value": v,
                 "method": result.method_used, "est_error": result.est_error, **result.diagnostics}
                for i, (t, v) in enumerate(result.values)]
    if args.op == 'phi':
        value = phi_1_over_w(f, args.tol, args.method)
        return [{"id": "phi", "operator": "phi", "f": f.name, "value": value.value, "in_kernel": value.in_kernel,
                 "est_error": value.est_error, "method": value.method_used}]
    value = FUNCTIONALS[args.op](f, args.tol, args.method)
    return [{"id": args.op, "operator": args.op, "f": f.name, "value": value}]


def run_invert(args):
    g = load_function(args.g)
    try:
        solution = solve(g, args.tol, force=args.force)
    except RangeError as e:
        logger.warning(f"[invert] {e}")
        return [{"id": "solution", "g": g.name, "pass": False, "reason": str(e),
                 "membership": e.report.model_dump() if e.report else None}]
    x = parse_points(args.points) or ChebNodeGrid(33).nodes[::-1].tolist()
    values = solution_values(solution, np.asarray(x))
    return [{"id": "solution", "g": g.name, "representation": solution.representation,
             "residual_sup": solution.residual_sup, "residual_lexp": solution.residual_lexp,
             "forced": solution.forced, "defect": solution.defect,
             "membership": solution.membership.model_dump(), "values": [[t, v] for t, v in zip(x, values)]}]


def run_norm(args):
    f = load_function(args.f)
    report = norm_report(f, args.alpha)
    return [{"id": "norm", "f": f.name, **report.model_dump()}]


def run_verify(args):
    names = sorted(SUITES) if args.suite == 'all' else [args.suite]
    cases = []
    for name in names:
        report = run_suite(name, args.seed, args.n, args.workers)
        logger.info(f"[verify] {name}: {sum(c['pass'] for c in report.cases)}/{len(report.cases)} pass "
                    f"in {report.wall_time:.2f}s")
        cases.extend(report.cases)
    return cases


def run_probe(args):
    return probe_optimal_domain(load_function(args.f), args.n).cases


COMMANDS = {'eval': run_eval, 'invert': run_invert, 'norm': run_norm, 'verify': run_verify,
            'probe-domain': run_probe}


def write_output(text, out):
    if out:
        os.makedirs(os.path.dirname(os.path.abspath(out)), exist_ok=True)
        with open(out, 'w') as f:
            f.write(text)
        logger.info(f"[main] Output saved to {out}")
    else:
        sys.stdout.write(text)


def main(argv=None):
    """Main execution function; returns the process exit code."""
    args = parse_arguments(argv)
    configure_logging(args.debug)
    config = set_config(load_config(args.config))
    if args.workers:
        config.verification.workers = args.workers
    started = datetime.now(timezone.utc)

    try:
        cases = COMMANDS[args.command](args)
    except ConvergenceError as e:
        logger.error(f"[main] {e}")
        cases = [{"id": "error", "command": args.command, "pass": False, "reason": str(e),
                  "value": e.value, "est_error": e.est_error, "subdivisions": e.subdivisions}]
    except (FHTError, ValidationError, argparse.ArgumentTypeError) as e:
        logger.error(f"[main] {type(e).__name__}: {e}")
        return EXIT_USAGE

    result = ReportAgent(args.format).run({"command": args.command, "seed": getattr(args, 'seed', None),
                                           "cases": cases, "started_at": started})
    if result["status"] != "success":
        logger.error(f"[main] Report failed: {result['message']}")
        return EXIT_USAGE
    write_output(result["data"]["text"], args.out)
    return EXIT_FAILED if result["data"]["envelope"]["summary"]["fail"] else EXIT_OK


cli_main = main


if __name__ == "__main__":
    sys.exit(main())
