"""Command-line entry point: verification suites and experiments.

Two verbs: `verify` runs exact cross-check suites, `run` executes an
experiment.  Every invocation emits one artifact (JSON by default, CSV
with --format csv) to stdout or --out, one summary line per check on
stderr, and exits 0 when all checks pass, 1 when any fails, and 2 on
bad parameters or a blown budget.  Run subcommands given --out also
render a PNG figure next to the artifact unless --no-figure is set.
"""

import argparse
from fractions import Fraction
import math
import pathlib
import re
import sys

import numpy as np

from . import config, experiments, flow, walsh, web
from .errors import SignflowsError
from .reporting import ExperimentReport, merge_reports

_RATIONAL = re.compile(r"^[+-]?\d+(/[1-9]\d*)?$")


def rational(text):
    """Exact rational argument: an integer or num/den; floats are rejected."""
    if not _RATIONAL.match(text):
        raise argparse.ArgumentTypeError(
            "expected an exact rational like 1/2, got %r" % (text,))
    return Fraction(text)


def _add_common(sp, samples=None):
    sp.add_argument("--seed", type=int, default=config.DEFAULT_SEED,
                    help="PRNG seed (default %d)" % config.DEFAULT_SEED)
    sp.add_argument("--samples", type=int, default=samples,
                    help="Monte Carlo sample count")
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.add_argument("--out", type=str, default=None,
                    help="write the artifact to this path instead of stdout")
    sp.add_argument("--budget", type=int, default=None,
                    help="enumeration budget (also %s)" % config.BUDGET_ENV_VAR)
    sp.add_argument("--no-figure", action="store_true",
                    help="skip the PNG figure next to --out")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="signflows",
        description="Exact cross-verification of sign flows, Walsh analysis, "
                    "and coalescing-walk webs.")
    top = parser.add_subparsers(dest="command", required=True)

    ver = top.add_parser("verify", help="run an exact cross-check suite")
    vsub = ver.add_subparsers(dest="target", required=True)

    sp = vsub.add_parser("flows", help="flow laws: DP vs closed forms")
    sp.add_argument("--t", type=int, default=8)
    sp.add_argument("--p", type=rational, default=Fraction(1, 2))
    _add_common(sp)

    sp = vsub.add_parser("snake", help="chord construction of stickiness")
    sp.add_argument("--t", type=int, default=6)
    sp.add_argument("--p", type=rational, default=Fraction(1, 2))
    _add_common(sp)

    sp = vsub.add_parser("trap", help="trap flow diagnostics")
    sp.add_argument("--t", type=int, default=10)
    sp.add_argument("--m", type=int, default=2)
    _add_common(sp, samples=10000)

    sp = vsub.add_parser("walsh", help="Walsh operators via dual routes")
    sp.add_argument("--n", type=int, default=8)
    sp.add_argument("--trials", type=int, default=3)
    sp.add_argument("--rho", type=rational, default=Fraction(1, 3))
    _add_common(sp)

    sp = vsub.add_parser("theorem79", help="averaged zero-inclusion identity")
    sp.add_argument("--n", type=int, default=6)
    sp.add_argument("--mode", choices=("all", "sample"), default="all")
    _add_common(sp, samples=64)

    sp = vsub.add_parser("lemma74", help="gated-correlation bound")
    sp.add_argument("--instances", type=int, default=200)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--support", type=int, default=3)
    _add_common(sp)

    sp = vsub.add_parser("all", help="every verify suite at default sizes")
    _add_common(sp)

    run = top.add_parser("run", help="run an experiment")
    rsub = run.add_subparsers(dest="target", required=True)

    sp = rsub.add_parser("clt", help="rescaled shift walk vs the normal law")
    sp.add_argument("--i", type=int, action="append", default=None,
                    help="walk length; repeatable (default 256 1024 4096)")
    sp.add_argument("--mode", choices=("exact", "mc"), default="exact")
    _add_common(sp)

    sp = rsub.add_parser("g2limit", help="rescaled reach vs the chi-3 law")
    sp.add_argument("--i", type=int, default=2048)
    sp.add_argument("--mode", choices=("exact", "mc"), default="exact")
    _add_common(sp)

    sp = rsub.add_parser("g3limit", help="rescaled plateau vs thinned reach")
    sp.add_argument("--i", type=int, default=4096)
    _add_common(sp, samples=10000)

    sp = rsub.add_parser("microblock", help="micro vs block noise correlation")
    sp.add_argument("--i", type=int, default=4096)
    sp.add_argument("--lam", type=rational, default=Fraction(1))
    sp.add_argument("--rho", type=float, default=math.exp(-1))
    sp.add_argument("--blocks", type=int, default=4)
    _add_common(sp)

    sp = rsub.add_parser("poisson", help="pattern counts vs the Poisson law")
    sp.add_argument("--pattern", type=int, default=8)
    sp.add_argument("--span", type=int, default=1)
    _add_common(sp, samples=10000)

    sp = rsub.add_parser("web", help="coalescing web flow and mean count")
    sp.add_argument("--circumference", type=int, default=6)
    sp.add_argument("--start", type=int, default=0)
    sp.add_argument("--t", type=int, default=3)
    _add_common(sp, samples=100000)

    return parser


def _build_report(args):
    if args.command == "verify":
        return _verify_report(args)
    return _run_report(args)


def _verify_report(args):
    if args.target == "flows":
        return flow.flow_report(args.t, p=args.p, budget=args.budget)
    if args.target == "snake":
        return merge_reports(
            "snake_suite",
            [flow.snake_report(args.t, args.p, budget=args.budget),
             flow.conditional_c_report(min(args.t, config.CONDITIONAL_T_CAP),
                                       args.p, budget=args.budget)],
            params={"t": args.t, "p": args.p})
    if args.target == "trap":
        exact = flow.trap_report(args.t, args.m, budget=args.budget)
        waiting = experiments.trap_waiting_report(
            max(args.m, config.TRAP_WAITING_MIN_M),
            max(args.t, config.TRAP_WAITING_MIN_T),
            samples=args.samples, seed=args.seed)
        return merge_reports("trap_suite", [exact, waiting],
                             params={"t": args.t, "m": args.m}, seed=args.seed)
    if args.target == "walsh":
        return walsh.walsh_report(args.n, trials=args.trials, seed=args.seed,
                                  rho=args.rho)
    if args.target == "theorem79":
        reports = [web.theorem79_check(args.n, mode=args.mode,
                                       sample_count=args.samples,
                                       seed=args.seed, budget=args.budget)]
        reports.append(web.zero_spectral_identity(
            min(args.n, config.ZERO_SPECTRAL_N_CAP), budget=args.budget))
        return merge_reports("theorem79_suite", reports,
                             params={"n": args.n, "mode": args.mode},
                             seed=args.seed)
    if args.target == "lemma74":
        rng = np.random.default_rng(args.seed)
        instances = [
            web.random_correlation_instance(
                int(rng.integers(1, args.n + 1)), 4, args.support, rng)
            for _ in range(args.instances)]
        batch = web.lemma74_batch_report(instances)
        tight = _tightness_report()
        return merge_reports("lemma74_suite", [batch, tight],
                             params={"instances": args.instances,
                                     "n": args.n, "support": args.support},
                             seed=args.seed)
    if args.target == "all":
        reports = [
            flow.flow_report(8, p=Fraction(1, 2), budget=args.budget),
            flow.snake_report(6, Fraction(1, 2), budget=args.budget),
            flow.conditional_c_report(6, Fraction(1, 3), budget=args.budget),
            flow.trap_report(8, 2, budget=args.budget),
            experiments.trap_waiting_report(
                config.TRAP_WAITING_MIN_M, config.TRAP_WAITING_MIN_T,
                samples=args.samples or 10000, seed=args.seed),
            walsh.walsh_report(6, trials=2, seed=args.seed),
            web.theorem79_check(6, budget=args.budget),
            web.zero_spectral_identity(6, budget=args.budget),
            web.web_report(6, 4, samples=32, seed=args.seed),
        ]
        rng = np.random.default_rng(args.seed)
        instances = [web.random_correlation_instance(
            int(rng.integers(1, 4)), 4, 3, rng) for _ in range(50)]
        reports.append(web.lemma74_batch_report(instances))
        reports.append(_tightness_report())
        return merge_reports("verify_all", reports, seed=args.seed)
    raise SignflowsError("unknown verify target %r" % (args.target,))


def _tightness_report():
    """The n=1 family where the correlation bound is attained exactly."""
    report = ExperimentReport(name="tightness", params={})
    for q in (Fraction(1, 4), Fraction(1, 2), Fraction(3, 4)):
        sub = web.lemma74_bound_check(web.tightness_instance(q))
        norm_sq = sub.statistics["norm_squared"]
        gap = abs(norm_sq - float(q))
        report.add_check("attained_q_%s" % q.numerator, gap, config.EIGEN_TOL,
                         gap <= config.EIGEN_TOL)
    return report


def _run_report(args):
    if args.target == "clt":
        sizes = args.i if args.i else [256, 1024, 4096]
        return experiments.clt_report(sizes, mode=args.mode,
                                      samples=args.samples, seed=args.seed)
    if args.target == "g2limit":
        return experiments.g2_limit_report(args.i, mode=args.mode,
                                           samples=args.samples,
                                           seed=args.seed)
    if args.target == "g3limit":
        return experiments.g3_limit_report(args.i, samples=args.samples,
                                           seed=args.seed)
    if args.target == "microblock":
        return experiments.micro_block_report(args.i, lam=args.lam,
                                              rho=args.rho, blocks=args.blocks)
    if args.target == "poisson":
        return experiments.poisson_block_report(args.pattern, args.span,
                                                samples=args.samples,
                                                seed=args.seed)
    if args.target == "web":
        N, s, t = args.circumference, args.start, args.t
        flowchk = web.web_report(N, t, samples=64, seed=args.seed,
                                 budget=args.budget)
        mean = experiments.web_critical_report(N, s, t, samples=args.samples,
                                               seed=args.seed,
                                               budget=args.budget)
        merged = merge_reports("web_suite", [flowchk, mean],
                               params={"N": N, "s": s, "t": t}, seed=args.seed)
        merged.data.update(mean.data)
        return merged
    raise SignflowsError("unknown run target %r" % (args.target,))


def _emit(report, args):
    text = report.to_json() if args.format == "json" else report.to_csv()
    for line in report.summary_lines():
        print(line, file=sys.stderr)
    verdict = "PASS" if report.passed else "FAIL"
    print("%s: %d checks, %s" % (report.name, len(report.checks), verdict),
          file=sys.stderr)
    if args.out:
        out = pathlib.Path(args.out)
        out.write_text(text)
        if args.command == "run" and not args.no_figure and report.data:
            from . import plotting
            figure = plotting.render_report_figure(
                report, str(out.with_suffix(".png")))
            if figure:
                print("figure: %s" % figure, file=sys.stderr)
    else:
        sys.stdout.write(text)
    return 0 if report.passed else 1


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        report = _build_report(args)
    except SignflowsError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    except ValueError as exc:
        print("error: %s" % exc, file=sys.stderr)
        return 2
    return _emit(report, args)


if __name__ == "__main__":
    sys.exit(main())
