"""Command line entry point: ``run``, ``verify``, ``plotdata``, ``constants``.

Exit status is 0 when every check passes, 1 when any check fails and 2 on
configuration or usage errors.
"""

from __future__ import annotations

import argparse
import sys

from .analysis import compute_M, maximize_L
from .checks import SUITES, format_check, run_suite
from .experiment import ConfigError, load_config, load_report, plotdata, run, write_outputs

EXIT_OK, EXIT_FAIL, EXIT_CONFIG = 0, 1, 2


def _parser():
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--workers", type=int, default=None, help="worker threads (default: CPU count)")
    common.add_argument("--tolerance-scale", type=float, default=1.0, help="multiply all tolerances by X")
    common.add_argument("--seed", type=int, default=0, help="seed for random-property suites")

    p = argparse.ArgumentParser(prog="asymprofile", description=__doc__.splitlines()[0])
    sub = p.add_subparsers(dest="command", required=True)

    r = sub.add_parser("run", parents=[common], help="run an experiment config")
    r.add_argument("config")
    r.add_argument("--out", default=None, help="output directory (default: config output.dir or '.')")

    v = sub.add_parser("verify", parents=[common], help="run a verification suite")
    v.add_argument("suite", choices=sorted(SUITES) + ["all"])

    pd = sub.add_parser("plotdata", help="print plot columns from a report")
    pd.add_argument("report")
    pd.add_argument("which", choices=["residual", "bands", "ratio"])

    sub.add_parser("constants", help="print L, its maximizer and M")
    return p


def _cmd_run(args):
    try:
        config = load_config(args.config)
    except (ConfigError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    report = run(config, workers=args.workers, tolerance_scale=args.tolerance_scale)
    out = args.out or config.output_dir or "."
    csv_path, json_path = write_outputs(report, out)
    for w in report.warnings:
        print(f"warning: {w}", file=sys.stderr)
    for fit_name, fit in report.fits.items():
        if fit is not None:
            print(f"{fit_name}: slope={fit['slope']:.6f} r2={fit['r_squared']:.6f} over {fit['window']}")
    print(f"fitted constant: {report.fitted_constant:.6g}")
    for c in report.checks:
        print(f"{'PASS' if c['passed'] else 'FAIL'}  {c['name']}: measured={c['measured']:.6f} "
              f"expected={c['expected']:.6f} tol={c['tolerance']:.3g}")
    print(f"wrote {csv_path} and {json_path}")
    return EXIT_OK if report.passed else EXIT_FAIL


def _cmd_verify(args):
    names = sorted(SUITES) if args.suite == "all" else [args.suite]
    ok = True
    for name in names:
        print(f"[{name}]")
        for c in run_suite(name, seed=args.seed, tolerance_scale=args.tolerance_scale, workers=args.workers):
            print(format_check(c))
            ok &= c.passed
    return EXIT_OK if ok else EXIT_FAIL


def _cmd_plotdata(args):
    try:
        report = load_report(args.report)
        sys.stdout.write(plotdata(report, args.which))
    except (OSError, ValueError, KeyError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    return EXIT_OK


def _cmd_constants(args):
    theta, L = maximize_L()
    print(f"L       = {L:.15f}")
    print(f"theta*  = {theta:.15f}")
    print(f"M       = {compute_M():.15f}")
    return EXIT_OK


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_CONFIG
    handler = {"run": _cmd_run, "verify": _cmd_verify, "plotdata": _cmd_plotdata, "constants": _cmd_constants}
    return handler[args.command](args)


if __name__ == "__main__":
    raise SystemExit(main())
