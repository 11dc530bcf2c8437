"""Command-line front end: list experiments, run one, or reproduce the full
CSV set with a manifest.

Exit codes: 0 success, 1 usage error, 2 acceptance failure, 3 numerical
failure.  The environment variable OTSFD_OUT_DIR overrides the output root.
"""

import argparse
import json
import math
import os
import sys

from . import experiments
from .errors import ConfigurationError, OtsfdError
from .ots import predicted_order

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_ACCEPTANCE = 2
EXIT_NUMERICAL = 3


def _fmt_order(value):
    return "exact" if math.isinf(value) else f"{value:g}"


def cmd_list(args):
    header = f"{'experiment':<24} {'scheme':<28} {'dt_opt':<22} {'order(ots)':<11} order(subopt)"
    print(header)
    print("-" * len(header))
    for name in sorted(experiments.REGISTRY):
        exp = experiments.REGISTRY[name]
        if exp.descriptor is not None:
            desc = exp.descriptor()
            o_ots = _fmt_order(predicted_order(desc, True))
            o_sub = _fmt_order(predicted_order(desc, False, exp.subopt_policy))
        else:
            o_ots = o_sub = "-"
        formula = exp.dt_formula
        if exp.ratio_rule:
            formula += f" [{exp.ratio_rule}]"
        print(f"{name:<24} {exp.scheme:<28} {formula:<22} {o_ots:<11} {o_sub}")
    for name in sorted(experiments.TIMING):
        print(f"{name:<24} {'timing study':<28} {'-':<22} {'-':<11} -")
    return EXIT_OK


def _resolve_out(path):
    root = os.environ.get("OTSFD_OUT_DIR")
    if path is None:
        return None
    if root and not os.path.isabs(path):
        os.makedirs(root, exist_ok=True)
        return os.path.join(root, path)
    return path


def cmd_run(args):
    ns = None
    if args.n_min is not None:
        refinements = args.refinements if args.refinements else 4
        ns = tuple(args.n_min * 2**k for k in range(refinements))
    try:
        if args.experiment in experiments.TIMING:
            report = experiments.run_timing_experiment(
                args.experiment, out_path=_resolve_out(args.out)
            )
            for s in report.series:
                print(f"{args.experiment} [{s.scheme}/{s.variant}]: "
                      f"runtime-vs-error tail slope {s.tail_slope:.3f} "
                      f"(trend {s.expected_slope:.3f})")
            return EXIT_OK
        report = experiments.run_experiment(
            args.experiment,
            ns=ns,
            final_time=args.final_time,
            policy=args.policy,
            correction=args.correction == "on",
            fixture=args.seed_fixture,
            out_path=_resolve_out(args.out),
        )
    except ConfigurationError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except OtsfdError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL
    if math.isnan(report.fitted_order):
        emax = max(r.error_linf for r in report.rows)
        print(f"{report.experiment} [{report.variant}]: max Linf error {emax:.3e}")
    else:
        print(f"{report.experiment} [{report.variant}]: fitted order "
              f"{report.fitted_order:.3f}")
    return EXIT_OK


def _check_report(check, report):
    kind = check[0]
    if kind == "order":
        _, lo, hi = check
        metric = report.fitted_order
        ok = (lo is None or metric >= lo) and (hi is None or metric <= hi)
    else:
        metric = max(r.error_linf for r in report.rows)
        if kind == "error<=":
            ok = metric <= check[1]
        elif kind == "error>=":
            ok = metric >= check[1]
        else:
            raise ValueError(f"unknown check {check!r}")
    return float(metric), bool(ok)


def cmd_reproduce_all(args):
    out_dir = os.environ.get("OTSFD_OUT_DIR") or args.out or "otsfd-out"
    os.makedirs(out_dir, exist_ok=True)
    manifest = []
    all_ok = True

    try:
        for name in sorted(experiments.REGISTRY):
            exp = experiments.REGISTRY[name]
            for label, policy, correction, check in exp.figure_runs:
                fname = f"{name}__{label}.csv"
                report = experiments.run_experiment(
                    name, policy=policy, correction=correction,
                    out_path=os.path.join(out_dir, fname),
                )
                metric, ok = _check_report(check, report)
                all_ok &= ok
                manifest.append({
                    "study": f"{name}/{label}",
                    "file": fname,
                    "metric": metric,
                    "check": list(check),
                    "passed": ok,
                })

        # first-step sensitivity probe (two start-up orders of the wave scheme)
        probe = {}
        for start in (3, 5):
            rep = experiments.run_wave_start_study((25, 50, 100, 200), start)
            fname = f"wave-first-step__start{start}.csv"
            from .harness import write_csv
            write_csv(os.path.join(out_dir, fname), "wave-first-step",
                      [(rep.scheme, rep.variant, r) for r in rep.rows])
            probe[start] = rep.fitted_order
        drop = probe[5] - probe[3]
        ok = drop >= 0.7
        all_ok &= ok
        manifest.append({
            "study": "wave-first-step",
            "file": "wave-first-step__start{3,5}.csv",
            "metric": drop,
            "check": ["order-drop>=", 0.7],
            "passed": ok,
        })

        for name in sorted(experiments.TIMING):
            fname = f"{name}.csv"
            report = experiments.run_timing_experiment(
                name, out_path=os.path.join(out_dir, fname)
            )
            ok = all(s.tail_slope < 0.0 for s in report.series)
            if name == "timing-diffusion-2d":
                ok = ok and experiments.timing_dominates(report)
            all_ok &= ok
            manifest.append({
                "study": name,
                "file": fname,
                "metric": {s.scheme: s.tail_slope for s in report.series},
                "check": ["slopes-negative-and-ordering"],
                "passed": ok,
            })
    except OtsfdError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL

    with open(os.path.join(out_dir, "manifest.json"), "w", encoding="utf-8") as fh:
        json.dump({"studies": manifest}, fh, indent=2)
        fh.write("\n")

    for entry in manifest:
        status = "ok" if entry["passed"] else "FAIL"
        print(f"[{status}] {entry['study']}: {entry['metric']}")
    return EXIT_OK if all_ok else EXIT_ACCEPTANCE


def build_parser():
    parser = argparse.ArgumentParser(
        prog="otsfd",
        description="Finite-difference convergence experiments with optimal "
                    "time steps and defect correction.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sub.add_parser("list", help="list registered experiments")

    run = sub.add_parser("run", help="run one experiment")
    run.add_argument("experiment")
    run.add_argument("--n-min", type=int, default=None)
    run.add_argument("--refinements", type=int, default=None)
    run.add_argument("--policy", default="ots",
                     help="ots | subopt | ratio=<c>:<p>")
    run.add_argument("--correction", choices=("on", "off"), default="on")
    run.add_argument("--final-time", type=float, default=None)
    run.add_argument("--out", default=None)
    run.add_argument("--seed-fixture", default=None)

    rep = sub.add_parser("reproduce-all", help="run the full figure set")
    rep.add_argument("--out", default=None)

    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_OK
    handlers = {
        "list": cmd_list,
        "run": cmd_run,
        "reproduce-all": cmd_reproduce_all,
    }
    return handlers[args.command](args)


if __name__ == "__main__":
    sys.exit(main())
