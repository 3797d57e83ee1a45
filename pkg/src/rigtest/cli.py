"""Command-line entry point.

Exit status: 0 when a command ran (and, for ``test``, did not reject),
2 when ``test`` rejects randomness, 1 on any error.
"""
from __future__ import annotations

import argparse
import json
import sys

from rigtest import __version__
from rigtest.baselines import bds_test, runs_test
from rigtest.dd import DEFAULT_K, ThresholdStore, calibrate_threshold, dd_test, default_cache_path
from rigtest.ep import ep_test
from rigtest.errors import RigTestError
from rigtest.harness import json_default, ingest_series, load_config, repro_case_study, run_power_study, write_json

EXIT_OK, EXIT_ERROR, EXIT_REJECT = 0, 1, 2


def _store(args) -> ThresholdStore:
    cache = None if args.no_cache else (args.cache or default_cache_path())
    return ThresholdStore(cache, calibrate=not args.no_calibrate, k=args.k, seed=args.calibration_seed)


def _add_threshold_flags(p):
    p.add_argument("--cache", help="threshold cache file (default: $RIGTEST_CACHE or ~/.cache/rigtest/thresholds.tsv)")
    p.add_argument("--no-cache", action="store_true", help="keep calibrated thresholds in memory only")
    p.add_argument("--no-calibrate", action="store_true", help="fail instead of calibrating missing thresholds")
    p.add_argument("--k", type=int, default=DEFAULT_K, help="calibration replications")
    p.add_argument("--calibration-seed", type=int, default=0)


def _emit(report: dict, out) -> None:
    text = json.dumps(report, indent=2, sort_keys=True, default=json_default)
    if out:
        with open(out, "w") as fh:
            fh.write(text + "\n")
    else:
        print(text)


def cmd_test(args) -> int:
    y = ingest_series(args.file, args.missing, args.column)
    if args.test == "ep":
        report = ep_test(y, args.alpha, seed=args.seed)
        reject, d = report.reject, report.to_dict()
    elif args.test == "dd":
        report = dd_test(y, args.alpha, thresholds=_store(args))
        reject, d = report.reject, report.to_dict()
    else:
        report = runs_test(y) if args.test == "runs" else bds_test(y, args.dim, args.eps_factor)
        reject = report.rejects(args.alpha)
        d = dict(report.to_dict(), alpha=args.alpha, verdict="reject" if reject else "fail-to-reject")
    d["m"] = int(y.size)
    d["software"] = {"package": "rigtest", "version": __version__}
    print(f"test\tm\talpha\tverdict", file=sys.stderr)
    print(f"{args.test}\t{y.size}\t{args.alpha}\t{d['verdict']}", file=sys.stderr)
    _emit(d, args.json)
    return EXIT_REJECT if reject else EXIT_OK


def cmd_calibrate(args) -> int:
    if args.force:
        entry = calibrate_threshold(args.m, args.alpha, args.k, args.calibration_seed)
    else:
        entry = _store(args).resolve(args.m, args.alpha)
    print("m\talpha\tk\tseed\tc_alpha\tsource")
    print(f"{entry.m}\t{entry.alpha}\t{entry.k}\t{entry.seed}\t{entry.c_alpha:.6f}\t{entry.source}")
    return EXIT_OK


def cmd_power(args) -> int:
    config = load_config(args.config)
    if args.replications is not None:
        config.replications = args.replications
    if args.jobs is not None:
        config.jobs = args.jobs
    if args.output is not None:
        config.output = args.output

    def progress(i, cell):
        print(f"[{i + 1}/{len(config.cells)}] {cell.name} {cell.param} m={cell.length}", file=sys.stderr)

    result = run_power_study(config, progress=progress)
    sys.stdout.write(result.to_csv())
    return EXIT_OK


def cmd_repro(args) -> int:
    report = repro_case_study(args.name, args.file, args.alpha, args.seed, _store(args), args.column)
    print("test\tcomputed\treference\tverdict", file=sys.stderr)
    ref = report["reference"]
    print(f"rig_ep\t{[round(v, 4) for v in report['rig_ep']['abs_dev']]}\t{ref['rig_ep']}\t"
          f"{report['rig_ep']['verdict']}", file=sys.stderr)
    print(f"rig_dd\t{[round(g['D'], 4) for g in report['rig_dd']['groups']]}\t{ref['rig_dd']['D']}\t"
          f"{report['rig_dd']['verdict']}", file=sys.stderr)
    print(f"runs\t{report['runs']['p_value']:.5f}\t{ref['runs']['p_value']}\t{report['runs']['verdict']}",
          file=sys.stderr)
    if args.json:
        write_json(report, args.json)
    else:
        _emit(report, None)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="rigtest", description=__doc__.splitlines()[0])
    parser.add_argument("--version", action="version", version=f"rigtest {__version__}")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("test", help="run one randomness test on a series file")
    p.add_argument("test", choices=["ep", "dd", "runs", "bds"])
    p.add_argument("file")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0, help="seed for the RIG-EP pairing")
    p.add_argument("--column", help="column index (0-based) or header name")
    p.add_argument("--missing", choices=["drop", "fail"], default="drop")
    p.add_argument("--dim", type=int, default=4, help="BDS embedding dimension")
    p.add_argument("--eps-factor", type=float, default=0.5, help="BDS epsilon in standard deviations")
    p.add_argument("--json", help="write the JSON report here instead of stdout")
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_test)

    p = sub.add_parser("calibrate", help="Monte-Carlo RIG-DD critical value")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--alpha", type=float, required=True)
    p.add_argument("--seed", dest="calibration_seed", type=int, default=0)
    p.add_argument("--force", action="store_true", help="calibrate even when the bundled table has the value")
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_calibrate)

    p = sub.add_parser("power", help="run a power study from a config file")
    p.add_argument("config")
    p.add_argument("--replications", type=int)
    p.add_argument("--jobs", type=int)
    p.add_argument("--output", help="output path stem for the .csv and .json files")
    p.set_defaults(func=cmd_power)

    p = sub.add_parser("repro", help="reproduce a real-data case study")
    p.add_argument("name", choices=["gnp", "ibm"])
    p.add_argument("file")
    p.add_argument("--alpha", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--column")
    p.add_argument("--json")
    _add_threshold_flags(p)
    p.set_defaults(func=cmd_repro)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (RigTestError, OSError) as exc:
        print(f"rigtest: error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
