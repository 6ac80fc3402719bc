"""Command line entry point: ``hankeltrunc {identity,truncnorm,atoms,bhtconv}``."""

from __future__ import annotations

import argparse
import sys

from .harness import ExperimentConfig, emit, load_config, run_scenario


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="hankeltrunc",
        description="Seeded experiments on truncated Hankel operators and bilinear Hilbert transforms.",
    )
    sub = parser.add_subparsers(dest="scenario", required=True)
    helps = {
        "identity": "exact identity checks (exit 1 on any failure)",
        "truncnorm": "norms of full and truncated multilinear Hankel sections",
        "atoms": "bilinear Hilbert transform on H^q atoms",
        "bhtconv": "quadrature error against the multiplier route",
    }
    for name, text in helps.items():
        p = sub.add_parser(name, help=text)
        p.add_argument("--config", metavar="PATH", help="flat key = value config file")
        p.add_argument("--seed", type=int)
        p.add_argument("--out", metavar="PATH", help="report path (default: stdout)")
        p.add_argument("--format", choices=("csv", "json"))
        p.add_argument("--plots", action="store_true", help="also write SVG plots next to --out")
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    overrides = dict(scenario=args.scenario, seed=args.seed, format=args.format, output=args.out)
    try:
        if args.config:
            cfg = load_config(args.config, **overrides)
        else:
            cfg = ExperimentConfig(**{k: v for k, v in overrides.items() if v is not None})
    except (OSError, ValueError) as exc:
        print(f"hankeltrunc: bad config: {exc}", file=sys.stderr)
        return 2

    report = run_scenario(cfg)
    if cfg.output:
        try:
            for path in emit(report, cfg.format, cfg.output, plots=args.plots):
                print(path, file=sys.stderr)
        except OSError as exc:
            print(f"hankeltrunc: {exc}", file=sys.stderr)
            return 2
    else:
        if args.plots:
            print("hankeltrunc: --plots needs --out", file=sys.stderr)
        sys.stdout.write(report.to_csv() if cfg.format == "csv" else report.to_json())

    for name, ok in report.checks.items():
        if not ok:
            print(f"FAIL {name}", file=sys.stderr)
    return 0 if report.passed else 1


if __name__ == "__main__":
    sys.exit(main())
