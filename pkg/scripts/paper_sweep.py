#!/usr/bin/env python3
"""Reproduce the full parameter sweep: 813 (f, ell) cells x 50 runs.

Resumable: completed runs are checkpointed, so re-running after an
interruption picks up where it left off. Expect hours of runtime at
full scale; pass --networks/--runs/--f-values/--ell-values to shrink.

Usage:
    python3 scripts/paper_sweep.py --out-dir results/ [--workers 4]
"""

import argparse
import pathlib
import sys

from frictionsim.cli import main as cli_main


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--out-dir", default="results", help="output directory")
    parser.add_argument("--seed", type=int, default=271828)
    parser.add_argument("--workers", type=int, default=1)
    parser.add_argument("--networks", type=int, default=5)
    parser.add_argument("--runs", type=int, default=10)
    parser.add_argument("--f-values", default=None)
    parser.add_argument("--ell-values", default=None)
    args = parser.parse_args()

    out = pathlib.Path(args.out_dir)
    out.mkdir(parents=True, exist_ok=True)
    cli_args = [
        "sweep",
        "--seed", str(args.seed),
        "--workers", str(args.workers),
        "--networks", str(args.networks),
        "--runs", str(args.runs),
        "--collapse-f1",
        "--raw-out", str(out / "raw.csv"),
        "--agg-out", str(out / "agg.csv"),
        "--checkpoint", str(out / "checkpoint.csv"),
    ]
    if args.f_values:
        cli_args += ["--f-values", args.f_values]
    if args.ell_values:
        cli_args += ["--ell-values", args.ell_values]
    return cli_main(cli_args)


if __name__ == "__main__":
    sys.exit(main())
