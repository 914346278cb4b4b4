"""Command-line entry point.

Subcommands: generate-network, run, sweep, aggregate. Options come
from a flat JSON config file plus flags (flags win); every unspecified
field falls back to the model defaults. The fully resolved config is
logged on every invocation so any output can be reproduced from its
log. Exit codes: 0 success, 1 usage error, 2 runtime error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

from . import netgen, runner
from .engine import SimParams
from .errors import GenerationError, InvalidParameterError, RunTimeoutError

log = logging.getLogger("frictionsim")


@dataclass
class Config:
    """Resolved settings for one CLI invocation."""

    n: int = 1000
    m: int = 3
    p: float = 0.5
    alpha: int = 15
    f: float = 0.0
    ell: float = 0.0
    rho: float = 0.99
    epsilon: float = 1e-5
    clustering_target: float = 0.29
    seed: int = 0
    warmup: int = 1000
    max_steps: int = 100_000
    f_values: Optional[list] = None
    ell_values: Optional[list] = None
    n_networks: int = 5
    runs_per_network: int = 10
    workers: int = 1
    collapse_f1: bool = False
    dump_posts: Optional[str] = None
    tau_alive_only: bool = False
    raw_out: str = "raw.csv"
    agg_out: str = "agg.csv"
    checkpoint: Optional[str] = None
    network_file: Optional[str] = None
    out: Optional[str] = None

    def sim_params(self) -> SimParams:
        return SimParams(
            n=self.n, m=self.m, p=self.p, alpha=self.alpha,
            f=self.f, ell=self.ell, rho=self.rho, epsilon=self.epsilon,
            clustering_target=self.clustering_target, seed=self.seed,
            warmup=self.warmup, max_steps=self.max_steps,
        )


_CONFIG_FIELDS = {f.name: f for f in dataclasses.fields(Config)}


def parse_config(config_path: Optional[str], overrides: dict) -> Config:
    """Merge defaults, an optional JSON config file, and flag overrides."""
    values = {}
    if config_path is not None:
        try:
            with open(config_path) as fh:
                file_values = json.load(fh)
        except OSError as exc:
            raise InvalidParameterError(f"cannot read config file: {exc}")
        except json.JSONDecodeError as exc:
            raise InvalidParameterError(f"config file is not valid JSON: {exc}")
        if not isinstance(file_values, dict):
            raise InvalidParameterError("config file must hold a JSON object")
        for key in file_values:
            if key not in _CONFIG_FIELDS:
                raise InvalidParameterError(f"unknown config key: {key!r}")
        values.update(file_values)
    values.update({k: v for k, v in overrides.items() if v is not None})
    if "seed" not in values and "FRICTIONSIM_SEED" in os.environ:
        values["seed"] = int(os.environ["FRICTIONSIM_SEED"])
    config = Config(**values)
    config.sim_params().validate()
    return config


def _log_config(config: Config) -> None:
    log.info("resolved config: %s", json.dumps(dataclasses.asdict(config), sort_keys=True))


def _cmd_generate_network(config: Config) -> int:
    if config.out is None:
        raise InvalidParameterError("generate-network requires --out")
    net = netgen.generate(config.n, config.m, config.clustering_target, config.seed)
    netgen.save_edge_list(net, config.out)
    log.info("wrote %d edges to %s (clustering %.4f)",
             net.edge_count(), config.out, netgen.undirected_clustering(net))
    return 0


def _cmd_run(config: Config) -> int:
    params = config.sim_params()
    if config.network_file:
        net = netgen.load_edge_list(config.network_file)
    else:
        net = netgen.generate(params.n, params.m, params.clustering_target,
                              runner.network_seed(params.seed, 0))
    seed = runner.run_seed(params.seed, 0, 0, params.f, params.ell)
    result = runner.run_once(params, net, seed,
                             keep_posts=config.dump_posts is not None,
                             tau_alive_only=config.tau_alive_only)
    print(runner.RAW_HEADER)
    print(runner._format_raw_row(result))
    if config.dump_posts:
        with open(config.dump_posts, "w") as fh:
            fh.write("post_id,quality,popularity\n")
            for pid, (q, pop) in enumerate(result.post_records):
                fh.write(f"{pid},{q:.6g},{int(pop)}\n")
        log.info("wrote %d post records to %s", result.n_posts, config.dump_posts)
    return 0


def _cmd_sweep(config: Config) -> int:
    params = config.sim_params()
    grid = runner.build_grid(config.f_values, config.ell_values,
                             collapse_f1=config.collapse_f1)
    rows, cells = runner.sweep(params, grid, config.n_networks,
                               config.runs_per_network, workers=config.workers,
                               checkpoint_path=config.checkpoint)
    runner.write_raw_csv(rows, config.raw_out)
    runner.write_agg_csv(cells, config.agg_out)
    log.info("sweep complete: %d runs over %d cells -> %s, %s",
             len(rows), len(cells), config.raw_out, config.agg_out)
    return 0


def _cmd_aggregate(config: Config, raw_path: str) -> int:
    runner.aggregate_file(raw_path, config.agg_out)
    log.info("aggregated %s -> %s", raw_path, config.agg_out)
    return 0


def _add_common_flags(sub: argparse.ArgumentParser) -> None:
    sub.add_argument("--config", help="JSON config file; flags override it")
    sub.add_argument("--n", type=int)
    sub.add_argument("--m", type=int)
    sub.add_argument("--p", type=float)
    sub.add_argument("--alpha", type=int)
    sub.add_argument("--f", type=float)
    sub.add_argument("--ell", type=float)
    sub.add_argument("--rho", type=float)
    sub.add_argument("--epsilon", type=float)
    sub.add_argument("--clustering-target", type=float, dest="clustering_target")
    sub.add_argument("--seed", type=int)
    sub.add_argument("--warmup", type=int)
    sub.add_argument("--max-steps", type=int, dest="max_steps")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="frictionsim",
        description="Agent-based simulator of friction and quality-recognition "
                    "learning in social-media information sharing.",
    )
    subparsers = parser.add_subparsers(dest="command", required=True)

    gen = subparsers.add_parser("generate-network",
                                help="generate a follower network edge list")
    _add_common_flags(gen)
    gen.add_argument("--out", required=True, help="edge-list output path")

    run = subparsers.add_parser("run", help="execute a single run to convergence")
    _add_common_flags(run)
    run.add_argument("--network", dest="network_file",
                     help="edge-list file (default: generate from seed)")
    run.add_argument("--dump-posts", dest="dump_posts",
                     help="write per-post quality/popularity CSV here")
    run.add_argument("--tau-alive-only", action="store_const", const=True,
                     dest="tau_alive_only",
                     help="compute tau over posts still visible in feeds at T")

    sweep = subparsers.add_parser("sweep", help="run the full (f, ell) sweep")
    _add_common_flags(sweep)
    sweep.add_argument("--f-values", dest="f_values",
                       help="comma-separated f axis (default: paper grid)")
    sweep.add_argument("--ell-values", dest="ell_values",
                       help="comma-separated ell axis (default: paper grid)")
    sweep.add_argument("--networks", type=int, dest="n_networks")
    sweep.add_argument("--runs", type=int, dest="runs_per_network")
    sweep.add_argument("--workers", type=int)
    sweep.add_argument("--collapse-f1", action="store_const", const=True,
                       dest="collapse_f1",
                       help="merge all f=1 cells into one (ell is irrelevant there)")
    sweep.add_argument("--raw-out", dest="raw_out")
    sweep.add_argument("--agg-out", dest="agg_out")
    sweep.add_argument("--checkpoint", help="append completed runs here; resumable")

    agg = subparsers.add_parser("aggregate",
                                help="recompute the aggregated CSV from a raw CSV")
    agg.add_argument("raw", help="raw per-run CSV")
    agg.add_argument("--out", dest="agg_out")
    return parser


def _parse_axis(text):
    if text is None:
        return None
    return [float(v) for v in text.split(",") if v.strip() != ""]


def main(argv=None) -> int:
    logging.basicConfig(level=logging.INFO, stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 1 if exc.code not in (0, None) else 0
    overrides = {k: v for k, v in vars(args).items()
                 if k in _CONFIG_FIELDS and v is not None}
    for axis in ("f_values", "ell_values"):
        if axis in overrides:
            overrides[axis] = _parse_axis(overrides[axis])
    try:
        config = parse_config(getattr(args, "config", None), overrides)
    except InvalidParameterError as exc:
        log.error("%s", exc)
        return 1
    _log_config(config)
    try:
        if args.command == "generate-network":
            return _cmd_generate_network(config)
        if args.command == "run":
            return _cmd_run(config)
        if args.command == "sweep":
            return _cmd_sweep(config)
        if args.command == "aggregate":
            return _cmd_aggregate(config, args.raw)
        parser.error(f"unknown command {args.command}")
        return 1
    except InvalidParameterError as exc:
        log.error("%s", exc)
        return 1
    except (GenerationError, RunTimeoutError, OSError) as exc:
        log.error("%s", exc)
        return 2


if __name__ == "__main__":
    sys.exit(main())
