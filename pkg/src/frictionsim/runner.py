"""Single-run driver, (f, ell) sweep orchestration, and aggregation.

A sweep is a deterministic list of independent work units (one run
each); results are sorted before serialization so output never depends
on worker count or completion order. The aggregated CSV is always
recomputed from the serialized raw rows, which makes `aggregate` on a
sweep's raw CSV reproduce the sweep's own aggregate byte for byte.
"""

from __future__ import annotations

import concurrent.futures
import math
import os
from dataclasses import dataclass, replace
from typing import Optional

import numpy as np

from . import metrics, netgen
from .engine import SimParams, SimState
from .errors import InvalidParameterError, RunTimeoutError
from .sampling import derive_subseed

RAW_HEADER = "f,ell,network,run,T,q_hat,tau,n_posts"
AGG_HEADER = "f,ell,mean_q,se_q,mean_tau,se_tau,n_runs,n_tau_defined"

_NET_SEED_TAG = 0x4E45  # namespaces network seeds apart from run seeds
_RUN_SEED_TAG = 0x5255


@dataclass
class RunResult:
    f: float
    ell: float
    network_index: int
    run_index: int
    T: int
    q_hat: float
    tau: Optional[float]
    n_posts: int
    post_records: Optional[np.ndarray] = None  # columns: quality, popularity


@dataclass
class SweepCell:
    f: float
    ell: float
    mean_q: float
    se_q: Optional[float]
    mean_tau: Optional[float]
    se_tau: Optional[float]
    n_runs: int
    n_tau_defined: int


def run_once(params: SimParams, network: netgen.Network, sub_seed: int,
             network_index: int = 0, run_index: int = 0,
             keep_posts: bool = False, tau_alive_only: bool = False) -> RunResult:
    """Run the diffusion model to EMA convergence on one network.

    tau_alive_only restricts the tau population to posts still visible
    in some feed at T instead of every post ever created.
    """
    state = SimState(network, params, sub_seed)
    ema = None
    T = None
    for t in range(1, params.max_steps + 1):
        state.step()
        q = metrics.feed_avg_quality(state)
        if ema is None:
            ema = q  # EMA seeded with the first observation
            continue
        prev = ema
        ema = metrics.ema_update(prev, q, params.rho)
        if metrics.converged(prev, ema, params.epsilon, t, params.warmup):
            T = t
            break
    if T is None:
        raise RunTimeoutError(
            f"no convergence within {params.max_steps} steps "
            f"(f={params.f}, ell={params.ell}, seed={sub_seed})",
            partial_state=state,
        )
    if tau_alive_only:
        alive = sorted({int(pid) for i in range(params.n)
                        for pid in state.feeds[i, : state.feed_len[i]]})
        tau = (metrics.kendall_tau_b(state.popularities[alive],
                                     state.qualities[alive])
               if len(alive) >= 2 else None)
    else:
        tau = metrics.kendall_tau_b(state.popularities, state.qualities)
    records = None
    if keep_posts:
        records = np.column_stack(
            (state.qualities, state.popularities.astype(np.float64))
        )
    return RunResult(
        f=params.f, ell=params.ell,
        network_index=network_index, run_index=run_index,
        T=T, q_hat=ema, tau=tau, n_posts=state.n_posts,
        post_records=records,
    )


def default_axis():
    """0 to 0.2 in steps of 0.01, then 0.3 to 1.0 in steps of 0.1."""
    return [round(i * 0.01, 2) for i in range(21)] + [
        round(i * 0.1, 1) for i in range(3, 11)
    ]


def build_grid(f_values=None, ell_values=None, collapse_f1: bool = False):
    """Cartesian (f, ell) grid; explicit axis lists are passed through.

    collapse_f1 keeps a single f=1 cell (ell is irrelevant there since
    nothing gets re-shared), shrinking the default grid from 841 to 813
    cells.
    """
    f_values = default_axis() if f_values is None else list(f_values)
    ell_values = default_axis() if ell_values is None else list(ell_values)
    for name, values in (("f", f_values), ("ell", ell_values)):
        for v in values:
            if not 0.0 <= v <= 1.0:
                raise InvalidParameterError(f"{name} value {v} outside [0,1]")
    grid = []
    keep_ell_at_f1 = min(ell_values) if ell_values else None
    for f in f_values:
        for ell in ell_values:
            if collapse_f1 and f == 1.0 and ell != keep_ell_at_f1:
                continue
            grid.append((f, ell))
    return grid


def standard_error(values):
    """Sample standard deviation over sqrt(n); None for fewer than 2 values."""
    values = list(values)
    if len(values) < 2:
        return None
    return float(np.std(values, ddof=1) / math.sqrt(len(values)))


def network_seed(master_seed: int, network_index: int) -> int:
    return derive_subseed(master_seed, _NET_SEED_TAG, network_index)


def run_seed(master_seed: int, network_index: int, run_index: int,
             f: float, ell: float) -> int:
    return derive_subseed(master_seed, _RUN_SEED_TAG, network_index, run_index,
                          float(f), float(ell))


def generate_networks(params: SimParams, n_networks: int):
    return [
        netgen.generate(params.n, params.m, params.clustering_target,
                        network_seed(params.seed, i))
        for i in range(n_networks)
    ]


def _fmt(x: float) -> str:
    return f"{x:.6g}"


def _format_raw_row(r: RunResult) -> str:
    tau = "" if r.tau is None else _fmt(r.tau)
    return (f"{_fmt(r.f)},{_fmt(r.ell)},{r.network_index},{r.run_index},"
            f"{r.T},{_fmt(r.q_hat)},{tau},{r.n_posts}")


def _execute_run(args):
    params, network, net_idx, run_idx = args
    seed = run_seed(params.seed, net_idx, run_idx, params.f, params.ell)
    return run_once(params, network, seed, net_idx, run_idx)


def sweep(params: SimParams, grid, n_networks: int, runs_per_network: int,
          workers: int = 1, checkpoint_path=None):
    """Execute every (f, ell, network, run) work unit and aggregate.

    Returns (raw_rows, cells): raw_rows are serialized per-run CSV rows
    in deterministic order, cells the per-(f, ell) aggregates computed
    from those rows. With checkpoint_path set, completed rows are
    appended there as they finish and are skipped on resume.
    """
    if n_networks < 1 or runs_per_network < 1:
        raise InvalidParameterError("need n_networks >= 1 and runs_per_network >= 1")
    networks = generate_networks(params, n_networks)

    done = {}
    if checkpoint_path and os.path.exists(checkpoint_path):
        for row in read_raw_rows(checkpoint_path):
            done[(row[0], row[1], row[2], row[3])] = row

    tasks = []
    rows = []
    for f, ell in sorted(set(grid)):
        cell_params = replace(params, f=f, ell=ell)
        for net_idx in range(n_networks):
            for run_idx in range(runs_per_network):
                key = (_fmt(f), _fmt(ell), net_idx, run_idx)
                if key in done:
                    rows.append(done[key])
                else:
                    tasks.append((cell_params, networks[net_idx], net_idx, run_idx))

    checkpoint_fh = None
    if checkpoint_path:
        new_file = not os.path.exists(checkpoint_path)
        checkpoint_fh = open(checkpoint_path, "a")
        if new_file:
            checkpoint_fh.write(RAW_HEADER + "\n")
    try:
        if workers <= 1:
            results = map(_execute_run, tasks)
            for result in results:
                row = _format_raw_row(result)
                if checkpoint_fh:
                    checkpoint_fh.write(row + "\n")
                    checkpoint_fh.flush()
                rows.append(_parse_raw_row(row))
        else:
            with concurrent.futures.ProcessPoolExecutor(max_workers=workers) as pool:
                for result in pool.map(_execute_run, tasks, chunksize=1):
                    row = _format_raw_row(result)
                    if checkpoint_fh:
                        checkpoint_fh.write(row + "\n")
                        checkpoint_fh.flush()
                    rows.append(_parse_raw_row(row))
    finally:
        if checkpoint_fh:
            checkpoint_fh.close()

    rows.sort(key=lambda r: (float(r[0]), float(r[1]), r[2], r[3]))
    cells = aggregate_rows(rows)
    return rows, cells


def _parse_raw_row(line: str):
    f, ell, net, run, T, q_hat, tau, n_posts = line.split(",")
    return (f, ell, int(net), int(run), int(T), float(q_hat),
            None if tau == "" else float(tau), int(n_posts))


def read_raw_rows(path):
    rows = []
    with open(path) as fh:
        header = fh.readline().strip()
        if header != RAW_HEADER:
            raise InvalidParameterError(f"unexpected raw CSV header: {header!r}")
        for line in fh:
            line = line.strip()
            if line:
                rows.append(_parse_raw_row(line))
    return rows


def write_raw_csv(rows, path) -> None:
    with open(path, "w") as fh:
        fh.write(RAW_HEADER + "\n")
        for row in rows:
            f, ell, net, run, T, q_hat, tau, n_posts = row
            tau_s = "" if tau is None else _fmt(tau)
            fh.write(f"{f},{ell},{net},{run},{T},{_fmt(q_hat)},{tau_s},{n_posts}\n")


def aggregate_rows(rows):
    """Collapse per-run rows into per-(f, ell) SweepCells.

    Undefined taus are excluded from the tau mean/SE; n_tau_defined
    records how many runs contributed.
    """
    by_cell = {}
    for row in rows:
        by_cell.setdefault((float(row[0]), float(row[1])), []).append(row)
    cells = []
    for (f, ell) in sorted(by_cell):
        cell_rows = by_cell[(f, ell)]
        qs = [r[5] for r in cell_rows]
        taus = [r[6] for r in cell_rows if r[6] is not None]
        cells.append(SweepCell(
            f=f, ell=ell,
            mean_q=float(np.mean(qs)),
            se_q=standard_error(qs),
            mean_tau=float(np.mean(taus)) if taus else None,
            se_tau=standard_error(taus),
            n_runs=len(cell_rows),
            n_tau_defined=len(taus),
        ))
    return cells


def write_agg_csv(cells, path) -> None:
    with open(path, "w") as fh:
        fh.write(AGG_HEADER + "\n")
        for c in cells:
            se_q = "" if c.se_q is None else _fmt(c.se_q)
            mean_tau = "" if c.mean_tau is None else _fmt(c.mean_tau)
            se_tau = "" if c.se_tau is None else _fmt(c.se_tau)
            fh.write(f"{_fmt(c.f)},{_fmt(c.ell)},{_fmt(c.mean_q)},{se_q},"
                     f"{mean_tau},{se_tau},{c.n_runs},{c.n_tau_defined}\n")


def aggregate_file(raw_path, agg_path) -> None:
    """Recompute the aggregated CSV from a raw per-run CSV."""
    rows = read_raw_rows(raw_path)
    rows.sort(key=lambda r: (float(r[0]), float(r[1]), r[2], r[3]))
    write_agg_csv(aggregate_rows(rows), agg_path)
