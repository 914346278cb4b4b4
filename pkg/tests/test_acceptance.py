"""Acceptance suite: full-scale checks at default parameters.

Runs the quantified sweep cells (50 runs each: 5 networks x 10 runs)
once per session and checks every criterion at its stated tolerance.
Each criterion prints one PASS/FAIL line; run with `pytest -s` to see
them as they complete. Expect several minutes of runtime.
"""

import itertools
import math

import numpy as np
import pytest

from conftest import brute_force_tau_b
from frictionsim.engine import SimParams
from frictionsim.metrics import kendall_tau_b
from frictionsim.runner import (
    build_grid,
    generate_networks,
    run_once,
    run_seed,
    sweep,
    write_agg_csv,
    write_raw_csv,
    _format_raw_row,
)
from frictionsim import netgen
from frictionsim.sampling import RandomSource, sample_unit_linear
from scipy import stats

pytestmark = pytest.mark.acceptance

MASTER_SEED = 271828
N_NETWORKS = 5
RUNS_PER_NETWORK = 10

ELL0_F = [0.0, 0.1, 0.2, 0.5, 0.9]
ELL1_F = [0.1, 0.2, 0.5, 0.9]
CELLS = ([(f, 0.0) for f in ELL0_F] + [(f, 1.0) for f in ELL1_F] + [(0.1, 0.5)])


def report(criterion, ok, detail):
    print(f"ACCEPTANCE {criterion}: {'PASS' if ok else 'FAIL'} ({detail})")
    assert ok, f"{criterion} failed: {detail}"


@pytest.fixture(scope="module")
def cell_means():
    params = SimParams(seed=MASTER_SEED)
    _, cells = sweep(params, CELLS, N_NETWORKS, RUNS_PER_NETWORK)
    return {(c.f, c.ell): c for c in cells}


def pooled_se(a, b):
    return math.sqrt(a**2 + b**2)


def test_criterion_1_friction_alone_is_null(cell_means):
    means = {f: cell_means[(f, 0.0)].mean_q for f in ELL0_F}
    max_diff = max(abs(a - b) for a, b in itertools.combinations(means.values(), 2))
    worst_offset = max(abs(m - 1 / 3) for m in means.values())
    ok = max_diff <= 0.02 and worst_offset <= 0.05
    report("C1 friction-alone null result", ok,
           f"max pairwise diff {max_diff:.4f} (<=0.02), "
           f"max |mean-1/3| {worst_offset:.4f} (<=0.05)")


def test_criterion_2_learning_lift(cell_means):
    q_full = cell_means[(0.1, 1.0)].mean_q
    q_half = cell_means[(0.1, 0.5)].mean_q
    ok = abs(q_full - 0.47) <= 0.03 and abs(q_half - 0.41) <= 0.03
    report("C2 learning lift at f=0.1", ok,
           f"ell=1: {q_full:.4f} (0.47+-0.03), ell=0.5: {q_half:.4f} (0.41+-0.03)")


def test_criterion_3_non_monotonicity(cell_means):
    peak = cell_means[(0.1, 1.0)]
    ok = True
    details = []
    for f in (0.5, 0.9):
        other = cell_means[(f, 1.0)]
        margin = peak.mean_q - other.mean_q
        need = 2 * pooled_se(peak.se_q, other.se_q)
        details.append(f"f=0.1 vs f={f}: margin {margin:.4f} > {need:.4f}")
        ok = ok and margin > need
    report("C3 non-monotonicity in f", ok, "; ".join(details))


def test_criterion_4_discriminative_power(cell_means):
    worst_ell0 = max(abs(cell_means[(f, 0.0)].mean_tau) for f in ELL0_F
                     if cell_means[(f, 0.0)].mean_tau is not None)
    tau_02 = cell_means[(0.2, 1.0)].mean_tau
    tau_05 = cell_means[(0.5, 1.0)].mean_tau
    ok = worst_ell0 <= 0.02 and abs(tau_02 - 0.139) <= 0.03 and tau_02 > tau_05
    report("C4 discriminative-power pattern", ok,
           f"max |tau| at ell=0: {worst_ell0:.4f} (<=0.02), "
           f"tau(0.2)={tau_02:.4f} (0.139+-0.03), tau(0.5)={tau_05:.4f}")


def test_criterion_5_full_friction_degeneracy():
    params = SimParams(f=1.0, ell=0.5, seed=MASTER_SEED)
    net = generate_networks(params, 1)[0]
    result = run_once(params, net, run_seed(MASTER_SEED, 0, 0, 1.0, 0.5),
                      keep_posts=True)
    all_one = bool((result.post_records[:, 1] == 1).all())
    row = _format_raw_row(result)
    empty_field = row.split(",")[6] == ""
    ok = all_one and result.tau is None and empty_field
    report("C5 f=1 degeneracy", ok,
           f"{result.n_posts} posts all popularity 1: {all_one}, "
           f"tau undefined: {result.tau is None}, empty CSV field: {empty_field}")


def test_criterion_6_sampler_fidelity():
    rng = RandomSource(MASTER_SEED)
    draws = [sample_unit_linear(rng) for _ in range(100_000)]
    statistic, _ = stats.kstest(draws, lambda x: 2 * x - x**2)
    critical = stats.kstwobign.isf(0.01) / math.sqrt(len(draws))
    mean_err = abs(np.mean(draws) - 1 / 3)
    ok = statistic < critical and mean_err < 0.005
    report("C6 sampler fidelity", ok,
           f"KS {statistic:.5f} < {critical:.5f}, |mean-1/3| {mean_err:.5f} < 0.005")


def test_criterion_7_kendall_oracle_equivalence():
    rng = np.random.default_rng(MASTER_SEED)
    worst = 0.0
    checked = 0
    for _ in range(1000):
        n = int(rng.integers(2, 51))
        pop = rng.integers(1, 6, size=n)  # narrow range injects ties
        qual = np.round(rng.random(n), 1)
        expected = brute_force_tau_b(list(pop), list(qual))
        actual = kendall_tau_b(pop, qual)
        if expected is None:
            assert actual is None
        else:
            worst = max(worst, abs(actual - expected))
            checked += 1
    ok = worst <= 1e-12
    report("C7 Kendall oracle equivalence", ok,
           f"{checked} defined instances, worst |diff| {worst:.2e} <= 1e-12")


def test_criterion_8_network_targets():
    pre = netgen.grow_preferential(1000, 3, RandomSource(MASTER_SEED))
    edge_ok = pre.edge_count() == 3 * 2 + (1000 - 3) * 3
    ccs = []
    for i in range(20):
        net = netgen.generate(1000, 3, 0.29, seed=MASTER_SEED + i)
        ccs.append(netgen.undirected_clustering(net))
    cc_ok = all(0.29 <= cc <= 0.31 for cc in ccs)
    ok = edge_ok and cc_ok
    report("C8 network targets", ok,
           f"pre-closure edges {pre.edge_count()} == 2997: {edge_ok}, "
           f"clustering range [{min(ccs):.4f}, {max(ccs):.4f}] in [0.29, 0.31]")


def test_criterion_9_sweep_determinism(tmp_path):
    params = SimParams(seed=MASTER_SEED)
    grid = build_grid([0.0, 0.5, 1.0], [0.0, 0.5, 1.0])
    outputs = []
    for workers in (1, 2):
        rows, cells = sweep(params, grid, n_networks=2, runs_per_network=2,
                            workers=workers)
        raw = tmp_path / f"raw_{workers}.csv"
        agg = tmp_path / f"agg_{workers}.csv"
        write_raw_csv(rows, raw)
        write_agg_csv(cells, agg)
        outputs.append((raw.read_bytes(), agg.read_bytes()))
    ok = outputs[0] == outputs[1]
    report("C9 sweep determinism across worker counts", ok,
           f"raw identical: {outputs[0][0] == outputs[1][0]}, "
           f"agg identical: {outputs[0][1] == outputs[1][1]}")


def test_criterion_10_zero_friction_equivalence():
    net = generate_networks(SimParams(seed=MASTER_SEED), 1)[0]
    seed = run_seed(MASTER_SEED, 0, 0, 0.0, 0.0)
    a = run_once(SimParams(f=0.0, ell=0.0, seed=MASTER_SEED), net, seed,
                 keep_posts=True)
    b = run_once(SimParams(f=0.0, ell=1.0, seed=MASTER_SEED), net, seed,
                 keep_posts=True)
    ok = (a.T == b.T and a.q_hat == b.q_hat and a.tau == b.tau
          and a.n_posts == b.n_posts
          and np.array_equal(a.post_records, b.post_records))
    report("C10 zero-friction equivalence", ok,
           f"T {a.T}=={b.T}, q_hat {a.q_hat:.6f}=={b.q_hat:.6f}, "
           f"n_posts {a.n_posts}=={b.n_posts}")
