"""Run-level measurements: feed quality, EMA convergence, Kendall tau.

kendall_tau_b delegates the O(n log n) pair counting to
scipy.stats.kendalltau (variant "b"); the test suite checks it against
a brute-force pair-enumeration oracle.
"""

from __future__ import annotations

import numpy as np
from scipy import stats

from .errors import InvalidParameterError
from .engine import SimState, _feed_quality_sum


def feed_avg_quality(state: SimState) -> float:
    """Mean quality over all feed entries, duplicates counted per entry.

    Divides by the number of entries actually present (relevant while
    feeds are still filling up); 0.0 when every feed is empty.
    """
    total, count = _feed_quality_sum(
        state.feeds, state.feed_len, state.post_q, state.params.n
    )
    return total / count if count else 0.0


def ema_update(prev: float, q: float, rho: float) -> float:
    return rho * prev + (1.0 - rho) * q


def converged(prev: float, cur: float, epsilon: float, step: int, warmup: int) -> bool:
    """EMA halting rule, guarded against spurious early stops."""
    return step >= warmup and abs(cur - prev) < epsilon


def kendall_tau_b(popularity, quality):
    """Tie-corrected Kendall rank correlation, or None when undefined.

    Undefined means one of the variables is entirely tied, which makes
    the tau-b denominator zero (e.g. popularity when nothing is ever
    re-shared).
    """
    popularity = np.asarray(popularity)
    quality = np.asarray(quality)
    if popularity.ndim != 1 or quality.ndim != 1:
        raise InvalidParameterError("inputs must be one-dimensional")
    if len(popularity) != len(quality):
        raise InvalidParameterError(
            f"length mismatch: {len(popularity)} vs {len(quality)}"
        )
    if len(popularity) < 2:
        raise InvalidParameterError("need at least 2 observations")
    if np.all(popularity == popularity[0]) or np.all(quality == quality[0]):
        return None
    tau, _ = stats.kendalltau(popularity, quality, variant="b")
    return float(tau)


def feed_diversity(state: SimState) -> int:
    """Number of distinct posts currently visible across all feeds."""
    seen = set()
    for i in range(state.params.n):
        seen.update(state.feeds[i, : state.feed_len[i]].tolist())
    return len(seen)
