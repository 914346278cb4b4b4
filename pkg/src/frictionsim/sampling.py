"""Seedable stochastic primitives.

All randomness in the simulator flows through a PCG32 generator
(O'Neill's pcg32, 64-bit state / 64-bit stream, 32-bit output). The
algorithm is implemented here directly so that draw sequences are
bit-identical across platforms and Python versions; the same compiled
routines back both the pure-Python helpers and the simulation kernel.
"""

from __future__ import annotations

import math

import numpy as np
from numba import njit

from .errors import InvalidParameterError

_M64 = (1 << 64) - 1
_PCG_MULT = 6364136223846793005
_PCG32_SCALE = 1.0 / 4294967296.0  # 2^-32


@njit(cache=True)
def pcg32_next(state):
    """Advance a pcg32 state array [state, inc] and return a uint32."""
    old = state[0]
    state[0] = old * np.uint64(6364136223846793005) + state[1]
    xorshifted = np.uint32(((old >> np.uint64(18)) ^ old) >> np.uint64(27))
    rot = np.uint32(old >> np.uint64(59))
    return np.uint32(
        (xorshifted >> rot) | (xorshifted << ((np.uint32(32) - rot) & np.uint32(31)))
    )


@njit(cache=True)
def uniform01(state):
    """Uniform double in [0, 1) from one pcg32 draw."""
    return np.float64(pcg32_next(state)) * 2.3283064365386963e-10


def _splitmix64(x: int) -> int:
    x = (x + 0x9E3779B97F4A7C15) & _M64
    z = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _M64
    z = ((z ^ (z >> 27)) * 0x94D049BB133111EB) & _M64
    return z ^ (z >> 31)


def derive_subseed(master_seed: int, *parts) -> int:
    """Hash a master seed with run coordinates into an independent sub-seed.

    Floats are mixed via their IEEE-754 bit patterns so that e.g. f=0.1
    and f=0.2 never collide. Used to give every (network, run, f, ell)
    work unit its own generator stream.
    """
    h = _splitmix64(master_seed & _M64)
    for part in parts:
        if isinstance(part, float):
            bits = int(np.float64(part).view(np.uint64))
        else:
            bits = int(part) & _M64
        h = _splitmix64(h ^ bits)
    return h


class RandomSource:
    """One pcg32 stream; never shared between concurrent runs."""

    def __init__(self, seed: int):
        self.seed = seed
        initstate = _splitmix64(seed & _M64)
        initseq = _splitmix64((seed & _M64) ^ 0xDA3E39CB94B95BDB)
        # pcg32_srandom: absorb initstate after fixing the stream increment
        state = ((initseq << 1) | 1) & _M64
        state = (state * _PCG_MULT + (((initseq << 1) | 1) & _M64)) & _M64
        state = (state + initstate) & _M64
        state = (state * _PCG_MULT + (((initseq << 1) | 1) & _M64)) & _M64
        self._state = np.array([state, ((initseq << 1) | 1) & _M64], dtype=np.uint64)

    @property
    def state(self) -> np.ndarray:
        """Raw [state, inc] array, for handing to compiled kernels."""
        return self._state

    def uniform(self) -> float:
        return float(uniform01(self._state))


def sample_unit_linear(rng: RandomSource) -> float:
    """Draw from density 2(1-x) on [0,1] by inverting its CDF 2x - x^2."""
    u = rng.uniform()
    return 1.0 - math.sqrt(1.0 - u)


def bernoulli(p: float, rng: RandomSource) -> bool:
    if not 0.0 <= p <= 1.0:
        raise InvalidParameterError(f"bernoulli probability must be in [0,1], got {p}")
    return rng.uniform() < p


def weighted_choice(weights, rng: RandomSource):
    """Pick an index with probability proportional to its weight.

    Returns None when every weight is zero so the caller can handle the
    degenerate case explicitly (e.g. an all-zero-quality feed).
    """
    if len(weights) == 0:
        raise InvalidParameterError("weighted_choice requires at least one weight")
    total = 0.0
    for w in weights:
        if w < 0:
            raise InvalidParameterError(f"weights must be non-negative, got {w}")
        total += w
    if total == 0.0:
        return None
    r = rng.uniform() * total
    acc = 0.0
    for i, w in enumerate(weights):
        acc += w
        if r < acc:
            return i
    return len(weights) - 1  # guard against float round-off on the last bin
