"""Discrete-time information diffusion core.

State lives in flat numpy arrays (feeds, post attributes, exposure
flags) so the per-activation logic can run as compiled numba kernels;
the SimState wrapper exposes the same operations one call at a time
for inspection and testing.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from numba import njit

from .errors import InvalidParameterError
from .netgen import Network
from .sampling import RandomSource, uniform01


@dataclass
class SimParams:
    """Model constants plus the (f, ell) intervention pair.

    Defaults follow the reference configuration: 1000 agents, feeds of
    15 posts, a fair post/share coin, EMA smoothing 0.99 with halting
    threshold 1e-5, and clustering target 0.29.
    """

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

    def validate(self) -> None:
        for name in ("p", "f", "ell", "rho"):
            value = getattr(self, name)
            if not 0.0 <= value <= 1.0:
                raise InvalidParameterError(f"{name} must be in [0,1], got {value}")
        if self.epsilon <= 0:
            raise InvalidParameterError(f"epsilon must be > 0, got {self.epsilon}")
        if self.alpha < 1:
            raise InvalidParameterError(f"alpha must be >= 1, got {self.alpha}")
        if self.n < self.m or self.m < 1:
            raise InvalidParameterError(
                f"need n >= m >= 1, got n={self.n}, m={self.m}"
            )
        if not 0.0 < self.clustering_target < 1.0:
            raise InvalidParameterError(
                f"clustering_target must be in (0,1), got {self.clustering_target}"
            )


@dataclass(frozen=True)
class Post:
    """Read-only view of one post's registry record."""

    id: int
    quality: float
    engagement: float
    author: int
    created_step: int
    popularity: int


@njit(cache=True)
def _push_to_followers(indptr, indices, feeds, feed_len, sharer, post_id, alpha):
    for k in range(indptr[sharer], indptr[sharer + 1]):
        fol = indices[k]
        top = feed_len[fol]
        if top >= alpha:
            top = alpha - 1  # oldest entry falls off
        for j in range(top, 0, -1):
            feeds[fol, j] = feeds[fol, j - 1]
        feeds[fol, 0] = post_id
        if feed_len[fol] < alpha:
            feed_len[fol] += 1


@njit(cache=True)
def _try_share(indptr, indices, feeds, feed_len, post_q, post_e, post_pop,
               exposed, rng_state, agent, alpha, f, ell):
    if uniform01(rng_state) < f:
        exposed[agent] = True
        return
    length = feed_len[agent]
    if length == 0:
        return
    by_quality = False
    if exposed[agent] and uniform01(rng_state) < ell:
        by_quality = True
    total = 0.0
    for j in range(length):
        pid = feeds[agent, j]
        total += post_q[pid] if by_quality else post_e[pid]
    if total == 0.0:
        return  # nothing selectable; agent refrains entirely
    r = uniform01(rng_state) * total
    acc = 0.0
    selected = feeds[agent, length - 1]
    for j in range(length):
        pid = feeds[agent, j]
        acc += post_q[pid] if by_quality else post_e[pid]
        if r < acc:
            selected = pid
            break
    post_pop[selected] += 1
    _push_to_followers(indptr, indices, feeds, feed_len, agent, selected, alpha)


@njit(cache=True)
def _act(indptr, indices, feeds, feed_len, post_q, post_e, post_pop,
         post_author, post_step, n_posts, exposed, rng_state, agent,
         p, alpha, f, ell, step_no):
    if uniform01(rng_state) < p:
        pid = n_posts
        post_q[pid] = 1.0 - np.sqrt(1.0 - uniform01(rng_state))
        post_e[pid] = 1.0 - np.sqrt(1.0 - uniform01(rng_state))
        post_pop[pid] = 1
        post_author[pid] = agent
        post_step[pid] = step_no
        _push_to_followers(indptr, indices, feeds, feed_len, agent, pid, alpha)
        return n_posts + 1
    _try_share(indptr, indices, feeds, feed_len, post_q, post_e, post_pop,
               exposed, rng_state, agent, alpha, f, ell)
    return n_posts


@njit(cache=True)
def _step(indptr, indices, feeds, feed_len, post_q, post_e, post_pop,
          post_author, post_step, n_posts, exposed, rng_state, n,
          p, alpha, f, ell, step_no):
    for _ in range(n):
        agent = int(uniform01(rng_state) * n)
        n_posts = _act(indptr, indices, feeds, feed_len, post_q, post_e,
                       post_pop, post_author, post_step, n_posts, exposed,
                       rng_state, agent, p, alpha, f, ell, step_no)
    return n_posts


@njit(cache=True)
def _feed_quality_sum(feeds, feed_len, post_q, n):
    total = 0.0
    count = 0
    for i in range(n):
        for j in range(feed_len[i]):
            total += post_q[feeds[i, j]]
            count += 1
    return total, count


class SimState:
    """One run's mutable state: feeds, post registry, exposure flags."""

    def __init__(self, network: Network, params: SimParams, seed: int):
        params.validate()
        if network.n != params.n:
            raise InvalidParameterError(
                f"network has {network.n} agents, params expect {params.n}"
            )
        self.params = params
        self.network = network
        self.rng = RandomSource(seed)
        self.indptr, self.indices = network.followers_csr()
        n = params.n
        self.feeds = np.full((n, params.alpha), -1, dtype=np.int64)
        self.feed_len = np.zeros(n, dtype=np.int64)
        self.exposed = np.zeros(n, dtype=np.bool_)
        self.step_no = 0
        self.n_posts = 0
        self._capacity = max(4 * n, 1024)
        self.post_q = np.zeros(self._capacity, dtype=np.float64)
        self.post_e = np.zeros(self._capacity, dtype=np.float64)
        self.post_pop = np.zeros(self._capacity, dtype=np.int64)
        self.post_author = np.zeros(self._capacity, dtype=np.int64)
        self.post_step = np.zeros(self._capacity, dtype=np.int64)

    def _ensure_capacity(self, extra: int) -> None:
        needed = self.n_posts + extra
        if needed <= self._capacity:
            return
        while self._capacity < needed:
            self._capacity *= 2
        for name in ("post_q", "post_e", "post_pop", "post_author", "post_step"):
            old = getattr(self, name)
            grown = np.zeros(self._capacity, dtype=old.dtype)
            grown[: self.n_posts] = old[: self.n_posts]
            setattr(self, name, grown)

    def step(self) -> None:
        """Activate n agents uniformly with replacement, in sequence."""
        self._ensure_capacity(self.params.n)
        p = self.params
        self.step_no += 1
        self.n_posts = _step(
            self.indptr, self.indices, self.feeds, self.feed_len,
            self.post_q, self.post_e, self.post_pop, self.post_author,
            self.post_step, self.n_posts, self.exposed, self.rng.state,
            p.n, p.p, p.alpha, p.f, p.ell, self.step_no,
        )

    def act(self, agent: int) -> None:
        self._ensure_capacity(1)
        p = self.params
        self.n_posts = _act(
            self.indptr, self.indices, self.feeds, self.feed_len,
            self.post_q, self.post_e, self.post_pop, self.post_author,
            self.post_step, self.n_posts, self.exposed, self.rng.state,
            agent, p.p, p.alpha, p.f, p.ell, self.step_no,
        )

    def try_share(self, agent: int) -> None:
        p = self.params
        _try_share(
            self.indptr, self.indices, self.feeds, self.feed_len,
            self.post_q, self.post_e, self.post_pop, self.exposed,
            self.rng.state, agent, p.alpha, p.f, p.ell,
        )

    def push_to_followers(self, sharer: int, post_id: int) -> None:
        _push_to_followers(
            self.indptr, self.indices, self.feeds, self.feed_len,
            sharer, post_id, self.params.alpha,
        )

    def feed(self, agent: int):
        """Current feed entries for one agent, newest first."""
        return list(self.feeds[agent, : self.feed_len[agent]])

    def post(self, post_id: int) -> Post:
        if not 0 <= post_id < self.n_posts:
            raise InvalidParameterError(f"unknown post id {post_id}")
        return Post(
            id=post_id,
            quality=float(self.post_q[post_id]),
            engagement=float(self.post_e[post_id]),
            author=int(self.post_author[post_id]),
            created_step=int(self.post_step[post_id]),
            popularity=int(self.post_pop[post_id]),
        )

    @property
    def qualities(self) -> np.ndarray:
        return self.post_q[: self.n_posts]

    @property
    def engagements(self) -> np.ndarray:
        return self.post_e[: self.n_posts]

    @property
    def popularities(self) -> np.ndarray:
        return self.post_pop[: self.n_posts]
