"""Directed follower-network generation.

Networks grow in two phases: directed preferential attachment from a
fully connected seed, then triadic closure (follow a friend of a
friend) until the undirected clustering coefficient reaches its target.
Edges point follower -> friend; content travels the other way.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import GenerationError, InvalidParameterError
from .sampling import RandomSource

CLUSTERING_SLACK = 0.02  # acceptable overshoot above the closure target


@dataclass
class Network:
    """Static directed follower graph.

    out_edges[u] lists the agents u follows (u's friends);
    in_edges[v] lists v's followers and is kept as the exact transpose.
    """

    n: int
    out_edges: list = field(default_factory=list)
    in_edges: list = field(default_factory=list)

    @classmethod
    def empty(cls, n: int) -> "Network":
        return cls(n=n, out_edges=[[] for _ in range(n)], in_edges=[[] for _ in range(n)])

    def add_edge(self, u: int, v: int) -> None:
        self.out_edges[u].append(v)
        self.in_edges[v].append(u)

    def has_edge(self, u: int, v: int) -> bool:
        return v in self.out_edges[u]

    def edge_count(self) -> int:
        return sum(len(targets) for targets in self.out_edges)

    def edge_list(self):
        return [(u, v) for u in range(self.n) for v in self.out_edges[u]]

    def followers_csr(self):
        """In-edges packed as (indptr, indices) for the simulation kernel."""
        indptr = np.zeros(self.n + 1, dtype=np.int64)
        for v in range(self.n):
            indptr[v + 1] = indptr[v] + len(self.in_edges[v])
        indices = np.empty(indptr[-1], dtype=np.int64)
        for v in range(self.n):
            indices[indptr[v]:indptr[v + 1]] = self.in_edges[v]
        return indptr, indices


def grow_preferential(n: int, m: int, rng: RandomSource) -> Network:
    """Grow a directed scale-free graph from an m-clique.

    Each new node follows m distinct existing nodes, chosen with
    probability proportional to (in-degree + 1); the +1 lets the first
    arrivals attach anywhere despite the all-zero in-degrees outside
    the seed clique.
    """
    if m < 1:
        raise InvalidParameterError(f"m must be >= 1, got {m}")
    if n < m:
        raise InvalidParameterError(f"need n >= m, got n={n}, m={m}")
    net = Network.empty(n)
    for u in range(m):
        for v in range(m):
            if u != v:
                net.add_edge(u, v)
    # weights[v] = in_degree(v) + 1 over existing nodes
    weights = np.zeros(n, dtype=np.float64)
    weights[:m] = m  # (m - 1) in-edges from the clique, plus smoothing
    for i in range(m, n):
        chosen = _weighted_sample_distinct(weights[:i], m, rng)
        for v in chosen:
            net.add_edge(i, v)
            weights[v] += 1.0
        weights[i] = 1.0
    return net


def _weighted_sample_distinct(weights: np.ndarray, k: int, rng: RandomSource):
    """k distinct indices, weighted without replacement."""
    w = weights.copy()
    cum = np.cumsum(w)
    chosen = []
    for _ in range(k):
        r = rng.uniform() * cum[-1]
        idx = int(np.searchsorted(cum, r, side="right"))
        idx = min(idx, len(w) - 1)
        chosen.append(idx)
        # zero out and rebuild the tail of the cumulative sum
        removed = w[idx]
        w[idx] = 0.0
        cum[idx:] -= removed
    return chosen


def _undirected_adjacency(net: Network):
    adj = [set() for _ in range(net.n)]
    for u in range(net.n):
        for v in net.out_edges[u]:
            adj[u].add(v)
            adj[v].add(u)
    return adj


def _local_clustering(adj, v) -> float:
    neighbors = adj[v]
    d = len(neighbors)
    if d < 2:
        return 0.0
    links = 0
    for u in neighbors:
        links += len(adj[u] & neighbors)
    # each undirected neighbor pair counted twice in the loop above
    return links / (d * (d - 1))


def undirected_clustering(net: Network) -> float:
    """Average local clustering of the undirected projection.

    Nodes with undirected degree < 2 contribute 0.
    """
    if net.n == 0:
        return 0.0
    adj = _undirected_adjacency(net)
    return sum(_local_clustering(adj, v) for v in range(net.n)) / net.n


def add_triadic_closure(net: Network, target_cc: float, rng: RandomSource) -> Network:
    """Close directed triads until clustering reaches target_cc.

    Repeatedly follow a random friend-of-a-friend: pick node u, a
    friend v of u, a friend w of v, and add u -> w when absent. The
    undirected clustering coefficient is maintained incrementally
    (exact), so the loop stops on the first edge that crosses the
    target.
    """
    if not 0.0 < target_cc < 1.0:
        raise InvalidParameterError(f"target_cc must be in (0,1), got {target_cc}")
    n = net.n
    adj = _undirected_adjacency(net)
    out_sets = [set(targets) for targets in net.out_edges]
    # per-node closed-pair ratio, summed; maintained under edge insertion
    local = [_local_clustering(adj, v) for v in range(n)]
    cc_sum = sum(local)
    if cc_sum / n >= target_cc:
        return net

    def _triangles(v):
        # 2 * triangle count through v
        return local[v] * len(adj[v]) * (len(adj[v]) - 1)

    candidates_exist = True
    while cc_sum / n < target_cc:
        progressed = False
        # bounded retry: a draw can land on an already-present edge
        for _ in range(20 * n):
            u = int(rng.uniform() * n)
            friends = net.out_edges[u]
            if not friends:
                continue
            v = friends[int(rng.uniform() * len(friends))]
            friends2 = net.out_edges[v]
            if not friends2:
                continue
            w = friends2[int(rng.uniform() * len(friends2))]
            if w == u or w in out_sets[u]:
                continue
            net.add_edge(u, w)
            out_sets[u].add(w)
            if w not in adj[u]:
                new_tri = adj[u] & adj[w]
                tri_u, tri_w = _triangles(u), _triangles(w)
                adj[u].add(w)
                adj[w].add(u)
                for x in new_tri:
                    tri_x = _triangles(x)
                    dx = len(adj[x])
                    cc_sum -= local[x]
                    local[x] = (tri_x + 2) / (dx * (dx - 1))
                    cc_sum += local[x]
                for node, tri in ((u, tri_u), (w, tri_w)):
                    d = len(adj[node])
                    cc_sum -= local[node]
                    local[node] = (
                        (tri + 2 * len(new_tri)) / (d * (d - 1)) if d >= 2 else 0.0
                    )
                    cc_sum += local[node]
            progressed = True
            break
        if not progressed:
            candidates_exist = False
            break
    achieved = cc_sum / n
    if not candidates_exist and achieved < target_cc:
        raise GenerationError(
            f"no closable triads left at clustering {achieved:.4f} "
            f"(target {target_cc})",
            achieved_cc=achieved,
        )
    return net


def generate(n: int, m: int, target_cc: float, seed: int) -> Network:
    """Full generation pipeline: preferential growth then triadic closure."""
    rng = RandomSource(seed)
    net = grow_preferential(n, m, rng)
    return add_triadic_closure(net, target_cc, rng)


def save_edge_list(net: Network, path) -> None:
    """Write `source,target` pairs (follower -> friend), 0-based ids."""
    with open(path, "w") as fh:
        fh.write("source,target\n")
        for u, v in net.edge_list():
            fh.write(f"{u},{v}\n")


def load_edge_list(path) -> Network:
    edges = []
    max_id = -1
    with open(path) as fh:
        header = fh.readline().strip()
        if header != "source,target":
            raise InvalidParameterError(f"unexpected edge-list header: {header!r}")
        for line in fh:
            line = line.strip()
            if not line:
                continue
            u_str, v_str = line.split(",")
            u, v = int(u_str), int(v_str)
            edges.append((u, v))
            max_id = max(max_id, u, v)
    net = Network.empty(max_id + 1)
    for u, v in edges:
        net.add_edge(u, v)
    return net
