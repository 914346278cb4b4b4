import numpy as np
import pytest

from frictionsim.netgen import Network


def net_from_edges(n, edges):
    net = Network.empty(n)
    for u, v in edges:
        net.add_edge(u, v)
    return net


@pytest.fixture
def line_network():
    """0 follows 1, 1 follows 2: content flows 2 -> 1 -> 0."""
    return net_from_edges(3, [(0, 1), (1, 2)])


def brute_force_clustering(net) -> float:
    """Independent oracle: count closed neighbor pairs per node."""
    n = net.n
    adj = [set() for _ in range(n)]
    for u in range(n):
        for v in net.out_edges[u]:
            adj[u].add(v)
            adj[v].add(u)
    total = 0.0
    for v in range(n):
        neigh = sorted(adj[v])
        d = len(neigh)
        if d < 2:
            continue
        closed = 0
        pairs = 0
        for i in range(d):
            for j in range(i + 1, d):
                pairs += 1
                if neigh[j] in adj[neigh[i]]:
                    closed += 1
        total += closed / pairs
    return total / n


def brute_force_tau_b(x, y):
    """O(n^2) pair-enumeration Kendall tau-b oracle."""
    n = len(x)
    concordant = discordant = ties_x = ties_y = 0
    for i in range(n):
        for j in range(i + 1, n):
            dx = x[i] - x[j]
            dy = y[i] - y[j]
            if dx == 0 and dy == 0:
                ties_x += 1
                ties_y += 1
            elif dx == 0:
                ties_x += 1
            elif dy == 0:
                ties_y += 1
            elif (dx > 0) == (dy > 0):
                concordant += 1
            else:
                discordant += 1
    n0 = n * (n - 1) // 2
    denom = np.sqrt(float(n0 - ties_x)) * np.sqrt(float(n0 - ties_y))
    if denom == 0:
        return None
    return (concordant - discordant) / denom
