"""Differential tests of the exact matching kernel."""

import itertools

import networkx as nx
import numpy as np
import pytest

from prepsel._blossom import (
    matching_weight,
    max_weight_matching_dense,
    min_weight_perfect_matching,
)


def brute_min_perfect(dist):
    n = dist.shape[0]
    best = np.inf
    for perm in _pairings(list(range(n))):
        best = min(best, sum(dist[a, b] for a, b in perm))
    return best


def _pairings(nodes):
    if not nodes:
        yield []
        return
    a = nodes[0]
    for k in range(1, len(nodes)):
        b = nodes[k]
        rest = nodes[1:k] + nodes[k + 1 :]
        for sub in _pairings(rest):
            yield [(a, b)] + sub


def nx_min_perfect_weight(dist):
    n = dist.shape[0]
    g = nx.Graph()
    g.add_nodes_from(range(n))
    for i in range(n):
        for j in range(i + 1, n):
            g.add_edge(i, j, weight=-dist[i, j])
    m = nx.max_weight_matching(g, maxcardinality=True)
    return sum(dist[min(i, j), max(i, j)] for i, j in m)


def _random_dist(rng, n, kind):
    if kind == 0:
        d = rng.random((n, n)) * 10
    elif kind == 1:
        d = rng.integers(0, 4, (n, n)).astype(float)  # heavy ties
    elif kind == 2:
        d = rng.integers(0, 2, (n, n)).astype(float)  # 0/1, erasure-like
    else:
        pts = rng.integers(0, 8, (n, 3))
        d = np.abs(pts[:, None, :] - pts[None, :, :]).sum(axis=2).astype(float)
    d = np.triu(d, 1)
    return d + d.T


def test_against_brute_force_small():
    rng = np.random.default_rng(7)
    for trial in range(300):
        n = int(rng.integers(1, 5)) * 2
        dist = _random_dist(rng, n, trial % 4)
        mate = min_weight_perfect_matching(dist)
        assert all(mate[mate[i]] == i and mate[i] != i for i in range(n))
        assert matching_weight(dist, mate) == pytest.approx(brute_min_perfect(dist), abs=1e-9)


def test_against_networkx_medium():
    rng = np.random.default_rng(11)
    for trial in range(120):
        n = int(rng.integers(3, 14)) * 2
        dist = _random_dist(rng, n, trial % 4)
        mate = min_weight_perfect_matching(dist)
        assert matching_weight(dist, mate) == pytest.approx(nx_min_perfect_weight(dist), abs=1e-7)


def test_max_weight_non_perfect():
    # without maxcardinality, only positive-gain edges are matched
    w = np.array([[0.0, 2, 1], [2, 0, 3], [1, 3, 0]])
    mate = max_weight_matching_dense(w, False)
    assert mate[1] == 2 and mate[2] == 1 and mate[0] == -1


def test_odd_count_rejected():
    with pytest.raises(ValueError):
        min_weight_perfect_matching(np.zeros((3, 3)))


def test_empty_instance():
    assert len(min_weight_perfect_matching(np.zeros((0, 0)))) == 0
