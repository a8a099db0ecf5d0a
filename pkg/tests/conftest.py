import numpy as np
import pytest

from prepsel.geometry import MEMORY, PREPARATION, BlockParams, build_block
from prepsel.noise import VisibleInfo


@pytest.fixture(scope="session")
def prep22():
    return build_block(BlockParams(L=2, depth=2, kind=PREPARATION))


@pytest.fixture(scope="session")
def mem22():
    return build_block(BlockParams(L=2, depth=2, kind=MEMORY))


@pytest.fixture(scope="session")
def prep44():
    return build_block(BlockParams(L=4, depth=4, kind=PREPARATION))


@pytest.fixture(scope="session")
def prep88():
    return build_block(BlockParams(L=8, depth=8, kind=PREPARATION))


def empty_visible(graphs) -> VisibleInfo:
    return VisibleInfo(
        syndrome={g: np.zeros(graphs.graph(g).n_real, dtype=bool) for g in graphs.membranes},
        erased=np.zeros(graphs.n_edges, dtype=bool),
    )


def brute_force_minima(g, w_full_graph):
    """Exhaustive minimum correction weight per (syndrome, class).

    Enumerates every edge subset of one graph; only feasible for L = 2
    blocks.  Returns {(lit tuple, class): weight}.
    """
    best = {}
    for bits in range(1 << g.n_edges):
        sel = np.array([(bits >> e) & 1 for e in range(g.n_edges)], dtype=bool)
        counts = np.zeros(g.n_nodes, dtype=np.int64)
        np.add.at(counts, g.edges_u[sel], 1)
        np.add.at(counts, g.edges_v[sel], 1)
        lit = tuple(np.flatnonzero(counts[: g.n_real] % 2))
        cls = int(np.count_nonzero(sel & g.edge_cut) % 2)
        wt = float(w_full_graph[sel].sum())
        key = (lit, cls)
        if key not in best or wt < best[key]:
            best[key] = wt
    return best


def syndrome_of(g, sel):
    counts = np.zeros(g.n_nodes, dtype=np.int64)
    np.add.at(counts, g.edges_u[sel], 1)
    np.add.at(counts, g.edges_v[sel], 1)
    return np.flatnonzero(counts[: g.n_real] % 2)
