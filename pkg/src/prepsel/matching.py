"""Weighted decoding core: weight assignment, class-constrained
minimum-weight corrections, logical gaps and surviving distances.

A correction for syndrome ``sigma`` with a fixed logical class is a
minimum T-join, where T is ``sigma`` plus the pseudosyndromes lit to fix
the chain parity at each boundary.  With nonnegative weights the minimum
T-join equals the minimum-weight perfect matching of T under the
shortest-path metric, solved exactly by the blossom kernel.  The logical
class of any T-join follows algebraically from the cut: it is the XOR of
the cut sides of the T vertices, so both class minima come from two small
matchings over one multi-source Dijkstra pass.
"""

from __future__ import annotations

import heapq
import math
from dataclasses import dataclass
from typing import Optional

import numpy as np
from numba import njit

from ._blossom import matching_weight, min_weight_perfect_matching
from .geometry import MEMORY, BlockGraphs, SyndromeGraph
from .noise import ErrorModel, VisibleInfo

TIE_TOL = 1e-9

INF = np.inf


@dataclass
class WeightAssignment:
    """Per-edge decode weights, normalized so uniform bulk weight is 1.

    ``w_full`` has one entry per block error edge; ``w_merged`` holds the
    per-graph minimum over parallel edges actually used by the decoder.
    ``w_unit`` is the unnormalized log-likelihood unit ln((1-p)/p), kept
    for reporting; ``degenerate`` flags p >= 1/2 where that unit is not
    positive.
    """

    w_full: np.ndarray
    w_merged: dict  # graph_id -> per-merged-edge weights
    w_unit: float
    degenerate: bool
    radial: Optional[dict] = None


def assign_weights(
    graphs: BlockGraphs,
    visible: VisibleInfo,
    model: ErrorModel,
    radial: Optional[dict] = None,
) -> WeightAssignment:
    """Weights: 0 on erased edges, 1 elsewhere; optionally divided by
    min(r, cutoff)^alpha when ``radial={"alpha": a, "cutoff": c?}``."""
    if radial is not None:
        alpha = float(radial["alpha"])
        if alpha < 0:
            raise ValueError(f"radial alpha must be >= 0, got {alpha}")
        cutoff = int(radial.get("cutoff") or math.ceil(3 * graphs.params.depth / 4))
        if graphs.params.kind == MEMORY:
            raise ValueError("radial weights need a preparation point")
    p = model.p_error
    if p <= 0.0:
        w_unit = INF
    elif p >= 1.0:
        w_unit = -INF
    else:
        w_unit = math.log((1.0 - p) / p)

    w_full = np.ones(graphs.n_edges, dtype=np.float64)
    if radial is not None:
        offset = 0
        for gid in graphs.membranes:
            g = graphs.graph(gid)
            r_eff = np.minimum(g.edge_radius, cutoff).astype(np.float64)
            w_full[offset : offset + g.n_edges] = 1.0 / r_eff**alpha
            offset += g.n_edges
    w_full[visible.erased] = 0.0

    w_merged = {}
    per_graph = graphs.split_edge_mask(w_full)
    for gid in graphs.membranes:
        g = graphs.graph(gid)
        wm = np.full(len(g.merged_u), INF, dtype=np.float64)
        np.minimum.at(wm, g.edge_group, per_graph[gid])
        w_merged[gid] = wm
    return WeightAssignment(
        w_full=w_full,
        w_merged=w_merged,
        w_unit=float(w_unit),
        degenerate=not (w_unit > 0),
        radial=dict(radial) if radial else None,
    )


@njit(cache=True)
def _dijkstra_rows(indptr, nbr, eid, w, sources, n_nodes):
    """Shortest-path distances from each source over the CSR graph.

    Every run stops once all sources are settled (the matching metric only
    needs source-to-source distances); when the weights are all 0 or 1 a
    deque-based 0-1 BFS replaces the heap.
    """
    k = len(sources)
    out = np.full((k, n_nodes), np.inf, dtype=np.float64)
    zero_one = True
    for e in range(len(w)):
        if w[e] != 0.0 and w[e] != 1.0:
            zero_one = False
            break
    is_target = np.zeros(n_nodes, dtype=np.bool_)
    for s in range(k):
        is_target[sources[s]] = True
    settled = np.empty(n_nodes, dtype=np.bool_)

    if zero_one:
        cap = 2 * len(nbr) + 4
        dq = np.empty(cap, dtype=np.int64)
        for s in range(k):
            dist = out[s]
            settled[:] = False
            dist[sources[s]] = 0.0
            head = cap // 2
            tail = head
            dq[tail] = sources[s]
            tail += 1
            remaining = k
            while head < tail:
                u = dq[head]
                head += 1
                if settled[u]:
                    continue
                settled[u] = True
                if is_target[u]:
                    remaining -= 1
                    if remaining == 0:
                        break
                du = dist[u]
                for ptr in range(indptr[u], indptr[u + 1]):
                    v = nbr[ptr]
                    nd = du + w[eid[ptr]]
                    if nd < dist[v]:
                        dist[v] = nd
                        if w[eid[ptr]] == 0.0:
                            head -= 1
                            dq[head] = v
                        else:
                            dq[tail] = v
                            tail += 1
        return out

    heap_d = np.empty(2 * len(nbr) + 4, dtype=np.float64)
    heap_v = np.empty(2 * len(nbr) + 4, dtype=np.int64)
    for s in range(k):
        dist = out[s]
        settled[:] = False
        dist[sources[s]] = 0.0
        heap_d[0] = 0.0
        heap_v[0] = sources[s]
        hn = 1
        remaining = k
        while hn > 0:
            d = heap_d[0]
            u = heap_v[0]
            hn -= 1
            heap_d[0] = heap_d[hn]
            heap_v[0] = heap_v[hn]
            i = 0
            while True:
                l = 2 * i + 1
                r = l + 1
                m = i
                if l < hn and heap_d[l] < heap_d[m]:
                    m = l
                if r < hn and heap_d[r] < heap_d[m]:
                    m = r
                if m == i:
                    break
                heap_d[i], heap_d[m] = heap_d[m], heap_d[i]
                heap_v[i], heap_v[m] = heap_v[m], heap_v[i]
                i = m
            if d > dist[u] or settled[u]:
                continue
            settled[u] = True
            if is_target[u]:
                remaining -= 1
                if remaining == 0:
                    break
            for ptr in range(indptr[u], indptr[u + 1]):
                v = nbr[ptr]
                nd = d + w[eid[ptr]]
                if nd < dist[v]:
                    dist[v] = nd
                    heap_d[hn] = nd
                    heap_v[hn] = v
                    i = hn
                    hn += 1
                    while i > 0:
                        par = (i - 1) // 2
                        if heap_d[par] <= heap_d[i]:
                            break
                        heap_d[i], heap_d[par] = heap_d[par], heap_d[i]
                        heap_v[i], heap_v[par] = heap_v[par], heap_v[i]
                        i = par
    return out


def _class_t_sets(g: SyndromeGraph, lit: np.ndarray):
    """The two defect sets whose T-joins realize the two logical classes."""
    lit = np.asarray(lit, dtype=np.int64)
    if len(lit) % 2 == 0:
        t_a = lit
        t_b = np.concatenate([lit, [g.b1, g.b2]])
    else:
        t_a = np.concatenate([lit, [g.b2]])
        t_b = np.concatenate([lit, [g.b1]])
    return t_a, t_b


def _t_class(g: SyndromeGraph, t_set: np.ndarray) -> int:
    return int(np.bitwise_xor.reduce(g.side[t_set]) if len(t_set) else 0)


def decode_class_weights(g: SyndromeGraph, w_merged: np.ndarray, lit: np.ndarray):
    """Minimum correction weight for both logical classes.

    Returns (w_class0, w_class1).  One multi-source Dijkstra serves both
    class-constrained matchings.
    """
    t_a, t_b = _class_t_sets(g, lit)
    sources = np.concatenate([np.asarray(lit, dtype=np.int64), [g.b1, g.b2]])
    rows = _dijkstra_rows(g.csr_indptr, g.csr_nbr, g.csr_eid, w_merged, sources, g.n_nodes)
    k = len(lit)

    def t_join_weight(t_set):
        if len(t_set) == 0:
            return 0.0
        idx = np.empty(len(t_set), dtype=np.int64)
        idx[:k] = np.arange(k)
        for extra in range(len(t_set) - k):
            idx[k + extra] = k + (t_set[k + extra] - g.b1)
        metric = rows[idx][:, t_set]
        metric = np.minimum(metric, metric.T)
        mate = min_weight_perfect_matching(metric)
        return matching_weight(metric, mate)

    w_a = t_join_weight(t_a)
    w_b = t_join_weight(t_b)
    if _t_class(g, t_a) == 0:
        return w_a, w_b
    return w_b, w_a


@dataclass
class GapComponent:
    w_class0: float
    w_class1: float
    abs_gap: float
    min_class: int
    tie: bool


@dataclass
class GapResult:
    components: dict  # graph_id -> GapComponent

    def abs_gaps(self) -> tuple:
        return tuple(self.components[gid].abs_gap for gid in ("primal", "dual"))


def _gap_component(w0: float, w1: float) -> GapComponent:
    gap = abs(w1 - w0)
    tie = gap <= TIE_TOL
    if tie:
        min_class = 0
        gap = 0.0
    else:
        min_class = 0 if w0 < w1 else 1
    return GapComponent(w_class0=w0, w_class1=w1, abs_gap=gap, min_class=min_class, tie=tie)


def logical_gap(graphs: BlockGraphs, visible: VisibleInfo, weights: WeightAssignment) -> GapResult:
    """Class-constrained minimum weights and the unsigned gap per membrane."""
    comps = {}
    for gid in graphs.membranes:
        g = graphs.graph(gid)
        w0, w1 = decode_class_weights(g, weights.w_merged[gid], visible.lit_ids(gid))
        comps[gid] = _gap_component(w0, w1)
    return GapResult(components=comps)


@dataclass
class Correction:
    edges: np.ndarray  # full edge ids within the graph
    total_weight: float


def min_weight_correction(
    g: SyndromeGraph,
    visible_lit: np.ndarray,
    w_merged: np.ndarray,
    w_full_graph: np.ndarray,
    class_parity: int,
) -> Correction:
    """A minimum-weight edge set with the given syndrome and logical class.

    Reconstructs the matched shortest paths explicitly; parallel edges are
    realized by their cheapest member.
    """
    t_a, t_b = _class_t_sets(g, visible_lit)
    t_set = t_a if _t_class(g, t_a) == class_parity else t_b
    if len(t_set) == 0:
        return Correction(edges=np.empty(0, dtype=np.int64), total_weight=0.0)

    # plain python Dijkstra with predecessors (reconstruction path only)
    adj = g.csr_indptr, g.csr_nbr, g.csr_eid
    merged_times = np.zeros(len(g.merged_u), dtype=np.int64)
    dist_rows = {}
    pred_rows = {}
    for s in set(int(x) for x in t_set):
        dist = np.full(g.n_nodes, INF)
        pred = np.full(g.n_nodes, -1, dtype=np.int64)
        prede = np.full(g.n_nodes, -1, dtype=np.int64)
        dist[s] = 0.0
        heap = [(0.0, s)]
        while heap:
            d, u = heapq.heappop(heap)
            if d > dist[u]:
                continue
            for ptr in range(adj[0][u], adj[0][u + 1]):
                v = adj[1][ptr]
                e = adj[2][ptr]
                nd = d + w_merged[e]
                if nd < dist[v] - 1e-15:
                    dist[v] = nd
                    pred[v] = u
                    prede[v] = e
                    heapq.heappush(heap, (nd, v))
        dist_rows[s] = dist
        pred_rows[s] = (pred, prede)

    metric = np.empty((len(t_set), len(t_set)))
    for a, u in enumerate(t_set):
        for b, v in enumerate(t_set):
            metric[a, b] = dist_rows[int(u)][v]
    metric = np.minimum(metric, metric.T)
    mate = min_weight_perfect_matching(metric)
    for a in range(len(t_set)):
        b = mate[a]
        if b < a:
            continue
        u, v = int(t_set[a]), int(t_set[b])
        # walk the shortest path from whichever endpoint's tree is usable
        su = u if dist_rows[u][v] <= dist_rows[v][u] else v
        tv = v if su == u else u
        pred, prede = pred_rows[su]
        node = tv
        while node != su:
            merged_times[prede[node]] += 1
            node = pred[node]
    chosen = np.flatnonzero(merged_times % 2 == 1)

    # pick the cheapest full-edge representative of each merged edge
    order = np.lexsort((np.arange(g.n_edges), w_full_graph))
    rep = np.full(len(g.merged_u), -1, dtype=np.int64)
    for e in order[::-1]:
        rep[g.edge_group[e]] = e
    edges = rep[chosen]
    total = float(np.sum(w_merged[chosen]))
    return Correction(edges=np.sort(edges), total_weight=total)


@dataclass
class SurvivingDistanceResult:
    d: float
    m: int
    q: float  # d - c * ln(m)


def surviving_distance(g: SyndromeGraph, erased_graph_mask: np.ndarray, c: float = 0.0) -> SurvivingDistanceResult:
    """Shortest boundary-to-boundary cost with erased edges free, plus the
    multiplicity of shortest paths after contracting erased clusters."""
    nm = len(g.merged_u)
    merged_erased = np.zeros(nm, dtype=bool)
    if erased_graph_mask.any():
        merged_erased[g.edge_group[np.flatnonzero(erased_graph_mask)]] = True

    parent = np.arange(g.n_nodes, dtype=np.int64)

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for e in np.flatnonzero(merged_erased):
        ra, rb = find(g.merged_u[e]), find(g.merged_v[e])
        if ra != rb:
            parent[ra] = rb

    r1, r2 = find(g.b1), find(g.b2)
    if r1 == r2:
        return SurvivingDistanceResult(d=0.0, m=1, q=0.0)

    # contracted unit-cost multigraph over cluster roots
    adj = {}
    for e in np.flatnonzero(~merged_erased):
        ra, rb = find(g.merged_u[e]), find(g.merged_v[e])
        if ra == rb:
            continue
        adj.setdefault(ra, {}).setdefault(rb, 0)
        adj.setdefault(rb, {}).setdefault(ra, 0)
        adj[ra][rb] += 1
        adj[rb][ra] += 1

    from collections import deque

    dist = {r1: 0}
    count = {r1: 1}
    q = deque([r1])
    while q:
        u = q.popleft()
        if u == r2:
            break
        for v, mult in adj.get(u, {}).items():
            if v not in dist:
                dist[v] = dist[u] + 1
                count[v] = 0
                q.append(v)
            if dist[v] == dist[u] + 1:
                count[v] += count[u] * mult
    d = float(dist[r2])
    m = int(count[r2])
    return SurvivingDistanceResult(d=d, m=m, q=d - c * math.log(m))


def matching_instance(g: SyndromeGraph, w_merged: np.ndarray, lit: np.ndarray) -> dict:
    """Dump both class-constrained matching instances (lit nodes and the
    pairwise path weights) for cross-checking with external solvers."""
    t_a, t_b = _class_t_sets(g, lit)
    sources = np.concatenate([np.asarray(lit, dtype=np.int64), [g.b1, g.b2]])
    rows = _dijkstra_rows(g.csr_indptr, g.csr_nbr, g.csr_eid, w_merged, sources, g.n_nodes)
    doc = {"graph_id": g.graph_id, "lit": [int(x) for x in lit], "instances": []}
    for t_set in (t_a, t_b):
        idx = [int(np.where(sources == node)[0][0]) for node in t_set]
        metric = rows[np.asarray(idx, dtype=np.int64)][:, t_set] if len(t_set) else np.zeros((0, 0))
        doc["instances"].append(
            {
                "class": _t_class(g, t_set),
                "nodes": [int(x) for x in t_set],
                "pairwise_weights": [[float(x) for x in row] for row in metric],
            }
        )
    return doc
