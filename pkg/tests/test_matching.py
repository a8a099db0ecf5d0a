import itertools
import math

import numpy as np
import pytest

from prepsel.geometry import MEMORY, PREPARATION, BlockParams, build_block
from prepsel.matching import (
    assign_weights,
    decode_class_weights,
    logical_gap,
    matching_instance,
    min_weight_correction,
    surviving_distance,
)
from prepsel.noise import ErrorModel, VisibleInfo, sample_configuration, extract_visible

from conftest import brute_force_minima, empty_visible, syndrome_of


def test_weight_unit_examples(prep44):
    vis = empty_visible(prep44)
    w = assign_weights(prep44, vis, ErrorModel(0.0108, 0.0))
    assert w.w_unit == pytest.approx(math.log(0.9892 / 0.0108), abs=1e-12)
    assert w.w_unit == pytest.approx(4.5175, abs=1e-3)
    assert not w.degenerate
    assert np.all(w.w_full == 1.0)

    w_half = assign_weights(prep44, vis, ErrorModel(0.5, 0.0))
    assert w_half.w_unit == 0.0
    assert w_half.degenerate


def test_radial_alpha_zero_equals_unit(prep44):
    vis = empty_visible(prep44)
    w0 = assign_weights(prep44, vis, ErrorModel(0.01, 0.0))
    wr = assign_weights(prep44, vis, ErrorModel(0.01, 0.0), radial={"alpha": 0.0})
    assert np.array_equal(w0.w_full, wr.w_full)
    with pytest.raises(ValueError):
        assign_weights(prep44, vis, ErrorModel(0.01, 0.0), radial={"alpha": -1.0})


def test_radial_rejected_for_memory(mem22):
    vis = empty_visible(mem22)
    with pytest.raises(ValueError):
        assign_weights(mem22, vis, ErrorModel(0.01, 0.0), radial={"alpha": 0.1})


def test_erased_edges_zero_weight(prep44):
    vis = empty_visible(prep44)
    vis.erased[3] = True
    vis.erased[100] = True
    w = assign_weights(prep44, vis, ErrorModel(0.01, 0.1))
    assert w.w_full[3] == 0.0 and w.w_full[100] == 0.0
    assert w.w_full.sum() == prep44.n_edges - 2


@pytest.mark.parametrize("kind", [PREPARATION, MEMORY])
def test_oracle_equivalence_exhaustive(kind):
    """Class-constrained decode weights equal brute-force minima on L=2."""
    graphs = build_block(BlockParams(L=2, depth=2, kind=kind))
    rng = np.random.default_rng(17)
    for rep in range(8):
        erased = rng.random(graphs.n_edges) < (0.0 if rep == 0 else 0.3)
        vis = empty_visible(graphs)
        vis.erased[:] = erased
        w = assign_weights(graphs, vis, ErrorModel(0.01, 0.3))
        per = graphs.split_edge_mask(w.w_full)
        for gid in graphs.membranes:
            g = graphs.graph(gid)
            table = brute_force_minima(g, per[gid])
            for nsub in (0, 1, 2):
                for combo in itertools.combinations(range(g.n_edges), nsub):
                    sel = np.zeros(g.n_edges, dtype=bool)
                    sel[list(combo)] = True
                    lit = syndrome_of(g, sel)
                    w0, w1 = decode_class_weights(g, w.w_merged[gid], lit)
                    assert w0 == pytest.approx(table[(tuple(lit), 0)], abs=1e-9)
                    assert w1 == pytest.approx(table[(tuple(lit), 1)], abs=1e-9)


def test_min_weight_correction_contract(prep44):
    rng = np.random.default_rng(5)
    model = ErrorModel(0.08, 0.05)
    for trial in range(25):
        cfg = sample_configuration(prep44, model, trial)
        vis = extract_visible(prep44, cfg)
        w = assign_weights(prep44, vis, model)
        per_w = prep44.split_edge_mask(w.w_full)
        for gid in prep44.membranes:
            g = prep44.graph(gid)
            lit = vis.lit_ids(gid)
            w0, w1 = decode_class_weights(g, w.w_merged[gid], lit)
            for cls, expect in ((0, w0), (1, w1)):
                corr = min_weight_correction(g, lit, w.w_merged[gid], per_w[gid], cls)
                sel = np.zeros(g.n_edges, dtype=bool)
                sel[corr.edges] = True
                assert sorted(syndrome_of(g, sel)) == sorted(lit)
                assert int(np.count_nonzero(sel & g.edge_cut) % 2) == cls
                assert corr.total_weight == pytest.approx(expect, abs=1e-9)
                assert per_w[gid][sel].sum() == pytest.approx(expect, abs=1e-9)


def test_empty_syndrome_corrections(prep88):
    vis = empty_visible(prep88)
    w = assign_weights(prep88, vis, ErrorModel(0.01, 0.0))
    per_w = prep88.split_edge_mask(w.w_full)
    g = prep88.primal
    c0 = min_weight_correction(g, np.empty(0, dtype=np.int64), w.w_merged["primal"], per_w["primal"], 0)
    assert len(c0.edges) == 0 and c0.total_weight == 0.0
    c1 = min_weight_correction(g, np.empty(0, dtype=np.int64), w.w_merged["primal"], per_w["primal"], 1)
    assert c1.total_weight == pytest.approx(2.0)  # shortest boundary-to-boundary path


def test_gap_no_error_and_bounds(prep88):
    vis = empty_visible(prep88)
    w = assign_weights(prep88, vis, ErrorModel(0.01, 0.0))
    gr = logical_gap(prep88, vis, w)
    for gid in prep88.membranes:
        comp = gr.components[gid]
        assert comp.abs_gap == pytest.approx(2.0)
        assert comp.min_class == 0 and not comp.tie
    # random configurations: gaps stay in {0, 1, 2} with unit weights
    model = ErrorModel(0.02, 0.0)
    for trial in range(40):
        cfg = sample_configuration(prep88, model, 1000 + trial)
        vis = extract_visible(prep88, cfg)
        gr = logical_gap(prep88, vis, w)
        for gid in prep88.membranes:
            assert gr.components[gid].abs_gap in (0.0, 1.0, 2.0)


def test_gap_fully_erased(prep44):
    vis = empty_visible(prep44)
    vis.erased[:] = True
    w = assign_weights(prep44, vis, ErrorModel(0.01, 0.9))
    gr = logical_gap(prep44, vis, w)
    for gid in prep44.membranes:
        assert gr.components[gid].abs_gap == 0.0
        assert gr.components[gid].tie


def test_weight_scaling_invariance(prep44):
    model = ErrorModel(0.06, 0.0)
    cfg = sample_configuration(prep44, model, 9)
    vis = extract_visible(prep44, cfg)
    w = assign_weights(prep44, vis, model)
    for gid in prep44.membranes:
        g = prep44.graph(gid)
        lit = vis.lit_ids(gid)
        w0, w1 = decode_class_weights(g, w.w_merged[gid], lit)
        s0, s1 = decode_class_weights(g, 3.5 * w.w_merged[gid], lit)
        assert s0 == pytest.approx(3.5 * w0) and s1 == pytest.approx(3.5 * w1)


def test_surviving_distance(prep88, prep44):
    g = prep88.primal
    none = np.zeros(g.n_edges, dtype=bool)
    sd = surviving_distance(g, none, c=0.0)
    assert sd.d == 2.0 and sd.q == 2.0 and sd.m >= 1
    sd_c = surviving_distance(g, none, c=0.5)
    assert sd_c.q < sd.q  # multiplicity > 1 through the pinch column

    # a spanning erased path kills the distance
    g4 = prep44.primal
    from collections import deque

    adj = [[] for _ in range(g4.n_nodes)]
    for e in range(g4.n_edges):
        adj[g4.edges_u[e]].append((g4.edges_v[e], e))
        adj[g4.edges_v[e]].append((g4.edges_u[e], e))
    pred = {g4.b1: None}
    q = deque([g4.b1])
    while q:
        u = q.popleft()
        for v, e in adj[u]:
            if v not in pred:
                pred[v] = (u, e)
                q.append(v)
    erased = np.zeros(g4.n_edges, dtype=bool)
    node = g4.b2
    while pred[node] is not None:
        u, e = pred[node]
        erased[e] = True
        node = u
    sd0 = surviving_distance(g4, erased, c=1.0)
    assert sd0.d == 0.0 and sd0.m == 1 and sd0.q == 0.0


def test_surviving_multiplicity_oracle():
    """Path counts match exhaustive enumeration on a small block."""
    graphs = build_block(BlockParams(L=3, depth=3, kind=PREPARATION))
    g = graphs.primal
    rng = np.random.default_rng(2)

    def exhaustive(erased_mask):
        # contract erased clusters, then count shortest paths by DFS
        parent = list(range(g.n_nodes))

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        merged_erased = set()
        for e in np.flatnonzero(erased_mask):
            merged_erased.add(g.edge_group[e])
        for me in merged_erased:
            ra, rb = find(int(g.merged_u[me])), find(int(g.merged_v[me]))
            if ra != rb:
                parent[ra] = rb
        adj = {}
        for me in range(len(g.merged_u)):
            if me in merged_erased:
                continue
            ra, rb = find(int(g.merged_u[me])), find(int(g.merged_v[me]))
            if ra == rb:
                continue
            adj.setdefault(ra, []).append(rb)
            adj.setdefault(rb, []).append(ra)
        s, t = find(g.b1), find(g.b2)
        if s == t:
            return 0, 1
        # BFS distances then DFS count
        from collections import deque

        dist = {s: 0}
        q = deque([s])
        while q:
            u = q.popleft()
            for v in adj.get(u, []):
                if v not in dist:
                    dist[v] = dist[u] + 1
                    q.append(v)
        d = dist[t]

        def count(u, depth):
            if depth == d:
                return 1 if u == t else 0
            total = 0
            for v in adj.get(u, []):
                if dist.get(v, -1) == depth + 1:
                    total += count(v, depth + 1)
            return total

        return d, count(s, 0)

    for trial in range(15):
        erased = rng.random(g.n_edges) < 0.15
        sd = surviving_distance(g, erased, c=1.0)
        d_ref, m_ref = exhaustive(erased)
        assert sd.d == d_ref
        assert sd.m == m_ref
        assert sd.q == pytest.approx(d_ref - math.log(max(m_ref, 1)))


def test_matching_instance_dump(prep44):
    model = ErrorModel(0.05, 0.0)
    cfg = sample_configuration(prep44, model, 3)
    vis = extract_visible(prep44, cfg)
    w = assign_weights(prep44, vis, model)
    g = prep44.primal
    doc = matching_instance(g, w.w_merged["primal"], vis.lit_ids("primal"))
    assert doc["graph_id"] == "primal"
    assert {inst["class"] for inst in doc["instances"]} == {0, 1}
    for inst in doc["instances"]:
        k = len(inst["nodes"])
        assert len(inst["pairwise_weights"]) == k
        assert all(len(row) == k for row in inst["pairwise_weights"])
