"""Syndrome-graph construction for magic-state preparation and memory blocks.

A block is a pair of decoding graphs (primal and dual) on a cuboid
space-time lattice.  Coordinates are stored doubled so that every vertex,
edge midpoint and the preparation point are integer triples:

* primal checks sit at ``(2i, 2j, 2t)`` and dual checks at
  ``(2i+1, 2j+1, 2t)`` for ``i, j in 0..L-2`` and ``t in 1..depth``;
* space-like edges join nearest same-graph neighbours within a time
  slice, time-like edges join consecutive slices;
* each graph has exactly two pseudosyndrome vertices absorbing chains at
  its pair of side walls (primal: x walls, dual: y walls).

For preparation blocks the input face (t = 1) is split by the two
diagonals through the preparation point into four triangular regions.
Checks in the two x-adjacent triangles get a dangling "below" edge to the
primal pseudosyndrome on their side, checks in the y-adjacent triangles
likewise for the dual graph.  The two checks flanking the preparation
point along each graph's crossing axis additionally carry a pinch edge to
the *opposite* pseudosyndrome, which creates the weight-2 undetectable
boundary-to-boundary paths through the preparation region (the block's
fault distance).  No error edge exists at the preparation point itself:
the two space edges whose midpoint would coincide with it are dropped.

Graphs are immutable after construction and safe to share across workers.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

PREPARATION = "preparation"
MEMORY = "memory"

# edge kinds
SPACE = 0
TIME = 1
WALL = 2
BELOW = 3
PINCH = 4

_KIND_NAMES = {SPACE: "space", TIME: "time", WALL: "wall", BELOW: "below", PINCH: "pinch"}

# Doubled-coordinate L-inf radius of the pinch ring: input-face checks
# within this distance of the preparation point are truncated by the
# preparation measurement, leaving singly-checked outcomes that absorb
# chains at either boundary.  The microscopic truncation around the
# preparation measurement is not recoverable from the block parameters
# alone; this radius is the one free constant of the construction, fixed
# once so the unselected encoding error rate of the L = depth = 8 block
# reproduces the order(10 p) fragility of the preparation region.  It
# does not affect distances, the membrane cut, memory blocks or the bulk
# threshold, and it keeps every class ambiguity it creates visible as a
# lit check next to the preparation point.
PINCH_RADIUS = 2


@dataclass(frozen=True)
class BlockParams:
    """Block parameters: side length L (the code distance) and depth."""

    L: int
    depth: int
    kind: str = PREPARATION

    def __post_init__(self):
        if self.L < 2:
            raise ValueError(f"L must be >= 2, got {self.L}")
        if self.depth < 2:
            raise ValueError(f"depth must be >= 2, got {self.depth}")
        if self.kind not in (PREPARATION, MEMORY):
            raise ValueError(f"unknown block kind {self.kind!r}")


@dataclass
class SyndromeGraph:
    """One decoding graph: real checks, two pseudosyndromes, error edges.

    Vertex ids ``0..n_real-1`` are real checks; ``n_real`` is B1 and
    ``n_real+1`` is B2.  ``side`` gives the membrane-cut side of every
    vertex (B1 side 0, B2 side 1); an edge belongs to the cut iff its
    endpoints lie on opposite sides.
    """

    graph_id: str
    n_real: int
    coords: np.ndarray = field(repr=False)  # (n_real, 3) doubled ints
    vertex_radius: np.ndarray = field(repr=False)  # (n_real,)
    edges_u: np.ndarray = field(repr=False)
    edges_v: np.ndarray = field(repr=False)
    edge_coords: np.ndarray = field(repr=False)  # (n_edges, 3)
    edge_radius: np.ndarray = field(repr=False)
    edge_kind: np.ndarray = field(repr=False)
    side: np.ndarray = field(repr=False)  # (n_real + 2,) int8
    prep_point: Optional[tuple] = None

    # merged-parallel decode structure, filled by the builder
    merged_u: np.ndarray = field(default=None, repr=False)
    merged_v: np.ndarray = field(default=None, repr=False)
    edge_group: np.ndarray = field(default=None, repr=False)  # full -> merged
    csr_indptr: np.ndarray = field(default=None, repr=False)
    csr_nbr: np.ndarray = field(default=None, repr=False)
    csr_eid: np.ndarray = field(default=None, repr=False)

    @property
    def n_nodes(self) -> int:
        return self.n_real + 2

    @property
    def b1(self) -> int:
        return self.n_real

    @property
    def b2(self) -> int:
        return self.n_real + 1

    @property
    def n_edges(self) -> int:
        return len(self.edges_u)

    @property
    def edge_cut(self) -> np.ndarray:
        return self.side[self.edges_u] != self.side[self.edges_v]

    def annulus_counts(self, max_radius: int) -> np.ndarray:
        """Number of real checks per radius annulus, index 0..max_radius."""
        return np.bincount(self.vertex_radius, minlength=max_radius + 1)[: max_radius + 1]

    def to_dict(self) -> dict:
        return {
            "graph_id": self.graph_id,
            "vertices": [
                {"id": int(i), "coord": [int(c) for c in self.coords[i]], "radius": int(self.vertex_radius[i])}
                for i in range(self.n_real)
            ],
            "pseudosyndromes": [
                {"id": int(self.b1), "name": "B1"},
                {"id": int(self.b2), "name": "B2"},
            ],
            "edges": [
                {
                    "id": int(e),
                    "u": int(self.edges_u[e]),
                    "v": int(self.edges_v[e]),
                    "coord": [int(c) for c in self.edge_coords[e]],
                    "radius": int(self.edge_radius[e]),
                    "kind": _KIND_NAMES[int(self.edge_kind[e])],
                    "cut": bool(self.edge_cut[e]),
                }
                for e in range(self.n_edges)
            ],
            "prep_point": list(self.prep_point) if self.prep_point else None,
        }


@dataclass
class BlockGraphs:
    """A built block: primal and dual graphs plus the membrane list."""

    params: BlockParams
    primal: SyndromeGraph
    dual: SyndromeGraph

    @property
    def membranes(self) -> tuple:
        return ("primal", "dual")

    @property
    def n_edges(self) -> int:
        """Total number of error locations across both graphs."""
        return self.primal.n_edges + self.dual.n_edges

    def graph(self, graph_id: str) -> SyndromeGraph:
        if graph_id == "primal":
            return self.primal
        if graph_id == "dual":
            return self.dual
        raise KeyError(graph_id)

    def split_edge_mask(self, mask: np.ndarray) -> dict:
        """Split a block-level edge mask into per-graph masks."""
        ep = self.primal.n_edges
        return {"primal": mask[:ep], "dual": mask[ep:]}

    def to_json(self) -> str:
        doc = {
            "params": {"L": self.params.L, "depth": self.params.depth, "kind": self.params.kind},
            "graphs": [self.primal.to_dict(), self.dual.to_dict()],
            "membranes": list(self.membranes),
        }
        return json.dumps(doc, indent=1)


def _prep_xy(L: int) -> tuple:
    """Doubled (x, y) of the preparation point: the mixed-parity lattice
    position nearest the centre of the input face."""
    W = L - 1
    px = W if W % 2 == 1 else W - 1  # odd coordinate (dual column)
    py = W if W % 2 == 0 else W - 1  # even coordinate (primal row)
    return px, py


def _region(dx: int, dy: int) -> str:
    """Which input-face triangle a site at offset (dx, dy) belongs to.

    Sites exactly on a diagonal are assigned to the region clockwise of
    that diagonal ray (NE->right, SE->bottom, SW->left, NW->top).
    """
    adx, ady = abs(dx), abs(dy)
    if adx > ady:
        return "left" if dx < 0 else "right"
    if ady > adx:
        return "bottom" if dy < 0 else "top"
    if dx > 0:
        return "right" if dy > 0 else "bottom"
    return "left" if dy < 0 else "top"


def _build_graph(params: BlockParams, graph_id: str) -> SyndromeGraph:
    L, depth, kind = params.L, params.depth, params.kind
    W = L - 1
    off = 0 if graph_id == "primal" else 1
    px, py = _prep_xy(L)
    prep = (px, py, 2) if kind == PREPARATION else None

    # vertices: (2i+off, 2j+off, 2t)
    n_real = W * W * depth
    coords = np.empty((n_real, 3), dtype=np.int64)
    vid = {}
    n = 0
    for t in range(1, depth + 1):
        for i in range(W):
            for j in range(W):
                c = (2 * i + off, 2 * j + off, 2 * t)
                coords[n] = c
                vid[c] = n
                n += 1

    b1, b2 = n_real, n_real + 1

    eu, ev, ecoord, ekind = [], [], [], []

    def add_edge(u, v, coord, kindcode):
        eu.append(u)
        ev.append(v)
        ecoord.append(coord)
        ekind.append(kindcode)

    for t in range(1, depth + 1):
        t2 = 2 * t
        for i in range(W):
            for j in range(W):
                c = (2 * i + off, 2 * j + off, t2)
                u = vid[c]
                if i + 1 < W:
                    mid = (c[0] + 1, c[1], t2)
                    if mid != prep:
                        add_edge(u, vid[(c[0] + 2, c[1], t2)], mid, SPACE)
                if j + 1 < W:
                    mid = (c[0], c[1] + 1, t2)
                    if mid != prep:
                        add_edge(u, vid[(c[0], c[1] + 2, t2)], mid, SPACE)
                if t < depth:
                    add_edge(u, vid[(c[0], c[1], t2 + 2)], (c[0], c[1], t2 + 1), TIME)

    # side-wall attachments: primal chains terminate on the x walls, dual
    # chains on the y walls
    for t in range(1, depth + 1):
        t2 = 2 * t
        for k in range(W):
            if graph_id == "primal":
                lo = (off, 2 * k + off, t2)
                hi = (2 * (W - 1) + off, 2 * k + off, t2)
                locoord = (lo[0] - 1, lo[1], t2)
                hicoord = (hi[0] + 1, hi[1], t2)
            else:
                lo = (2 * k + off, off, t2)
                hi = (2 * k + off, 2 * (W - 1) + off, t2)
                locoord = (lo[0], lo[1] - 1, t2)
                hicoord = (hi[0], hi[1] + 1, t2)
            if locoord != prep:
                add_edge(vid[lo], b1, locoord, WALL)
            if hicoord != prep:
                add_edge(vid[hi], b2, hicoord, WALL)

    if kind == PREPARATION:
        # pinch ring: input-face checks within PINCH_RADIUS of the
        # preparation point are truncated by the preparation measurement
        # and absorb chains at either boundary; one edge to each
        # pseudosyndrome creates the weight-2 undetectable
        # boundary-to-boundary paths (and weight-1 ambiguities) of the
        # preparation region
        pinch_sites = []
        for i in range(W):
            for j in range(W):
                c = (2 * i + off, 2 * j + off, 2)
                if max(abs(c[0] - px), abs(c[1] - py)) <= PINCH_RADIUS:
                    pinch_sites.append(c)
        # dangling input-face edges, by triangular region
        for i in range(W):
            for j in range(W):
                c = (2 * i + off, 2 * j + off, 2)
                if c in pinch_sites:
                    continue  # pinch checks are wired to both boundaries
                reg = _region(c[0] - px, c[1] - py)
                below = (c[0], c[1], 1)
                if graph_id == "primal":
                    if reg == "left":
                        add_edge(vid[c], b1, below, BELOW)
                    elif reg == "right":
                        add_edge(vid[c], b2, below, BELOW)
                else:
                    if reg == "bottom":
                        add_edge(vid[c], b1, below, BELOW)
                    elif reg == "top":
                        add_edge(vid[c], b2, below, BELOW)
        for c in pinch_sites:
            for pseudo in (b1, b2):
                add_edge(vid[c], pseudo, (c[0], c[1], 1), PINCH)

    edges_u = np.asarray(eu, dtype=np.int64)
    edges_v = np.asarray(ev, dtype=np.int64)
    edge_coords = np.asarray(ecoord, dtype=np.int64)
    edge_kind = np.asarray(ekind, dtype=np.uint8)

    # radii: half the L-inf distance from the preparation point, rounded up
    if kind == PREPARATION:
        ref = np.array(prep, dtype=np.int64)
        vertex_radius = _linf_radius(coords, ref)
        edge_radius = _linf_radius(edge_coords, ref)
    else:
        vertex_radius = np.zeros(n_real, dtype=np.int64)
        edge_radius = np.zeros(len(edges_u), dtype=np.int64)

    # membrane cut: a plane through the preparation point, B1 side 0
    side = np.zeros(n_real + 2, dtype=np.int8)
    if graph_id == "primal":
        side[:n_real] = coords[:, 0] > px
    else:
        side[:n_real] = coords[:, 1] > py
    side[b1] = 0
    side[b2] = 1

    g = SyndromeGraph(
        graph_id=graph_id,
        n_real=n_real,
        coords=coords,
        vertex_radius=vertex_radius,
        edges_u=edges_u,
        edges_v=edges_v,
        edge_coords=edge_coords,
        edge_radius=edge_radius,
        edge_kind=edge_kind,
        side=side,
        prep_point=prep,
    )
    _attach_decode_structure(g)
    return g


def _linf_radius(coords: np.ndarray, ref: np.ndarray) -> np.ndarray:
    return (np.abs(coords - ref).max(axis=1) + 1) // 2


def _attach_decode_structure(g: SyndromeGraph) -> None:
    """Merge parallel edges and build the CSR adjacency used for decoding."""
    a = np.minimum(g.edges_u, g.edges_v)
    b = np.maximum(g.edges_u, g.edges_v)
    pairs = a * g.n_nodes + b
    uniq, group = np.unique(pairs, return_inverse=True)
    g.merged_u = (uniq // g.n_nodes).astype(np.int64)
    g.merged_v = (uniq % g.n_nodes).astype(np.int64)
    g.edge_group = group.astype(np.int64)

    deg = np.zeros(g.n_nodes, dtype=np.int64)
    np.add.at(deg, g.merged_u, 1)
    np.add.at(deg, g.merged_v, 1)
    indptr = np.zeros(g.n_nodes + 1, dtype=np.int64)
    np.cumsum(deg, out=indptr[1:])
    nbr = np.empty(indptr[-1], dtype=np.int64)
    eid = np.empty(indptr[-1], dtype=np.int64)
    cursor = indptr[:-1].copy()
    for e in range(len(g.merged_u)):
        u, v = g.merged_u[e], g.merged_v[e]
        nbr[cursor[u]] = v
        eid[cursor[u]] = e
        cursor[u] += 1
        nbr[cursor[v]] = u
        eid[cursor[v]] = e
        cursor[v] += 1
    g.csr_indptr = indptr
    g.csr_nbr = nbr
    g.csr_eid = eid


def build_block(params: BlockParams) -> BlockGraphs:
    """Construct the primal and dual syndrome graphs of a block."""
    return BlockGraphs(
        params=params,
        primal=_build_graph(params, "primal"),
        dual=_build_graph(params, "dual"),
    )


@dataclass
class GraphReport:
    graph_id: str
    bulk_distance: int
    min_fault_weight: int
    cut_parity_ok: bool
    structure_ok: bool
    messages: list


@dataclass
class ValidationReport:
    params: BlockParams
    graphs: dict  # graph_id -> GraphReport
    ok: bool


def _bfs_distance(g: SyndromeGraph, allowed_edges: np.ndarray, src: int, dst: int) -> int:
    """Unit-weight BFS distance from src to dst over a subset of edges."""
    from collections import deque

    adj = [[] for _ in range(g.n_nodes)]
    for e in np.flatnonzero(allowed_edges):
        adj[g.edges_u[e]].append(g.edges_v[e])
        adj[g.edges_v[e]].append(g.edges_u[e])
    dist = np.full(g.n_nodes, -1, dtype=np.int64)
    dist[src] = 0
    q = deque([src])
    while q:
        u = q.popleft()
        if u == dst:
            return int(dist[u])
        for v in adj[u]:
            if dist[v] < 0:
                dist[v] = dist[u] + 1
                q.append(v)
    return -1


def _check_cut_parity(g: SyndromeGraph) -> bool:
    """Verify the cut invariant over a spanning tree: every fundamental
    cycle crosses the cut evenly and the B1-B2 tree path crosses oddly."""
    from collections import deque

    cut = g.edge_cut
    adj = [[] for _ in range(g.n_nodes)]
    for e in range(g.n_edges):
        adj[g.edges_u[e]].append((g.edges_v[e], e))
        adj[g.edges_v[e]].append((g.edges_u[e], e))
    parity = np.full(g.n_nodes, -1, dtype=np.int64)
    parity[g.b1] = 0
    tree_edge = np.zeros(g.n_edges, dtype=bool)
    q = deque([g.b1])
    while q:
        u = q.popleft()
        for v, e in adj[u]:
            if parity[v] < 0:
                parity[v] = parity[u] ^ int(cut[e])
                tree_edge[e] = True
                q.append(v)
    if np.any(parity < 0):
        return False  # disconnected graph
    for e in np.flatnonzero(~tree_edge):
        cyc = parity[g.edges_u[e]] ^ parity[g.edges_v[e]] ^ int(cut[e])
        if cyc != 0:
            return False
    return bool(parity[g.b1] ^ parity[g.b2] == 1)


def validate_block(graphs: BlockGraphs) -> ValidationReport:
    """Check distances, fault weight and the cut invariant of a block.

    Returns a failed report rather than raising when a check fails.
    ``min_fault_weight`` is the minimum number of flips that produce an
    undetected logical error (the shortest B1-B2 path: any flipped simple
    boundary-to-boundary path has empty syndrome and nontrivial class).
    """
    L, depth = graphs.params.L, graphs.params.depth
    reports = {}
    all_ok = True
    for gid in graphs.membranes:
        g = graphs.graph(gid)
        msgs = []
        structure_ok = True
        if np.any((g.edges_u >= g.n_real) & (g.edges_v >= g.n_real)):
            structure_ok = False
            msgs.append("pseudosyndromes directly connected")
        if graphs.params.kind == PREPARATION:
            if np.any(g.edge_radius < 1):
                structure_ok = False
                msgs.append("error edge at radius 0")
            if np.any(g.edge_radius > max(L, depth)):
                structure_ok = False
                msgs.append("edge radius exceeds block extent")

        bulk_allowed = np.ones(g.n_edges, dtype=bool)
        bulk_allowed &= (g.edge_kind != BELOW) & (g.edge_kind != PINCH)
        tmin = depth  # doubled time threshold: t >= depth/2
        real_bad = np.zeros(g.n_nodes, dtype=bool)
        real_bad[: g.n_real] = g.coords[:, 2] < tmin
        bulk_allowed &= ~(real_bad[g.edges_u] | real_bad[g.edges_v])
        bulk_distance = _bfs_distance(g, bulk_allowed, g.b1, g.b2)
        if bulk_distance != L:
            msgs.append(f"bulk distance {bulk_distance} != L={L}")

        mfw = _bfs_distance(g, np.ones(g.n_edges, dtype=bool), g.b1, g.b2)
        expected_mfw = 2 if graphs.params.kind == PREPARATION else L
        if mfw != expected_mfw:
            msgs.append(f"min fault weight {mfw} != {expected_mfw}")

        cut_ok = _check_cut_parity(g)
        if not cut_ok:
            msgs.append("cut parity invariant violated")

        rep = GraphReport(
            graph_id=gid,
            bulk_distance=bulk_distance,
            min_fault_weight=mfw,
            cut_parity_ok=cut_ok,
            structure_ok=structure_ok,
            messages=msgs,
        )
        reports[gid] = rep
        all_ok = all_ok and structure_ok and cut_ok and bulk_distance == L and mfw == expected_mfw
    return ValidationReport(params=graphs.params, graphs=reports, ok=all_ok)
