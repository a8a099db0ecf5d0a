"""Error sampling and visible information for block configurations.

Errors live on the block's error edges (primal edges first, then dual).
Each edge independently suffers an erasure with probability ``p_erasure``;
an erased outcome is replaced by a fair coin, so it flips with probability
1/2, while non-erased edges flip with probability ``p_error``.

Sampling is keyed by a 64-bit trial seed through a counter-based RNG
(Philox), so configurations are reproducible across platforms and
independent of execution order.  ``derive_trial_seed`` splits a master
seed into per-trial seeds with a SplitMix64 mix of the trial index.
"""

from __future__ import annotations

import json
from dataclasses import dataclass

import numpy as np

from .geometry import BlockGraphs

_MASK64 = (1 << 64) - 1


@dataclass(frozen=True)
class ErrorModel:
    p_error: float
    p_erasure: float = 0.0

    def __post_init__(self):
        for name in ("p_error", "p_erasure"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")


@dataclass
class Configuration:
    """Sampled Pauli flips and erasures as block-level edge masks."""

    pauli: np.ndarray  # bool, one entry per block error edge
    erased: np.ndarray

    def pauli_ids(self) -> list:
        return [int(i) for i in np.flatnonzero(self.pauli)]

    def erased_ids(self) -> list:
        return [int(i) for i in np.flatnonzero(self.erased)]

    def to_record(self, trial_seed: int = None) -> dict:
        rec = {"pauli": self.pauli_ids(), "erased": self.erased_ids()}
        if trial_seed is not None:
            rec["trial_seed"] = int(trial_seed)
        return rec

    @staticmethod
    def from_record(rec: dict, n_edges: int) -> "Configuration":
        pauli = np.zeros(n_edges, dtype=bool)
        erased = np.zeros(n_edges, dtype=bool)
        pauli[rec["pauli"]] = True
        erased[rec["erased"]] = True
        return Configuration(pauli=pauli, erased=erased)


@dataclass
class VisibleInfo:
    """What the decoder may see: lit syndromes per graph plus erasures."""

    syndrome: dict  # graph_id -> bool array over real checks
    erased: np.ndarray  # block-level edge mask

    def lit_ids(self, graph_id: str) -> np.ndarray:
        return np.flatnonzero(self.syndrome[graph_id])


def derive_trial_seed(master_seed: int, trial_index: int) -> int:
    """Counter-based split: mix the trial index into the master seed."""
    x = (master_seed + 0x9E3779B97F4A7C15 * (trial_index + 1)) & _MASK64
    x = ((x ^ (x >> 30)) * 0xBF58476D1CE4E5B9) & _MASK64
    x = ((x ^ (x >> 27)) * 0x94D049BB133111EB) & _MASK64
    return (x ^ (x >> 31)) & _MASK64


def sample_configuration(graphs: BlockGraphs, model: ErrorModel, trial_seed: int) -> Configuration:
    """Sample an i.i.d. Pauli/erasure configuration on the block's edges."""
    n = graphs.n_edges
    gen = np.random.Generator(np.random.Philox(key=np.uint64(trial_seed & _MASK64)))
    erased = gen.random(n) < model.p_erasure
    flip_threshold = np.where(erased, 0.5, model.p_error)
    pauli = gen.random(n) < flip_threshold
    return Configuration(pauli=pauli, erased=erased)


def extract_visible(graphs: BlockGraphs, config: Configuration) -> VisibleInfo:
    """Derive the syndrome (XOR of real endpoints over flipped edges)."""
    if len(config.pauli) != graphs.n_edges or len(config.erased) != graphs.n_edges:
        raise ValueError("configuration does not match the block's edge count")
    syndrome = {}
    per_graph = graphs.split_edge_mask(config.pauli)
    for gid in graphs.membranes:
        g = graphs.graph(gid)
        counts = np.zeros(g.n_nodes, dtype=np.int64)
        flipped = np.flatnonzero(per_graph[gid])
        np.add.at(counts, g.edges_u[flipped], 1)
        np.add.at(counts, g.edges_v[flipped], 1)
        syndrome[gid] = (counts[: g.n_real] % 2).astype(bool)
    return VisibleInfo(syndrome=syndrome, erased=config.erased.copy())


def true_class(graphs: BlockGraphs, config: Configuration, graph_id: str) -> int:
    """Hidden logical sector: parity of Pauli flips crossing the cut."""
    g = graphs.graph(graph_id)
    mask = graphs.split_edge_mask(config.pauli)[graph_id]
    return int(np.count_nonzero(mask & g.edge_cut) % 2)


def write_configurations_jsonl(path, records) -> None:
    """Write an iterable of configuration records as JSON lines."""
    with open(path, "w") as f:
        for rec in records:
            f.write(json.dumps(rec, separators=(",", ":")) + "\n")
