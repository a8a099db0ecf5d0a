"""Soft-information scores and policies for block post-selection.

Five rules are supported; lower scores always mean a better block:

* ``annular``      -- radius-weighted, annulus-normalized count of lit checks
* ``gap``          -- sum of exp(-|gap|) over membranes, unit decode weights
* ``nested``       -- gap score refined lexicographically by the annular score
* ``radial_gap``   -- gap score under radially reweighted decode weights
* ``surviving``    -- sum of exp(-(d - c ln m)) over boundary pairs
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import BlockGraphs, SyndromeGraph
from .matching import GapResult
from .noise import VisibleInfo

RULE_KINDS = ("annular", "gap", "nested", "radial_gap", "surviving")


@dataclass(frozen=True)
class RuleConfig:
    """Configuration of one post-selection rule.

    ``alpha`` is the radial power for the annular/nested/radial_gap rules,
    ``c`` the multiplicity weight of the surviving-distance rule, ``a`` the
    linear membrane weights (unity by default) and ``s_star`` an optional
    cutoff score for threshold policies (a pair for the nested rule);
    cutoffs realizing a given keep fraction come from
    ``experiment.cutoff_for_keep``.
    """

    kind: str
    alpha: float = 0.0
    c: float = 0.0
    a: tuple = (1.0, 1.0)
    cutoff: Optional[int] = None
    s_star: object = None
    label: Optional[str] = None

    def __post_init__(self):
        if self.kind not in RULE_KINDS:
            raise ValueError(f"unknown rule kind {self.kind!r}")
        if self.alpha < 0:
            raise ValueError("alpha must be >= 0")
        if self.label is None:
            object.__setattr__(self, "label", self.kind)


def default_rules(annular_alpha: float = 1.0, radial_alpha: float = 0.1) -> list:
    return [
        RuleConfig(kind="annular", alpha=annular_alpha),
        RuleConfig(kind="gap"),
        RuleConfig(kind="nested", alpha=annular_alpha),
        RuleConfig(kind="radial_gap", alpha=radial_alpha),
    ]


def annular_vertex_weights(g: SyndromeGraph, alpha: float, L: int, depth: int, cutoff: Optional[int] = None) -> np.ndarray:
    """Per-check contribution to the annular score: a lit check at radius r
    adds 1 / (sigma_bar(r) * min(r, ceil(3L/4))^alpha); annuli beyond the
    depth (or with no checks) contribute nothing."""
    if cutoff is None:
        cutoff = math.ceil(3 * L / 4)
    counts = g.annulus_counts(int(g.vertex_radius.max()))
    w = np.zeros(g.n_real, dtype=np.float64)
    r = g.vertex_radius
    valid = (r >= 1) & (r <= depth)
    rv = r[valid].astype(np.float64)
    w[valid] = 1.0 / (counts[r[valid]] * np.minimum(rv, cutoff) ** alpha)
    return w


def score_annular(graphs: BlockGraphs, visible: VisibleInfo, alpha: float, a: tuple = (1.0, 1.0), cutoff: Optional[int] = None) -> dict:
    """Annular syndrome score; returns per-graph components and the sum."""
    out = {}
    total = 0.0
    for ai, gid in zip(a, graphs.membranes):
        g = graphs.graph(gid)
        w = annular_vertex_weights(g, alpha, graphs.params.L, graphs.params.depth, cutoff)
        q = float(w[visible.syndrome[gid]].sum())
        out[gid] = q
        total += ai * q
    out["score"] = total
    return out


def score_gap(gap: GapResult, a: tuple = (1.0, 1.0)) -> float:
    """Gap score exp(-sum_i a_i |gap_i|), decreasing in every gap.

    With unit weights and unit linear weights the combined gap takes the
    five discrete sector values 0..4, so the score is their monotone
    relabeling; summing exponentials per membrane instead would split the
    mixed sectors and break that discreteness.
    """
    return float(math.exp(-sum(ai * gap.components[gid].abs_gap for ai, gid in zip(a, ("primal", "dual")))))


def score_radial_gap(radial_gap: GapResult, a: tuple = (1.0, 1.0)) -> float:
    """Same functional form as the gap score, on radially reweighted gaps."""
    return score_gap(radial_gap, a)


def score_surviving(sd: dict, a: tuple = (1.0, 1.0)) -> float:
    """Surviving-distance score exp(-sum_i a_i (d_i - c ln m_i))."""
    return float(math.exp(-sum(ai * sd[gid].q for ai, gid in zip(a, ("primal", "dual")))))


def policy_threshold(score: float, s_star: float) -> int:
    """Accept (1) iff score <= cutoff; the boundary is kept."""
    return 1 if score <= s_star else 0


def rank_nested(records) -> np.ndarray:
    """Stable lexicographic ordering: gap score first, annular second.

    ``records`` is a sequence of (gap_score, annular_score) pairs; returns
    the argsort.  Equivalent to the conditional nested policy for every
    cutoff pair.
    """
    arr = np.asarray(records, dtype=np.float64)
    if arr.size == 0:
        return np.empty(0, dtype=np.int64)
    return np.lexsort((arr[:, 1], arr[:, 0]))


@dataclass
class ScoreVector:
    """All per-trial scores plus the raw soft-information components."""

    scores: dict  # label -> float (nested: (gap, annular) tuple)
    components: dict = field(default_factory=dict)
