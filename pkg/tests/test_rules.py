import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from prepsel.matching import GapComponent, GapResult, SurvivingDistanceResult
from prepsel.noise import ErrorModel, extract_visible, sample_configuration
from prepsel.rules import (
    RuleConfig,
    annular_vertex_weights,
    policy_threshold,
    rank_nested,
    score_annular,
    score_gap,
    score_radial_gap,
    score_surviving,
)

from conftest import empty_visible


def _gap_result(gp, gd, tie_p=False, tie_d=False):
    return GapResult(
        components={
            "primal": GapComponent(0.0, gp, gp, 0, tie_p),
            "dual": GapComponent(0.0, gd, gd, 0, tie_d),
        }
    )


def test_rule_config_validation():
    with pytest.raises(ValueError):
        RuleConfig(kind="bogus")
    with pytest.raises(ValueError):
        RuleConfig(kind="annular", alpha=-0.5)
    assert RuleConfig(kind="gap").label == "gap"


def test_annular_empty_syndrome(prep44):
    vis = empty_visible(prep44)
    out = score_annular(prep44, vis, alpha=1.0)
    assert out["score"] == 0.0


def test_annular_single_check_normalization(prep88):
    # one lit check at radius 2: Q = 1 / (sigma_bar(2) * 2^alpha)
    vis = empty_visible(prep88)
    g = prep88.primal
    r2 = np.flatnonzero(g.vertex_radius == 2)
    vis.syndrome["primal"][r2[0]] = True
    sigma_bar = np.count_nonzero(g.vertex_radius == 2)
    out = score_annular(prep88, vis, alpha=1.0)
    assert out["primal"] == pytest.approx(1.0 / (sigma_bar * 2.0))
    assert out["dual"] == 0.0
    assert out["score"] == pytest.approx(out["primal"])


def test_annular_alpha_zero_pure_counting(prep88):
    model = ErrorModel(0.02, 0.0)
    vis = extract_visible(prep88, sample_configuration(prep88, model, 31))
    out = score_annular(prep88, vis, alpha=0.0)
    expected = 0.0
    for gid in prep88.membranes:
        g = prep88.graph(gid)
        counts = np.bincount(g.vertex_radius, minlength=g.vertex_radius.max() + 1)
        for v in np.flatnonzero(vis.syndrome[gid]):
            r = g.vertex_radius[v]
            if 1 <= r <= prep88.params.depth:
                expected += 1.0 / counts[r]
    assert out["score"] == pytest.approx(expected)


def test_annular_weights_respect_cutoff(prep88):
    g = prep88.primal
    w1 = annular_vertex_weights(g, alpha=1.0, L=8, depth=8)
    cutoff = math.ceil(3 * 8 / 4)
    counts = np.bincount(g.vertex_radius)
    for v in range(g.n_real):
        r = g.vertex_radius[v]
        assert w1[v] == pytest.approx(1.0 / (counts[r] * min(r, cutoff)))


def test_score_gap_sectors():
    # unit weights and unit linear weights: five sector values 0..4
    values = {score_gap(_gap_result(gp, gd)) for gp in (0, 1, 2) for gd in (0, 1, 2)}
    assert values == {math.exp(-s) for s in range(5)}
    assert score_gap(_gap_result(0.0, 0.0, True, True)) == 1.0  # worst
    assert score_gap(_gap_result(2.0, 2.0)) == pytest.approx(math.exp(-4.0))


def test_score_gap_monotone():
    base = score_gap(_gap_result(1.0, 1.0))
    assert score_gap(_gap_result(2.0, 1.0)) < base
    assert score_gap(_gap_result(1.0, 2.0)) < base
    assert score_gap(_gap_result(0.5, 1.0)) > base


def test_score_radial_matches_gap_form():
    g = _gap_result(1.3, 0.4)
    assert score_radial_gap(g) == score_gap(g)


def test_score_surviving():
    sd = {
        "primal": SurvivingDistanceResult(d=2.0, m=6, q=2.0),
        "dual": SurvivingDistanceResult(d=2.0, m=6, q=2.0),
    }
    assert score_surviving(sd) == pytest.approx(math.exp(-4.0))
    spanning = {
        "primal": SurvivingDistanceResult(d=0.0, m=1, q=0.0),
        "dual": SurvivingDistanceResult(d=0.0, m=1, q=0.0),
    }
    assert score_surviving(spanning) == 1.0  # worst score
    # multiplicity weighting (c > 0) can only worsen the score
    sd_c = {
        "primal": SurvivingDistanceResult(d=2.0, m=6, q=2.0 - 0.5 * math.log(6)),
        "dual": SurvivingDistanceResult(d=2.0, m=6, q=2.0 - 0.5 * math.log(6)),
    }
    assert score_surviving(sd_c) > score_surviving(sd)


def test_policy_threshold_boundary():
    assert policy_threshold(0.1, 0.1) == 1  # boundary kept
    assert policy_threshold(0.2, 0.1) == 0
    assert policy_threshold(-1.0, 0.0) == 1


def test_rank_nested_lexicographic():
    records = [(1, 5), (0, 9), (1, 2)]
    order = rank_nested(records)
    assert [records[i] for i in order] == [(0, 9), (1, 2), (1, 5)]


def test_rank_nested_degenerate_keys():
    gaps_equal = [(1, 5), (1, 2), (1, 7)]
    order = rank_nested(gaps_equal)
    assert [gaps_equal[i][1] for i in order] == [2, 5, 7]
    ann_equal = [(3, 1), (1, 1), (2, 1)]
    order = rank_nested(ann_equal)
    assert [ann_equal[i][0] for i in order] == [1, 2, 3]


def test_rank_nested_stable_on_ties():
    records = [(1, 1)] * 4
    assert list(rank_nested(records)) == [0, 1, 2, 3]


@settings(max_examples=50, deadline=None)
@given(
    st.lists(
        st.tuples(st.floats(0, 4, allow_nan=False), st.floats(0, 4, allow_nan=False)),
        min_size=1,
        max_size=30,
    ),
    st.floats(0.01, 100.0),
)
def test_linear_weight_rescaling_keeps_ranking(gaps, scale):
    """Common rescaling of the membrane weights never reorders blocks."""
    s1 = [score_gap(_gap_result(gp, gd), a=(1.0, 1.0)) for gp, gd in gaps]
    s2 = [score_gap(_gap_result(gp, gd), a=(scale, scale)) for gp, gd in gaps]
    assert list(np.argsort(np.asarray(s1), kind="stable")) == list(
        np.argsort(np.asarray(s2), kind="stable")
    )


def test_keep_fraction_realized():
    # keeping the best floor(kappa n) scores realizes the keep fraction
    rng = np.random.default_rng(0)
    scores = rng.random(1000)
    order = np.argsort(scores, kind="stable")
    for kappa in (1.0, 0.5, 0.123, 0.01):
        kept = order[: int(math.floor(kappa * len(scores)))]
        assert len(kept) == int(math.floor(kappa * 1000))
