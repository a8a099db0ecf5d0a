import json
import math

import numpy as np
import pytest

from prepsel.experiment import (
    Breakeven,
    EERCurve,
    breakeven,
    cutoff_for_keep,
    default_kappa_grid,
    eer_curve,
    estimate_threshold,
    run_trials,
    score_diagnostics,
    write_breakeven_csv,
    write_curves_csv,
    write_diagnostics_csv,
    write_trials_jsonl,
)
from prepsel.geometry import MEMORY, PREPARATION, BlockParams, build_block
from prepsel.noise import ErrorModel
from prepsel.rules import RuleConfig, default_rules


@pytest.fixture(scope="module")
def small_table(prep44):
    rules = default_rules() + [RuleConfig(kind="surviving", c=0.5)]
    return run_trials(prep44, ErrorModel(0.02, 0.01), rules, 1500, 99, workers=1)


def test_empty_run(prep44):
    t = run_trials(prep44, ErrorModel(0.01, 0.0), default_rules(), 0, 1, workers=1)
    assert t.n_trials == 0 and len(t.failure) == 0


def test_noiseless_run(prep44):
    t = run_trials(prep44, ErrorModel(0.0, 0.0), default_rules(), 50, 1, workers=1)
    assert np.all(t.failure == 0.0)
    assert np.all(t.scores["annular"] == 0.0)
    # every gap hits the full fault distance on both membranes
    assert np.all(t.scores["gap"] == pytest.approx(math.exp(-4.0)))


def test_worker_count_invariance(prep44):
    rules = default_rules()
    model = ErrorModel(0.02, 0.005)
    t1 = run_trials(prep44, model, rules, 3000, 5, workers=1)
    t2 = run_trials(prep44, model, rules, 3000, 5, workers=2)
    assert np.array_equal(t1.failure, t2.failure)
    for lbl in ("annular", "gap", "radial_gap"):
        assert np.array_equal(t1.scores[lbl], t2.scores[lbl])
    for gid in ("primal", "dual"):
        assert np.array_equal(t1.gap0[gid], t2.gap0[gid])
        assert np.array_equal(t1.gap1[gid], t2.gap1[gid])


def test_memory_blocks_reject_prep_rules():
    mem = build_block(BlockParams(L=2, depth=2, kind=MEMORY))
    with pytest.raises(ValueError):
        run_trials(mem, ErrorModel(0.01, 0.0), default_rules(), 10, 0, workers=1)


def test_eer_gap_identity(small_table):
    """Failure from decode outcomes equals the signed-gap estimate exactly."""
    t = small_table
    strict_wrong = np.zeros(t.n_trials, dtype=bool)
    any_tie = np.zeros(t.n_trials, dtype=bool)
    for gid in ("primal", "dual"):
        strict_wrong |= (~t.tie[gid]) & (t.decoded_cls[gid] != t.true_cls[gid])
        any_tie |= t.tie[gid]
    estimate = np.where(strict_wrong, 1.0, np.where(any_tie, 0.5, 0.0))
    assert np.array_equal(estimate, t.failure)


def test_eer_curve_kappa_one_common(small_table):
    p1 = small_table.failure.mean()
    for lbl in ("annular", "gap", "nested", "radial_gap", "surviving"):
        c = eer_curve(small_table, lbl)
        assert c.kappa[0] == 1.0
        assert c.p_enc[0] == pytest.approx(p1, abs=1e-15)
        assert c.stderr[0] == pytest.approx(math.sqrt(p1 * (1 - p1) / small_table.n_trials))


def test_eer_curve_grid_validation(small_table):
    with pytest.raises(ValueError):
        eer_curve(small_table, "gap", kappa_grid=[0.5, 1.5])
    with pytest.raises(ValueError):
        eer_curve(small_table, "gap", kappa_grid=[0.0])


def test_eer_curve_sector_boundaries(small_table):
    c = eer_curve(small_table, "gap")
    distinct = np.unique(small_table.scores["gap"])
    bounds = np.searchsorted(np.sort(small_table.scores["gap"]), distinct, side="right") / small_table.n_trials
    for b in bounds:
        if math.floor(b * small_table.n_trials) >= 1:
            assert np.any(np.isclose(c.kappa, b))


def test_gap_curve_nonincreasing_coarse(small_table):
    c = eer_curve(small_table, "gap", kappa_grid=np.geomspace(0.05, 1.0, 12))
    # descending kappa: EER should not increase beyond noise (3 stderr)
    for i in range(1, len(c.kappa)):
        assert c.p_enc[i] <= c.p_enc[i - 1] + 3 * (c.stderr[i] + c.stderr[i - 1]) + 1e-12


def test_breakeven_cases():
    flat_high = EERCurve(
        rule="x",
        kappa=np.array([1.0, 0.5, 0.1]),
        p_enc=np.array([0.2, 0.2, 0.2]),
        stderr=np.zeros(3),
        n_trials=100000,
        sampling_limited=np.zeros(3, dtype=bool),
    )
    assert breakeven(flat_high, 0.01) is None
    at_one = EERCurve(
        rule="x",
        kappa=np.array([1.0, 0.5]),
        p_enc=np.array([0.005, 0.004]),
        stderr=np.zeros(2),
        n_trials=100000,
        sampling_limited=np.zeros(2, dtype=bool),
    )
    be = breakeven(at_one, 0.01)
    assert be.kappa_star == 1.0 and be.overhead == 1.0
    crossing = EERCurve(
        rule="x",
        kappa=np.array([1.0, 0.5, 0.25]),
        p_enc=np.array([0.04, 0.02, 0.01]),
        stderr=np.zeros(3),
        n_trials=100000,
        sampling_limited=np.zeros(3, dtype=bool),
    )
    be = breakeven(crossing, 0.02)
    assert be.kappa_star == pytest.approx(0.5)
    be = breakeven(crossing, 0.0141)
    assert 0.25 < be.kappa_star < 0.5  # log-interpolated between grid points


def test_cutoff_for_keep(small_table):
    s = np.sort(small_table.scores["gap"])
    assert cutoff_for_keep(small_table, "gap", 1.0) == pytest.approx(s[-1])
    assert cutoff_for_keep(small_table, "gap", 1.0 / small_table.n_trials) == pytest.approx(s[0])
    with pytest.raises(ValueError):
        cutoff_for_keep(small_table, "gap", 0.0)
    # nested cutoffs come as a score pair
    pair = cutoff_for_keep(small_table, "nested", 0.5)
    assert isinstance(pair, tuple) and len(pair) == 2


def test_cutoff_acceptance_fraction(prep44, small_table):
    """Thresholding fresh trials at s*(0.5) accepts about half of them."""
    s_star = cutoff_for_keep(small_table, "gap", 0.5)
    fresh = run_trials(prep44, ErrorModel(0.02, 0.01), default_rules(), 1500, 12345, workers=1)
    frac = np.mean(fresh.scores["gap"] <= s_star)
    sigma = math.sqrt(0.25 / fresh.n_trials)
    # discrete scores make the realized fraction land on a sector boundary;
    # allow the full sector containing the 0.5 quantile
    lo = np.mean(small_table.scores["gap"] < s_star) - 3 * sigma
    hi = np.mean(small_table.scores["gap"] <= s_star) + 3 * sigma
    assert lo <= frac <= hi


def test_score_diagnostics_discrete(small_table):
    d = score_diagnostics(small_table, "gap")
    assert len(d.bin_lo) <= 5
    assert d.count.sum() == small_table.n_trials
    with pytest.raises(ValueError):
        score_diagnostics(small_table, "nested")


def test_rerun_consistency(prep44):
    """Unselected EER agrees across master seeds within 3x stderr."""
    model = ErrorModel(0.02, 0.0)
    t1 = run_trials(prep44, model, [], 4000, 1, workers=1)
    t2 = run_trials(prep44, model, [], 4000, 2, workers=1)
    p1, p2 = t1.failure.mean(), t2.failure.mean()
    se = math.sqrt(p1 * (1 - p1) / 4000 + p2 * (1 - p2) / 4000)
    assert abs(p1 - p2) <= 3 * se


def test_estimate_threshold_finds_crossing():
    est = estimate_threshold(
        [2, 4],
        np.linspace(0.02, 0.05, 4),
        n_per_point=3000,
        master_seed=7,
        ray=(1.0, 0.0),
        workers=1,
    )
    assert est.ok and est.p_star is not None
    assert 0.02 < est.p_star < 0.05
    with pytest.raises(ValueError):
        estimate_threshold([4], np.linspace(0.02, 0.05, 3), 100, 0)


def test_writers_roundtrip(tmp_path, small_table):
    curves = [eer_curve(small_table, "gap")]
    diags = [score_diagnostics(small_table, "gap")]
    write_curves_csv(curves, tmp_path / "curves.csv")
    write_diagnostics_csv(diags, tmp_path / "diag.csv")
    write_trials_jsonl(small_table, tmp_path / "trials.jsonl")
    write_breakeven_csv(
        [
            {
                "rule": "gap",
                "p_error": 0.02,
                "p_erasure": 0.01,
                "p_init": 0.02,
                "breakeven": Breakeven(kappa_star=0.5, overhead=2.0),
            },
            {"rule": "annular", "p_error": 0.02, "p_erasure": 0.01, "p_init": 0.02, "breakeven": None},
        ],
        tmp_path / "be.csv",
    )
    lines = (tmp_path / "curves.csv").read_text().splitlines()
    assert lines[0] == "rule,kappa,p_enc,stderr"
    assert all(line.split(",")[0] == "gap" for line in lines[1:])
    lines = (tmp_path / "diag.csv").read_text().splitlines()
    assert lines[0] == "rule,score_bin_lo,score_bin_hi,count,eer,stderr"
    lines = (tmp_path / "be.csv").read_text().splitlines()
    assert lines[0] == "rule,p_error,p_erasure,p_init,kappa_star,overhead"
    assert lines[2].endswith(",,")  # no breakeven: empty fields
    recs = [json.loads(line) for line in (tmp_path / "trials.jsonl").read_text().splitlines()]
    assert len(recs) == small_table.n_trials
    assert recs[0]["membranes"]["primal"].keys() == {
        "w_class0",
        "w_class1",
        "tie",
        "true_class",
        "decoded_class",
    }
    assert isinstance(recs[0]["scores"]["nested"], list)


def test_default_kappa_grid():
    g = default_kappa_grid(100000)
    assert g[0] == 1.0
    assert g[-1] == pytest.approx(1e-4)
    assert np.all(np.diff(g) < 0)


def test_radial_alpha_zero_equals_gap_scores(prep44):
    rules = [
        RuleConfig(kind="gap"),
        RuleConfig(kind="radial_gap", alpha=0.0),
    ]
    t = run_trials(prep44, ErrorModel(0.03, 0.0), rules, 600, 11, workers=1)
    assert np.array_equal(t.scores["gap"], t.scores["radial_gap"])


def test_radial_alpha_breaks_degeneracy(prep44):
    rules = [RuleConfig(kind="gap"), RuleConfig(kind="radial_gap", alpha=0.1)]
    t = run_trials(prep44, ErrorModel(0.03, 0.0), rules, 1200, 12, workers=1)
    assert len(np.unique(t.scores["radial_gap"])) > len(np.unique(t.scores["gap"]))


def test_gap_mass_shifts_toward_ties_near_threshold(prep44):
    rules = [RuleConfig(kind="gap")]
    lo = run_trials(prep44, ErrorModel(0.015, 0.0), rules, 2500, 13, workers=1)
    hi = run_trials(prep44, ErrorModel(0.035, 0.0), rules, 2500, 13, workers=1)
    # higher error rate concentrates gaps around zero: worse (larger) scores
    assert hi.scores["gap"].mean() > lo.scores["gap"].mean()


def test_trial_scores_accessor(small_table):
    sv = small_table.trial_scores(3)
    assert set(sv.scores) == {r.label for r in small_table.rules}
    assert isinstance(sv.scores["nested"], tuple)
    assert sv.scores["gap"] == pytest.approx(float(small_table.scores["gap"][3]))
    assert set(sv.components) == {"primal", "dual"}
    assert "w_class0" in sv.components["primal"]
