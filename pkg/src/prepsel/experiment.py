"""Monte Carlo orchestration: trial tables, EER-vs-keep-fraction curves,
breakeven overheads, threshold calibration and score diagnostics.

A trial table is columnar (numpy arrays over trials) and is a pure
function of (block, model, rules, n_trials, master_seed): trials are
seeded individually through a counter-based split, and parallel execution
over worker processes reassembles chunks in index order, so outputs are
byte-identical for any worker count.
"""

from __future__ import annotations

import json
import math
import os
import sys
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from .geometry import MEMORY, PREPARATION, BlockGraphs, BlockParams, build_block
from .matching import TIE_TOL, assign_weights, decode_class_weights, surviving_distance
from .noise import (
    ErrorModel,
    derive_trial_seed,
    extract_visible,
    sample_configuration,
    true_class,
)
from .rules import annular_vertex_weights

_CHUNK = 2048  # fixed chunk size keeps results independent of worker count


@dataclass
class TrialTable:
    """Columnar per-trial results for one block and error model."""

    n_trials: int
    master_seed: int
    params: BlockParams
    model: ErrorModel
    rules: list
    failure: np.ndarray = field(repr=False)  # float in {0, 1/2, 1}
    # per membrane (primal, dual) columns
    gap0: dict = field(repr=False, default=None)  # graph_id -> w_class0
    gap1: dict = field(repr=False, default=None)
    tie: dict = field(repr=False, default=None)
    true_cls: dict = field(repr=False, default=None)
    decoded_cls: dict = field(repr=False, default=None)
    scores: dict = field(repr=False, default=None)  # label -> array (or pair arrays)
    rgap: dict = field(repr=False, default=None)
    rtie: dict = field(repr=False, default=None)
    annular_q: dict = field(repr=False, default=None)
    surv_d: dict = field(repr=False, default=None)
    surv_lnm: dict = field(repr=False, default=None)

    def trial_scores(self, i: int):
        """Per-trial ScoreVector: every rule's score plus gap components."""
        from .rules import ScoreVector

        scores = {
            label: (tuple(float(k[i]) for k in s) if isinstance(s, tuple) else float(s[i]))
            for label, s in self.scores.items()
        }
        components = {
            gid: {
                "w_class0": float(self.gap0[gid][i]),
                "w_class1": float(self.gap1[gid][i]),
                "tie": bool(self.tie[gid][i]),
            }
            for gid in self.gap0
        }
        return ScoreVector(scores=scores, components=components)

    def score_key(self, label: str):
        """Sort key (single array or lexicographic tuple) for a rule."""
        s = self.scores[label]
        if isinstance(s, tuple):
            return s
        return (s,)

    def ordering(self, label: str) -> np.ndarray:
        keys = self.score_key(label)
        idx = np.arange(self.n_trials)
        return np.lexsort((idx,) + tuple(reversed(keys)))


def _needs_radial(rules) -> bool:
    return any(r.kind == "radial_gap" for r in rules)


def _needs_surviving(rules) -> bool:
    return any(r.kind == "surviving" for r in rules)


# worker globals installed by _init_worker (fork start method)
_G = {}


def _init_worker(graphs, model, rules, master_seed, annular_w, radial_opts):
    _G["graphs"] = graphs
    _G["model"] = model
    _G["rules"] = rules
    _G["master_seed"] = master_seed
    _G["annular_w"] = annular_w
    _G["radial_opts"] = radial_opts


def _gap_fields(w0: float, w1: float):
    gap = abs(w1 - w0)
    if gap <= TIE_TOL:
        return 0.0, 0, True
    return gap, (0 if w0 < w1 else 1), False


def _make_chunk_arrays(n: int, graphs: BlockGraphs, need_radial: bool, need_surv: bool, need_annular: bool) -> dict:
    membranes = graphs.membranes
    return {
        "failure": np.zeros(n),
        "gap0": {g: np.zeros(n) for g in membranes},
        "gap1": {g: np.zeros(n) for g in membranes},
        "tie": {g: np.zeros(n, dtype=bool) for g in membranes},
        "true_cls": {g: np.zeros(n, dtype=np.int8) for g in membranes},
        "decoded_cls": {g: np.zeros(n, dtype=np.int8) for g in membranes},
        "rgap": {g: np.zeros(n) for g in membranes} if need_radial else None,
        "rtie": {g: np.zeros(n, dtype=bool) for g in membranes} if need_radial else None,
        "annular_q": {g: np.zeros(n) for g in membranes} if need_annular else None,
        "surv_d": {g: np.zeros(n) for g in membranes} if need_surv else None,
        "surv_lnm": {g: np.zeros(n) for g in membranes} if need_surv else None,
    }


def _run_chunk(bounds) -> dict:
    lo, hi = bounds
    graphs: BlockGraphs = _G["graphs"]
    model: ErrorModel = _G["model"]
    rules = _G["rules"]
    master_seed = _G["master_seed"]
    annular_w = _G["annular_w"]
    radial_opts = _G["radial_opts"]
    membranes = graphs.membranes
    n = hi - lo
    need_annular = bool(annular_w)
    need_radial = radial_opts is not None
    need_surv = any(r.kind == "surviving" for r in rules)
    static_noise = model.p_erasure == 0.0

    out = _make_chunk_arrays(n, graphs, need_radial, need_surv, need_annular)

    weights_unit = None
    weights_rad = None
    if static_noise:
        from .noise import VisibleInfo

        vis0 = VisibleInfo(
            syndrome={g: np.zeros(graphs.graph(g).n_real, dtype=bool) for g in membranes},
            erased=np.zeros(graphs.n_edges, dtype=bool),
        )
        weights_unit = assign_weights(graphs, vis0, model)
        if need_radial:
            weights_rad = assign_weights(graphs, vis0, model, radial=radial_opts)

    for k in range(n):
        seed = derive_trial_seed(master_seed, lo + k)
        cfg = sample_configuration(graphs, model, seed)
        vis = extract_visible(graphs, cfg)
        if static_noise:
            w_u, w_r = weights_unit, weights_rad
        else:
            w_u = assign_weights(graphs, vis, model)
            w_r = assign_weights(graphs, vis, model, radial=radial_opts) if need_radial else None

        fail = 0.0
        any_tie = False
        erased_split = graphs.split_edge_mask(vis.erased) if need_surv else None
        for gid in membranes:
            g = graphs.graph(gid)
            lit = vis.lit_ids(gid)
            w0, w1 = decode_class_weights(g, w_u.w_merged[gid], lit)
            gap, min_cls, tie = _gap_fields(w0, w1)
            t_cls = true_class(graphs, cfg, gid)
            out["gap0"][gid][k] = w0
            out["gap1"][gid][k] = w1
            out["tie"][gid][k] = tie
            out["true_cls"][gid][k] = t_cls
            out["decoded_cls"][gid][k] = min_cls
            if tie:
                any_tie = True
            elif min_cls != t_cls:
                fail = 1.0
            if need_radial:
                r0, r1 = decode_class_weights(g, w_r.w_merged[gid], lit)
                rgap, _, rtie = _gap_fields(r0, r1)
                out["rgap"][gid][k] = rgap
                out["rtie"][gid][k] = rtie
            if need_annular:
                out["annular_q"][gid][k] = float(annular_w[gid][vis.syndrome[gid]].sum())
            if need_surv:
                sd = surviving_distance(g, erased_split[gid], 0.0)
                out["surv_d"][gid][k] = sd.d
                out["surv_lnm"][gid][k] = math.log(sd.m) if sd.m > 1 else 0.0
        out["failure"][k] = fail if fail == 1.0 else (0.5 if any_tie else 0.0)
    return out


def run_trials(
    graphs: BlockGraphs,
    model: ErrorModel,
    rules: list,
    n_trials: int,
    master_seed: int,
    workers: Optional[int] = None,
    progress: bool = False,
) -> TrialTable:
    """Sample, decode and score ``n_trials`` block configurations."""
    if n_trials < 0:
        raise ValueError("n_trials must be >= 0")
    for r in rules:
        if r.kind in ("annular", "nested", "radial_gap", "surviving") and graphs.params.kind == MEMORY:
            raise ValueError(f"rule {r.kind!r} needs a preparation block")

    radial_opts = None
    radial_rules = [r for r in rules if r.kind == "radial_gap"]
    if radial_rules:
        if len({(r.alpha, r.cutoff) for r in radial_rules}) > 1:
            raise ValueError("only one radial_gap parameterization per run")
        r = radial_rules[0]
        radial_opts = {"alpha": r.alpha}
        if r.cutoff:
            radial_opts["cutoff"] = r.cutoff

    annular_alphas = {
        r.label: (r.alpha, r.cutoff) for r in rules if r.kind in ("annular", "nested")
    }
    annular_w = {}
    if graphs.params.kind == PREPARATION and annular_alphas:
        alphas = {v for v in annular_alphas.values()}
        if len(alphas) > 1:
            raise ValueError("annular and nested rules must share one alpha in a run")
        alpha, cutoff = next(iter(alphas))
        annular_w = {
            gid: annular_vertex_weights(graphs.graph(gid), alpha, graphs.params.L, graphs.params.depth, cutoff)
            for gid in graphs.membranes
        }

    chunks = [(lo, min(lo + _CHUNK, n_trials)) for lo in range(0, n_trials, _CHUNK)]
    init_args = (graphs, model, rules, master_seed, annular_w, radial_opts)

    if workers is None:
        workers = _default_workers()
    results = []
    if workers <= 1 or len(chunks) <= 1:
        _init_worker(*init_args)
        for i, ch in enumerate(chunks):
            results.append(_run_chunk(ch))
            if progress:
                print(f"\rtrials {ch[1]}/{n_trials}", end="", file=sys.stderr, flush=True)
    else:
        import multiprocessing as mp

        ctx = mp.get_context("fork")
        with ctx.Pool(workers, initializer=_init_worker, initargs=init_args) as pool:
            for i, res in enumerate(pool.imap(_run_chunk, chunks)):
                results.append(res)
                if progress:
                    print(f"\rtrials {chunks[i][1]}/{n_trials}", end="", file=sys.stderr, flush=True)
    if progress:
        print("", file=sys.stderr)

    if not results:
        results = [_make_chunk_arrays(0, graphs, bool(radial_opts), _needs_surviving(rules), bool(annular_w))]

    def cat(key, gid=None):
        if gid is None:
            return np.concatenate([r[key] for r in results])
        return np.concatenate([r[key][gid] for r in results])

    membranes = graphs.membranes
    table = TrialTable(
        n_trials=n_trials,
        master_seed=master_seed,
        params=graphs.params,
        model=model,
        rules=list(rules),
        failure=cat("failure"),
        gap0={g: cat("gap0", g) for g in membranes},
        gap1={g: cat("gap1", g) for g in membranes},
        tie={g: cat("tie", g) for g in membranes},
        true_cls={g: cat("true_cls", g) for g in membranes},
        decoded_cls={g: cat("decoded_cls", g) for g in membranes},
        scores={},
    )
    if results and results[0]["rgap"] is not None:
        table.rgap = {g: cat("rgap", g) for g in membranes}
        table.rtie = {g: cat("rtie", g) for g in membranes}
    if results and results[0]["annular_q"] is not None:
        table.annular_q = {g: cat("annular_q", g) for g in membranes}
    if results and results[0]["surv_d"] is not None:
        table.surv_d = {g: cat("surv_d", g) for g in membranes}
        table.surv_lnm = {g: cat("surv_lnm", g) for g in membranes}

    _attach_scores(table, graphs)
    return table


def _attach_scores(table: TrialTable, graphs: BlockGraphs) -> None:
    membranes = graphs.membranes
    n = table.n_trials
    abs_gap = {}
    for gid in membranes:
        g = np.abs(table.gap1[gid] - table.gap0[gid])
        g[table.tie[gid]] = 0.0
        abs_gap[gid] = g
    for rule in table.rules:
        a = rule.a
        if rule.kind == "gap":
            q = np.zeros(n)
            for ai, gid in zip(a, membranes):
                q += ai * abs_gap[gid]
            table.scores[rule.label] = np.exp(-q)
        elif rule.kind == "radial_gap":
            q = np.zeros(n)
            for ai, gid in zip(a, membranes):
                rg = table.rgap[gid].copy()
                rg[table.rtie[gid]] = 0.0
                q += ai * rg
            table.scores[rule.label] = np.exp(-q)
        elif rule.kind == "annular":
            s = np.zeros(n)
            for ai, gid in zip(a, membranes):
                s += ai * table.annular_q[gid]
            table.scores[rule.label] = s
        elif rule.kind == "nested":
            q = np.zeros(n)
            s_ann = np.zeros(n)
            for ai, gid in zip(a, membranes):
                q += ai * abs_gap[gid]
                s_ann += ai * table.annular_q[gid]
            table.scores[rule.label] = (np.exp(-q), s_ann)
        elif rule.kind == "surviving":
            q = np.zeros(n)
            for ai, gid in zip(a, membranes):
                q += ai * (table.surv_d[gid] - rule.c * table.surv_lnm[gid])
            table.scores[rule.label] = np.exp(-q)
        else:  # pragma: no cover
            raise AssertionError(rule.kind)


@dataclass
class EERCurve:
    rule: str
    kappa: np.ndarray  # descending from 1
    p_enc: np.ndarray
    stderr: np.ndarray
    n_trials: int
    sampling_limited: np.ndarray


def default_kappa_grid(n_trials: int, points: int = 200) -> np.ndarray:
    """Log-spaced keep fractions from 1 down to 10/n_trials."""
    lo = max(10.0 / max(n_trials, 10), 1e-6)
    return np.unique(np.geomspace(lo, 1.0, points))[::-1]


def eer_curve(table: TrialTable, rule_label: str, kappa_grid: Optional[np.ndarray] = None) -> EERCurve:
    """Encoding error rate among the best floor(kappa*n) trials per kappa.

    The default grid is log-spaced plus every score-sector boundary when
    the rule's score is discrete, which resolves the step structure of
    gap-based curves.
    """
    n = table.n_trials
    order = table.ordering(rule_label)
    fail_sorted = table.failure[order]
    cum = np.concatenate([[0.0], np.cumsum(fail_sorted)])

    if kappa_grid is None:
        grid = default_kappa_grid(n)
        key = table.score_key(rule_label)
        # score-sector boundaries resolve the stepwise structure exactly;
        # for lexicographic keys the primary key defines the sectors
        primary = key[0]
        distinct = np.unique(primary)
        if len(distinct) <= 8192:
            bounds = np.searchsorted(np.sort(primary), distinct, side="right") / n
            grid = np.unique(np.concatenate([grid, bounds]))[::-1]
        kappa_grid = grid
    else:
        kappa_grid = np.asarray(kappa_grid, dtype=np.float64)
        if np.any((kappa_grid <= 0) | (kappa_grid > 1)):
            raise ValueError("kappa grid values must lie in (0, 1]")
        kappa_grid = np.unique(kappa_grid)[::-1]

    keep = np.floor(kappa_grid * n).astype(np.int64)
    valid = keep >= 1
    kappa_grid, keep = kappa_grid[valid], keep[valid]
    p = cum[keep] / keep
    stderr = np.sqrt(np.maximum(p * (1 - p), 0.0) / (n * kappa_grid))
    floor = 1.0 / (n * kappa_grid)
    return EERCurve(
        rule=rule_label,
        kappa=kappa_grid,
        p_enc=p,
        stderr=stderr,
        n_trials=n,
        sampling_limited=p <= floor,
    )


@dataclass
class Breakeven:
    kappa_star: float
    overhead: float


_MIN_RESOLVED_FAILURES = 3.0


def breakeven(curve: EERCurve, p_init: float) -> Optional[Breakeven]:
    """Largest keep fraction whose EER does not exceed p_init.

    Linear interpolation in (log p_enc, kappa) between grid neighbours;
    returns None when the curve never reaches p_init.  A crossing is only
    accepted where the kept set resolves at least a few failures
    (p_enc >= 3/(n kappa)); shallower dips, including all
    sampling-limited points, are Monte Carlo noise rather than evidence
    that the rule reaches the breakeven level.
    """
    k, p = curve.kappa, curve.p_enc
    if len(k) == 0:
        return None
    if p[0] <= p_init:
        return Breakeven(kappa_star=1.0, overhead=1.0)
    for i in range(1, len(k)):
        resolved = p[i] * curve.n_trials * k[i] >= _MIN_RESOLVED_FAILURES
        if p[i] <= p_init and resolved:
            f = (math.log(p_init) - math.log(p[i - 1])) / (math.log(p[i]) - math.log(p[i - 1]))
            ks = k[i - 1] + (k[i] - k[i - 1]) * f
            return Breakeven(kappa_star=float(ks), overhead=float(1.0 / ks))
    return None


def cutoff_for_keep(table: TrialTable, rule_label: str, kappa: float):
    """Cutoff score realizing the keep fraction: the floor(kappa*n)-th best
    score; thresholding future trials at it accepts ~kappa of them."""
    if not 0.0 < kappa <= 1.0:
        raise ValueError("kappa must lie in (0, 1]")
    keep = max(int(math.floor(kappa * table.n_trials)), 1)
    order = table.ordering(rule_label)
    key = table.score_key(rule_label)
    idx = order[keep - 1]
    if len(key) == 1:
        return float(key[0][idx])
    return tuple(float(kk[idx]) for kk in key)


@dataclass
class Diagnostics:
    rule: str
    bin_lo: np.ndarray
    bin_hi: np.ndarray
    count: np.ndarray
    eer: np.ndarray
    stderr: np.ndarray


def score_diagnostics(table: TrialTable, rule_label: str, max_discrete: int = 32, n_bins: int = 30) -> Diagnostics:
    """Histogram of scores and mean failure weight per score bin.

    Discrete score distributions (at most ``max_discrete`` distinct
    values) get one bin per value; otherwise equal-width bins are used.
    """
    key = table.score_key(rule_label)
    if len(key) != 1:
        raise ValueError(f"rule {rule_label!r} has no scalar score")
    s = key[0]
    distinct = np.unique(s)
    if len(distinct) <= max_discrete:
        lo = hi = distinct
        idx = np.searchsorted(distinct, s)
    else:
        edges = np.linspace(s.min(), s.max(), n_bins + 1)
        lo, hi = edges[:-1], edges[1:]
        idx = np.clip(np.searchsorted(edges, s, side="right") - 1, 0, n_bins - 1)
    nb = len(lo)
    count = np.bincount(idx, minlength=nb).astype(np.int64)
    fail = np.bincount(idx, weights=table.failure, minlength=nb)
    with np.errstate(invalid="ignore", divide="ignore"):
        eer = np.where(count > 0, fail / np.maximum(count, 1), np.nan)
        stderr = np.sqrt(np.maximum(eer * (1 - eer), 0.0) / np.maximum(count, 1))
    return Diagnostics(rule=rule_label, bin_lo=lo, bin_hi=hi, count=count, eer=eer, stderr=stderr)


@dataclass
class ThresholdEstimate:
    p_star: Optional[float]
    crossings: dict  # (L_small, L_big) -> x
    sizes: list
    grid: np.ndarray
    fail_rates: dict  # L -> array over grid
    n_per_point: int
    ok: bool


def memory_failure_rate(
    L: int,
    model: ErrorModel,
    n_trials: int,
    master_seed: int,
    workers: Optional[int] = None,
) -> float:
    """Logical failure rate (ties counted 1/2) of an L x L x L memory block."""
    graphs = build_block(BlockParams(L=L, depth=L, kind=MEMORY))
    table = run_trials(graphs, model, [], n_trials, master_seed, workers=workers)
    return float(table.failure.mean())


def estimate_threshold(
    sizes: list,
    grid: np.ndarray,
    n_per_point: int,
    master_seed: int,
    ray: tuple = (1.0, 0.0),
    workers: Optional[int] = None,
    progress: bool = False,
) -> ThresholdEstimate:
    """Locate the bulk threshold as the crossing of memory failure curves.

    ``ray=(pauli_coeff, erasure_coeff)`` maps a grid value x to the model
    (p_error, p_erasure) = (pauli_coeff*x, erasure_coeff*x).  Each size's
    curve is fitted locally by a quadratic near the crossing; the estimate
    is the mean of all pairwise crossings (reported individually).
    """
    if len(sizes) < 2:
        raise ValueError("need at least two sizes")
    grid = np.asarray(sorted(grid), dtype=np.float64)
    fail = {}
    for si, L in enumerate(sizes):
        rates = []
        for xi, x in enumerate(grid):
            model = ErrorModel(p_error=ray[0] * x, p_erasure=ray[1] * x)
            seed = derive_trial_seed(master_seed, 1_000_000 + si * 10_000 + xi)
            rates.append(memory_failure_rate(L, model, n_per_point, seed, workers=workers))
            if progress:
                print(f"\rcalibration L={L} x={x:.5g} fail={rates[-1]:.4f}   ", end="", file=sys.stderr, flush=True)
        fail[L] = np.asarray(rates)
    if progress:
        print("", file=sys.stderr)

    crossings = {}
    for i in range(len(sizes)):
        for j in range(i + 1, len(sizes)):
            a, b = sizes[i], sizes[j]
            x = _pair_crossing(grid, fail[a], fail[b])
            if x is not None:
                crossings[(a, b)] = x
    npairs = len(sizes) * (len(sizes) - 1) // 2
    ok = len(crossings) == npairs
    p_star = float(np.mean(list(crossings.values()))) if crossings else None
    return ThresholdEstimate(
        p_star=p_star,
        crossings=crossings,
        sizes=list(sizes),
        grid=grid,
        fail_rates=fail,
        n_per_point=n_per_point,
        ok=ok,
    )


def _pair_crossing(grid: np.ndarray, f_small: np.ndarray, f_big: np.ndarray) -> Optional[float]:
    """Crossing of two failure curves via local quadratic fits."""
    diff = f_big - f_small
    sign = np.sign(diff)
    bracket = None
    for i in range(len(grid) - 1):
        if sign[i] < 0 <= sign[i + 1]:
            bracket = i  # keep the last sign change: below threshold the
            # difference is noise around zero, above it stays positive
    if bracket is None:
        return None
    lo = max(0, bracket - 1)
    hi = min(len(grid), bracket + 3)
    xs = grid[lo:hi]
    if len(xs) >= 3:
        qa = np.polyfit(xs, f_small[lo:hi], 2)
        qb = np.polyfit(xs, f_big[lo:hi], 2)
        roots = np.roots(qb - qa)
        roots = [r.real for r in roots if abs(r.imag) < 1e-12 and grid[bracket] - 1e-12 <= r.real <= grid[bracket + 1] + 1e-12]
        if roots:
            return float(min(roots, key=lambda r: abs(r - grid[bracket])))
    # fall back to linear interpolation inside the bracket
    d0, d1 = diff[bracket], diff[bracket + 1]
    if d1 == d0:
        return float(grid[bracket])
    t = -d0 / (d1 - d0)
    return float(grid[bracket] + t * (grid[bracket + 1] - grid[bracket]))


def _default_workers() -> int:
    env = os.environ.get("PREPSEL_WORKERS")
    if env:
        return max(int(env), 1)
    return max(os.cpu_count() or 1, 1)


# ---- output writers ----


def _fmt(x) -> str:
    return repr(float(x))


def write_trials_jsonl(table: TrialTable, path) -> None:
    """One JSON record per trial: seed, scores, per-membrane outcome."""
    membranes = ("primal", "dual")
    with open(path, "w") as f:
        for i in range(table.n_trials):
            rec = {
                "trial": i,
                "trial_seed": derive_trial_seed(table.master_seed, i),
                "scores": {
                    label: (list(map(float, (s[0][i], s[1][i]))) if isinstance(s, tuple) else float(s[i]))
                    for label, s in table.scores.items()
                },
                "membranes": {
                    gid: {
                        "w_class0": float(table.gap0[gid][i]),
                        "w_class1": float(table.gap1[gid][i]),
                        "tie": bool(table.tie[gid][i]),
                        "true_class": int(table.true_cls[gid][i]),
                        "decoded_class": int(table.decoded_cls[gid][i]),
                    }
                    for gid in membranes
                },
                "failure": float(table.failure[i]),
            }
            f.write(json.dumps(rec, separators=(",", ":")) + "\n")


def write_curves_csv(curves: list, path) -> None:
    with open(path, "w") as f:
        f.write("rule,kappa,p_enc,stderr\n")
        for c in curves:
            for i in range(len(c.kappa)):
                f.write(f"{c.rule},{_fmt(c.kappa[i])},{_fmt(c.p_enc[i])},{_fmt(c.stderr[i])}\n")


def write_diagnostics_csv(diags: list, path) -> None:
    with open(path, "w") as f:
        f.write("rule,score_bin_lo,score_bin_hi,count,eer,stderr\n")
        for d in diags:
            for i in range(len(d.bin_lo)):
                if d.count[i] == 0:
                    continue
                f.write(
                    f"{d.rule},{_fmt(d.bin_lo[i])},{_fmt(d.bin_hi[i])},{int(d.count[i])},{_fmt(d.eer[i])},{_fmt(d.stderr[i])}\n"
                )


def write_breakeven_csv(rows: list, path) -> None:
    """rows: dicts with rule, p_error, p_erasure, p_init, breakeven|None."""
    with open(path, "w") as f:
        f.write("rule,p_error,p_erasure,p_init,kappa_star,overhead\n")
        for r in rows:
            be = r.get("breakeven")
            ks = _fmt(be.kappa_star) if be else ""
            ov = _fmt(be.overhead) if be else ""
            f.write(f"{r['rule']},{_fmt(r['p_error'])},{_fmt(r['p_erasure'])},{_fmt(r['p_init'])},{ks},{ov}\n")
