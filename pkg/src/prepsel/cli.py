"""Command-line entry point.

Subcommands:

* ``validate``  -- build a block and run the geometry checks
* ``calibrate`` -- estimate the bulk threshold of the memory block
* ``run``       -- preparation-block Monte Carlo experiment
* ``buffer``    -- buffer-architecture and distillation calculator

Every run writes a summary JSON echoing its configuration and master
seed; errors are reported as one JSON object on stderr with a nonzero
exit code.  Worker count comes from ``--threads`` or the
``PREPSEL_WORKERS`` environment variable; outputs are byte-identical for
any worker count.
"""

from __future__ import annotations

import argparse
import json
import os
import sys

import numpy as np

from . import buffer as bufmod
from .experiment import (
    breakeven,
    eer_curve,
    estimate_threshold,
    run_trials,
    score_diagnostics,
    write_breakeven_csv,
    write_curves_csv,
    write_diagnostics_csv,
    write_trials_jsonl,
)
from .geometry import MEMORY, PREPARATION, BlockParams, build_block, validate_block
from .noise import ErrorModel
from .rules import RuleConfig, default_rules

RAYS = {
    "pauli": (1.0, 0.0),
    "1:1": (1.0, 1.0),
    "1:1/9": (1.0 / 9.0, 1.0),
}


class ConfigError(Exception):
    pass


def _fail(msg: str, code: int = 2) -> int:
    print(json.dumps({"error": msg}), file=sys.stderr)
    return code


def _load_config(path: str) -> dict:
    try:
        with open(path) as f:
            return json.load(f)
    except (OSError, json.JSONDecodeError) as e:
        raise ConfigError(f"cannot read config {path}: {e}")


def _parse_rules(cfg: dict) -> list:
    spec = cfg.get("rules")
    if spec is None:
        return default_rules()
    if isinstance(spec, list):
        out = []
        for item in spec:
            try:
                out.append(RuleConfig(**item))
            except (TypeError, ValueError) as e:
                raise ConfigError(f"bad rule entry {item}: {e}")
        return out
    if isinstance(spec, dict):
        rules = default_rules(
            annular_alpha=spec.get("annular_alpha", 1.0),
            radial_alpha=spec.get("radial_alpha", 0.1),
        )
        if spec.get("include_surviving"):
            rules.append(RuleConfig(kind="surviving", c=spec.get("surviving_c", 0.0)))
        return rules
    raise ConfigError("rules must be a list or a dict")


def _resolve_model(cfg: dict) -> tuple:
    noise = cfg.get("noise")
    if not isinstance(noise, dict):
        raise ConfigError("config needs a 'noise' section")
    mode = noise.get("mode", "absolute")
    if mode == "absolute":
        model = ErrorModel(
            p_error=float(noise.get("p_error", 0.0)),
            p_erasure=float(noise.get("p_erasure", 0.0)),
        )
        return model, None
    if mode == "fraction":
        ray = noise.get("ray", "pauli")
        if ray not in RAYS:
            raise ConfigError(f"unknown ray {ray!r}; options: {sorted(RAYS)}")
        threshold = noise.get("threshold")
        if threshold is None and noise.get("threshold_file"):
            doc = _load_config(noise["threshold_file"])
            threshold = doc.get("p_star")
        if threshold is None:
            raise ConfigError(
                "fraction-of-threshold mode needs noise.threshold (or a "
                "threshold_file from 'calibrate') before prep-block trials"
            )
        x = float(noise["fraction"]) * float(threshold)
        pauli_c, erasure_c = RAYS[ray]
        return ErrorModel(p_error=pauli_c * x, p_erasure=erasure_c * x), float(threshold)
    raise ConfigError(f"unknown noise mode {mode!r}")


def _cmd_validate(args) -> int:
    params = BlockParams(L=args.L, depth=args.depth, kind=args.kind)
    graphs = build_block(params)
    report = validate_block(graphs)
    doc = {
        "params": {"L": params.L, "depth": params.depth, "kind": params.kind},
        "ok": report.ok,
        "graphs": {
            gid: {
                "bulk_distance": r.bulk_distance,
                "min_fault_weight": r.min_fault_weight,
                "cut_parity_ok": r.cut_parity_ok,
                "structure_ok": r.structure_ok,
                "messages": r.messages,
            }
            for gid, r in report.graphs.items()
        },
    }
    print(json.dumps(doc, indent=1))
    if args.json:
        with open(args.json, "w") as f:
            f.write(graphs.to_json())
    return 0 if report.ok else 3


def _cmd_calibrate(args) -> int:
    cfg = _load_config(args.config)
    sizes = cfg.get("sizes", [4, 6, 8])
    ray_name = cfg.get("ray", "pauli")
    if ray_name not in RAYS:
        raise ConfigError(f"unknown ray {ray_name!r}")
    ray = RAYS[ray_name]
    seed = int(args.seed if args.seed is not None else cfg.get("master_seed", 0))
    n_per_point = int(cfg.get("n_per_point", 20000))
    grid_cfg = cfg.get("grid", "auto")
    workers = args.threads

    if grid_cfg == "auto":
        est = _auto_calibrate(
            sizes, ray, n_per_point, seed,
            coarse_n=int(cfg.get("coarse_n", 4000)),
            lo=float(cfg.get("scan_lo", 5e-3)),
            hi=float(cfg.get("scan_hi", 0.2)),
            workers=workers, progress=args.progress,
        )
    else:
        if isinstance(grid_cfg, dict):
            grid = np.geomspace(float(grid_cfg["lo"]), float(grid_cfg["hi"]), int(grid_cfg.get("num", 7)))
        else:
            grid = np.asarray([float(x) for x in grid_cfg])
        est = estimate_threshold(sizes, grid, n_per_point, seed, ray=ray, workers=workers, progress=args.progress)

    doc = {
        "command": "calibrate",
        "config": cfg,
        "master_seed": seed,
        "ray": ray_name,
        "p_star": est.p_star,
        "ok": est.ok,
        "crossings": {f"{a}x{b}": x for (a, b), x in est.crossings.items()},
        "grid": [float(x) for x in est.grid],
        "fail_rates": {str(L): [float(v) for v in r] for L, r in est.fail_rates.items()},
        "n_per_point": est.n_per_point,
    }
    os.makedirs(args.out, exist_ok=True)
    path = os.path.join(args.out, "threshold.json")
    with open(path, "w") as f:
        json.dump(doc, f, indent=1)
    print(json.dumps({"p_star": est.p_star, "ok": est.ok, "written": path}))
    return 0 if est.ok else 3


def _auto_calibrate(sizes, ray, n_per_point, seed, coarse_n, lo, hi, workers, progress):
    """Two-phase calibration: a coarse bracket scan then a fine grid,
    widened once if the crossing falls outside the first window."""
    coarse = np.geomspace(lo, hi, 12)
    est0 = estimate_threshold(
        [min(sizes), max(sizes)], coarse, coarse_n, seed + 1, ray=ray, workers=workers, progress=progress
    )
    center = est0.p_star
    if center is None:
        raise ConfigError(
            f"no threshold crossing found while scanning [{lo}, {hi}]; "
            "pass an explicit grid"
        )
    est = None
    for halfwidth in (0.3, 0.6):
        fine = np.linspace((1 - halfwidth) * center, (1 + halfwidth) * center, 7)
        est = estimate_threshold(sizes, fine, n_per_point, seed, ray=ray, workers=workers, progress=progress)
        if est.p_star is not None:
            return est
    return est


def _cmd_run(args) -> int:
    cfg = _load_config(args.config)
    block = cfg.get("block", {})
    params = BlockParams(
        L=int(block.get("L", 8)),
        depth=int(block.get("depth", block.get("L", 8))),
        kind=PREPARATION,
    )
    model, threshold_used = _resolve_model(cfg)
    rules = _parse_rules(cfg)
    n_trials = int(cfg.get("n_trials", 100000))
    seed = int(args.seed if args.seed is not None else cfg.get("master_seed", 0))
    p_init = cfg.get("p_init")
    p_init = float(p_init) if p_init is not None else model.p_error

    graphs = build_block(params)
    report = validate_block(graphs)
    if not report.ok:
        raise ConfigError(f"block validation failed: "
                          f"{ {g: r.messages for g, r in report.graphs.items()} }")

    kappa_grid = None
    if args.kappa_grid:
        kappa_grid = np.asarray([float(x) for x in args.kappa_grid.split(",")])

    table = run_trials(graphs, model, rules, n_trials, seed, workers=args.threads, progress=args.progress)

    curves, diags, be_rows = [], [], []
    breakevens = {}
    for rule in rules:
        curve = eer_curve(table, rule.label, kappa_grid)
        curves.append(curve)
        be = breakeven(curve, p_init)
        breakevens[rule.label] = (
            {"kappa_star": be.kappa_star, "overhead": be.overhead} if be else None
        )
        be_rows.append(
            {
                "rule": rule.label,
                "p_error": model.p_error,
                "p_erasure": model.p_erasure,
                "p_init": p_init,
                "breakeven": be,
            }
        )
        if rule.kind != "nested":
            diags.append(score_diagnostics(table, rule.label))

    os.makedirs(args.out, exist_ok=True)
    paths = {
        "trials": os.path.join(args.out, "trials.jsonl"),
        "curves": os.path.join(args.out, "curves.csv"),
        "diagnostics": os.path.join(args.out, "diagnostics.csv"),
        "breakeven": os.path.join(args.out, "breakeven.csv"),
        "summary": os.path.join(args.out, "summary.json"),
    }
    write_trials_jsonl(table, paths["trials"])
    write_curves_csv(curves, paths["curves"])
    write_diagnostics_csv(diags, paths["diagnostics"])
    write_breakeven_csv(be_rows, paths["breakeven"])

    p1 = float(table.failure.mean()) if n_trials else None
    summary = {
        "command": "run",
        "config": cfg,
        "master_seed": seed,
        "block": {"L": params.L, "depth": params.depth, "kind": params.kind},
        "p_error": model.p_error,
        "p_erasure": model.p_erasure,
        "p_init": p_init,
        "threshold_used": threshold_used,
        "n_trials": n_trials,
        "rules": [
            {"kind": r.kind, "label": r.label, "alpha": r.alpha, "c": r.c, "a": list(r.a)}
            for r in rules
        ],
        "p_enc_unselected": p1,
        "breakevens": breakevens,
        "outputs": {k: os.path.basename(v) for k, v in paths.items()},
    }
    with open(paths["summary"], "w") as f:
        json.dump(summary, f, indent=1)
    print(json.dumps({"p_enc_unselected": p1, "breakevens": breakevens, "out": args.out}))
    return 0


def _cmd_buffer(args) -> int:
    spec = _load_config(args.spec)
    try:
        dist = None
        if "distillation" in spec:
            d = spec["distillation"]
            dist = bufmod.DistillationSpec(
                c=float(d["c"]), k=float(d["k"]),
                m_in=int(d.get("m_in", 15)), m_out=int(d.get("m_out", 1)),
            )
        report = bufmod.buffer_report(
            m_in=int(spec["m_in"]),
            kappa=float(spec["kappa"]),
            p_flush=float(spec["p_flush"]),
            p_init=spec.get("p_init"),
            p_enc=spec.get("p_enc"),
            distillation=dist,
            rounds=int(spec.get("rounds", 1)),
        )
    except (KeyError, ValueError, OverflowError) as e:
        raise ConfigError(f"bad buffer spec: {e}")
    report["command"] = "buffer"
    report["config"] = spec
    out = args.out or "buffer_report.json"
    with open(out, "w") as f:
        json.dump(report, f, indent=1)
    print(json.dumps({"capacity": report["capacity"], "written": out}))
    return 0


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="prepsel",
        description="Surface-code magic-state preparation post-selection simulator",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    v = sub.add_parser("validate", help="build a block and check its geometry")
    v.add_argument("--L", type=int, required=True)
    v.add_argument("--depth", type=int, required=True)
    v.add_argument("--kind", choices=[PREPARATION, MEMORY], default=PREPARATION)
    v.add_argument("--json", help="also dump the graphs to this JSON file")
    v.set_defaults(fn=_cmd_validate)

    c = sub.add_parser("calibrate", help="estimate the memory-block bulk threshold")
    c.add_argument("--config", required=True)
    c.add_argument("--out", required=True)
    c.add_argument("--seed", type=int)
    c.add_argument("--threads", type=int)
    c.add_argument("--progress", action="store_true")
    c.set_defaults(fn=_cmd_calibrate)

    r = sub.add_parser("run", help="preparation-block post-selection experiment")
    r.add_argument("--config", required=True)
    r.add_argument("--out", required=True)
    r.add_argument("--seed", type=int)
    r.add_argument("--threads", type=int)
    r.add_argument("--kappa-grid", help="comma-separated keep fractions")
    r.add_argument("--progress", action="store_true")
    r.set_defaults(fn=_cmd_run)

    b = sub.add_parser("buffer", help="buffer and distillation calculator")
    b.add_argument("--spec", required=True)
    b.add_argument("--out")
    b.set_defaults(fn=_cmd_buffer)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    if getattr(args, "threads", None):
        os.environ["PREPSEL_WORKERS"] = str(args.threads)
    try:
        return args.fn(args)
    except ConfigError as e:
        return _fail(str(e))
    except ValueError as e:
        return _fail(str(e))


if __name__ == "__main__":
    sys.exit(main())
