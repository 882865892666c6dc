"""Command-line front end.

Exit codes: 0 success, 1 validation error, 2 solver failure (including any
failed replicate in ``experiment``).
"""

from __future__ import annotations

import argparse
import csv
import json
import logging
import math
import sys
from importlib import resources
from pathlib import Path

import numpy as np

from . import config
from .clustering import build_day_vectors, cluster_days, representative_subsample
from .data import load_csv, save_csv, synthesize_dataset
from .errors import SolverError, ValidationError
from .evaluation import adequacy, cross_year_matrix, extra_system_cost, wind_cost_curve
from .experiment import RESULT_COLUMNS, full_optimum, run_experiment, summarize_experiment
from .model import SystemDesign, TechnologyParams, plan_capacity, plan_capacity_fixed_wind
from .sampling import SamplerConfig, Subsample, importance_subsample, individual_year, random_subsample

log = logging.getLogger("psplan")


def bundled(name: str) -> Path:
    return Path(str(resources.files("psplan") / "resources" / name))


# ---------------------------------------------------------------- output helpers


def _fmt(v):
    if isinstance(v, float):
        return repr(v)
    if isinstance(v, (np.floating,)):
        return repr(float(v))
    if isinstance(v, (np.integer,)):
        return str(int(v))
    return v


def write_csv(rows, columns, target):
    """Write dict rows; ``target`` is a path or an open text stream."""
    if hasattr(target, "write"):
        writer = csv.DictWriter(target, fieldnames=list(columns), lineterminator="\n", extrasaction="ignore")
        writer.writeheader()
        for r in rows:
            writer.writerow({k: _fmt(r.get(k, "")) for k in columns})
        return
    with open(target, "w", newline="") as fh:
        write_csv(rows, columns, fh)


def read_csv_rows(path):
    with open(path, newline="") as fh:
        return list(csv.DictReader(fh))


def _json_default(o):
    if isinstance(o, np.generic):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    if isinstance(o, SystemDesign):
        return o.as_dict()
    raise TypeError(type(o))


def emit(args, payload: dict, rows=None, columns=None):
    """Print or save a result as JSON, or as CSV when ``rows`` are given."""
    out = getattr(args, "out", None)
    if args.format == "csv" and rows is not None:
        if out:
            write_csv(rows, columns, out)
        else:
            write_csv(rows, columns, sys.stdout)
        return
    text = json.dumps(payload, indent=2, sort_keys=True, default=_json_default)
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


# ---------------------------------------------------------------- loaders


def _params(args) -> TechnologyParams:
    return config.load_technology(args.tech) if getattr(args, "tech", None) else TechnologyParams.default()


def _dataset(args):
    return load_csv(args.data or bundled("tiny.csv"))


def _design(path) -> SystemDesign:
    raw = json.loads(Path(path).read_text())
    raw = raw.get("design", raw)
    try:
        return SystemDesign(**{k: float(raw[k]) for k in ("baseload", "mid_merit", "peaking", "wind")})
    except KeyError as exc:
        raise ValidationError(f"{path}: design missing {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_synth(args):
    kw = {}
    seed = args.seed
    start, years = args.start_year, args.years
    if args.config:
        v = config.read_flat(args.config)
        root = Path(args.config).parent
        start = int(v.get("start_year", start))
        years = int(v.get("years", years))
        seed = int(v.get("seed", seed)) if args.seed is None else seed
        for key in ("wind_mean_cf", "wind_persistence", "wind_spread"):
            if key in v:
                kw[key] = float(v[key])
        if "detrend" in v:
            kw["apply_detrend"] = config.parse_bool(v["detrend"])
        if "demand_params" in v:
            kw["demand_params"] = config.load_demand_params(root / v["demand_params"])
        if "profiles" in v:
            kw["profiles"] = config.load_profiles(root / v["profiles"])
        if "temperature_csv" in v:
            kw["temperatures"] = config.load_temperature_csv(root / v["temperature_csv"])
        if "holidays" in v:
            kw["holidays"] = config.load_holidays(root / v["holidays"])
    ts = synthesize_dataset(start, years, seed or 0, **kw)
    if not args.out:
        raise ValidationError("synth needs --out")
    save_csv(ts, args.out)
    print(json.dumps({"timesteps": len(ts), "path": str(args.out)}))


def cmd_plan(args):
    ts = _dataset(args)
    params = _params(args)
    if args.subsample:
        ts = Subsample.from_csv(args.subsample).apply(ts)
    sol = plan_capacity(ts, params) if args.wind is None else plan_capacity_fixed_wind(ts, params, args.wind)
    payload = {"design": sol.design.as_dict(), "objective": sol.objective, "timesteps": len(ts), "diagnostics": sol.diagnostics}
    row = {**sol.design.as_dict(), "objective": sol.objective}
    emit(args, payload, [row], list(row))


def cmd_sample(args):
    ts = _dataset(args)
    seed = args.seed or 0
    if args.kind == "random":
        sub = random_subsample(ts, args.size, seed)
    elif args.kind == "importance":
        cfg = SamplerConfig(len(ts), args.size, args.n_high, seed, "importance")
        sub, _ = importance_subsample(ts, _params(args), cfg)
    elif args.kind == "individual_year":
        if args.year is None:
            raise ValidationError("--year is required for individual_year")
        sub = individual_year(ts, args.year)
    else:
        model = cluster_days(build_day_vectors(ts), args.size // 24, seed)
        sub = representative_subsample(ts, model)
    if not args.out:
        raise ValidationError("sample needs --out")
    sub.to_csv(args.out)
    print(json.dumps({"kind": args.kind, "timesteps": len(sub), "path": str(args.out)}))


def cmd_evaluate(args):
    ts = _dataset(args)
    params = _params(args)
    design = _design(args.design)
    adq = adequacy(ts, params, design)
    cost = extra_system_cost(ts, params, design)
    payload = {"design": design.as_dict(), "adequacy": adq.as_dict(), "cost": cost.as_dict()}
    row = {**design.as_dict(), "hours_unmet": adq.hours_unmet, "unserved_energy": adq.unserved_energy,
           "max_shortfall": adq.max_shortfall, **{k: v for k, v in cost.as_dict().items() if k != "augmented_design"}}
    emit(args, payload, [row], list(row))


def cmd_matrix(args):
    ts = _dataset(args)
    m = cross_year_matrix(ts, _params(args))
    rows = list(m.rows())
    payload = {
        "years": m.years,
        "hours_unmet": m.hours.tolist(),
        "designs": {str(y): d.as_dict() for y, d in m.designs.items()},
        "p_shortage_ge_1h": m.exceedance(1),
        "p_shortage_ge_3h": m.exceedance(3),
    }
    emit(args, payload, rows, ["design_year", "test_year", "hours_unmet"])


def _grid(text: str):
    if ":" in text:
        lo, hi, step = (float(x) for x in text.split(":"))
        n = int(math.floor((hi - lo) / step + 1e-9)) + 1
        return [lo + i * step for i in range(n)]
    return [float(x) for x in text.split(",")]


def cmd_windcurve(args):
    ts = _dataset(args)
    curve = wind_cost_curve(ts, _params(args), _grid(args.grid))
    rows = [{"wind_gw": x, "system_cost": y} for x, y in curve]
    emit(args, {"curve": rows}, rows, ["wind_gw", "system_cost"])


def _write_experiment(outdir: Path, outcome, summary):
    outdir.mkdir(parents=True, exist_ok=True)
    write_csv(outcome.rows, RESULT_COLUMNS, outdir / "results.csv")
    write_csv(summary, ["sampler", "compute", "metric", "statistic", "value"], outdir / "summary.csv")
    (outdir / "optimum.json").write_text(json.dumps(outcome.optimum, indent=2, sort_keys=True) + "\n")
    write_csv(outcome.timings, ["sampler", "compute", "replicate", "wall_seconds"], outdir / "timings.csv")


def cmd_experiment(args):
    plan = config.load_experiment(args.config)
    overrides = {}
    if args.seed is not None:
        overrides["base_seed"] = args.seed
    if args.compute_equivalent is not None:
        overrides["compute_equivalent"] = args.compute_equivalent
    if overrides:
        from dataclasses import replace

        plan = replace(plan, **overrides)
    outdir = Path(args.out) if args.out else plan.output
    if outdir is None:
        raise ValidationError("experiment needs --out or an 'output' key")
    ts = load_csv(plan.dataset)
    params = config.load_technology(plan.technology) if plan.technology else TechnologyParams.default()
    if getattr(args, "tech", None):
        params = _params(args)
    outcome = run_experiment(plan, ts, params, jobs=args.jobs, optimum=full_optimum(ts, params))
    ok = [r for r in outcome.rows if r["status"] == "ok"]
    summary = summarize_experiment(outcome.rows, outcome.optimum) if ok else []
    _write_experiment(outdir, outcome, summary)
    print(json.dumps({"replicates": len(outcome.rows), "failed": outcome.failed, "output": str(outdir)}))
    if outcome.failed:
        raise SolverError(f"{outcome.failed} replicate(s) failed")


def _coerce(row):
    out = dict(row)
    for k in RESULT_COLUMNS:
        if k in ("sampler", "label", "status"):
            continue
        if k in out and out[k] != "":
            out[k] = float(out[k])
    if "compute_level" in out:
        out["compute_level"] = int(out["compute_level"])
    return out


def cmd_summarize(args):
    rows = [_coerce(r) for r in read_csv_rows(args.results)]
    optimum_path = Path(args.optimum) if args.optimum else Path(args.results).with_name("optimum.json")
    optimum = json.loads(optimum_path.read_text())
    summary = summarize_experiment(rows, optimum)
    emit(args, {"summary": summary}, summary, ["sampler", "compute", "metric", "statistic", "value"])


# ---------------------------------------------------------------- parser


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--out", default=None, help="output file or directory")
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--jobs", type=int, default=1, help="parallel worker processes")
    common.add_argument("--tech", default=None, help="technology cost file")
    common.add_argument("-v", "--verbose", action="store_true")

    data = argparse.ArgumentParser(add_help=False)
    data.add_argument("--data", default=None, help="timeseries CSV (default: bundled tiny dataset)")

    p = argparse.ArgumentParser(prog="psplan", description="Capacity planning with timeseries subsampling")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("synth", parents=[common], help="generate a synthetic dataset")
    s.add_argument("--config", default=None)
    s.add_argument("--start-year", type=int, default=2006)
    s.add_argument("--years", type=int, default=10)
    s.set_defaults(func=cmd_synth)

    s = sub.add_parser("plan", parents=[common, data], help="solve the planning problem")
    s.add_argument("--subsample", default=None, help="subsample CSV to plan on")
    s.add_argument("--wind", type=float, default=None, help="fix wind capacity (GW)")
    s.set_defaults(func=cmd_plan)

    s = sub.add_parser("sample", parents=[common, data], help="write a subsample CSV")
    s.add_argument("--kind", choices=("random", "importance", "individual_year", "representative_days"), default="importance")
    s.add_argument("--size", type=int, default=480)
    s.add_argument("--n-high", type=int, default=60)
    s.add_argument("--year", type=int, default=None)
    s.set_defaults(func=cmd_sample)

    s = sub.add_parser("evaluate", parents=[common, data], help="score a design on a dataset")
    s.add_argument("--design", required=True, help="design JSON")
    s.set_defaults(func=cmd_evaluate)

    s = sub.add_parser("matrix", parents=[common, data], help="cross-year shortage matrix")
    s.set_defaults(func=cmd_matrix)

    s = sub.add_parser("windcurve", parents=[common, data], help="system cost against fixed wind capacity")
    s.add_argument("--grid", default="0:40:2", help="lo:hi:step or comma list (GW)")
    s.set_defaults(func=cmd_windcurve)

    s = sub.add_parser("experiment", parents=[common], help="run a sampler-comparison study")
    s.add_argument("config")
    g = s.add_mutually_exclusive_group()
    g.add_argument("--compute-equivalent", dest="compute_equivalent", action="store_true", default=None)
    g.add_argument("--no-compute-equivalent", dest="compute_equivalent", action="store_false")
    s.set_defaults(func=cmd_experiment)

    s = sub.add_parser("summarize", parents=[common], help="summarise an experiment's results.csv")
    s.add_argument("results")
    s.add_argument("--optimum", default=None, help="optimum.json (default: next to results)")
    s.set_defaults(func=cmd_summarize)
    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        args.func(args)
    except (ValidationError, FileNotFoundError) as exc:
        return _fail(args, exc, 1)
    except SolverError as exc:
        return _fail(args, exc, 2)
    return 0


def _fail(args, exc, code):
    if args.format == "json":
        print(json.dumps({"error": str(exc), "type": type(exc).__name__, "exit_code": code}))
    else:
        print(f"error: {exc}", file=sys.stderr)
    return code


if __name__ == "__main__":
    sys.exit(main())
