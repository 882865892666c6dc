"""Sampler-comparison studies at equal computational cost.

Every replicate builds one subsample, plans on it, and scores the resulting
design on the full dataset. Compute is counted as the number of timesteps fed
to the planner, so an importance-subsampling replicate at compute level N runs
two solves of N/2 timesteps each (with ``compute_equivalent`` on).

Replicate seeds are ``int.from_bytes(blake2b(f"{base_seed}:{sampler}:{size}:{i}",
digest_size=8), "big")``; results are ordered by (run, replicate) regardless of
how many worker processes were used.
"""

from __future__ import annotations

import hashlib
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .clustering import build_day_vectors, cluster_days, representative_subsample
from .config import ExperimentPlan, RunSpec
from .errors import PsplanError, ValidationError
from .evaluation import adequacy, extra_system_cost, summarize_distribution, system_cost
from .model import TECHNOLOGIES, TechnologyParams, plan_capacity
from .sampling import SamplerConfig, importance_estimate, individual_year, random_subsample
from .timeseries import WeightedTimeseries

log = logging.getLogger(__name__)

RESULT_COLUMNS = (
    "sampler",
    "compute_level",
    "compute",
    "replicate",
    "seed",
    "sample_size",
    "label",
    "cap_baseload",
    "cap_mid_merit",
    "cap_peaking",
    "cap_wind",
    "hours_unmet",
    "extra_system_cost",
    "status",
)
CAP_COLUMNS = RESULT_COLUMNS[7:11]
METRICS = (*CAP_COLUMNS, "hours_unmet", "extra_system_cost")


def replicate_seed(base_seed: int, sampler: str, size: int, i: int) -> int:
    digest = hashlib.blake2b(f"{base_seed}:{sampler}:{size}:{i}".encode(), digest_size=8).digest()
    return int.from_bytes(digest, "big")


@dataclass
class ExperimentOutcome:
    rows: list
    optimum: dict
    timings: list = field(default_factory=list)

    @property
    def failed(self) -> int:
        return sum(r["status"] != "ok" for r in self.rows)


class _CountingPlanner:
    def __init__(self):
        self.timesteps = 0
        self.calls = 0

    def __call__(self, ts, params):
        self.timesteps += len(ts)
        self.calls += 1
        return plan_capacity(ts, params)


# worker state, installed once per process
_STATE = {}


def _init_worker(ts, params, optimal_cost, n_high, compute_equivalent):
    _STATE.update(ts=ts, params=params, optimal_cost=optimal_cost, n_high=n_high, compute_equivalent=compute_equivalent)
    _STATE["day_vectors"] = None


def _day_vectors():
    if _STATE.get("day_vectors") is None:
        _STATE["day_vectors"] = build_day_vectors(_STATE["ts"])
    return _STATE["day_vectors"]


def _years(ts):
    return [int(y) for y in np.unique(ts.years)] if ts.years is not None else []


def tasks_for(run: RunSpec, base_seed: int, ts: WeightedTimeseries):
    """(run, replicate index, seed, label) for every replicate of ``run``."""
    if run.sampler == "individual_year":
        years = _years(ts)
        if not years:
            raise ValidationError("individual-year sampling needs timestamps")
        return [(run, i, 0, str(y)) for i, y in enumerate(years)]
    return [(run, i, replicate_seed(base_seed, run.sampler, run.size, i), "") for i in range(run.replicates)]


def _run_replicate(task):
    run, i, seed, label = task
    ts, params = _STATE["ts"], _STATE["params"]
    planner = _CountingPlanner()
    row = {"sampler": run.sampler, "replicate": i, "seed": seed, "label": label}
    t0 = time.perf_counter()
    try:
        if run.sampler == "random":
            sub = random_subsample(ts, run.size, seed)
            design = planner(sub.apply(ts), params).design
            row["sample_size"] = len(sub)
        elif run.sampler == "importance":
            n_s = run.size // 2 if _STATE["compute_equivalent"] else run.size
            cfg = SamplerConfig(len(ts), n_s, _STATE["n_high"], seed, "importance")
            plan, sub, _ = importance_estimate(ts, params, cfg, planner=planner)
            design = plan.design
            row["sample_size"] = n_s
        elif run.sampler == "representative_days":
            k = run.size // 24
            model = cluster_days(_day_vectors(), k, seed)
            sub = representative_subsample(ts, model)
            design = planner(sub.apply(ts), params).design
            row["sample_size"] = len(sub)
        elif run.sampler == "individual_year":
            sub = individual_year(ts, int(label))
            design = planner(sub.apply(ts), params).design
            row["sample_size"] = len(sub)
        else:
            raise ValidationError(f"unknown sampler {run.sampler!r}")
        row["hours_unmet"] = adequacy(ts, params, design).hours_unmet
        row["extra_system_cost"] = extra_system_cost(ts, params, design, _STATE["optimal_cost"]).extra_system_cost
        for col, tech in zip(CAP_COLUMNS, TECHNOLOGIES):
            row[col] = getattr(design, tech)
        row["status"] = "ok"
    except PsplanError as exc:
        log.warning("replicate %s/%s/%d failed: %s", run.sampler, run.size, i, exc)
        row.setdefault("sample_size", 0)
        for col in (*CAP_COLUMNS, "hours_unmet", "extra_system_cost"):
            row[col] = math.nan
        row["status"] = f"failed: {exc}"
    row["compute"] = planner.timesteps
    return row, time.perf_counter() - t0


def full_optimum(ts: WeightedTimeseries, params: TechnologyParams) -> dict:
    full = WeightedTimeseries.uniform(ts.demand, ts.wind_cf, ts.time)
    sol = plan_capacity(full, params)
    out = {col: getattr(sol.design, t) for col, t in zip(CAP_COLUMNS, TECHNOLOGIES)}
    out["system_cost"] = system_cost(full, params, sol.design)
    out["timesteps"] = len(ts)
    return out


def run_experiment(plan: ExperimentPlan, ts: WeightedTimeseries, params: TechnologyParams, jobs: int = 1, optimum=None) -> ExperimentOutcome:
    optimum = optimum or full_optimum(ts, params)
    tasks = [t for run in plan.runs for t in tasks_for(run, plan.base_seed, ts)]
    init_args = (ts, params, optimum["system_cost"], plan.n_high, plan.compute_equivalent)
    if jobs <= 1:
        _init_worker(*init_args)
        outputs = [_run_replicate(t) for t in tasks]
    else:
        with ProcessPoolExecutor(max_workers=jobs, initializer=_init_worker, initargs=init_args) as pool:
            outputs = list(pool.map(_run_replicate, tasks, chunksize=1))
    rows, timings = [], []
    for (run, i, _, label), (row, wall) in zip(tasks, outputs):
        row["compute_level"] = run.size
        rows.append(row)
        timings.append({"sampler": run.sampler, "compute": run.size, "replicate": i, "wall_seconds": wall})
    return ExperimentOutcome(rows, optimum, timings)


def summarize_experiment(rows, optimum: dict) -> list:
    """Long-format table: one record per (sampler, compute level, metric, statistic).

    ``bias`` is the median minus the full-data optimum (zero for the shortage
    and extra-cost metrics).
    """
    ok = [r for r in rows if r["status"] == "ok"]
    if not ok:
        raise ValidationError("no successful replicates to summarise")
    groups = {}
    for r in ok:
        groups.setdefault((r["sampler"], r.get("compute_level", r["compute"])), []).append(r)
    out = []
    for (sampler, level), members in groups.items():
        for metric in METRICS:
            stats = summarize_distribution([m[metric] for m in members])
            target = optimum.get(metric, 0.0)
            stats["bias"] = stats["p50"] - target
            stats["n"] = len(members)
            for name, value in stats.items():
                out.append({"sampler": sampler, "compute": level, "metric": metric, "statistic": name, "value": value})
    return out
