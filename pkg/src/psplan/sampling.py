"""Timestep subsamplers: individual years, uniform random, and two-stage importance subsampling."""

from __future__ import annotations

import csv
from dataclasses import dataclass, field
from typing import Callable, Optional

import numpy as np

from .errors import ValidationError
from .model import PlanSolution, TechnologyParams, plan_capacity, variable_cost
from .timeseries import WeightedTimeseries

SAMPLER_KINDS = ("random", "importance", "individual_year", "representative_days")
DEFAULT_N_HIGH = 60


@dataclass(frozen=True)
class SamplerConfig:
    n_full: int
    n_sample: int
    n_high: int = DEFAULT_N_HIGH
    rng_seed: int = 0
    sampler_kind: str = "importance"

    def __post_init__(self):
        if self.sampler_kind not in SAMPLER_KINDS:
            raise ValidationError(f"unknown sampler kind {self.sampler_kind!r}")
        if not 0 < self.n_sample <= self.n_full:
            raise ValidationError(f"need 0 < n_sample <= n_full, got {self.n_sample}, {self.n_full}")
        if self.sampler_kind == "importance" and not 0 < self.n_high < self.n_sample:
            raise ValidationError(f"need 0 < n_high < n_sample, got {self.n_high}, {self.n_sample}")


@dataclass(frozen=True, eq=False)
class Subsample:
    """Selected timestep indices into a full dataset, with aligned weights."""

    indices: np.ndarray
    weights: np.ndarray
    forced: np.ndarray
    provenance: dict = field(default_factory=dict)

    def __post_init__(self):
        idx = np.asarray(self.indices, dtype=np.int64)
        if np.unique(idx).size != idx.size:
            raise ValidationError("subsample indices must be distinct")
        object.__setattr__(self, "indices", idx)
        object.__setattr__(self, "weights", np.asarray(self.weights, dtype=float))
        object.__setattr__(self, "forced", np.asarray(self.forced, dtype=bool))
        if not (self.weights.shape == self.forced.shape == idx.shape):
            raise ValidationError("indices, weights and forced flags must align")
        if abs(float(np.sum(self.weights)) - 1.0) > 1e-9:
            raise ValidationError("subsample weights must sum to 1")

    def __len__(self):
        return int(self.indices.size)

    def apply(self, ts: WeightedTimeseries) -> WeightedTimeseries:
        return ts.take(self.indices, self.weights)

    def to_csv(self, path):
        with open(path, "w", newline="") as fh:
            writer = csv.writer(fh)
            writer.writerow(["index", "weight", "forced"])
            for i, w, flag in zip(self.indices, self.weights, self.forced):
                writer.writerow([int(i), repr(float(w)), int(flag)])

    @classmethod
    def from_csv(cls, path) -> "Subsample":
        with open(path, newline="") as fh:
            rows = list(csv.DictReader(fh))
        if not rows:
            raise ValidationError(f"{path}: no data rows")
        return cls(
            [int(r["index"]) for r in rows],
            [float(r["weight"]) for r in rows],
            [r["forced"] in ("1", "true", "True") for r in rows],
        )


def _uniform(indices, **provenance) -> Subsample:
    n = len(indices)
    return Subsample(indices, np.full(n, 1.0 / n), np.zeros(n, dtype=bool), provenance)


def random_subsample(ts: WeightedTimeseries, n: int, seed) -> Subsample:
    """``n`` distinct timesteps drawn uniformly without replacement, equally weighted."""
    n_full = len(ts)
    if not 0 < n <= n_full:
        raise ValidationError(f"sample size {n} outside 1..{n_full}")
    rng = np.random.default_rng(seed)
    idx = np.sort(rng.choice(n_full, size=n, replace=False))
    return _uniform(idx, kind="random", seed=seed if isinstance(seed, int) else None)


def individual_year(ts: WeightedTimeseries, year: int) -> Subsample:
    return _uniform(ts.year_slice(int(year)), kind="individual_year", year=int(year))


def rank_importance(imp, n_high: int) -> np.ndarray:
    """Indices of the ``n_high`` most important timesteps, most important first.

    Ties go to the lower index.
    """
    imp = np.asarray(imp, dtype=float)
    if not 0 <= n_high <= imp.size:
        raise ValidationError(f"n_high {n_high} outside 0..{imp.size}")
    return np.argsort(-imp, kind="stable")[:n_high]


def importance_weights(n_full: int, n_sample: int, n_high: int):
    """Weights of the forced and the randomly drawn bins."""
    return 1.0 / n_full, (n_full - n_high) / (n_full * (n_sample - n_high))


def stage_seeds(seed):
    """Two independent child seeds for the stage-1 and stage-2 random draws."""
    ss = seed if isinstance(seed, np.random.SeedSequence) else np.random.SeedSequence(seed)
    return ss.spawn(2)


def importance_subsample(
    ts: WeightedTimeseries,
    params: TechnologyParams,
    cfg: SamplerConfig,
    importance_fn: Callable = variable_cost,
    planner: Callable = plan_capacity,
) -> tuple[Subsample, PlanSolution]:
    """Build the stage-2 importance subsample.

    A random stage-1 sample of ``cfg.n_sample`` timesteps is planned, every
    timestep of ``ts`` is scored with ``importance_fn(ts, params, design)``, and
    the ``cfg.n_high`` highest scorers are forced into the sample alongside a
    uniform draw from the remainder. Returns the subsample and the stage-1 plan.
    """
    if cfg.n_full != len(ts):
        raise ValidationError(f"config n_full={cfg.n_full} but timeseries has {len(ts)} steps")
    if not 0 < cfg.n_high < cfg.n_sample:
        raise ValidationError(f"need 0 < n_high < n_sample, got {cfg.n_high}, {cfg.n_sample}")
    seed1, seed2 = stage_seeds(cfg.rng_seed)

    stage1 = random_subsample(ts, cfg.n_sample, seed1)
    stage1_plan = planner(stage1.apply(ts), params)

    imp = np.asarray(importance_fn(ts, params, stage1_plan.design), dtype=float)
    if imp.shape != (len(ts),):
        raise ValidationError("importance function must return one value per timestep")
    forced = rank_importance(imp, cfg.n_high)

    remaining = np.ones(len(ts), dtype=bool)
    remaining[forced] = False
    pool = np.flatnonzero(remaining)
    rng = np.random.default_rng(seed2)
    drawn = np.sort(rng.choice(pool, size=cfg.n_sample - cfg.n_high, replace=False))

    w_high, w_rest = importance_weights(cfg.n_full, cfg.n_sample, cfg.n_high)
    indices = np.concatenate([forced, drawn])
    weights = np.concatenate([np.full(forced.size, w_high), np.full(drawn.size, w_rest)])
    flags = np.concatenate([np.ones(forced.size, bool), np.zeros(drawn.size, bool)])
    provenance = {
        "kind": "importance",
        "seed": cfg.rng_seed,
        "stage1_indices": stage1.indices,
        "stage1_design": stage1_plan.design,
    }
    return Subsample(indices, weights, flags, provenance), stage1_plan


def importance_estimate(
    ts: WeightedTimeseries,
    params: TechnologyParams,
    cfg: SamplerConfig,
    importance_fn: Callable = variable_cost,
    planner: Callable = plan_capacity,
) -> tuple[PlanSolution, Subsample, PlanSolution]:
    """Full two-stage estimate: returns (stage-2 plan, stage-2 subsample, stage-1 plan)."""
    sub, stage1 = importance_subsample(ts, params, cfg, importance_fn, planner)
    return planner(sub.apply(ts), params), sub, stage1


def make_subsample(ts: WeightedTimeseries, params: Optional[TechnologyParams], cfg: SamplerConfig, **kw) -> Subsample:
    """Dispatch on ``cfg.sampler_kind``; ``kw`` carries ``year`` or ``k`` where needed."""
    kind = cfg.sampler_kind
    if kind == "random":
        return random_subsample(ts, cfg.n_sample, cfg.rng_seed)
    if kind == "importance":
        return importance_subsample(ts, params, cfg)[0]
    if kind == "individual_year":
        return individual_year(ts, kw["year"])
    from .clustering import build_day_vectors, cluster_days, representative_subsample

    k = kw.get("k", cfg.n_sample // 24)
    model = cluster_days(build_day_vectors(ts), k, cfg.rng_seed)
    return representative_subsample(ts, model)
