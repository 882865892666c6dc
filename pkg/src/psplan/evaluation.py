"""Scoring fixed designs against a full dataset."""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from typing import Optional

import numpy as np

from .errors import ValidationError
from .model import (
    SystemDesign,
    TechnologyParams,
    dispatch_fixed,
    objective_value,
    plan_capacity,
    plan_capacity_fixed_wind,
)
from .timeseries import WeightedTimeseries

SHORTFALL_TOL = 1e-9
PERCENTILES = (2.5, 25.0, 50.0, 75.0, 97.5)


@dataclass(frozen=True)
class AdequacyReport:
    hours_unmet: int
    unserved_energy: float
    max_shortfall: float
    per_year: dict = field(default_factory=dict)

    def as_dict(self) -> dict:
        return {
            "hours_unmet": self.hours_unmet,
            "unserved_energy": self.unserved_energy,
            "max_shortfall": self.max_shortfall,
            "per_year": {str(y): v for y, v in self.per_year.items()},
        }


@dataclass(frozen=True)
class CostReport:
    system_cost: float
    optimal_cost: float
    extra_system_cost: float
    extra_peaking_added: float
    augmented_design: Optional[SystemDesign] = None

    def as_dict(self) -> dict:
        out = {
            "system_cost": self.system_cost,
            "optimal_cost": self.optimal_cost,
            "extra_system_cost": self.extra_system_cost,
            "extra_peaking_added": self.extra_peaking_added,
        }
        if self.augmented_design is not None:
            out["augmented_design"] = self.augmented_design.as_dict()
        return out


def _shortfall_stats(unserved):
    short = unserved > SHORTFALL_TOL
    return int(short.sum()), float(unserved[short].sum()), float(unserved.max(initial=0.0))


def adequacy(ts_full: WeightedTimeseries, params: TechnologyParams, design: SystemDesign) -> AdequacyReport:
    """Hours, energy and peak size of supply shortfalls when ``design`` runs on ``ts_full``.

    Weights play no part: every timestep counts as one hour.
    """
    unserved = dispatch_fixed(ts_full, params, design).unserved
    hours, energy, peak = _shortfall_stats(unserved)
    per_year = {}
    years = ts_full.years
    if years is not None:
        for y in np.unique(years):
            h, e, p = _shortfall_stats(unserved[years == y])
            per_year[int(y)] = {"hours_unmet": h, "unserved_energy": e, "max_shortfall": p}
    return AdequacyReport(hours, energy, peak, per_year)


def system_cost(ts_full: WeightedTimeseries, params: TechnologyParams, design: SystemDesign) -> float:
    """Annualised installation plus generation cost with every timestep weighted 1/N."""
    n = len(ts_full)
    return objective_value(np.full(n, 1.0 / n), params, design, dispatch_fixed(ts_full, params, design))


def extra_system_cost(
    ts_full: WeightedTimeseries,
    params: TechnologyParams,
    design: SystemDesign,
    optimal_cost: Optional[float] = None,
) -> CostReport:
    """Cost over the full-data optimum after topping up peaking to remove all shortfalls.

    Pass ``optimal_cost`` to skip re-solving the full-data problem.
    """
    shortfall = adequacy(ts_full, params, design).max_shortfall
    augmented = replace(design, peaking=design.peaking + shortfall)
    cost = system_cost(ts_full, params, augmented)
    if optimal_cost is None:
        optimal_cost = system_cost(ts_full, params, plan_capacity(_uniform(ts_full), params).design)
    return CostReport(cost, float(optimal_cost), cost - float(optimal_cost), shortfall, augmented)


def _uniform(ts: WeightedTimeseries) -> WeightedTimeseries:
    return WeightedTimeseries.uniform(ts.demand, ts.wind_cf, ts.time)


@dataclass(frozen=True, eq=False)
class CrossYearMatrix:
    years: list
    hours: np.ndarray  # [design_year, test_year]
    designs: dict

    def exceedance(self, min_hours: int = 1) -> float:
        """Share of off-diagonal (design, test) pairs with at least ``min_hours`` of shortage."""
        n = len(self.years)
        if n < 2:
            return 0.0
        off = ~np.eye(n, dtype=bool)
        return float(np.mean(self.hours[off] >= min_hours))

    def rows(self):
        for i, dy in enumerate(self.years):
            for j, ty in enumerate(self.years):
                yield {"design_year": dy, "test_year": ty, "hours_unmet": int(self.hours[i, j])}


def cross_year_matrix(ts_full: WeightedTimeseries, params: TechnologyParams) -> CrossYearMatrix:
    """Plan on each calendar year alone, then test every design on every year."""
    years_arr = ts_full.years
    if years_arr is None:
        raise ValidationError("cross-year matrix needs timestamps")
    years = [int(y) for y in np.unique(years_arr)]
    if len(years) < 2:
        raise ValidationError("cross-year matrix needs at least two years")
    slices = {y: ts_full.take(np.flatnonzero(years_arr == y)) for y in years}
    designs = {y: plan_capacity(slices[y], params).design for y in years}
    hours = np.zeros((len(years), len(years)), dtype=int)
    for i, dy in enumerate(years):
        for j, ty in enumerate(years):
            hours[i, j] = adequacy(slices[ty], params, designs[dy]).hours_unmet
    return CrossYearMatrix(years, hours, designs)


def wind_cost_curve(ts: WeightedTimeseries, params: TechnologyParams, wind_grid) -> list:
    """Optimal system cost with wind capacity pinned to each grid value, sorted by capacity."""
    grid = sorted(float(x) for x in wind_grid)
    if any(x < 0 for x in grid):
        raise ValidationError("wind grid values must be >= 0")
    return [(x, plan_capacity_fixed_wind(ts, params, x).objective) for x in grid]


def summarize_distribution(values) -> dict:
    """Box-plot statistics with linearly interpolated percentiles.

    For sorted values v_0..v_{n-1} the p-th percentile sits at position
    (n - 1) * p / 100 and is interpolated linearly between neighbours.
    """
    v = np.asarray(list(values), dtype=float)
    if v.size == 0:
        raise ValidationError("cannot summarise an empty list")
    q = np.percentile(v, PERCENTILES, method="linear")
    out = {f"p{p:g}": float(x) for p, x in zip(PERCENTILES, q)}
    out.update(min=float(v.min()), max=float(v.max()), mean=float(v.mean()))
    return out
