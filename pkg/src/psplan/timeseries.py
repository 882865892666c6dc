"""Weighted hourly demand/wind timeseries, the common input of every model run."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional

import numpy as np

from .errors import ValidationError

WEIGHT_SUM_TOL = 1e-9


def _frozen(a, dtype=float) -> np.ndarray:
    arr = np.array(a, dtype=dtype, copy=True)
    arr.flags.writeable = False
    return arr


@dataclass(frozen=True, eq=False)
class WeightedTimeseries:
    """Hourly demand (GW == GWh per step), wind capacity factor and timestep weight.

    ``time`` holds optional ``datetime64[s]`` UTC timestamps. Weights must sum to one.
    """

    demand: np.ndarray
    wind_cf: np.ndarray
    weight: np.ndarray
    time: Optional[np.ndarray] = None

    def __post_init__(self):
        object.__setattr__(self, "demand", _frozen(self.demand))
        object.__setattr__(self, "wind_cf", _frozen(self.wind_cf))
        object.__setattr__(self, "weight", _frozen(self.weight))
        if self.time is not None:
            object.__setattr__(self, "time", _frozen(self.time, "datetime64[s]"))
        self._validate()

    def _validate(self):
        n = self.demand.shape[0]
        arrays = [self.demand, self.wind_cf, self.weight]
        if self.time is not None:
            arrays.append(self.time)
        if any(a.ndim != 1 or a.shape[0] != n for a in arrays):
            raise ValidationError("all component series must be 1-D and of equal length")
        if n == 0:
            raise ValidationError("timeseries is empty")
        if not np.all(np.isfinite(self.demand)) or np.any(self.demand < 0):
            bad = int(np.flatnonzero(~(self.demand >= 0))[0])
            raise ValidationError(f"demand must be finite and >= 0 (timestep {bad})")
        if np.any(~((self.wind_cf >= 0) & (self.wind_cf <= 1))):
            bad = int(np.flatnonzero(~((self.wind_cf >= 0) & (self.wind_cf <= 1)))[0])
            raise ValidationError(f"wind capacity factor outside [0, 1] (timestep {bad})")
        if np.any(~(self.weight > 0)) or not np.all(np.isfinite(self.weight)):
            raise ValidationError("timestep weights must be finite and > 0")
        total = float(np.sum(self.weight))
        if abs(total - 1.0) > WEIGHT_SUM_TOL:
            raise ValidationError(f"timestep weights sum to {total!r}, expected 1")

    @classmethod
    def uniform(cls, demand, wind_cf, time=None) -> "WeightedTimeseries":
        n = len(demand)
        return cls(demand, wind_cf, np.full(n, 1.0 / n), time)

    def __len__(self) -> int:
        return int(self.demand.shape[0])

    @property
    def years(self) -> Optional[np.ndarray]:
        """Calendar year of every timestep, or None without timestamps."""
        if self.time is None:
            return None
        return self.time.astype("datetime64[Y]").astype(int) + 1970

    def take(self, indices, weights=None) -> "WeightedTimeseries":
        """Select timesteps by index; without ``weights`` they are equally weighted."""
        idx = np.asarray(indices, dtype=np.int64)
        if weights is None:
            weights = np.full(idx.shape[0], 1.0 / idx.shape[0])
        time = None if self.time is None else self.time[idx]
        return WeightedTimeseries(self.demand[idx], self.wind_cf[idx], weights, time)

    def year_slice(self, year: int) -> np.ndarray:
        years = self.years
        if years is None:
            raise ValidationError("timeseries has no timestamps")
        idx = np.flatnonzero(years == year)
        if idx.size == 0:
            raise ValidationError(f"year {year} not present in timeseries")
        return idx
