"""Input data: CSV ingestion and synthetic multi-decade demand/wind generation."""

from __future__ import annotations

import numpy as np

from ..errors import ValidationError
from ..timeseries import WeightedTimeseries
from .csvio import load_csv, save_csv
from .demand import (
    DemandRegressionParams,
    DiurnalProfiles,
    TemperatureSeries,
    detrend,
    effective_temperature,
    synthesize_daily_demand,
    synthetic_temperature,
    upsample_hourly,
)
from .wind import synthesize_wind

__all__ = [
    "DemandRegressionParams",
    "DiurnalProfiles",
    "TemperatureSeries",
    "detrend",
    "effective_temperature",
    "load_csv",
    "save_csv",
    "synthesize_daily_demand",
    "synthesize_dataset",
    "synthesize_wind",
    "synthetic_temperature",
    "upsample_hourly",
]


def synthesize_dataset(
    start_year: int,
    n_years: int,
    seed: int = 0,
    demand_params: DemandRegressionParams = None,
    profiles: DiurnalProfiles = None,
    temperatures: TemperatureSeries = None,
    holidays=(),
    wind_mean_cf: float = 0.40,
    wind_persistence: float = 0.97,
    wind_spread: float = 1.2,
    apply_detrend: bool = True,
) -> WeightedTimeseries:
    """Equally weighted hourly dataset covering whole calendar years.

    Temperature, demand noise and wind use independent child seeds of ``seed``.
    """
    params = demand_params or DemandRegressionParams.synthetic()
    if apply_detrend:
        params = detrend(params)
    profiles = profiles or DiurnalProfiles.synthetic()
    first = np.datetime64(f"{start_year:04d}-01-01", "D")
    last = np.datetime64(f"{start_year + n_years:04d}-01-01", "D")
    dates = np.arange(first, last, dtype="datetime64[D]")
    temp_seed, noise_seed, wind_seed = (int(s.generate_state(1)[0]) for s in np.random.SeedSequence(seed).spawn(3))
    if temperatures is None:
        temperatures = synthetic_temperature(dates, temp_seed)
    else:
        keep = np.isin(temperatures.dates, dates)
        temperatures = TemperatureSeries(temperatures.dates[keep], temperatures.values[keep])
        if temperatures.dates.size != dates.size:
            raise ValidationError("temperature series does not cover the requested years")
    daily = synthesize_daily_demand(params, temperatures, holidays, noise_seed)
    hourly_gwh = upsample_hourly(daily, profiles, dates)
    wind = synthesize_wind(hourly_gwh.size, wind_seed, wind_persistence, wind_mean_cf, wind_spread)
    time = np.arange(first.astype("datetime64[s]"), last.astype("datetime64[s]"), np.timedelta64(1, "h"))
    return WeightedTimeseries.uniform(hourly_gwh, wind, time)
