"""Daily demand regression synthesis and diurnal upsampling to hourly values."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace

import numpy as np
from scipy.special import ndtr, ndtri

from ..errors import ValidationError

DAYS_PER_YEAR = 365.25
WEEKDAYS = ("mon", "tue", "wed", "thu", "fri", "sat", "sun")


def _as_days(dates) -> np.ndarray:
    return np.asarray(dates, dtype="datetime64[D]")


def weekday_index(dates) -> np.ndarray:
    """Monday = 0 ... Sunday = 6."""
    return (_as_days(dates).astype(np.int64) + 3) % 7


@dataclass(frozen=True)
class DemandRegressionParams:
    """Coefficients of the daily demand regression (GWh/day).

    ``trend`` is per day counted from ``epoch``; the annual harmonics complete one
    cycle every 365.25 days measured from the same origin.
    """

    level: float
    trend: float = 0.0
    annual_sin: float = 0.0
    annual_cos: float = 0.0
    temp_linear: float = 0.0
    temp_quadratic: float = 0.0
    weekday: tuple = (0.0,) * 7
    holiday: float = 0.0
    error_std: float = 0.0
    error_truncation: float = 3.0
    epoch: str = "2006-01-01"
    detrend_reference_date: str = "2011-01-01"

    def __post_init__(self):
        if len(self.weekday) != 7:
            raise ValidationError("exactly 7 weekday coefficients are required (Mon..Sun)")
        object.__setattr__(self, "weekday", tuple(float(x) for x in self.weekday))
        if self.error_std < 0:
            raise ValidationError("error_std must be >= 0")
        if self.error_truncation <= 0:
            raise ValidationError("error_truncation must be > 0")

    @property
    def omega(self) -> float:
        return 2.0 * math.pi / DAYS_PER_YEAR

    @classmethod
    def synthetic(cls) -> "DemandRegressionParams":
        """Made-up coefficients of GB-like magnitude; not fitted to any metered data."""
        return cls(
            level=1020.0,
            trend=-0.02,
            annual_sin=8.0,
            annual_cos=25.0,
            temp_linear=-17.0,
            temp_quadratic=0.35,
            weekday=(0.0, 6.0, 6.0, 5.0, -4.0, -95.0, -130.0),
            holiday=-120.0,
            error_std=34.2,
            error_truncation=3.0,
        )


@dataclass(frozen=True, eq=False)
class TemperatureSeries:
    dates: np.ndarray
    values: np.ndarray

    def __post_init__(self):
        dates = _as_days(self.dates)
        values = np.asarray(self.values, dtype=float)
        if dates.shape != values.shape or dates.ndim != 1 or dates.size == 0:
            raise ValidationError("temperature dates and values must be equal-length, non-empty 1-D arrays")
        if not np.all(np.isfinite(values)):
            raise ValidationError("temperatures must be finite")
        if np.any(np.diff(dates.astype(np.int64)) != 1):
            raise ValidationError("temperature dates must be contiguous days")
        object.__setattr__(self, "dates", dates)
        object.__setattr__(self, "values", values)


def effective_temperature(temps: TemperatureSeries) -> TemperatureSeries:
    """Te(d) = Te(d-1)/2 + T(d)/2, started at Te = T on the first day."""
    t = temps.values
    te = np.empty_like(t)
    te[0] = t[0]
    for i in range(1, t.size):
        te[i] = 0.5 * te[i - 1] + 0.5 * t[i]
    return TemperatureSeries(temps.dates, te)


def synthetic_temperature(
    dates,
    seed,
    mean: float = 10.0,
    amplitude: float = 6.5,
    coldest_day: int = 20,
    noise_std: float = 2.2,
    persistence: float = 0.75,
    annual_anomaly_std: float = 0.6,
) -> TemperatureSeries:
    """Seasonal cosine plus AR(1) day-to-day noise plus a per-year offset (deg C)."""
    dates = _as_days(dates)
    rng = np.random.default_rng(seed)
    doy = (dates - dates.astype("datetime64[Y]")).astype(np.int64)
    seasonal = mean - amplitude * np.cos(2.0 * math.pi * (doy - coldest_day) / DAYS_PER_YEAR)
    shocks = rng.normal(0.0, noise_std * math.sqrt(1.0 - persistence**2), dates.size)
    noise = np.empty(dates.size)
    noise[0] = rng.normal(0.0, noise_std)
    for i in range(1, dates.size):
        noise[i] = persistence * noise[i - 1] + shocks[i]
    years = dates.astype("datetime64[Y]").astype(np.int64)
    uniq, inv = np.unique(years, return_inverse=True)
    offsets = rng.normal(0.0, annual_anomaly_std, uniq.size)[inv]
    return TemperatureSeries(dates, seasonal + noise + offsets)


def detrend(params: DemandRegressionParams) -> DemandRegressionParams:
    """Fold the linear trend into the level at the reference date and drop it."""
    t_ref = (np.datetime64(params.detrend_reference_date, "D") - np.datetime64(params.epoch, "D")).astype(np.int64)
    return replace(params, level=params.level + params.trend * float(t_ref), trend=0.0)


def truncated_normal_errors(dates, std: float, truncation: float, seed) -> np.ndarray:
    """One truncated-normal error per date, drawn from a per-date random stream.

    The draw for a given date depends only on (seed, date), so any sub-range of
    dates reproduces the same values.
    """
    dates = _as_days(dates)
    if std == 0:
        return np.zeros(dates.size)
    lo = ndtr(-truncation)
    span = ndtr(truncation) - lo
    ordinals = dates.astype(np.int64)
    u = np.array([np.random.default_rng([int(seed), int(o) + 2**32]).random() for o in ordinals])
    return std * ndtri(lo + u * span)


def regression_terms(params: DemandRegressionParams, temps: TemperatureSeries, holidays=()) -> np.ndarray:
    """Deterministic part of the daily regression for each date in ``temps``."""
    dates = temps.dates
    t = (dates - np.datetime64(params.epoch, "D")).astype(np.int64).astype(float)
    te = effective_temperature(temps).values
    hol = np.isin(dates, _as_days(list(holidays))) if len(holidays) else np.zeros(dates.size, bool)
    wd = np.asarray(params.weekday)[weekday_index(dates)]
    return (
        params.level
        + params.trend * t
        + params.annual_sin * np.sin(params.omega * t)
        + params.annual_cos * np.cos(params.omega * t)
        + params.temp_linear * te
        + params.temp_quadratic * te**2
        + np.where(hol, params.holiday, wd)
    )


def synthesize_daily_demand(params: DemandRegressionParams, temps: TemperatureSeries, holidays=(), seed=0) -> np.ndarray:
    """Daily demand totals (GWh) with truncated-normal noise; clipped at zero."""
    base = regression_terms(params, temps, holidays)
    eps = truncated_normal_errors(temps.dates, params.error_std, params.error_truncation, seed)
    return np.maximum(base + eps, 0.0)


# --------------------------------------------------------------------------

SEASONS = ("djf", "mam", "jja", "son")
# month -> (season index, first month of that season)
_SEASON_OF_MONTH = {12: 0, 1: 0, 2: 0, 3: 1, 4: 1, 5: 1, 6: 2, 7: 2, 8: 2, 9: 3, 10: 3, 11: 3}
_SEASON_START_MONTH = (12, 3, 6, 9)


@dataclass(frozen=True, eq=False)
class DiurnalProfiles:
    """Share of daily demand in each hour, one 24-profile per meteorological season."""

    djf: np.ndarray
    mam: np.ndarray
    jja: np.ndarray
    son: np.ndarray

    def __post_init__(self):
        for name in SEASONS:
            p = np.asarray(getattr(self, name), dtype=float)
            if p.shape != (24,) or np.any(p < 0) or abs(p.sum() - 1.0) > 1e-9:
                raise ValidationError(f"profile {name} must hold 24 nonnegative values summing to 1")
            object.__setattr__(self, name, p)

    def matrix(self) -> np.ndarray:
        return np.vstack([self.djf, self.mam, self.jja, self.son])

    @classmethod
    def flat(cls) -> "DiurnalProfiles":
        p = np.full(24, 1.0 / 24)
        return cls(p, p, p, p)

    @classmethod
    def synthetic(cls) -> "DiurnalProfiles":
        """Smooth made-up profiles: overnight trough, morning ramp, winter evening peak."""
        h = np.arange(24)

        def shape(evening, midday, trough):
            base = 1.0 - trough * np.exp(-0.5 * ((h - 4) / 2.5) ** 2)
            base += midday * np.exp(-0.5 * ((h - 12.5) / 3.0) ** 2)
            base += evening * np.exp(-0.5 * ((h - 18) / 1.6) ** 2)
            return base / base.sum()

        return cls(shape(0.45, 0.15, 0.40), shape(0.25, 0.18, 0.38), shape(0.08, 0.22, 0.35), shape(0.30, 0.17, 0.38))


def _season_start(year: int, season: int) -> np.datetime64:
    month = _SEASON_START_MONTH[season]
    return np.datetime64(f"{year:04d}-{month:02d}-01", "D")


def season_blend(dates) -> np.ndarray:
    """Weight of each season profile for each date, shape (days, 4).

    The first day of a season is a 50/50 mix with the previous season; the
    weight of the season's own profile rises linearly to 1 at the middle day
    (offset len // 2) and falls back towards 50/50 with the following season.
    """
    dates = _as_days(dates)
    out = np.zeros((dates.size, 4))
    months = dates.astype("datetime64[M]").astype(np.int64) % 12 + 1
    years = dates.astype("datetime64[Y]").astype(np.int64) + 1970
    for k, (d, m, y) in enumerate(zip(dates, months, years)):
        s = _SEASON_OF_MONTH[int(m)]
        start_year = int(y) - 1 if (s == 0 and m != 12) else int(y)
        start = _season_start(start_year, s)
        nxt = _season_start(start_year + 1 if s == 0 else start_year, (s + 1) % 4)
        length = int((nxt - start).astype(np.int64))
        i = int((d - start).astype(np.int64))
        mid = length // 2
        if i <= mid:
            own = 0.5 + 0.5 * i / mid
            out[k, (s - 1) % 4] = 1.0 - own
        else:
            other = 0.5 * (i - mid) / (length - mid)
            own = 1.0 - other
            out[k, (s + 1) % 4] = other
        out[k, s] += own
    return out


def upsample_hourly(daily, profiles: DiurnalProfiles, dates) -> np.ndarray:
    """Spread each daily total over 24 hours using the season-blended profile."""
    daily = np.asarray(daily, dtype=float)
    dates = _as_days(dates)
    if daily.shape != dates.shape:
        raise ValidationError("daily series and dates must align")
    shares = season_blend(dates) @ profiles.matrix()
    return (daily[:, None] * shares).reshape(-1)
