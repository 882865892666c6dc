"""Timeseries CSV reading and writing.

Format: header ``time,demand_gw,wind_cf`` with an optional ``weight`` column,
ISO 8601 UTC timestamps, strictly increasing. Floats are written with ``repr``
so that a save/load round trip is exact.
"""

from __future__ import annotations

import csv
from datetime import datetime, timezone

import numpy as np

from ..errors import ValidationError
from ..timeseries import WeightedTimeseries

REQUIRED = ("time", "demand_gw", "wind_cf")


def parse_time(text: str) -> np.datetime64:
    s = text.strip()
    if s.endswith("Z"):
        s = s[:-1] + "+00:00"
    dt = datetime.fromisoformat(s)
    if dt.tzinfo is not None:
        dt = dt.astimezone(timezone.utc).replace(tzinfo=None)
    return np.datetime64(dt, "s")


def format_time(t: np.datetime64) -> str:
    return str(np.datetime64(t, "s")) + "Z"


def load_csv(path) -> WeightedTimeseries:
    with open(path, newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None:
            raise ValidationError(f"{path}: no data rows")
        header = [h.strip() for h in header]
        missing = [c for c in REQUIRED if c not in header]
        if missing:
            raise ValidationError(f"{path}: missing column(s) {', '.join(missing)}")
        col = {name: header.index(name) for name in header}
        times, demand, wind, weight = [], [], [], []
        has_weight = "weight" in col
        for lineno, row in enumerate(reader, start=2):
            if not row or all(not cell.strip() for cell in row):
                continue
            try:
                t = parse_time(row[col["time"]])
                d = float(row[col["demand_gw"]])
                w = float(row[col["wind_cf"]])
                lam = float(row[col["weight"]]) if has_weight else None
            except (ValueError, IndexError) as exc:
                raise ValidationError(f"{path}: line {lineno}: unparseable row ({exc})") from None
            if not d >= 0:
                raise ValidationError(f"{path}: line {lineno}: negative or invalid demand {d}")
            if not 0 <= w <= 1:
                raise ValidationError(f"{path}: line {lineno}: wind_cf {w} outside [0, 1]")
            if times and t <= times[-1]:
                raise ValidationError(f"{path}: line {lineno}: timestamps not strictly increasing")
            times.append(t)
            demand.append(d)
            wind.append(w)
            weight.append(lam)
    if not times:
        raise ValidationError(f"{path}: no data rows")
    time = np.array(times, dtype="datetime64[s]")
    if has_weight:
        return WeightedTimeseries(demand, wind, weight, time)
    return WeightedTimeseries.uniform(demand, wind, time)


def save_csv(ts: WeightedTimeseries, path, write_weight=None) -> None:
    """Write ``ts``; the weight column is written only if weights are not uniform
    (or when ``write_weight`` forces it)."""
    if ts.time is None:
        raise ValidationError("timeseries needs timestamps to be saved")
    if write_weight is None:
        write_weight = not np.all(ts.weight == ts.weight[0])
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow([*REQUIRED, "weight"] if write_weight else REQUIRED)
        for i in range(len(ts)):
            row = [format_time(ts.time[i]), repr(float(ts.demand[i])), repr(float(ts.wind_cf[i]))]
            if write_weight:
                row.append(repr(float(ts.weight[i])))
            writer.writerow(row)
