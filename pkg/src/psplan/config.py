"""Flat ``key = value`` parameter files.

Files are read with :mod:`configparser`; a section header is optional (keys
outside any section are accepted). Lists are comma separated. Recognised keys:

technology file
    install_baseload, install_mid_merit, install_peaking, install_wind  (GBPm/GW-yr)
    gen_baseload, gen_mid_merit, gen_peaking, gen_wind                  (GBPm/GWh)

demand file
    level, trend, annual_sin, annual_cos, temp_linear, temp_quadratic,
    weekday_mon .. weekday_sun, holiday, error_std, error_truncation,
    epoch, detrend_reference_date

profiles file
    djf, mam, jja, son   (24 comma-separated shares each)

synth file
    start_year, years, seed, wind_mean_cf, wind_persistence, wind_spread,
    detrend, demand_params, profiles, temperature_csv, holidays
    (paths are relative to the synth file)

experiment file
    dataset, technology, base_seed, n_high, compute_equivalent,
    runs = sampler:size:replicates, ...
"""

from __future__ import annotations

import configparser
import csv
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

import numpy as np

from .data.demand import WEEKDAYS, DemandRegressionParams, DiurnalProfiles, TemperatureSeries
from .errors import ValidationError
from .model import TECHNOLOGIES, TechnologyParams
from .sampling import DEFAULT_N_HIGH, SAMPLER_KINDS


def read_flat(path) -> dict:
    text = Path(path).read_text()
    parser = configparser.ConfigParser(inline_comment_prefixes=("#", ";"))
    parser.optionxform = str
    stripped = text.lstrip()
    if not stripped.startswith("["):
        text = "[__root__]\n" + text
    try:
        parser.read_string(text, source=str(path))
    except configparser.Error as exc:
        raise ValidationError(f"{path}: {exc}") from None
    out = {}
    for section in parser.sections():
        out.update(parser[section])
    return out


def _float(values: dict, key: str, path, default=None) -> float:
    if key not in values:
        if default is None:
            raise ValidationError(f"{path}: missing key {key!r}")
        return default
    try:
        return float(values[key])
    except ValueError:
        raise ValidationError(f"{path}: {key} = {values[key]!r} is not a number") from None


def load_technology(path) -> TechnologyParams:
    v = read_flat(path)
    return TechnologyParams(
        install_cost={t: _float(v, f"install_{t}", path) for t in TECHNOLOGIES},
        gen_cost={t: _float(v, f"gen_{t}", path) for t in TECHNOLOGIES},
    )


def dump_technology(params: TechnologyParams) -> str:
    lines = [f"install_{t} = {params.install_cost[t]!r}" for t in TECHNOLOGIES]
    lines += [f"gen_{t} = {params.gen_cost[t]!r}" for t in TECHNOLOGIES]
    return "\n".join(lines) + "\n"


def load_demand_params(path) -> DemandRegressionParams:
    v = read_flat(path)
    base = DemandRegressionParams(level=_float(v, "level", path))
    kw = {}
    for key in ("trend", "annual_sin", "annual_cos", "temp_linear", "temp_quadratic", "holiday", "error_std", "error_truncation"):
        kw[key] = _float(v, key, path, getattr(base, key))
    kw["weekday"] = tuple(_float(v, f"weekday_{d}", path, 0.0) for d in WEEKDAYS)
    for key in ("epoch", "detrend_reference_date"):
        kw[key] = v.get(key, getattr(base, key))
    return DemandRegressionParams(level=base.level, **kw)


def dump_demand_params(p: DemandRegressionParams) -> str:
    lines = [f"{k} = {getattr(p, k)!r}" for k in ("level", "trend", "annual_sin", "annual_cos", "temp_linear", "temp_quadratic")]
    lines += [f"weekday_{d} = {x!r}" for d, x in zip(WEEKDAYS, p.weekday)]
    lines += [f"holiday = {p.holiday!r}", f"error_std = {p.error_std!r}", f"error_truncation = {p.error_truncation!r}"]
    lines += [f"epoch = {p.epoch}", f"detrend_reference_date = {p.detrend_reference_date}"]
    return "\n".join(lines) + "\n"


def load_profiles(path) -> DiurnalProfiles:
    v = read_flat(path)
    arrays = {}
    for season in ("djf", "mam", "jja", "son"):
        if season not in v:
            raise ValidationError(f"{path}: missing key {season!r}")
        arrays[season] = np.array([float(x) for x in v[season].split(",")])
    return DiurnalProfiles(**arrays)


def load_temperature_csv(path) -> TemperatureSeries:
    """CSV with columns ``date,temperature`` (daily mean, deg C)."""
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    if not rows:
        raise ValidationError(f"{path}: no data rows")
    return TemperatureSeries(np.array([r["date"] for r in rows], dtype="datetime64[D]"), [float(r["temperature"]) for r in rows])


def load_holidays(path) -> list:
    """One ISO date per line; blank lines and ``#`` comments ignored."""
    out = []
    for line in Path(path).read_text().splitlines():
        line = line.split("#", 1)[0].strip()
        if line:
            out.append(np.datetime64(line, "D"))
    return out


def parse_bool(text: str) -> bool:
    t = str(text).strip().lower()
    if t in ("1", "true", "yes", "on"):
        return True
    if t in ("0", "false", "no", "off"):
        return False
    raise ValidationError(f"not a boolean: {text!r}")


@dataclass(frozen=True)
class RunSpec:
    sampler: str
    size: int
    replicates: int


@dataclass(frozen=True)
class ExperimentPlan:
    dataset: Path
    runs: tuple
    technology: Optional[Path] = None
    base_seed: int = 0
    n_high: int = DEFAULT_N_HIGH
    compute_equivalent: bool = True
    output: Optional[Path] = None
    extra: dict = field(default_factory=dict)

    def __post_init__(self):
        for run in self.runs:
            if run.sampler not in SAMPLER_KINDS:
                raise ValidationError(f"unknown sampler {run.sampler!r}")
            if run.size <= 0 or run.replicates < 0:
                raise ValidationError(f"run {run}: size must be > 0 and replicates >= 0")


def parse_runs(text: str) -> tuple:
    runs = []
    for item in text.split(","):
        item = item.strip()
        if not item:
            continue
        parts = item.split(":")
        if len(parts) != 3:
            raise ValidationError(f"run entry {item!r} must look like sampler:size:replicates")
        try:
            runs.append(RunSpec(parts[0].strip(), int(parts[1]), int(parts[2])))
        except ValueError:
            raise ValidationError(f"run entry {item!r}: size and replicates must be integers") from None
    if not runs:
        raise ValidationError("experiment has no runs")
    return tuple(runs)


def load_experiment(path) -> ExperimentPlan:
    v = read_flat(path)
    root = Path(path).parent
    if "dataset" not in v or "runs" not in v:
        raise ValidationError(f"{path}: 'dataset' and 'runs' are required")
    tech = v.get("technology")
    return ExperimentPlan(
        dataset=(root / v["dataset"]),
        runs=parse_runs(v["runs"]),
        technology=(root / tech) if tech else None,
        base_seed=int(v.get("base_seed", 0)),
        n_high=int(v.get("n_high", DEFAULT_N_HIGH)),
        compute_equivalent=parse_bool(v.get("compute_equivalent", "true")),
        output=(root / v["output"]) if "output" in v else None,
    )
