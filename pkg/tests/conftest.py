import sys
from pathlib import Path

import numpy as np
import pytest

sys.path.insert(0, str(Path(__file__).parent))

from psplan.data import synthesize_dataset  # noqa: E402
from psplan.model import TechnologyParams  # noqa: E402
from psplan.timeseries import WeightedTimeseries  # noqa: E402


@pytest.fixture(scope="session")
def params():
    return TechnologyParams.default()


@pytest.fixture(scope="session")
def two_years():
    return synthesize_dataset(2006, 2, seed=11)


def random_instance(rng, T=None):
    T = T or int(rng.integers(6, 49))
    demand = rng.uniform(5, 50, T)
    wind = rng.uniform(0, 1, T)
    weight = rng.uniform(0.1, 1.0, T)
    return demand, wind, weight / weight.sum()


def random_params(rng):
    c = rng.uniform(10, 400, 4)
    f = np.sort(rng.uniform(0.001, 0.2, 3))[rng.permutation(3)]
    return TechnologyParams(
        install_cost=dict(zip(("baseload", "mid_merit", "peaking", "wind"), c)),
        gen_cost=dict(zip(("baseload", "mid_merit", "peaking", "wind"), [*f, 0.0])),
    )


def ts_of(demand, wind, weight=None):
    demand = np.asarray(demand, float)
    wind = np.asarray(wind, float) if np.ndim(wind) else np.full(demand.size, float(wind))
    if weight is None:
        return WeightedTimeseries.uniform(demand, wind)
    return WeightedTimeseries(demand, wind, weight)


ACCEPTANCE_LINES = []


def record(criterion: str, ok, detail: str):
    """Log one acceptance verdict (``ok`` None means skipped)."""
    verdict = "SKIP" if ok is None else ("PASS" if ok else "FAIL")
    line = f"[{verdict}] {criterion}: {detail}"
    ACCEPTANCE_LINES.append(line)
    print(line)
    return ok


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
