import pytest

from psplan import config
from psplan.data import DemandRegressionParams, DiurnalProfiles
from psplan.errors import ValidationError
from psplan.model import TechnologyParams


def test_technology_round_trip(tmp_path):
    path = tmp_path / "tech.ini"
    path.write_text(config.dump_technology(TechnologyParams.default()))
    assert config.load_technology(path) == TechnologyParams.default()


def test_technology_missing_key(tmp_path):
    path = tmp_path / "tech.ini"
    path.write_text("[costs]\ninstall_baseload = 1\n")
    with pytest.raises(ValidationError, match="install_mid_merit"):
        config.load_technology(path)


def test_demand_round_trip(tmp_path):
    path = tmp_path / "demand.ini"
    path.write_text(config.dump_demand_params(DemandRegressionParams.synthetic()))
    assert config.load_demand_params(path) == DemandRegressionParams.synthetic()


def test_profiles_file(tmp_path):
    path = tmp_path / "p.ini"
    flat = ", ".join(["0.041666666666666664"] * 24)
    path.write_text("".join(f"{s} = {flat}\n" for s in ("djf", "mam", "jja", "son")))
    assert config.load_profiles(path).matrix().sum() == pytest.approx(4.0)
    assert isinstance(config.load_profiles(path), DiurnalProfiles)


def test_experiment_file(tmp_path):
    path = tmp_path / "exp.ini"
    path.write_text("dataset = d.csv  # comment\nruns = random:480:3, importance:480:2\nbase_seed = 9\ncompute_equivalent = no\n")
    plan = config.load_experiment(path)
    assert plan.dataset == tmp_path / "d.csv"
    assert [r.sampler for r in plan.runs] == ["random", "importance"]
    assert plan.base_seed == 9 and not plan.compute_equivalent and plan.n_high == 60


@pytest.mark.parametrize(
    "runs",
    ["random:480", "bogus:480:2", "random:x:2", "random:0:2", ""],
)
def test_bad_runs(tmp_path, runs):
    path = tmp_path / "exp.ini"
    path.write_text(f"dataset = d.csv\nruns = {runs}\n")
    with pytest.raises(ValidationError):
        config.load_experiment(path)


def test_holidays_and_temperatures(tmp_path):
    hol = tmp_path / "hol.txt"
    hol.write_text("# bank holidays\n2006-01-02\n\n2006-04-14\n")
    assert [str(d) for d in config.load_holidays(hol)] == ["2006-01-02", "2006-04-14"]
    temps = tmp_path / "t.csv"
    temps.write_text("date,temperature\n2006-01-01,3.5\n2006-01-02,4.0\n")
    assert config.load_temperature_csv(temps).values.tolist() == [3.5, 4.0]
