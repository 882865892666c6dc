import json

import numpy as np
import pytest

from psplan.cli import bundled, main
from psplan.data import load_csv, save_csv, synthesize_dataset
from psplan.model import SystemDesign, TechnologyParams, dispatch_fixed, objective_value
from psplan.timeseries import WeightedTimeseries


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    return code, capsys.readouterr().out


def test_plan_on_bundled_data_is_consistent(capsys):
    code, out = run(capsys, "plan")
    assert code == 0
    payload = json.loads(out)
    design = SystemDesign(**payload["design"])
    ts = load_csv(bundled("tiny.csv"))
    params = TechnologyParams.default()
    z = objective_value(ts.weight, params, design, dispatch_fixed(ts, params, design))
    assert z == pytest.approx(payload["objective"], rel=1e-9)


def test_plan_csv_format(capsys):
    code, out = run(capsys, "plan", "--format", "csv", "--wind", "5")
    lines = out.strip().splitlines()
    assert code == 0 and lines[0] == "baseload,mid_merit,peaking,wind,objective"
    assert float(lines[1].split(",")[3]) == 5.0


def test_errors_are_json_with_exit_code(capsys, tmp_path):
    bad = tmp_path / "bad.csv"
    bad.write_text("time,demand_gw,wind_cf\n2006-01-01T00:00:00Z,3,1.5\n")
    code, out = run(capsys, "plan", "--data", bad)
    assert code == 1
    err = json.loads(out)
    assert err["type"] == "ValidationError" and "line 2" in err["error"]


def test_sample_then_plan(capsys, tmp_path):
    sub = tmp_path / "sub.csv"
    code, _ = run(capsys, "sample", "--kind", "importance", "--size", "96", "--n-high", "12", "--seed", "4", "--out", sub)
    assert code == 0
    assert sub.read_text().splitlines()[0] == "index,weight,forced"
    code, out = run(capsys, "plan", "--subsample", sub)
    assert code == 0 and json.loads(out)["timesteps"] == 96
    for kind in ("random", "representative_days"):
        assert run(capsys, "sample", "--kind", kind, "--size", "48", "--out", tmp_path / f"{kind}.csv")[0] == 0


def test_evaluate(capsys, tmp_path):
    design = tmp_path / "d.json"
    design.write_text(json.dumps({"baseload": 10, "mid_merit": 0, "peaking": 0, "wind": 0}))
    code, out = run(capsys, "evaluate", "--design", design)
    report = json.loads(out)
    assert code == 0 and report["adequacy"]["hours_unmet"] > 0
    assert report["cost"]["extra_system_cost"] > 0


def _two_identical_years(path):
    time = np.arange(np.datetime64("2001-01-01T00", "s"), np.datetime64("2003-01-01T00", "s"), np.timedelta64(1, "h"))
    rng = np.random.default_rng(1)
    d, w = rng.uniform(20, 50, 8760), rng.uniform(0, 1, 8760)
    save_csv(WeightedTimeseries.uniform(np.tile(d, 2), np.tile(w, 2), time), path)


def test_matrix_identical_years(capsys, tmp_path):
    data = tmp_path / "two.csv"
    _two_identical_years(data)
    out_csv = tmp_path / "matrix.csv"
    code, _ = run(capsys, "matrix", "--data", data, "--format", "csv", "--out", out_csv)
    lines = out_csv.read_text().splitlines()
    assert code == 0 and lines[0] == "design_year,test_year,hours_unmet"
    assert [l.split(",")[2] for l in lines[1:]] == ["0"] * 4


def test_windcurve(capsys, tmp_path):
    target = tmp_path / "windcurve.csv"
    code, _ = run(capsys, "windcurve", "--grid", "0:20:5", "--format", "csv", "--out", target)
    lines = target.read_text().splitlines()
    assert code == 0 and lines[0] == "wind_gw,system_cost" and len(lines) == 6


def test_synth(capsys, tmp_path):
    out = tmp_path / "s.csv"
    code, _ = run(capsys, "synth", "--years", "1", "--start-year", "2009", "--seed", "3", "--out", out)
    assert code == 0 and len(load_csv(out)) == 8760


def test_synth_from_config(capsys, tmp_path):
    cfg = tmp_path / "synth.ini"
    cfg.write_text(f"start_year = 2010\nyears = 1\nseed = 4\nprofiles = {bundled('profiles_synthetic.ini')}\nwind_mean_cf = 0.3\n")
    out = tmp_path / "s.csv"
    code, _ = run(capsys, "synth", "--config", cfg, "--out", out)
    ts = load_csv(out)
    assert code == 0 and str(ts.time[0]) == "2010-01-01T00:00:00"


@pytest.fixture(scope="module")
def exp_config(tmp_path_factory):
    root = tmp_path_factory.mktemp("exp")
    save_csv(synthesize_dataset(2006, 2, seed=3), root / "data.csv")
    (root / "exp.ini").write_text(
        "[experiment]\ndataset = data.csv\nbase_seed = 4\n"
        "runs = importance:480:3, random:480:3, representative_days:480:2, individual_year:8760:0\n"
    )
    return root / "exp.ini"


def test_experiment_deterministic_across_jobs(capsys, exp_config, tmp_path):
    assert run(capsys, "experiment", exp_config, "--out", tmp_path / "a")[0] == 0
    assert run(capsys, "experiment", exp_config, "--out", tmp_path / "b", "--jobs", "3")[0] == 0
    for name in ("results.csv", "summary.csv", "optimum.json"):
        assert (tmp_path / "a" / name).read_bytes() == (tmp_path / "b" / name).read_bytes()
    header = (tmp_path / "a" / "results.csv").read_text().splitlines()[0]
    assert header.startswith("sampler,compute_level,compute,replicate,seed")
    assert (tmp_path / "a" / "timings.csv").exists()

    code, out = run(capsys, "summarize", tmp_path / "a" / "results.csv", "--format", "csv")
    assert code == 0
    assert out == (tmp_path / "a" / "summary.csv").read_text()


def test_experiment_failure_exit_code(capsys, exp_config, tmp_path):
    cfg = exp_config.parent / "fail.ini"
    cfg.write_text("dataset = data.csv\nruns = importance:100:1, random:48:1\n")
    code, out = run(capsys, "experiment", cfg, "--out", tmp_path / "f")
    assert code == 2
    assert json.loads(out.strip().splitlines()[-1])["type"] == "SolverError"
    assert "failed" in (tmp_path / "f" / "results.csv").read_text()
