import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import random_instance, random_params, ts_of
from oracles import planning_lp, single_step_dispatch
from psplan.errors import ValidationError
from psplan.model import (
    SystemDesign,
    TechnologyParams,
    dispatch_fixed,
    objective_value,
    plan_capacity,
    plan_capacity_fixed_wind,
    solve_weighted,
    variable_cost,
)

DESIGN = SystemDesign(10, 5, 5, 20)


def test_constant_demand_is_all_baseload(params):
    sol = plan_capacity(ts_of(np.full(24, 10.0), 0.0), params)
    assert sol.design.as_array() == pytest.approx([10, 0, 0, 0], abs=1e-9)
    assert sol.objective == pytest.approx(3438.0, rel=1e-12)


def test_two_level_instance_splits_baseload_and_peaking(params):
    demand = np.r_[np.full(95, 10.0), np.full(5, 20.0)]
    sol = plan_capacity(ts_of(demand, 0.0), params)
    assert sol.design.as_array() == pytest.approx([10, 0, 10, 0], abs=1e-9)
    caps, obj = planning_lp(demand, np.zeros(100), np.full(100, 0.01), params.c, params.f)
    assert sol.objective == pytest.approx(obj, rel=1e-9)


def test_fixed_wind_zero_equals_zero_wind_problem(params):
    ts = ts_of(np.full(24, 10.0), 0.0)
    assert plan_capacity_fixed_wind(ts, params, 0).objective == pytest.approx(plan_capacity(ts, params).objective)


def test_fixed_wind_buys_idle_capacity(params):
    sol = plan_capacity_fixed_wind(ts_of(np.full(24, 10.0), 0.0), params, 5)
    assert sol.design.baseload == pytest.approx(10)
    assert sol.design.wind == 5
    assert sol.objective == pytest.approx(3438 + 500)


def test_fixed_wind_at_optimum_keeps_objective(params):
    rng = np.random.default_rng(4)
    ts = ts_of(rng.uniform(20, 60, 200), rng.uniform(0, 1, 200))
    sol = plan_capacity(ts, params)
    fixed = plan_capacity_fixed_wind(ts, params, sol.design.wind)
    assert fixed.objective == pytest.approx(sol.objective, rel=1e-9)


def test_fixed_wind_rejects_negative(params):
    with pytest.raises(ValidationError):
        plan_capacity_fixed_wind(ts_of([1.0, 2.0], 0.5), params, -1)


@pytest.mark.parametrize(
    "d, w, gen, unserved, imp",
    [
        (15, 0.5, [5, 0, 0, 10], 0, 0.025),
        (30, 0.0, [10, 5, 5, 0], 10, 1.725),
        (8, 0.5, [0, 0, 0, 8], 0, 0.0),
    ],
)
def test_dispatch_examples(params, d, w, gen, unserved, imp):
    ts = ts_of([d], w)
    disp = dispatch_fixed(ts, params, DESIGN)
    assert disp.gen[0] == pytest.approx(gen)
    assert disp.unserved[0] == pytest.approx(unserved)
    assert variable_cost(ts, params, DESIGN)[0] == pytest.approx(imp)


def test_objective_recomputes(params):
    rng = np.random.default_rng(2)
    ts = ts_of(rng.uniform(10, 40, 96), rng.uniform(0, 1, 96))
    sol = plan_capacity(ts, params)
    z = objective_value(ts.weight, params, sol.design, sol.dispatch)
    assert z == pytest.approx(sol.objective, rel=1e-6)
    assert sol.dispatch.unserved.max() <= 1e-9


@pytest.mark.parametrize("seed", range(25))
def test_matches_tableau_oracle(seed):
    rng = np.random.default_rng(seed)
    params = random_params(rng) if seed % 2 else TechnologyParams.default()
    d, w, lam = random_instance(rng, T=int(rng.integers(6, 25)))
    sol = plan_capacity(ts_of(d, w, lam), params)
    caps, obj = planning_lp(d, w, lam, params.c, params.f)
    assert sol.objective == pytest.approx(obj, rel=1e-6)


def test_highs_fallback_when_wind_is_not_cheapest():
    # wind more expensive to run than baseload -> general LP path
    params = TechnologyParams(
        {"baseload": 300, "mid_merit": 100, "peaking": 50, "wind": 100},
        {"baseload": 0.005, "mid_merit": 0.035, "peaking": 0.1, "wind": 0.02},
    )
    assert not params.wind_first
    rng = np.random.default_rng(9)
    d, w, lam = random_instance(rng, T=20)
    sol = plan_capacity(ts_of(d, w, lam), params)
    _, obj = planning_lp(d, w, lam, params.c, params.f)
    assert sol.diagnostics["method"] == "highs"
    assert sol.objective == pytest.approx(obj, rel=1e-6)


def test_merit_ties_fill_in_declaration_order():
    params = TechnologyParams(
        {"baseload": 1, "mid_merit": 1, "peaking": 1, "wind": 1},
        {"baseload": 0.01, "mid_merit": 0.01, "peaking": 0.01, "wind": 0.0},
    )
    disp = dispatch_fixed(ts_of([7.0], 0.0), params, SystemDesign(3, 3, 3, 0))
    assert disp.gen[0] == pytest.approx([3, 3, 1, 0])


@settings(max_examples=60, deadline=None)
@given(
    caps=st.lists(st.floats(0, 30), min_size=4, max_size=4),
    d=st.floats(0, 80),
    w=st.floats(0, 1),
)
def test_dispatch_is_cost_minimal(params, caps, d, w):
    disp = dispatch_fixed(ts_of([d], w), params, SystemDesign(*caps))
    avail = [caps[0], caps[1], caps[2], caps[3] * w]
    unserved, cost = single_step_dispatch(d, avail, params.f)
    assert disp.unserved[0] == pytest.approx(unserved, abs=1e-9)
    assert float(disp.gen[0] @ params.f) == pytest.approx(cost, abs=1e-9)
    assert disp.gen[0].sum() + disp.unserved[0] == pytest.approx(d, abs=1e-9)


@settings(max_examples=60, deadline=None)
@given(
    caps=st.lists(st.floats(0, 30), min_size=4, max_size=4),
    d=st.floats(0, 80),
    dd=st.floats(0, 20),
    w=st.floats(0, 1),
    dw=st.floats(0, 1),
)
def test_variable_cost_monotone(params, caps, d, dd, w, dw):
    design = SystemDesign(*caps)
    base = variable_cost(ts_of([d], w), params, design)[0]
    assert variable_cost(ts_of([d + dd], w), params, design)[0] >= base - 1e-12
    assert variable_cost(ts_of([d], min(1.0, w + dw)), params, design)[0] <= base + 1e-12


def _scaled_gen_cost(params, k):
    return TechnologyParams(dict(params.install_cost), {t: k * v for t, v in params.gen_cost.items()})


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000), k=st.floats(0.01, 100))
def test_weight_scaling(params, seed, k):
    rng = np.random.default_rng(seed)
    d, w, lam = random_instance(rng)
    caps, _ = solve_weighted(d, w, lam, params)
    design = SystemDesign.from_array(caps)

    # generation term of a fixed design scales by exactly k
    disp = dispatch_fixed(ts_of(d, w, lam), params, design)
    z1 = objective_value(lam, params, design, disp)
    zk = objective_value(k * lam, params, design, disp)
    install = float(params.c @ caps)
    assert zk - install == pytest.approx(k * (z1 - install), rel=1e-12)

    # scaled weights are the same problem as scaled generation costs
    caps_k, obj_k = solve_weighted(d, w, k * lam, params)
    caps_f, obj_f = solve_weighted(d, w, lam, _scaled_gen_cost(params, k))
    assert obj_k == pytest.approx(obj_f, rel=1e-9)

    # normalised weights: the planner's argmin ignores the scale
    again = plan_capacity(ts_of(d, w, (k * lam) / (k * lam).sum()), params)
    assert again.design.as_array() == pytest.approx(caps, abs=1e-6)


@settings(max_examples=40, deadline=None)
@given(seed=st.integers(0, 10_000))
def test_zero_shortage_at_optimum(params, seed):
    rng = np.random.default_rng(seed)
    d, w, lam = random_instance(rng)
    ts = ts_of(d, w, lam)
    sol = plan_capacity(ts, params)
    assert dispatch_fixed(ts, params, sol.design).unserved.max() <= 1e-9


def test_rejects_bad_inputs():
    with pytest.raises(ValidationError):
        SystemDesign(-1, 0, 0, 0)
    with pytest.raises(ValidationError):
        TechnologyParams({"baseload": -1, "mid_merit": 0, "peaking": 0, "wind": 0}, {"baseload": 0, "mid_merit": 0, "peaking": 0, "wind": 0})
