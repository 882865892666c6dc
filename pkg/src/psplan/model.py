"""Single-node generation planning model.

Four technologies compete to meet an inelastic hourly demand: three dispatchable
ones (baseload, mid-merit, peaking) and wind, whose output is capped by the
installed capacity times the hourly capacity factor. The planning problem is

    min  sum_i c_i cap_i + 8760 sum_t lambda_t sum_i f_i gen_it
    s.t. gen_it <= cap_i               (dispatchable i)
         gen_wt <= cap_w w_t
         sum_i gen_it = d_t
         cap, gen >= 0

When wind is the cheapest technology to run (the usual case, f_w = 0) the problem
is solved exactly by load slicing: for a fixed wind capacity every horizontal
slice of the net-load duration curve is served by the technology with the
cheapest screening-curve cost at that slice's utilisation, and the total cost is
convex in wind capacity, so a one-dimensional search over wind finishes the job.
Other cost orderings fall back to a sparse LP solved with HiGHS.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import SolverError, ValidationError
from .timeseries import WeightedTimeseries

HOURS_PER_YEAR = 8760.0
TECHNOLOGIES = ("baseload", "mid_merit", "peaking", "wind")
DISPATCHABLE = TECHNOLOGIES[:3]
WIND = 3
FEASIBILITY_TOL = 1e-9

# Equal generation costs are dispatched wind first (its output cannot be
# stored), then in declaration order.
_TIE_RANK = {"wind": 0, "baseload": 1, "mid_merit": 2, "peaking": 3}


@dataclass(frozen=True)
class TechnologyParams:
    """Annualised installation cost (GBPm/GW-yr) and generation cost (GBPm/GWh)."""

    install_cost: dict
    gen_cost: dict

    def __post_init__(self):
        for name, table in (("install_cost", self.install_cost), ("gen_cost", self.gen_cost)):
            if set(table) != set(TECHNOLOGIES):
                raise ValidationError(f"{name} must give a value for each of {TECHNOLOGIES}")
            for tech, value in table.items():
                if not (math.isfinite(value) and value >= 0):
                    raise ValidationError(f"{name}[{tech}] must be finite and >= 0, got {value}")
        object.__setattr__(self, "install_cost", {t: float(self.install_cost[t]) for t in TECHNOLOGIES})
        object.__setattr__(self, "gen_cost", {t: float(self.gen_cost[t]) for t in TECHNOLOGIES})

    @classmethod
    def default(cls) -> "TechnologyParams":
        """The reference UK-like cost set used throughout the examples and tests."""
        return cls(
            install_cost={"baseload": 300.0, "mid_merit": 100.0, "peaking": 50.0, "wind": 100.0},
            gen_cost={"baseload": 0.005, "mid_merit": 0.035, "peaking": 0.1, "wind": 0.0},
        )

    @property
    def c(self) -> np.ndarray:
        return np.array([self.install_cost[t] for t in TECHNOLOGIES])

    @property
    def f(self) -> np.ndarray:
        return np.array([self.gen_cost[t] for t in TECHNOLOGIES])

    def merit_order(self) -> list:
        """Technology indices in dispatch order (ascending generation cost)."""
        return sorted(range(4), key=lambda i: (self.gen_cost[TECHNOLOGIES[i]], _TIE_RANK[TECHNOLOGIES[i]]))

    @property
    def wind_first(self) -> bool:
        return self.merit_order()[0] == WIND


@dataclass(frozen=True)
class SystemDesign:
    """Installed capacities in GW."""

    baseload: float = 0.0
    mid_merit: float = 0.0
    peaking: float = 0.0
    wind: float = 0.0

    def __post_init__(self):
        for tech in TECHNOLOGIES:
            value = float(getattr(self, tech))
            if not (math.isfinite(value) and value >= 0):
                raise ValidationError(f"capacity {tech} must be finite and >= 0, got {value}")
            object.__setattr__(self, tech, value)

    @classmethod
    def from_array(cls, caps) -> "SystemDesign":
        return cls(*(float(x) for x in caps))

    def as_array(self) -> np.ndarray:
        return np.array([self.baseload, self.mid_merit, self.peaking, self.wind])

    def as_dict(self) -> dict:
        return {t: getattr(self, t) for t in TECHNOLOGIES}


@dataclass(frozen=True, eq=False)
class DispatchResult:
    """Hourly generation per technology plus unserved energy (GWh)."""

    gen: np.ndarray  # shape (T, 4), columns in TECHNOLOGIES order
    unserved: np.ndarray

    def __getattr__(self, name):
        if name in TECHNOLOGIES:
            return self.gen[:, TECHNOLOGIES.index(name)]
        raise AttributeError(name)


@dataclass(frozen=True, eq=False)
class PlanSolution:
    design: SystemDesign
    dispatch: DispatchResult
    objective: float
    diagnostics: dict = field(default_factory=dict)


def objective_value(ts_weight, params: TechnologyParams, design: SystemDesign, dispatch: DispatchResult) -> float:
    """Installation plus annualised generation cost of a design and its dispatch."""
    install = float(params.c @ design.as_array())
    gen = HOURS_PER_YEAR * float(np.asarray(ts_weight) @ (dispatch.gen @ params.f))
    return install + gen


def _dispatch_arrays(demand, wind_cf, params: TechnologyParams, caps):
    T = demand.shape[0]
    avail = np.empty((T, 4))
    avail[:, :3] = caps[:3]
    avail[:, WIND] = caps[WIND] * wind_cf
    gen = np.zeros((T, 4))
    residual = demand.astype(float).copy()
    for i in params.merit_order():
        g = np.minimum(residual, avail[:, i])
        gen[:, i] = g
        residual = residual - g
    return gen, np.maximum(residual, 0.0)


def dispatch_fixed(ts: WeightedTimeseries, params: TechnologyParams, design: SystemDesign) -> DispatchResult:
    """Merit-order dispatch of a fixed design; any demand left over is unserved."""
    gen, unserved = _dispatch_arrays(ts.demand, ts.wind_cf, params, design.as_array())
    gen.flags.writeable = False
    unserved.flags.writeable = False
    return DispatchResult(gen, unserved)


def variable_cost(ts: WeightedTimeseries, params: TechnologyParams, design: SystemDesign) -> np.ndarray:
    """Per-timestep variable cost of the dispatchable fleet (GBPm).

    Unserved energy is priced as if met by peaking plant.
    """
    disp = dispatch_fixed(ts, params, design)
    f = params.f
    cost = disp.gen[:, :3] @ f[:3] + f[2] * disp.unserved
    return cost


# --------------------------------------------------------------------------
# load-slice solver (wind dispatched first)


def _slice_dispatchable(net, lam, c3, f3):
    """Cheapest dispatchable capacities serving net load ``net`` with weights ``lam``.

    Returns (capacities[3], cost) where cost covers installation plus annualised
    generation of the dispatchable fleet.
    """
    order = np.argsort(-net, kind="stable")
    levels = net[order]
    util = np.cumsum(lam[order])
    heights = levels - np.append(levels[1:], 0.0)
    # columns ordered by merit so equal-cost ties go to the cheaper-to-run plant
    merit = sorted(range(3), key=lambda i: (f3[i], i))
    slice_cost = c3[merit][None, :] + HOURS_PER_YEAR * util[:, None] * f3[merit][None, :]
    choice = np.argmin(slice_cost, axis=1)
    best = slice_cost[np.arange(slice_cost.shape[0]), choice]
    caps = np.zeros(3)
    for col, tech in enumerate(merit):
        caps[tech] = float(np.sum(heights[choice == col]))
    return caps, float(heights @ best)


def _fixed_wind_cost(w, demand, wind_cf, lam, c, f):
    avail = w * wind_cf
    wind_gen = np.minimum(demand, avail)
    net = demand - wind_gen
    caps3, cost3 = _slice_dispatchable(net, lam, c[:3], f[:3])
    total = cost3 + c[WIND] * w + HOURS_PER_YEAR * f[WIND] * float(lam @ wind_gen)
    return total, caps3


def _golden_section(fun, lo, hi, rtol=1e-13, max_iter=300):
    invphi = (math.sqrt(5.0) - 1.0) / 2.0
    a, b = lo, hi
    x1 = b - invphi * (b - a)
    x2 = a + invphi * (b - a)
    f1, f2 = fun(x1), fun(x2)
    it = 0
    while (b - a) > rtol * max(1.0, abs(b)) and it < max_iter:
        it += 1
        if f1 <= f2:
            b, x2, f2 = x2, x1, f1
            x1 = b - invphi * (b - a)
            f1 = fun(x1)
        else:
            a, x1, f1 = x1, x2, f2
            x2 = a + invphi * (b - a)
            f2 = fun(x2)
    return (x1, f1, it) if f1 <= f2 else (x2, f2, it)


def _solve_slices(demand, wind_cf, lam, params: TechnologyParams, wind_gw=None):
    c, f = params.c, params.f
    evals = 0

    def cost(w):
        nonlocal evals
        evals += 1
        return _fixed_wind_cost(w, demand, wind_cf, lam, c, f)[0]

    if wind_gw is not None:
        w_best = float(wind_gw)
        iters = 0
    elif not np.any(wind_cf > 0):
        w_best, iters = 0.0, 0
    else:
        f0 = cost(0.0)
        hi = float(np.max(demand)) / float(np.min(wind_cf[wind_cf > 0]))
        if c[WIND] > 0:
            hi = min(hi, f0 / c[WIND])
        if hi <= 0:
            w_best, iters = 0.0, 0
        else:
            w_best, f_best, iters = _golden_section(cost, 0.0, hi)
            if f0 <= f_best + 1e-12 * abs(f0):
                w_best = 0.0
            else:
                f_hi = cost(hi)
                if f_hi < f_best:
                    w_best = hi
    total, caps3 = _fixed_wind_cost(w_best, demand, wind_cf, lam, c, f)
    caps = np.append(np.maximum(caps3, 0.0), w_best)
    return caps, total, {"method": "load-slice", "iterations": iters, "evaluations": evals}


# --------------------------------------------------------------------------
# general LP (any merit order)


def _solve_highs(demand, wind_cf, lam, params: TechnologyParams, wind_gw=None):
    from scipy.optimize import linprog
    from scipy.sparse import coo_matrix

    T = demand.shape[0]
    c, f = params.c, params.f
    n = 4 + 4 * T

    def gen_col(i, t):
        return 4 + i * T + t

    cost = np.concatenate([c, *(HOURS_PER_YEAR * f[i] * lam for i in range(4))])
    rows, cols, vals = [], [], []
    r = np.arange(T)
    for i in range(4):
        rows += [i * T + r, i * T + r]
        cols += [gen_col(i, r), np.full(T, i)]
        vals += [np.ones(T), -(wind_cf if i == WIND else np.ones(T))]
    A_ub = coo_matrix((np.concatenate(vals), (np.concatenate(rows), np.concatenate(cols))), shape=(4 * T, n)).tocsr()
    eq_cols = np.concatenate([gen_col(i, r) for i in range(4)])
    A_eq = coo_matrix((np.ones(4 * T), (np.tile(r, 4), eq_cols)), shape=(T, n)).tocsr()
    bounds = [(0, None)] * n
    if wind_gw is not None:
        bounds[WIND] = (float(wind_gw), float(wind_gw))
    res = linprog(cost, A_ub=A_ub, b_ub=np.zeros(4 * T), A_eq=A_eq, b_eq=demand, bounds=bounds, method="highs")
    if res.status != 0:
        raise SolverError(f"LP solver failed: {res.message}")
    caps = np.maximum(res.x[:4], 0.0)
    if wind_gw is not None:
        caps[WIND] = float(wind_gw)
    return caps, float(res.fun), {"method": "highs", "iterations": int(getattr(res, "nit", 0)), "status": res.message}


def _solve(ts: WeightedTimeseries, params: TechnologyParams, wind_gw=None) -> PlanSolution:
    if params.wind_first:
        caps, lp_value, diag = _solve_slices(ts.demand, ts.wind_cf, ts.weight, params, wind_gw)
    else:
        caps, lp_value, diag = _solve_highs(ts.demand, ts.wind_cf, ts.weight, params, wind_gw)
    design = SystemDesign.from_array(caps)
    dispatch = dispatch_fixed(ts, params, design)
    z = objective_value(ts.weight, params, design, dispatch)
    diag["lp_value"] = lp_value
    diag["status"] = diag.get("status", "optimal")
    diag["max_unserved"] = float(np.max(dispatch.unserved))
    if diag["max_unserved"] > 1e-6 * max(1.0, float(np.max(ts.demand))):
        raise SolverError(f"solution leaves {diag['max_unserved']:.3g} GWh unserved")
    return PlanSolution(design, dispatch, z, diag)


def plan_capacity(ts: WeightedTimeseries, params: TechnologyParams) -> PlanSolution:
    """Cost-optimal capacities and dispatch for a weighted timeseries."""
    return _solve(ts, params)


def plan_capacity_fixed_wind(ts: WeightedTimeseries, params: TechnologyParams, wind_gw: float) -> PlanSolution:
    """Optimise the dispatchable fleet with wind capacity held at ``wind_gw``."""
    if not (math.isfinite(wind_gw) and wind_gw >= 0):
        raise ValidationError(f"wind capacity must be >= 0, got {wind_gw}")
    return _solve(ts, params, wind_gw=wind_gw)


def solve_weighted(demand, wind_cf, weight, params: TechnologyParams, wind_gw=None):
    """Solve the planning LP for raw arrays without requiring normalised weights.

    Returns ``(capacities, objective)``.
    """
    demand = np.asarray(demand, dtype=float)
    wind_cf = np.asarray(wind_cf, dtype=float)
    weight = np.asarray(weight, dtype=float)
    if params.wind_first:
        caps, value, _ = _solve_slices(demand, wind_cf, weight, params, wind_gw)
    else:
        caps, value, _ = _solve_highs(demand, wind_cf, weight, params, wind_gw)
    return caps, value
