"""Power-system capacity planning with timeseries subsampling."""

from .clustering import ClusterModel, build_day_vectors, cluster_days, representative_subsample
from .errors import PsplanError, SolverError, ValidationError
from .evaluation import adequacy, cross_year_matrix, extra_system_cost, summarize_distribution, system_cost, wind_cost_curve
from .model import (
    DispatchResult,
    PlanSolution,
    SystemDesign,
    TechnologyParams,
    dispatch_fixed,
    plan_capacity,
    plan_capacity_fixed_wind,
    variable_cost,
)
from .sampling import (
    SamplerConfig,
    Subsample,
    importance_estimate,
    importance_subsample,
    individual_year,
    random_subsample,
    rank_importance,
)
from .timeseries import WeightedTimeseries

__version__ = "0.1.0"
