"""Decision-support engine for evaluating and extending a fire-station layout."""

from .core import (
    DEFAULT_FEATURE_CHANNELS,
    FIRE_COUNT,
    FireRecord,
    GeoPoint,
    GridSpec,
    Role,
    SpatioTemporalTensor,
    Station,
    cell_center,
    cell_of,
    haversine_km,
)
from .criteria import Criterion, TargetArea, evaluate, responder
from .forecast import (
    AttributionFrame,
    FittedForecaster,
    ForecastConfig,
    attribute,
    fit,
    predict,
    shapley_exact,
)
from .ingest import (
    FeatureTable,
    Granularity,
    IngestError,
    parse_features,
    parse_fire_records,
    parse_stations,
    rasterize,
    read_tensor,
    write_tensor,
)
from .mobility import (
    ReachabilityField,
    TravelParams,
    boundary,
    reachability_field,
    travel_time,
    underserved,
)
from .optimizer import (
    GAConfig,
    OptimizationProblem,
    ParetoResult,
    crowding_distance,
    non_dominated_sort,
    objective_correlations,
    run,
)
from .simulate import TransferSimReport, compare, simulate_transfers

__version__ = "0.1.0"

__all__ = [
    "DEFAULT_FEATURE_CHANNELS",
    "FIRE_COUNT",
    "AttributionFrame",
    "Criterion",
    "FeatureTable",
    "FireRecord",
    "FittedForecaster",
    "ForecastConfig",
    "GAConfig",
    "GeoPoint",
    "Granularity",
    "GridSpec",
    "IngestError",
    "OptimizationProblem",
    "ParetoResult",
    "ReachabilityField",
    "Role",
    "SpatioTemporalTensor",
    "Station",
    "TargetArea",
    "TransferSimReport",
    "TravelParams",
    "attribute",
    "boundary",
    "cell_center",
    "cell_of",
    "compare",
    "crowding_distance",
    "evaluate",
    "fit",
    "haversine_km",
    "non_dominated_sort",
    "objective_correlations",
    "parse_features",
    "parse_fire_records",
    "parse_stations",
    "predict",
    "rasterize",
    "reachability_field",
    "read_tensor",
    "responder",
    "run",
    "shapley_exact",
    "simulate_transfers",
    "travel_time",
    "underserved",
    "write_tensor",
]
