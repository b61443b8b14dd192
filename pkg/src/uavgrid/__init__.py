"""LoS connectivity of UAV swarms over grid cities.

Closed-form per-link LoS probabilities for a vehicle in a random street grid,
Monte Carlo estimation of the connectivity distribution under Poisson UAV
deployments, and altitude optimization under an outage constraint.
"""

__version__ = "0.1.0"

from .geometry import (
    CityModel,
    HeightDistribution,
    InvalidGeometryError,
    NetworkRealization,
    PRESETS,
    RadioParams,
    SamplingEnvelope,
    ground_range,
    intersection_weight,
    restrict,
    sample_envelope_points,
    sample_realization,
)
from .los import (
    Axis,
    DegenerateAxisError,
    LinkGeometry,
    Placement,
    UNBOUNDED,
    axis_critical_height,
    axis_factor,
    axis_factor_quadrature,
    corner_critical_height,
    corner_factor,
    effective_widths,
    integration_limits,
    los_probability,
    los_probability_batch,
)
from .oracle import (
    ExplicitCityDraw,
    ValidationCase,
    empirical_los_probability,
    link_blocked,
    sample_city,
    validation_sweep,
)
from .connectivity import (
    EmpiricalDistribution,
    MixtureCDF,
    PlacementMode,
    ScenarioConfig,
    conditional_connectivity,
    estimate_distribution,
    mixture_cdf,
    outage,
    outage_grid,
)
from .optimize import (
    ContourGrid,
    HeightSearchSpec,
    InfeasibleSearchError,
    grid_points,
    min_density_for_outage,
    optimize_height,
    sweep_contour,
)

__all__ = [
    "__version__",
    "Axis",
    "CityModel",
    "ContourGrid",
    "DegenerateAxisError",
    "EmpiricalDistribution",
    "ExplicitCityDraw",
    "HeightDistribution",
    "HeightSearchSpec",
    "InfeasibleSearchError",
    "InvalidGeometryError",
    "LinkGeometry",
    "MixtureCDF",
    "NetworkRealization",
    "PRESETS",
    "Placement",
    "PlacementMode",
    "RadioParams",
    "SamplingEnvelope",
    "ScenarioConfig",
    "UNBOUNDED",
    "ValidationCase",
    "axis_critical_height",
    "axis_factor",
    "axis_factor_quadrature",
    "conditional_connectivity",
    "corner_critical_height",
    "corner_factor",
    "effective_widths",
    "empirical_los_probability",
    "estimate_distribution",
    "grid_points",
    "ground_range",
    "integration_limits",
    "intersection_weight",
    "link_blocked",
    "los_probability",
    "los_probability_batch",
    "min_density_for_outage",
    "mixture_cdf",
    "optimize_height",
    "outage",
    "outage_grid",
    "restrict",
    "sample_city",
    "sample_envelope_points",
    "sample_realization",
    "sweep_contour",
    "validation_sweep",
]
