"""Radio-map interpolation over sparse sensor grids.

Predicts received power between sensors using correlation-aware and
distance-weighted interpolators, and quantifies their RMS error both in
closed form and by Monte Carlo simulation.
"""

__version__ = "0.1.0"

from .geometry import Point, QueryGrid, Scenario, build_square_scenario, distance, make_grid
from .correlation import (
    CorrelationModel,
    correlation,
    covariance_matrix,
    cross_covariance,
    effective_distance,
)
from .field import SeedSpec, ShadowSample, median_power, received_powers, sample_shadow
from .estimators import (
    ALL_METHODS,
    AffinePowerMap,
    DegenerateGeometryError,
    FitResult,
    OutsideHullError,
    Prediction,
    as_affine,
    idw_predict,
    lse_fit,
    nan_predict,
    nn_predict,
    predict,
    sibson_weights,
    sm0_predict,
    sm0_weights,
    sm1_predict,
    sm2_predict,
    sm2_weights,
)
from .analysis import (
    AffineErrorForm,
    LseErrorCoeffs,
    analytic_rmse,
    error_form,
    lse_error_coeffs,
    sm0_sigma0,
)
from .harness import (
    DEFAULT_RATIOS,
    EMITTER_PRESETS,
    ConfigError,
    ExperimentConfig,
    RmseSurface,
    SweepRow,
    grid_rmse,
    point_rmse_mc,
    rmse_distribution,
    spatial_average,
    sweep,
)

__all__ = [
    "__version__",
    "Point",
    "QueryGrid",
    "Scenario",
    "build_square_scenario",
    "distance",
    "make_grid",
    "CorrelationModel",
    "correlation",
    "covariance_matrix",
    "cross_covariance",
    "effective_distance",
    "SeedSpec",
    "ShadowSample",
    "median_power",
    "received_powers",
    "sample_shadow",
    "ALL_METHODS",
    "AffinePowerMap",
    "DegenerateGeometryError",
    "FitResult",
    "OutsideHullError",
    "Prediction",
    "as_affine",
    "idw_predict",
    "lse_fit",
    "nan_predict",
    "nn_predict",
    "predict",
    "sibson_weights",
    "sm0_predict",
    "sm0_weights",
    "sm1_predict",
    "sm2_predict",
    "sm2_weights",
    "AffineErrorForm",
    "LseErrorCoeffs",
    "analytic_rmse",
    "error_form",
    "lse_error_coeffs",
    "sm0_sigma0",
    "DEFAULT_RATIOS",
    "EMITTER_PRESETS",
    "ConfigError",
    "ExperimentConfig",
    "RmseSurface",
    "SweepRow",
    "grid_rmse",
    "point_rmse_mc",
    "rmse_distribution",
    "spatial_average",
    "sweep",
]
