"""Experiment orchestration: Monte Carlo and analytic RMSE over query grids.

A configuration fixes the square geometry, the propagation constants and
the correlation kernel; the sweep variable is the ratio of sensor spacing
to correlation distance (the correlation distance is set to side / ratio
with the geometry held fixed). Per-point RMS interpolation error is
computed either in closed form from the estimators' error forms (analytic
mode, the default) or by averaging squared errors over simulated shadow
realizations (mc mode); 'both' computes the two side by side and flags
points where they disagree beyond Monte Carlo noise.

Monte Carlo determinism: realizations for grid point i come from the
substream keyed by (master_seed, i), so results are bitwise identical for
any worker count and any method grouping.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .geometry import Point, QueryGrid, Scenario, build_square_scenario, make_grid, distance
from .correlation import CorrelationModel, KERNEL_KINDS, EXPONENTIAL
from .field import median_power, sample_shadow_block
from . import estimators
from .estimators import ALL_METHODS, DegenerateGeometryError, sibson_weights, sm0_weights, sm2_weights
from .analysis import analytic_rmse, error_form

__all__ = [
    "DEFAULT_RATIOS",
    "EMITTER_PRESETS",
    "ConfigError",
    "ExperimentConfig",
    "RmseSurface",
    "SweepRow",
    "RmseDistribution",
    "spatial_average",
    "point_rmse_mc",
    "grid_rmse",
    "sweep",
    "rmse_distribution",
]

DEFAULT_RATIOS = (0.05, 0.1, 0.2, 0.5, 1.0, 2.0, 5.0, 10.0, 20.0)

EMITTER_PRESETS = {
    "E1": Point(-100.0, 0.0),
    "E2": Point(-100.0, 320.0),
    "E3": Point(-400.0, -400.0),
}

MODES = ("analytic", "mc", "both")


class ConfigError(ValueError):
    """Invalid experiment configuration; the message names the offending field."""


@dataclass(frozen=True)
class ExperimentConfig:
    """Everything a sweep needs; mirrors the JSON config file field for field."""

    side_m: float = 640.0
    emitter: Point = EMITTER_PRESETS["E1"]
    a_db: float = 15.3
    gamma: float = 3.76
    sigma_db: float = 5.0
    kernel: str = EXPONENTIAL
    axis_ratio: float = 3.3
    rotation_rad: float = 0.0
    ratios: tuple[float, ...] = DEFAULT_RATIOS
    resolution: int = 64
    realizations: int = 10000
    methods: tuple[str, ...] = ALL_METHODS
    master_seed: int = 12345
    mode: str = "analytic"
    nu: float = 1.0

    def validate(self) -> None:
        if self.side_m <= 0:
            raise ConfigError(f"field 'side_m' must be positive, got {self.side_m}")
        if self.gamma <= 0:
            raise ConfigError(f"field 'gamma' must be positive, got {self.gamma}")
        if self.sigma_db <= 0:
            raise ConfigError(f"field 'sigma_db' must be positive, got {self.sigma_db}")
        if self.kernel not in KERNEL_KINDS:
            raise ConfigError(f"field 'correlation.kind' must be one of {KERNEL_KINDS}, got {self.kernel!r}")
        if self.axis_ratio < 1:
            raise ConfigError(f"field 'correlation.axis_ratio' must be >= 1, got {self.axis_ratio}")
        if not self.ratios:
            raise ConfigError("field 'ratios' must be non-empty")
        if any(r <= 0 for r in self.ratios):
            raise ConfigError("field 'ratios' must all be positive")
        if list(self.ratios) != sorted(self.ratios) or len(set(self.ratios)) != len(self.ratios):
            raise ConfigError("field 'ratios' must be strictly ascending")
        if self.resolution < 1:
            raise ConfigError(f"field 'resolution' must be >= 1, got {self.resolution}")
        if self.realizations < 1:
            raise ConfigError(f"field 'realizations' must be >= 1, got {self.realizations}")
        if not self.methods:
            raise ConfigError("field 'methods' must be non-empty")
        for m in self.methods:
            if m not in ALL_METHODS:
                raise ConfigError(
                    f"field 'methods' contains unknown method {m!r}; valid methods: {', '.join(ALL_METHODS)}"
                )
        if len(set(self.methods)) != len(self.methods):
            raise ConfigError("field 'methods' contains duplicates")
        if self.master_seed < 0 or self.master_seed >= 2**64:
            raise ConfigError(f"field 'master_seed' must fit in an unsigned 64-bit integer, got {self.master_seed}")
        if self.mode not in MODES:
            raise ConfigError(f"field 'mode' must be one of {MODES}, got {self.mode!r}")
        if self.nu not in (1, 2, 3):
            raise ConfigError(f"field 'nu' must be 1, 2 or 3, got {self.nu}")

    @classmethod
    def desk_preset(cls, **overrides) -> "ExperimentConfig":
        """Coarse, fast settings for interactive work: res 16, 2000 realizations."""
        settings = {"resolution": 16, "realizations": 2000}
        settings.update(overrides)
        return cls(**settings)

    def correlation_for_ratio(self, ratio: float) -> CorrelationModel:
        return CorrelationModel(
            kind=self.kernel,
            sigma=self.sigma_db,
            xc=self.side_m / ratio,
            axis_ratio=self.axis_ratio,
            rotation=self.rotation_rad,
        )

    def scenario(self, ratio: float) -> Scenario:
        try:
            return build_square_scenario(
                self.side_m, self.emitter, self.a_db, self.gamma, self.correlation_for_ratio(ratio)
            )
        except ValueError as err:
            raise DegenerateGeometryError(str(err)) from err

    def grid(self) -> QueryGrid:
        return make_grid(self.side_m, self.resolution)


@dataclass(frozen=True)
class RmseSurface:
    """Per-grid-point RMS errors for one (ratio, method) plus the spatial aggregate."""

    method: str
    mode: str
    ratio: float
    resolution: int
    points: tuple[Point, ...]
    rmse: np.ndarray
    spatial_rmse: float
    rmse_analytic: np.ndarray | None = None
    rmse_mc: np.ndarray | None = None
    mc_within_3se: np.ndarray | None = None


@dataclass(frozen=True)
class SweepRow:
    ratio: float
    method: str
    spatial_rmse: float
    mode: str
    mc_stderr: float | None


@dataclass(frozen=True)
class RmseDistribution:
    bin_centers: np.ndarray
    pdf: np.ndarray
    cdf: np.ndarray


def spatial_average(per_point: np.ndarray) -> float:
    """Root of the spatial mean of squared per-point values."""
    v = np.asarray(per_point, dtype=float)
    return math.sqrt(float(np.mean(v**2)))


# ---------------------------------------------------------------------------
# Monte Carlo evaluation
#
# The simulated route deliberately re-runs the estimation pipeline on each
# realized measurement vector (vectorized across realizations) instead of
# reusing the closed-form error coefficients, so that analytic and Monte
# Carlo results stay independent checks of one another.


def _method_weights(method: str, scn: Scenario, p0: Point, nu: float) -> np.ndarray:
    sensors = list(scn.sensors)
    if method in (estimators.SM0, estimators.SM1):
        return sm0_weights(scn.correlation, sensors, p0)
    if method in (estimators.SM2, estimators.IDW):
        return sm2_weights(sensors, p0, nu)
    if method == estimators.NN:
        j = int(np.argmin([distance(p0, s) for s in sensors]))
        w = np.zeros(len(sensors))
        w[j] = 1.0
        return w
    if method == estimators.NATURAL:
        return sibson_weights(sensors, p0)
    raise ValueError(f"unknown method {method!r}, expected one of {ALL_METHODS}")


def _mc_squared_errors(
    scn: Scenario,
    p0: Point,
    methods: tuple[str, ...],
    realizations: int,
    master_seed: int,
    point_index: int,
    nu: float,
) -> dict[str, np.ndarray]:
    """Squared prediction error per realization for each method, one shared draw."""
    s0, s = sample_shadow_block(scn, p0, master_seed, point_index, realizations)
    pm = np.array([median_power(scn, sp) for sp in scn.sensors])
    pm0 = median_power(scn, p0)
    meas = pm + s                      # (R, n)
    truth = pm0 + s0                   # (R,)

    needs_fit = any(m in (estimators.SM1, estimators.SM2) for m in methods)
    if needs_fit:
        x = np.log10(np.array(scn.sensor_distances()))
        n = x.size
        denom = estimators._lse_denominator(x)
        sums = meas.sum(axis=1)
        dots = meas @ x
        slopes = (n * dots - x.sum() * sums) / denom
        a_hats = (float(x @ x) * sums - x.sum() * dots) / denom
        residuals = meas - a_hats[:, None] - slopes[:, None] * x[None, :]
        x0 = math.log10(distance(scn.emitter, p0))

    out: dict[str, np.ndarray] = {}
    for method in methods:
        w = _method_weights(method, scn, p0, nu)
        if method == estimators.SM0:
            pred = pm0 + (meas - pm) @ w
        elif method in (estimators.SM1, estimators.SM2):
            pred = a_hats + slopes * x0 + residuals @ w
        else:
            pred = meas @ w
        out[method] = (truth - pred) ** 2
    return out


def point_rmse_mc(
    scn: Scenario,
    p0: Point,
    method: str,
    realizations: int,
    master_seed: int,
    point_index: int = 0,
    nu: float = 1.0,
) -> float:
    """RMS prediction error at one point over simulated shadow realizations."""
    sq = _mc_squared_errors(scn, p0, (method,), realizations, master_seed, point_index, nu)
    return math.sqrt(float(np.mean(sq[method])))


# ---------------------------------------------------------------------------
# grid evaluation


def _grid_eval(
    config: ExperimentConfig,
    ratio: float,
    methods: tuple[str, ...],
    threads: int = 1,
) -> dict[str, RmseSurface]:
    scn = config.scenario(ratio)
    grid = config.grid()
    n_points = len(grid.points)
    analytic = config.mode in ("analytic", "both")
    mc = config.mode in ("mc", "both")

    a_vals = {m: np.zeros(n_points) for m in methods} if analytic else {}
    mc_vals = {m: np.zeros(n_points) for m in methods} if mc else {}

    def eval_point(i: int) -> None:
        p0 = grid.points[i]
        if analytic:
            for m in methods:
                form = error_form(m, scn, p0, config.nu)
                a_vals[m][i] = analytic_rmse(form, scn.correlation, p0, list(scn.sensors))
        if mc:
            sq = _mc_squared_errors(
                scn, p0, methods, config.realizations, config.master_seed, i, config.nu
            )
            for m in methods:
                mc_vals[m][i] = math.sqrt(float(np.mean(sq[m])))

    if threads > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            list(pool.map(eval_point, range(n_points)))
    else:
        for i in range(n_points):
            eval_point(i)

    surfaces: dict[str, RmseSurface] = {}
    for m in methods:
        primary = mc_vals[m] if mc else a_vals[m]
        flags = None
        if analytic and mc:
            # RMS estimate from R Gaussian errors has stderr ~ rmse / sqrt(2R)
            se = a_vals[m] / math.sqrt(2.0 * config.realizations)
            flags = np.abs(mc_vals[m] - a_vals[m]) <= 3.0 * se
        surfaces[m] = RmseSurface(
            method=m,
            mode=config.mode,
            ratio=ratio,
            resolution=config.resolution,
            points=grid.points,
            rmse=primary,
            spatial_rmse=spatial_average(primary),
            rmse_analytic=a_vals[m] if analytic else None,
            rmse_mc=mc_vals[m] if mc else None,
            mc_within_3se=flags,
        )
    return surfaces


def grid_rmse(
    config: ExperimentConfig, ratio: float, method: str, threads: int = 1
) -> RmseSurface:
    """Per-point RMSE surface for one method at one spacing ratio."""
    config.validate()
    if method not in ALL_METHODS:
        raise ConfigError(f"unknown method {method!r}; valid methods: {', '.join(ALL_METHODS)}")
    return _grid_eval(config, ratio, (method,), threads)[method]


def _spatial_stderr(per_point_rmse: np.ndarray, realizations: int, spatial: float) -> float:
    """Standard error of the spatial aggregate from independent per-point MC estimates."""
    r = np.asarray(per_point_rmse, dtype=float)
    m = r.size
    var_sq = (2.0 / realizations) * float(np.mean(r**4)) / m
    if spatial <= 0.0:
        return 0.0
    return math.sqrt(var_sq) / (2.0 * spatial)


def sweep(config: ExperimentConfig, threads: int = 1) -> list[SweepRow]:
    """One row per (ratio, method): the spatial RMSE aggregate for the whole grid."""
    config.validate()
    rows: list[SweepRow] = []
    for ratio in config.ratios:
        surfaces = _grid_eval(config, ratio, config.methods, threads)
        for method in config.methods:
            surf = surfaces[method]
            stderr = None
            if config.mode in ("mc", "both"):
                stderr = _spatial_stderr(surf.rmse_mc, config.realizations, surf.spatial_rmse)
            rows.append(
                SweepRow(
                    ratio=ratio,
                    method=method,
                    spatial_rmse=surf.spatial_rmse,
                    mode=config.mode,
                    mc_stderr=stderr,
                )
            )
    return rows


def rmse_distribution(surface: RmseSurface, bins: int) -> RmseDistribution:
    """Histogram density and empirical CDF of the per-point RMSE values."""
    if bins < 1:
        raise ValueError(f"bins must be >= 1, got {bins}")
    values = np.asarray(surface.rmse, dtype=float)
    lo = float(values.min())
    hi = float(values.max())
    if hi - lo <= 1e-9 * max(1.0, abs(hi)):
        lo -= 0.5
        hi += 0.5
    counts, edges = np.histogram(values, bins=bins, range=(lo, hi))
    widths = np.diff(edges)
    pdf = counts / (values.size * widths)
    cdf = np.cumsum(counts) / values.size
    centers = (edges[:-1] + edges[1:]) / 2.0
    return RmseDistribution(bin_centers=centers, pdf=pdf, cdf=cdf)
