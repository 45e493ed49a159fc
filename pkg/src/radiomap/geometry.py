"""Locations, distances, and scenario construction.

Everything here is a plain value type: coordinates are meters stored as
floats, and all functions are pure. A Scenario bundles the ground truth a
simulation needs (emitter, sensors, propagation constants, correlation
model); a QueryGrid is the set of interior points a radio map is evaluated
at.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:  # pragma: no cover - import cycle guard, types only
    from .correlation import CorrelationModel

__all__ = [
    "Point",
    "Scenario",
    "QueryGrid",
    "distance",
    "build_square_scenario",
    "make_grid",
]


@dataclass(frozen=True)
class Point:
    """A 2-D location in meters."""

    x: float
    y: float

    def __post_init__(self) -> None:
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"point coordinates must be finite, got ({self.x}, {self.y})")


def distance(p: Point, q: Point) -> float:
    """Euclidean distance between two points in meters."""
    return math.hypot(p.x - q.x, p.y - q.y)


@dataclass(frozen=True)
class Scenario:
    """Ground-truth world: emitter, sensors, propagation constants, correlation.

    Received power at distance d from the emitter is modeled as
    ``a_db + 10 * gamma * log10(d / reference_distance) + shadow`` where the
    shadow term is zero-mean Gaussian with the spatial covariance given by
    ``correlation``. The reference distance is fixed at 1 m.
    """

    emitter: Point
    sensors: tuple[Point, ...]
    a_db: float
    gamma: float
    correlation: "CorrelationModel"
    reference_distance: float = 1.0

    def __post_init__(self) -> None:
        object.__setattr__(self, "sensors", tuple(self.sensors))
        if len(self.sensors) <= 2:
            raise ValueError(f"need more than 2 sensors, got {len(self.sensors)}")
        if self.gamma <= 0:
            raise ValueError(f"path-loss exponent must be positive, got {self.gamma}")
        if self.reference_distance != 1.0:
            raise ValueError("reference distance is fixed at 1 m")
        for i, s in enumerate(self.sensors):
            if distance(self.emitter, s) <= 0.0:
                raise ValueError(f"emitter coincides with sensor {i} at ({s.x}, {s.y})")

    @property
    def sigma(self) -> float:
        """Shadow-fading standard deviation in dB (single source: the correlation model)."""
        return self.correlation.sigma

    @property
    def n_sensors(self) -> int:
        return len(self.sensors)

    def sensor_distances(self) -> list[float]:
        """Emitter-to-sensor distances, in sensor order."""
        return [distance(self.emitter, s) for s in self.sensors]


@dataclass(frozen=True)
class QueryGrid:
    """Cell-centered lattice of query points strictly inside the sensor square.

    Point (i, j) sits at ((i + 0.5) * side / resolution, (j + 0.5) * side / resolution).
    Points are ordered with i (x) varying fastest, so the flat index of (i, j)
    is ``j * resolution + i``; that index also keys the per-point random
    substreams used by the simulation harness.
    """

    resolution: int
    points: tuple[Point, ...]

    def __post_init__(self) -> None:
        if len(self.points) != self.resolution**2:
            raise ValueError(
                f"grid holds {len(self.points)} points, expected resolution^2 = {self.resolution**2}"
            )


def build_square_scenario(
    side: float,
    emitter: Point,
    a_db: float,
    gamma: float,
    correlation: "CorrelationModel",
) -> Scenario:
    """Scenario with four sensors on the corners of a side-by-side square.

    Sensor order is fixed: (0,0), (0,side), (side,side), (side,0). Weight
    vectors and CSV columns downstream rely on this ordering.
    """
    if side <= 0:
        raise ValueError(f"square side must be positive, got {side}")
    sensors = (
        Point(0.0, 0.0),
        Point(0.0, side),
        Point(side, side),
        Point(side, 0.0),
    )
    return Scenario(emitter=emitter, sensors=sensors, a_db=a_db, gamma=gamma, correlation=correlation)


def make_grid(side: float, resolution: int) -> QueryGrid:
    """Cell-centered resolution x resolution lattice over the (0, side) square.

    Cell-centering keeps every query point strictly interior, so no query
    ever lands on a sensor (where several interpolators degenerate).
    """
    if resolution < 1:
        raise ValueError(f"resolution must be >= 1, got {resolution}")
    if side <= 0:
        raise ValueError(f"square side must be positive, got {side}")
    step = side / resolution
    points = tuple(
        Point((i + 0.5) * step, (j + 0.5) * step)
        for j in range(resolution)
        for i in range(resolution)
    )
    return QueryGrid(resolution=resolution, points=points)
