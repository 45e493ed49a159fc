"""Ground-truth synthesis: correlated shadow fading and received powers.

Shadow values at a query point and its n sensors are drawn jointly from the
zero-mean Gaussian with covariance given by the scenario's correlation
model: s = L z, where L is the Cholesky factor of the (n+1) x (n+1) joint
covariance (query point first) and z is a vector of independent standard
normals.

Reproducibility contract
------------------------
Normals are produced by the inverse normal CDF applied to uniforms from a
Philox-4x64 counter stream keyed by (master_seed, point_index). Each
realization owns an aligned block of raw 64-bit words; realization r uses
words [r * W, r * W + n + 1) with W = 4 * ceil((n+1)/4). A raw word x maps
to the open-interval uniform ((x >> 11) + 0.5) * 2^-53. The variates for
(master_seed, point_index, realization_index) are therefore a pure function
of those three integers, independent of how many realizations are requested,
in what order, or on how many threads.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.special import ndtri

from .geometry import Point, Scenario, distance
from .correlation import covariance_matrix
from .linalg import cholesky

__all__ = [
    "SeedSpec",
    "ShadowSample",
    "median_power",
    "joint_cholesky",
    "standard_normal_block",
    "sample_shadow",
    "sample_shadow_block",
    "received_powers",
]


@dataclass(frozen=True)
class SeedSpec:
    """Addresses one realization's variates: (master_seed, point_index, realization_index)."""

    master_seed: int
    point_index: int = 0
    realization_index: int = 0

    def __post_init__(self) -> None:
        for name in ("master_seed", "point_index", "realization_index"):
            v = getattr(self, name)
            if v < 0 or v >= 2**64:
                raise ValueError(f"{name} must fit in an unsigned 64-bit integer, got {v}")


@dataclass(frozen=True)
class ShadowSample:
    """Joint shadow draw: s0 at the query point, s at the sensors."""

    s0: float
    s: np.ndarray


def median_power(scn: Scenario, p: Point) -> float:
    """Median received power a_db + 10 * gamma * log10(d), in dB (d in meters)."""
    d = distance(scn.emitter, p)
    if d <= 0.0:
        raise ValueError(f"zero emitter distance at point ({p.x}, {p.y})")
    return scn.a_db + 10.0 * scn.gamma * math.log10(d / scn.reference_distance)


def joint_cholesky(scn: Scenario, p0: Point) -> np.ndarray:
    """Cholesky factor of the joint covariance over [p0, sensors] (p0 first)."""
    return cholesky(covariance_matrix(scn.correlation, [p0, *scn.sensors]))


def _words_per_realization(n_variates: int) -> int:
    # Philox advances in ticks of 4 raw words; aligned blocks keep
    # single-realization access O(1).
    return 4 * ((n_variates + 3) // 4)


def standard_normal_block(
    master_seed: int,
    point_index: int,
    n_variates: int,
    realizations: int,
    first_realization: int = 0,
) -> np.ndarray:
    """(realizations, n_variates) standard normals for consecutive realizations.

    Row k holds the variates of realization ``first_realization + k``.
    """
    words = _words_per_realization(n_variates)
    key = np.array([master_seed, point_index], dtype=np.uint64)
    bitgen = np.random.Philox(key=key)
    if first_realization:
        bitgen.advance(first_realization * (words // 4))
    raw = bitgen.random_raw(realizations * words)
    u = ((raw >> np.uint64(11)).astype(np.float64) + 0.5) * 2.0**-53
    return ndtri(u).reshape(realizations, words)[:, :n_variates]


def _correlate_rows(z: np.ndarray, lower: np.ndarray) -> np.ndarray:
    """Rows of z through the factor: out[r, j] = sum_k lower[j, k] * z[r, k].

    Accumulated column by column in fixed order so a realization's bits do
    not depend on how many realizations are computed in one call.
    """
    out = np.zeros((z.shape[0], lower.shape[0]))
    for k in range(lower.shape[1]):
        out += z[:, k, None] * lower[None, :, k]
    return out


def sample_shadow(scn: Scenario, p0: Point, seed: SeedSpec) -> ShadowSample:
    """One joint shadow draw at (p0, sensors), deterministic in the seed."""
    lower = joint_cholesky(scn, p0)
    z = standard_normal_block(
        seed.master_seed,
        seed.point_index,
        n_variates=scn.n_sensors + 1,
        realizations=1,
        first_realization=seed.realization_index,
    )
    joint = _correlate_rows(z, lower)[0]
    return ShadowSample(s0=float(joint[0]), s=joint[1:])


def sample_shadow_block(
    scn: Scenario,
    p0: Point,
    master_seed: int,
    point_index: int,
    realizations: int,
) -> tuple[np.ndarray, np.ndarray]:
    """Vectorized draw of many realizations: (s0 of shape (R,), s of shape (R, n)).

    Row r equals sample_shadow(..., SeedSpec(master_seed, point_index, r)),
    bit for bit.
    """
    lower = joint_cholesky(scn, p0)
    z = standard_normal_block(master_seed, point_index, scn.n_sensors + 1, realizations)
    joint = _correlate_rows(z, lower)
    return joint[:, 0], joint[:, 1:]


def received_powers(scn: Scenario, sample: ShadowSample, p0: Point) -> tuple[float, np.ndarray]:
    """(power at p0, powers at sensors): median power plus the shadow draw."""
    pr0 = median_power(scn, p0) + sample.s0
    pr = np.array([median_power(scn, s) for s in scn.sensors]) + sample.s
    return pr0, pr
