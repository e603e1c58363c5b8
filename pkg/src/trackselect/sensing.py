"""Range/azimuth sensing: measurement map, Jacobian, per-radar noise levels.

Ranges in km, azimuths in radians wrapped to (-pi, pi]. Each radar carries
one range-accuracy factor b per target (b >= 1, larger means noisier), so
the range standard deviation for target j at radar i is b[i][j] * sigma_r.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .kinematics import STATE_DIM

# Geometry closer than this to a radar is rejected: the measurement map is
# singular at zero range and the Jacobian blows up.
MIN_RANGE_KM = 1e-3

_TAU = 2.0 * math.pi


def wrap_angle(a: float) -> float:
    """Wrap an angle into (-pi, pi]."""
    w = a % _TAU
    return w - _TAU if w > math.pi else w


@dataclass(frozen=True, eq=False)
class Measurement:
    """One range/azimuth observation of a target by a radar."""

    radar_id: int
    target_id: int
    time_index: int
    r: float
    a: float
    noise_cov: np.ndarray  # 2x2 diagonal

    def __post_init__(self):
        if self.r <= 0:
            raise ValueError(f"range must be positive, got {self.r}")
        if not (-math.pi < self.a <= math.pi):
            raise ValueError(f"azimuth {self.a} outside (-pi, pi]")
        d = np.diag(self.noise_cov)
        if self.noise_cov.shape != (2, 2) or np.any(d <= 0) or np.any(self.noise_cov != np.diag(d)):
            raise ValueError("noise_cov must be 2x2 diagonal with positive entries")

    @property
    def z(self) -> np.ndarray:
        return np.array([self.r, self.a])


@dataclass(frozen=True)
class RadarSite:
    """A radar position with its beam budget and noise parameters.

    Args:
        id: radar index.
        x, y: position [km].
        m: transmission beams available per scan.
        sigma_a: azimuth standard deviation [rad].
        sigma_r_base: base range standard deviation [km].
        b: per-target range accuracy factors, each >= 1.
    """

    id: int
    x: float
    y: float
    m: int
    sigma_a: float
    sigma_r_base: float
    b: tuple[float, ...] = field(default=())

    def __post_init__(self):
        if self.m < 1:
            raise ValueError("beam budget m must be >= 1")
        if not self.sigma_a > 0 or not self.sigma_r_base > 0:
            raise ValueError("noise standard deviations must be positive")
        if any(bf < 1.0 for bf in self.b):
            raise ValueError("range accuracy factors must be >= 1")

    def _offset(self, state: np.ndarray) -> tuple[float, float, float]:
        dx = float(state[0]) - self.x
        dy = float(state[1]) - self.y
        r = math.hypot(dx, dy)
        if r < MIN_RANGE_KM:
            raise ValueError(
                f"target at ({state[0]}, {state[1]}) within {MIN_RANGE_KM} km of radar {self.id}"
            )
        return dx, dy, r

    def observe(self, state: np.ndarray) -> np.ndarray:
        """Noise-free (range, azimuth) of a target state as seen from this radar."""
        dx, dy, r = self._offset(state)
        return np.array([r, math.atan2(dy, dx)])

    def jacobian(self, state: np.ndarray) -> np.ndarray:
        """2x4 Jacobian of the measurement map at `state`; velocity columns are zero."""
        dx, dy, r = self._offset(state)
        r2 = r * r
        H = np.zeros((2, STATE_DIM))
        H[0, 0] = dx / r
        H[0, 1] = dy / r
        H[1, 0] = -dy / r2
        H[1, 1] = dx / r2
        return H

    def residual(self, z: np.ndarray, predicted: np.ndarray) -> np.ndarray:
        """Innovation z - predicted with the azimuth component wrapped to (-pi, pi]."""
        nu = np.asarray(z, dtype=float) - np.asarray(predicted, dtype=float)
        nu[1] = wrap_angle(nu[1])
        return nu

    def noise_cov(self, target_id: int) -> np.ndarray:
        """2x2 diagonal measurement covariance for one target."""
        if not 0 <= target_id < len(self.b):
            raise ValueError(f"unknown target id {target_id} for radar {self.id}")
        return np.diag([(self.b[target_id] * self.sigma_r_base) ** 2, self.sigma_a**2])

    def sample_measurement(
        self, target_id: int, truth: np.ndarray, time_index: int, rng: np.random.Generator
    ) -> Measurement:
        """Noisy measurement of a true target state."""
        r, a = self.observe(truth)
        cov = self.noise_cov(target_id)
        noise = np.sqrt(np.diag(cov)) * rng.standard_normal(2)
        return Measurement(
            radar_id=self.id,
            target_id=target_id,
            time_index=time_index,
            r=r + noise[0],
            a=wrap_angle(a + noise[1]),
            noise_cov=cov,
        )
