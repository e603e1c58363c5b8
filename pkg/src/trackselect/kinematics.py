"""Ground-truth target motion: 2D white-noise constant-velocity model.

Target states are plain 4-vectors ordered (x, y, vx, vy), positions in km
and velocities in km/s. The transition matrix F and process covariance Q
are shared between the truth simulator and the tracking filter.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np

STATE_DIM = 4
STATE_FIELDS = ("x", "y", "vx", "vy")


@dataclass(frozen=True)
class MotionModel:
    """Constant-velocity motion with white acceleration noise.

    Args:
        t_u: update interval between time slots [s], > 0.
        sigma_w_sq: process-noise intensity [km^2/s^3], >= 0.
    """

    t_u: float
    sigma_w_sq: float

    def __post_init__(self):
        if not self.t_u > 0:
            raise ValueError(f"update interval must be positive, got {self.t_u}")
        if self.sigma_w_sq < 0:
            raise ValueError(f"noise intensity must be >= 0, got {self.sigma_w_sq}")


@lru_cache(maxsize=32)
def _model_matrices(model: MotionModel):
    t = model.t_u
    F = np.kron(np.array([[1.0, t], [0.0, 1.0]]), np.eye(2))
    Q = model.sigma_w_sq * np.kron(
        np.array([[t**3 / 3.0, t**2 / 2.0], [t**2 / 2.0, t]]), np.eye(2)
    )
    # PSD square root via eigendecomposition; Q is singular when sigma_w_sq == 0.
    w, v = np.linalg.eigh(Q)
    L = v * np.sqrt(np.clip(w, 0.0, None))
    F.setflags(write=False)
    Q.setflags(write=False)
    L.setflags(write=False)
    return F, Q, L


def transition_matrix(model: MotionModel) -> np.ndarray:
    """4x4 state transition matrix [[1, t_u], [0, 1]] (x) I2."""
    return _model_matrices(model)[0]


def process_covariance(model: MotionModel) -> np.ndarray:
    """4x4 process noise covariance, symmetric positive semidefinite."""
    return _model_matrices(model)[1]


def sample_process_noise(model: MotionModel, rng: np.random.Generator, n: int | None = None) -> np.ndarray:
    """Zero-mean Gaussian process noise with covariance Q.

    Returns shape (4,) when n is None, else (n, 4).
    """
    L = _model_matrices(model)[2]
    if n is None:
        return L @ rng.standard_normal(STATE_DIM)
    return rng.standard_normal((n, STATE_DIM)) @ L.T


def step_truth(state: np.ndarray, model: MotionModel, rng: np.random.Generator) -> np.ndarray:
    """One time slot of true motion: F @ state + w, w ~ N(0, Q)."""
    state = np.asarray(state, dtype=float)
    if state.shape != (STATE_DIM,) or not np.all(np.isfinite(state)):
        raise ValueError(f"state must be a finite 4-vector, got {state!r}")
    F = _model_matrices(model)[0]
    return F @ state + sample_process_noise(model, rng)
