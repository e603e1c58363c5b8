"""Shared helpers: game-instance generators and linear-filter test doubles."""

from dataclasses import dataclass

import numpy as np

from trackselect.game import GainTable, GameSpec

# shapes (n_radars, m, n_targets) whose full profile space stays <= 1000
OVERLOADED_SHAPES = [(2, 2, 3), (3, 1, 2), (3, 2, 3), (4, 1, 2), (4, 1, 3), (5, 1, 2)]
FITTING_SHAPES = [(2, 1, 3), (2, 1, 4), (3, 1, 4), (2, 2, 4), (2, 2, 5), (3, 1, 3)]


def make_case_a(rng, n_radars, m, n_targets, c=None, depth=None):
    """Identical strictly-decreasing increment sequences for every target."""
    depth = depth or n_radars * m
    base = np.sort(rng.uniform(0.2, 1.0, size=depth))[::-1]
    rows = tuple(tuple(float(v) for v in base) for _ in range(n_targets))
    if c is None:
        c = float(rng.uniform(0.01, 0.5))
    return GameSpec(n_radars, n_targets, m, float(c), GainTable(rows))


def make_case_b(rng, n_radars, m, n_targets, c=None, depth=None, rank_consistent=True):
    """Target-distinct increments with strict separation between levels.

    Level p values live in [3 * 0.5^p, 4 * 0.5^p], so the smallest value of
    one level always beats the largest of the next. With rank_consistent the
    same target ordering holds at every level, the natural situation where
    one target is simply easier to measure than another.
    """
    depth = depth or n_radars * m
    vals = np.empty((n_targets, depth))
    quality_order = rng.permutation(n_targets)
    for p in range(depth):
        lo, hi = 3 * 0.5**p, 4 * 0.5**p
        col = np.sort(lo + (hi - lo) * rng.random(n_targets))[::-1]
        if rank_consistent:
            vals[quality_order, p] = col
        else:
            vals[rng.permutation(n_targets), p] = col
    rows = tuple(tuple(float(v) for v in row) for row in vals)
    if c is None:
        c = float(rng.uniform(0.01, 0.5))
    return GameSpec(n_radars, n_targets, m, float(c), GainTable(rows))


@dataclass
class LinearSensor:
    """Fixed linear measurement model with the radar-site interface."""

    id: int
    H: np.ndarray
    R: np.ndarray

    def observe(self, state):
        return self.H @ state

    def jacobian(self, state):
        return self.H

    def residual(self, z, predicted):
        return np.asarray(z) - np.asarray(predicted)

    def noise_cov(self, target_id):
        return self.R


@dataclass
class FakeMeasurement:
    radar_id: int
    target_id: int
    time_index: int
    z: np.ndarray
    noise_cov: np.ndarray


def random_spd(rng, n=4, scale=1.0):
    A = rng.normal(size=(n, n))
    return scale * (A @ A.T + n * np.eye(n))


def batch_kalman_update(P, x, Hs, Rs, zs):
    """Single stacked-measurement update, the oracle for the cyclic path."""
    H = np.vstack(Hs)
    R = np.zeros((H.shape[0], H.shape[0]))
    at = 0
    for Rk in Rs:
        n = Rk.shape[0]
        R[at : at + n, at : at + n] = Rk
        at += n
    z = np.concatenate(zs)
    S = H @ P @ H.T + R
    K = np.linalg.solve(S.T, H @ P).T
    x_new = x + K @ (z - H @ x)
    A = np.eye(len(x)) - K @ H
    P_new = A @ P @ A.T + K @ R @ K.T
    return x_new, 0.5 * (P_new + P_new.T)
