"""Per-target extended Kalman filtering with cyclic measurement updates.

Every radar runs the same filter from the same initial guess, so a track
updated once from the shared measurement pool is identical to what each
radar would compute on its own. Within one time slot the available
measurements are applied one at a time, relinearizing the measurement
Jacobian at the current intermediate estimate; the trace of the error
covariance after each incremental update is recorded because those
per-step trace reductions are the accuracy gains the selection game runs
on.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable, Sequence

import numpy as np

from .kinematics import STATE_DIM, MotionModel, process_covariance, transition_matrix
from .sensing import Measurement, RadarSite

_I4 = np.eye(STATE_DIM)


@dataclass
class Track:
    """State estimate and error covariance for one target."""

    target_id: int
    state: np.ndarray  # 4-vector (km, km, km/s, km/s)
    cov: np.ndarray  # 4x4, symmetric positive definite

    def copy(self) -> "Track":
        return Track(self.target_id, self.state.copy(), self.cov.copy())


@dataclass
class UpdateTrace:
    """Covariance traces along one slot's incremental updates.

    per_step_traces[p-1] is trace(P) after the p-th measurement;
    predicted_trace is trace(P) before any measurement was applied.
    """

    predicted_trace: float
    per_step_traces: list[float] = field(default_factory=list)


def symmetrize(P: np.ndarray) -> np.ndarray:
    return 0.5 * (P + P.T)


def predict(track: Track, model: MotionModel) -> Track:
    """Time update: state <- F state, cov <- F cov F^T + Q."""
    F = transition_matrix(model)
    Q = process_covariance(model)
    return Track(
        track.target_id,
        F @ track.state,
        symmetrize(F @ track.cov @ F.T + Q),
    )


def covariance_update(cov: np.ndarray, H: np.ndarray, R: np.ndarray, *, joseph: bool = True) -> np.ndarray:
    """Measurement update of the covariance alone (no state involved).

    Joseph form is the default; the plain (I - KH) P form is kept as an
    algebraically identical alternative for cross-checks.
    """
    S = H @ cov @ H.T + R
    try:
        K = np.linalg.solve(S.T, H @ cov).T
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"singular innovation covariance: {exc}") from exc
    if joseph:
        A = _I4 - K @ H
        return symmetrize(A @ cov @ A.T + K @ R @ K.T)
    return symmetrize((_I4 - K @ H) @ cov)


def _kalman_step(state, cov, z, R, site, *, joseph=True):
    H = site.jacobian(state)
    S = H @ cov @ H.T + R
    try:
        K = np.linalg.solve(S.T, H @ cov).T
    except np.linalg.LinAlgError as exc:
        raise np.linalg.LinAlgError(f"singular innovation covariance: {exc}") from exc
    nu = site.residual(z, site.observe(state))
    state = state + K @ nu
    if joseph:
        A = _I4 - K @ H
        cov = symmetrize(A @ cov @ A.T + K @ R @ K.T)
    else:
        cov = symmetrize((_I4 - K @ H) @ cov)
    return state, cov


def update_cyclic(
    track: Track,
    measurements: Sequence[Measurement],
    sites: Iterable[RadarSite],
    *,
    joseph: bool = True,
) -> tuple[Track, UpdateTrace]:
    """Apply all available measurements of one slot, one at a time.

    Measurements are applied in the order given; the caller fixes the
    canonical order (ascending radar id, then beam index) so that every
    radar reproduces the same track from the same broadcast pool. An empty
    measurement list leaves the predicted track unchanged.

    Raises:
        ValueError: a measurement refers to a different target, or the
            slot mixes time indices.
        numpy.linalg.LinAlgError: degenerate innovation covariance.
    """
    by_id = {s.id: s for s in sites}
    trace = UpdateTrace(predicted_trace=float(np.trace(track.cov)))
    state, cov = track.state.copy(), track.cov.copy()
    time_index = measurements[0].time_index if measurements else None
    for meas in measurements:
        if meas.target_id != track.target_id:
            raise ValueError(
                f"measurement of target {meas.target_id} applied to track {track.target_id}"
            )
        if meas.time_index != time_index:
            raise ValueError("measurements of one update must share a time index")
        site = by_id[meas.radar_id]
        state, cov = _kalman_step(state, cov, meas.z, meas.noise_cov, site, joseph=joseph)
        trace.per_step_traces.append(float(np.trace(cov)))
    return Track(track.target_id, state, cov), trace


def gain_increments(trace: UpdateTrace) -> list[float]:
    """Per-measurement trace reductions; their sum is the slot's accuracy gain."""
    prev = trace.predicted_trace
    out = []
    for t in trace.per_step_traces:
        out.append(prev - t)
        prev = t
    return out


def hypothetical_increments(
    cov: np.ndarray,
    state: np.ndarray,
    schedule: Sequence[tuple[RadarSite, int]],
    *,
    joseph: bool = True,
) -> list[float]:
    """Trace reductions a measurement schedule would produce, covariance-only.

    `schedule` lists (radar, target_id) pairs in the order the measurements
    would be applied. No measurement values are needed: the covariance
    recursion depends only on the Jacobians (taken at `state`) and noise
    levels. Used to build gain tables and accuracy rankings before any
    beam is actually committed.
    """
    out = []
    prev = float(np.trace(cov))
    for site, target_id in schedule:
        H = site.jacobian(state)
        cov = covariance_update(cov, H, site.noise_cov(target_id), joseph=joseph)
        t = float(np.trace(cov))
        out.append(prev - t)
        prev = t
    return out
