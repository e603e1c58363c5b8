"""Track selection for multi-target tracking in a multifunction radar network.

A simulation and game-engine library: constant-velocity truth and
range/azimuth sensing, per-target extended Kalman filtering with cyclic
measurement updates, an anti-coordination track-selection game with exact
Nash and Pareto oracles, a distributed best-response allocation algorithm,
and a Monte Carlo harness comparing selection strategies.
"""

from .dynamics import (
    DynamicsConfig,
    RadarDecisionState,
    best_response_step,
    make_policy,
    run_dynamics,
)
from .game import (
    GainTable,
    GameSpec,
    StrategyProfile,
    check_proposition,
    enumerate_profiles,
    gain,
    is_nash,
    is_pareto_optimal,
    nash_set,
    utility,
)
from .kinematics import MotionModel, process_covariance, step_truth, transition_matrix
from .scenario import ScenarioConfig, config_from_dict, default_scenario
from .sensing import Measurement, RadarSite
from .simulate import MetricsLog, run_monte_carlo, run_once
from .tracker import Track, UpdateTrace, gain_increments, predict, update_cyclic

__all__ = [
    "DynamicsConfig",
    "GainTable",
    "GameSpec",
    "Measurement",
    "MetricsLog",
    "MotionModel",
    "RadarDecisionState",
    "RadarSite",
    "ScenarioConfig",
    "StrategyProfile",
    "Track",
    "UpdateTrace",
    "best_response_step",
    "check_proposition",
    "config_from_dict",
    "default_scenario",
    "enumerate_profiles",
    "gain",
    "gain_increments",
    "is_nash",
    "is_pareto_optimal",
    "make_policy",
    "nash_set",
    "predict",
    "process_covariance",
    "run_dynamics",
    "run_monte_carlo",
    "run_once",
    "step_truth",
    "transition_matrix",
    "update_cyclic",
    "utility",
]

__version__ = "0.1.0"
