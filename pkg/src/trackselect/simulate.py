"""The closed simulation loop and Monte Carlo aggregation.

Per slot: propagate truth, let every radar choose targets, fire the
selected beams, broadcast the measurements (except under the standalone
strategy), and run the shared prediction/update filter per target. Under
sharing strategies all radars hold bit-identical tracks, so the filter
state is computed once per target; the standalone strategy keeps one
filter bank per radar and its metric is the across-radar mean.

Seed discipline: master seed -> one child seed sequence per run index ->
fixed-purpose streams (truth, init, b factors, measurements, policy), so
results never depend on execution order and adding runs never perturbs
existing ones.
"""

from __future__ import annotations

import csv
import json
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .dynamics import DynamicsConfig, make_policy
from .game import GainTable, GameSpec, StrategyProfile
from .kinematics import MotionModel, step_truth
from .sensing import RadarSite
from .scenario import ScenarioConfig
from .tracker import Track, gain_increments, hypothetical_increments, predict, update_cyclic

CSV_HEADER = ("run", "slot", "strategy", "trace_sum")
SUMMARY_SCHEMA_VERSION = 1


@dataclass
class MetricsLog:
    """Per-slot metrics of one realization."""

    strategy: str
    run_index: int
    trace_sums: np.ndarray  # (horizon,)
    counts: np.ndarray  # (horizon, n_targets) realized coverage m_j^t
    profiles: list[StrategyProfile]
    measurements_per_slot: np.ndarray  # (horizon,)
    max_trace_increase: float  # worst per-step trace growth seen in any update


class SlotContext:
    """Per-slot quantities the selection policies may ask for.

    `sites` and `predicted` (the shared predicted tracks) are available
    directly; the accuracy matrix and the game instance are built lazily
    because only some strategies need them, and only on some slots.
    """

    def __init__(self, cfg: ScenarioConfig, sites, predicted, static_accuracy):
        self._cfg = cfg
        self.sites = sites
        self.predicted = predicted
        self._static_accuracy = static_accuracy
        self._accuracy: np.ndarray | None = None
        self._spec: GameSpec | None = None

    def accuracy_matrix(self) -> np.ndarray:
        """(n_radars, n_targets) target desirability per radar, larger is better.

        Live ranking: trace reduction a single measurement by that radar
        would produce on the current predicted covariance. Static ranking:
        the negated range-accuracy factors.
        """
        if self._accuracy is None:
            if self._static_accuracy is not None:
                self._accuracy = self._static_accuracy
            else:
                n_r, n_t = len(self.sites), len(self.predicted)
                acc = np.empty((n_r, n_t))
                for i, site in enumerate(self.sites):
                    for j, track in enumerate(self.predicted):
                        acc[i, j] = hypothetical_increments(
                            track.cov, track.state, [(site, j)]
                        )[0]
                self._accuracy = acc
        return self._accuracy

    def game_spec(self) -> GameSpec:
        """Game instance built from the current predicted covariances.

        The gain table applies hypothetical measurements per target in
        round-robin radar-id order (radar 0, 1, ..., 0, 1, ...), the
        canonical stand-in for whichever radars would fire.
        """
        if self._spec is None:
            cfg = self._cfg
            schedule_sites = list(self.sites) * cfg.m
            rows = []
            for j, track in enumerate(self.predicted):
                incs = hypothetical_increments(
                    track.cov, track.state, [(s, j) for s in schedule_sites]
                )
                rows.append(tuple(max(g, 0.0) for g in incs))
            table = GainTable(tuple(rows))
            self._spec = GameSpec(cfg.n_radars, cfg.n_targets, cfg.m, cfg.c, table)
        return self._spec


def build_sites(cfg: ScenarioConfig, rng_b: np.random.Generator) -> list[RadarSite]:
    """Per-run radar sites with drawn (or overridden) range-accuracy factors."""
    if cfg.b_matrix is not None:
        b = np.asarray(cfg.b_matrix, dtype=float)
    else:
        lo, hi = cfg.b_interval
        b = rng_b.uniform(lo, hi, size=(cfg.n_radars, cfg.n_targets))
    return [
        RadarSite(
            id=g.id,
            x=g.x,
            y=g.y,
            m=g.m,
            sigma_a=g.sigma_a,
            sigma_r_base=g.sigma_r_base,
            b=tuple(b[i]),
        )
        for i, g in enumerate(cfg.radars)
    ]


def _run_streams(cfg: ScenarioConfig, run_index: int):
    child = np.random.SeedSequence(cfg.seed, spawn_key=(run_index,))
    truth_ss, init_ss, b_ss, meas_ss, policy_ss = child.spawn(5)
    return (
        np.random.default_rng(truth_ss),
        np.random.default_rng(init_ss),
        np.random.default_rng(b_ss),
        np.random.default_rng(meas_ss),
        policy_ss,
    )


def _sample_beams(profile, sites, truths, slot, rng_meas):
    """Fire the selected beams; returns measurements grouped per target.

    Within a target, measurements keep ascending (radar id, beam index)
    order, the canonical order every radar applies them in.
    """
    per_target = [[] for _ in truths]
    n = 0
    for site in sites:
        for j, beams in enumerate(profile.s[site.id]):
            for _ in range(beams):
                per_target[j].append(site.sample_measurement(j, truths[j], slot, rng_meas))
                n += 1
    return per_target, n


def run_once(cfg: ScenarioConfig, run_index: int) -> MetricsLog:
    """One seeded realization of the scenario under cfg.strategy."""
    rng_truth, rng_init, rng_b, rng_meas, policy_ss = _run_streams(cfg, run_index)
    sites = build_sites(cfg, rng_b)
    model = MotionModel(cfg.t_u, cfg.sigma_w_sq)
    n_t, n_r = cfg.n_targets, cfg.n_radars
    p0 = np.diag(cfg.p0_diag)
    p0_std = np.sqrt(np.asarray(cfg.p0_diag))

    truths = [np.array(t, dtype=float) for t in cfg.targets]
    init_states = [t + p0_std * rng_init.standard_normal(4) for t in truths]

    share = cfg.strategy != "standalone"
    if share:
        banks = [[Track(j, init_states[j].copy(), p0.copy()) for j in range(n_t)]]
    else:
        banks = [
            [Track(j, init_states[j].copy(), p0.copy()) for j in range(n_t)]
            for _ in range(n_r)
        ]

    static_acc = None
    if cfg.accuracy_ranking == "static":
        static_acc = -np.array([s.b for s in sites])

    policy = make_policy(
        cfg.strategy, n_r, n_t, cfg.m, DynamicsConfig(cfg.alpha, cfg.k_reinit), policy_ss, c=cfg.c
    )

    trace_sums = np.empty(cfg.horizon)
    counts = np.empty((cfg.horizon, n_t), dtype=int)
    meas_counts = np.empty(cfg.horizon, dtype=int)
    profiles: list[StrategyProfile] = []
    max_increase = -np.inf

    for k in range(1, cfg.horizon + 1):
        truths = [step_truth(t, model, rng_truth) for t in truths]
        predicted = [[predict(tr, model) for tr in bank] for bank in banks]
        ctx = SlotContext(cfg, sites, predicted[0], static_acc)
        profile = policy.select(k - 1, ctx)
        profiles.append(profile)
        counts[k - 1] = profile.column_sums()

        per_target, n_meas = _sample_beams(profile, sites, truths, k, rng_meas)
        meas_counts[k - 1] = n_meas

        slot_sum = 0.0
        for bank_idx, bank in enumerate(banks):
            for j in range(n_t):
                if share:
                    meas = per_target[j]
                else:
                    meas = [mz for mz in per_target[j] if mz.radar_id == bank_idx]
                track, trace = update_cyclic(predicted[bank_idx][j], meas, sites)
                bank[j] = track
                incs = gain_increments(trace)
                if incs:
                    max_increase = max(max_increase, -min(incs))
                slot_sum += trace.per_step_traces[-1] if incs else trace.predicted_trace
        trace_sums[k - 1] = slot_sum / len(banks)

    return MetricsLog(
        strategy=cfg.strategy,
        run_index=run_index,
        trace_sums=trace_sums,
        counts=counts,
        profiles=profiles,
        measurements_per_slot=meas_counts,
        max_trace_increase=float(max_increase) if np.isfinite(max_increase) else 0.0,
    )


def _run_job(args) -> MetricsLog:
    cfg, strategy, run_index = args
    return run_once(cfg.with_overrides(strategy=strategy), run_index)


@dataclass
class MonteCarloResult:
    """Aggregated runs: raw per-run rows plus per-strategy summary curves."""

    config: ScenarioConfig
    strategies: tuple[str, ...]
    logs: dict[str, list[MetricsLog]]
    rows: list[tuple[int, int, str, float]] = field(default_factory=list)
    summary: dict = field(default_factory=dict)


def run_monte_carlo(
    cfg: ScenarioConfig,
    *,
    strategies: tuple[str, ...] | None = None,
    workers: int = 1,
) -> MonteCarloResult:
    """Independent seeded realizations for one or more strategies.

    Runs are embarrassingly parallel; results are keyed by (strategy, run)
    and reduced in a fixed order, so the output is identical for any worker
    count or execution order.
    """
    strategies = strategies or (cfg.strategy,)
    jobs = [(cfg, s, i) for s in strategies for i in range(cfg.n_runs)]
    if workers > 1:
        with ProcessPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_run_job, jobs, chunksize=4))
    else:
        results = [_run_job(j) for j in jobs]

    logs: dict[str, list[MetricsLog]] = {s: [] for s in strategies}
    for job, log in zip(jobs, results):
        logs[job[1]].append(log)
    for s in strategies:
        logs[s].sort(key=lambda lg: lg.run_index)

    rows = []
    for s in strategies:
        for log in logs[s]:
            for slot in range(cfg.horizon):
                rows.append((log.run_index, slot + 1, s, float(log.trace_sums[slot])))

    summary: dict = {
        "schema_version": SUMMARY_SCHEMA_VERSION,
        "seed": cfg.seed,
        "n_runs": cfg.n_runs,
        "horizon": cfg.horizon,
        "strategies": {},
    }
    half = cfg.horizon // 2
    for s in strategies:
        data = np.stack([log.trace_sums for log in logs[s]])  # (runs, horizon)
        mean = data.mean(axis=0)
        stderr = (
            data.std(axis=0, ddof=1) / np.sqrt(data.shape[0])
            if data.shape[0] > 1
            else np.zeros(cfg.horizon)
        )
        tail = data[:, half:].mean(axis=1)  # per-run time average, last half
        tail_se = (
            float(tail.std(ddof=1) / np.sqrt(len(tail))) if len(tail) > 1 else 0.0
        )
        summary["strategies"][s] = {
            "mean": [float(v) for v in mean],
            "stderr": [float(v) for v in stderr],
            "last_half_mean": float(tail.mean()),
            "last_half_stderr": tail_se,
        }
    return MonteCarloResult(cfg, tuple(strategies), logs, rows, summary)


def write_csv(path, rows) -> None:
    """run,slot,strategy,trace_sum rows; floats via repr for byte stability."""
    with open(path, "w", newline="") as f:
        w = csv.writer(f, lineterminator="\n")
        w.writerow(CSV_HEADER)
        for run, slot, strategy, value in rows:
            w.writerow((run, slot, strategy, repr(value)))


def write_summary(path, summary: dict) -> None:
    with open(path, "w") as f:
        json.dump(summary, f, indent=2, sort_keys=True)
        f.write("\n")
