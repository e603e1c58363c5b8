"""Distributed best-response track selection and the baseline policies.

Each radar acts on the per-target coverage counts broadcast in the previous
slot; all radars move simultaneously, so information is always one slot
stale. One decision step per radar:

1. Deduplicate: every beam beyond the first on one of its own targets is
   reallocated to the least-covered target outside its selection.
2. With probability alpha, make at most one move: if one of its own targets
   is covered at least two beams deeper than the least-covered outside
   target, shift a beam there (preferring the most accurate of the tied
   least-covered, which covers the over-budget case of a target exceeding
   ceil(total_beams / n_targets)); otherwise, if the gap is exactly one and
   the outside target is more accurate, swap a beam onto it.
3. Announce the new selection.

Ties in coverage counts break toward the lower target id, except that the
swap in step 2 offers up the least accurate of a radar's own tied targets;
among a radar's own duplicated targets the most-duplicated sheds beams
first. Selections are reinitialized uniformly at random every k_reinit
slots so the network keeps exploring equilibria as geometry drifts.
"""

from __future__ import annotations

import itertools
import math
from collections import Counter
from dataclasses import dataclass
from typing import Callable, Sequence

import numpy as np

from .game import StrategyProfile
from .tracker import hypothetical_increments

STRATEGY_KINDS = ("standalone", "random-k", "random-slot", "best-response", "centralized")


@dataclass(frozen=True)
class DynamicsConfig:
    """Knobs of the best-response dynamics."""

    alpha: float = 0.4
    k_reinit: int = 10
    seed: int | None = None

    def __post_init__(self):
        if not 0.0 <= self.alpha <= 1.0:
            raise ValueError(f"alpha must be in [0, 1], got {self.alpha}")
        if self.k_reinit < 1:
            raise ValueError(f"reinitialization period must be >= 1, got {self.k_reinit}")


@dataclass(frozen=True)
class RadarDecisionState:
    """One radar's current selection and its view of the network.

    selected is a multiset of target ids (at most m beams);
    last_known_counts are the per-target totals broadcast last slot.
    """

    radar_id: int
    selected: tuple[int, ...] = ()
    last_known_counts: tuple[int, ...] | None = None


def _dedupe(selection: Counter, counts_view: list[int], n_targets: int) -> None:
    dups = sorted((t for t, k in selection.items() if k > 1),
                  key=lambda t: (-selection[t], t))
    for t in dups:
        while selection[t] > 1:
            outside = [q for q in range(n_targets) if selection.get(q, 0) == 0]
            if not outside:
                break
            dest = min(outside, key=lambda q: (counts_view[q], q))
            selection[t] -= 1
            selection[dest] += 1
            counts_view[t] -= 1
            counts_view[dest] += 1


def _balance_move(
    selection: Counter, counts_view: list[int], accuracy: Sequence[float], n_targets: int
) -> bool:
    """Move one beam from a >=2-over-covered own target to the best argmin target."""
    own = [t for t, k in selection.items() if k > 0]
    outside = [q for q in range(n_targets) if selection.get(q, 0) == 0]
    if not own or not outside:
        return False
    low = min(counts_view[q] for q in outside)
    sources = [t for t in own if counts_view[t] - low >= 2]
    if not sources:
        return False
    src = max(sources, key=lambda t: (counts_view[t], -t))
    pool = [q for q in outside if counts_view[q] == low]
    dest = max(pool, key=lambda q: (accuracy[q], -q))
    selection[src] -= 1
    selection[dest] += 1
    counts_view[src] -= 1
    counts_view[dest] += 1
    return True


def _accuracy_swap(
    selection: Counter, counts_view: list[int], accuracy: Sequence[float], n_targets: int
) -> bool:
    """Swap a beam onto a one-beam-lighter outside target with better accuracy.

    Among own targets tied at the maximum count the least accurate one is
    offered up: that is the swap a utility-improving radar would make, and
    it lets an isolated radar walk to its top-m targets.
    """
    own = [t for t, k in selection.items() if k > 0]
    outside = [q for q in range(n_targets) if selection.get(q, 0) == 0]
    if not own or not outside:
        return False
    src = max(own, key=lambda t: (counts_view[t], -accuracy[t], -t))
    low = min(counts_view[q] for q in outside)
    if counts_view[src] - low != 1:
        return False
    pool = [q for q in outside if counts_view[q] == low]
    dest = max(pool, key=lambda q: (accuracy[q], -q))
    if accuracy[dest] > accuracy[src]:
        selection[src] -= 1
        selection[dest] += 1
        counts_view[src] -= 1
        counts_view[dest] += 1
        return True
    return False


def best_response_step(
    state: RadarDecisionState,
    counts: Sequence[int],
    accuracy_rank: Sequence[float],
    cfg: DynamicsConfig,
    rng: np.random.Generator,
) -> RadarDecisionState:
    """One radar's decision for the next slot, given last slot's counts."""
    n_targets = len(counts)
    selection = Counter(state.selected)
    counts_view = list(counts)
    _dedupe(selection, counts_view, n_targets)
    if rng.random() < cfg.alpha:
        if not _balance_move(selection, counts_view, accuracy_rank, n_targets):
            _accuracy_swap(selection, counts_view, accuracy_rank, n_targets)
    selected = tuple(sorted(selection.elements()))
    return RadarDecisionState(state.radar_id, selected, tuple(counts))


def profile_from_selections(
    selections: Sequence[Sequence[int]], n_targets: int
) -> StrategyProfile:
    rows = []
    for sel in selections:
        row = [0] * n_targets
        for t in sel:
            row[t] += 1
        rows.append(tuple(row))
    return StrategyProfile(tuple(rows))


class BestResponseEngine:
    """Synchronous best-response stepping for a radar network.

    Per-radar random streams are split from one seed sequence so a network
    step is reproducible regardless of evaluation order.
    """

    def __init__(
        self,
        n_radars: int,
        n_targets: int,
        m: int,
        cfg: DynamicsConfig,
        seed_seq: np.random.SeedSequence | int | None = None,
        initial: Sequence[RadarDecisionState] | None = None,
    ):
        if not isinstance(seed_seq, np.random.SeedSequence):
            seed_seq = np.random.SeedSequence(cfg.seed if seed_seq is None else seed_seq)
        self.n_radars = n_radars
        self.n_targets = n_targets
        self.m = m
        self.cfg = cfg
        self._rngs = [np.random.default_rng(s) for s in seed_seq.spawn(n_radars)]
        if initial is None:
            initial = [RadarDecisionState(i) for i in range(n_radars)]
        self.states = list(initial)
        self._prev_counts: tuple[int, ...] | None = None
        self.slot = 0

    def _random_selection(self, rng: np.random.Generator) -> tuple[int, ...]:
        picks = rng.choice(self.n_targets, size=self.m, replace=False)
        return tuple(sorted(int(t) for t in picks))

    def step(self, accuracy: np.ndarray) -> StrategyProfile:
        """Advance one slot. accuracy is (n_radars, n_targets), larger is better."""
        reinit = self.slot > 0 and self.slot % self.cfg.k_reinit == 0
        if reinit or self.slot == 0:
            self.states = [
                RadarDecisionState(
                    st.radar_id,
                    self._random_selection(rng) if (reinit or not st.selected) else st.selected,
                    self._prev_counts,
                )
                for st, rng in zip(self.states, self._rngs)
            ]
        else:
            counts = self._prev_counts
            self.states = [
                best_response_step(st, counts, accuracy[st.radar_id], self.cfg, rng)
                for st, rng in zip(self.states, self._rngs)
            ]
        profile = profile_from_selections([st.selected for st in self.states], self.n_targets)
        self._prev_counts = profile.column_sums()
        self.slot += 1
        return profile


def run_dynamics(
    network: Sequence[RadarDecisionState],
    n_targets: int,
    m: int,
    accuracy: np.ndarray | Callable[[int], np.ndarray],
    cfg: DynamicsConfig,
    n_slots: int,
    seed_seq: np.random.SeedSequence | int | None = None,
) -> list[StrategyProfile]:
    """Trajectory of strategy profiles under the best-response dynamics.

    accuracy is either a fixed (n_radars, n_targets) array or a callable
    slot -> array for time-varying rankings. Radars with an empty selection
    are initialized uniformly at random; every k_reinit slots all
    selections are redrawn.
    """
    engine = BestResponseEngine(len(network), n_targets, m, cfg, seed_seq, initial=network)
    out = []
    for slot in range(n_slots):
        acc = accuracy(slot) if callable(accuracy) else accuracy
        out.append(engine.step(np.asarray(acc)))
    return out


def is_dynamics_fixed_point(
    profile: StrategyProfile, accuracy: np.ndarray, n_targets: int
) -> bool:
    """No duplicates, coverage gap <= 1, and no enabled accuracy swap.

    Profiles with these properties are invariant under best_response_step
    for every random draw (given unchanged accuracy rankings).
    """
    counts = profile.column_sums()
    if max(counts) - min(counts) > 1:
        return False
    for i, row in enumerate(profile.s):
        if any(b > 1 for b in row):
            return False
        selection = Counter({t: b for t, b in enumerate(row) if b})
        if _accuracy_swap(selection, list(counts), accuracy[i], n_targets):
            return False
    return True


class StandaloneSequential:
    """Round-robin target visits in ascending id order, identical at every radar."""

    name = "standalone"
    shares_measurements = False

    def __init__(self, n_radars: int, n_targets: int, m: int):
        self.n_radars = n_radars
        self.n_targets = n_targets
        self.m = m

    def select(self, slot: int, ctx=None) -> StrategyProfile:
        sel = [(slot * self.m + i) % self.n_targets for i in range(self.m)]
        return profile_from_selections([sel] * self.n_radars, self.n_targets)


class RandomSelection:
    """Uniform random m-distinct-target selections, redrawn every `period` slots."""

    shares_measurements = True

    def __init__(
        self,
        n_radars: int,
        n_targets: int,
        m: int,
        period: int,
        seed_seq: np.random.SeedSequence,
    ):
        self.name = "random-slot" if period == 1 else "random-k"
        self.n_radars = n_radars
        self.n_targets = n_targets
        self.m = m
        self.period = period
        self._rngs = [np.random.default_rng(s) for s in seed_seq.spawn(n_radars)]
        self._current: list[tuple[int, ...]] | None = None

    def select(self, slot: int, ctx=None) -> StrategyProfile:
        if self._current is None or slot % self.period == 0:
            self._current = [
                tuple(sorted(int(t) for t in rng.choice(self.n_targets, size=self.m, replace=False)))
                for rng in self._rngs
            ]
        return profile_from_selections(self._current, self.n_targets)


class BestResponsePolicy:
    """The distributed best-response dynamics driven by live accuracy ranks."""

    name = "best-response"
    shares_measurements = True

    def __init__(
        self,
        n_radars: int,
        n_targets: int,
        m: int,
        cfg: DynamicsConfig,
        seed_seq: np.random.SeedSequence,
    ):
        self.engine = BestResponseEngine(n_radars, n_targets, m, cfg, seed_seq)

    def select(self, slot: int, ctx) -> StrategyProfile:
        return self.engine.step(ctx.accuracy_matrix())


class CentralizedExhaustive:
    """Exhaustive utility search over per-radar distinct selections, held K slots.

    Every candidate profile is scored by the exact one-slot utility it would
    realize: per target, the covariance-trace reduction of sequentially
    applying the measurements of exactly the radars that profile assigns to
    it (in ascending radar-id order, the same order the filter uses), minus
    the delay penalty for uncovered targets. Distinct selections per radar
    keep the search space at C(n_targets, m)^n_radars.
    """

    name = "centralized"
    shares_measurements = True

    def __init__(self, n_radars: int, n_targets: int, m: int, period: int, c: float):
        self.n_radars = n_radars
        self.n_targets = n_targets
        self.m = m
        self.period = period
        self.c = c
        self._profiles: list[StrategyProfile] | None = None
        self._masks: np.ndarray | None = None  # (n_profiles, n_targets) radar bitmasks
        self._current: StrategyProfile | None = None

    def search_space_size(self) -> int:
        return math.comb(self.n_targets, self.m) ** self.n_radars

    def _ensure_space(self) -> None:
        if self._profiles is not None:
            return
        rows = []
        for combo in itertools.combinations(range(self.n_targets), self.m):
            row = [0] * self.n_targets
            for t in combo:
                row[t] = 1
            rows.append(tuple(row))
        self._profiles = [
            StrategyProfile(p) for p in itertools.product(rows, repeat=self.n_radars)
        ]
        masks = np.zeros((len(self._profiles), self.n_targets), dtype=int)
        for k, p in enumerate(self._profiles):
            for i in range(self.n_radars):
                for j in range(self.n_targets):
                    if p.s[i][j]:
                        masks[k, j] |= 1 << i
        self._masks = masks

    def select(self, slot: int, ctx) -> StrategyProfile:
        if self._current is None or slot % self.period == 0:
            self._ensure_space()
            gains = np.zeros((self.n_targets, 1 << self.n_radars))
            for j, track in enumerate(ctx.predicted):
                for mask in range(1, 1 << self.n_radars):
                    schedule = [
                        (ctx.sites[i], j) for i in range(self.n_radars) if mask >> i & 1
                    ]
                    gains[j, mask] = sum(
                        hypothetical_increments(track.cov, track.state, schedule)
                    )
            utils = gains[np.arange(self.n_targets), self._masks].sum(axis=1)
            utils -= self.c * (self._masks == 0).sum(axis=1)
            self._current = self._profiles[int(np.argmax(utils))]
        return self._current


def make_policy(
    kind: str,
    n_radars: int,
    n_targets: int,
    m: int,
    cfg: DynamicsConfig,
    seed_seq: np.random.SeedSequence,
    c: float = 0.0,
):
    """Build one of the five selection strategies by CLI name."""
    if kind == "standalone":
        return StandaloneSequential(n_radars, n_targets, m)
    if kind == "random-k":
        return RandomSelection(n_radars, n_targets, m, cfg.k_reinit, seed_seq)
    if kind == "random-slot":
        return RandomSelection(n_radars, n_targets, m, 1, seed_seq)
    if kind == "best-response":
        return BestResponsePolicy(n_radars, n_targets, m, cfg, seed_seq)
    if kind == "centralized":
        return CentralizedExhaustive(n_radars, n_targets, m, cfg.k_reinit, c)
    raise ValueError(f"unknown strategy kind {kind!r}; choose from {STRATEGY_KINDS}")
