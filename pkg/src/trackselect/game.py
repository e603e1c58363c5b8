"""The track-selection game: profiles, utilities, and exact equilibrium oracles.

A game instance is defined by the number of radars, the number of targets,
the per-radar beam budget m, a delay-importance coefficient c, and a gain
table of per-target diminishing accuracy increments. A radar's strategy is
a row of beam counts over targets (row sum <= m); utilities depend only on
the per-target column sums, so they are identical across radars and the
game is an anti-coordination game: covering what others left uncovered
pays, piling on does not.

Everything here is exact and enumeration-based on purpose: these are the
oracles the distributed dynamics are judged against.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterator, Sequence

import numpy as np

SCHEMA_VERSION = 1


class InstanceTooLargeError(ValueError):
    """Raised when an instance exceeds the brute-force enumeration guard."""


@dataclass(frozen=True)
class GainTable:
    """Per-target ordered gain increments.

    increments[j][p-1] is the accuracy gain of the p-th measurement applied
    to target j within one slot. All increments must be non-negative and
    the table must be at least as deep as the total beam budget of the
    game it is used in.
    """

    increments: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        if not self.increments:
            raise ValueError("gain table needs at least one target row")
        depth = len(self.increments[0])
        if depth < 1 or any(len(row) != depth for row in self.increments):
            raise ValueError("all targets need the same positive table depth")
        if any(g < 0 for row in self.increments for g in row):
            raise ValueError("gain increments must be >= 0")

    @property
    def n_targets(self) -> int:
        return len(self.increments)

    @property
    def depth(self) -> int:
        return len(self.increments[0])

    @cached_property
    def cumulative(self) -> np.ndarray:
        """(n_targets, depth+1) array; cumulative[j][k] = gain of k measurements."""
        arr = np.zeros((self.n_targets, self.depth + 1))
        arr[:, 1:] = np.cumsum(self.increments, axis=1)
        arr.setflags(write=False)
        return arr

    @cached_property
    def is_case_a(self) -> bool:
        """All targets share one increment sequence."""
        return all(row == self.increments[0] for row in self.increments)

    @cached_property
    def is_case_b(self) -> bool:
        """Strict level separation: the worst p-th increment beats the best (p+1)-th."""
        cols = np.asarray(self.increments)
        return bool(
            np.all(cols[:, :-1].min(axis=0) > cols[:, 1:].max(axis=0))
        )


@dataclass(frozen=True)
class GameSpec:
    """One instance of the track-selection game."""

    n_radars: int
    n_targets: int
    m: int
    c: float
    gain_table: GainTable

    def __post_init__(self):
        if self.n_radars < 1 or self.n_targets < 1:
            raise ValueError("need at least one radar and one target")
        if not 1 <= self.m < self.n_targets:
            raise ValueError(f"beam budget must satisfy 1 <= m < n_targets, got m={self.m}")
        if self.gain_table.n_targets != self.n_targets:
            raise ValueError("gain table target count does not match the game")
        if self.gain_table.depth < self.n_radars * self.m:
            raise ValueError("gain table shallower than the total beam budget")

    @property
    def total_beams(self) -> int:
        return self.n_radars * self.m


@dataclass(frozen=True)
class StrategyProfile:
    """Beam counts per radar and target; s[i][j] beams of radar i on target j."""

    s: tuple[tuple[int, ...], ...]

    def __post_init__(self):
        if any(b < 0 for row in self.s for b in row):
            raise ValueError("beam counts must be non-negative")

    @classmethod
    def from_rows(cls, rows: Sequence[Sequence[int]]) -> "StrategyProfile":
        return cls(tuple(tuple(int(b) for b in row) for row in rows))

    def column_sums(self) -> tuple[int, ...]:
        """Per-target measurement counts m_j^t."""
        return tuple(sum(col) for col in zip(*self.s))

    def row_sums(self) -> tuple[int, ...]:
        return tuple(sum(row) for row in self.s)

    @property
    def matrix(self) -> np.ndarray:
        return np.asarray(self.s, dtype=int)


def validate_profile(spec: GameSpec, profile: StrategyProfile) -> None:
    if len(profile.s) != spec.n_radars or any(len(row) != spec.n_targets for row in profile.s):
        raise ValueError("profile shape does not match the game")
    if any(sum(row) > spec.m for row in profile.s):
        raise ValueError(f"a radar exceeds its beam budget m={spec.m}")


def gain(table: GainTable, target_id: int, m_t: int) -> float:
    """Accuracy gain of m_t measurements on one target; 0 when m_t == 0."""
    if not 0 <= m_t <= table.depth:
        raise ValueError(f"measurement count {m_t} exceeds table depth {table.depth}")
    return float(table.cumulative[target_id, m_t])


def utility_from_counts(spec: GameSpec, counts: Sequence[int]) -> float:
    """Common radar utility of a per-target count vector.

    Summed with math.fsum so that profiles whose utilities are equal as
    real numbers (symmetric allocations in particular) compare exactly
    equal as floats; a naive left-to-right sum would let last-bit rounding
    manufacture strict preferences between tied profiles.
    """
    cum = spec.gain_table.cumulative
    terms = [float(cum[j, ct]) for j, ct in enumerate(counts)]
    terms.extend(-spec.c for ct in counts if ct == 0)
    return math.fsum(terms)


def utility(spec: GameSpec, profile: StrategyProfile, radar_id: int = 0) -> float:
    """Utility of one radar: summed target gains minus delay penalties.

    The value is the same for every radar_id because it depends on the
    profile only through column sums.
    """
    validate_profile(spec, profile)
    if not 0 <= radar_id < spec.n_radars:
        raise ValueError(f"unknown radar id {radar_id}")
    return utility_from_counts(spec, profile.column_sums())


def enumerate_rows(
    n_targets: int, m: int, *, distinct_only: bool = False
) -> list[tuple[int, ...]]:
    """All per-radar strategies: beam-count vectors with row sum <= m.

    With distinct_only=True only full-budget rows over m distinct targets
    are produced (entries 0/1, sum == m).
    """
    rows = []
    sizes = [m] if distinct_only else range(m + 1)
    for k in sizes:
        if distinct_only:
            combos = itertools.combinations(range(n_targets), k)
        else:
            combos = itertools.combinations_with_replacement(range(n_targets), k)
        for combo in combos:
            row = [0] * n_targets
            for t in combo:
                row[t] += 1
            rows.append(tuple(row))
    return rows


def profile_space_size(spec: GameSpec, *, distinct_only: bool = False) -> int:
    """Number of profiles enumerate_profiles would yield."""
    if distinct_only:
        per_radar = math.comb(spec.n_targets, spec.m)
    else:
        per_radar = math.comb(spec.n_targets + spec.m, spec.m)
    return per_radar**spec.n_radars


def enumerate_profiles(
    spec: GameSpec,
    *,
    distinct_only: bool = False,
    max_profiles: int = 200_000,
) -> Iterator[StrategyProfile]:
    """Yield every strategy profile exactly once.

    Raises:
        InstanceTooLargeError: the profile space exceeds max_profiles.
    """
    total = profile_space_size(spec, distinct_only=distinct_only)
    if total > max_profiles:
        raise InstanceTooLargeError(
            f"{total} profiles exceed the enumeration guard of {max_profiles}"
        )
    rows = enumerate_rows(spec.n_targets, spec.m, distinct_only=distinct_only)
    for combo in itertools.product(rows, repeat=spec.n_radars):
        yield StrategyProfile(combo)


@dataclass(frozen=True)
class Deviation:
    """A strictly improving unilateral strategy change."""

    radar_id: int
    row: tuple[int, ...]
    utility_before: float
    utility_after: float


def _counts_without_row(counts: Sequence[int], row: Sequence[int]) -> list[int]:
    return [c - r for c, r in zip(counts, row)]


def is_nash(
    spec: GameSpec, profile: StrategyProfile, *, max_profiles: int = 200_000
) -> tuple[bool, Deviation | None]:
    """Exact Nash test: no radar has a strictly improving row replacement.

    Returns (True, None) or (False, witnessing_deviation). Deviations range
    over every alternative row with row sum <= m, not just one-beam moves.
    """
    validate_profile(spec, profile)
    rows = enumerate_rows(spec.n_targets, spec.m)
    if len(rows) * spec.n_radars > max_profiles:
        raise InstanceTooLargeError("deviation enumeration exceeds the size guard")
    counts = profile.column_sums()
    base = utility_from_counts(spec, counts)
    for i in range(spec.n_radars):
        residual = _counts_without_row(counts, profile.s[i])
        for row in rows:
            if row == profile.s[i]:
                continue
            u = utility_from_counts(spec, [c + r for c, r in zip(residual, row)])
            if u > base:
                return False, Deviation(i, row, base, u)
    return True, None


def nash_set(
    spec: GameSpec, *, max_profiles: int = 200_000
) -> list[StrategyProfile]:
    """All pure Nash equilibria by brute force."""
    rows = enumerate_rows(spec.n_targets, spec.m)
    util_cache: dict[tuple[int, ...], float] = {}

    def u_of(counts: tuple[int, ...]) -> float:
        u = util_cache.get(counts)
        if u is None:
            u = utility_from_counts(spec, counts)
            util_cache[counts] = u
        return u

    out = []
    for profile in enumerate_profiles(spec, max_profiles=max_profiles):
        counts = profile.column_sums()
        base = u_of(counts)
        ok = True
        for i in range(spec.n_radars):
            residual = _counts_without_row(counts, profile.s[i])
            for row in rows:
                if row == profile.s[i]:
                    continue
                if u_of(tuple(c + r for c, r in zip(residual, row))) > base:
                    ok = False
                    break
            if not ok:
                break
        if ok:
            out.append(profile)
    return out


def is_pareto_optimal(
    spec: GameSpec,
    profile: StrategyProfile,
    candidate_set: Sequence[StrategyProfile],
) -> bool:
    """True iff no candidate Pareto-dominates the profile.

    Domination is checked player by player even though utilities coincide
    across radars in this game; the check stays valid for any utility
    structure sharing the interface.
    """
    us = [utility(spec, profile, i) for i in range(spec.n_radars)]
    for other in candidate_set:
        vs = [utility(spec, other, i) for i in range(spec.n_radars)]
        if all(v >= u for u, v in zip(us, vs)) and any(v > u for u, v in zip(us, vs)):
            return False
    return True


def pareto_optimal_set(
    spec: GameSpec, candidate_set: Sequence[StrategyProfile]
) -> list[StrategyProfile]:
    """Members of candidate_set not Pareto-dominated within candidate_set."""
    return [p for p in candidate_set if is_pareto_optimal(spec, p, candidate_set)]


def greedy_accuracy_profile(spec: GameSpec) -> StrategyProfile:
    """Level-filling allocation topped up by first-increment accuracy.

    Radars commit beams in radar-id order; each beam goes to a least-covered
    target the radar does not already hold, preferring the target with the
    largest first gain increment (ties to the lower target id).
    """
    first = [spec.gain_table.increments[j][0] for j in range(spec.n_targets)]
    counts = [0] * spec.n_targets
    rows = []
    for _ in range(spec.n_radars):
        row = [0] * spec.n_targets
        for _ in range(spec.m):
            candidates = [j for j in range(spec.n_targets) if row[j] == 0]
            if not candidates:
                candidates = list(range(spec.n_targets))
            low = min(counts[j] for j in candidates)
            pool = [j for j in candidates if counts[j] == low]
            pick = max(pool, key=lambda j: (first[j], -j))
            row[pick] += 1
            counts[pick] += 1
        rows.append(tuple(row))
    return StrategyProfile(tuple(rows))


@dataclass
class PropositionReport:
    """Outcome of checking one equilibrium-structure claim on an instance."""

    proposition: int
    holds: bool
    nash_count: int
    counterexamples: list[StrategyProfile] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)
    details: dict = field(default_factory=dict)


def _strictly_decreasing(table: GainTable) -> bool:
    return all(
        row[p] > row[p + 1] for row in table.increments for p in range(len(row) - 1)
    )


def check_proposition(
    spec: GameSpec, which: int, *, max_profiles: int = 200_000
) -> PropositionReport:
    """Verify the equilibrium structure claimed for case (a) or case (b).

    Proposition 1 (case a): the Nash set intersected with the Pareto set
    equals the full-budget profiles that cover distinct targets (when the
    network budget fits the target count) or that are balanced within one
    beam (when it does not).

    Proposition 2 (case b): every equilibrium fills the first
    ceil(total_beams / n_targets) - 1 coverage levels, and the greedy
    accuracy-ranked allocation is itself an equilibrium.

    Raises:
        ValueError: the instance does not carry the required case flag or
            has c < 0.
    """
    table = spec.gain_table
    if spec.c < 0:
        raise ValueError("proposition checks require c >= 0")
    if which == 1 and not table.is_case_a:
        raise ValueError("proposition 1 requires a case-a gain table")
    if which == 2 and not table.is_case_b:
        raise ValueError("proposition 2 requires a case-b gain table")
    if which not in (1, 2):
        raise ValueError(f"unknown proposition {which}")

    nash = nash_set(spec, max_profiles=max_profiles)
    report = PropositionReport(proposition=which, holds=True, nash_count=len(nash))
    report.details["decreasing_increments"] = _strictly_decreasing(table)
    fits = spec.total_beams <= spec.n_targets

    # Utilities are common to all radars, so Pareto optimality over the full
    # profile space reduces to attaining the maximum common utility.
    u_cache: dict[tuple[int, ...], float] = {}

    def u_of(counts: tuple[int, ...]) -> float:
        u = u_cache.get(counts)
        if u is None:
            u = utility_from_counts(spec, counts)
            u_cache[counts] = u
        return u

    u_best = max(
        u_of(p.column_sums()) for p in enumerate_profiles(spec, max_profiles=max_profiles)
    )
    nash_po = [p for p in nash if u_of(p.column_sums()) >= u_best]
    report.details["nash_pareto_count"] = len(nash_po)

    if which == 1:
        expected = []
        for p in enumerate_profiles(spec, max_profiles=max_profiles):
            if any(sum(row) != spec.m for row in p.s):
                continue
            cols = p.column_sums()
            if fits:
                if max(cols) <= 1:
                    expected.append(p)
            elif max(cols) - min(cols) <= 1:
                expected.append(p)
        exp_keys = {p.s for p in expected}
        got_keys = {p.s for p in nash_po}
        report.details["expected_count"] = len(expected)
        if fits:
            ordered = math.factorial(spec.n_targets) // math.factorial(
                spec.n_targets - spec.total_beams
            )
            matrix_count = ordered // math.factorial(spec.m) ** spec.n_radars
            report.details["ordered_assignment_count"] = ordered
            report.details["distinct_profile_count"] = matrix_count
            report.notes.append(
                "ordered assignments label the m beams of each radar individually; "
                "profile matrices do not, so matrices = ordered / (m!)^n_radars"
            )
        if exp_keys != got_keys:
            report.holds = False
            diff = exp_keys.symmetric_difference(got_keys)
            report.counterexamples = [StrategyProfile(s) for s in sorted(diff)][:10]
    else:
        level = math.ceil(spec.total_beams / spec.n_targets)
        report.details["fill_level"] = level - 1
        bad = [p for p in nash if min(p.column_sums()) < level - 1]
        report.details["level_fill_counterexample_count"] = len(bad)
        greedy = greedy_accuracy_profile(spec)
        greedy_ok, deviation = is_nash(spec, greedy, max_profiles=max_profiles)
        report.details["greedy_profile"] = greedy.s
        report.details["greedy_is_nash"] = greedy_ok
        if bad:
            report.holds = False
            report.counterexamples = bad[:10]
        if not greedy_ok:
            report.holds = False
            report.notes.append(
                f"greedy allocation admits deviation by radar {deviation.radar_id} "
                f"to row {deviation.row}"
            )
    return report


def spec_to_dict(spec: GameSpec) -> dict:
    """JSON-ready mapping that mirrors the game fields exactly."""
    return {
        "schema_version": SCHEMA_VERSION,
        "n_radars": spec.n_radars,
        "n_targets": spec.n_targets,
        "m": spec.m,
        "c": spec.c,
        "gain_table": {"increments": [list(row) for row in spec.gain_table.increments]},
    }


def spec_from_dict(data: dict) -> GameSpec:
    version = data.get("schema_version", SCHEMA_VERSION)
    if version != SCHEMA_VERSION:
        raise ValueError(f"unsupported game schema version {version}")
    table = GainTable(
        tuple(tuple(float(g) for g in row) for row in data["gain_table"]["increments"])
    )
    return GameSpec(
        n_radars=int(data["n_radars"]),
        n_targets=int(data["n_targets"]),
        m=int(data["m"]),
        c=float(data["c"]),
        gain_table=table,
    )
