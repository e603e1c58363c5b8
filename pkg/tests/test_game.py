import itertools
import json
import math
from fractions import Fraction

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import FITTING_SHAPES, OVERLOADED_SHAPES, make_case_a, make_case_b
from trackselect.game import (
    GainTable,
    GameSpec,
    InstanceTooLargeError,
    StrategyProfile,
    check_proposition,
    enumerate_profiles,
    enumerate_rows,
    gain,
    greedy_accuracy_profile,
    is_nash,
    is_pareto_optimal,
    nash_set,
    pareto_optimal_set,
    profile_space_size,
    spec_from_dict,
    spec_to_dict,
    utility,
    utility_from_counts,
)


def shared_table(values, n_targets):
    return GainTable(tuple(tuple(values) for _ in range(n_targets)))


def profile(*rows):
    return StrategyProfile(tuple(tuple(r) for r in rows))


# ---------------------------------------------------------------- gain


def test_gain_zero_measurements():
    t = shared_table((3.0, 2.0, 1.0), 2)
    assert gain(t, 0, 0) == 0.0


def test_gain_partial_sum():
    t = shared_table((3.0, 2.0, 1.0), 2)
    assert gain(t, 1, 2) == 5.0


def test_gain_beyond_depth_raises():
    t = shared_table((3.0, 2.0, 1.0), 2)
    with pytest.raises(ValueError):
        gain(t, 0, 4)


@given(st.lists(st.floats(0.0, 10.0), min_size=1, max_size=8), st.data())
def test_gain_telescopes(values, data):
    t = shared_table(values, 1)
    k = data.draw(st.integers(0, len(values) - 1))
    assert gain(t, 0, k + 1) - gain(t, 0, k) == pytest.approx(values[k])


# ---------------------------------------------------------------- utility


def test_utility_all_idle_is_pure_delay():
    spec = GameSpec(2, 5, 2, 1.0, shared_table((3.0, 2.0, 1.0, 0.5), 5))
    p = profile([0] * 5, [0] * 5)
    assert utility(spec, p, 0) == -5.0


def test_utility_hand_case_two_radars_two_targets():
    spec = GameSpec(2, 2, 1, 0.0, shared_table((3.0, 2.0, 1.0), 2))
    stacked = profile([1, 0], [1, 0])
    split = profile([1, 0], [0, 1])
    assert utility(spec, stacked) == 5.0
    assert utility(spec, split) == 6.0


def test_utility_single_coverage_sums_first_increments():
    rng = np.random.default_rng(0)
    spec = make_case_b(rng, 2, 1, 3, c=0.0)
    p = profile([1, 0, 0], [0, 1, 0])
    first = [row[0] for row in spec.gain_table.increments]
    # target 2 uncovered, c = 0, so utility is the two first increments
    assert utility(spec, p) == pytest.approx(first[0] + first[1])


@given(st.integers(0, 10_000), st.integers(2, 4), st.integers(2, 5))
def test_utility_identical_across_radars(seed, n_radars, n_targets):
    rng = np.random.default_rng(seed)
    m = int(rng.integers(1, n_targets))
    spec = make_case_b(rng, n_radars, m, n_targets)
    rows = enumerate_rows(n_targets, m)
    p = StrategyProfile(tuple(rows[rng.integers(len(rows))] for _ in range(n_radars)))
    us = [utility(spec, p, i) for i in range(n_radars)]
    assert all(u == us[0] for u in us)


# ---------------------------------------------------------------- enumeration


def test_enumerate_single_radar_one_beam():
    spec = GameSpec(1, 2, 1, 0.1, shared_table((1.0,), 2))
    got = list(enumerate_profiles(spec))
    assert len(got) == 3  # target 0, target 1, idle
    assert len({p.s for p in got}) == 3


def test_enumerate_two_radars_three_targets():
    spec = GameSpec(2, 3, 1, 0.1, shared_table((1.0, 0.5), 3))
    got = list(enumerate_profiles(spec))
    assert len(got) == 16 == profile_space_size(spec)
    assert len({p.s for p in got}) == 16


def test_enumerate_distinct_only_count():
    spec = GameSpec(3, 5, 2, 0.1, shared_table(tuple(np.linspace(3, 0.5, 6)), 5))
    got = list(enumerate_profiles(spec, distinct_only=True))
    assert len(got) == math.comb(5, 2) ** 3 == 1000
    assert all(sum(row) == 2 and max(row) == 1 for p in got for row in p.s)


def test_enumerate_size_guard():
    spec = GameSpec(6, 8, 3, 0.1, shared_table(tuple(np.linspace(3, 0.1, 18)), 8))
    with pytest.raises(InstanceTooLargeError):
        list(enumerate_profiles(spec, max_profiles=10_000))


# ---------------------------------------------------------------- Nash oracle


def test_is_nash_split_and_stacked():
    spec = GameSpec(2, 2, 1, 0.1, shared_table((3.0, 2.0, 1.0), 2))
    ok, dev = is_nash(spec, profile([1, 0], [0, 1]))
    assert ok and dev is None
    ok, dev = is_nash(spec, profile([1, 0], [1, 0]))
    assert not ok
    # the witness gains 1 from the increment gap plus 0.1 of delay relief
    assert dev.utility_after - dev.utility_before == pytest.approx(1.1)


def test_unused_beams_never_nash():
    rng = np.random.default_rng(4)
    for _ in range(20):
        n_radars, m, n_targets = OVERLOADED_SHAPES[rng.integers(len(OVERLOADED_SHAPES))]
        spec = make_case_a(rng, n_radars, m, n_targets)
        rows = enumerate_rows(n_targets, m)
        partial = [r for r in rows if sum(r) < m]
        full = [r for r in rows if sum(r) == m]
        p = StrategyProfile(
            tuple(
                partial[rng.integers(len(partial))] if i == 0 else full[rng.integers(len(full))]
                for i in range(n_radars)
            )
        )
        ok, _ = is_nash(spec, p)
        assert not ok


def test_single_radar_nash_is_utility_maximum():
    rng = np.random.default_rng(9)
    spec = make_case_b(rng, 1, 2, 4)
    best = max(utility(spec, p) for p in enumerate_profiles(spec))
    for p in enumerate_profiles(spec):
        ok, _ = is_nash(spec, p)
        assert ok == (utility(spec, p) == pytest.approx(best, abs=0.0))


def _reference_is_nash(spec, p):
    """Definition-level recheck: own row enumerator, exact rational utility."""

    def u(rows):
        total = Fraction(0)
        for j in range(spec.n_targets):
            ct = sum(r[j] for r in rows)
            total += sum(Fraction(g) for g in spec.gain_table.increments[j][:ct])
            if ct == 0:
                total -= Fraction(spec.c)
        return total

    all_rows = [
        r
        for r in itertools.product(range(spec.m + 1), repeat=spec.n_targets)
        if sum(r) <= spec.m
    ]
    base = u(p.s)
    for i in range(spec.n_radars):
        for r in all_rows:
            trial = list(p.s)
            trial[i] = r
            if u(trial) > base:
                return False
    return True


def test_nash_oracle_agrees_with_reference_enumerator():
    rng = np.random.default_rng(77)
    for trial in range(10):
        shape = (OVERLOADED_SHAPES + FITTING_SHAPES)[trial % 12]
        maker = make_case_a if trial % 2 else make_case_b
        spec = maker(rng, *[shape[0], shape[1], shape[2]])
        for p in enumerate_profiles(spec):
            ok, _ = is_nash(spec, p)
            assert ok == _reference_is_nash(spec, p)


def test_nash_set_distinct_count_small_case():
    rng = np.random.default_rng(1)
    spec = make_case_a(rng, 2, 1, 3, c=0.1)
    nash = nash_set(spec)
    # every equilibrium uses all beams on distinct targets; 3!/(3-2)! ordered picks
    assert len(nash) == 6
    for p in nash:
        assert all(sum(row) == 1 for row in p.s)
        assert max(p.column_sums()) == 1


def test_nash_set_degenerate_zero_gain():
    spec = GameSpec(2, 3, 1, 0.0, shared_table((0.0, 0.0), 3))
    nash = {p.s for p in nash_set(spec)}
    for p in enumerate_profiles(spec):
        if all(sum(row) == 1 for row in p.s):
            assert p.s in nash


def test_case_a_overloaded_balance_sample():
    rng = np.random.default_rng(13)
    for _ in range(5):
        shape = OVERLOADED_SHAPES[rng.integers(len(OVERLOADED_SHAPES))]
        spec = make_case_a(rng, *shape)
        for p in nash_set(spec):
            cols = p.column_sums()
            assert all(sum(row) == spec.m for row in p.s)
            assert max(cols) - min(cols) <= 1


# ---------------------------------------------------------------- Pareto


def test_case_a_nash_all_pareto_optimal():
    rng = np.random.default_rng(2)
    spec = make_case_a(rng, 2, 2, 3)
    profiles = list(enumerate_profiles(spec))
    for p in nash_set(spec):
        assert is_pareto_optimal(spec, p, profiles)


def test_case_b_concrete_two_by_two():
    table = GainTable(((5.0, 1.0), (4.0, 1.0)))
    spec = GameSpec(2, 2, 1, 0.1, table)
    assert table.is_case_b
    nash = nash_set(spec)
    assert {p.s for p in nash} == {((1, 0), (0, 1)), ((0, 1), (1, 0))}
    profiles = list(enumerate_profiles(spec))
    po_flags = [is_pareto_optimal(spec, p, profiles) for p in nash]
    assert any(po_flags)  # at least one equilibrium is Pareto optimal


def test_identical_utility_maxima_are_pareto_optimal():
    rng = np.random.default_rng(8)
    spec = make_case_b(rng, 2, 1, 3)
    profiles = list(enumerate_profiles(spec))
    best = max(utility(spec, p) for p in profiles)
    front = pareto_optimal_set(spec, profiles)
    assert front
    for p in front:
        assert utility(spec, p) == pytest.approx(best, abs=0.0)


# ---------------------------------------------------------------- propositions


def test_check_proposition_one_balanced_scenario():
    table = shared_table((3.0, 2.0, 1.0, 0.5, 0.25, 0.125), 5)
    spec = GameSpec(3, 5, 2, 0.1, table)
    report = check_proposition(spec, 1)
    assert report.holds
    assert report.nash_count > 0
    assert not report.counterexamples
    for p in nash_set(spec):
        assert set(p.column_sums()) <= {1, 2}


def test_check_proposition_one_fitting_counts():
    rng = np.random.default_rng(3)
    spec = make_case_a(rng, 2, 1, 3, c=0.2)
    report = check_proposition(spec, 1)
    assert report.holds
    assert report.details["ordered_assignment_count"] == 6
    assert report.details["distinct_profile_count"] == 6
    assert report.nash_count == 6


def test_check_proposition_two_level_fill_and_greedy():
    rng = np.random.default_rng(6)
    for shape in [(3, 1, 2), (2, 2, 3), (3, 2, 3)]:
        spec = make_case_b(rng, *shape)
        report = check_proposition(spec, 2)
        assert report.details["level_fill_counterexample_count"] == 0
        assert report.details["greedy_is_nash"]
        assert report.holds


def test_check_proposition_two_fitting_greedy_distinct():
    rng = np.random.default_rng(16)
    spec = make_case_b(rng, 2, 1, 4)
    greedy = greedy_accuracy_profile(spec)
    first = [row[0] for row in spec.gain_table.increments]
    top2 = set(np.argsort(first)[-2:])
    covered = {j for j in range(4) if greedy.column_sums()[j] == 1}
    assert covered == top2
    ok, _ = is_nash(spec, greedy)
    assert ok


def test_check_proposition_case_flag_errors():
    rng = np.random.default_rng(5)
    case_b = make_case_b(rng, 2, 1, 3)
    with pytest.raises(ValueError):
        check_proposition(case_b, 1)
    # increasing increments break the level separation required for case b
    not_case_b = GameSpec(2, 3, 1, 0.1, shared_table((3.0, 3.5), 3))
    with pytest.raises(ValueError):
        check_proposition(not_case_b, 2)
    with pytest.raises(ValueError):
        check_proposition(case_b, which=3)
    with pytest.raises(ValueError):
        check_proposition(make_case_b(rng, 2, 1, 3, c=-0.5), 2)


# ---------------------------------------------------------------- flags & misc


def test_case_flags():
    a = shared_table((3.0, 2.0), 3)
    # identical rows make it case a; a strictly decreasing shared sequence
    # also satisfies the level-separation flag
    assert a.is_case_a and a.is_case_b
    assert shared_table((3.0, 3.0), 3).is_case_a
    assert not shared_table((3.0, 3.0), 3).is_case_b
    b = GainTable(((4.0, 1.0), (3.5, 0.9)))
    assert b.is_case_b and not b.is_case_a
    mixed = GainTable(((4.0, 1.0), (3.5, 3.6)))
    assert not mixed.is_case_b


def test_spec_validation():
    t = shared_table((1.0, 0.5), 3)
    with pytest.raises(ValueError):
        GameSpec(2, 3, 3, 0.1, t)  # m must stay below target count
    with pytest.raises(ValueError):
        GameSpec(3, 3, 1, 0.1, shared_table((1.0,), 3))  # table too shallow
    with pytest.raises(ValueError):
        GainTable(((1.0, -0.1),))
    with pytest.raises(ValueError):
        utility(GameSpec(2, 3, 1, 0.1, t), profile([1, 1, 0], [0, 0, 0]))


def test_profile_helpers():
    p = profile([2, 0, 0], [1, 1, 0])
    assert p.column_sums() == (3, 1, 0)
    assert p.row_sums() == (2, 2)
    np.testing.assert_array_equal(p.matrix, [[2, 0, 0], [1, 1, 0]])


GOLDEN_GAME_JSON = (
    '{"c": 0.1, "gain_table": {"increments": [[5.0, 1.0], [4.0, 1.0]]}, '
    '"m": 1, "n_radars": 2, "n_targets": 2, "schema_version": 1}'
)


def test_game_json_golden_roundtrip():
    spec = GameSpec(2, 2, 1, 0.1, GainTable(((5.0, 1.0), (4.0, 1.0))))
    assert json.dumps(spec_to_dict(spec), sort_keys=True) == GOLDEN_GAME_JSON
    back = spec_from_dict(json.loads(GOLDEN_GAME_JSON))
    assert back == spec
