from collections import Counter, defaultdict
from fractions import Fraction

import pytest

from coindice import (
    ProbabilityVector,
    RecyclerState,
    ReplaySource,
    SourceExhausted,
    enumerate_discrete,
    enumerate_uniform,
    roll,
    sample,
    state_tree_discrete,
    state_tree_uniform,
)
from conftest import level_multisets

# Per-flip state multisets of the five-sided roller, derived by hand from
# the doubling/accept/recycle rules and frozen here.
FIVE_SIDED_LEVELS = {
    0: {(1, 1): 1},
    1: {(1, 2): 1, (2, 2): 1},
    2: {(1, 4): 1, (3, 4): 1, (2, 4): 1, (4, 4): 1},
    3: {
        (1, 5): 1,
        (5, 5): 1,
        (3, 5): 1,
        (2, 3): 1,
        (2, 5): 1,
        (1, 3): 1,
        (4, 5): 1,
        (3, 3): 1,
    },
    4: {(2, 5): 1, (5, 5): 1, (1, 5): 1, (4, 5): 1, (3, 5): 1, (1, 1): 1},
}


def test_five_sided_state_tree_spot_paths():
    states = state_tree_uniform(5, 4)
    assert states[""] == RecyclerState(1, 1)
    assert states["0"] == RecyclerState(1, 2)
    assert states["11"] == RecyclerState(4, 4)
    assert states["111"] == RecyclerState(3, 3)  # (8, 8) recycled
    assert states["110"] == RecyclerState(4, 5)  # (4, 8) accepted


def test_five_sided_level_multisets_match_known_layout():
    grouped = level_multisets(state_tree_uniform(5, 4))
    for level, expected in FIVE_SIDED_LEVELS.items():
        assert grouped[level] == Counter(expected), level


def test_five_sided_restart_levels_repeat_the_top():
    grouped = level_multisets(state_tree_uniform(5, 6))
    assert grouped[5] == grouped[1]
    assert grouped[6] == grouped[2]


def test_five_sided_pre_resolution_states():
    # the doubled states before accept/recycle fire: all of {1..8} x {8}
    # after flip three, then the six-sided row after flip four
    states = state_tree_uniform(5, 4)
    doubled_three = Counter()
    doubled_four = Counter()
    for history, state in states.items():
        if len(history) in (3, 4):
            parent = states[history[:-1]]
            bit = int(history[-1])
            pre = (parent.x + bit * parent.m, 2 * parent.m)
            (doubled_three if len(history) == 3 else doubled_four)[pre] += 1
    assert doubled_three == Counter({(i, 8): 1 for i in range(1, 9)})
    assert doubled_four == Counter(
        {(2, 6): 1, (5, 6): 1, (1, 6): 1, (4, 6): 1, (3, 6): 1, (6, 6): 1}
    )


def test_one_sided_die_is_an_immediate_leaf():
    states = state_tree_uniform(1, 3)
    assert states == {"": RecyclerState(1, 1)}
    result = enumerate_uniform(1, 3)
    assert result.outcome_mass == {1: Fraction(1)}
    assert result.flip_mass == {0: Fraction(1)}


def test_two_sided_die_depth_one():
    result = enumerate_uniform(2, 1)
    assert result.outcome_mass == {1: Fraction(1, 2), 2: Fraction(1, 2)}
    assert result.live_mass == 0


def test_five_sided_depth_four_leaves_and_live_mass():
    result = enumerate_uniform(5, 4)
    assert result.leaf_histories["000"] == 1
    assert result.leaf_histories["001"] == 5
    by_level = Counter(len(h) for h in result.leaf_histories)
    assert by_level == {3: 5, 4: 5}
    assert result.live_mass == Fraction(1, 16)


def test_five_sided_depth_eight_masses_equal():
    result = enumerate_uniform(5, 8)
    assert result.live_mass == Fraction(1, 256)
    assert set(result.outcome_mass.values()) == {Fraction(51, 256)}


@pytest.mark.parametrize("n", range(1, 11))
def test_uniformity_small_dice(n):
    result = enumerate_uniform(n, 16)
    assert len(result.outcome_mass) == n
    assert len(set(result.outcome_mass.values())) == 1
    assert result.terminated_mass() + result.live_mass == 1


@pytest.mark.parametrize("n", [2, 3, 5, 7])
def test_conditional_uniformity_within_every_m_group(n):
    # at each depth, states sharing m must spread their path mass equally
    # over all x in {1..m}
    depth = 12
    states = state_tree_uniform(n, depth)
    for level in range(depth + 1):
        groups: dict[int, dict[int, Fraction]] = defaultdict(dict)
        for history, state in states.items():
            if len(history) == level:
                mass = Fraction(1, 1 << level)
                group = groups[state.m]
                group[state.x] = group.get(state.x, Fraction(0)) + mass
        for m, masses in groups.items():
            assert set(masses) == set(range(1, m + 1)), (n, level, m)
            assert len(set(masses.values())) == 1, (n, level, m)


@pytest.mark.parametrize("n", [3, 5, 6, 7])
def test_live_mass_decays_geometrically(n):
    # each window long enough to double any state past n gives at least
    # one acceptance chance of probability >= 1/(2n)
    window = (2 * n - 1).bit_length()
    base = enumerate_uniform(n, 8).live_mass
    for k in (1, 2):
        deeper = enumerate_uniform(n, 8 + k * window).live_mass
        assert deeper <= base * Fraction(2 * n - 1, 2 * n) ** k


@pytest.mark.parametrize("n", [2, 3, 4, 5, 6, 7, 8])
def test_oracle_agrees_with_replayed_rolls(n):
    # every oracle leaf and live path reproduces exactly under roll()
    depth = 10
    result = enumerate_uniform(n, depth)
    for history, outcome in result.leaf_histories.items():
        bits = [int(b) for b in history]
        replay = ReplaySource(bits)
        traced = roll(n, replay)
        assert traced.outcome == outcome
        assert traced.flips == len(bits) == replay.flips_consumed


def test_discrete_state_tree_matches_uniform_structure():
    # a uniform dyadic distribution drives the same acceptance layout as
    # the plain four-sided roller
    p = ProbabilityVector(["1/4"] * 4)
    states = state_tree_discrete(p, 2)
    result = enumerate_discrete(p, 2)
    assert result.outcome_mass == {i: Fraction(1, 4) for i in (1, 2, 3, 4)}
    assert result.flip_mass == {2: Fraction(1)}
    assert states["01"] == RecyclerState(3, 4)  # x = 1 + 0*1, then + 1*2


@pytest.mark.parametrize(
    "probs", [["3/8", "1/2", "1/8"], ["1/3", "2/3"], ["1/5", "2/5", "2/5"]]
)
def test_discrete_conditional_uniformity_within_m_groups(probs):
    # the recycled pair stays conditionally uniform for loaded dice too
    p = ProbabilityVector(probs)
    depth = 10
    states = state_tree_discrete(p, depth)
    for level in range(depth + 1):
        groups: dict[int, dict[int, Fraction]] = defaultdict(dict)
        for history, state in states.items():
            if len(history) == level:
                group = groups[state.m]
                group[state.x] = group.get(state.x, Fraction(0)) + Fraction(
                    1, 1 << level
                )
        for m, masses in groups.items():
            assert set(masses) == set(range(1, m + 1)), (probs, level, m)
            assert len(set(masses.values())) == 1, (probs, level, m)


def test_discrete_oracle_agrees_with_replayed_samples():
    p = ProbabilityVector(["3/8", "1/2", "1/8"])
    result = enumerate_discrete(p, 3)
    for history, outcome in result.leaf_histories.items():
        bits = [int(b) for b in history]
        traced = sample(p, ReplaySource(bits))
        assert traced.outcome == outcome
        assert traced.flips == len(bits)
    # live prefixes really are still running
    deeper = enumerate_discrete(ProbabilityVector(["1/3", "2/3"]), 5)
    live = [h for h in state_tree_discrete(ProbabilityVector(["1/3", "2/3"]), 5) if len(h) == 5 and h not in deeper.leaf_histories]
    for history in live:
        with pytest.raises(SourceExhausted):
            sample(ProbabilityVector(["1/3", "2/3"]), ReplaySource([int(b) for b in history]))
