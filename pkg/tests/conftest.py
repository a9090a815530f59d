import random
from collections import Counter
from fractions import Fraction

import pytest

from coindice import ProbabilityVector


def random_dyadic_distribution(
    rng: random.Random, max_outcomes: int = 6, denom_power: int = 10
) -> ProbabilityVector:
    """Random distribution with denominator 2^denom_power and all
    outcomes strictly positive."""
    denom = 1 << denom_power
    k = rng.randint(2, max_outcomes)
    cuts = sorted(rng.sample(range(1, denom), k - 1))
    parts = [b - a for a, b in zip([0] + cuts, cuts + [denom])]
    return ProbabilityVector([Fraction(part, denom) for part in parts])


def level_multisets(states) -> dict[int, Counter]:
    """Group a state-tree mapping by bit-history length."""
    grouped: dict[int, Counter] = {}
    for history, state in states.items():
        grouped.setdefault(len(history), Counter())[tuple(state)] += 1
    return grouped


@pytest.fixture
def rng():
    return random.Random(0xC01D1CE)
