"""Exact rational analysis of the die roller's entropy cost.

Everything here is closed-form.  The expected flip count for an n-sided
die satisfies a one-unknown linear recurrence: from a recycled s-sided
die it takes k(s) = ceil(log2(n/s)) flips to double up to s' = s*2^k in
[n, 2n-1], acceptance happens with probability n/s', and rejection
recycles to an (s'-n)-sided die.  Since each s has exactly one successor
the recurrence forms a rho-shaped chain that is solved by composing
affine maps along it, all in exact integer arithmetic.

The independent cross-check sums j * P(N = j) directly from the binary
expansion of 1/n, closing the eventually-periodic tail with a geometric
series, again exactly.
"""

import math
from dataclasses import dataclass
from fractions import Fraction

from .discrete import ProbabilityVector, expansion_bit
from .uniform import _check_sides


class BoundViolation(Exception):
    """The expected flip count escaped its proven bracket: a genuine bug."""


@dataclass
class FlipDistribution:
    """Exact distribution of N, the number of flips a sampler consumes.

    ``mass[j]`` is P(N = j); ``residual`` is the probability mass of runs
    still going at the materialisation depth.  Masses plus residual always
    sum to exactly 1.
    """

    mass: dict[int, Fraction]
    residual: Fraction = Fraction(0)

    def __post_init__(self) -> None:
        if any(q < 0 for q in self.mass.values()) or self.residual < 0:
            raise ValueError("negative probability mass")
        total = sum(self.mass.values(), Fraction(0)) + self.residual
        if total != 1:
            raise ValueError(f"masses sum to {total}, expected exactly 1")

    def tail(self, i: int) -> Fraction:
        """P(N > i)."""
        return 1 - sum((q for j, q in self.mass.items() if j <= i), Fraction(0))

    def max_level(self) -> int:
        return max(self.mass, default=0)

    def expectation(self) -> Fraction:
        """Exact E[N]; requires the distribution to be fully materialised."""
        if self.residual != 0:
            raise ValueError(
                f"distribution truncated with residual {self.residual}; "
                "use partial_expectation()"
            )
        return sum((Fraction(j) * q for j, q in self.mass.items()), Fraction(0))

    def partial_expectation(self) -> Fraction:
        """Sum of j * P(N = j) over the materialised levels only."""
        return sum((Fraction(j) * q for j, q in self.mass.items()), Fraction(0))


@dataclass
class RecurrenceSolution:
    """Expected flips plus per-die-size expected visit counts."""

    expected_flips: Fraction
    visit_states: dict[int, Fraction]


def ceil_log2(n: int) -> int:
    """Smallest k with 2^k >= n."""
    return (n - 1).bit_length()


def _chain(n: int):
    """Follow s -> s*2^k - n from s=1 until absorption or a repeat.

    Yields (s, k, s_doubled) steps; the walk ends either because
    acceptance is certain (s_doubled == n) or because a state repeated,
    closing the cycle.
    """
    steps = []
    seen = {}
    s = 1
    while s not in seen:
        seen[s] = len(steps)
        k = ceil_log2((n + s - 1) // s)
        s2 = s << k
        steps.append((s, k, s2))
        s = s2 - n
        if s == 0:
            return steps, None
    return steps, seen[s]


def exact_expected_flips(n: int) -> Fraction:
    """Exact expected number of coin flips to roll a fair n-sided die.

    Composes E(1) = C + D * E(s) along the recycle chain, keeping C and D
    as unreduced integer pairs over a common denominator; a repeated
    state gives one linear equation in one unknown.
    """
    _check_sides(n)
    if n == 1:
        return Fraction(0)
    steps, cycle_start = _chain(n)
    c_num, d_num, den = 0, 1, 1
    snapshots = []
    for s, k, s2 in steps:
        snapshots.append((c_num, d_num, den))
        c_num = (c_num + d_num * k) * s2
        d_num = d_num * (s2 - n)
        den *= s2
    if cycle_start is None:
        # a doubling landed exactly on n: acceptance was certain, D = 0
        return Fraction(c_num, den)
    c1, d1, den1 = snapshots[cycle_start]
    scale = den // den1
    # E(1) = c1/den1 + (d1/den1) E(s*) and E(1) = c_num/den + (d_num/den) E(s*)
    e_rev = Fraction(c_num - c1 * scale, d1 * scale - d_num)
    return Fraction(c1, den1) + Fraction(d1, den1) * e_rev


def solve_recurrence(n: int) -> RecurrenceSolution:
    """Expected flips plus expected visits to each recycled die size."""
    _check_sides(n)
    expected = exact_expected_flips(n)
    visits: dict[int, Fraction] = {}
    if n == 1:
        return RecurrenceSolution(expected, visits)
    steps, cycle_start = _chain(n)
    reach = Fraction(1)
    reaches = []
    for s, k, s2 in steps:
        reaches.append(reach)
        reach *= Fraction(s2 - n, s2)
    if cycle_start is None:
        for (s, _, _), r in zip(steps, reaches):
            visits[s] = r
    else:
        # cycle weight: product of continuation probabilities once around
        cycle_weight = reach / reaches[cycle_start]
        boost = 1 / (1 - cycle_weight)
        for idx, ((s, _, _), r) in enumerate(zip(steps, reaches)):
            visits[s] = r * boost if idx >= cycle_start else r
    # internal consistency: total flips spent at each size reproduce E
    assert sum((visits[s] * k for s, k, _ in steps), Fraction(0)) == expected
    return RecurrenceSolution(expected, visits)


def flip_distribution_uniform(n: int, depth: int) -> FlipDistribution:
    """Flip-count distribution of the optimal n-sided die roller.

    P(N = j) = n * bit_j(1/n) * 2^-j; mass beyond ``depth`` is reported
    as the residual.
    """
    _check_sides(n)
    if depth < 0:
        raise ValueError(f"depth must be >= 0, got {depth}")
    q = Fraction(1, n)
    mass: dict[int, Fraction] = {}
    for j in range(depth + 1):
        if expansion_bit(q, j):
            mass[j] = Fraction(n, 1 << j)
    residual = 1 - sum(mass.values(), Fraction(0))
    return FlipDistribution(mass, residual)


def _multiplicative_order_of_two(q: int) -> int:
    order = 1
    value = 2 % q
    while value != 1:
        value = (2 * value) % q
        order += 1
    return order


def series_expected_flips(n: int) -> Fraction:
    """E[N] summed directly from the bits of 1/n, closed in exact form.

    The expansion of 1/n has v2(n) leading zeros followed by a periodic
    block whose length is the multiplicative order of 2 modulo the odd
    part of n; the infinite tail collapses with geometric series sums.
    Agrees with exact_expected_flips by construction of both.
    """
    _check_sides(n)
    if n == 1:
        return Fraction(0)
    a = (n & -n).bit_length() - 1  # v2(n)
    q = n >> a
    if q == 1:
        return Fraction(a)  # n = 2^a: exactly a flips, always
    period = _multiplicative_order_of_two(q)
    # periodic digits c_1..c_period of 1/n starting after the a zeros
    digits = []
    r = (1 << a) % n
    for _ in range(period):
        r *= 2
        digits.append(r // n)
        r %= n
    pow_period = 1 << period
    repeat = Fraction(pow_period, pow_period - 1)  # sum of x^t, x = 2^-period
    drift = Fraction(pow_period, (pow_period - 1) ** 2)  # sum of t * x^t
    weighted = Fraction(0)  # sum over block of (a+u) c_u 2^-(a+u)
    plain = Fraction(0)  # sum over block of c_u 2^-(a+u)
    for u, c in enumerate(digits, start=1):
        if c:
            term = Fraction(1, 1 << (a + u))
            weighted += (a + u) * term
            plain += term
    return n * (weighted * repeat + period * drift * plain)


@dataclass
class BoundsRow:
    n: int
    expected: Fraction
    lower: int
    upper: int


@dataclass
class BoundsReport:
    """Sweep of the proven bracket ceil(log2 n) <= E[N] <= ceil(log2 n) + 1."""

    n_max: int
    rows: list[BoundsRow]
    min_upper_slack: tuple[int, Fraction]
    max_upper_slack: tuple[int, Fraction]


def verify_bounds(n_max: int) -> BoundsReport:
    """Check the expected-flip bracket for every n up to ``n_max``.

    Raises BoundViolation on the first offending n instead of reporting
    it quietly: a violation means a bug, not a data point.
    """
    if n_max < 1:
        raise ValueError(f"n_max must be >= 1, got {n_max}")
    rows = []
    min_slack: tuple[int, Fraction] | None = None
    max_slack: tuple[int, Fraction] | None = None
    for n in range(1, n_max + 1):
        expected = exact_expected_flips(n)
        lower = ceil_log2(n)
        upper = lower + 1
        if expected < lower:
            raise BoundViolation(f"n={n}: E[N]={expected} below lower bound {lower}")
        if expected > upper:
            raise BoundViolation(f"n={n}: E[N]={expected} above upper bound {upper}")
        rows.append(BoundsRow(n, expected, lower, upper))
        slack = upper - expected
        if min_slack is None or slack < min_slack[1]:
            min_slack = (n, slack)
        if max_slack is None or slack > max_slack[1]:
            max_slack = (n, slack)
    assert min_slack is not None and max_slack is not None
    return BoundsReport(n_max, rows, min_slack, max_slack)


def entropy(p: ProbabilityVector) -> float:
    """Shannon entropy in bits, float64 precision.

    Reporting only: never used in exact assertions.
    """
    total = 0.0
    for q in p.probs:
        if q > 0:
            x = float(q)
            total -= x * math.log2(x)
    return total
