"""Chi-square goodness-of-fit test with a self-contained p-value.

The p-value of a chi-square statistic with d degrees of freedom is the
regularized upper incomplete gamma function Q(d/2, x/2), evaluated here
with the classic series / continued-fraction pair (Numerical Recipes
6.2 style), good to ~1e-10 in double precision.
"""

import math
from dataclasses import dataclass

_EPS = 1e-14
_MAX_ITER = 500


def _gamma_p_series(a: float, x: float) -> float:
    # P(a, x) by its power series; converges fast for x < a + 1
    term = 1.0 / a
    total = term
    denom = a
    for _ in range(_MAX_ITER):
        denom += 1.0
        term *= x / denom
        total += term
        if abs(term) < abs(total) * _EPS:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))

def _gamma_q_contfrac(a: float, x: float) -> float:
    # Q(a, x) by a modified Lentz continued fraction; for x >= a + 1
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, _MAX_ITER + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _EPS:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))

def regularized_gamma_q(a: float, x: float) -> float:
    """Q(a, x) = Gamma(a, x) / Gamma(a), the upper regularized gamma."""
    if a <= 0:
        raise ValueError(f"shape parameter must be positive, got {a}")
    if x < 0:
        raise ValueError(f"argument must be non-negative, got {x}")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gamma_p_series(a, x)
    return _gamma_q_contfrac(a, x)


def chi_square_pvalue(statistic: float, df: int) -> float:
    """P(chi-square with df degrees of freedom > statistic)."""
    if df < 0:
        raise ValueError(f"degrees of freedom must be >= 0, got {df}")
    if df == 0:
        return 1.0
    return regularized_gamma_q(df / 2.0, statistic / 2.0)


@dataclass
class ChiSquareResult:
    statistic: float
    df: int
    p_value: float
    significance: float

    @property
    def passed(self) -> bool:
        return self.p_value > self.significance


def chi_square_test(counts, expected_probs, significance: float = 0.001) -> ChiSquareResult:
    """Test observed category counts against exact expected probabilities.

    ``counts[i]`` is the observed tally for category i; expected counts
    are total * expected_probs[i].  Categories with zero expected mass
    must have zero observations (and contribute no degrees of freedom).
    """
    if len(counts) != len(expected_probs):
        raise ValueError("counts and expected_probs must have equal length")
    total = sum(counts)
    statistic = 0.0
    df = -1
    for observed, prob in zip(counts, expected_probs):
        expected = total * float(prob)
        if expected == 0.0:
            if observed:
                raise ValueError(f"observed {observed} events in a zero-probability category")
            continue
        df += 1
        statistic += (observed - expected) ** 2 / expected
    df = max(df, 0)
    return ChiSquareResult(statistic, df, chi_square_pvalue(statistic, df), significance)
