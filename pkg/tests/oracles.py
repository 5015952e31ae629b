"""Independent oracles shared by the test modules.

These deliberately avoid the code paths they check: exact rational moments
by binomial expansion of the weight, and the cumulative-dimension sequence
through its own ratio recurrence (distinct from the per-degree recurrence
used by the library).
"""

import math
from fractions import Fraction

from homspec.geometry import SpaceKind


def exact_moment(alpha: int, beta: int, k: int) -> Fraction:
    """Exact integral of t^k (1-t)^alpha (1+t)^beta over [-1, 1]
    (integer exponents only)."""
    total = Fraction(0)
    for i in range(alpha + 1):
        for j in range(beta + 1):
            c = (-1) ** i * math.comb(alpha, i) * math.comb(beta, j)
            power = k + i + j
            if power % 2 == 0:
                total += Fraction(2 * c, power + 1)
    return total


def tau_sequence_closed(params, n_max: int) -> list:
    """Cumulative dimensions tau_0..tau_{n_max} from the closed Gamma-ratio
    formula, advanced by its own ratio recurrence.

    For real projective space the closed binomial form is evaluated directly
    at even degrees (None marks the undefined odd positions).
    """
    if params.kind is SpaceKind.REAL_PROJECTIVE:
        out = []
        for n in range(n_max + 1):
            out.append(math.comb(params.m + n, params.m) if n % 2 == 0 else None)
        return out
    a, b = params.alpha, params.beta
    tau = Fraction(1)
    out = [1]
    for n in range(1, n_max + 1):
        tau *= (n + a + b + 1) * (n + a + 1)
        tau /= (n + b) * n
        assert tau.denominator == 1
        out.append(tau.numerator)
    return out
