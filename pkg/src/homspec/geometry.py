"""Classification data for compact two-point homogeneous spaces.

Each space is identified by its kind and real dimension m, from which the
radial weight exponents alpha = (sigma+rho-1)/2 and beta = (rho-1)/2 follow.
All counting quantities (eigenspace dimensions d_n, cumulative dimensions
tau_n, Laplace-Beltrami eigenvalues) are computed in exact rational
arithmetic so the cross-identities hold as integer equalities.

Note on conventions: the degree-0 Laplace-Beltrami eigenvalue is taken to be
1 rather than the analytic value 0, so that the inverse operator is defined
on constants.  The volume normalization constant is called "vol" throughout
this package to avoid a clash with the exponent named sigma here.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from fractions import Fraction


class SpaceKind(Enum):
    SPHERE = "sphere"
    REAL_PROJECTIVE = "real-projective"
    COMPLEX_PROJECTIVE = "complex-projective"
    QUATERNION_PROJECTIVE = "quaternion-projective"
    CAYLEY = "cayley"


class InadmissibleDimension(ValueError):
    """Raised when m is not in the admissible dimension set of a kind."""


class OddIndexOnRealProjective(ValueError):
    """Raised for cumulative dimensions at odd degree on real projective space."""


@dataclass(frozen=True)
class GeometryParams:
    kind: SpaceKind
    m: int
    sigma: int
    rho: int
    alpha: Fraction
    beta: Fraction

    def __str__(self) -> str:
        return f"{self.kind.value}(m={self.m})"


def _check_admissible(kind: SpaceKind, m: int) -> None:
    if m != int(m) or m < 1:
        raise InadmissibleDimension(f"dimension must be a positive integer, got {m}")
    ok = {
        SpaceKind.SPHERE: m >= 2,
        SpaceKind.REAL_PROJECTIVE: m >= 2,
        SpaceKind.COMPLEX_PROJECTIVE: m >= 4 and m % 2 == 0,
        SpaceKind.QUATERNION_PROJECTIVE: m >= 8 and m % 4 == 0,
        SpaceKind.CAYLEY: m == 16,
    }[kind]
    if not ok:
        raise InadmissibleDimension(f"m={m} is not admissible for {kind.value}")


def space_params(kind: SpaceKind, m: int) -> GeometryParams:
    """Exponent table row (sigma, rho) for the kind, with derived alpha, beta."""
    _check_admissible(kind, m)
    sigma, rho = {
        SpaceKind.SPHERE: (0, m - 1),
        SpaceKind.REAL_PROJECTIVE: (0, m - 1),
        SpaceKind.COMPLEX_PROJECTIVE: (m - 2, 1),
        SpaceKind.QUATERNION_PROJECTIVE: (m - 4, 3),
        SpaceKind.CAYLEY: (8, 7),
    }[kind]
    alpha = Fraction(sigma + rho - 1, 2)
    beta = Fraction(rho - 1, 2)
    return GeometryParams(kind=kind, m=m, sigma=sigma, rho=rho, alpha=alpha, beta=beta)


def _rising(x: Fraction, k: int) -> Fraction:
    """Rising factorial x(x+1)...(x+k-1); equals Gamma(x+k)/Gamma(x)."""
    out = Fraction(1)
    for i in range(k):
        out *= x + i
    return out


def _as_int(q: Fraction, what: str) -> int:
    if q.denominator != 1:
        raise ArithmeticError(f"{what} evaluated to non-integer {q}")
    return q.numerator


def eigenspace_dim(params: GeometryParams, n: int) -> int:
    """Dimension d_n of the degree-n eigenspace.

    Evaluated as an exact rational product of Gamma-function ratios; the
    result is always an integer.  Python integers are unbounded, so no
    overflow is possible at any degree.
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if params.kind is SpaceKind.REAL_PROJECTIVE:
        if n % 2 == 1:
            return 0
        if n == 0:
            return 1
        k = n // 2
        m = params.m
        return math.comb(m + 2 * k, m) - math.comb(m + 2 * k - 2, m)
    a, b = params.alpha, params.beta
    if n == 0:
        return 1
    # (2n+a+b+1) * G(n+a+1)/G(a+1) * G(n+a+b+1)/G(a+b+2) / (G(n+b+1)/G(b+1)) / n!
    val = (2 * n + a + b + 1) * _rising(a + 1, n) * _rising(a + b + 2, n - 1)
    val /= _rising(b + 1, n) * math.factorial(n)
    return _as_int(val, f"d_{n}")


def cumulative_dim(params: GeometryParams, n: int) -> int:
    """Cumulative dimension tau_n = sum of d_k for k <= n.

    Closed Gamma-ratio form for sphere/complex/quaternion/Cayley; a single
    binomial coefficient for real projective space at even n (the index must
    be even there).
    """
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if params.kind is SpaceKind.REAL_PROJECTIVE:
        if n % 2 == 1:
            raise OddIndexOnRealProjective(
                f"tau is defined at even degrees only on {params}, got n={n}"
            )
        return math.comb(params.m + n, params.m)
    a, b = params.alpha, params.beta
    val = _rising(a + b + 2, n) * _rising(a + 2, n)
    val /= _rising(b + 1, n) * math.factorial(n)
    return _as_int(val, f"tau_{n}")


def laplace_eigenvalue(params: GeometryParams, n: int) -> Fraction:
    """Degree-n Laplace-Beltrami eigenvalue n(n+alpha+beta+1), with value 1 at n=0."""
    if n < 0:
        raise ValueError("degree must be nonnegative")
    if n == 0:
        return Fraction(1)
    return n * (n + params.alpha + params.beta + 1)


@dataclass(frozen=True)
class DimensionSequence:
    """Eigenspace dimensions d_0..d_{n_max}, with zeros at odd degrees on
    real projective space (degrees are never reindexed)."""

    params: GeometryParams
    values: tuple[int, ...]

    def cumulative(self) -> tuple[int, ...]:
        out = []
        total = 0
        for d in self.values:
            total += d
            out.append(total)
        return tuple(out)


def dimension_sequence(params: GeometryParams, n_max: int) -> DimensionSequence:
    """All d_n for n <= n_max, computed incrementally in exact arithmetic."""
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    if params.kind is SpaceKind.REAL_PROJECTIVE:
        m = params.m
        vals = [1]
        prev = 1  # binomial(m + 2k, m) at k=0
        for n in range(1, n_max + 1):
            if n % 2 == 1:
                vals.append(0)
            else:
                cur = math.comb(m + n, m)
                vals.append(cur - prev)
                prev = cur
        return DimensionSequence(params=params, values=tuple(vals))
    a, b = params.alpha, params.beta
    vals = [1]
    d = Fraction(1)
    for n in range(1, n_max + 1):
        d *= (2 * n + a + b + 1) * (n + a) * (n + a + b)
        d /= (2 * n + a + b - 1) * n * (n + b)
        vals.append(_as_int(d, f"d_{n}"))
    return DimensionSequence(params=params, values=tuple(vals))
