"""Decay-rate fitting and finite-scale verification of the asymptotic
eigenvalue/singular-value statements.

Little-o claims cannot be falsified at finite scale; the honest desk-scale
proxy used here is slope dominance: the least-squares slope of the spectrum
tail on log-log axes must not exceed the claimed exponent, with a documented
slack of 0.05.  Counting inequalities are scanned in exact integer
arithmetic.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction

import numpy as np

from .geometry import (
    GeometryParams,
    SpaceKind,
    cumulative_dim,
    dimension_sequence,
)
from .linalg import SymmetricMatrix, symmetric_eigen
from .operators import (
    Spectrum,
    degrees_for_count,
    make_kernel,
    sobolev_exponent_threshold,
    zonal_spectrum,
)

THEOREMS = ("2.1", "2.2", "2.3")

DEFAULT_TAIL_FRACTION = 0.5
DEFAULT_SLACK = 0.05
_HEAD_EXCLUDED = 0.10  # leading fraction always dropped from fits
_WEYL_TOL = 1e-8
_GENERAL_ORDER_LIMIT = 8


class NonPositiveValuesInWindow(ValueError):
    """Raised when the fit window contains entries <= 0."""


class WindowTooSmall(ValueError):
    """Raised when fewer than 16 entries land in the fit window."""


class HypothesisViolation(ValueError):
    """Raised when requested parameters violate a theorem hypothesis."""


class SequenceTooShort(ValueError):
    """Raised when a diagnostic needs a longer sequence."""


class OrderTooLargeForGeneralCase(ValueError):
    """Raised for nonsymmetric matrices beyond the small-order limit."""


@dataclass(frozen=True)
class DecayReport:
    fitted_slope: float
    intercept: float
    residual_rms: float
    theoretical_exponent: float
    margin: float  # theoretical_exponent - fitted_slope (slopes are negative)
    verdict: bool
    metadata: dict = field(default_factory=dict)


@dataclass(frozen=True)
class LemmaReport:
    lemma_id: str
    inequality: str
    n_range: tuple[int, int]
    minimal_delta: int | None
    violations: tuple[int, ...]

    @property
    def verdict(self) -> bool:
        return self.minimal_delta is not None and not self.violations


@dataclass(frozen=True)
class RateDiagnostic:
    samples: tuple[tuple[int, float], ...]
    verdict: bool


def _tail_values(S) -> np.ndarray:
    return S.values if isinstance(S, Spectrum) else np.asarray(S, dtype=float)


def fit_decay(S, tail_fraction: float = DEFAULT_TAIL_FRACTION):
    """Least-squares line through (log k, log s_k) over the tail window.

    The window is the last ceil(tail_fraction * len) entries; the leading 10%
    of entries is always excluded to suppress low-degree transients.
    Returns (slope, intercept, residual_rms).
    """
    if not 0 < tail_fraction <= 1:
        raise ValueError("tail_fraction must lie in (0, 1]")
    vals = _tail_values(S)
    L = len(vals)
    start = max(L - math.ceil(tail_fraction * L), math.ceil(_HEAD_EXCLUDED * L))
    window = vals[start:]
    if len(window) < 16:
        raise WindowTooSmall(
            f"fit window has {len(window)} entries, at least 16 required"
        )
    if np.any(window <= 0):
        raise NonPositiveValuesInWindow(
            "fit window contains non-positive entries; fit |values| or trim"
        )
    x = np.log(np.arange(start + 1, L + 1, dtype=float))
    y = np.log(window)
    design = np.column_stack([x, np.ones_like(x)])
    coef, *_ = np.linalg.lstsq(design, y, rcond=None)
    slope, intercept = float(coef[0]), float(coef[1])
    residual_rms = float(np.sqrt(np.mean((design @ coef - y) ** 2)))
    return slope, intercept, residual_rms


def theorem_exponent(theorem: str, m: int, r: int, p: float | None) -> float:
    if theorem == "2.1":
        return -1.0 - (2 * r + 1 - p) / m
    if theorem == "2.2":
        return -0.5 - 2.0 * r / m
    if theorem == "2.3":
        return -1.0 / p - 2.0 * r / m
    raise ValueError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")


def _check_hypotheses(theorem, params, r, p, gamma):
    m = params.m
    if r < 1 or r != int(r):
        raise HypothesisViolation(f"r must be a positive integer, got {r}")
    if theorem == "2.1":
        if r < (m + 1) / 2:
            raise HypothesisViolation(
                f"theorem 2.1 needs r >= (m+1)/2 = {(m + 1) / 2}, got r={r}"
            )
        if p is None or not (m + 1 < p <= 2 * r + 1):
            raise HypothesisViolation(
                f"theorem 2.1 needs p in (m+1, 2r+1] = ({m + 1}, {2 * r + 1}], got p={p}"
            )
        if gamma < 2 * r:
            raise HypothesisViolation(
                f"boundedness of the derivative operator needs gamma >= 2r = {2 * r}, "
                f"got gamma={gamma}"
            )
    elif theorem == "2.2":
        threshold = sobolev_exponent_threshold(params, r)
        if gamma <= threshold:
            raise HypothesisViolation(
                f"square-integrable derivative kernel needs gamma > 2r + m/2 = "
                f"{threshold}, got gamma={gamma}"
            )
    elif theorem == "2.3":
        if p is None or p <= 0:
            raise HypothesisViolation(f"theorem 2.3 needs p > 0, got p={p}")
        threshold = 2 * r + m / p
        if gamma <= threshold:
            raise HypothesisViolation(
                f"Schatten-p derivative operator needs gamma > 2r + m/p = "
                f"{threshold}, got gamma={gamma}"
            )
    else:
        raise ValueError(f"unknown theorem {theorem!r}; choose from {THEOREMS}")


def verify_theorem(
    theorem: str,
    params: GeometryParams,
    r: int,
    gamma: float,
    count: int,
    p: float | None = None,
    tail_fraction: float = DEFAULT_TAIL_FRACTION,
    slack: float = DEFAULT_SLACK,
) -> DecayReport:
    """Slope-dominance check of one decay theorem on the algebraic family
    a_n = (n+1)^{-gamma}.

    Hypotheses are validated first (gamma strictly above the membership
    threshold implied by the theorem); the spectrum is built to `count`
    entries, its tail fitted, and the fitted slope compared with the
    theorem exponent.  The constructed kernel itself decays with the sharper
    exponent -gamma/m, which the report records alongside.
    """
    if count < 32:
        raise ValueError("count too small for a meaningful fit")
    _check_hypotheses(theorem, params, r, p, gamma)
    exponent = theorem_exponent(theorem, params.m, r, p)
    n_max = degrees_for_count(params, count)
    kernel = make_kernel(params, "algebraic", n_max, gamma=gamma)
    spectrum = zonal_spectrum(kernel, count)
    slope, intercept, residual_rms = fit_decay(np.abs(spectrum.values), tail_fraction)
    verdict = slope <= exponent + slack
    return DecayReport(
        fitted_slope=slope,
        intercept=intercept,
        residual_rms=residual_rms,
        theoretical_exponent=exponent,
        margin=exponent - slope,
        verdict=verdict,
        metadata={
            "theorem": theorem,
            "space": params.kind.value,
            "m": params.m,
            "r": r,
            "p": p,
            "family": "algebraic",
            "gamma": gamma,
            "count": count,
            "tail_fraction": tail_fraction,
            "slack": slack,
            "constructed_exponent": -gamma / params.m,
        },
    )


def _scan_inequality(lhs, rhs, n_start: int, n_max: int):
    """Minimal delta with lhs(n) <= rhs(n) for all n in [delta, n_max], plus
    a re-verification list of violations at or above delta (always empty)."""
    last_violation = None
    for n in range(n_start, n_max + 1):
        if lhs(n) > rhs(n):
            last_violation = n
    if last_violation is not None and last_violation == n_max:
        return None, ()
    delta = n_start if last_violation is None else last_violation + 1
    violations = tuple(n for n in range(delta, n_max + 1) if lhs(n) > rhs(n))
    return delta, violations


def check_counting_lemmas(params: GeometryParams, n_max: int) -> list[LemmaReport]:
    """Exact-integer scans of the counting inequalities applicable to the
    space, each reporting the minimal threshold delta.

    Three inequalities are checked, labelled counting lemmas A, B and C,
    with the inequality spelled out in each report: the cumulative-dimension
    bound (A, all kinds but real projective), the real projective variant
    (B), and the mean-value bound (C, every kind).
    """
    if n_max < 10:
        raise ValueError("n_max must be at least 10")
    m = params.m
    reports = []
    if params.kind is SpaceKind.REAL_PROJECTIVE:
        taus = {}

        def tau2n(n):
            if n not in taus:
                taus[n] = cumulative_dim(params, 2 * n)
            return taus[n]

        delta, violations = _scan_inequality(
            lambda n: 2 * tau2n(n) + 1, lambda n: (3 * n) ** m, 1, n_max
        )
        reports.append(
            LemmaReport(
                lemma_id="counting-B",
                inequality="2*tau_{2n} + 1 <= (3n)^m",
                n_range=(1, n_max),
                minimal_delta=delta,
                violations=violations,
            )
        )
    else:
        cumulative = list(dimension_sequence(params, n_max).cumulative())
        delta, violations = _scan_inequality(
            lambda n: cumulative[n], lambda n: 2 * n**m, 1, n_max
        )
        reports.append(
            LemmaReport(
                lemma_id="counting-A",
                inequality="tau_n <= 2*n^m",
                n_range=(1, n_max),
                minimal_delta=delta,
                violations=violations,
            )
        )
    delta, violations = _scan_inequality(
        lambda n: (n + 1) ** m - (n**m + 1) + 1,
        lambda n: m * 2 ** (m - 1) * n ** (m - 1),
        1,
        n_max,
    )
    reports.append(
        LemmaReport(
            lemma_id="counting-C",
            inequality="(n+1)^m - (n^m + 1) + 1 <= m*2^{m-1}*n^{m-1}",
            n_range=(1, n_max),
            minimal_delta=delta,
            violations=violations,
        )
    )
    return reports


def _charpoly_exact(arr: np.ndarray) -> list[Fraction]:
    """Characteristic polynomial coefficients [1, c1, ..., cN] by the
    Faddeev-LeVerrier recurrence in exact rational arithmetic (floats are
    exact rationals, so small integer test matrices deflate exactly)."""
    n = arr.shape[0]
    A = [[Fraction(float(x)) for x in row] for row in arr]
    M = [[Fraction(1) if i == j else Fraction(0) for j in range(n)] for i in range(n)]
    coeffs = [Fraction(1)]
    for k in range(1, n + 1):
        AM = [
            [sum(A[i][l] * M[l][j] for l in range(n)) for j in range(n)]
            for i in range(n)
        ]
        c = -sum(AM[i][i] for i in range(n)) / k
        coeffs.append(c)
        M = [
            [AM[i][j] + (c if i == j else 0) for j in range(n)] for i in range(n)
        ]
    return coeffs


def _roots_durand_kerner(coeffs: list[float]) -> list[complex]:
    """All complex roots of a monic polynomial (degree <= 8) by
    Durand-Kerner simultaneous iteration."""
    degree = len(coeffs) - 1
    if degree == 0:
        return []
    scale = 1.0 + max(abs(c) for c in coeffs[1:])
    roots = [(0.4 + 0.9j) ** k * scale for k in range(1, degree + 1)]

    def poly(z):
        val = 0j
        for c in coeffs:
            val = val * z + c
        return val

    for _ in range(500):
        shift = 0.0
        new = list(roots)
        for i, z in enumerate(roots):
            denom = 1.0 + 0j
            for j, w in enumerate(roots):
                if j != i:
                    denom *= z - w
            if denom == 0:
                denom = 1e-30
            delta = poly(z) / denom
            new[i] = z - delta
            shift = max(shift, abs(delta))
        roots = new
        if shift < 1e-14 * scale:
            break
    return roots


def _eigen_moduli_general(arr: np.ndarray) -> np.ndarray:
    coeffs = _charpoly_exact(arr)
    # exactly-zero trailing coefficients factor out exact zero eigenvalues
    zeros = 0
    while len(coeffs) > 1 and coeffs[-1] == 0:
        coeffs.pop()
        zeros += 1
    roots = _roots_durand_kerner([float(c) for c in coeffs])
    moduli = sorted((abs(z) for z in roots), reverse=True) + [0.0] * zeros
    return np.array(moduli)


def _singular_values(arr: np.ndarray) -> np.ndarray:
    """Singular values through the symmetric embedding [[0, A], [A^T, 0]],
    whose eigenvalues are +-s_j; avoids the precision loss of squaring
    through the Gram matrix near small singular values."""
    n = arr.shape[0]
    embed = np.zeros((2 * n, 2 * n))
    embed[:n, n:] = arr
    embed[n:, :n] = arr.T
    return np.clip(symmetric_eigen(SymmetricMatrix(embed))[:n], 0.0, None)


def weyl_check(A, k_max: int) -> bool:
    """Partial-product inequality prod |lambda_j| <= prod s_j for k <= k_max,
    within multiplicative tolerance 1 + 1e-8.

    Symmetric matrices of any supported order are handled by the symmetric
    eigensolver; general square matrices must have order <= 8 (eigenvalue
    moduli via exact characteristic polynomial and simultaneous root
    iteration).  Singular values come from an independent symmetric
    eigenproblem, so equality in the symmetric case is a genuine dual-route
    check.
    """
    arr = A.data if isinstance(A, SymmetricMatrix) else np.asarray(A, dtype=float)
    if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
        raise ValueError("weyl_check needs a square matrix")
    n = arr.shape[0]
    if not 1 <= k_max <= n:
        raise ValueError(f"k_max must lie in [1, {n}], got {k_max}")
    symmetric = isinstance(A, SymmetricMatrix) or bool(np.array_equal(arr, arr.T))
    if symmetric:
        moduli = np.sort(np.abs(symmetric_eigen(SymmetricMatrix(arr))))[::-1]
    else:
        if n > _GENERAL_ORDER_LIMIT:
            raise OrderTooLargeForGeneralCase(
                f"general matrices supported up to order {_GENERAL_ORDER_LIMIT}, got {n}"
            )
        moduli = _eigen_moduli_general(arr)
    singular = _singular_values(arr)
    lhs = rhs = 1.0
    for k in range(k_max):
        lhs *= moduli[k]
        rhs *= singular[k]
        if lhs > rhs * (1.0 + _WEYL_TOL):
            return False
    return True


def weyl_partial_products(A: SymmetricMatrix, k_max: int):
    """Both sides of the Weyl inequality for a symmetric matrix, with the
    singular values computed through an independent eigenproblem."""
    moduli = np.sort(np.abs(symmetric_eigen(A)))[::-1][:k_max]
    singular = _singular_values(A.data)[:k_max]
    return np.cumprod(moduli), np.cumprod(singular)


def rate_diagnostic(s, a: float, b: float) -> RateDiagnostic:
    """Finite-sample trend check of the series-to-rate implication: if
    sum n^a s_n^b converges then N^{(a+1)/b} s_N should decay.

    Samples the trend at N in {L/8, L/4, L/2, L}; passes iff the samples
    strictly decrease and the last is below half the first.  A diagnostic of
    an asymptotic statement, not a proof.
    """
    if a < 0 or b <= 0:
        raise ValueError("need a >= 0 and b > 0")
    vals = _tail_values(s)
    L = len(vals)
    if L < 1000:
        raise SequenceTooShort(f"need at least 1000 entries, got {L}")
    picks = [math.ceil(L / 8), math.ceil(L / 4), math.ceil(L / 2), L]
    samples = tuple(
        (N, float(N ** ((a + 1.0) / b) * vals[N - 1])) for N in picks
    )
    trend = [t for _, t in samples]
    decreasing = all(t1 > t2 for t1, t2 in zip(trend, trend[1:]))
    verdict = decreasing and trend[-1] < trend[0] / 2.0
    return RateDiagnostic(samples=samples, verdict=verdict)


def weyl_random_sweep(n_matrices: int, max_order: int, seed: int):
    """Seeded sweep of random symmetric matrices through weyl_check,
    returning (all_ok, worst relative deviation from product equality)."""
    rng = np.random.default_rng(seed)
    worst = 0.0
    all_ok = True
    for _ in range(n_matrices):
        n = int(rng.integers(2, max_order + 1))
        raw = rng.uniform(-1.0, 1.0, size=(n, n))
        A = SymmetricMatrix((raw + raw.T) / 2.0)
        all_ok &= weyl_check(A, n)
        lhs, rhs = weyl_partial_products(A, n)
        worst = max(worst, float(np.max(np.abs(lhs / rhs - 1.0))))
    return all_ok, worst
