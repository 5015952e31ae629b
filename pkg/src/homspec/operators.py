"""Zonal kernels in spectral form and the associated operator calculus.

A zonal kernel is stored as its coefficient sequence {a_n} against the
normalized zonal components Z_n(t) = d_n P_n(t)/P_n(1).  With this
convention the integral operator normalized by the space volume has
eigenvalue exactly a_n on the degree-n eigenspace (multiplicity d_n), and
the Hilbert-Schmidt identity reads ||K||_2^2 = sum_n d_n a_n^2.  All volume
constants are absorbed into the coefficients; see README for the
dictionary between profile coefficients and operator eigenvalues.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterator

import numpy as np

from .geometry import (
    GeometryParams,
    SpaceKind,
    dimension_sequence,
    eigenspace_dim,
    laplace_eigenvalue,
)
from .jacobi import (
    CoefficientSequence,
    JacobiParams,
    default_rule_size,
    fourier_jacobi_coeffs,
    gauss_jacobi,
    jacobi_at_one,
    jacobi_batch,
)

COEFFICIENT_FAMILIES = ("algebraic", "geometric", "genfun")


class InsufficientCoefficients(ValueError):
    """Raised when a stored kernel cannot fill the requested spectrum length."""


def jacobi_params_of(params: GeometryParams) -> JacobiParams:
    return JacobiParams(alpha=float(params.alpha), beta=float(params.beta))


@dataclass(frozen=True)
class ZonalKernel:
    params: GeometryParams
    coeffs: CoefficientSequence

    def __post_init__(self):
        dims = dimension_sequence(self.params, self.coeffs.n_max).values
        for n, (d, a) in enumerate(zip(dims, self.coeffs.values)):
            if d == 0 and a != 0.0:
                raise ValueError(
                    f"degree {n} has no eigenspace on {self.params}, "
                    f"coefficient must be zero (got {a})"
                )

    @property
    def n_max(self) -> int:
        return self.coeffs.n_max


@dataclass(frozen=True)
class Spectrum:
    """Finite spectrum with block metadata.

    Ordered nonincreasingly in |value| (the ordering used for compact
    operators; literal nonincreasing order when all values are >= 0).
    ``degrees[i]`` is the eigenspace degree of entry i and ``within[i]`` its
    0-based index inside that degree block.
    """

    values: np.ndarray
    degrees: np.ndarray
    within: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        d = np.asarray(self.degrees, dtype=int)
        w = np.asarray(self.within, dtype=int)
        if not (len(v) == len(d) == len(w)):
            raise ValueError("spectrum arrays must have equal length")
        for arr in (v, d, w):
            arr.setflags(write=False)
        object.__setattr__(self, "values", v)
        object.__setattr__(self, "degrees", d)
        object.__setattr__(self, "within", w)

    def __len__(self) -> int:
        return len(self.values)

    def __iter__(self) -> Iterator[tuple[float, int, int]]:
        return (
            (float(v), int(d), int(w))
            for v, d, w in zip(self.values, self.degrees, self.within)
        )


def _expand_blocks(values_by_degree, dims) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Multiplicity expansion: degree n contributes d_n copies of its value."""
    degs = [n for n, d in enumerate(dims) if d > 0]
    counts = [dims[n] for n in degs]
    vals = np.repeat([values_by_degree[n] for n in degs], counts)
    degrees = np.repeat(degs, counts)
    within = np.concatenate([np.arange(c) for c in counts]) if counts else np.empty(0, int)
    return vals, degrees, within


def _magnitude_order(vals, degrees, within) -> np.ndarray:
    # primary |v| descending, ties by ascending degree then within-block index
    return np.lexsort((within, degrees, -np.abs(vals)))


def zonal_spectrum(K: ZonalKernel, count: int, pad: bool = False) -> Spectrum:
    """First `count` spectrum entries of K: each coefficient a_n repeated d_n
    times, sorted by |value| (ties broken by lower degree first).

    The stored coefficient range must cover `count` entries unless `pad` is
    set, in which case degrees beyond the stored range contribute zeros.
    """
    if count < 1:
        raise ValueError("count must be positive")
    n_max = K.n_max
    dims = list(dimension_sequence(K.params, n_max).values)
    total = sum(dims)
    values_by_degree = dict(enumerate(K.coeffs.values))
    if total < count:
        if not pad:
            raise InsufficientCoefficients(
                f"stored coefficients cover {total} entries, requested {count}"
            )
        n = n_max
        while total < count:
            n += 1
            d = eigenspace_dim(K.params, n)
            dims.append(d)
            values_by_degree[n] = 0.0
            total += d
    vals, degrees, within = _expand_blocks(values_by_degree, dims)
    order = _magnitude_order(vals, degrees, within)[:count]
    return Spectrum(values=vals[order], degrees=degrees[order], within=within[order])


def apply_lb(K: ZonalKernel, r: int) -> ZonalKernel:
    """r-fold Laplace-Beltrami derivative: a_n -> lambda_n^r a_n (lambda_0 = 1)."""
    if r < 0:
        raise ValueError("order must be nonnegative")
    if r == 0:
        return K
    lam = np.array(
        [float(laplace_eigenvalue(K.params, n)) for n in range(K.n_max + 1)]
    )
    return ZonalKernel(
        params=K.params,
        coeffs=CoefficientSequence(K.coeffs.params, lam**r * K.coeffs.values),
    )


def apply_jr(K: ZonalKernel, r: int) -> ZonalKernel:
    """Inverse weighting a_n -> lambda_n^{-r} a_n; inverts apply_lb on every
    degree (including n=0 thanks to the lambda_0 = 1 convention)."""
    if r < 0:
        raise ValueError("order must be nonnegative")
    if r == 0:
        return K
    lam = np.array(
        [float(laplace_eigenvalue(K.params, n)) for n in range(K.n_max + 1)]
    )
    return ZonalKernel(
        params=K.params,
        coeffs=CoefficientSequence(K.coeffs.params, lam ** (-float(r)) * K.coeffs.values),
    )


def jr_singular_values(params: GeometryParams, r: int, count: int) -> Spectrum:
    """Block-ordered singular values of the r-th order inverse operator:
    a leading 1, then d_n entries of n^{-r}(n+alpha+beta+1)^{-r} per degree
    (even degrees only on real projective space)."""
    if r < 1:
        raise ValueError("order must be at least 1")
    if count < 1:
        raise ValueError("count must be positive")
    step = 2 if params.kind is SpaceKind.REAL_PROJECTIVE else 1
    vals, degs, within = [1.0], [0], [0]
    n = 0
    while len(vals) < count:
        n += step
        d = eigenspace_dim(params, n)
        s = float(laplace_eigenvalue(params, n)) ** (-float(r))
        take = min(d, count - len(vals))
        vals.extend([s] * take)
        degs.extend([n] * take)
        within.extend(range(take))
    return Spectrum(values=np.array(vals), degrees=np.array(degs), within=np.array(within))


def degrees_for_count(params: GeometryParams, count: int) -> int:
    """Smallest degree n with cumulative dimension tau_n >= count."""
    if count < 1:
        raise ValueError("count must be positive")
    n_max = 64
    while True:
        cumulative = dimension_sequence(params, n_max).cumulative()
        if cumulative[-1] >= count:
            return next(n for n, c in enumerate(cumulative) if c >= count)
        n_max *= 2


def hs_norm(K: ZonalKernel) -> float:
    """Hilbert-Schmidt norm sqrt(sum_n d_n a_n^2) over the stored range."""
    dims = np.array(dimension_sequence(K.params, K.n_max).values, dtype=float)
    return math.sqrt(float(dims @ (K.coeffs.values**2)))


def schatten_norm(S: Spectrum, p: float) -> float:
    """Schatten p-norm (sum |s_i|^p)^{1/p} of a finite spectrum."""
    if p < 1:
        raise ValueError("Schatten norm requires p >= 1")
    return float(np.sum(np.abs(S.values) ** p) ** (1.0 / p))


def is_positive_definite(K: ZonalKernel) -> bool:
    """True iff all stored coefficients are nonnegative up to a relative
    tolerance of 1e-12 of the largest magnitude."""
    vals = K.coeffs.values
    tol = 1e-12 * float(np.max(np.abs(vals))) if len(vals) else 0.0
    return bool(np.all(vals >= -tol))


def sobolev_exponent_threshold(params: GeometryParams, r: int) -> float:
    """Infimal algebraic decay exponent gamma such that a_n = (n+1)^{-gamma}
    keeps the r-th derivative kernel square integrable: 2r + m/2."""
    if r < 0:
        raise ValueError("order must be nonnegative")
    return 2.0 * r + params.m / 2.0


def zonal_profile(K: ZonalKernel) -> Callable:
    """Profile t -> sum_n a_n d_n P_n(t)/P_n(1) reconstructed from the
    stored coefficients."""
    jp = K.coeffs.params
    dims = dimension_sequence(K.params, K.n_max).values
    scale = np.array(
        [d / jacobi_at_one(jp, n) if d else 0.0 for n, d in enumerate(dims)]
    )
    weights = K.coeffs.values * scale

    def profile(t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        basis = jacobi_batch(jp, K.n_max, t_arr.ravel())
        vals = (weights @ basis).reshape(t_arr.shape)
        return float(vals) if np.ndim(t) == 0 else vals

    return profile


def _family_values(params, dims, family, gamma, q, z, n_max, jp):
    if family == "algebraic":
        if gamma is None:
            raise ValueError("algebraic family requires gamma")
        vals = (np.arange(n_max + 1) + 1.0) ** (-float(gamma))
    elif family == "geometric":
        if q is None:
            raise ValueError("geometric family requires q")
        vals = float(q) ** np.arange(n_max + 1).astype(float)
    elif family == "genfun":
        if z is None:
            raise ValueError("genfun family requires z")
        if not 0 <= abs(z) < 1:
            raise ValueError("genfun parameter must satisfy |z| < 1")
        rule = gauss_jacobi(jp, default_rule_size(n_max))
        raw = fourier_jacobi_coeffs(generating_profile(z), jp, n_max, rule).values
        at_one = np.array([jacobi_at_one(jp, n) for n in range(n_max + 1)])
        safe_dims = np.where(np.array(dims) > 0, dims, 1)
        vals = raw * at_one / safe_dims
    else:
        raise ValueError(
            f"unknown coefficient family {family!r}; choose from {COEFFICIENT_FAMILIES}"
        )
    return np.where(np.array(dims) > 0, vals, 0.0)


def make_kernel(
    params: GeometryParams,
    family: str,
    n_max: int,
    gamma: float | None = None,
    q: float | None = None,
    z: float | None = None,
) -> ZonalKernel:
    """Built-in coefficient families: "algebraic" a_n = (n+1)^{-gamma},
    "geometric" a_n = q^n, "genfun" the generating-function profile with
    parameter z projected onto the space's Jacobi basis.

    Degrees without an eigenspace (odd degrees on real projective space)
    always get a zero coefficient.
    """
    if n_max < 0:
        raise ValueError("n_max must be nonnegative")
    jp = jacobi_params_of(params)
    dims = dimension_sequence(params, n_max).values
    vals = _family_values(params, dims, family, gamma, q, z, n_max, jp)
    return ZonalKernel(params=params, coeffs=CoefficientSequence(jp, vals))


def generating_profile(z: float) -> Callable:
    """The classical generating-function profile (1 - 2tz + z^2)^{-1/2}."""
    z = float(z)

    def profile(t):
        return 1.0 / np.sqrt(1.0 - 2.0 * t * z + z * z)

    return profile


def poisson_profile(q: float) -> Callable:
    """Closed form of sum_n q^n (2n+1) P_n(t) on the 2-sphere: the full
    (untruncated) profile of the geometric family there."""
    q = float(q)

    def profile(t):
        return (1.0 - q * q) / (1.0 - 2.0 * q * t + q * q) ** 1.5

    return profile


def family_profile(
    params: GeometryParams,
    family: str,
    n_max: int,
    gamma: float | None = None,
    q: float | None = None,
    z: float | None = None,
) -> Callable:
    """Profile function matching make_kernel for use with the quadrature
    oracle.  Geometric (on the 2-sphere) and genfun families use their exact
    closed forms; everything else falls back to the truncated reconstruction
    of the stored coefficients."""
    if family == "genfun":
        if z is None:
            raise ValueError("genfun family requires z")
        return generating_profile(z)
    if (
        family == "geometric"
        and params.kind is SpaceKind.SPHERE
        and params.m == 2
        and q is not None
    ):
        return poisson_profile(q)
    kernel = make_kernel(params, family, n_max, gamma=gamma, q=q, z=z)
    return zonal_profile(kernel)
