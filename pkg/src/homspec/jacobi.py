"""Jacobi polynomials for the weight (1-t)^alpha (1+t)^beta on [-1, 1]:
evaluation by three-term recurrence, orthogonality normalizers, Gauss-Jacobi
quadrature via Golub-Welsch, and coefficient computation by projection.

Evaluation uses the recurrence rather than hypergeometric series because the
downstream quadrature nodes cluster near the endpoints.  Parameters are
floats here even where the geometry keeps them rational; quadrature is
inherently approximate.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .linalg import TridiagonalForm, tridiag_eigen


class QuadratureTooCoarse(ValueError):
    """Raised when a rule has too few nodes for the requested projection."""


@dataclass(frozen=True)
class JacobiParams:
    alpha: float
    beta: float

    def __post_init__(self):
        if not (self.alpha > -1 and self.beta > -1):
            raise ValueError(
                f"weight exponents must exceed -1, got ({self.alpha}, {self.beta})"
            )


@dataclass(frozen=True)
class QuadratureRule:
    params: JacobiParams
    nodes: np.ndarray
    weights: np.ndarray

    def __len__(self) -> int:
        return len(self.nodes)


@dataclass(frozen=True)
class CoefficientSequence:
    """Coefficients a_0..a_{n_max} against the P_n basis of given params."""

    params: JacobiParams
    values: np.ndarray

    def __post_init__(self):
        vals = np.atleast_1d(np.asarray(self.values, dtype=float))
        if not np.all(np.isfinite(vals)):
            raise ValueError("coefficients must be finite")
        vals.setflags(write=False)
        object.__setattr__(self, "values", vals)

    @property
    def n_max(self) -> int:
        return len(self.values) - 1


def jacobi_eval(p: JacobiParams, n: int, t):
    """P_n^{(alpha,beta)}(t) for scalar or array t in [-1, 1]."""
    a, b = p.alpha, p.beta
    t = np.asarray(t, dtype=float)
    scalar = t.ndim == 0
    if np.any(np.abs(t) > 1 + 1e-12):
        raise ValueError("evaluation points must lie in [-1, 1]")
    pn = np.ones_like(t)
    if n >= 1:
        pn1 = pn
        pn = 0.5 * (a - b + (a + b + 2.0) * t)
        for k in range(2, n + 1):
            a1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0)
            a2 = (2.0 * k + a + b - 1.0) * (a * a - b * b)
            a3 = (2.0 * k + a + b - 2.0) * (2.0 * k + a + b - 1.0) * (2.0 * k + a + b)
            a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b)
            pn, pn1 = ((a2 + a3 * t) * pn - a4 * pn1) / a1, pn
    return float(pn) if scalar else pn


def jacobi_batch(p: JacobiParams, n_max: int, t: np.ndarray) -> np.ndarray:
    """All P_n(t) for n <= n_max; returns array of shape (n_max+1, len(t))."""
    a, b = p.alpha, p.beta
    t = np.atleast_1d(np.asarray(t, dtype=float))
    out = np.empty((n_max + 1, len(t)))
    out[0] = 1.0
    if n_max >= 1:
        out[1] = 0.5 * (a - b + (a + b + 2.0) * t)
    for k in range(2, n_max + 1):
        a1 = 2.0 * k * (k + a + b) * (2.0 * k + a + b - 2.0)
        a2 = (2.0 * k + a + b - 1.0) * (a * a - b * b)
        a3 = (2.0 * k + a + b - 2.0) * (2.0 * k + a + b - 1.0) * (2.0 * k + a + b)
        a4 = 2.0 * (k + a - 1.0) * (k + b - 1.0) * (2.0 * k + a + b)
        out[k] = ((a2 + a3 * t) * out[k - 1] - a4 * out[k - 2]) / a1
    return out


def jacobi_at_one(p: JacobiParams, n: int) -> float:
    """P_n(1) = binomial(n+alpha, n), as a stable product."""
    val = 1.0
    for i in range(1, n + 1):
        val *= (p.alpha + i) / i
    return val


def weight_mass(p: JacobiParams) -> float:
    """Total mass of the weight: 2^{a+b+1} Gamma(a+1) Gamma(b+1) / Gamma(a+b+2)."""
    a, b = p.alpha, p.beta
    return math.exp(
        (a + b + 1) * math.log(2.0)
        + math.lgamma(a + 1)
        + math.lgamma(b + 1)
        - math.lgamma(a + b + 2)
    )


def jacobi_norm_sq(p: JacobiParams, n: int) -> float:
    """Squared weighted L2 norm h_n of P_n (closed Gamma-ratio form)."""
    if n == 0:
        return weight_mass(p)
    a, b = p.alpha, p.beta
    return math.exp(
        (a + b + 1) * math.log(2.0)
        - math.log(2 * n + a + b + 1)
        + math.lgamma(n + a + 1)
        + math.lgamma(n + b + 1)
        - math.lgamma(n + a + b + 1)
        - math.lgamma(n + 1.0)
    )


def gauss_jacobi(p: JacobiParams, N: int) -> QuadratureRule:
    """N-point Gauss-Jacobi rule by Golub-Welsch.

    Nodes are the eigenvalues of the recurrence tridiagonal; each weight is
    the total weight mass times the squared first component of the
    corresponding eigenvector.
    """
    if N < 1:
        raise ValueError("rule size must be positive")
    a, b = p.alpha, p.beta
    diag = np.empty(N)
    diag[0] = (b - a) / (a + b + 2.0)
    for k in range(1, N):
        diag[k] = (b * b - a * a) / ((2 * k + a + b) * (2 * k + a + b + 2.0))
    off = np.empty(max(N - 1, 0))
    if N > 1:
        off[0] = math.sqrt(
            4.0 * (a + 1) * (b + 1) / ((a + b + 2.0) ** 2 * (a + b + 3.0))
        )
    for k in range(2, N):
        num = 4.0 * k * (k + a) * (k + b) * (k + a + b)
        den = (2 * k + a + b) ** 2 * (2 * k + a + b + 1.0) * (2 * k + a + b - 1.0)
        off[k - 1] = math.sqrt(num / den)
    values, vectors = tridiag_eigen(
        TridiagonalForm(diagonal=diag, offdiagonal=off), want_vectors=True
    )
    order = np.argsort(values)  # ascending nodes
    nodes = values[order]
    weights = weight_mass(p) * vectors[0, order] ** 2
    nodes.setflags(write=False)
    weights.setflags(write=False)
    return QuadratureRule(params=p, nodes=nodes, weights=weights)


def default_rule_size(n_max: int) -> int:
    """Default quadrature size for projecting up to degree n_max: margin for
    non-polynomial profiles."""
    return max(2 * n_max + 16, 64)


def evaluate_profile(k: Callable, t: np.ndarray) -> np.ndarray:
    """Evaluate a scalar profile on an array, vectorizing if needed."""
    try:
        vals = np.asarray(k(t), dtype=float)
        if vals.shape != t.shape:
            raise TypeError
    except (TypeError, ValueError):
        vals = np.array([k(ti) for ti in np.ravel(t)]).reshape(t.shape)
    return vals


def fourier_jacobi_coeffs(
    k: Callable, p: JacobiParams, n_max: int, rule: QuadratureRule
) -> CoefficientSequence:
    """Projection coefficients a_n = (sum_i w_i k(t_i) P_n(t_i)) / h_n."""
    if len(rule) < n_max + 1:
        raise QuadratureTooCoarse(
            f"need at least {n_max + 1} nodes to project to degree {n_max}, "
            f"rule has {len(rule)}"
        )
    basis = jacobi_batch(p, n_max, rule.nodes)
    kv = evaluate_profile(k, rule.nodes)
    h = np.array([jacobi_norm_sq(p, n) for n in range(n_max + 1)])
    coeffs = basis @ (rule.weights * kv) / h
    return CoefficientSequence(params=p, values=coeffs)


def reconstruct(coeffs: CoefficientSequence) -> Callable:
    """The profile t -> sum_n a_n P_n(t) of a finitely supported sequence."""

    def profile(t):
        t_arr = np.atleast_1d(np.asarray(t, dtype=float))
        shape = t_arr.shape
        basis = jacobi_batch(coeffs.params, coeffs.n_max, t_arr.ravel())
        vals = (coeffs.values @ basis).reshape(shape)
        return float(vals) if np.ndim(t) == 0 else vals

    return profile
