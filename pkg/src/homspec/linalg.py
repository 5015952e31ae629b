"""Dense symmetric eigensolver: Householder tridiagonalization followed by
implicit-shift QL iteration with Wilkinson shift.

Self-contained (numpy is used for array storage and BLAS-level updates only)
and adequate up to order ~2000.  Eigenvalues are returned in nonincreasing
order throughout, matching the ordering used for operator spectra.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


class NonFiniteEntry(ValueError):
    """Raised when a matrix contains NaN or infinite entries."""


class NoConvergence(RuntimeError):
    """Raised when an eigenvalue needs more than the sweep budget."""


_MAX_SWEEPS = 50


@dataclass(frozen=True)
class SymmetricMatrix:
    """Square matrix stored exactly symmetric (upper triangle mirrors lower)."""

    data: np.ndarray

    def __post_init__(self):
        arr = np.asarray(self.data, dtype=float)
        if arr.ndim != 2 or arr.shape[0] != arr.shape[1]:
            raise ValueError(f"expected a square matrix, got shape {arr.shape}")
        if not np.all(np.isfinite(arr)):
            raise NonFiniteEntry("matrix contains non-finite entries")
        lower = np.tril(arr)
        sym = lower + np.tril(arr, -1).T
        sym.setflags(write=False)
        object.__setattr__(self, "data", sym)

    @property
    def order(self) -> int:
        return self.data.shape[0]


@dataclass(frozen=True)
class TridiagonalForm:
    """Tridiagonal matrix (diagonal, offdiagonal) with an optionally
    accumulated orthogonal transform Q such that A = Q T Q^T."""

    diagonal: np.ndarray
    offdiagonal: np.ndarray
    transform: np.ndarray | None = None

    def __post_init__(self):
        d = np.asarray(self.diagonal, dtype=float)
        e = np.asarray(self.offdiagonal, dtype=float)
        if d.ndim != 1 or e.ndim != 1 or len(e) != max(len(d) - 1, 0):
            raise ValueError("inconsistent tridiagonal dimensions")
        if not (np.all(np.isfinite(d)) and np.all(np.isfinite(e))):
            raise NonFiniteEntry("tridiagonal form contains non-finite entries")
        object.__setattr__(self, "diagonal", d)
        object.__setattr__(self, "offdiagonal", e)

    @property
    def order(self) -> int:
        return len(self.diagonal)


def tridiagonalize(A: SymmetricMatrix, accumulate: bool = False) -> TridiagonalForm:
    """Householder reduction to symmetric tridiagonal form."""
    n = A.order
    work = A.data.copy()
    Q = np.eye(n) if accumulate else None
    for k in range(n - 2):
        x = work[k + 1:, k].copy()
        alpha = float(np.linalg.norm(x))
        if alpha == 0.0:
            continue
        if x[0] > 0:
            alpha = -alpha
        v = x
        v[0] -= alpha
        vnorm = float(np.linalg.norm(v))
        if vnorm == 0.0:
            continue
        v /= vnorm
        # two-sided rank-2 update of the trailing block with P = I - 2 v v^T
        sub = work[k + 1:, k + 1:]
        w = sub @ v
        w -= (v @ w) * v
        sub -= 2.0 * (np.outer(v, w) + np.outer(w, v))
        work[k + 1, k] = work[k, k + 1] = alpha
        work[k + 2:, k] = work[k, k + 2:] = 0.0
        if accumulate:
            qsub = Q[:, k + 1:]
            qsub -= 2.0 * np.outer(qsub @ v, v)
    return TridiagonalForm(
        diagonal=np.diag(work).copy(),
        offdiagonal=np.diag(work, 1).copy(),
        transform=Q,
    )


def tridiag_eigen(
    T: TridiagonalForm, want_vectors: bool = False
) -> tuple[np.ndarray, np.ndarray | None]:
    """Eigenvalues of T in nonincreasing order, optionally with orthonormal
    eigenvectors (columns).

    When T carries an accumulated transform, the returned vectors are
    eigenvectors of the original matrix A = Q T Q^T; otherwise they are
    eigenvectors of T itself.
    """
    n = T.order
    d = T.diagonal.copy()
    e = np.append(T.offdiagonal.copy(), 0.0)
    if want_vectors:
        Q = T.transform.copy() if T.transform is not None else np.eye(n)
    else:
        Q = None
    eps = np.finfo(float).eps
    # absolute deflation floor: a pure relative test livelocks when a
    # rank-deficient matrix leaves trailing diagonal entries at noise scale
    floor = eps * max(
        float(np.max(np.abs(d), initial=0.0)), float(np.max(np.abs(e), initial=0.0))
    )
    for l in range(n):
        sweeps = 0
        while True:
            m = l
            while m < n - 1:
                dd = abs(d[m]) + abs(d[m + 1])
                if abs(e[m]) <= max(eps * dd, floor):
                    break
                m += 1
            if m == l:
                break
            sweeps += 1
            if sweeps > _MAX_SWEEPS:
                raise NoConvergence(
                    f"eigenvalue {l} not converged after {_MAX_SWEEPS} sweeps"
                )
            # Wilkinson shift from the leading 2x2, then implicit QL sweep
            g = (d[l + 1] - d[l]) / (2.0 * e[l])
            r = math.hypot(g, 1.0)
            g = d[m] - d[l] + e[l] / (g + (r if g >= 0 else -r))
            s = c = 1.0
            p = 0.0
            for i in range(m - 1, l - 1, -1):
                f = s * e[i]
                b = c * e[i]
                r = math.hypot(f, g)
                e[i + 1] = r
                if r == 0.0:
                    d[i + 1] -= p
                    e[m] = 0.0
                    break
                s = f / r
                c = g / r
                g = d[i + 1] - p
                r = (d[i] - g) * s + 2.0 * c * b
                p = s * r
                d[i + 1] = g + p
                g = c * r - b
                if Q is not None:
                    col = Q[:, i + 1].copy()
                    Q[:, i + 1] = s * Q[:, i] + c * col
                    Q[:, i] = c * Q[:, i] - s * col
            else:
                d[l] -= p
                e[l] = g
                e[m] = 0.0
    order = np.argsort(-d, kind="stable")
    values = d[order]
    vectors = Q[:, order] if Q is not None else None
    return values, vectors


def symmetric_eigen(A: SymmetricMatrix) -> np.ndarray:
    """Eigenvalues of a symmetric matrix in nonincreasing order."""
    return tridiag_eigen(tridiagonalize(A))[0]
