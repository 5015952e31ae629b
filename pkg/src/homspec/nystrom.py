"""Quadrature discretization of zonal integral operators on the 2-sphere.

The brute-force cross-check for the analytic spectra: a product
Gauss-Legendre x uniform-azimuth grid turns the operator into a symmetric
matrix (weights split as sqrt(w_i w_j) so the symmetric eigensolver
applies), whose eigenvalues approximate the coefficient spectrum.
Restricted to the 2-sphere; higher-dimensional product grids would explode
combinatorially and the sphere suffices as an oracle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .jacobi import JacobiParams, evaluate_profile, gauss_jacobi
from .linalg import SymmetricMatrix, symmetric_eigen
from .operators import Spectrum

VOL = 4.0 * math.pi  # surface area of the unit 2-sphere

_GAP_THRESHOLD = 1e-3  # relative flatness required inside one degree block


class NonFiniteKernelValue(ValueError):
    """Raised when the profile evaluates to NaN or infinity on the grid."""


class LengthMismatch(ValueError):
    """Raised when compared spectra cannot cover the requested length."""


class DegreeInferenceError(RuntimeError):
    """Raised when eigenvalues cannot be unambiguously grouped into degree
    blocks of multiplicities 2n+1."""


@dataclass(frozen=True)
class SphereGrid:
    points: np.ndarray   # (N, 3) unit vectors
    weights: np.ndarray  # (N,) positive, summing to 4*pi

    def __len__(self) -> int:
        return len(self.weights)


def sphere_grid(n_polar: int, n_azimuthal: int) -> SphereGrid:
    """Tensor grid: Gauss-Legendre in cos(theta) times uniform azimuth.

    Integrates spherical polynomials of total degree up to
    min(2*n_polar - 1, n_azimuthal - 1) exactly.
    """
    if n_polar < 1 or n_azimuthal < 1:
        raise ValueError("grid sizes must be positive")
    rule = gauss_jacobi(JacobiParams(0.0, 0.0), n_polar)
    u = rule.nodes
    su = np.sqrt(1.0 - u**2)
    phi = 2.0 * math.pi * np.arange(n_azimuthal) / n_azimuthal
    cos_phi, sin_phi = np.cos(phi), np.sin(phi)
    points = np.empty((n_polar * n_azimuthal, 3))
    points[:, 0] = np.outer(su, cos_phi).ravel()
    points[:, 1] = np.outer(su, sin_phi).ravel()
    points[:, 2] = np.repeat(u, n_azimuthal)
    weights = np.repeat(rule.weights, n_azimuthal) * (2.0 * math.pi / n_azimuthal)
    points.setflags(write=False)
    weights.setflags(write=False)
    return SphereGrid(points=points, weights=weights)


def assemble_matrix(k: Callable, grid: SphereGrid) -> SymmetricMatrix:
    """Symmetrized discretization A_ij = sqrt(w_i w_j) k(x_i . x_j) / vol."""
    gram = np.clip(grid.points @ grid.points.T, -1.0, 1.0)
    vals = evaluate_profile(k, gram)
    if not np.all(np.isfinite(vals)):
        raise NonFiniteKernelValue("profile produced non-finite values on the grid")
    sw = np.sqrt(grid.weights)
    return SymmetricMatrix(np.outer(sw, sw) * vals / VOL)


def _infer_degrees(values: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Assign degrees to magnitude-sorted eigenvalues by filling blocks of
    size 2n+1 and checking each filled block is flat to the gap threshold."""
    degrees = np.empty(len(values), dtype=int)
    within = np.empty(len(values), dtype=int)
    global_scale = float(np.max(np.abs(values))) if len(values) else 0.0
    pos = 0
    n = 0
    while pos < len(values):
        size = min(2 * n + 1, len(values) - pos)
        block = values[pos : pos + size]
        spread = float(np.max(block) - np.min(block))
        scale = max(
            _GAP_THRESHOLD * float(np.max(np.abs(block))), 1e-9 * global_scale
        )
        if spread > scale:
            raise DegreeInferenceError(
                f"entries {pos}..{pos + size - 1} do not form a flat degree-{n} "
                f"block (spread {spread:.3e} exceeds {scale:.3e}); "
                "multiplicity structure is ambiguous"
            )
        degrees[pos : pos + size] = n
        within[pos : pos + size] = np.arange(size)
        pos += size
        n += 1
    return degrees, within


def nystrom_spectrum(
    k: Callable, n_polar: int, n_azimuthal: int, top_k: int
) -> Spectrum:
    """Top eigenvalues (by magnitude) of the discretized operator, with
    degrees inferred from multiplicity runs {2n+1}."""
    grid = sphere_grid(n_polar, n_azimuthal)
    if top_k > len(grid):
        raise ValueError(f"top_k={top_k} exceeds grid size {len(grid)}")
    eigs = symmetric_eigen(assemble_matrix(k, grid))
    order = np.argsort(-np.abs(eigs), kind="stable")[:top_k]
    values = eigs[order]
    degrees, within = _infer_degrees(values)
    return Spectrum(values=values, degrees=degrees, within=within)


def compare_spectra(analytic: Spectrum, numeric: Spectrum, top_k: int) -> float:
    """Max relative deviation over the first top_k entries, with an absolute
    floor of 1e-14 in the denominator."""
    if len(analytic) < top_k or len(numeric) < top_k:
        raise LengthMismatch(
            f"need {top_k} entries, have {len(analytic)} analytic "
            f"and {len(numeric)} numeric"
        )
    a = analytic.values[:top_k]
    b = numeric.values[:top_k]
    return float(np.max(np.abs(a - b) / np.maximum(np.abs(a), 1e-14)))
