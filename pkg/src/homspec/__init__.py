"""Spectra of zonal integral operators on compact two-point homogeneous
spaces: exact counting data, Jacobi-polynomial machinery, operator calculus,
a quadrature cross-check on the 2-sphere, and decay-rate diagnostics."""

from .analysis import (
    DecayReport,
    LemmaReport,
    RateDiagnostic,
    check_counting_lemmas,
    fit_decay,
    rate_diagnostic,
    verify_theorem,
    weyl_check,
)
from .geometry import (
    DimensionSequence,
    GeometryParams,
    SpaceKind,
    cumulative_dim,
    dimension_sequence,
    eigenspace_dim,
    laplace_eigenvalue,
    space_params,
)
from .jacobi import (
    CoefficientSequence,
    JacobiParams,
    QuadratureRule,
    fourier_jacobi_coeffs,
    gauss_jacobi,
    jacobi_eval,
    jacobi_norm_sq,
)
from .linalg import SymmetricMatrix, TridiagonalForm, symmetric_eigen
from .nystrom import SphereGrid, compare_spectra, nystrom_spectrum, sphere_grid
from .operators import (
    Spectrum,
    ZonalKernel,
    apply_jr,
    apply_lb,
    hs_norm,
    is_positive_definite,
    jr_singular_values,
    make_kernel,
    schatten_norm,
    sobolev_exponent_threshold,
    zonal_spectrum,
)

__version__ = "0.1.0"

__all__ = [
    "CoefficientSequence",
    "DecayReport",
    "DimensionSequence",
    "GeometryParams",
    "JacobiParams",
    "LemmaReport",
    "QuadratureRule",
    "RateDiagnostic",
    "SpaceKind",
    "Spectrum",
    "SphereGrid",
    "SymmetricMatrix",
    "TridiagonalForm",
    "ZonalKernel",
    "apply_jr",
    "apply_lb",
    "check_counting_lemmas",
    "compare_spectra",
    "cumulative_dim",
    "dimension_sequence",
    "eigenspace_dim",
    "fit_decay",
    "fourier_jacobi_coeffs",
    "gauss_jacobi",
    "hs_norm",
    "is_positive_definite",
    "jacobi_eval",
    "jacobi_norm_sq",
    "jr_singular_values",
    "laplace_eigenvalue",
    "make_kernel",
    "nystrom_spectrum",
    "rate_diagnostic",
    "schatten_norm",
    "sobolev_exponent_threshold",
    "space_params",
    "sphere_grid",
    "symmetric_eigen",
    "verify_theorem",
    "weyl_check",
    "zonal_spectrum",
]
