"""Variational eigenvalue bounds for the broken-line delta-interaction
Schrodinger operator, with an independent finite-difference cross-check."""

from .trial import (
    BoundReport,
    Cutoff,
    DomainError,
    TENT_CUTOFF,
    TrialParams,
    WedgeConfig,
    bound_constants,
    closed_J,
    closed_R,
    cutoff_chi,
    g_rho,
    lambda_upper,
    profile_F,
    trial_u,
)
from .quadrature import ConvergenceError, QuadratureEstimate, integrate, quad_J
from .variational import (
    RayleighReport,
    norm_sq,
    optimize_bound,
    r_functional,
    rayleigh,
    verify_thm1,
)
from .spectral import (
    GridSpec,
    SpectralResult,
    assemble,
    delta_well_1d,
    lowest_eigenvalue,
    solve,
)

__version__ = "0.1.0"

__all__ = [
    "BoundReport",
    "ConvergenceError",
    "Cutoff",
    "DomainError",
    "GridSpec",
    "QuadratureEstimate",
    "RayleighReport",
    "SpectralResult",
    "TENT_CUTOFF",
    "TrialParams",
    "WedgeConfig",
    "assemble",
    "bound_constants",
    "closed_J",
    "closed_R",
    "cutoff_chi",
    "delta_well_1d",
    "g_rho",
    "integrate",
    "lambda_upper",
    "lowest_eigenvalue",
    "norm_sq",
    "optimize_bound",
    "profile_F",
    "quad_J",
    "r_functional",
    "rayleigh",
    "solve",
    "trial_u",
    "verify_thm1",
]
