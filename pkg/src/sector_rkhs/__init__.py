"""Degenerate parabolic half-line solver and the weighted Bergman RKHS on a sector.

The package evaluates the boundary-data transform of the degenerate heat
equation ``u_t = x^{2(a-1)/a} u_xx`` on the half line, the reproducing kernel
of its image space of analytic functions on the sector ``|arg z| < pi a / 4``,
and the quadrature inverse that reconstructs boundary data, together with
independent oracles (finite differences, Laplace/Bessel identities).
"""

from .bergman_rkhs import (
    GSpaceElement,
    WeightedKernelSpec,
    bergman_kernel,
    gspace_inner,
    gspace_norm,
    gspace_norm_factorized,
    measure_density,
    rkhs_kernel,
    rkhs_kernel_integral,
)
from .errors import (
    AccuracyWarning,
    BranchError,
    DomainError,
    QuadratureError,
    StabilityError,
)
from .heat_kernel import AlphaParam, kernel_K, profile_W
from .inversion import Exhaustion, invert, roundtrip_error
from .mesh import SectorMesh, default_mesh
from .pde_oracle import FDGrid, refinement_study, solve_fd
from .report import DiagnosticsReport
from .specfun import bessel_k, erfc_alpha, reg_upper_gamma
from .transform import BoundarySignal, forward_L, forward_T

__all__ = [
    "AccuracyWarning",
    "AlphaParam",
    "BoundarySignal",
    "BranchError",
    "DiagnosticsReport",
    "DomainError",
    "Exhaustion",
    "FDGrid",
    "GSpaceElement",
    "QuadratureError",
    "SectorMesh",
    "StabilityError",
    "WeightedKernelSpec",
    "bergman_kernel",
    "bessel_k",
    "default_mesh",
    "erfc_alpha",
    "forward_L",
    "forward_T",
    "gspace_inner",
    "gspace_norm",
    "gspace_norm_factorized",
    "invert",
    "kernel_K",
    "measure_density",
    "profile_W",
    "refinement_study",
    "reg_upper_gamma",
    "rkhs_kernel",
    "rkhs_kernel_integral",
    "roundtrip_error",
    "solve_fd",
]

__version__ = "0.1.0"
