"""Numerical verification of a family of Lagrangian spheres in S²(c1) x S²(c2).

The package evaluates the family Phi_t through exact 2-jets, checks the
pointwise identities satisfied along it, integrates the global ones by
quadrature and tabulates the area A(t).  See ``lagspheres --help``.
"""

__version__ = "0.1.0"

from ._kernels import BACKEND
from .ambient import J_ORIENTATION, Params
from .calculus import LocalGeometry, Stencil, local_geometry, richardson
from .errors import DegenerateMetricError, DomainError, PoleBandError
from .identities import (IdentityResidual, calibrate_orientation, derivative_suite, exact_suite,
                         variation_field_residual)
from .immersions import (closed_area, closed_div_jh, family_chart, hamiltonian_potential,
                         lawlor_chart, minimal_hat, phi_family, phi_zero)
from .integrals import GlobalCheck, QuadratureGrid, area_scan, global_checks, integrate
from .jets import Jet2

__all__ = [
    "BACKEND", "J_ORIENTATION", "Params", "Jet2", "LocalGeometry", "Stencil", "local_geometry",
    "richardson", "DomainError", "PoleBandError", "DegenerateMetricError", "IdentityResidual",
    "exact_suite", "derivative_suite", "variation_field_residual", "calibrate_orientation",
    "phi_family", "phi_zero", "family_chart", "lawlor_chart", "minimal_hat",
    "hamiltonian_potential", "closed_area", "closed_div_jh", "QuadratureGrid", "GlobalCheck",
    "integrate", "global_checks", "area_scan",
]
