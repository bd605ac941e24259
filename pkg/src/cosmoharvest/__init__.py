"""Entanglement acquired by Gaussian detector pairs in expanding spacetimes.

Computes the negativity of two Gaussian-smeared two-level detectors coupled
to a conformally coupled massless scalar field in de Sitter or Minkowski
spacetime, split into its communication-mediated and genuinely harvested
parts, together with the interference phase between them.
"""

from .backend import backend_name
from .cosmology import CosmologyModel, conformal_time, de_sitter, minkowski, scale_factor
from .detectors import DetectorPair, DetectorParams, SizePolicy, sigma_pair, switching, width_at
from .harvest import (HarvestError, HarvestResult, correlation_m, correlation_m_minus,
                      correlation_m_plus, density_matrix, evaluate, local_term,
                      negativity_from_parts, partial_transpose_a)
from .kernels import (DegenerateSeparationError, KernelInputs, kernel_cross,
                      kernel_cross_smalld, kernel_minus, kernel_plus, kernel_self,
                      momentum_integral_reference)
from .quadrature import (Integrand2D, QuadratureConfig, QuadratureConvergenceError,
                         integrate_ordered, integrate_square)
from .specfun import aux_i, dawson, gauss_h

__version__ = "0.1.0"

__all__ = [
    "CosmologyModel", "DetectorPair", "DetectorParams", "DegenerateSeparationError",
    "HarvestError", "HarvestResult", "Integrand2D", "KernelInputs",
    "QuadratureConfig", "QuadratureConvergenceError", "SizePolicy",
    "aux_i", "backend_name", "conformal_time", "correlation_m",
    "correlation_m_minus", "correlation_m_plus", "dawson", "de_sitter",
    "density_matrix", "evaluate", "gauss_h", "integrate_ordered",
    "integrate_square", "kernel_cross", "kernel_cross_smalld", "kernel_minus",
    "kernel_plus", "kernel_self", "local_term", "minkowski",
    "momentum_integral_reference", "negativity_from_parts", "partial_transpose_a",
    "scale_factor", "sigma_pair", "switching", "width_at",
]
