"""Detector parameterization: Gaussian switching, sizing policies, widths.

Units: the switching width T of detector A defines the time unit; every
scenario in the verification suite uses the dimensionless combinations
Omega*T, H*T, sigma/T, d/T.  Trajectories are comoving-static (x = x_j),
so switching is a function of coordinate time only.

The normalization of the spatial profile (integral of a^n F_j over a
constant-t slice equals 1) is analytic and already absorbed into the
closed-form kernels; nothing here integrates it numerically.
"""

import enum
from dataclasses import dataclass, field

import numpy as np

from .cosmology import CosmologyModel, scale_factor


class SizePolicy(enum.Enum):
    """How the comoving smearing width responds to expansion.

    COMOVING: sigma_j(t) = sigma, the detector expands with the Universe.
    PROPER_FIXED: sigma_j(t) = sigma / a(t), internal cohesion keeps the
    proper size constant.
    """

    COMOVING = "comoving"
    PROPER_FIXED = "proper"


@dataclass(frozen=True)
class DetectorParams:
    gap: float                      # proper internal energy gap Omega
    t_center: float                 # switching center t_j
    width: float                    # switching width T_j > 0
    sigma: float                    # base comoving smearing width > 0
    position: tuple = (0.0, 0.0, 0.0)  # comoving position x_j
    policy: SizePolicy = SizePolicy.COMOVING

    def __post_init__(self):
        if not self.width > 0.0:
            raise ValueError("switching width must be > 0")
        if not self.sigma > 0.0:
            raise ValueError("smearing width must be > 0")
        if len(self.position) != 3:
            raise ValueError("position must be a 3-vector")


@dataclass(frozen=True)
class DetectorPair:
    a: DetectorParams
    b: DetectorParams
    coupling: float = 1.0           # lambda; quadratic outputs carry lambda^2

    @property
    def separation(self) -> float:
        """Comoving distance d = |x_a - x_b|."""
        dx = np.subtract(self.a.position, self.b.position)
        return float(np.sqrt(np.dot(dx, dx)))


def switching(det: DetectorParams, t):
    """Gaussian switching chi(t) = exp(-((t - t_c)/T)^2), in (0, 1]."""
    t = np.asarray(t, dtype=np.float64)
    u = (t - det.t_center) / det.width
    out = np.exp(-u * u)
    return float(out) if t.ndim == 0 else out


def width_at(det: DetectorParams, model: CosmologyModel, t):
    """Comoving smearing width sigma_j(t) under the detector's policy."""
    t = np.asarray(t, dtype=np.float64)
    if det.policy is SizePolicy.COMOVING:
        out = np.full_like(t, det.sigma)
    else:
        out = det.sigma / scale_factor(model, t)
    return float(out) if t.ndim == 0 else out


def sigma_pair(det_i: DetectorParams, det_j: DetectorParams,
               model: CosmologyModel, t, tp):
    """Combined width Sigma_ij(t, t') = sqrt(sigma_i(t)^2 + sigma_j(t')^2).

    Symmetric under swapping (i, t) <-> (j, t').
    """
    wi = width_at(det_i, model, t)
    wj = width_at(det_j, model, tp)
    return np.sqrt(wi * wi + wj * wj)
