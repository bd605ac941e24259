"""Scale factor and conformal-time map for de Sitter and Minkowski.

Detectors sit at fixed comoving position, so their proper time equals the
comoving coordinate time t; no separate proper-time map exists.  The model
family is closed: only the exponentially expanding case a(t) = exp(H t)
and flat space are supported, and Minkowski behaves identically to the
H -> 0 limit of de Sitter.
"""

from dataclasses import dataclass

import numpy as np

DE_SITTER = "deSitter"
MINKOWSKI = "minkowski"


@dataclass(frozen=True)
class CosmologyModel:
    kind: str
    hubble: float = 0.0

    def __post_init__(self):
        if self.kind not in (DE_SITTER, MINKOWSKI):
            raise ValueError(f"unknown cosmology kind {self.kind!r}")
        if self.kind == DE_SITTER and not self.hubble > 0.0:
            raise ValueError("de Sitter requires hubble > 0")
        if not np.isfinite(self.hubble):
            raise ValueError("hubble must be finite")


def de_sitter(hubble: float) -> CosmologyModel:
    return CosmologyModel(DE_SITTER, float(hubble))


def minkowski() -> CosmologyModel:
    return CosmologyModel(MINKOWSKI, 0.0)


def scale_factor(model: CosmologyModel, t):
    """a(t): exp(H t) in de Sitter, 1 in Minkowski.  Always > 0."""
    t = np.asarray(t, dtype=np.float64)
    if model.kind == MINKOWSKI:
        out = np.ones_like(t)
    else:
        out = np.exp(model.hubble * t)
    return float(out) if t.ndim == 0 else out


def conformal_time(model: CosmologyModel, t):
    """eta(t) = (1/H)(1 - exp(-H t)) in de Sitter, t in Minkowski.

    Strictly increasing with eta(0) = 0.  Evaluated through expm1 so the
    H*t -> 0 regime loses no digits to cancellation.
    """
    t = np.asarray(t, dtype=np.float64)
    if model.kind == MINKOWSKI:
        out = t.copy()
    else:
        out = -np.expm1(-model.hubble * t) / model.hubble
    return float(out) if t.ndim == 0 else out
