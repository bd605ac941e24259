"""Closed-form spatially smeared two-point kernels.

Everything here is a function of three numbers only: the conformal-time
difference delta_eta, the comoving separation d, and the combined smearing
width sigma (callers compute those from cosmology and detector policy).
That keeps the layer directly testable against the 1D radial
momentum-integral definition, see :func:`momentum_integral_reference`.

The cross kernel loses all significant digits as d/sigma -> 0 (the bracket
is a difference of nearly equal terms), so the public entry points refuse
d <= D_FLOOR_RATIO * sigma; callers route tiny separations to
:func:`kernel_self` (exact d = 0) or :func:`kernel_cross_smalld` (second
order in d).  The raw formula stays available for limit studies.
"""

from dataclasses import dataclass

import numpy as np

from . import backend
from .specfun import aux_i

D_FLOOR_RATIO = 1e-6


class DegenerateSeparationError(ValueError):
    """Separation too small for the cross-kernel closed form."""


@dataclass(frozen=True)
class KernelInputs:
    delta_eta: object        # scalar or array
    d: float                 # comoving separation >= 0
    sigma: object            # combined width > 0, scalar or array

    def __post_init__(self):
        if not np.all(np.asarray(self.d) >= 0.0):
            raise ValueError("separation d must be >= 0")
        if not np.all(np.asarray(self.sigma) > 0.0):
            raise ValueError("combined width sigma must be > 0")


def _flat(delta_eta, sigma):
    de, sig = np.broadcast_arrays(np.asarray(delta_eta, dtype=np.float64),
                                  np.asarray(sigma, dtype=np.float64))
    shape = de.shape
    return (np.ascontiguousarray(de.ravel()),
            np.ascontiguousarray(sig.ravel()), shape)


def _restore(flat_out, shape, scalar):
    out = flat_out.reshape(shape)
    return complex(out[()]) if scalar else out


def kernel_cross_raw(delta_eta, d, sigma):
    """Unguarded closed form (2 pi / (sigma d)) [I(a+) - I(a-)].

    Cancellation makes this unreliable below d ~ 1e-6 sigma; use
    kernel_self or kernel_cross_smalld there.
    """
    de, sig, shape = _flat(delta_eta, sigma)
    scalar = np.asarray(delta_eta).ndim == 0 and np.asarray(sigma).ndim == 0
    return _restore(backend.impl.kernel_cross(de, float(d), sig), shape, scalar)


def kernel_cross(inputs: KernelInputs):
    """Smeared cross kernel K_ij for separated detectors (i != j)."""
    _check_floor(inputs)
    return kernel_cross_raw(inputs.delta_eta, inputs.d, inputs.sigma)


def kernel_self(delta_eta, sigma):
    """Coincidence kernel K_jj = (4 pi / sigma^2)[1 - a I(a)], a = delta_eta/sigma."""
    de, sig, shape = _flat(delta_eta, sigma)
    scalar = np.asarray(delta_eta).ndim == 0 and np.asarray(sigma).ndim == 0
    return _restore(backend.impl.kernel_self(de, sig), shape, scalar)


def kernel_minus(inputs: KernelInputs):
    """Antisymmetric (commutator) kernel; purely imaginary, equal to
    i * Im kernel_cross.  Supported within a few sigma of the light cone
    delta_eta = +-d and vanishing Gaussianly away from it."""
    _check_floor(inputs)
    de, sig, shape = _flat(inputs.delta_eta, inputs.sigma)
    scalar = np.asarray(inputs.delta_eta).ndim == 0 and np.asarray(inputs.sigma).ndim == 0
    return _restore(backend.impl.kernel_minus(de, float(inputs.d), sig), shape, scalar)


def kernel_plus(inputs: KernelInputs):
    """Symmetric remainder, kernel_cross - kernel_minus (real up to roundoff)."""
    return kernel_cross(inputs) - kernel_minus(inputs)


def kernel_cross_smalld(delta_eta, d, sigma):
    """Second-order small-d expansion of the cross kernel.

    K = (4 pi / sigma^2) [I'(a) + (d/sigma)^2 I'''(a) / 6] with
    I'(a) = 1 - a I(a) and I'''(a) = (3a - a^3) I(a) + a^2 - 2; relative
    truncation error is O((d/sigma)^4).
    """
    de = np.asarray(delta_eta, dtype=np.float64)
    sig = np.asarray(sigma, dtype=np.float64)
    a = de / sig
    i_a = aux_i(a)
    d1 = 1.0 - a * i_a
    d3 = (3.0 * a - a ** 3) * i_a + a * a - 2.0
    out = (4.0 * np.pi / (sig * sig)) * (d1 + (d * d) / (6.0 * sig * sig) * d3)
    scalar = de.ndim == 0 and sig.ndim == 0
    return complex(out) if scalar else out


def _check_floor(inputs: KernelInputs):
    if np.any(np.asarray(inputs.d) <= D_FLOOR_RATIO * np.asarray(inputs.sigma)):
        raise DegenerateSeparationError(
            f"d = {inputs.d!r} is below {D_FLOOR_RATIO} * sigma; "
            "use kernel_self or kernel_cross_smalld")


def momentum_integral_reference(delta_eta, d, sigma, nodes_per_panel=32):
    """Direct radial quadrature of the kernel's momentum-space definition.

    Evaluates (4 pi / d) * integral_0^inf dk sin(k d) exp(-k^2 sigma^2 / 2)
    exp(-i k delta_eta) with composite Gauss-Legendre panels sized against
    the oscillation scale.  Slow; serves as the independent oracle for the
    closed form in the verification suite.
    """
    delta_eta = float(delta_eta)
    d = float(d)
    sigma = float(sigma)
    if d <= 0.0 or sigma <= 0.0:
        raise ValueError("oracle requires d > 0 and sigma > 0")
    k_max = np.sqrt(2.0 * 55.0) / sigma  # Gaussian tail below 1e-23
    freq = d + abs(delta_eta)
    period = 2.0 * np.pi / max(freq, 1e-3)
    n_panels = max(16, int(np.ceil(3.0 * k_max / period)))
    x, w = np.polynomial.legendre.leggauss(nodes_per_panel)
    edges = np.linspace(0.0, k_max, n_panels + 1)
    half = 0.5 * np.diff(edges)
    mid = 0.5 * (edges[:-1] + edges[1:])
    k = (mid[:, None] + half[:, None] * x[None, :]).ravel()
    wts = (half[:, None] * w[None, :]).ravel()
    f = np.sin(k * d) * np.exp(-0.5 * (k * sigma) ** 2) * np.exp(-1j * k * delta_eta)
    return (4.0 * np.pi / d) * complex(np.sum(f * wts))
