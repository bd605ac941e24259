"""Pure-numpy backend for the hot kernel evaluations.

All functions take flat float64 arrays of equal length (plus scalar
parameters) and return float64/complex128 arrays.  The compiled backend
``cosmoharvest._kern_cy`` implements the identical surface; selection
happens in :mod:`cosmoharvest.backend`.
"""

import numpy as np

from ._dawson_coeffs import ASYM_CUT, PIECES, SMALL_CUT

COMPILED = False

_SQRT2 = float(np.sqrt(2.0))
_SQRT_HALF_PI = float(np.sqrt(np.pi / 2.0))
_TWO_PI = 2.0 * np.pi
_FOUR_PI = 4.0 * np.pi

# Maclaurin coefficients of D(x)/x in powers of x^2: (-2)^k / (2k+1)!!
_N_SERIES = 17
_SERIES = np.empty(_N_SERIES)
_c = 1.0
for _k in range(_N_SERIES):
    _SERIES[_k] = _c
    _c *= -2.0 / (2.0 * _k + 3.0)

# asymptotic coefficients of 2x*D(x) in powers of u = 1/(2x^2): (2k-1)!!
_N_ASYM = 40
_ASYM = np.empty(_N_ASYM)
_c = 1.0
for _k in range(_N_ASYM):
    _ASYM[_k] = _c
    _c *= 2.0 * _k + 1.0

_CHEB = [(lo, hi, np.asarray(c)) for (lo, hi, c) in PIECES]


def dawson(x):
    """Dawson function D(x), vectorized, odd by construction."""
    x = np.asarray(x, dtype=np.float64)
    ax = np.abs(x)
    out = np.empty_like(ax)

    small = ax <= SMALL_CUT
    if small.any():
        t = ax[small]
        out[small] = t * np.polynomial.polynomial.polyval(t * t, _SERIES)

    large = ax > ASYM_CUT
    if large.any():
        t = ax[large]
        u = 0.5 / (t * t)
        out[large] = np.polynomial.polynomial.polyval(u, _ASYM) / (2.0 * t)

    for lo, hi, coeffs in _CHEB:
        m = (ax > lo) & (ax <= hi)
        if m.any():
            t = ax[m]
            u = (2.0 * t - (lo + hi)) / (hi - lo)
            out[m] = np.polynomial.chebyshev.chebval(u, coeffs) / (2.0 * t)

    return np.copysign(out, x)


def aux_i(a):
    """I(a) = sqrt(2) D(a/sqrt2) + i sqrt(pi/2) exp(-a^2/2)."""
    a = np.asarray(a, dtype=np.float64)
    return _SQRT2 * dawson(a / _SQRT2) + 1j * (_SQRT_HALF_PI * np.exp(-0.5 * a * a))


def kernel_cross(delta_eta, d, sigma):
    """Closed-form smeared cross kernel, raw formula (no small-d guard)."""
    ap = (delta_eta + d) / sigma
    am = (delta_eta - d) / sigma
    pref = _TWO_PI / (sigma * d)
    re = pref * _SQRT2 * (dawson(ap / _SQRT2) - dawson(am / _SQRT2))
    im = pref * _SQRT_HALF_PI * (np.exp(-0.5 * ap * ap) - np.exp(-0.5 * am * am))
    return re + 1j * im


def kernel_self(delta_eta, sigma):
    """Coincidence-limit kernel (4 pi / Sigma^2)[1 - a I(a)], a = delta_eta/Sigma."""
    a = delta_eta / sigma
    pref = _FOUR_PI / (sigma * sigma)
    re = pref * (1.0 - a * _SQRT2 * dawson(a / _SQRT2))
    im = pref * (-a) * _SQRT_HALF_PI * np.exp(-0.5 * a * a)
    return re + 1j * im


def kernel_minus(delta_eta, d, sigma):
    """Antisymmetric (commutator) kernel, purely imaginary."""
    ap = (delta_eta + d) / sigma
    am = (delta_eta - d) / sigma
    pref = _TWO_PI / (sigma * d)
    im = pref * _SQRT_HALF_PI * (np.exp(-0.5 * ap * ap) - np.exp(-0.5 * am * am))
    return 1j * im


# fused integrand evaluators: one pass over the quadrature nodes computes
# background, switching, widths, phase, and kernel (the compiled backend
# runs the same arithmetic in a single nogil loop)

KIND_FULL, KIND_MINUS, KIND_PLUS = 0, 1, 2


def _background(hubble, t):
    if hubble == 0.0:
        return np.ones_like(t), t
    em = np.expm1(-hubble * t)
    return 1.0 + em, -em / hubble


def _kernel_kind(delta_eta, d, sigma, kind):
    k = kernel_cross(delta_eta, d, sigma)
    if kind == KIND_MINUS:
        return 1j * k.imag
    if kind == KIND_PLUS:
        return k.real + 0.0j
    return k


# switching envelopes below exp(-55) (~1e-24 of peak) are flushed to zero;
# the skipped mass sits far under the quadrature tolerances
_ENV_CUT = -55.0


def l_integrand(t, tp, hubble, om_i, om_j, tc_i, w_i, tc_j, w_j,
                sig_i, sig_j, prop_i, prop_j, d, self_term):
    """Integrand of the local term L_ij at nodes (t, tp)."""
    ui = (t - tc_i) / w_i
    uj = (tp - tc_j) / w_j
    expo = -(ui * ui + uj * uj)
    live = expo >= _ENV_CUT
    out = np.zeros(t.shape, dtype=np.complex128)
    if not live.any():
        return out
    t, tp, expo = t[live], tp[live], expo[live]
    ia_t, eta_t = _background(hubble, t)
    ia_p, eta_p = _background(hubble, tp)
    de = eta_t - eta_p
    si = sig_i * ia_t if prop_i else sig_i
    sj = sig_j * ia_p if prop_j else sig_j
    sig = np.sqrt(si * si + sj * sj)
    if self_term:
        kern = kernel_self(de, sig)
    else:
        kern = kernel_cross(de, d, sig)
    env = np.exp(expo) * (ia_t * ia_p)
    out[live] = np.exp(-1j * (om_i * t - om_j * tp)) * env * kern
    return out


def m_integrand(t, tp, hubble, om_a, om_b, tc_a, w_a, tc_b, w_b,
                sig_a, sig_b, prop_a, prop_b, d, kind):
    """Symmetrized integrand of the correlation term M at nodes (t, tp)."""
    ua_t = (t - tc_a) / w_a
    ub_t = (t - tc_b) / w_b
    ua_p = (tp - tc_a) / w_a
    ub_p = (tp - tc_b) / w_b
    e1 = -(ua_t * ua_t + ub_p * ub_p)
    e2 = -(ua_p * ua_p + ub_t * ub_t)
    live = (e1 >= _ENV_CUT) | (e2 >= _ENV_CUT)
    out = np.zeros(t.shape, dtype=np.complex128)
    if not live.any():
        return out
    t, tp, e1, e2 = t[live], tp[live], e1[live], e2[live]
    ia_t, eta_t = _background(hubble, t)
    ia_p, eta_p = _background(hubble, tp)
    de = eta_t - eta_p
    sa_t = sig_a * ia_t if prop_a else sig_a
    sb_p = sig_b * ia_p if prop_b else sig_b
    sig_ab = np.sqrt(sa_t * sa_t + sb_p * sb_p)
    k_ab = _kernel_kind(de, d, sig_ab, kind)
    same_width = sig_a == sig_b and prop_a == prop_b
    if same_width:
        k_ba = k_ab
    else:
        sb_t = sig_b * ia_t if prop_b else sig_b
        sa_p = sig_a * ia_p if prop_a else sig_a
        sig_ba = np.sqrt(sb_t * sb_t + sa_p * sa_p)
        k_ba = _kernel_kind(de, d, sig_ba, kind)
    term1 = np.exp(e1) * k_ab
    term2 = np.exp(e2) * k_ba
    if om_a == om_b:
        total = np.exp(1j * om_a * (t + tp)) * (term1 + term2)
    else:
        total = (np.exp(1j * (om_a * t + om_b * tp)) * term1
                 + np.exp(1j * (om_a * tp + om_b * t)) * term2)
    out[live] = total * (ia_t * ia_p)
    return out
