# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled backend for the hot kernel evaluations.

Mirrors cosmoharvest._kern_np exactly (same regimes, same frozen
coefficients); the scalar loops run without the GIL so sweep workers can
overlap.
"""

import numpy as np

cimport cython
from libc.math cimport M_PI, copysign, cos, exp, expm1, fabs, sin, sqrt

from ._dawson_coeffs import ASYM_CUT as _PY_ASYM_CUT
from ._dawson_coeffs import PIECES as _PY_PIECES
from ._dawson_coeffs import SMALL_CUT as _PY_SMALL_CUT

COMPILED = True

cdef double SMALL_CUT = _PY_SMALL_CUT
cdef double ASYM_CUT = _PY_ASYM_CUT
cdef double SQRT2 = sqrt(2.0)
cdef double INV_SQRT2 = 1.0 / sqrt(2.0)
cdef double SQRT_HALF_PI = sqrt(0.5 * M_PI)
cdef double TWO_PI = 2.0 * M_PI
cdef double FOUR_PI = 4.0 * M_PI

DEF N_SERIES = 17
DEF N_ASYM = 40
DEF MAX_CHEB = 32
DEF N_PIECES = 3

cdef double SERIES[N_SERIES]
cdef double ASYM[N_ASYM]
cdef double PIECE_LO[N_PIECES]
cdef double PIECE_HI[N_PIECES]
cdef double CHEB[N_PIECES][MAX_CHEB]
cdef int CHEB_N[N_PIECES]


def _init_tables():
    cdef int k, p, j
    c = 1.0
    for k in range(N_SERIES):
        SERIES[k] = c
        c *= -2.0 / (2.0 * k + 3.0)
    c = 1.0
    for k in range(N_ASYM):
        ASYM[k] = c
        c *= 2.0 * k + 1.0
    if len(_PY_PIECES) != N_PIECES:
        raise RuntimeError("coefficient table layout changed; rebuild extension")
    for p, (lo, hi, coeffs) in enumerate(_PY_PIECES):
        if len(coeffs) > MAX_CHEB:
            raise RuntimeError("Chebyshev piece larger than MAX_CHEB")
        PIECE_LO[p] = lo
        PIECE_HI[p] = hi
        CHEB_N[p] = len(coeffs)
        for j in range(len(coeffs)):
            CHEB[p][j] = coeffs[j]


_init_tables()


cdef inline double _dawson1(double x) noexcept nogil:
    cdef double ax = fabs(x)
    cdef double t, u, val, b0, b1, tmp
    cdef int k, p
    if ax <= SMALL_CUT:
        t = ax * ax
        val = SERIES[N_SERIES - 1]
        for k in range(N_SERIES - 2, -1, -1):
            val = val * t + SERIES[k]
        val *= ax
    elif ax > ASYM_CUT:
        u = 0.5 / (ax * ax)
        val = ASYM[N_ASYM - 1]
        for k in range(N_ASYM - 2, -1, -1):
            val = val * u + ASYM[k]
        val /= 2.0 * ax
    else:
        p = 0
        while p < N_PIECES - 1 and ax > PIECE_HI[p]:
            p += 1
        u = (2.0 * ax - (PIECE_LO[p] + PIECE_HI[p])) / (PIECE_HI[p] - PIECE_LO[p])
        b0 = 0.0
        b1 = 0.0
        for k in range(CHEB_N[p] - 1, -1, -1):
            tmp = 2.0 * u * b0 - b1 + CHEB[p][k]
            b1 = b0
            b0 = tmp
        val = (b0 - u * b1) / (2.0 * ax)
    return copysign(val, x)


def dawson(double[::1] x):
    cdef Py_ssize_t n = x.shape[0]
    out_arr = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = _dawson1(x[i])
    return out_arr


def aux_i(double[::1] a):
    cdef Py_ssize_t n = a.shape[0]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i
    with nogil:
        for i in range(n):
            out[i] = (SQRT2 * _dawson1(a[i] * INV_SQRT2)
                      + 1j * (SQRT_HALF_PI * exp(-0.5 * a[i] * a[i])))
    return out_arr


def kernel_cross(double[::1] delta_eta, double d, double[::1] sigma):
    cdef Py_ssize_t n = delta_eta.shape[0]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double ap, am, pref, re, im
    with nogil:
        for i in range(n):
            ap = (delta_eta[i] + d) / sigma[i]
            am = (delta_eta[i] - d) / sigma[i]
            pref = TWO_PI / (sigma[i] * d)
            re = pref * SQRT2 * (_dawson1(ap * INV_SQRT2) - _dawson1(am * INV_SQRT2))
            im = pref * SQRT_HALF_PI * (exp(-0.5 * ap * ap) - exp(-0.5 * am * am))
            out[i] = re + 1j * im
    return out_arr


def kernel_self(double[::1] delta_eta, double[::1] sigma):
    cdef Py_ssize_t n = delta_eta.shape[0]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double a, pref
    with nogil:
        for i in range(n):
            a = delta_eta[i] / sigma[i]
            pref = FOUR_PI / (sigma[i] * sigma[i])
            out[i] = (pref * (1.0 - a * SQRT2 * _dawson1(a * INV_SQRT2))
                      - 1j * (pref * a * SQRT_HALF_PI * exp(-0.5 * a * a)))
    return out_arr


def kernel_minus(double[::1] delta_eta, double d, double[::1] sigma):
    cdef Py_ssize_t n = delta_eta.shape[0]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double ap, am
    with nogil:
        for i in range(n):
            ap = (delta_eta[i] + d) / sigma[i]
            am = (delta_eta[i] - d) / sigma[i]
            out[i] = 1j * (TWO_PI / (sigma[i] * d) * SQRT_HALF_PI
                           * (exp(-0.5 * ap * ap) - exp(-0.5 * am * am)))
    return out_arr


# fused integrand evaluators (same surface as cosmoharvest._kern_np)

KIND_FULL, KIND_MINUS, KIND_PLUS = 0, 1, 2

# switching envelopes below exp(-55) are flushed to zero (same cut as the
# pure backend); the skipped mass sits far under the quadrature tolerances
cdef double ENV_CUT = -55.0


cdef inline double complex _cross_c(double de, double d, double sig, int kind) noexcept nogil:
    cdef double ap = (de + d) / sig
    cdef double am = (de - d) / sig
    cdef double pref = TWO_PI / (sig * d)
    cdef double re = 0.0, im = 0.0
    if kind != 1:  # full or plus need the Dawson part
        re = pref * SQRT2 * (_dawson1(ap * INV_SQRT2) - _dawson1(am * INV_SQRT2))
    if kind != 2:  # full or minus need the Gaussian part
        im = pref * SQRT_HALF_PI * (exp(-0.5 * ap * ap) - exp(-0.5 * am * am))
    return re + 1j * im


cdef inline double complex _self_c(double de, double sig) noexcept nogil:
    cdef double a = de / sig
    cdef double pref = FOUR_PI / (sig * sig)
    return (pref * (1.0 - a * SQRT2 * _dawson1(a * INV_SQRT2))
            - 1j * (pref * a * SQRT_HALF_PI * exp(-0.5 * a * a)))


cdef inline double complex _cis(double x) noexcept nogil:
    return cos(x) + 1j * sin(x)


def l_integrand(double[::1] t, double[::1] tp, double hubble,
                double om_i, double om_j, double tc_i, double w_i,
                double tc_j, double w_j, double sig_i, double sig_j,
                bint prop_i, bint prop_j, double d, bint self_term):
    """Integrand of the local term L_ij at nodes (t, tp)."""
    cdef Py_ssize_t n = t.shape[0]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i
    cdef double em, ia_t, ia_p, eta_t, eta_p, de, si, sj, sig, ui, uj, expo, env
    cdef double complex kern
    with nogil:
        for i in range(n):
            ui = (t[i] - tc_i) / w_i
            uj = (tp[i] - tc_j) / w_j
            expo = -(ui * ui + uj * uj)
            if expo < ENV_CUT:
                out[i] = 0.0
                continue
            if hubble == 0.0:
                ia_t = 1.0; eta_t = t[i]
                ia_p = 1.0; eta_p = tp[i]
            else:
                em = expm1(-hubble * t[i]); ia_t = 1.0 + em; eta_t = -em / hubble
                em = expm1(-hubble * tp[i]); ia_p = 1.0 + em; eta_p = -em / hubble
            de = eta_t - eta_p
            si = sig_i * ia_t if prop_i else sig_i
            sj = sig_j * ia_p if prop_j else sig_j
            sig = sqrt(si * si + sj * sj)
            if self_term:
                kern = _self_c(de, sig)
            else:
                kern = _cross_c(de, d, sig, 0)  # full kernel
            env = exp(expo) * (ia_t * ia_p)
            out[i] = _cis(-(om_i * t[i] - om_j * tp[i])) * env * kern
    return out_arr


def m_integrand(double[::1] t, double[::1] tp, double hubble,
                double om_a, double om_b, double tc_a, double w_a,
                double tc_b, double w_b, double sig_a, double sig_b,
                bint prop_a, bint prop_b, double d, int kind):
    """Symmetrized integrand of the correlation term M at nodes (t, tp)."""
    cdef Py_ssize_t n = t.shape[0]
    out_arr = np.empty(n, dtype=np.complex128)
    cdef double complex[::1] out = out_arr
    cdef Py_ssize_t i
    cdef bint same_width = (sig_a == sig_b) and (prop_a == prop_b)
    cdef bint same_gap = om_a == om_b
    cdef double em, ia_t, ia_p, eta_t, eta_p, de
    cdef double sa_t, sb_t, sa_p, sb_p, sig_ab, sig_ba
    cdef double ua_t, ub_t, ua_p, ub_p, e1, e2
    cdef double complex k_ab, k_ba, term1, term2, total
    with nogil:
        for i in range(n):
            ua_t = (t[i] - tc_a) / w_a
            ub_t = (t[i] - tc_b) / w_b
            ua_p = (tp[i] - tc_a) / w_a
            ub_p = (tp[i] - tc_b) / w_b
            e1 = -(ua_t * ua_t + ub_p * ub_p)
            e2 = -(ua_p * ua_p + ub_t * ub_t)
            if e1 < ENV_CUT and e2 < ENV_CUT:
                out[i] = 0.0
                continue
            if hubble == 0.0:
                ia_t = 1.0; eta_t = t[i]
                ia_p = 1.0; eta_p = tp[i]
            else:
                em = expm1(-hubble * t[i]); ia_t = 1.0 + em; eta_t = -em / hubble
                em = expm1(-hubble * tp[i]); ia_p = 1.0 + em; eta_p = -em / hubble
            de = eta_t - eta_p
            sa_t = sig_a * ia_t if prop_a else sig_a
            sb_p = sig_b * ia_p if prop_b else sig_b
            sig_ab = sqrt(sa_t * sa_t + sb_p * sb_p)
            k_ab = _cross_c(de, d, sig_ab, kind)
            if same_width:
                k_ba = k_ab
            else:
                sb_t = sig_b * ia_t if prop_b else sig_b
                sa_p = sig_a * ia_p if prop_a else sig_a
                sig_ba = sqrt(sb_t * sb_t + sa_p * sa_p)
                k_ba = _cross_c(de, d, sig_ba, kind)
            term1 = exp(e1) * k_ab
            term2 = exp(e2) * k_ba
            if same_gap:
                total = _cis(om_a * (t[i] + tp[i])) * (term1 + term2)
            else:
                total = (_cis(om_a * t[i] + om_b * tp[i]) * term1
                         + _cis(om_a * tp[i] + om_b * t[i]) * term2)
            out[i] = total * (ia_t * ia_p)
    return out_arr
