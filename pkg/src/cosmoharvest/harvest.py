"""Assembly of the two-detector observables.

Builds the local noise terms, the time-ordered correlation term and its
communication / field-correlation split, the negativities, and the
interference phase from detectors + cosmology + kernels + quadrature.
All quadratic quantities are reported in units of the coupling squared
(coupling defaults to 1).
"""

import math
from dataclasses import dataclass
from typing import Optional

import numpy as np

from . import backend, kernels
from .cosmology import CosmologyModel, MINKOWSKI
from .detectors import DetectorPair, DetectorParams, SizePolicy, sigma_pair, switching
from .quadrature import (Integrand2D, QuadratureConfig, QuadratureConvergenceError,
                         integrate_ordered_detailed, integrate_square_detailed)

# 1 / (2 (2 pi)^3)
PREFACTOR = 1.0 / (2.0 * (2.0 * np.pi) ** 3)


class HarvestError(RuntimeError):
    """One or more component integrals failed to converge."""

    def __init__(self, message: str, failures: dict):
        super().__init__(message)
        self.failures = failures


@dataclass(frozen=True)
class HarvestResult:
    L_aa: float
    L_bb: float
    M: complex
    M_plus: complex
    M_minus: complex
    N: float
    N_plus: float
    N_minus: float
    phi: float                       # arg(M_plus / M_minus) in (-pi, pi]; nan if undefined
    L_ab: Optional[complex] = None   # filled only when requested for density_matrix


def _background(model: CosmologyModel, t):
    """(1/a(t), eta(t)) sharing one expm1 per array."""
    if model.kind == MINKOWSKI:
        return np.ones_like(t), t
    em = np.expm1(-model.hubble * t)
    return 1.0 + em, -em / model.hubble


def _width_factory(det: DetectorParams):
    if det.policy is SizePolicy.COMOVING:
        return lambda inv_a: det.sigma
    return lambda inv_a: det.sigma * inv_a


def _cross_any(delta_eta, d, sigma):
    """Cross kernel routed around the degenerate-separation floor."""
    if d == 0.0:
        return kernels.kernel_self(delta_eta, sigma)
    floor = kernels.D_FLOOR_RATIO * float(np.max(sigma))
    if d > floor:
        return kernels.kernel_cross_raw(delta_eta, d, sigma)
    mask = d <= kernels.D_FLOOR_RATIO * np.asarray(sigma)
    return np.where(mask,
                    kernels.kernel_cross_smalld(delta_eta, d, sigma),
                    kernels.kernel_cross_raw(delta_eta, d, sigma))


def _minus_any(delta_eta, d, sigma):
    if d == 0.0:
        return 1j * np.imag(kernels.kernel_self(delta_eta, sigma))
    floor = kernels.D_FLOOR_RATIO * float(np.max(sigma))
    if d > floor:
        de, sig = np.broadcast_arrays(np.asarray(delta_eta, float), np.asarray(sigma, float))
        out = backend.impl.kernel_minus(np.ascontiguousarray(de.ravel()), float(d),
                                        np.ascontiguousarray(sig.ravel()))
        return out.reshape(de.shape)
    return 1j * np.imag(_cross_any(delta_eta, d, sigma))


_ROUTERS = {
    "full": _cross_any,
    "minus": _minus_any,
    "plus": lambda de, d, sig: _cross_any(de, d, sig) - _minus_any(de, d, sig),
}


def _max_width(det: DetectorParams, model: CosmologyModel, t_lo: float) -> float:
    """Upper bound on the comoving smearing width over a window [t_lo, inf)."""
    if det.policy is SizePolicy.COMOVING or model.kind == MINKOWSKI:
        return det.sigma
    return det.sigma * math.exp(-model.hubble * t_lo)


def _fused_args(t, tp):
    shape = np.shape(t)
    tt = np.ascontiguousarray(np.asarray(t, np.float64).ravel())
    pp = np.ascontiguousarray(np.asarray(tp, np.float64).ravel())
    return tt, pp, shape


def _l_integrand(pair: DetectorPair, i_det: DetectorParams, j_det: DetectorParams,
                 model: CosmologyModel, cfg: QuadratureConfig) -> Integrand2D:
    om_i, om_j = i_det.gap, j_det.gap
    self_term = i_det is j_det
    d = pair.separation
    w = cfg.trunc_width
    x_lo = i_det.t_center - w * i_det.width
    y_lo = j_det.t_center - w * j_det.width
    sig_bound = math.hypot(_max_width(i_det, model, min(x_lo, y_lo)),
                           _max_width(j_det, model, min(x_lo, y_lo)))
    fused = self_term or d > 4.0 * kernels.D_FLOOR_RATIO * sig_bound
    hub = 0.0 if model.kind == MINKOWSKI else model.hubble
    prop_i = i_det.policy is SizePolicy.PROPER_FIXED
    prop_j = j_det.policy is SizePolicy.PROPER_FIXED

    if fused:
        def f(t, tp):
            tt, pp, shape = _fused_args(t, tp)
            out = backend.impl.l_integrand(
                tt, pp, hub, om_i, om_j, i_det.t_center, i_det.width,
                j_det.t_center, j_det.width, i_det.sigma, j_det.sigma,
                prop_i, prop_j, d, self_term)
            return out.reshape(shape)
    else:
        # separations inside the cancellation floor: route per node through
        # the guarded kernel dispatch
        w_i = _width_factory(i_det)
        w_j = _width_factory(j_det)

        def f(t, tp):
            ia_t, eta_t = _background(model, t)
            ia_p, eta_p = _background(model, tp)
            wi, wj = w_i(ia_t), w_j(ia_p)
            kern = _cross_any(eta_t - eta_p, d, np.sqrt(wi * wi + wj * wj))
            envelope = switching(i_det, t) * switching(j_det, tp) * (ia_t * ia_p)
            return np.exp(-1j * (om_i * t - om_j * tp)) * envelope * kern

    return Integrand2D(
        f,
        x_center=i_det.t_center, x_halfwidth=w * i_det.width,
        y_center=j_det.t_center, y_halfwidth=w * j_det.width,
        x_osc=abs(om_i), y_osc=abs(om_j),
        feature_scale=float(sigma_pair(i_det, j_det, model,
                                       i_det.t_center, j_det.t_center)),
    )


_KIND_CODE = {"full": 0, "minus": 1, "plus": 2}


def _m_integrand(pair: DetectorPair, model: CosmologyModel,
                 cfg: QuadratureConfig, kind: str) -> Integrand2D:
    det_a, det_b = pair.a, pair.b
    om_a, om_b = det_a.gap, det_b.gap
    d = pair.separation
    w = cfg.trunc_width
    lo = min(det_a.t_center - w * det_a.width, det_b.t_center - w * det_b.width)
    hi = max(det_a.t_center + w * det_a.width, det_b.t_center + w * det_b.width)
    sig_bound = math.hypot(_max_width(det_a, model, lo), _max_width(det_b, model, lo))
    fused = d > 4.0 * kernels.D_FLOOR_RATIO * sig_bound
    hub = 0.0 if model.kind == MINKOWSKI else model.hubble

    if fused:
        code = _KIND_CODE[kind]
        prop_a = det_a.policy is SizePolicy.PROPER_FIXED
        prop_b = det_b.policy is SizePolicy.PROPER_FIXED

        def f(t, tp):
            tt, pp, shape = _fused_args(t, tp)
            out = backend.impl.m_integrand(
                tt, pp, hub, om_a, om_b, det_a.t_center, det_a.width,
                det_b.t_center, det_b.width, det_a.sigma, det_b.sigma,
                prop_a, prop_b, d, code)
            return out.reshape(shape)
    else:
        router = _ROUTERS[kind]
        w_a = _width_factory(det_a)
        w_b = _width_factory(det_b)
        same_width = det_a.sigma == det_b.sigma and det_a.policy is det_b.policy
        same_gap = om_a == om_b

        def f(t, tp):
            ia_t, eta_t = _background(model, t)
            ia_p, eta_p = _background(model, tp)
            de = eta_t - eta_p
            wa_t, wb_t = w_a(ia_t), w_b(ia_t)
            wa_p, wb_p = w_a(ia_p), w_b(ia_p)
            k_ab = router(de, d, np.sqrt(wa_t * wa_t + wb_p * wb_p))
            if same_width:
                k_ba = k_ab
            else:
                k_ba = router(de, d, np.sqrt(wb_t * wb_t + wa_p * wa_p))
            term1 = switching(det_a, t) * switching(det_b, tp) * k_ab
            term2 = switching(det_a, tp) * switching(det_b, t) * k_ba
            if same_gap:
                total = np.exp(1j * om_a * (t + tp)) * (term1 + term2)
            else:
                total = (np.exp(1j * (om_a * t + om_b * tp)) * term1
                         + np.exp(1j * (om_a * tp + om_b * t)) * term2)
            return total * (ia_t * ia_p)

    center, half = 0.5 * (lo + hi), 0.5 * (hi - lo)
    return Integrand2D(
        f,
        x_center=center, x_halfwidth=half,
        y_center=center, y_halfwidth=half,
        x_osc=max(abs(om_a), abs(om_b)), y_osc=max(abs(om_a), abs(om_b)),
        feature_scale=float(sigma_pair(det_a, det_b, model,
                                       det_a.t_center, det_b.t_center)),
    )


def local_term(pair: DetectorPair, which: str, model: CosmologyModel,
               cfg: Optional[QuadratureConfig] = None) -> complex:
    """Local/noise term L_ij in units of coupling^2.

    which = "A" or "B" gives the diagonal terms; which = "AB" gives the
    off-diagonal complex entry used only by the density matrix.

    The diagonal integrand obeys f(t', t) = conj f(t, t'), so the full
    window integral equals twice the real part of the time-ordered one;
    evaluating it that way returns an exactly real diagonal term instead
    of leaving an imaginary residue at the quadrature noise floor.
    """
    cfg = cfg or QuadratureConfig()
    dets = {"A": (pair.a, pair.a), "B": (pair.b, pair.b), "AB": (pair.a, pair.b)}
    try:
        i_det, j_det = dets[which]
    except KeyError:
        raise ValueError(f"which must be one of A, B, AB, got {which!r}") from None
    integrand = _l_integrand(pair, i_det, j_det, model, cfg)
    if which == "AB":
        out = integrate_square_detailed(integrand, cfg)
        value = out.value
    else:
        out = integrate_ordered_detailed(integrand, cfg)
        value = complex(2.0 * out.value.real)
    if not out.converged:
        raise QuadratureConvergenceError(f"L_{which} did not converge", out)
    return pair.coupling ** 2 * PREFACTOR * value


def _correlation(pair, model, cfg, kind) -> complex:
    cfg = cfg or QuadratureConfig()
    out = integrate_ordered_detailed(_m_integrand(pair, model, cfg, kind), cfg)
    if not out.converged:
        raise QuadratureConvergenceError(f"M ({kind}) did not converge", out)
    return -pair.coupling ** 2 * PREFACTOR * out.value


def correlation_m(pair: DetectorPair, model: CosmologyModel,
                  cfg: Optional[QuadratureConfig] = None) -> complex:
    """Time-ordered correlation term M (nested-integral form)."""
    return _correlation(pair, model, cfg, "full")


def correlation_m_minus(pair: DetectorPair, model: CosmologyModel,
                        cfg: Optional[QuadratureConfig] = None) -> complex:
    """Communication part of M, built from the commutator kernel."""
    return _correlation(pair, model, cfg, "minus")


def correlation_m_plus(pair: DetectorPair, model: CosmologyModel,
                       cfg: Optional[QuadratureConfig] = None) -> complex:
    """Field-correlation part of M, built from the symmetric kernel."""
    return _correlation(pair, model, cfg, "plus")


def correlation_m_plus_square(pair: DetectorPair, model: CosmologyModel,
                              cfg: Optional[QuadratureConfig] = None) -> complex:
    """M_plus computed on the full square (no time ordering).

    The symmetric kernel makes the time-ordered propagator independent of
    the ordering, so the same number is obtained by integrating the plain
    (unsymmetrized) integrand over the whole window.  Kept as the
    cross-check route for the ordered-domain implementation.
    """
    cfg = cfg or QuadratureConfig()
    det_a, det_b = pair.a, pair.b
    d = pair.separation
    w_a = _width_factory(det_a)
    w_b = _width_factory(det_b)

    def f(t, tp):
        ia_t, eta_t = _background(model, t)
        ia_p, eta_p = _background(model, tp)
        sig = np.sqrt(w_a(ia_t) ** 2 + w_b(ia_p) ** 2)
        kern = _ROUTERS["plus"](eta_t - eta_p, d, sig)
        env = switching(det_a, t) * switching(det_b, tp) * (ia_t * ia_p)
        return np.exp(1j * (det_a.gap * t + det_b.gap * tp)) * env * kern

    w = cfg.trunc_width
    f2d = Integrand2D(
        f,
        x_center=det_a.t_center, x_halfwidth=w * det_a.width,
        y_center=det_b.t_center, y_halfwidth=w * det_b.width,
        x_osc=abs(det_a.gap), y_osc=abs(det_b.gap),
        feature_scale=float(sigma_pair(det_a, det_b, model,
                                       det_a.t_center, det_b.t_center)),
    )
    out = integrate_square_detailed(f2d, cfg)
    if not out.converged:
        raise QuadratureConvergenceError("M_plus (square route) did not converge", out)
    return -pair.coupling ** 2 * PREFACTOR * out.value


def negativity_from_parts(l_aa: float, l_bb: float, m: complex) -> float:
    """N = max(0, V), V = sqrt(|M|^2 + ((L_aa-L_bb)/2)^2) - (L_aa+L_bb)/2."""
    half_diff = 0.5 * (l_aa - l_bb)
    v = math.sqrt(abs(m) ** 2 + half_diff * half_diff) - 0.5 * (l_aa + l_bb)
    return max(0.0, v)


def evaluate(pair: DetectorPair, model: CosmologyModel,
             cfg: Optional[QuadratureConfig] = None,
             include_l_ab: bool = False) -> HarvestResult:
    """Full evaluation of one parameter point.

    Computes L_aa, L_bb, M, M_plus, M_minus, the three negativities and
    the relative phase.  L_ab is integrated only on request (the
    negativity never uses it).  Component failures are aggregated and
    reported together.
    """
    cfg = cfg or QuadratureConfig()
    failures = {}
    values = {}

    def run(label, fn):
        try:
            values[label] = fn()
        except QuadratureConvergenceError as exc:
            failures[label] = exc
            values[label] = exc.outcome.value if exc.outcome is not None else np.nan

    run("L_aa", lambda: local_term(pair, "A", model, cfg))
    run("L_bb", lambda: local_term(pair, "B", model, cfg))
    run("M", lambda: correlation_m(pair, model, cfg))
    run("M_plus", lambda: correlation_m_plus(pair, model, cfg))
    run("M_minus", lambda: correlation_m_minus(pair, model, cfg))
    if include_l_ab:
        run("L_ab", lambda: local_term(pair, "AB", model, cfg))

    if failures:
        raise HarvestError(
            "quadrature failed for " + ", ".join(sorted(failures)), failures)

    l_aa = values["L_aa"].real
    l_bb = values["L_bb"].real
    m = values["M"]
    m_plus = values["M_plus"]
    m_minus = values["M_minus"]

    phi_floor = 10.0 * pair.coupling ** 2 * PREFACTOR * cfg.abs_tol
    if abs(m_plus) <= phi_floor or abs(m_minus) <= phi_floor:
        phi = math.nan  # undefined phase, not 0: one component vanished
    else:
        phi = float(np.angle(m_plus / m_minus))

    return HarvestResult(
        L_aa=l_aa, L_bb=l_bb,
        M=m, M_plus=m_plus, M_minus=m_minus,
        N=negativity_from_parts(l_aa, l_bb, m),
        N_plus=negativity_from_parts(l_aa, l_bb, m_plus),
        N_minus=negativity_from_parts(l_aa, l_bb, m_minus),
        phi=phi,
        L_ab=values.get("L_ab"),
    )


def _exact_complement(l_aa: float, l_bb: float):
    """(r, resid) such that numpy sums [r, l_bb, l_aa, resid] to exactly 1.0.

    Prefers resid == 0 (the physical value), walking r by ulps; when the
    double rounding makes that unattainable, the remainder (exact by
    Sterbenz for perturbative l's) is returned for the empty diagonal slot.
    """
    def tr(r_, resid_):
        return float(np.sum(np.array([r_, l_bb, l_aa, resid_])))

    r = 1.0 - l_aa - l_bb
    if not np.isfinite(r):
        return r, 0.0
    t = tr(r, 0.0)
    if t != 1.0:
        r += 1.0 - t
        t = tr(r, 0.0)
    for _ in range(4):
        if t == 1.0:
            return r, 0.0
        r = float(np.nextafter(r, np.inf if t < 1.0 else -np.inf))
        t = tr(r, 0.0)
    if t == 1.0:
        return r, 0.0
    # no exact hit with a zero slot: compensate in the empty entry
    resid = (1.0 - (r + l_bb)) - l_aa
    for _ in range(8):
        t = tr(r, resid)
        if t == 1.0:
            break
        resid = float(np.nextafter(resid, np.inf if t < 1.0 else -np.inf))
    return r, resid


def density_matrix(result: HarvestResult) -> np.ndarray:
    """Leading-order joint density matrix in the basis gg, ge, eg, ee.

    Hermitian by construction (L_ba is the conjugate of L_ab) and with
    trace exactly 1: the doubly-excited diagonal entry, zero at this
    perturbative order, absorbs the last-ulp rounding remainder when the
    three populated diagonal entries cannot sum to 1.0 on their own.
    Requires L_ab, i.e. evaluate(..., include_l_ab=True).
    """
    if result.L_ab is None:
        raise ValueError("density_matrix needs L_ab; evaluate with include_l_ab=True")
    rho = np.zeros((4, 4), dtype=np.complex128)
    r, resid = _exact_complement(result.L_aa, result.L_bb)
    rho[0, 0] = r
    rho[1, 1] = result.L_bb
    rho[2, 2] = result.L_aa
    rho[3, 3] = resid
    rho[2, 1] = result.L_ab
    rho[1, 2] = np.conj(result.L_ab)
    rho[3, 0] = result.M
    rho[0, 3] = np.conj(result.M)
    return rho


def partial_transpose_a(rho: np.ndarray) -> np.ndarray:
    """Partial transpose over the first detector's index."""
    out = rho.reshape(2, 2, 2, 2).transpose(2, 1, 0, 3).reshape(4, 4)
    return np.ascontiguousarray(out)
