"""Compiled and pure backends must agree everywhere they both exist."""

import numpy as np
import pytest

from cosmoharvest import _kern_np, backend

try:
    from cosmoharvest import _kern_cy
except ImportError:
    _kern_cy = None

needs_compiled = pytest.mark.skipif(_kern_cy is None,
                                    reason="compiled backend not built")


@needs_compiled
def test_dawson_agreement(rng):
    x = np.ascontiguousarray(rng.uniform(-80.0, 80.0, 50_000))
    a = _kern_cy.dawson(x)
    b = _kern_np.dawson(x)
    assert np.max(np.abs(a - b)) < 5e-16


@needs_compiled
def test_kernel_agreement(rng):
    # ulp-level Dawson differences are amplified by the kernel prefactors,
    # so agreement is judged against the prefactor scale
    de = np.ascontiguousarray(rng.uniform(-8.0, 8.0, 20_000))
    sig = np.ascontiguousarray(rng.uniform(0.05, 2.0, 20_000))
    for d in (0.3, 2.0, 5.0):
        scale = 2.0 * np.pi / (sig * d) + np.abs(_kern_np.kernel_cross(de, d, sig))
        a = _kern_cy.kernel_cross(de, d, sig)
        b = _kern_np.kernel_cross(de, d, sig)
        assert np.max(np.abs(a - b) / scale) < 1e-13
        a = _kern_cy.kernel_minus(de, d, sig)
        b = _kern_np.kernel_minus(de, d, sig)
        assert np.max(np.abs(a - b) / scale) < 1e-13
    scale = 4.0 * np.pi / sig ** 2
    a = _kern_cy.kernel_self(de, sig)
    b = _kern_np.kernel_self(de, sig)
    assert np.max(np.abs(a - b) / scale) < 1e-13


@needs_compiled
def test_aux_i_agreement(rng):
    a = np.ascontiguousarray(rng.uniform(-20.0, 20.0, 10_000))
    assert np.max(np.abs(_kern_cy.aux_i(a) - _kern_np.aux_i(a))) < 1e-15


@needs_compiled
@pytest.mark.parametrize("kind", [0, 1, 2])
def test_fused_m_integrand_agreement(rng, kind):
    n = 30_000
    t = np.ascontiguousarray(rng.uniform(-7.0, 9.0, n))
    tp = np.ascontiguousarray(rng.uniform(-7.0, 9.0, n))
    for hubble, prop in ((0.0, False), (0.3, False), (0.5, True)):
        args = (t, tp, hubble, 6.0, 6.0, 0.0, 1.0, 2.0, 1.0, 0.4, 0.4,
                prop, prop, 2.0, kind)
        a = _kern_cy.m_integrand(*args)
        b = _kern_np.m_integrand(*args)
        scale = np.max(np.abs(b)) + 1e-300
        assert np.max(np.abs(a - b)) < 1e-12 * scale
        # screening kills the same nodes in both backends
        assert np.array_equal(a == 0.0, b == 0.0)


@needs_compiled
def test_fused_l_integrand_agreement(rng):
    n = 30_000
    t = np.ascontiguousarray(rng.uniform(-7.0, 7.0, n))
    tp = np.ascontiguousarray(rng.uniform(-7.0, 7.0, n))
    for self_term in (True, False):
        for hubble, prop in ((0.0, False), (0.2, True)):
            args = (t, tp, hubble, 4.0, 4.0, 0.0, 1.0, 0.5, 1.0, 0.3, 0.3,
                    prop, prop, 1.5, self_term)
            a = _kern_cy.l_integrand(*args)
            b = _kern_np.l_integrand(*args)
            scale = np.max(np.abs(b)) + 1e-300
            assert np.max(np.abs(a - b)) < 1e-12 * scale


@needs_compiled
def test_fused_unequal_gap_agreement(rng):
    n = 20_000
    t = np.ascontiguousarray(rng.uniform(-7.0, 7.0, n))
    tp = np.ascontiguousarray(rng.uniform(-7.0, 7.0, n))
    args = (t, tp, 0.1, 4.0, 5.5, 0.0, 1.0, 1.0, 1.2, 0.3, 0.5,
            False, True, 2.0, 0)
    a = _kern_cy.m_integrand(*args)
    b = _kern_np.m_integrand(*args)
    assert np.max(np.abs(a - b)) < 1e-12 * (np.max(np.abs(b)) + 1e-300)


@needs_compiled
def test_full_point_agreement(monkeypatch, cfg):
    from conftest import make_pair

    from cosmoharvest import de_sitter, evaluate

    pair = make_pair(omega=6.0, sigma=0.1, d=2.0, tb=2.0)
    model = de_sitter(0.2)
    monkeypatch.setattr(backend, "impl", _kern_np)
    pure = evaluate(pair, model, cfg)
    monkeypatch.setattr(backend, "impl", _kern_cy)
    fast = evaluate(pair, model, cfg)
    # agreement is limited by the quadrature roundoff floor (the adaptive
    # refinement takes backend-dependent paths), not by kernel precision
    assert abs(fast.M - pure.M) <= 1e-6 * abs(pure.M) + 1e-15
    assert abs(fast.L_aa - pure.L_aa) <= 1e-6 * pure.L_aa + 1e-15
    assert abs(fast.N - pure.N) <= 1e-6 * max(pure.N, pure.L_aa) + 1e-15


def test_backend_flags():
    assert _kern_np.COMPILED is False
    if _kern_cy is not None:
        assert _kern_cy.COMPILED is True
    assert backend.backend_name() in ("pure", "compiled")
