import numpy as np
import pytest

from cosmoharvest import (DetectorPair, DetectorParams, QuadratureConfig,
                          SizePolicy, de_sitter, minkowski)


def make_pair(omega=4.0, sigma=0.1, d=2.0, tb=0.0, ta=0.0, width=1.0,
              policy=SizePolicy.COMOVING, coupling=1.0):
    """Standard two-detector setup: A at the origin, B displaced along x."""
    det_a = DetectorParams(gap=omega, t_center=ta, width=width, sigma=sigma,
                           position=(0.0, 0.0, 0.0), policy=policy)
    det_b = DetectorParams(gap=omega, t_center=tb, width=width, sigma=sigma,
                           position=(d, 0.0, 0.0), policy=policy)
    return DetectorPair(det_a, det_b, coupling=coupling)


def model_for(hubble_t):
    return minkowski() if hubble_t == 0.0 else de_sitter(hubble_t)


@pytest.fixture
def cfg():
    return QuadratureConfig()


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)
