import math

import numpy as np
import pytest
from numpy.polynomial import Polynomial

from sector_rkhs.errors import DomainError
from sector_rkhs.heat_kernel import profile_W
from sector_rkhs.transform import (
    BoundarySignal,
    forward_L,
    forward_T,
    iterated_trace_check,
    laplace_check,
    laplace_limit_check,
    scaled_forward_L,
    trace_limit_check,
)


def test_constant_gives_profile():
    for a, x, t in [(1.0, 1.0, 1.0), (1.5, 0.4, 2.0), (0.5, 2.0, 0.7)]:
        assert forward_T(a, t, 1.0, x, rtol=1e-12) == pytest.approx(profile_W(a, x, t), rel=1e-9)
    assert forward_T(1.0, 1.0, 1.0, 1.0) == pytest.approx(math.erfc(0.5), rel=1e-9)


def test_zero_signal():
    assert forward_T(1.2, 1.0, 0.0, 0.5) == 0.0
    assert forward_L(1.2, 1.0, BoundarySignal.constant(0.0, 1.0), 0.5) == 0.0


def test_forward_L_alpha2_against_direct_quadrature():
    from scipy.integrate import quad

    f = lambda tau: (1.0 - tau) ** -2.0 * math.exp(-1.0 / (1.0 - tau)) * tau**2 if tau < 1.0 else 0.0
    ref = quad(f, 0.0, 1.0, epsabs=0.0, epsrel=1e-13, limit=200)[0]
    assert forward_L(2.0, 1.0, 1.0, 1.0 + 0j, rtol=1e-12) == pytest.approx(ref, rel=1e-8)


def test_complex_route_matches_real_route():
    g = Polynomial([0.3, 1.0, -0.5])
    a = forward_L(1.5, 1.0, g, 0.9, rtol=1e-12)
    b = forward_L(1.5, 1.0, g, 0.9 + 0j, rtol=1e-12)
    assert complex(b) == pytest.approx(a, rel=1e-9)


def test_scaled_route_matches_pointwise():
    alpha, t = 1.5, 1.0
    sig = BoundarySignal.polynomial([1.0, 0.5], t)
    z = np.array([0.5 + 0.1j, 1.2 - 0.4j, 2.0 + 0j])
    from sector_rkhs.heat_kernel import zeta

    scaled = scaled_forward_L(alpha, t, sig, z)
    direct = np.array([forward_L(alpha, t, sig, zi, rtol=1e-12) for zi in z])
    np.testing.assert_allclose(scaled * np.exp(-alpha**2 * zeta(alpha, z) / (4 * t)), direct, rtol=1e-9)


def test_table_signal_interpolates():
    tau = np.linspace(0.0, 1.0, 101)
    sig = BoundarySignal.from_samples(tau, np.ones_like(tau))
    assert forward_T(1.0, 1.0, sig, 1.0) == pytest.approx(math.erfc(0.5), rel=1e-8)
    with pytest.raises(ValueError):
        BoundarySignal.from_samples(tau[::-1], tau)


def test_trace_limits():
    assert trace_limit_check(1.5, 1.0, BoundarySignal.polynomial([0.5, 1.0], 1.0)).passed
    assert iterated_trace_check(1.0, [0.5, 1.0], BoundarySignal.monomial(1, 1.0), 1).passed
    assert iterated_trace_check(1.0, [1.0], BoundarySignal.constant(2.0, 1.0), 1).passed


def test_derivative_gate():
    sig = BoundarySignal.from_function(np.abs, 1.0, smoothness="continuous")
    with pytest.raises(DomainError):
        sig.derivative(1)


def test_laplace_identity():
    for a in (1.0, 1.5, 2.0):
        assert laplace_check(a, 1.0, 2.0).passed
    assert laplace_limit_check(1.5, 1.0).passed


def test_weighted_norm():
    assert BoundarySignal.monomial(1, 1.0).weighted_norm_sq(2.0) == pytest.approx(0.2, rel=1e-12)


def test_sector_required_for_complex_points():
    with pytest.raises(DomainError):
        forward_L(3.0, 1.0, 1.0, 1.0 + 0.1j)
