import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from sector_rkhs.errors import DomainError
from sector_rkhs.heat_kernel import (
    AlphaParam,
    apply_D,
    in_sector,
    kernel_bound_margin,
    kernel_K,
    kernel_pde_order,
    profile_W,
)


def test_kernel_spot_value():
    assert kernel_K(2.0, 1.0, 1.0) == pytest.approx(math.exp(-1.0), rel=1e-14)


@given(st.floats(0.2, 2.0), st.floats(1e-3, 50.0), st.floats(1e-3, 50.0))
@settings(max_examples=100, deadline=None)
def test_kernel_positive_on_half_line(alpha, x, t):
    assert kernel_K(alpha, x, t) >= 0.0


def test_kernel_large_time_rate():
    vals = [kernel_K(1.0, 1.0, t) for t in (1e2, 1e4, 1e6)]
    rates = [math.log(vals[i] / vals[i + 1]) / math.log(100.0) for i in range(2)]
    assert rates == pytest.approx([1.5, 1.5], abs=1e-2)


def test_kernel_complex_matches_real_on_axis():
    assert complex(kernel_K(1.5, 0.7 + 0j, 0.3)) == pytest.approx(kernel_K(1.5, 0.7, 0.3), rel=1e-13)


def test_profile_values():
    assert profile_W(1.0, 1.0, 1.0) == pytest.approx(math.erfc(0.5), rel=1e-12)
    for x in (0.1, 1.0, 3.0):
        assert profile_W(2.0, x, 0.7) == pytest.approx(math.exp(-x / 0.7), rel=1e-12)
    assert profile_W(1.5, 1e-10, 1.0) == pytest.approx(1.0, abs=1e-6)


def test_apply_D_polynomials():
    assert apply_D(1.3, lambda x: x, 1.0, 1e-2) == pytest.approx(0.0, abs=1e-9)
    assert apply_D(1.0, lambda x: x * x, 1.0, 1e-2) == pytest.approx(2.0, rel=1e-8)


def test_apply_D_rejects_large_step():
    with pytest.raises(DomainError):
        apply_D(1.0, lambda x: x, 0.1, 0.1)


@pytest.mark.parametrize("alpha", [0.5, 1.0, 1.5, 2.0])
def test_kernel_pde_second_order(alpha):
    _, order = kernel_pde_order(alpha, 1.0, 1.0)
    assert order >= 1.9


def test_bound_margin_limits():
    z = 0.8 + 0.3j
    big = [kernel_bound_margin(1.5, z, t) for t in (10.0, 1e3, 1e5)]
    assert big[0] > big[1] > big[2]
    assert kernel_bound_margin(1.5, z, 1e-3) < 1e-10
    ts = np.geomspace(1e-3, 1e5, 200)
    assert np.isfinite(np.max([kernel_bound_margin(1.5, z, t) for t in ts]))


def test_alpha_param():
    ap = AlphaParam(1.5)
    assert ap.half_angle == pytest.approx(0.375 * math.pi)
    with pytest.raises(DomainError):
        AlphaParam(0.0)
    with pytest.raises(DomainError):
        AlphaParam(3.0).require_sector()
    assert in_sector(1.0, np.exp(0.2j * math.pi))
    assert not in_sector(1.0, np.exp(0.3j * math.pi))
