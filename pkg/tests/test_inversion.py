import math

import numpy as np
import pytest

from sector_rkhs import bergman_rkhs as br
from sector_rkhs.errors import DomainError
from sector_rkhs.heat_kernel import AlphaParam
from sector_rkhs.inversion import (
    Exhaustion,
    build_exhaustion,
    default_tau_grid,
    invert,
    kernel_section_inverse_check,
    roundtrip_error,
    weighted_l2,
)
from sector_rkhs.transform import BoundarySignal


def test_exhaustion_bounds():
    with pytest.raises(DomainError):
        Exhaustion(1.0).bounds(1)
    assert Exhaustion(1.0, shape="literal").bounds(2) == (0.5, 2.0, 0.5)
    assert Exhaustion(1.0).bounds(4) == (4.0**-3, 4.0, 4.0**-2)


@pytest.mark.parametrize("shape", ["graded", "literal"])
def test_exhaustion_nested(shape):
    a = 1.5
    small = build_exhaustion(a, 2, shape=shape)
    big = build_exhaustion(a, 3, shape=shape)
    assert np.all(big.contains(small.z, tol=1e-12))


def test_literal_empty_when_gap_too_wide():
    m = build_exhaustion(0.5, 2, shape="literal")
    # half-angle pi/8 < 1/2: the clamped angular width is zero
    assert m.size == 0


def test_zero_element_inverts_to_zero():
    out = invert(1.0, 1.0, br.zero_element(1.0, 1.0), [0.2, 0.5], N=4)
    assert np.all(out == 0)
    rep = roundtrip_error(1.0, 1.0, BoundarySignal.constant(0.0, 1.0), [4, 8])
    assert rep.passed and rep.tables["roundtrip"].column("error") == [0.0, 0.0]


def test_tau_refusals():
    F = br.GSpaceElement.from_transform(1.0, 1.0, 1.0)
    for tau in (0.0, 1.0, 1.2):
        with pytest.raises(DomainError):
            invert(1.0, 1.0, F, tau, N=4)
    with pytest.raises(DomainError):
        invert(1.0, 1.0, F, 0.9999, N=4)


def test_constant_reconstruction_improves_with_N():
    F = br.GSpaceElement.from_transform(2.0, 1.0, 1.0)
    errs = [abs(invert(2.0, 1.0, F, 0.5, N=n) - 1.0) for n in (4, 8, 16)]
    assert errs[0] > errs[1] > errs[2]
    assert errs[2] < 1e-2


def test_roundtrip_small():
    rep = roundtrip_error(1.0, 1.0, BoundarySignal.monomial(1, 1.0), [4, 8], target=None)
    errs = rep.tables["roundtrip"].column("error")
    assert rep.passed and errs[1] < errs[0]


def test_kernel_section_inverse():
    assert kernel_section_inverse_check(1.0, 1.0, 0.8 + 0.2j, [0.2, 0.5, 0.8]).passed


def test_tau_grid_and_norm():
    tau = default_tau_grid(1.0)
    assert tau.min() > 0 and tau.max() < 1.0 and np.all(np.diff(tau) > 0)
    assert tau.max() == pytest.approx(1.0 - 1e-3)
    fine = np.linspace(1e-6, 1.0, 20001)
    assert weighted_l2(2.0, 1.0, fine, np.ones_like(fine)) == pytest.approx(math.sqrt(1 / 3), rel=1e-6)


def test_sector_required():
    with pytest.raises(DomainError):
        Exhaustion(2.5)
    assert AlphaParam.of(2.0).require_sector()
