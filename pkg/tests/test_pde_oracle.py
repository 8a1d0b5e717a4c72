import math

import numpy as np
import pytest

from sector_rkhs.errors import DomainError, StabilityError
from sector_rkhs.heat_kernel import profile_W
from sector_rkhs.pde_oracle import (
    FDGrid,
    SolutionField,
    compare,
    eps_sensitivity,
    far_boundary,
    refinement_study,
    solve_fd,
)
from sector_rkhs.transform import BoundarySignal


def test_far_boundary():
    X = far_boundary(1.5, 1.0)
    assert profile_W(1.5, X, 1.0) == pytest.approx(1e-8, rel=1e-4)


def test_grid_construction():
    g = FDGrid.build(1.0, 1.0, 50, 20, eps=1e-6)
    assert g.x[0] == 1e-6 and np.all(np.diff(g.x) > 0)
    assert g.dt == pytest.approx(0.05)
    assert g.refined(1.0).x.size == 101
    with pytest.raises(DomainError):
        FDGrid(np.array([0.0, 1.0, 2.0]), 1.0, 10, 0.0)


def test_zero_data_zero_field():
    g = FDGrid.build(1.5, 1.0, 50, 50)
    fd = solve_fd(1.5, 1.0, BoundarySignal.constant(0.0, 1.0), g)
    assert np.all(fd.u == 0)


def test_heat_anchor():
    T = 1.0
    g = FDGrid.build(1.0, T, 400, 400)
    fd = solve_fd(1.0, T, 1.0, g)
    exact = np.array([math.erfc(x / (2 * math.sqrt(T))) for x in g.x])
    rep = compare(SolutionField(g.x, np.array([T]), exact[None, :]), fd)
    assert rep["linf_abs"].value <= 1e-3


def test_alpha15_profile():
    T = 1.0
    g = FDGrid.build(1.5, T, 400, 400)
    fd = solve_fd(1.5, T, 1.0, g)
    an = SolutionField(g.x, np.array([T]), profile_W(1.5, g.x, T)[None, :])
    assert compare(an, fd)["linf_rel"].value <= 1e-3


def test_identical_fields_zero_error():
    x = np.linspace(0.1, 1.0, 5)
    f = SolutionField(x, np.array([1.0]), np.ones((1, 5)))
    assert compare(f, f)["linf_abs"].value == 0.0


def test_refinement_decreases():
    rep = refinement_study(1.0, 1.0, 1.0, levels=(100, 200, 400),
                           exact=lambda x: np.array([math.erfc(v / 2) for v in x]))
    assert rep.passed
    orders = rep.tables["refinement"].column("order")[1:]
    assert min(orders) > 1.5


def test_stability_bound():
    g = FDGrid.build(1.0, 1.0, 50, 10)
    with pytest.raises(StabilityError):
        solve_fd(1.0, 1.0, 1.0, g, bound=1e-3)


def test_complex_data_refused():
    g = FDGrid.build(1.0, 1.0, 20, 10)
    with pytest.raises(ValueError):
        solve_fd(1.0, 1.0, BoundarySignal.polynomial([1.0 + 1.0j], 1.0), g)


def test_eps_position_immaterial():
    # moving eps from 1e-4 to 1e-6 changes the field at x >= 1e-2 by less than the grid error
    col = eps_sensitivity(1.5, 1.0, 1.0, M=200).tables["eps"].column("max_change")
    assert max(col[1:]) < 1e-3
