"""Finite-difference oracle for u_t = x^{2(alpha-1)/alpha} u_xx on the half line.

The boundary value u(0, t) = g(t) is imposed at x = eps > 0 and the far
boundary u(X, t) = 0 is placed where the kernel profile W_alpha(X, T) drops
below 1e-8. Time stepping is Crank-Nicolson with two backward-Euler half
steps at the start (Rannacher), which damps the incompatibility between
u(x, 0) = 0 and g(0) != 0.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.linalg import solve_banded
from scipy.optimize import brentq

from .errors import AccuracyWarning, DomainError, StabilityError
from .heat_kernel import AlphaParam, profile_W
from .report import DiagnosticsReport
from .transform import as_signal, forward_T

_COEFF_WARN = 1e6


def far_boundary(alpha, T: float, tol: float = 1e-8) -> float:
    """Smallest X (to bisection accuracy) with W_alpha(X, T) < tol."""
    ap = AlphaParam.of(alpha)
    f = lambda x: profile_W(ap, x, T) - tol
    hi = 1.0
    while f(hi) > 0:
        hi *= 2.0
    return brentq(f, hi / 2.0 if hi > 1.0 else 1e-12, hi, xtol=1e-10)


@dataclass(frozen=True)
class FDGrid:
    """Nodes x_0 = eps < ... < x_M = X_max and n_t equal time steps up to T.

    Spacing is the smooth softplus map x = x_s log(1 + e^s) with s uniform:
    geometric near eps, uniform far out.
    """

    x: np.ndarray
    T: float
    n_t: int
    eps: float

    def __post_init__(self):
        x = np.asarray(self.x, dtype=float)
        if x.ndim != 1 or x.size < 3 or np.any(np.diff(x) <= 0):
            raise ValueError("grid nodes must be strictly increasing, at least 3")
        if not x[0] > 0:
            raise DomainError("left node eps must be positive")
        if not (self.T > 0 and self.n_t >= 1):
            raise ValueError("T > 0 and n_t >= 1 required")

    @property
    def dt(self) -> float:
        return self.T / self.n_t

    @property
    def t(self) -> np.ndarray:
        return np.linspace(0.0, self.T, self.n_t + 1)

    @classmethod
    def build(cls, alpha, T: float, M: int = 400, n_t: int = 400, eps: float = 1e-6, x_max: float | None = None,
              x_scale: float | None = None) -> "FDGrid":
        if M < 2:
            raise ValueError("M >= 2")
        X = far_boundary(alpha, T) if x_max is None else float(x_max)
        if not X > eps:
            raise DomainError("x_max must exceed eps")
        xs = 0.05 * X if x_scale is None else float(x_scale)
        s0 = math.log(math.expm1(eps / xs))
        s1 = math.log(math.expm1(X / xs))
        s = np.linspace(s0, s1, M + 1)
        x = xs * np.logaddexp(0.0, s)
        x[0], x[-1] = eps, X
        return cls(x, float(T), int(n_t), float(eps))

    def refined(self, alpha) -> "FDGrid":
        """Twice the nodes in x and t over the same interval."""
        return FDGrid.build(alpha, self.T, 2 * (self.x.size - 1), 2 * self.n_t, self.eps, float(self.x[-1]))


@dataclass
class SolutionField:
    x: np.ndarray
    t: np.ndarray
    u: np.ndarray  # shape (len(t), len(x))
    label: str = ""

    def at(self, x, time: float | None = None) -> np.ndarray:
        """Linear interpolation in x at the time level nearest to ``time`` (default: last)."""
        k = -1 if time is None else int(np.argmin(np.abs(self.t - time)))
        return np.interp(np.asarray(x, dtype=float), self.x, self.u[k])


def _operator(alpha, x):
    """Diagonals of c(x) u_xx on interior nodes for the nonuniform 3-point rule."""
    ap = AlphaParam.of(alpha)
    hm = np.diff(x)[:-1]
    hp = np.diff(x)[1:]
    c = x[1:-1] ** ap.coefficient_power
    lower = 2.0 * c / (hm * (hm + hp))
    upper = 2.0 * c / (hp * (hm + hp))
    diag = -(lower + upper)
    return lower, diag, upper


def solve_fd(alpha, T: float, g, grid: FDGrid, bound: float = 10.0) -> SolutionField:
    """Crank-Nicolson field for u_t = c(x) u_xx, u(eps, t) = g(t), u(X, t) = 0, u(x, 0) = 0."""
    ap = AlphaParam.of(alpha)
    if abs(grid.T - T) > 1e-12 * T:
        raise ValueError("grid horizon differs from T")
    sig = as_signal(g, T)
    x = grid.x
    c_eps = x[0] ** ap.coefficient_power
    if c_eps > _COEFF_WARN:
        warnings.warn(f"coefficient at eps is {c_eps:.3g}; use a larger eps or smaller steps", AccuracyWarning)
    ts = grid.t
    gt = np.real_if_close(np.asarray(sig(ts), dtype=complex))
    if np.iscomplexobj(gt):
        raise ValueError("the oracle handles real boundary data only")
    gt = gt.astype(float)
    gmax = max(float(np.max(np.abs(gt))), 1e-300)
    lo, di, up = _operator(ap, x)
    m = x.size - 2
    u = np.zeros((ts.size, x.size))
    u[:, 0] = gt
    cur = np.zeros(m)

    def step(cur, dt, theta, g_old, g_new):
        # (I - theta dt A) new = (I + (1-theta) dt A) old + boundary terms
        ab = np.zeros((3, m))
        ab[0, 1:] = -theta * dt * up[:-1]
        ab[1] = 1.0 - theta * dt * di
        ab[2, :-1] = -theta * dt * lo[1:]
        rhs = cur.copy()
        if theta < 1.0:
            Au = di * cur
            Au[1:] += lo[1:] * cur[:-1]
            Au[:-1] += up[:-1] * cur[1:]
            rhs += (1.0 - theta) * dt * Au
        rhs[0] += dt * lo[0] * (theta * g_new + (1.0 - theta) * g_old)
        return solve_banded((1, 1), ab, rhs)

    dt = grid.dt
    for n in range(1, ts.size):
        if n == 1:
            # two half steps of backward Euler smooth the start-up jump
            gh = float(np.real(sig(np.array([0.5 * dt]))[0]))
            mid = step(cur, 0.5 * dt, 1.0, gt[0], gh)
            cur = step(mid, 0.5 * dt, 1.0, gh, gt[1])
        else:
            cur = step(cur, dt, 0.5, gt[n - 1], gt[n])
        if not np.all(np.isfinite(cur)) or np.max(np.abs(cur)) > bound * gmax:
            raise StabilityError(f"solution left the bound {bound} x max|g| at step {n}")
        u[n, 1:-1] = cur
    return SolutionField(x.copy(), ts, u, label=f"fd alpha={ap.alpha}")


def analytic_field(alpha, T: float, g, x, rtol: float = 1e-10) -> SolutionField:
    """forward_T at time T on the nodes x (a single time level)."""
    sig = as_signal(g, T)
    xs = np.asarray(x, dtype=float)
    vals = np.array([float(np.real(forward_T(alpha, T, sig, float(xi), rtol=rtol))) for xi in xs])
    return SolutionField(xs, np.array([T]), vals[None, :], label="analytic")


def compare(analytic: SolutionField, fd: SolutionField, region: tuple[float, float] | None = None,
            layer: float = 1e-2) -> DiagnosticsReport:
    """Errors of the FD field against the analytic one at the analytic time level.

    Nodes with x < layer (the eps boundary layer) and outside ``region`` are
    excluded. The relative L-infinity error is max|diff| / max|analytic|.
    """
    if analytic.x.shape != fd.x.shape or np.any(analytic.x != fd.x):
        raise ValueError("fields are not on the same nodes; interpolate first")
    T = float(analytic.t[-1])
    if abs(fd.t[-1] - T) > 1e-12 * max(T, 1.0):
        raise ValueError("time levels do not match")
    x = fd.x
    lo, hi = (layer, float(x[-1])) if region is None else (max(region[0], layer), region[1])
    if lo >= hi:
        raise ValueError("empty comparison region")
    sel = (x >= lo) & (x <= hi)
    if not sel.any():
        raise ValueError("no nodes in the comparison region")
    ua = analytic.u[-1][sel]
    uf = fd.u[-1][sel]
    diff = uf - ua
    scale = max(float(np.max(np.abs(ua))), 1e-300)
    xs = x[sel]
    l2 = math.sqrt(float(np.trapezoid(diff ** 2, xs))) if xs.size > 1 else float(abs(diff[0]))
    rep = DiagnosticsReport("pde-compare", {"x_lo": lo, "x_hi": hi, "T": T, "nodes": int(sel.sum())})
    rep.check("linf_abs", float(np.max(np.abs(diff))), mode="max", tolerance=float("inf"))
    rep.check("linf_rel", float(np.max(np.abs(diff))) / scale, mode="max", tolerance=float("inf"))
    rep.check("l2_abs", l2, mode="max", tolerance=float("inf"))
    return rep.finish()


def refinement_study(alpha, T: float, g, levels=(100, 200, 400), eps: float = 1e-6, tol: float = 1e-2,
                     layer: float = 1e-2, exact=None) -> DiagnosticsReport:
    """FD against the analytic route under grid doubling (M = n_t = level).

    ``exact`` optionally supplies a closed form x -> u(x, T) used instead of
    forward_T.
    """
    ap = AlphaParam.of(alpha)
    sig = as_signal(g, T)
    rep = DiagnosticsReport("pde-compare", {"alpha": ap.alpha, "T": T, "g": sig.label, "levels": list(levels), "eps": eps})
    tab = rep.table("refinement", ["M", "n_t", "linf_rel", "linf_abs", "l2_abs", "order"])
    X = far_boundary(ap, T)
    rels = []
    prev = None
    for lev in levels:
        grid = FDGrid.build(ap, T, lev, lev, eps, X)
        fd = solve_fd(ap, T, sig, grid)
        if exact is None:
            an = analytic_field(ap, T, sig, grid.x)
        else:
            an = SolutionField(grid.x, np.array([T]), np.asarray(exact(grid.x), dtype=float)[None, :])
        c = compare(an, fd, layer=layer)
        err = c["linf_rel"].value
        order = math.log2(prev / err) if prev is not None and err > 0 else float("nan")
        tab.add(lev, lev, err, c["linf_abs"].value, c["l2_abs"].value, order)
        rels.append(err)
        prev = err
        rep.field = fd
    rep.check("linf_rel at finest grid", rels[-1], tolerance=tol, mode="max")
    if len(rels) > 1:
        rep.check("error decreases under refinement", bool(np.all(np.diff(rels) < 0)), mode="true")
    return rep.finish()


def eps_sensitivity(alpha, T: float, g, eps_values=(1e-4, 1e-5, 1e-6), M: int = 400, layer: float = 1e-2) -> DiagnosticsReport:
    """How the FD field at T changes with the position eps of the left boundary."""
    ap = AlphaParam.of(alpha)
    X = far_boundary(ap, T)
    ref_x = np.geomspace(layer, X / 2.0, 60)
    rep = DiagnosticsReport("eps-sensitivity", {"alpha": ap.alpha, "T": T, "eps": list(eps_values), "M": M})
    tab = rep.table("eps", ["eps", "max_change"])
    prev = None
    for eps in eps_values:
        f = solve_fd(ap, T, g, FDGrid.build(ap, T, M, M, eps, X)).at(ref_x)
        tab.add(eps, float("nan") if prev is None else float(np.max(np.abs(f - prev))))
        prev = f
    return rep.finish()
