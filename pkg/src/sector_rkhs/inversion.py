"""Reconstruction of boundary data from the state at time t.

For F = L_t^alpha g the datum is recovered as

    g(tau) = C s^{-alpha/2-1} lim_N int_{E_N} conj(z) F(z) exp(-alpha^2 conj(z)^{2/alpha}/(4s)) dmu(z),

with s = t - tau, C = (alpha/2)^alpha / Gamma(alpha/2) and E_N a compact
exhaustion of the sector. Written through the scaled form S of F the
exponentials combine exactly into exp(-k conj(zeta)), k = (alpha^2/4)(1/s - 1/t),
so no factor grows.

For tau close to t the factor exp(-k conj(zeta)) oscillates faster than the
mesh resolves. Tiles that see more than a few radians of phase are
re-integrated on sub-panels: S is interpolated from the tile's own
Gauss-Legendre nodes (it is smooth there) and every other factor is
evaluated exactly at the fine nodes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from functools import lru_cache
from typing import Sequence

import numpy as np

from .bergman_rkhs import GSpaceElement, _measure_poly, measure_constant
from .errors import AccuracyWarning, DomainError
from .heat_kernel import AlphaParam
from .mesh import SectorMesh
from .quadrature import gauss_legendre
from .report import DiagnosticsReport
from .transform import as_signal

SHAPES = ("graded", "literal")

# exp(-k conj zeta) may change by at most this much (in |exponent|) across
# one 8-node sub-panel before the tile gets subdivided
_PHASE_PER_PANEL = 4.0
_MAX_SUB = 4096


# exhaustion ----------------------------------------------------------------


@dataclass(frozen=True)
class Exhaustion:
    """E_N = {r_min(N) <= |z| <= R(N), |arg z| <= pi alpha/4 - delta(N)}.

    ``literal``: r_min = 1/N, R = N, delta = 1/N.
    ``graded``:  r_min = N^-3, R = N, delta = N^-2 (default).
    Both are increasing in N and fill the open sector.
    """

    alpha: float
    shape: str = "graded"
    order: int = 8
    dl: float = 0.25
    ratio: float = 0.5

    def __post_init__(self):
        AlphaParam.of(self.alpha).require_sector()
        if self.shape not in SHAPES:
            raise ValueError(f"exhaustion shape must be one of {SHAPES}")

    def bounds(self, N: int) -> tuple[float, float, float]:
        if int(N) != N or N < 2:
            raise DomainError("exhaustion index N must be an integer >= 2 (N = 1 gives r_min = R)")
        N = float(N)
        if self.shape == "literal":
            return 1.0 / N, N, 1.0 / N
        return N ** -3, N, N ** -2

    def mesh(self, N: int) -> SectorMesh:
        r_min, R, delta = self.bounds(N)
        return SectorMesh(self.alpha, r_min, R, delta, order=self.order, dl=self.dl, ratio=self.ratio)


def build_exhaustion(alpha, N: int, order: int = 8, shape: str = "graded", dl: float = 0.25, ratio: float = 0.5) -> SectorMesh:
    """Mesh of the N-th exhaustion set."""
    return Exhaustion(float(AlphaParam.of(alpha).alpha), shape, order, dl, ratio).mesh(N)


# sub-panel interpolation ---------------------------------------------------


def _bary_weights(x):
    n = len(x)
    w = np.ones(n)
    for j in range(n):
        w[j] = 1.0 / np.prod(x[j] - np.delete(x, j))
    return w


def _lagrange_matrix(x, y):
    """Matrix mapping values on nodes x to the interpolant at points y."""
    w = _bary_weights(x)
    d = y[:, None] - x[None, :]
    hit = d == 0.0
    d[hit] = 1.0
    m = w[None, :] / d
    m /= m.sum(axis=1, keepdims=True)
    rows = np.any(hit, axis=1)
    if rows.any():
        m[rows] = hit[rows].astype(float)
    return m


@lru_cache(maxsize=256)
def _subpanel_rule(n: int, m: int):
    """Interpolation matrix (m n x n) from n GL nodes on [-1, 1] to the GL
    nodes of m equal sub-panels, with the sub-panel nodes and weights."""
    x, w = gauss_legendre(n)
    edges = np.linspace(-1.0, 1.0, m + 1)
    h = 0.5 * (edges[1:] - edges[:-1])
    y = (0.5 * (edges[1:] + edges[:-1])[:, None] + h[:, None] * x[None, :]).ravel()
    wy = (h[:, None] * w[None, :]).ravel()
    L = _lagrange_matrix(x, y)
    for arr in (L, y, wy):
        arr.setflags(write=False)
    return L, y, wy


# inverse -------------------------------------------------------------------


def _as_element(alpha, t, F) -> GSpaceElement:
    if isinstance(F, GSpaceElement):
        if F.alpha != float(alpha) or F.t != float(t):
            raise ValueError("element does not belong to this (alpha, t) space")
        return F
    if callable(F):
        # plain F: the scaled form needs the growing factor, so overflow is possible far out
        ap = AlphaParam.of(alpha)
        a = ap.alpha

        def scaled(z):
            with np.errstate(over="ignore", invalid="ignore"):
                v = np.asarray(F(z), dtype=complex) * np.exp((a * a / (4.0 * t)) * np.exp(ap.zeta_power * np.log(z)))
            if not np.all(np.isfinite(v)):
                warnings.warn("F times its growth factor overflowed; non-finite nodes set to 0", AccuracyWarning)
                v = np.where(np.isfinite(v), v, 0.0)
            return v

        return GSpaceElement(alpha, t, scaled, label="F")
    raise TypeError("F must be a GSpaceElement or a callable")


class _InverseData:
    """Per-mesh quantities of the inverse integrand that do not depend on tau."""

    def __init__(self, ap: AlphaParam, t: float, el: GSpaceElement, mesh: SectorMesh):
        self.ap = ap
        self.t = t
        self.el = el
        self.mesh = mesh
        z = mesh.z
        self.S = el.on_mesh(mesh)
        self.zetab = np.conj(np.exp(ap.zeta_power * np.log(z)))
        self.W = ap.kernel_constant * measure_constant(ap.alpha) * np.conj(z) * _measure_poly(ap, z) * mesh.weights * self.S
        self.rho = np.abs(self.zetab)
        self.const = ap.kernel_constant * measure_constant(ap.alpha)
        n = mesh.order
        nt, nl = mesh.tile_shape
        self.tile_rho = self.rho.reshape(nt, n, nl, n).max(axis=(1, 3))
        self.tile_xi_min = self.zetab.real.reshape(nt, n, nl, n).min(axis=(1, 3))
        self.tile_abs = np.abs(self.W).reshape(nt, n, nl, n).sum(axis=(1, 3))

    def fine_tile(self, i: int, j: int, m_th: int, m_l: int):
        """Fine-node weights (everything but exp(-k conj zeta)) and conj zeta on one tile.

        Apart from S every factor separates into a radial and an angular part.
        """
        ap, mesh = self.ap, self.mesh
        al = ap.alpha
        p = ap.zeta_power
        n = mesh.order
        si, sj = mesh.tile(i, j)
        Lt, xt, wt = _subpanel_rule(n, m_th)
        Ll, xl, wl = _subpanel_rule(n, m_l)
        S = Lt @ self.S[si, sj] @ Ll.T
        t0, t1 = mesh.theta_edges[i], mesh.theta_edges[i + 1]
        l0, l1 = mesh.l_edges[j], mesh.l_edges[j + 1]
        th = 0.5 * (t0 + t1) + 0.5 * (t1 - t0) * xt
        ll = 0.5 * (l0 + l1) + 0.5 * (l1 - l0) * xl
        rho = np.exp(p * ll)
        phi = p * th
        # r * r^{4(1-a)/a} * rho^{a-1} * r^2 (area element in log-polar form)
        radial = np.exp((3.0 + 4.0 * (1.0 - al) / al) * ll) * rho ** (al - 1.0) * (0.5 * (l1 - l0) * wl)
        angular = np.exp(-1j * th) * np.cos(phi) ** (al - 1.0) * (0.5 * (t1 - t0) * wt)
        W = (self.const * angular)[:, None] * radial[None, :] * S
        zetab = rho[None, :] * np.exp(-1j * phi)[:, None]
        return W, zetab


def _invert_one(data: _InverseData, tau: float, refine: bool, stats: dict) -> complex:
    ap, t, mesh = data.ap, data.t, data.mesh
    a = ap.alpha
    s = t - tau
    k = 0.25 * a * a * (1.0 / s - 1.0 / t)
    E = np.exp(-k * data.zetab)
    contrib = data.W * E
    total = complex(contrib.sum())
    if refine and k > 0:
        n = mesh.order
        nt, nl = mesh.tile_shape
        tiles = lambda v: v.reshape(nt, n, nl, n).sum(axis=(1, 3))
        mag = tiles(np.abs(contrib))
        part = tiles(contrib)
        floor = 1e-17 * max(float(mag.sum()), 1e-300)
        # a tile whose largest possible value is negligible is left as is
        with np.errstate(under="ignore"):
            bound = data.tile_abs * np.exp(-k * data.tile_xi_min)
        rate = ap.zeta_power * k * data.tile_rho / _PHASE_PER_PANEL
        m_l = np.ceil(rate * np.diff(mesh.l_edges)[None, :])
        m_t = np.ceil(rate * np.diff(mesh.theta_edges)[:, None])
        todo = ((bound >= floor) | (mag >= floor)) & ((m_l > 1) | (m_t > 1))
        for i, j in zip(*np.nonzero(todo)):
            ml, mt = int(max(m_l[i, j], 1)), int(max(m_t[i, j], 1))
            if max(ml, mt) > _MAX_SUB:
                stats["capped"] = True
                ml, mt = min(ml, _MAX_SUB), min(mt, _MAX_SUB)
            W, zb = data.fine_tile(i, j, mt, ml)
            total += complex((W * np.exp(-k * zb)).sum()) - complex(part[i, j])
            stats["refined_tiles"] += 1
            stats["fine_nodes"] += W.size
    return total * s ** (-0.5 * a - 1.0)


def invert(alpha, t, F, tau, N: int | None = None, mesh: SectorMesh | None = None, shape: str = "graded",
           tau_guard: float = 1e-3, refine: bool = True, full_output: bool = False):
    """Truncated inverse formula at tau (scalar or array) over E_N or a given mesh.

    ``F`` is a :class:`GSpaceElement` (values cached per mesh) or a plain
    callable. Points with tau > t (1 - tau_guard) are refused.
    """
    ap = AlphaParam.of(alpha).require_sector()
    if not t > 0:
        raise DomainError("t must be positive")
    t = float(t)
    taus = np.atleast_1d(np.asarray(tau, dtype=float))
    if np.any(taus <= 0) or np.any(taus >= t):
        raise DomainError("tau must lie in (0, t)")
    if np.any(taus > t * (1.0 - tau_guard)):
        raise DomainError(f"tau above t(1 - {tau_guard}) refused: the limit holds in L2, not pointwise, near t")
    if mesh is None:
        if N is None:
            raise ValueError("give N or mesh")
        mesh = build_exhaustion(ap, N, shape=shape)
    el = _as_element(ap.alpha, t, F)
    stats = {"refined_tiles": 0, "fine_nodes": 0, "capped": False, "nodes": mesh.size}
    if mesh.size == 0:
        out = np.zeros(taus.shape, dtype=complex)
    else:
        data = _InverseData(ap, t, el, mesh)
        out = np.array([_invert_one(data, float(tv), refine, stats) for tv in taus])
    if stats["capped"]:
        warnings.warn("sub-panel count capped; inverse near tau = t under-resolved", AccuracyWarning)
    if np.ndim(tau) == 0:
        out = complex(out[0])
    return (out, stats) if full_output else out


# roundtrip -----------------------------------------------------------------


def default_tau_grid(t: float, n_uniform: int = 48, n_geom: int = 12) -> np.ndarray:
    """Uniform on [t/100, 0.95 t] plus geometric points toward t (1 - 1e-3)."""
    u = np.linspace(0.01 * t, 0.95 * t, n_uniform)
    gap = np.geomspace(0.05 * t, 1e-3 * t, n_geom + 1)[1:]
    return np.concatenate([u, t - gap])


def weighted_l2(alpha, t, tau, values) -> float:
    """(int |values|^2 tau^alpha / t^alpha d tau)^{1/2} by the trapezoid rule on the grid."""
    a = AlphaParam.of(alpha).alpha
    tau = np.asarray(tau, dtype=float)
    return math.sqrt(float(np.trapezoid(np.abs(values) ** 2 * (tau / t) ** a, tau)))


def roundtrip_error(alpha, t, g, N: int | Sequence[int], tau_grid=None, shape: str = "graded",
                    target: float | None = 1e-2) -> DiagnosticsReport:
    """Invert L_t^alpha g over E_N for each N and tabulate the weighted-L2 error.

    Points whose inversion fails are dropped and listed; the coverage column
    is the fraction of grid points kept.
    """
    ap = AlphaParam.of(alpha).require_sector()
    t = float(t)
    sig = as_signal(g, t)
    Ns = [int(N)] if np.isscalar(N) else [int(n) for n in N]
    tau = default_tau_grid(t) if tau_grid is None else np.asarray(tau_grid, dtype=float)
    if np.any(tau <= 0) or np.any(tau >= t):
        raise DomainError("tau grid must avoid the endpoints 0 and t")
    exact = np.asarray(sig(tau), dtype=complex)
    ref = weighted_l2(ap, t, tau, exact)
    F = GSpaceElement.from_transform(ap, t, sig)
    rep = DiagnosticsReport(
        "inverse",
        {"alpha": ap.alpha, "t": t, "g": sig.label, "N": Ns, "shape": shape,
         "tau_min": float(tau.min()), "tau_max": float(tau.max()), "n_tau": int(tau.size)},
    )
    tab = rep.table("roundtrip", ["N", "nodes", "error", "relative_error", "coverage", "refined_tiles"])
    errs = []
    recon = {}
    for n in Ns:
        mesh = build_exhaustion(ap, n, shape=shape)
        vals = np.full(tau.shape, np.nan + 0j)
        refined = 0
        failed = []
        with warnings.catch_warnings(record=True) as caught:
            warnings.simplefilter("always", AccuracyWarning)
            try:
                vals[:], st = invert(ap, t, F, tau, mesh=mesh, full_output=True)
                refined = st["refined_tiles"]
            except (DomainError, ArithmeticError):
                for i, tv in enumerate(tau):
                    try:
                        vals[i] = invert(ap, t, F, float(tv), mesh=mesh)
                    except (DomainError, ArithmeticError):
                        failed.append(float(tv))
        for w in caught:
            rep.note(f"N={n}: {w.message}")
        ok = np.isfinite(vals)
        if failed:
            rep.note(f"N={n}: inversion failed at tau={failed}")
        err = weighted_l2(ap, t, tau[ok], vals[ok] - exact[ok]) if ok.sum() > 1 else float("nan")
        errs.append(err)
        recon[n] = vals
        tab.add(n, mesh.size, err, err / ref if ref > 0 else err, float(ok.mean()), refined)
    rep.reconstruction = (tau, recon)
    if ref == 0.0:
        rep.check("zero signal reconstructs to zero", max(errs), tolerance=1e-300, mode="max")
        return rep.finish()
    if len(errs) > 1:
        rep.check("error strictly decreasing in N", bool(np.all(np.diff(errs) < 0)), mode="true")
    if target is not None:
        rep.check(f"error at N={Ns[-1]}", errs[-1], tolerance=target, mode="max")
    return rep.finish()


def kernel_section_inverse_check(alpha, t, w, taus, N: int = 32) -> DiagnosticsReport:
    """invert applied to the kernel section at w against conj(K_alpha(w, t - tau))."""
    from .heat_kernel import kernel_K

    ap = AlphaParam.of(alpha).require_sector()
    F = GSpaceElement.from_kernel_section(ap, t, w)
    taus = np.asarray(taus, dtype=float)
    got = np.atleast_1d(invert(ap, t, F, taus, N=N))
    want = np.array([np.conj(kernel_K(ap, complex(w), t - tv)) for tv in taus])
    rel = np.abs(got - want) / np.abs(want)
    rep = DiagnosticsReport("kernel_section_inverse", {"alpha": ap.alpha, "t": t, "w": complex(w), "N": N})
    tab = rep.table("values", ["tau", "inverse", "expected", "relative_error"])
    for row in zip(taus, got, want, rel):
        tab.add(*[complex(v) if np.iscomplexobj(v) else float(v) for v in row])
    rep.check("max relative error", float(rel.max()), tolerance=1e-2, mode="max")
    return rep.finish()
