"""Weighted Bergman kernels, the image space of the transform and its kernel.

Elements of the image space are handled through their scaled form
``S(z) = exp(alpha^2 z^{2/alpha} / (4t)) F(z)``. In that form the measure's
growing factor exp(alpha^2 Re z^{2/alpha} / (2t)) cancels against |F|^2
analytically, so nothing overflows for small t or far-out mesh nodes.
"""

from __future__ import annotations

import math
import warnings
from dataclasses import dataclass
from typing import Callable

import numpy as np

from .errors import AccuracyWarning, BranchError, DomainError
from .heat_kernel import AlphaParam, in_sector, require_sector_point, zeta
from .mesh import SectorMesh
from .quadrature import tanh_sinh
from .report import DiagnosticsReport
from .specfun import beta
from .transform import as_signal, scaled_forward_L


def _cpow(z, p):
    """Principal z**p for arrays, accepting positive reals."""
    zc = np.asarray(z, dtype=complex)
    return np.exp(p * np.log(zc))


# Bergman kernels -----------------------------------------------------------


@dataclass(frozen=True)
class WeightedKernelSpec:
    """Domain (half-plane or sector(alpha)) and weight order nu > -1."""

    domain: str
    nu: float = 0.0
    alpha: float | None = None

    def __post_init__(self):
        if self.domain not in ("half-plane", "sector"):
            raise ValueError("domain must be 'half-plane' or 'sector'")
        if not self.nu > -1:
            raise DomainError(f"weight order nu must exceed -1, got {self.nu}")
        if self.domain == "sector":
            if self.alpha is None:
                raise ValueError("sector domain needs alpha")
            AlphaParam.of(self.alpha).require_sector()

    @classmethod
    def half_plane(cls, nu=0.0):
        return cls("half-plane", nu)

    @classmethod
    def sector(cls, alpha, nu=0.0):
        return cls("sector", nu, float(AlphaParam.of(alpha).alpha))


def _require_half_plane(z):
    zc = np.asarray(z, dtype=complex)
    if np.any(~(zc.real > 0)):
        raise DomainError("point outside the right half plane")
    return zc


def bergman_kernel(spec: WeightedKernelSpec, z, w):
    """Weighted Bergman kernel K_{Omega,nu}(z, w) for the half plane or a sector.

    half plane: (nu+1) / (pi^{1+nu/2} (z + conj w)^{nu+2})
    sector:     2^{2+nu} (nu+1) (z conj w)^{((2-alpha)/alpha)(1+nu/2)}
                / (alpha^{2+nu} pi^{1+nu/2} (z^{2/alpha} + conj(w)^{2/alpha})^{nu+2})
    """
    nu = spec.nu
    if spec.domain == "half-plane":
        zc = _require_half_plane(z)
        wc = _require_half_plane(w)
        s = zc + np.conj(wc)
        out = (nu + 1.0) / (math.pi ** (1.0 + 0.5 * nu) * _cpow(s, nu + 2.0))
    else:
        ap = AlphaParam.of(spec.alpha)
        a = ap.alpha
        zc = require_sector_point(ap, z)
        wc = require_sector_point(ap, w)
        s = _cpow(zc, ap.zeta_power) + np.conj(_cpow(wc, ap.zeta_power))
        q = ((2.0 - a) / a) * (1.0 + 0.5 * nu)
        # (z conj w)^q: arg z - arg w stays inside (-pi, pi), so the product power is principal
        pw = _cpow(zc * np.conj(wc), q)
        c = 2.0 ** (2.0 + nu) * (nu + 1.0) / (a ** (2.0 + nu) * math.pi ** (1.0 + 0.5 * nu))
        out = c * pw / _cpow(s, nu + 2.0)
    return complex(out) if np.ndim(out) == 0 else out


def power_map(alpha):
    """Phi(z) = z^{2/alpha} with Phi' and a holomorphic log Phi' on the sector."""
    ap = AlphaParam.of(alpha).require_sector()
    p = ap.zeta_power

    def phi(z):
        return _cpow(z, p)

    def dphi(z):
        return p * _cpow(z, p - 1.0)

    def log_dphi(z):
        return math.log(p) + (p - 1.0) * np.log(np.asarray(z, dtype=complex))

    return phi, dphi, log_dphi


def conformal_transplant(base: Callable, phi: Callable, dphi: Callable, nu: float, z, w, log_dphi: Callable | None = None):
    """Phi'(z)^{1+nu/2} K_base(Phi z, Phi w) conj(Phi'(w)^{1+nu/2}).

    For a non-integer exponent 1 + nu/2 the branch of the power is fixed by
    ``log_dphi``, a holomorphic logarithm of Phi'; without it the call fails
    with :class:`BranchError`.
    """
    e = 1.0 + 0.5 * nu
    zc = np.asarray(z, dtype=complex)
    wc = np.asarray(w, dtype=complex)
    if float(e).is_integer():
        pz = np.asarray(dphi(zc), dtype=complex) ** int(e)
        pw = np.asarray(dphi(wc), dtype=complex) ** int(e)
    else:
        if log_dphi is None:
            raise BranchError(f"exponent {e} of Phi' is not an integer; supply log_dphi to fix the branch")
        pz = np.exp(e * np.asarray(log_dphi(zc), dtype=complex))
        pw = np.exp(e * np.asarray(log_dphi(wc), dtype=complex))
    out = pz * np.asarray(base(phi(zc), phi(wc))) * np.conj(pw)
    return complex(out) if np.ndim(out) == 0 else out


def sector_kernel_by_transplant(alpha, nu, z, w):
    """The sector kernel rebuilt from the half-plane kernel through z^{2/alpha}."""
    phi, dphi, log_dphi = power_map(alpha)
    spec = WeightedKernelSpec.half_plane(nu)
    base = lambda a, b: bergman_kernel(spec, a, b)
    return conformal_transplant(base, phi, dphi, nu, z, w, log_dphi=log_dphi)


# RKHS kernel ---------------------------------------------------------------


def _beta_half(alpha):
    a = AlphaParam.of(alpha).alpha
    return beta(0.5 * a, 0.5 * a)


def rkhs_kernel(alpha, t, z, w):
    """K_alpha(z, w; t) = 4 z conj(w) exp(-(alpha^2/4t)(zeta + conj omega))
    / (alpha B(alpha/2, alpha/2) (zeta + conj omega)^{alpha+1}),
    zeta = z^{2/alpha}, omega = w^{2/alpha}."""
    ap = AlphaParam.of(alpha).require_sector()
    a = ap.alpha
    if not t > 0:
        raise DomainError("t must be positive")
    zc = require_sector_point(ap, z)
    wc = require_sector_point(ap, w)
    s = _cpow(zc, ap.zeta_power) + np.conj(_cpow(wc, ap.zeta_power))
    logv = np.log(4.0 * zc * np.conj(wc) / (a * _beta_half(a))) - (a * a / (4.0 * t)) * s - (a + 1.0) * np.log(s)
    out = np.exp(logv)
    return complex(out) if np.ndim(out) == 0 else out


def rkhs_kernel_via_bergman(alpha, t, z, w):
    """The same kernel written through the weighted sector Bergman kernel of order alpha-1."""
    ap = AlphaParam.of(alpha).require_sector()
    a = ap.alpha
    zc = require_sector_point(ap, z)
    wc = require_sector_point(ap, w)
    c = (0.5 * a) ** (a - 1.0) * math.pi ** (0.5 * (a + 1.0)) / _beta_half(a)
    s = _cpow(zc, ap.zeta_power) + np.conj(_cpow(wc, ap.zeta_power))
    k = bergman_kernel(WeightedKernelSpec.sector(a, a - 1.0), zc, wc)
    out = c * _cpow(zc * np.conj(wc), ap.image_power) * np.exp(-(a * a / (4.0 * t)) * s) * k
    return complex(out) if np.ndim(out) == 0 else out


def rkhs_kernel_integral(alpha, t, z, w, rtol: float = 1e-11) -> complex:
    """int_0^t K_alpha(z, t - tau) conj(K_alpha(w, t - tau)) tau^alpha / t^alpha dtau,
    by tanh-sinh in s = t - tau with both exponentials merged."""
    ap = AlphaParam.of(alpha).require_sector()
    a = ap.alpha
    zc = complex(require_sector_point(ap, z))
    wc = complex(require_sector_point(ap, w))
    az = a * a * complex(zeta(ap, np.complex128(zc))) / 4.0
    aw = a * a * complex(zeta(ap, np.complex128(wc))) / 4.0
    logc = 2.0 * math.log(ap.kernel_constant) + np.log(zc * np.conj(wc))
    e = az + np.conj(aw)

    def f(s):
        with np.errstate(under="ignore", over="ignore", invalid="ignore"):
            out = np.exp(logc - 2.0 * ap.time_power * np.log(s) - e / s) * ((t - s) / t) ** a
        return np.where(np.isfinite(out), out, 0.0)

    return complex(tanh_sinh(f, 0.0, t, rtol=rtol, atol=1e-300).value)


# measure -------------------------------------------------------------------


def measure_constant(alpha) -> float:
    a = AlphaParam.of(alpha).alpha
    return 2.0 ** (a - 1.0) * _beta_half(a) / math.pi


def _measure_poly(ap, z):
    """|z|^{4(1-a)/a} (Re zeta)^{a-1}: the density without its exponential."""
    a = ap.alpha
    re = np.real(_cpow(z, ap.zeta_power))
    return np.abs(z) ** (4.0 * (1.0 - a) / a) * re ** (a - 1.0)


def measure_density(alpha, t, z):
    """pi^-1 2^{a-1} B(a/2, a/2) |z|^{4(1-a)/a} e^{(a^2/2t) Re zeta} (Re zeta)^{a-1}."""
    ap = AlphaParam.of(alpha).require_sector()
    a = ap.alpha
    if not t > 0:
        raise DomainError("t must be positive")
    zc = np.asarray(z, dtype=complex)
    if not np.all(in_sector(ap, zc)):
        raise DomainError("measure density is evaluated strictly inside the sector only")
    re = np.real(_cpow(zc, ap.zeta_power))
    log_d = (
        math.log(measure_constant(a))
        + (4.0 * (1.0 - a) / a) * np.log(np.abs(zc))
        + (a * a / (2.0 * t)) * re
        + (a - 1.0) * np.log(re)
    )
    out = np.exp(log_d)
    return float(out) if np.ndim(out) == 0 else out


def half_plane_measure_density(t, z):
    """2 pi^-1 |z|^-2 e^{(2/t) Re z} Re z, the alpha = 2 measure."""
    zc = np.asarray(z, dtype=complex)
    out = 2.0 / math.pi * np.abs(zc) ** -2 * np.exp(2.0 * zc.real / t) * zc.real
    return float(out) if np.ndim(out) == 0 else out


# image-space elements ------------------------------------------------------


class GSpaceElement:
    """An element F of the image space, stored through its scaled form
    ``S(z) = exp(alpha^2 z^{2/alpha}/(4t)) F(z)``.

    The Bergman factor is ``f(z) = z^{-p} S(z)`` with
    p = (alpha-1)(alpha+2)/(2 alpha), so F = z^p exp(-alpha^2 z^{2/alpha}/(4t)) f.
    Values on a mesh are cached per mesh.
    """

    def __init__(self, alpha, t, scaled: Callable, label: str = "F", factor: Callable | None = None):
        self.ap = AlphaParam.of(alpha).require_sector()
        if not t > 0:
            raise DomainError("t must be positive")
        self.t = float(t)
        self._scaled = scaled
        self._factor = factor
        self.label = label
        self._mesh_cache: dict = {}

    @property
    def alpha(self) -> float:
        return self.ap.alpha

    @classmethod
    def from_transform(cls, alpha, t, g) -> "GSpaceElement":
        sig = as_signal(g, t)
        return cls(alpha, t, lambda z: scaled_forward_L(alpha, t, sig, z), label=f"L[{sig.label}]")

    @classmethod
    def from_kernel_section(cls, alpha, t, w) -> "GSpaceElement":
        ap = AlphaParam.of(alpha).require_sector()
        a = ap.alpha
        wc = complex(require_sector_point(ap, complex(w)))
        om = np.conj(complex(zeta(ap, np.complex128(wc))))
        cw = 4.0 * np.conj(wc) / (a * _beta_half(a)) * np.exp(-(a * a / (4.0 * t)) * om)

        def scaled(z):
            zc = np.asarray(z, dtype=complex)
            return cw * zc * np.exp(-(a + 1.0) * np.log(_cpow(zc, ap.zeta_power) + om))

        el = cls(alpha, t, scaled, label=f"K(.,{wc})")
        el.section_point = wc
        return el

    @classmethod
    def from_factor(cls, alpha, t, f: Callable, label: str = "F(f)") -> "GSpaceElement":
        ap = AlphaParam.of(alpha).require_sector()
        p = ap.image_power
        return cls(alpha, t, lambda z: _cpow(z, p) * f(np.asarray(z, dtype=complex)), label=label, factor=f)

    def scaled(self, z) -> np.ndarray:
        return np.asarray(self._scaled(np.asarray(z, dtype=complex)), dtype=complex)

    def __call__(self, z):
        zc = np.asarray(z, dtype=complex)
        a = self.alpha
        out = self.scaled(zc) * np.exp(-(a * a / (4.0 * self.t)) * _cpow(zc, self.ap.zeta_power))
        return complex(out) if np.ndim(out) == 0 else out

    def factor(self, z):
        zc = np.asarray(z, dtype=complex)
        if self._factor is not None:
            return np.asarray(self._factor(zc), dtype=complex)
        return self.scaled(zc) * _cpow(zc, -self.ap.image_power)

    def factor_consistency(self, z) -> float:
        """Max relative gap between F and its reconstruction from the factor."""
        if self._factor is None:
            return 0.0
        zc = np.asarray(z, dtype=complex)
        a = self.alpha
        rec = _cpow(zc, self.ap.image_power) * np.exp(-(a * a / (4 * self.t)) * _cpow(zc, self.ap.zeta_power)) * self._factor(zc)
        ref = self(zc)
        return float(np.max(np.abs(rec - ref) / np.maximum(np.abs(ref), 1e-300)))

    def on_mesh(self, mesh: SectorMesh) -> np.ndarray:
        key = (mesh, self.t)
        if key not in self._mesh_cache:
            self._mesh_cache[key] = self.scaled(mesh.z) if mesh.size else np.zeros((0, 0), complex)
        return self._mesh_cache[key]

    def scale(self, c) -> "GSpaceElement":
        return GSpaceElement(self.alpha, self.t, lambda z: c * self.scaled(z), label=f"{c}*{self.label}")

    def __add__(self, other: "GSpaceElement") -> "GSpaceElement":
        if other.alpha != self.alpha or other.t != self.t:
            raise ValueError("elements of different spaces")
        return GSpaceElement(self.alpha, self.t, lambda z: self.scaled(z) + other.scaled(z), label=f"{self.label}+{other.label}")


def zero_element(alpha, t) -> GSpaceElement:
    return GSpaceElement(alpha, t, lambda z: np.zeros(np.shape(z), dtype=complex), label="0")


def _inner_on(ap, F: GSpaceElement, G: GSpaceElement, mesh: SectorMesh) -> complex:
    if mesh.size == 0:
        return 0j
    dens = measure_constant(ap.alpha) * _measure_poly(ap, mesh.z)
    return complex(mesh.integrate(F.on_mesh(mesh) * np.conj(G.on_mesh(mesh)) * dens))


def gspace_inner(alpha, t, F: GSpaceElement, G: GSpaceElement, mesh: SectorMesh, tail_tol: float | None = None,
                 full_output: bool = False):
    """<F, G> = int F conj(G) d mu over the mesh region.

    With ``tail_tol`` the value is recomputed on the enlarged mesh and an
    :class:`AccuracyWarning` issued when the two differ by more than
    ``tail_tol`` relative. ``full_output`` returns (value, enlarged value or None).
    """
    ap = AlphaParam.of(alpha).require_sector()
    for el in (F, G):
        if el.alpha != ap.alpha or el.t != float(t):
            raise ValueError("element does not belong to this (alpha, t) space")
    val = _inner_on(ap, F, G, mesh)
    big = None
    if tail_tol is not None:
        big = _inner_on(ap, F, G, mesh.enlarged())
        if abs(big - val) > tail_tol * max(abs(big), 1e-300):
            warnings.warn(f"inner product tail not converged: {val!r} vs enlarged {big!r}", AccuracyWarning)
    return (val, big) if full_output else val


def gspace_norm(alpha, t, F, mesh) -> float:
    return math.sqrt(max(gspace_inner(alpha, t, F, F, mesh).real, 0.0))


def bergman_factor_norm(alpha, f: Callable, mesh: SectorMesh) -> float:
    """Norm of f in the weighted sector Bergman space of order alpha-1:
    (alpha pi^{1/2})^{alpha-1} int |f|^2 (Re z^{2/alpha})^{alpha-1} |z|^{(alpha-2)(alpha-1)/alpha} dA."""
    ap = AlphaParam.of(alpha).require_sector()
    a = ap.alpha
    if mesh.size == 0:
        return 0.0
    z = mesh.z
    re = np.real(_cpow(z, ap.zeta_power))
    wgt = re ** (a - 1.0) * np.abs(z) ** ((a - 2.0) * (a - 1.0) / a)
    fv = np.asarray(f(z), dtype=complex)
    sq = (a * math.sqrt(math.pi)) ** (a - 1.0) * float(np.real(mesh.integrate(np.abs(fv) ** 2 * wgt)))
    return math.sqrt(max(sq, 0.0))


def gspace_norm_factorized(alpha, t, f: Callable | GSpaceElement, mesh: SectorMesh) -> float:
    """B(a/2,a/2)^{1/2} / ((a/2)^{(a-1)/2} pi^{(a+1)/4}) * ||f||, f the Bergman factor."""
    ap = AlphaParam.of(alpha).require_sector()
    a = ap.alpha
    fn = f.factor if isinstance(f, GSpaceElement) else f
    c = math.sqrt(_beta_half(a)) / ((0.5 * a) ** (0.5 * (a - 1.0)) * math.pi ** (0.25 * (a + 1.0)))
    return c * bergman_factor_norm(a, fn, mesh)


# decay and smoothing -------------------------------------------------------


def kernel_section(alpha, w0=1.0 + 0j):
    """x -> K_{Delta_alpha, alpha-1}(x, w0) and its x-derivative, for real x > 0."""
    ap = AlphaParam.of(alpha).require_sector()
    a = ap.alpha
    spec = WeightedKernelSpec.sector(a, a - 1.0)
    nu = a - 1.0
    q = ((2.0 - a) / a) * (1.0 + 0.5 * nu)
    om = np.conj(_cpow(complex(w0), ap.zeta_power))

    def f(x):
        return bergman_kernel(spec, np.asarray(x, dtype=complex), complex(w0))

    def df(x):
        xc = np.asarray(x, dtype=complex)
        zt = _cpow(xc, ap.zeta_power)
        return f(xc) * (q / xc - (nu + 2.0) * ap.zeta_power * zt / xc / (zt + om))

    return f, df


def _tail_decreasing(vals) -> bool:
    v = np.abs(np.asarray(vals))
    return bool(np.all(np.diff(v) < 0))


def decay_profile(alpha, f: Callable, j: int, x_grid=None, df: Callable | None = None) -> DiagnosticsReport:
    """x^{j + (alpha+1)/2} d^j f/dx^j on a geometric grid; both tails should fall toward 0.

    ``df`` supplies the j-th derivative; otherwise central differences with a
    relative step are used (only for j <= 2).
    """
    ap = AlphaParam.of(alpha).require_sector()
    a = ap.alpha
    xs = np.geomspace(1e-3, 1e3, 25) if x_grid is None else np.asarray(x_grid, dtype=float)
    if j == 0:
        d = lambda x: np.asarray(f(x))
    elif df is not None:
        d = lambda x: np.asarray(df(x))
    else:
        if j > 2:
            warnings.warn("finite-difference derivatives beyond order 2 are noise-dominated", AccuracyWarning)
        def d(x):
            x = np.asarray(x, dtype=float)
            h = 1e-3 * x
            if j == 1:
                return (np.asarray(f(x + h)) - np.asarray(f(x - h))) / (2 * h)
            return (np.asarray(f(x + h)) - 2 * np.asarray(f(x)) + np.asarray(f(x - h))) / (h * h)
    vals = xs ** (j + 0.5 * (a + 1.0)) * d(xs)
    rep = DiagnosticsReport("decay_profile", {"alpha": a, "j": j, "x_min": float(xs[0]), "x_max": float(xs[-1])})
    tab = rep.table("profile", ["x", "value"])
    for x, v in zip(xs, vals):
        tab.add(float(x), complex(v))
    absv = np.abs(vals)
    peak = float(absv.max())
    if peak == 0.0:
        rep.check("identically zero", True, mode="true")
        return rep.finish()
    # approach toward 0+: the last four points read from right to left
    rep.check("tail at 0+ decreasing", _tail_decreasing(vals[:4][::-1]), mode="true")
    rep.check("tail at infinity decreasing", _tail_decreasing(vals[-4:]), mode="true")
    rep.check("end value at 0+ / peak", float(absv[0] / peak), tolerance=0.1, mode="max")
    rep.check("end value at infinity / peak", float(absv[-1] / peak), tolerance=0.1, mode="max")
    return rep.finish()


def smoothing_quantity(alpha, t, g, xi: float, j: int) -> float:
    """t^alpha |d^j/dxi^j (v(xi,t) xi^{-p} e^{(alpha^2/4t) xi^{2/alpha}})|^2 with v = L_t g.

    The bracket is xi^{-p} times the scaled transform at real xi, so it is
    evaluated without forming the growing exponential.
    """
    ap = AlphaParam.of(alpha).require_sector()
    p = ap.image_power
    sig = as_signal(g, t)
    b = lambda x: scaled_forward_L(ap, t, sig, np.asarray(x, dtype=complex)) * np.asarray(x, dtype=float) ** (-p)
    if j == 0:
        val = b(np.array([xi]))[0]
    else:
        h = 1e-2 * xi
        pts = xi + h * np.array([-2.0, -1.0, 1.0, 2.0])
        v = b(pts)
        if j == 1:
            val = (v[0] - 8 * v[1] + 8 * v[2] - v[3]) / (12 * h)
        elif j == 2:
            v0 = b(np.array([xi]))[0]
            val = (-v[0] + 16 * v[1] - 30 * v0 + 16 * v[2] - v[3]) / (12 * h * h)
        else:
            raise ValueError("j <= 2 supported")
    return float(t ** ap.alpha * abs(val) ** 2)


def smoothing_rate(alpha, g, j: int, xi: float, t_seq=None, min_drop: float = 10.0) -> DiagnosticsReport:
    """Tabulate the smoothing quantity along a decreasing t-sequence."""
    ap = AlphaParam.of(alpha).require_sector()
    ts = np.geomspace(1.0, 1e-2, 7) if t_seq is None else np.asarray(t_seq, dtype=float)
    if np.any(np.diff(ts) >= 0):
        raise ValueError("t-sequence must be decreasing")
    rep = DiagnosticsReport("smoothing_rate", {"alpha": ap.alpha, "j": j, "xi": float(xi), "t": ts.tolist()})
    tab = rep.table("quantity", ["t", "value"])
    vals = []
    for t in ts:
        v = smoothing_quantity(ap, float(t), g, xi, j)
        vals.append(v)
        tab.add(float(t), v)
    vals = np.asarray(vals)
    if np.all(vals == 0):
        rep.check("identically zero", True, mode="true")
        return rep.finish()
    rep.check("monotone decrease", bool(np.all(np.diff(vals) < 0)), mode="true")
    rep.check("first/last ratio", float(vals[0] / max(vals[-1], 1e-300)), tolerance=min_drop, mode="min")
    return rep.finish()


def half_plane_rkhs_kernel(t, z, w):
    """Kernel of z e^{-z/t} A^2_1(C+) with the image-space norm:
    pi^{3/2} z conj(w) e^{-(z + conj w)/t} K_{C+,1}(z, w)."""
    zc = _require_half_plane(z)
    wc = _require_half_plane(w)
    k = bergman_kernel(WeightedKernelSpec.half_plane(1.0), zc, wc)
    out = math.pi ** 1.5 * zc * np.conj(wc) * np.exp(-(zc + np.conj(wc)) / t) * k
    return complex(out) if np.ndim(out) == 0 else out
