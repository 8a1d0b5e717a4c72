"""Forward transforms: the boundary-to-state map and its checks.

``forward_T(g)(z) = int_0^t K_alpha(z, t - tau) g(tau) dtau`` and
``forward_L(g) = forward_T(tau^alpha g) / t^alpha``.

Point evaluation has two routes. On the positive axis the substitution
``tau = t - alpha^2 x^{2/alpha} / (4 rho^2)`` turns the integral into a
Gaussian-weighted one without the endpoint concentration; off the axis the
time integral is done by tanh-sinh with the delicate endpoint tau = t mapped
to s = t - tau = 0.

Whole meshes go through :func:`scaled_forward_L`, which returns
``G(z) = exp(alpha^2 z^{2/alpha} / (4t)) * forward_L(g)(z)``. In the variable
``u = 1/s - 1/t`` the transform becomes a Laplace integral
``G = C z t^-alpha int_0^inf (u + 1/t)^{alpha/2-1} h(tau(u)) e^{-a u} du``
with ``a = alpha^2 z^{2/alpha} / 4``. When ``h`` continues analytically the
ray is turned onto ``arg u = -arg a`` so that the integrand is not
oscillatory, which keeps points next to the sector edge as cheap as any other.
"""

from __future__ import annotations

import math
import re
import warnings
from typing import Callable

import numpy as np
from numpy.polynomial import Polynomial
from scipy.interpolate import CubicSpline, PchipInterpolator

from .errors import AccuracyWarning, DomainError
from .heat_kernel import AlphaParam, apply_D, require_sector_point, zeta
from .parallel import for_chunks
from .quadrature import QuadResult, exp_sinh, gauss_legendre, gl_panels, tanh_sinh
from .report import DiagnosticsReport
from .specfun import bessel_k

INF = math.inf


def _smoothness_order(tag: str) -> float:
    tag = tag.strip()
    if tag in ("L2", "L2-only"):
        return -1
    if tag == "continuous":
        return 0
    if tag in ("analytic", "Cinf", "C^inf"):
        return INF
    m = re.fullmatch(r"C\^?\{?(\d+)\}?", tag)
    if m:
        return int(m.group(1))
    raise ValueError(f"unknown smoothness tag {tag!r}")


class BoundarySignal:
    """Boundary datum g on [0, t].

    Either a callable or a sampled table (monotone cubic interpolation).
    ``smoothness`` is one of "L2", "continuous", "C<m>" or "analytic" and
    gates :meth:`derivative`. ``complex_ok`` declares that the callable also
    accepts complex tau and is analytic there; table signals are analytic
    piece by piece.
    """

    def __init__(
        self,
        t: float,
        func: Callable,
        *,
        smoothness: str = "continuous",
        derivatives: Callable[[int], Callable] | None = None,
        complex_ok: bool = False,
        label: str = "g",
    ):
        if not t > 0:
            raise DomainError("signal domain end t must be positive")
        self.t = float(t)
        self._func = func
        self.smoothness = smoothness
        self.order = _smoothness_order(smoothness)
        self._derivatives = derivatives
        self.complex_ok = complex_ok
        self.label = label
        self.pieces = None  # (breaks, coeffs) for table signals
        self.samples = None
        self.is_zero = False

    # constructors ------------------------------------------------------

    @classmethod
    def from_function(cls, func, t, smoothness="continuous", derivatives=None, complex_ok=False, label="g"):
        return cls(t, func, smoothness=smoothness, derivatives=derivatives, complex_ok=complex_ok, label=label)

    @classmethod
    def polynomial(cls, coeffs, t, label=None) -> "BoundarySignal":
        """g(tau) = sum_k coeffs[k] tau^k, analytic with exact derivatives."""
        p = Polynomial(np.asarray(coeffs, dtype=complex if np.iscomplexobj(coeffs) else float))
        sig = cls(
            t,
            p,
            smoothness="analytic",
            derivatives=lambda m: p.deriv(m) if m > 0 else p,
            complex_ok=True,
            label=label or "poly[" + ",".join(f"{c:g}" for c in np.atleast_1d(p.coef)) + "]",
        )
        sig.is_zero = bool(np.all(p.coef == 0))
        return sig

    @classmethod
    def constant(cls, c, t) -> "BoundarySignal":
        return cls.polynomial([c], t, label=f"const({c})")

    @classmethod
    def monomial(cls, k: int, t, c=1.0) -> "BoundarySignal":
        coeffs = [0.0] * k + [c]
        return cls.polynomial(coeffs, t, label=f"tau^{k}" if c == 1.0 else f"{c}*tau^{k}")

    @classmethod
    def from_samples(cls, tau, values, t=None, label="table") -> "BoundarySignal":
        """Monotone cubic (PCHIP) interpolant of samples; tagged C1."""
        tau = np.asarray(tau, dtype=float)
        vals = np.asarray(values)
        if tau.ndim != 1 or tau.size < 2 or vals.shape != tau.shape:
            raise ValueError("need at least two samples with matching tau and values")
        if not np.all(np.isfinite(tau)) or not np.all(np.isfinite(vals)):
            raise ValueError("samples must be finite")
        if np.any(np.diff(tau) <= 0):
            raise ValueError("sample times must be strictly increasing")
        t = float(tau[-1]) if t is None else float(t)
        if tau[0] < 0 or tau[-1] > t * (1 + 1e-12):
            raise DomainError("sample times must lie in [0, t]")
        is_c = np.iscomplexobj(vals) and np.any(vals.imag != 0)
        ip_re = PchipInterpolator(tau, vals.real, extrapolate=True)
        ip_im = PchipInterpolator(tau, vals.imag, extrapolate=True) if is_c else None

        def func(x):
            out = ip_re(x)
            return out + 1j * ip_im(x) if ip_im is not None else out

        def derivs(m):
            d_re = ip_re.derivative(m)
            d_im = ip_im.derivative(m) if ip_im is not None else None
            return lambda x: d_re(x) + 1j * d_im(x) if d_im is not None else d_re(x)

        sig = cls(t, func, smoothness="C1", derivatives=derivs, label=label)
        breaks = ip_re.x.copy()
        coeffs = ip_re.c.astype(complex)
        if ip_im is not None:
            coeffs = coeffs + 1j * ip_im.c
        sig.pieces = (breaks, coeffs)
        sig.samples = (tau.copy(), vals.copy())
        sig.is_zero = bool(np.all(vals == 0))
        sig._ip = (ip_re, ip_im)
        return sig

    # evaluation --------------------------------------------------------

    def __call__(self, tau):
        out = self._func(tau)
        if np.ndim(out) == 0 and np.ndim(tau) > 0:
            out = np.full(np.shape(tau), out)
        return out

    @property
    def is_complex(self) -> bool:
        probe = np.asarray(self(np.linspace(0.0, self.t, 7)))
        return bool(np.iscomplexobj(probe) and np.any(probe.imag != 0))

    def derivative(self, m: int) -> Callable:
        """d^m g / dtau^m; refuses when the smoothness tag is below C^m."""
        if m < 0:
            raise ValueError("derivative order must be >= 0")
        if m == 0:
            return self
        if m > self.order:
            raise DomainError(f"signal tagged {self.smoothness!r}; derivative of order {m} refused")
        if self._derivatives is None:
            raise DomainError("no derivative available for this signal")
        return self._derivatives(m)

    def weighted_norm_sq(self, alpha, t: float | None = None) -> float:
        """(1/t^alpha) int_0^t |g(tau)|^2 tau^alpha dtau."""
        a = AlphaParam.of(alpha).alpha
        t = self.t if t is None else t
        if self.is_zero:
            return 0.0
        f = lambda x: np.abs(self(x)) ** 2 * (x / t) ** a
        if self.pieces is not None:
            # integrate piece by piece so the kinks of the interpolant sit on panel edges
            b = np.clip(self.pieces[0], 0.0, t)
            edges = np.unique(np.concatenate([[0.0], b, [t]]))
            x, w = gl_panels(edges, 16)
            return float(np.sum(w * f(x)))
        return float(tanh_sinh(f, 0.0, t, rtol=1e-13, raise_on_fail=False).value)

    def interpolation_error(self) -> float:
        """Rough interpolation error of a table signal: max gap between the
        monotone cubic and a not-a-knot cubic spline at sample midpoints.
        Zero for callables."""
        if self.samples is None:
            return 0.0
        tau, vals = self.samples
        if tau.size < 4:
            return math.nan
        mid = 0.5 * (tau[1:] + tau[:-1])
        cs = CubicSpline(tau, vals)
        return float(np.max(np.abs(cs(mid) - self(mid))))

    def times_power(self, alpha) -> Callable:
        """The callable tau -> tau^alpha g(tau) (principal power)."""
        a = AlphaParam.of(alpha).alpha

        def h(tau):
            tau = np.asarray(tau)
            if np.iscomplexobj(tau):
                return np.exp(a * np.log(tau)) * self(tau)
            return np.power(tau, a) * self(tau)

        return h

    def __repr__(self):
        return f"BoundarySignal({self.label}, t={self.t}, {self.smoothness})"


def as_signal(g, t: float) -> BoundarySignal:
    if isinstance(g, BoundarySignal):
        if t > g.t * (1 + 1e-12):
            raise DomainError(f"signal is defined up to {g.t}, transform asked at t={t}")
        return g
    if isinstance(g, Polynomial):
        return BoundarySignal.polynomial(g.coef, t)
    if callable(g):
        return BoundarySignal.from_function(g, t)
    if np.isscalar(g):
        return BoundarySignal.constant(g, t)
    raise TypeError("boundary signal must be a BoundarySignal, a callable or a constant")


def _check_t(t):
    if not (t > 0 and math.isfinite(t)):
        raise DomainError(f"time must be positive and finite, got {t}")
    return float(t)


# point evaluation --------------------------------------------------------


def _forward_real(ap: AlphaParam, t: float, g: Callable, x: float, rtol: float) -> QuadResult:
    a = ap.alpha
    if not x > 0:
        raise DomainError("real evaluation point must be positive")
    lam = a * x ** (1.0 / a) / (2.0 * math.sqrt(t))
    c = 2.0 / math.gamma(0.5 * a)

    def f(rho):
        # t - b/rho^2 with b = lam^2 t, written to keep precision near rho = lam
        tau = t * (rho - lam) * (rho + lam) / (rho * rho)
        tau = np.clip(tau, 0.0, t)
        return c * rho ** (a - 1.0) * np.exp(-rho * rho) * g(tau)

    return exp_sinh(f, lam, scale=1.0 / (1.0 + 2.0 * lam), rtol=rtol, atol=1e-300)


def _forward_complex(ap: AlphaParam, t: float, g: Callable, z: complex, rtol: float) -> QuadResult:
    require_sector_point(ap, z)
    a = ap.alpha
    zt = complex(zeta(ap, np.complex128(z)))
    aa = a * a * zt / 4.0
    logc = math.log(ap.kernel_constant) + np.log(complex(z))

    def f(s):
        with np.errstate(under="ignore", over="ignore", invalid="ignore"):
            k = np.exp(logc - ap.time_power * np.log(s) - aa / s)
            out = k * g(t - s)
        return np.where(np.isfinite(out), out, 0.0)

    return tanh_sinh(f, 0.0, t, rtol=rtol, atol=1e-300)


def forward_T(alpha, t, g, z, rtol: float = 1e-8, full_output: bool = False):
    """(T_t^alpha g)(z) = int_0^t K_alpha(z, t - tau) g(tau) dtau.

    Real ``z > 0`` uses the Gaussian-weighted substituted form; complex
    ``z`` (strictly inside the sector, ``alpha <= 2``) the tanh-sinh rule in
    ``s = t - tau``. Raises :class:`QuadratureError` with the achieved error
    when ``rtol`` is not reached. ``full_output`` returns a QuadResult.
    """
    ap = AlphaParam.of(alpha)
    t = _check_t(t)
    sig = as_signal(g, t)
    if sig.is_zero:
        res = QuadResult(0.0, 0.0, 0)
    elif isinstance(z, complex) or np.iscomplexobj(z):
        zc = complex(z)
        if zc.imag == 0 and zc.real > 0:
            res = _forward_real(ap, t, sig, zc.real, rtol)
            res = QuadResult(complex(res.value), res.error, res.nodes)
        else:
            ap.require_sector()
            res = _forward_complex(ap, t, sig, zc, rtol)
    else:
        res = _forward_real(ap, t, sig, float(z), rtol)
    return res if full_output else res.value


def forward_L(alpha, t, g, z, rtol: float = 1e-8, full_output: bool = False):
    """(L_t^alpha g)(z) = forward_T(tau^alpha g)(z) / t^alpha."""
    ap = AlphaParam.of(alpha)
    t = _check_t(t)
    sig = as_signal(g, t)
    if sig.is_zero:
        res = QuadResult(0.0, 0.0, 0)
    else:
        h = BoundarySignal.from_function(sig.times_power(ap), t)
        r = forward_T(ap, t, h, z, rtol=rtol, full_output=True)
        scale = t ** (-ap.alpha)
        res = QuadResult(r.value * scale, r.error * scale, r.nodes)
    return res if full_output else res.value


def forward_L_points(alpha, t, g, points, rtol: float = 1e-8):
    """forward_L at each point; returns (values, error estimates)."""
    pts = list(np.atleast_1d(points))
    vals = np.empty(len(pts), dtype=complex)
    errs = np.empty(len(pts))
    for i, p in enumerate(pts):
        r = forward_L(alpha, t, g, p, rtol=rtol, full_output=True)
        vals[i] = r.value
        errs[i] = r.error
    return vals, errs


# scaled evaluation on arrays ------------------------------------------------

_VHI = math.log(60.0)  # e^{-60} ends the Laplace variable range


def _log_grid(lo: float, width: float = 1.0, n: int = 10):
    edges = np.arange(lo, _VHI + width, width)
    l, wl = gl_panels(edges, n)
    v = np.exp(l)
    return v, wl * v


def _sorted_chunks(body, A, chunk):
    """Run ``body(idx)`` over index chunks of A sorted by size, so each chunk
    can size its Laplace grid from its own smallest |a|."""
    order = np.argsort(A, kind="stable")
    for_chunks(lambda sl: body(order[sl]), A.size, chunk)


def _ray_origin(ap, t, h, A, th, chunk=256):
    """int_0^inf (u + 1/t)^{a/2-1} h(tau(u)) e^{-a u} du along arg u = -arg a,
    for arrays |a| = A and arg a = th (flattened)."""
    al = ap.alpha
    out = np.empty(A.shape, dtype=complex)

    def body(idx):
        a_i = A[idx]
        lo = math.log(min(float(a_i[0]) / t, 1.0)) - 37.0 / (al + 1.0)
        v, wv = _log_grid(lo)
        wv = wv * np.exp(-v)
        rot = np.exp(-1j * th[idx])
        u = (v[None, :] / a_i[:, None]) * rot[:, None]
        w1 = u + 1.0 / t
        tau = t * u / w1
        f = np.exp((0.5 * al - 1.0) * np.log(w1)) * h(tau)
        out[idx] = (f @ wv) * rot / a_i

    _sorted_chunks(body, A, chunk)
    return out


def _ray_from(ap, t, b, c, u0, A, th, chunk=256):
    """Same ray integral started at u0 > 0 and normalized by e^{-a u0}, for
    h(tau) = tau^alpha p(tau - b) with p the cubic with coefficients c
    (highest power first)."""
    al = ap.alpha
    out = np.empty(A.shape, dtype=complex)
    x0, w0 = gauss_legendre(12)

    def body(idx):
        a_i = A[idx]
        d = float(a_i[0]) * (u0 + 1.0 / t)
        v1 = 0.5 * min(1.0, d)
        vh = 0.5 * v1 * (x0 + 1.0)
        wh = 0.5 * v1 * w0
        vl, wl = _log_grid(math.log(v1), 1.0, 10)
        keep = vl > v1
        v = np.concatenate([vh, vl[keep]])
        wv = np.concatenate([wh, wl[keep]]) * np.exp(-v)
        rot = np.exp(-1j * th[idx])
        u = u0 + (v[None, :] / a_i[:, None]) * rot[:, None]
        w1 = u + 1.0 / t
        lw = np.log(w1)
        tau = t * u / w1
        d = tau - b
        f = np.exp((0.5 * al - 1.0) * lw + al * (np.log(t * u) - lw)) * (((c[0] * d + c[1]) * d + c[2]) * d + c[3])
        out[idx] = (f @ wv) * rot / a_i

    _sorted_chunks(body, A, chunk)
    return out


def _real_u(ap, t, h, A, th, vmax_cap=4000.0):
    """Fallback for signals without analytic continuation: integrate along real u."""
    al = ap.alpha
    out = np.empty(A.shape, dtype=complex)
    capped = False
    for i in range(A.size):
        e = complex(math.cos(th[i]), math.sin(th[i]))
        ca = math.cos(th[i])
        vmax = 40.0 / max(ca, 1e-300)
        if vmax > vmax_cap:
            vmax, capped = vmax_cap, True
        lo = math.log(min(A[i] / t, 1.0)) - 37.0 / (al + 1.0)
        e_lo = np.arange(lo, 0.0, 1.0)
        width = min(1.0, 2.0 / max(abs(math.sin(th[i])), 1e-12))
        e_hi = np.arange(1.0, vmax + width, width)
        edges = np.concatenate([np.exp(e_lo), e_hi])
        v, wv = gl_panels(np.concatenate([[0.0], edges]), 10)
        u = v / A[i]
        w1 = u + 1.0 / t
        tau = np.clip(t * u / w1, 0.0, t)
        f = w1 ** (0.5 * al - 1.0) * h(tau)
        out[i] = np.sum(wv * f * np.exp(-e * v)) / A[i]
    if capped:
        warnings.warn(
            "points close to the sector edge were truncated in the real-axis Laplace route; "
            "supply an analytic or tabulated signal for full accuracy",
            AccuracyWarning,
        )
    return out


def _piece_h(ap, breaks_j, coeffs_j):
    al = ap.alpha
    c = coeffs_j

    def ph(tau):
        d = tau - breaks_j
        p = ((c[0] * d + c[1]) * d + c[2]) * d + c[3]
        return np.exp(al * np.log(tau)) * p

    return ph


def _shift_cubic(c, s):
    """Coefficients of p(d + s) in d, for p(d) with coefficients c (highest first)."""
    c3, c2, c1, c0 = c
    return np.array([c3, 3 * c3 * s + c2, 3 * c3 * s * s + 2 * c2 * s + c1, ((c3 * s + c2) * s + c1) * s + c0])


def scaled_forward_L(alpha, t, g, z) -> np.ndarray:
    """G(z) = exp(alpha^2 z^{2/alpha}/(4t)) * (L_t^alpha g)(z) on an array of points.

    Analytic signals use a single rotated Laplace ray, table signals one ray
    pair per interpolation piece, other callables the real Laplace axis.
    Multiply by ``exp(-alpha^2 z^{2/alpha}/(4t))`` to recover forward_L.
    """
    ap = AlphaParam.of(alpha).require_sector()
    t = _check_t(t)
    sig = as_signal(g, t)
    zz = np.asarray(z, dtype=complex)
    shape = zz.shape
    zf = zz.ravel()
    if zf.size == 0:
        return np.zeros(shape, dtype=complex)
    require_sector_point(ap, zf, closed=True)
    if sig.is_zero:
        return np.zeros(shape, dtype=complex)
    al = ap.alpha
    aa = al * al * np.asarray(zeta(ap, zf)) / 4.0
    A = np.abs(aa)
    th = np.angle(aa)
    if sig.complex_ok:
        I = _ray_origin(ap, t, sig.times_power(ap), A, th)
    elif sig.pieces is not None:
        breaks, coeffs = sig.pieces
        n = coeffs.shape[1]
        # piece j covers [breaks[j], breaks[j+1]]; the end pieces extend to 0 and t
        tb = breaks.copy()
        tb[0] = 0.0
        tb[-1] = t
        ub = np.append(tb[:-1] / (t * (t - tb[:-1])), INF)
        # sum over pieces regrouped by shared break: each interior break u_j
        # gets one ray carrying the jump p_j - p_{j-1}, re-centred at breaks[j]
        I = _ray_origin(ap, t, _piece_h(ap, breaks[0], coeffs[:, 0]), A, th)
        for j in range(1, n):
            jump = coeffs[:, j] - _shift_cubic(coeffs[:, j - 1], breaks[j] - breaks[j - 1])
            I += np.exp(-aa * ub[j]) * _ray_from(ap, t, breaks[j], jump, ub[j], A, th)
    else:
        I = _real_u(ap, t, sig.times_power(ap), A, th)
    G = ap.kernel_constant * zf * t ** (-al) * I
    return G.reshape(shape)


# checks --------------------------------------------------------------------


def iterated_trace_check(alpha, t_values, g, m: int, xs=None, tol: float = 1e-3, rtol_quad: float = 1e-13):
    """Tabulate (D_x^alpha)^m u(x, t) for u = forward_T(g) as x -> 0+ and
    compare the extrapolated limit with d^m g / dt^m (t).

    The x-sequence halves; the limit is taken by Richardson extrapolation
    assuming an O(x) leading deviation.
    """
    ap = AlphaParam.of(alpha)
    if m < 0:
        raise ValueError("m must be >= 0")
    if m > 2:
        raise ValueError("iterated traces beyond m = 2 are too noisy for finite differences")
    rep = DiagnosticsReport("iterated_trace_check", {"alpha": ap.alpha, "m": m, "t": list(map(float, t_values))})
    t_values = [float(t) for t in np.atleast_1d(t_values)]
    tmax = max(t_values)
    sig = as_signal(g, tmax)
    target_fn = sig.derivative(m)
    xs = np.array([0.08, 0.04, 0.02, 0.01]) if xs is None else np.asarray(xs, dtype=float)
    tab = rep.table("trace", ["t", "x", "value", "target"])
    for t in t_values:
        u = lambda x, t=t: forward_T(ap, t, sig, float(x), rtol=rtol_quad)
        vals = []
        for x in xs:
            if m == 0:
                v = u(x)
            else:
                h = 0.25 * x
                v = apply_D(ap, u, float(x), h, m=m)
                noise = rtol_quad * abs(u(x)) * (4.0 * m * m / (h * h)) ** m * x ** (m * ap.coefficient_power)
                if noise > 0.1 * max(abs(v), 1e-300) and noise > tol:
                    warnings.warn(f"stencil noise {noise:.2g} exceeds the signal at x={x}", AccuracyWarning)
            target = complex(np.asarray(target_fn(np.array([t])))[0])
            target = target.real if target.imag == 0 else target
            vals.append(v)
            tab.add(t, float(x), v, target)
        vals = np.asarray(vals)
        ratios = xs[:-1] / xs[1:]
        rich = (ratios * vals[1:] - vals[:-1]) / (ratios - 1.0)
        limit = rich[-1]
        rep.check(f"limit t={t:g}", float(abs(limit - target)), target=0.0, tolerance=tol, mode="max",
                  note=f"extrapolated {complex(limit)!r} vs {target!r}")
    return rep.finish()


def laplace_V(alpha, x, s) -> float:
    """V(x, s) = 2 a^{a/2} / (2^{a/2} Gamma(a/2)) s^{a/4} x^{1/2} K_{a/2}(a s^{1/2} x^{1/a})."""
    ap = AlphaParam.of(alpha)
    a = ap.alpha
    if not (x > 0 and s > 0):
        raise DomainError("laplace_V needs x, s > 0")
    pref = 2.0 * (0.5 * a) ** (0.5 * a) / math.gamma(0.5 * a)
    return pref * s ** (0.25 * a) * math.sqrt(x) * bessel_k(0.5 * a, a * math.sqrt(s) * x ** (1.0 / a))


def laplace_of_kernel(alpha, x, s, rtol: float = 1e-12) -> tuple[float, float]:
    """int_0^inf e^{-s t} K_alpha(x, t) dt, truncated at a tail bound.

    Returns (value, tail bound). The range is cut geometrically around the
    kernel peak so tanh-sinh sees one scale per panel.
    """
    ap = AlphaParam.of(alpha)
    a = ap.alpha
    b = a * a * x ** (2.0 / a) / 4.0
    peak = b / ap.time_power

    def f(tt):
        with np.errstate(under="ignore", over="ignore", invalid="ignore"):
            lk = math.log(ap.kernel_constant * x) - ap.time_power * np.log(tt) - b / tt - s * tt
            return np.exp(lk)

    # tail bound past T: K <= C x T^{-a/2-1} e^{-b/T}, so tail <= that * e^{-sT}/s
    T = max(peak, 1.0 / s)
    while True:
        bound = ap.kernel_constant * x * T ** (-ap.time_power) * math.exp(-s * T) / s
        if bound < 1e-17 * max(f(np.array([peak]))[0] * peak, 1e-300) or T > 1e6:
            break
        T *= 1.5
    edges = [0.0]
    e = peak / 64.0
    while e < T:
        edges.append(e)
        e *= 4.0
    edges.append(T)
    total = 0.0
    for lo, hi in zip(edges[:-1], edges[1:]):
        total += tanh_sinh(f, lo, hi, rtol=rtol, atol=1e-300, raise_on_fail=False).value
    return float(total), float(bound)


def laplace_check(alpha, x, s, tol: float = 1e-6) -> DiagnosticsReport:
    """Numerical Laplace transform of K_alpha(x, .) against the Bessel closed form."""
    ap = AlphaParam.of(alpha)
    rep = DiagnosticsReport("laplace_check", {"alpha": ap.alpha, "x": float(x), "s": float(s)})
    num, tail = laplace_of_kernel(ap, x, s)
    ref = laplace_V(ap, x, s)
    rel = abs(num - ref) / abs(ref)
    rep.check("transform vs V", rel, target=0.0, tolerance=tol, mode="max", note=f"numeric {num!r}, closed form {ref!r}, tail bound {tail:.2g}")
    if ap.alpha == 1.0:
        heat = math.exp(-math.sqrt(s) * x)
        rep.check("V vs exp(-sqrt(s) x)", abs(ref - heat) / heat, target=0.0, tolerance=1e-12, mode="max")
    return rep.finish()


def laplace_limit_check(alpha, s, xs=(1e-2, 1e-4, 1e-6), tol: float = 1e-3) -> DiagnosticsReport:
    """V(x, s) -> 1 as x -> 0+, with Richardson extrapolation in x."""
    ap = AlphaParam.of(alpha)
    rep = DiagnosticsReport("laplace_limit_check", {"alpha": ap.alpha, "s": float(s), "x": list(xs)})
    tab = rep.table("V", ["x", "V"])
    xs = np.asarray(xs, dtype=float)
    vals = np.array([laplace_V(ap, x, s) for x in xs])
    for x, v in zip(xs, vals):
        tab.add(float(x), float(v))
    r = xs[-2] / xs[-1]
    limit = (r * vals[-1] - vals[-2]) / (r - 1.0)
    rep.check("limit V(0+, s)", abs(limit - 1.0), target=0.0, tolerance=tol, mode="max", note=f"extrapolated {limit!r}")
    return rep.finish()


def trace_limit_check(alpha, t, g, xs=(1e-2, 1e-3, 1e-4), tol: float = 1e-3) -> DiagnosticsReport:
    """forward_L(g)(x) -> g(t) as x -> 0+ (the boundary condition)."""
    ap = AlphaParam.of(alpha)
    sig = as_signal(g, t)
    rep = DiagnosticsReport("trace_limit_check", {"alpha": ap.alpha, "t": float(t), "x": list(xs)})
    xs = np.asarray(xs, dtype=float)
    vals = np.array([forward_L(ap, t, sig, float(x), rtol=1e-12) for x in xs])
    tab = rep.table("trace", ["x", "value"])
    for x, v in zip(xs, vals):
        tab.add(float(x), v)
    r = xs[-2] / xs[-1]
    limit = (r * vals[-1] - vals[-2]) / (r - 1.0)
    target = complex(np.asarray(sig(np.array([t])))[0])
    rep.check("trace", abs(limit - target), target=0.0, tolerance=tol, mode="max", note=f"extrapolated {complex(limit)!r}")
    return rep.finish()
