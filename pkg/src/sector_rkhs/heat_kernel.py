"""The fundamental kernel of ``u_t = x^{2(a-1)/a} u_xx`` and its profile.

``kernel_K`` is the positive kernel whose time convolution with the boundary
datum solves the half-line problem; ``profile_W`` is its convolution with the
constant 1. Both extend analytically to the sector ``|arg z| < pi a / 4``
through principal-branch powers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property
from typing import Callable

import numpy as np

from .errors import DomainError
from .specfun import cpow_principal, erfc_alpha


@dataclass(frozen=True)
class AlphaParam:
    """The exponent alpha with its derived exponents.

    ``alpha > 0`` always; sector operations additionally need
    ``0 < alpha <= 2`` and call :meth:`require_sector`.
    """

    alpha: float

    def __post_init__(self):
        a = float(self.alpha)
        if not (a > 0 and math.isfinite(a)):
            raise DomainError(f"alpha must be a positive finite number, got {self.alpha}")
        object.__setattr__(self, "alpha", a)

    @classmethod
    def of(cls, alpha) -> "AlphaParam":
        return alpha if isinstance(alpha, AlphaParam) else cls(alpha)

    @cached_property
    def zeta_power(self) -> float:
        """2/alpha, the power mapping the sector onto the right half plane."""
        return 2.0 / self.alpha

    @cached_property
    def coefficient_power(self) -> float:
        """2(alpha-1)/alpha, the power of x in the diffusion coefficient."""
        return 2.0 * (self.alpha - 1.0) / self.alpha

    @cached_property
    def image_power(self) -> float:
        """(alpha-1)(alpha+2)/(2 alpha), the power prefactor of the image space."""
        a = self.alpha
        return (a - 1.0) * (a + 2.0) / (2.0 * a)

    @cached_property
    def time_power(self) -> float:
        """alpha/2 + 1, the power of the kernel's time denominator."""
        return 0.5 * self.alpha + 1.0

    @cached_property
    def kernel_constant(self) -> float:
        """(alpha/2)^alpha / Gamma(alpha/2) = alpha^alpha / (2^alpha Gamma(alpha/2))."""
        a = self.alpha
        return math.exp(a * math.log(0.5 * a) - math.lgamma(0.5 * a))

    @cached_property
    def half_angle(self) -> float:
        """Opening half-angle pi*alpha/4 of the sector."""
        return 0.25 * math.pi * self.alpha

    def require_sector(self) -> "AlphaParam":
        if not self.alpha <= 2.0:
            raise DomainError(f"sector operations need 0 < alpha <= 2, got {self.alpha}")
        return self


def in_sector(alpha, z, closed: bool = False):
    """Whether ``z`` lies in the open (or closed, minus the origin) sector."""
    ap = AlphaParam.of(alpha)
    zc = np.asarray(z, dtype=complex)
    arg = np.abs(np.angle(zc))
    inside = arg <= ap.half_angle if closed else arg < ap.half_angle
    return inside & (zc != 0)


def require_sector_point(alpha, z, closed: bool = False) -> np.ndarray:
    ap = AlphaParam.of(alpha).require_sector()
    zc = np.asarray(z, dtype=complex)
    if not np.all(in_sector(ap, zc, closed=closed)):
        kind = "closed" if closed else "open"
        raise DomainError(f"point(s) outside the {kind} sector |arg z| < {ap.half_angle:.6g}")
    return zc


def zeta(alpha, z):
    """z**(2/alpha) on the principal branch (real for positive real z)."""
    ap = AlphaParam.of(alpha)
    if np.isrealobj(z):
        return np.power(np.asarray(z, dtype=float), ap.zeta_power)
    return cpow_principal(z, ap.zeta_power)


def _check_time(t):
    tt = np.asarray(t, dtype=float)
    if np.any(~(tt > 0)):
        raise DomainError("time must be positive")
    return tt


def _kernel_args(alpha, z):
    ap = AlphaParam.of(alpha)
    if np.isrealobj(z):
        x = np.asarray(z, dtype=float)
        if np.any(~(x > 0)):
            raise DomainError("kernel needs x > 0 on the real axis")
        return ap, x
    return ap, require_sector_point(ap, z, closed=True)


def log_kernel_K(alpha, z, t):
    """Complex logarithm of K_alpha(z, t), principal in the imaginary part."""
    ap, zz = _kernel_args(alpha, z)
    tt = _check_time(t)
    zt = zeta(ap, zz)
    return (
        math.log(ap.kernel_constant)
        + np.log(zz.astype(complex) if np.iscomplexobj(zz) else zz)
        - ap.time_power * np.log(tt)
        - ap.alpha**2 * zt / (4.0 * tt)
    )


def kernel_K(alpha, z, t):
    """K_alpha(z, t) = (alpha/2)^alpha/Gamma(alpha/2) z t^{-alpha/2-1} exp(-alpha^2 z^{2/alpha}/(4t)).

    Real positive ``z`` gives a positive float; complex ``z`` must lie in the
    closed sector (and ``alpha <= 2``). Broadcasts over arrays.
    """
    ap, zz = _kernel_args(alpha, z)
    tt = _check_time(t)
    zt = zeta(ap, zz)
    val = ap.kernel_constant * zz * tt ** (-ap.time_power) * np.exp(-(ap.alpha**2) * zt / (4.0 * tt))
    if np.ndim(val) == 0:
        return complex(val) if np.iscomplexobj(val) else float(val)
    return val


def profile_W(alpha, x, t):
    """W_alpha(x, t) = erfc_alpha(alpha x^{1/alpha} / (2 sqrt t)), in (0, 1)."""
    ap = AlphaParam.of(alpha)
    xx = np.asarray(x, dtype=float)
    if np.any(~(xx > 0)):
        raise DomainError("profile_W needs x > 0")
    tt = _check_time(t)
    lam = ap.alpha * xx ** (1.0 / ap.alpha) / (2.0 * np.sqrt(tt))
    return erfc_alpha(ap.alpha, lam)


def apply_D(alpha, u: Callable, x: float, h: float, m: int = 1) -> float:
    """(D_x^alpha)^m u at x, D = x^{2(alpha-1)/alpha} d^2/dx^2, by central stencils.

    Each of the ``m`` nested levels uses the step ``h/m`` so the stencil
    footprint stays inside ``[x - h, x + h]``. Every level adds an O(h^2)
    truncation term, so the error model is O(m h^2); round-off grows like
    eps (m/h)^{2m}, which is why m is kept small.
    """
    ap = AlphaParam.of(alpha)
    if m < 0:
        raise ValueError("m must be >= 0")
    if not (x > 0 and h > 0):
        raise DomainError("apply_D needs x > 0 and h > 0")
    if not h < 0.5 * x:
        raise DomainError(f"step h={h} must be < x/2={0.5 * x} to stay off the degeneracy")
    if m == 0:
        return u(x)
    step = h / m
    c = ap.coefficient_power

    def level(f):
        return lambda y: y**c * (f(y + step) - 2.0 * f(y) + f(y - step)) / (step * step)

    f = u
    for _ in range(m):
        f = level(f)
    return f(x)


def kernel_bound_margin(alpha, z, t):
    """|K_alpha(z, t)| / (|z| Re(z^{2/alpha})^{-alpha/2-1}).

    Bounded uniformly in t > 0 for z strictly inside the sector; it tends to
    zero as t -> 0+ and as t -> infinity.
    """
    ap = AlphaParam.of(alpha).require_sector()
    zc = np.asarray(z, dtype=complex)
    if not np.all(in_sector(ap, zc)):
        raise DomainError("kernel_bound_margin needs z strictly inside the sector")
    tt = _check_time(t)
    re = np.real(cpow_principal(zc, ap.zeta_power))
    if np.any(re <= 0):
        raise DomainError("Re z^{2/alpha} vanishes: z on the sector boundary")
    log_m = (
        math.log(ap.kernel_constant)
        - ap.time_power * np.log(tt)
        - ap.alpha**2 * re / (4.0 * tt)
        + ap.time_power * np.log(re)
    )
    out = np.exp(log_m)
    return float(out) if np.ndim(out) == 0 else out


def kernel_pde_residual(alpha, x: float, t: float, h: float) -> float:
    """|central t-difference of K_alpha - apply_D(K_alpha)| at (x, t) with step h in both.

    Both stencils are O(h^2), so the residual should fall like h^2.
    """
    if not h < t:
        raise DomainError("time step must be smaller than t")
    k = lambda tt: float(kernel_K(alpha, x, tt))
    dt = (k(t + h) - k(t - h)) / (2.0 * h)
    dx = apply_D(alpha, lambda y: float(kernel_K(alpha, y, t)), x, h)
    return abs(dt - dx)


def kernel_pde_order(alpha, x: float, t: float, h0: float = 0.02, levels: int = 4) -> tuple[list, float]:
    """Residuals over h0, h0/2, ... and the smallest observed order log2(r_k / r_{k+1}).

    h0 is capped at x/8 and t/16 to start inside the asymptotic range.
    """
    h0 = min(h0, x / 8.0, t / 16.0)
    res = [kernel_pde_residual(alpha, x, t, h0 / 2**k) for k in range(levels)]
    orders = [math.log2(a / b) for a, b in zip(res[:-1], res[1:])]
    return res, min(orders)
