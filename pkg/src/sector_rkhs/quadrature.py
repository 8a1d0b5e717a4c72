"""Quadrature rules used across the package.

Double-exponential rules (tanh-sinh on finite intervals, exp-sinh on half
lines) handle endpoint singularities and essential zeros; composite
Gauss-Legendre panels handle smooth integrands on meshes; Wynn's epsilon
algorithm accelerates alternating partial sums of oscillatory integrals.

All reductions go through ``numpy.sum`` on contiguous arrays, which uses a
fixed pairwise order, so results do not depend on how callers batch work.
"""

from __future__ import annotations

import math
from functools import lru_cache
from typing import Callable, NamedTuple

import numpy as np
from numpy.polynomial.legendre import leggauss

from .errors import QuadratureError


class QuadResult(NamedTuple):
    value: complex | float
    error: float
    nodes: int


@lru_cache(maxsize=64)
def gauss_legendre(n: int) -> tuple[np.ndarray, np.ndarray]:
    """Nodes and weights of the ``n``-point Gauss-Legendre rule on [-1, 1]."""
    x, w = leggauss(n)
    x.setflags(write=False)
    w.setflags(write=False)
    return x, w


def gl_panels(edges, n: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite ``n``-point Gauss-Legendre rule over consecutive panels.

    ``edges`` is an increasing sequence of panel endpoints. Nodes come back
    panel by panel, in increasing order.
    """
    x, w = gauss_legendre(n)
    e = np.asarray(edges, dtype=float)
    if e.ndim != 1 or e.size < 2:
        raise ValueError("need at least two panel edges")
    a = e[:-1, None]
    b = e[1:, None]
    half = 0.5 * (b - a)
    nodes = (0.5 * (a + b) + half * x).ravel()
    weights = (half * w).ravel()
    return nodes, weights


def gl_integrate(f: Callable, a: float, b: float, n: int = 32, panels: int = 1):
    e = np.linspace(a, b, panels + 1)
    x, w = gl_panels(e, n)
    return np.sum(w * f(x))


# tanh-sinh ----------------------------------------------------------------

_TS_TMAX = 4.5


def _tanh_sinh_level(h: float, offset: float) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Abscissae t = offset + k*step of one refinement level, |t| <= _TS_TMAX.

    Returns (distance to the left endpoint of [0, 1], distance to the right
    endpoint, weight) for the map x = (1 + tanh(pi/2 sinh t)) / 2.
    """
    step = 2 * h if offset else h
    kmax = int(math.floor((_TS_TMAX - offset) / step))
    t = offset + step * np.arange(-kmax - (1 if offset else 0), kmax + 1)
    t = t[np.abs(t) <= _TS_TMAX]
    u = 0.5 * math.pi * np.sinh(t)
    # 1 - tanh(u) = 2 e^{-2u} / (1 + e^{-2u}), evaluated without cancellation
    e = np.exp(-2.0 * np.abs(u))
    small = e / (1.0 + e)  # distance of x to the nearer endpoint
    left = np.where(u < 0, small, 1.0 - small)
    right = np.where(u < 0, 1.0 - small, small)
    w = 0.5 * math.pi * np.cosh(t) / np.cosh(u) ** 2 * 0.5
    return left, right, w * h


def tanh_sinh(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    b: float,
    rtol: float = 1e-10,
    atol: float = 0.0,
    max_level: int = 10,
    raise_on_fail: bool = True,
) -> QuadResult:
    """Integrate ``f`` over [a, b] with the tanh-sinh rule.

    ``f`` is called on arrays of abscissae. Nodes near ``a`` are generated as
    ``a + d`` with ``d`` computed without cancellation, so put the endpoint
    where the integrand is delicate at ``a``.

    Refinement halves the step until two successive estimates agree to
    ``max(atol, rtol*|I|)``.
    """
    if not b > a:
        raise ValueError("tanh_sinh needs a < b")
    L = b - a
    h = 1.0
    left, right, w = _tanh_sinh_level(h, 0.0)
    x = np.where(left <= right, a + L * left, b - L * right)
    total = np.sum(w * f(x))
    n = x.size
    prev = total * L
    err = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        left, right, w = _tanh_sinh_level(h, h)
        x = np.where(left <= right, a + L * left, b - L * right)
        total = 0.5 * total + np.sum(w * f(x))
        n += x.size
        new = total * L
        err = abs(new - prev)
        prev = new
        if level >= 3 and err <= max(atol, rtol * abs(new)):
            return QuadResult(new, err, n)
    if raise_on_fail:
        raise QuadratureError(
            f"tanh-sinh did not converge (estimate {prev!r}, error {err:.3g})",
            estimate=prev,
            error=err,
        )
    return QuadResult(prev, err, n)


# exp-sinh ------------------------------------------------------------------

_ES_TMIN = -4.5
_ES_TMAX = 4.0


def exp_sinh(
    f: Callable[[np.ndarray], np.ndarray],
    a: float,
    scale: float = 1.0,
    rtol: float = 1e-10,
    atol: float = 0.0,
    max_level: int = 10,
    raise_on_fail: bool = True,
) -> QuadResult:
    """Integrate ``f`` over [a, inf) with the exp-sinh rule.

    ``x = a + scale * exp(pi/2 sinh t)``; ``scale`` should match the length
    scale on which the integrand decays.
    """
    if scale <= 0:
        raise ValueError("scale must be positive")

    def level_nodes(h, odd):
        if odd:
            k0 = math.ceil((_ES_TMIN - h) / (2 * h))
            k1 = math.floor((_ES_TMAX - h) / (2 * h))
            t = h + 2 * h * np.arange(k0, k1 + 1)
        else:
            t = h * np.arange(math.ceil(_ES_TMIN / h), math.floor(_ES_TMAX / h) + 1)
        ex = np.exp(0.5 * math.pi * np.sinh(t))
        return a + scale * ex, scale * ex * 0.5 * math.pi * np.cosh(t) * h

    h = 1.0
    x, w = level_nodes(h, False)
    with np.errstate(over="ignore", under="ignore", invalid="ignore"):
        total = np.sum(np.nan_to_num(w * f(x)))
    n = x.size
    prev = total
    err = math.inf
    for level in range(1, max_level + 1):
        h *= 0.5
        x, w = level_nodes(h, True)
        with np.errstate(over="ignore", under="ignore", invalid="ignore"):
            total = 0.5 * total + np.sum(np.nan_to_num(w * f(x)))
        n += x.size
        err = abs(total - prev)
        prev = total
        if level >= 2 and err <= max(atol, rtol * abs(total)):
            return QuadResult(total, err, n)
    if raise_on_fail:
        raise QuadratureError(
            f"exp-sinh did not converge (estimate {prev!r}, error {err:.3g})",
            estimate=prev,
            error=err,
        )
    return QuadResult(prev, err, n)


# series acceleration -------------------------------------------------------


def wynn_epsilon(partial_sums) -> tuple[float, float]:
    """Limit of a sequence of partial sums by Wynn's epsilon algorithm.

    Returns ``(limit, error_estimate)`` where the error estimate is the change
    between the last two even-column extrapolants.
    """
    s = [complex(v) for v in partial_sums]
    n = len(s)
    if n < 3:
        return s[-1], math.inf
    prev = [0j] * (n + 1)
    cur = s[:]
    evens = [cur[-1]]
    best = cur[-1]
    col = 0
    while len(cur) > 1:
        nxt = []
        for i in range(len(cur) - 1):
            d = cur[i + 1] - cur[i]
            if d == 0:
                # sequence already stationary at working precision
                return _real_if(cur[i + 1], s), 0.0
            nxt.append(prev[i + 1] + 1.0 / d)
        prev, cur = cur, nxt
        col += 1
        if col % 2 == 0 and cur:
            evens.append(cur[-1])
    best = evens[-1]
    err = abs(evens[-1] - evens[-2]) if len(evens) > 1 else math.inf
    if not np.isfinite(best):
        best, err = s[-1], abs(s[-1] - s[-2])
    return _real_if(best, s), err


def _real_if(value: complex, seq) -> complex | float:
    if all(v.imag == 0 for v in seq):
        return value.real
    return value
