"""Polar quadrature meshes over truncated sectors.

The region ``r_min <= |z| <= R, |arg z| <= pi alpha/4 - delta`` is tiled in
log-polar coordinates (l = log r, theta): uniform panels in l and panels in
theta graded geometrically toward both sector edges. Every tile carries an
``order x order`` Gauss-Legendre rule; the area element is r^2 dl dtheta.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import cached_property

import numpy as np

from .errors import DomainError
from .heat_kernel import AlphaParam
from .quadrature import gauss_legendre


def _angular_edges(theta_max: float, edge_gap: float, ratio: float) -> np.ndarray:
    """Panel edges on [-theta_max, theta_max], graded toward both ends.

    Distances to the true sector edge shrink geometrically by ``ratio``
    from the centre line down to ``edge_gap``.
    """
    full = theta_max + edge_gap
    d = [full]
    while d[-1] * ratio > edge_gap * (1.0 + 1e-12):
        d.append(d[-1] * ratio)
    d.append(edge_gap)
    half = full - np.asarray(d)
    half[0] = 0.0
    half = np.unique(half)
    return np.concatenate([-half[::-1], half[1:]])


@dataclass(frozen=True)
class SectorMesh:
    alpha: float
    r_min: float
    R: float
    delta: float
    order: int = 8
    dl: float = 0.25
    ratio: float = 0.5
    _cache: dict = field(default_factory=dict, init=False, repr=False, compare=False, hash=False)

    def __post_init__(self):
        ap = AlphaParam.of(self.alpha).require_sector()
        object.__setattr__(self, "alpha", ap.alpha)
        if not (self.r_min > 0 and self.R > 0):
            raise DomainError("mesh radii must be positive")
        if not self.delta > 0:
            raise DomainError("angular gap delta must be positive; the sector edge is excluded")
        if self.order < 1 or self.dl <= 0 or not 0 < self.ratio < 1:
            raise ValueError("order >= 1, dl > 0 and 0 < ratio < 1 required")

    @property
    def theta_max(self) -> float:
        return max(0.0, 0.25 * math.pi * self.alpha - self.delta)

    @property
    def empty(self) -> bool:
        return self.theta_max <= 0.0 or self.r_min >= self.R

    @cached_property
    def l_edges(self) -> np.ndarray:
        if self.empty:
            return np.zeros(0)
        lo, hi = math.log(self.r_min), math.log(self.R)
        n = max(1, int(math.ceil((hi - lo) / self.dl - 1e-9)))
        return np.linspace(lo, hi, n + 1)

    @cached_property
    def theta_edges(self) -> np.ndarray:
        if self.empty:
            return np.zeros(0)
        return _angular_edges(self.theta_max, self.delta, self.ratio)

    def _panel_nodes(self, edges):
        x, w = gauss_legendre(self.order)
        a = edges[:-1, None]
        b = edges[1:, None]
        h = 0.5 * (b - a)
        return (0.5 * (a + b) + h * x), (h * w)

    @cached_property
    def l_nodes(self):
        """(l, weight) arrays of shape (n_l_panels, order)."""
        return self._panel_nodes(self.l_edges)

    @cached_property
    def theta_nodes(self):
        return self._panel_nodes(self.theta_edges)

    @cached_property
    def z(self) -> np.ndarray:
        """Nodes as a 2-D array: rows are angles, columns radii."""
        if self.empty:
            return np.zeros((0, 0), dtype=complex)
        l = self.l_nodes[0].ravel()
        th = self.theta_nodes[0].ravel()
        out = np.exp(l)[None, :] * np.exp(1j * th)[:, None]
        out.setflags(write=False)
        return out

    @cached_property
    def weights(self) -> np.ndarray:
        """Area weights r^2 w_l w_theta (positive), same shape as :attr:`z`."""
        if self.empty:
            return np.zeros((0, 0))
        l, wl = self.l_nodes
        r2 = np.exp(2.0 * l.ravel())
        w = self.theta_nodes[1].ravel()[:, None] * (r2 * wl.ravel())[None, :]
        w.setflags(write=False)
        return w

    @property
    def size(self) -> int:
        return int(self.z.size)

    @property
    def tile_shape(self) -> tuple[int, int]:
        return (len(self.theta_edges) - 1, len(self.l_edges) - 1)

    def tile(self, i: int, j: int) -> tuple[slice, slice]:
        n = self.order
        return slice(i * n, (i + 1) * n), slice(j * n, (j + 1) * n)

    def integrate(self, values) -> complex:
        """Sum of weights * values with a fixed pairwise order."""
        v = np.asarray(values)
        if self.empty:
            return 0.0
        return np.sum(self.weights * v)

    def contains(self, z, tol: float = 0.0) -> np.ndarray:
        zc = np.asarray(z, dtype=complex)
        r = np.abs(zc)
        th = np.abs(np.angle(zc))
        return (r >= self.r_min * (1 - tol)) & (r <= self.R * (1 + tol)) & (th <= self.theta_max + tol)

    def refined(self) -> "SectorMesh":
        """Same region, twice the panels per direction."""
        return SectorMesh(self.alpha, self.r_min, self.R, self.delta, self.order, 0.5 * self.dl, math.sqrt(self.ratio))

    def enlarged(self, factor: float = 4.0) -> "SectorMesh":
        """Larger region (small radius, large radius and edge gap all pushed out)."""
        return SectorMesh(self.alpha, self.r_min / factor, self.R * factor, self.delta / factor, self.order, self.dl, self.ratio)

    def describe(self) -> dict:
        return {
            "alpha": self.alpha,
            "r_min": self.r_min,
            "R": self.R,
            "delta": self.delta,
            "order": self.order,
            "dl": self.dl,
            "ratio": self.ratio,
            "nodes": self.size,
        }


def default_mesh(alpha, order: int = 8) -> SectorMesh:
    """Mesh used by the isometry and reproducing checks.

    r in [1e-5, 1e2], edge gap 1e-6, unit panels in log r, angular panels
    shrinking by 1/4 toward the edges.
    """
    return SectorMesh(alpha, 1e-5, 1e2, 1e-6, order=order, dl=1.0, ratio=0.25)
