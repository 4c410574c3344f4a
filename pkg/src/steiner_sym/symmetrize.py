"""Steiner symmetrization of occupancy fields along arbitrary directions.

The operator works in two passes:

1. Fiber masses.  For lattice points ``x`` of the hyperplane orthogonal to
   ``u`` (spacing ``h/2``, aligned with the cell centers) integrate the
   multilinear interpolant of the occupancy along the line ``x + t u`` with
   step ``h/2``.
2. Gather.  Every output cell center ``z = x + t u`` receives the exact 1-D
   coverage of its u-extent ``[t - h/2, t + h/2]`` by the centered segment
   ``[-m(x)/2, m(x)/2]``, with ``m(x)`` interpolated from the lattice.

Both passes only visit points within the support radius of the field (plus
the interpolation reach), outside of which every interpolated value is zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

import numpy as np
from scipy.ndimage import map_coordinates

from .directions import canonicalize
from .errors import ShapeOutOfDomain
from .field import GridSpec, OccupancyField, volume

#: samples per chunk in the line-integral pass (bounds peak memory)
_CHUNK = 1 << 21


def orthobasis(u) -> np.ndarray:
    """Orthonormal basis of the hyperplane orthogonal to ``u``, as rows.

    Columns ``0..d-2`` of the Householder reflection that maps ``e_d`` to
    ``u``; for ``u = e_d`` this is the identity, i.e. ``e_1, ..., e_{d-1}``.
    """
    u = np.asarray(u, dtype=np.float64)
    d = u.size
    if abs(np.linalg.norm(u) - 1.0) > 1e-12:
        raise ValueError("orthobasis needs a unit vector")
    w = -u.copy()
    w[-1] += 1.0
    ww = float(w @ w)
    H = np.eye(d)
    if ww > 1e-30:
        H -= (2.0 / ww) * np.outer(w, w)
    return H[:, : d - 1].T.copy()


@lru_cache(maxsize=8)
def _cell_centers(grid: GridSpec) -> tuple[np.ndarray, np.ndarray]:
    """Flattened cell centers ``(d, N^d)`` and their norms."""
    pts = np.stack([c.ravel() for c in grid.center_grids()])
    pts.setflags(write=False)
    r = np.sqrt(grid.squared_radius()).ravel()
    r.setflags(write=False)
    return pts, r


def support_radius(F: OccupancyField) -> float:
    """Radius beyond which the multilinear interpolant of ``F`` vanishes."""
    g = F.grid
    _, r = _cell_centers(g)
    occupied = F.values.ravel() > 0.0
    if not occupied.any():
        return 0.0
    return float(r[occupied].max()) + g.cell_size * math.sqrt(g.dim)


def _sample(F: OccupancyField, pts: np.ndarray) -> np.ndarray:
    """Multilinear interpolation of the occupancy at points ``(d, P)``."""
    g = F.grid
    idx = (pts + g.extent) / g.cell_size - 0.5
    return map_coordinates(F.values, idx, order=1, mode="grid-constant", cval=0.0)


def _lattice(grid: GridSpec) -> tuple[float, float, int]:
    """Origin, spacing and size of the hyperplane lattice (per axis)."""
    step = grid.cell_size / 2.0
    origin = -grid.extent - grid.cell_size
    size = 4 * grid.resolution + 5
    return origin, step, size


def _line_integrals(F: OccupancyField, u: np.ndarray, feet: np.ndarray, reach: float) -> np.ndarray:
    """Integrals of ``F`` along ``x + t u`` for each foot point (rows of ``feet``).

    Samples sit on the global grid ``t = k h/2``; only ``|x + t u| <= reach``
    is visited, which is exact when ``reach`` is at least the support radius.
    """
    g = F.grid
    step = g.cell_size / 2.0
    n = feet.shape[0]
    out = np.zeros(n)
    if n == 0 or reach <= 0.0:
        return out
    r2 = np.einsum("ij,ij->i", feet, feet)
    half = np.sqrt(np.maximum(reach * reach - r2, 0.0))
    kmax = np.floor(half / step).astype(np.int64)
    counts = 2 * kmax + 1
    # chunk over feet so the sample buffer stays bounded
    ends = np.cumsum(counts)
    start = 0
    while start < n:
        base = ends[start - 1] if start else 0
        stop = int(np.searchsorted(ends, base + _CHUNK, side="right"))
        stop = max(stop, start + 1)
        c = counts[start:stop]
        owner = np.repeat(np.arange(start, stop), c)
        offs = np.arange(int(c.sum())) - np.repeat(np.cumsum(c) - c, c)
        t = (offs - np.repeat(kmax[start:stop], c)) * step
        pts = feet[owner].T + np.outer(u, t)
        vals = _sample(F, pts)
        out[start:stop] = np.bincount(owner - start, weights=vals, minlength=stop - start) * step
        start = stop
    return out


@dataclass(frozen=True)
class FiberMassCache:
    """Fiber masses ``m(x)`` on a lattice of the hyperplane orthogonal to ``u``.

    ``masses`` has one axis per basis vector; entry ``j`` along an axis sits
    at coordinate ``origin + j * spacing``.
    """

    direction: np.ndarray
    basis: np.ndarray
    origin: float
    spacing: float
    masses: np.ndarray
    reach: float

    def lookup(self, coords: np.ndarray) -> np.ndarray:
        """Multilinearly interpolated masses at hyperplane coordinates ``(d-1, P)``."""
        idx = (np.atleast_2d(coords) - self.origin) / self.spacing
        return map_coordinates(self.masses, idx, order=1, mode="grid-constant", cval=0.0)

    def total(self) -> float:
        """Riemann sum of the masses; approximates the volume (Fubini)."""
        return float(self.masses.sum() * self.spacing ** (self.masses.ndim))


def fiber_mass_cache(F: OccupancyField, u) -> FiberMassCache:
    g = F.grid
    u = canonicalize(u)
    basis = orthobasis(u)
    origin, step, size = _lattice(g)
    reach = support_radius(F)
    coords_1d = origin + step * np.arange(size)
    masses = np.zeros((size,) * (g.dim - 1))
    if reach > 0.0:
        axes = np.meshgrid(*([coords_1d] * (g.dim - 1)), indexing="ij")
        lat = np.stack([a.ravel() for a in axes])  # (d-1, M)
        inside = np.einsum("ij,ij->j", lat, lat) <= reach * reach
        feet = (basis.T @ lat[:, inside]).T
        flat = masses.reshape(-1)
        flat[inside] = _line_integrals(F, u, feet, reach)
    masses.setflags(write=False)
    return FiberMassCache(u, basis, origin, step, masses, reach)


def fiber_mass(F: OccupancyField, u, x) -> float:
    """Length of the chord of ``F`` on the line through ``x`` parallel to ``u``.

    ``x`` is either a point of ``R^d`` (projected onto the hyperplane) or a
    ``d-1`` vector of coordinates in the basis returned by ``orthobasis``.
    """
    u = canonicalize(u)
    x = np.asarray(x, dtype=np.float64).ravel()
    d = F.dim
    if x.size == d - 1:
        x = orthobasis(u).T @ x
    elif x.size == d:
        x = x - (x @ u) * u
    else:
        raise ValueError(f"x must have {d - 1} or {d} components")
    reach = support_radius(F)
    return float(_line_integrals(F, u, x[None, :], reach)[0])


def steiner_symmetrize(F: OccupancyField, u, renormalize: bool = False) -> OccupancyField:
    """Steiner symmetral of ``F`` along direction ``u``."""
    g = F.grid
    if len(np.ravel(u)) != g.dim:
        raise ValueError(f"direction must have {g.dim} components")
    cache = fiber_mass_cache(F, u)
    h = g.cell_size
    out = np.zeros(g.resolution**g.dim)
    if cache.reach > 0.0:
        pts, r = _cell_centers(g)
        near = np.nonzero(r <= cache.reach + h)[0]
        z = pts[:, near]
        t = cache.direction @ z
        m = cache.lookup(cache.basis @ z)
        cov = (np.minimum(m / 2, t + h / 2) - np.maximum(-m / 2, t - h / 2)) / h
        out[near] = np.clip(cov, 0.0, 1.0)
    values = out.reshape(g.shape)
    if renormalize:
        before = volume(F)
        after = g.cell_volume * values.sum()
        if after > 0.0:
            values = np.clip(values * (before / after), 0.0, 1.0)
    if np.any(values[_outside_ball(g)] > 0.0):
        raise ShapeOutOfDomain("symmetral reaches past the inscribed ball; enlarge the extent")
    return OccupancyField(g, values, check=False)


@lru_cache(maxsize=8)
def _outside_ball(grid: GridSpec) -> np.ndarray:
    mask = grid.squared_radius() > grid.extent**2
    mask.setflags(write=False)
    return mask


def symmetrize_sequence(F: OccupancyField, directions: Iterable, renormalize: bool = False) -> OccupancyField:
    """Apply ``S_{u_1}``, then ``S_{u_2}``, ... in the given order."""
    for u in directions:
        F = steiner_symmetrize(F, u, renormalize=renormalize)
    return F
