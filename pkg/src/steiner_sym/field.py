"""Occupancy fields on a regular grid and the scalar measures defined on them.

A set ``A`` in the cube ``[-R, R]^d`` is stored as the fraction of each grid
cell it covers.  The array ``values`` is indexed ``values[i_0, ..., i_{d-1}]``
where ``i_k`` is the cell index along coordinate axis ``k``; cell ``i`` along
any axis has its center at ``-R + (i + 1/2) * h``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.ndimage import map_coordinates

from .errors import EmptySet, GridMismatch, ShapeOutOfDomain

#: relative volume below which a field counts as empty (times ``(2R)^d``)
EMPTY_THRESHOLD = 1e-12


@dataclass(frozen=True)
class GridSpec:
    dim: int
    resolution: int
    extent: float

    def __post_init__(self):
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if int(self.resolution) != self.resolution or self.resolution < 8:
            raise ValueError(f"resolution must be an integer >= 8, got {self.resolution}")
        if not self.extent > 0:
            raise ValueError(f"extent must be positive, got {self.extent}")
        object.__setattr__(self, "resolution", int(self.resolution))
        object.__setattr__(self, "extent", float(self.extent))

    @property
    def cell_size(self) -> float:
        return 2.0 * self.extent / self.resolution

    @property
    def shape(self) -> tuple[int, ...]:
        return (self.resolution,) * self.dim

    @property
    def cell_volume(self) -> float:
        return self.cell_size**self.dim

    def centers_1d(self) -> np.ndarray:
        """Cell-center coordinates along one axis."""
        return -self.extent + (np.arange(self.resolution) + 0.5) * self.cell_size

    def center_grids(self) -> list[np.ndarray]:
        """Per-axis coordinate arrays of all cell centers (``indexing='ij'``)."""
        c = self.centers_1d()
        return list(np.meshgrid(*([c] * self.dim), indexing="ij"))

    def squared_radius(self) -> np.ndarray:
        """``||center||^2`` for every cell."""
        c2 = self.centers_1d() ** 2
        out = c2
        for _ in range(self.dim - 1):
            out = np.add.outer(out, c2)
        return out


class OccupancyField:
    """Fractional indicator of a bounded set on a fixed grid.

    Instances are immutable; ``values`` is a read-only float64 array.  Every
    cell with positive occupancy must have its center inside the inscribed
    ball ``B(o, R)``, which keeps every Steiner symmetral inside the domain.
    """

    def __init__(self, grid: GridSpec, values, *, check: bool = True):
        arr = np.array(values, dtype=np.float64)
        if arr.shape != grid.shape:
            raise ValueError(f"values shape {arr.shape} does not match grid {grid.shape}")
        if check:
            if not np.all(np.isfinite(arr)):
                raise ValueError("occupancy values must be finite")
            if arr.min(initial=0.0) < 0.0 or arr.max(initial=0.0) > 1.0:
                raise ValueError("occupancy values must lie in [0, 1]")
            outside = grid.squared_radius() > grid.extent**2
            if np.any(arr[outside] > 0.0):
                raise ShapeOutOfDomain("support leaves the inscribed ball B(o, R)")
        arr.setflags(write=False)
        self.grid = grid
        self.values = arr

    @classmethod
    def empty(cls, grid: GridSpec) -> "OccupancyField":
        return cls(grid, np.zeros(grid.shape), check=False)

    def __repr__(self):
        return f"OccupancyField({self.grid}, volume={volume(self):.6g})"

    @property
    def dim(self) -> int:
        return self.grid.dim

    def threshold(self, level: float = 0.5) -> "OccupancyField":
        """Binary copy (``values >= level``); meant for snapshot export."""
        return OccupancyField(self.grid, (self.values >= level).astype(np.float64), check=False)


def unit_ball_volume(dim: int) -> float:
    """``kappa_d``, the volume of the unit ball."""
    return math.pi ** (dim / 2) / math.gamma(dim / 2 + 1)


def moment_unit_ball(dim: int) -> float:
    """Central moment of inertia of ``B(o, 1)``: ``d * kappa_d / (d + 2)``."""
    if dim not in (2, 3):
        raise ValueError(f"dim must be 2 or 3, got {dim}")
    return dim * unit_ball_volume(dim) / (dim + 2)


def volume(F: OccupancyField) -> float:
    return float(F.grid.cell_volume * F.values.sum())


def _check_nonempty(F: OccupancyField) -> float:
    vol = volume(F)
    if vol < EMPTY_THRESHOLD * (2.0 * F.grid.extent) ** F.dim:
        raise EmptySet("field has (numerically) zero volume")
    return vol


def barycenter(F: OccupancyField) -> np.ndarray:
    _check_nonempty(F)
    c = F.grid.centers_1d()
    mass = F.values.sum()
    out = np.empty(F.dim)
    for k in range(F.dim):
        other = tuple(j for j in range(F.dim) if j != k)
        out[k] = F.values.sum(axis=other) @ c / mass
    return out


def moment_of_inertia(F: OccupancyField) -> float:
    """Central moment of inertia ``int_A ||z||^2``.

    Cell-center quadrature plus the exact second moment of a full cell about
    its own center (``d h^2 / 12`` per unit volume).
    """
    g = F.grid
    h = g.cell_size
    total = np.sum(F.values * g.squared_radius())
    correction = g.dim * h * h / 12.0 * F.values.sum()
    return float(g.cell_volume * (total + correction))


def nikodym_distance(F: OccupancyField, G: OccupancyField) -> float:
    """Symmetric-difference volume (L1 distance of occupancies)."""
    if F.grid != G.grid:
        raise GridMismatch(f"{F.grid} != {G.grid}")
    return float(F.grid.cell_volume * np.abs(F.values - G.values).sum())


def perimeter_tv(F: OccupancyField) -> float:
    """Isotropic total variation of the occupancy (central differences)."""
    g = F.grid
    grads = np.gradient(F.values, g.cell_size)
    norm = np.sqrt(sum(gk * gk for gk in grads))
    return float(g.cell_volume * norm.sum())


def equivalent_ball_radius(F: OccupancyField) -> float:
    """Radius of the ball with the same volume as ``F``."""
    vol = _check_nonempty(F)
    return (vol / unit_ball_volume(F.dim)) ** (1.0 / F.dim)


def translate(F: OccupancyField, shift_cells) -> OccupancyField:
    """Shift by a whole number of cells per axis (cells shifted in are empty)."""
    shift = [int(s) for s in shift_cells]
    if len(shift) != F.dim:
        raise ValueError("one shift per axis required")
    out = np.zeros_like(F.values)
    src = []
    dst = []
    n = F.grid.resolution
    for s in shift:
        if abs(s) >= n:
            return OccupancyField(F.grid, out)
        src.append(slice(max(0, -s), n - max(0, s)))
        dst.append(slice(max(0, s), n - max(0, -s)))
    out[tuple(dst)] = F.values[tuple(src)]
    return OccupancyField(F.grid, out)


def reflect(F: OccupancyField, u) -> OccupancyField:
    """Mirror image of ``F`` through the hyperplane orthogonal to ``u``.

    Values are resampled with multilinear interpolation, so the result is
    exact only for coordinate directions.
    """
    u = np.asarray(u, dtype=float)
    g = F.grid
    pts = np.stack([c.ravel() for c in g.center_grids()])
    pts = pts - 2.0 * np.outer(u, u @ pts)
    idx = (pts + g.extent) / g.cell_size - 0.5
    vals = map_coordinates(F.values, idx, order=1, mode="grid-constant", cval=0.0)
    return OccupancyField(g, np.clip(vals, 0.0, 1.0).reshape(g.shape), check=False)
