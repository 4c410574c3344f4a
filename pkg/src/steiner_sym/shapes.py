"""Initial sets: the built-in shape library and its rasterization.

Box-type shapes (``box``, ``box_union``, ``l_shape``) are rasterized with
exact per-cell coverage.  Curved shapes are classified on cell corners and
only cells whose corners disagree are supersampled with ``4^d`` points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any

import numpy as np
from scipy.ndimage import map_coordinates

from .boxes import BoxUnion, exact_volume, to_field
from .errors import ShapeOutOfDomain
from .field import GridSpec, OccupancyField, unit_ball_volume
from .pgm import read_pgm

VARIANTS = ("ball", "box", "box_union", "l_shape", "annulus", "two_balls", "mask_file")

#: shapes that converge to the ball only through symmetrization
NON_BALL_SHAPES = ("l_shape", "annulus", "two_balls", "box_union", "box")

SUPERSAMPLE = 4


def _default_box_union(dim: int) -> list:
    boxes2 = [((-1.0, -0.9), (0.2, -0.3)), ((-0.3, -0.3), (0.3, 0.9)), ((0.3, 0.4), (1.1, 0.8))]
    if dim == 2:
        return boxes2
    return [
        ((-0.6, -0.6, -0.4), (0.6, 0.0, 0.4)),
        ((-0.2, 0.0, -0.4), (0.2, 0.7, 0.4)),
        ((0.2, 0.3, -0.6), (0.6, 0.6, 0.0)),
    ]


def _default_two_balls(dim: int) -> tuple[list, list]:
    if dim == 2:
        return [(-0.55, 0.35), (0.75, 0.1)], [0.6, 0.45]
    return [(-0.5, 0.3, 0.2), (0.7, 0.1, -0.25)], [0.6, 0.45]


@dataclass(frozen=True)
class ShapeSpec:
    """A named initial set.

    ``params`` depends on ``variant``:

    - ``ball``: ``center``, ``radius``
    - ``box``: ``lo``, ``hi``
    - ``box_union``: ``boxes`` (list of ``[lo, hi]``)
    - ``l_shape``: ``scale`` (L made of three unit squares, bounding box centered)
    - ``annulus``: ``r_in``, ``r_out`` (centered; a spherical shell in 3-D)
    - ``two_balls``: ``centers``, ``radii``
    - ``mask_file``: ``path`` to a PGM with an ``#extent R`` comment (2-D only)

    Missing parameters take built-in defaults.  When ``normalize`` is set the
    shape is dilated about the origin to volume ``normalize_volume_to``
    (``kappa_d`` if that is None).
    """

    variant: str
    params: dict[str, Any] = field(default_factory=dict)
    normalize: bool = True
    normalize_volume_to: float | None = None

    def __post_init__(self):
        v = self.variant.replace("-", "_")
        if v == "mask":
            v = "mask_file"
        if v not in VARIANTS:
            raise ValueError(f"unknown shape {self.variant!r}; expected one of {VARIANTS}")
        object.__setattr__(self, "variant", v)


# -- geometry of each variant, in unnormalized units -------------------------


def _lens_volume(dim: int, r1: float, r2: float, dist: float) -> float:
    """Volume of the intersection of two balls."""
    if dist >= r1 + r2:
        return 0.0
    if dist <= abs(r1 - r2):
        return unit_ball_volume(dim) * min(r1, r2) ** dim
    if dim == 2:
        a1 = r1 * r1 * math.acos((dist * dist + r1 * r1 - r2 * r2) / (2 * dist * r1))
        a2 = r2 * r2 * math.acos((dist * dist + r2 * r2 - r1 * r1) / (2 * dist * r2))
        k = 0.5 * math.sqrt((-dist + r1 + r2) * (dist + r1 - r2) * (dist - r1 + r2) * (dist + r1 + r2))
        return a1 + a2 - k
    return (
        math.pi
        * (r1 + r2 - dist) ** 2
        * (dist * dist + 2 * dist * r2 - 3 * r2 * r2 + 2 * dist * r1 + 6 * r1 * r2 - 3 * r1 * r1)
        / (12 * dist)
    )


class _Shape:
    """Indicator + exact volume + outer radius, with dilation about the origin."""

    def __init__(self, spec: ShapeSpec, dim: int):
        self.variant = spec.variant
        self.dim = dim
        p = dict(spec.params)
        v = spec.variant
        self.boxes: BoxUnion | None = None
        self.mask: tuple[np.ndarray, float] | None = None
        if v == "ball":
            self.centers = np.atleast_2d(np.asarray(p.get("center", np.zeros(dim)), dtype=float))
            self.radii = np.array([float(p.get("radius", 1.0))])
        elif v == "two_balls":
            dc, dr = _default_two_balls(dim)
            self.centers = np.asarray(p.get("centers", dc), dtype=float)
            self.radii = np.asarray(p.get("radii", dr), dtype=float)
            if self.centers.shape != (2, dim) or self.radii.shape != (2,):
                raise ValueError("two_balls needs two centers and two radii")
        elif v == "annulus":
            self.r_in = float(p.get("r_in", 0.5))
            self.r_out = float(p.get("r_out", 1.0))
            if not 0 <= self.r_in < self.r_out:
                raise ValueError("annulus needs 0 <= r_in < r_out")
        elif v == "box":
            lo = p.get("lo", [-0.5] * dim)
            hi = p.get("hi", [0.5] * dim)
            self.boxes = BoxUnion([(lo, hi)])
        elif v == "box_union":
            self.boxes = BoxUnion([tuple(b) for b in p.get("boxes", _default_box_union(dim))])
        elif v == "l_shape":
            s = float(p.get("scale", 1.0))
            if dim == 2:
                raw = [((0, 0), (2, 1)), ((0, 1), (1, 2))]
            else:
                raw = [((0, 0, 0), (2, 1, 1)), ((0, 1, 0), (1, 2, 1))]
            shift = -s * np.array([1.0, 1.0] + [0.5] * (dim - 2))
            self.boxes = BoxUnion(raw).affine(s, shift)
        else:
            if dim != 2:
                raise ValueError("mask_file shapes are 2-D only")
            if "path" not in p:
                raise ValueError("mask_file needs a 'path' parameter")
            self.mask = read_pgm(p["path"])
        if self.boxes is not None and self.boxes.dim != dim:
            raise ValueError(f"box coordinates must have {dim} components")
        if v in ("ball", "two_balls") and (self.centers.shape[1] != dim or np.any(self.radii <= 0)):
            raise ValueError(f"ball centers must have {dim} components and radii must be positive")
        self.scale = 1.0

    def exact_volume(self) -> float:
        k = unit_ball_volume(self.dim)
        d = self.dim
        if self.boxes is not None:
            vol = exact_volume(self.boxes)
        elif self.variant == "ball":
            vol = k * self.radii[0] ** d
        elif self.variant == "two_balls":
            dist = float(np.linalg.norm(self.centers[0] - self.centers[1]))
            r1, r2 = self.radii
            vol = k * (r1**d + r2**d) - _lens_volume(d, r1, r2, dist)
        elif self.variant == "annulus":
            vol = k * (self.r_out**d - self.r_in**d)
        else:
            img, ext = self.mask
            vol = float(img.sum()) * (2 * ext / img.shape[0]) ** 2
        return vol * self.scale**d

    def outer_radius(self) -> float:
        if self.boxes is not None:
            r = self.boxes.corner_radius()
        elif self.variant in ("ball", "two_balls"):
            r = float(np.max(np.linalg.norm(self.centers, axis=1) + self.radii))
        elif self.variant == "annulus":
            r = self.r_out
        else:
            img, ext = self.mask
            n = img.shape[0]
            c = -ext + (np.arange(n) + 0.5) * 2 * ext / n
            r2 = np.add.outer(c * c, c * c)
            r = float(np.sqrt(r2[img > 0].max())) + ext / n * math.sqrt(2) if np.any(img > 0) else 0.0
        return r * self.scale

    def indicator(self, pts: np.ndarray) -> np.ndarray:
        """Membership of points ``(d, P)`` (curved shapes only)."""
        z = pts / self.scale
        if self.variant in ("ball", "two_balls"):
            inside = np.zeros(z.shape[1], dtype=bool)
            for c, r in zip(self.centers, self.radii):
                diff = z - c[:, None]
                inside |= np.einsum("ij,ij->j", diff, diff) <= r * r
            return inside
        r2 = np.einsum("ij,ij->j", z, z)
        return (r2 >= self.r_in**2) & (r2 <= self.r_out**2)


def _supersampled(shape: _Shape, grid: GridSpec) -> np.ndarray:
    n, d, h, R = grid.resolution, grid.dim, grid.cell_size, grid.extent
    corners1d = -R + np.arange(n + 1) * h
    cgrid = np.meshgrid(*([corners1d] * d), indexing="ij")
    inside = shape.indicator(np.stack([c.ravel() for c in cgrid])).reshape((n + 1,) * d)
    # a cell is undecided unless all 2^d corners agree
    lo_all = np.ones(grid.shape, dtype=bool)
    hi_any = np.zeros(grid.shape, dtype=bool)
    for offs in np.ndindex(*([2] * d)):
        sl = tuple(slice(o, o + n) for o in offs)
        lo_all &= inside[sl]
        hi_any |= inside[sl]
    values = lo_all.astype(np.float64)
    mixed = np.argwhere(hi_any & ~lo_all)
    if len(mixed):
        sub = (np.arange(SUPERSAMPLE) + 0.5) / SUPERSAMPLE * h
        offsets = np.stack([o.ravel() for o in np.meshgrid(*([sub] * d), indexing="ij")])  # (d, S)
        base = -R + mixed.T * h  # (d, M)
        pts = (base[:, :, None] + offsets[:, None, :]).reshape(d, -1)
        frac = shape.indicator(pts).reshape(len(mixed), -1).mean(axis=1)
        values[tuple(mixed.T)] = frac
    return values


def _mask_values(shape: _Shape, grid: GridSpec) -> np.ndarray:
    img, ext = shape.mask
    m = img.shape[0]
    if m == grid.resolution and ext == grid.extent and shape.scale == 1.0:
        return img.copy()
    pts = np.stack([c.ravel() for c in grid.center_grids()]) / shape.scale
    idx = (pts + ext) / (2 * ext / m) - 0.5
    vals = map_coordinates(img, idx, order=1, mode="grid-constant", cval=0.0)
    return np.clip(vals, 0.0, 1.0).reshape(grid.shape)


def rasterize(spec: ShapeSpec, grid: GridSpec) -> OccupancyField:
    """Occupancy field of ``spec`` on ``grid``."""
    shape = _Shape(spec, grid.dim)
    if spec.normalize:
        target = unit_ball_volume(grid.dim) if spec.normalize_volume_to is None else float(spec.normalize_volume_to)
        if not target > 0:
            raise ValueError("normalize_volume_to must be positive")
        vol = shape.exact_volume()
        if not vol > 0:
            raise ValueError("cannot normalize an empty shape")
        shape.scale = (target / vol) ** (1.0 / grid.dim)
    if shape.outer_radius() > grid.extent:
        raise ShapeOutOfDomain(
            f"{spec.variant} reaches radius {shape.outer_radius():.4g}, beyond the inscribed ball of radius {grid.extent}"
        )
    if shape.boxes is not None:
        return to_field(shape.boxes.affine(shape.scale), grid)
    if shape.mask is not None:
        values = _mask_values(shape, grid)
    else:
        values = _supersampled(shape, grid)
    return OccupancyField(grid, values)


def ball_field(radius: float, grid: GridSpec) -> OccupancyField:
    """Rasterized ball ``B(o, radius)``."""
    if radius > grid.extent - grid.cell_size:
        raise ShapeOutOfDomain(f"radius {radius} exceeds R - h = {grid.extent - grid.cell_size}")
    return rasterize(ShapeSpec("ball", {"radius": radius}, normalize=False), grid)
