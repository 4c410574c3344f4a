"""Exact geometry on finite unions of axis-aligned boxes.

Everything here is closed form: volumes, moments and symmetric differences
are computed on the rectangular arrangement induced by the box faces, and
Steiner symmetrals are available along coordinate axes (where the symmetral
of a box union is again a box union).

Coordinates are held as :class:`fractions.Fraction` (a float converts
without loss), so every construction and measure is computed in exact
rational arithmetic and rounded to float only once, on output.  Since
rounding is monotone, exact inequalities between measures survive it.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Sequence

import numpy as np

from .errors import ShapeOutOfDomain
from .field import GridSpec, OccupancyField


@dataclass(frozen=True, order=True)
class Box:
    lo: tuple[Fraction, ...]
    hi: tuple[Fraction, ...]

    def __post_init__(self):
        try:
            lo = tuple(_exact(v) for v in self.lo)
            hi = tuple(_exact(v) for v in self.hi)
        except (ValueError, OverflowError) as exc:
            raise ValueError("box coordinates must be finite") from exc
        if len(lo) != len(hi) or not lo:
            raise ValueError("lo and hi must have the same positive length")
        if not all(a < b for a, b in zip(lo, hi)):
            raise ValueError(f"degenerate box {lo} .. {hi}")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self) -> int:
        return len(self.lo)

    @property
    def volume(self) -> float:
        return float(_box_volume(self))

    def contains(self, p) -> bool:
        return all(a <= x <= b for a, x, b in zip(self.lo, p, self.hi))

    def corner_radius(self) -> float:
        """Largest distance from the origin to a point of the box."""
        return math.sqrt(float(sum(max(abs(a), abs(b)) ** 2 for a, b in zip(self.lo, self.hi))))


def _exact(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, np.integer)):
        return Fraction(int(v))
    return Fraction(float(v))


def _box_volume(b: Box) -> Fraction:
    return math.prod((h - l for l, h in zip(b.lo, b.hi)), start=Fraction(1))


def _merge_intervals(iv: list[tuple[float, float]]) -> list[tuple[float, float]]:
    out: list[list[float]] = []
    for a, b in sorted(iv):
        if out and a <= out[-1][1]:
            out[-1][1] = max(out[-1][1], b)
        else:
            out.append([a, b])
    return [(a, b) for a, b in out]


def _disjoint(boxes: list[tuple[tuple, tuple]]) -> list[tuple[tuple, tuple]]:
    """Slab sweep along the first axis, recursing on the cross sections.

    Consecutive slabs with identical cross sections are merged, which makes
    the decomposition canonical for a given point set.
    """
    if not boxes:
        return []
    if len(boxes[0][0]) == 1:
        return [((a,), (b,)) for a, b in _merge_intervals([(lo[0], hi[0]) for lo, hi in boxes])]
    cuts = sorted({lo[0] for lo, _ in boxes} | {hi[0] for _, hi in boxes})
    slabs: list[tuple[float, float, list]] = []
    for a, b in zip(cuts[:-1], cuts[1:]):
        active = [(lo[1:], hi[1:]) for lo, hi in boxes if lo[0] <= a and hi[0] >= b]
        cross = _disjoint(active)
        if not cross:
            continue
        if slabs and slabs[-1][1] == a and slabs[-1][2] == cross:
            slabs[-1] = (slabs[-1][0], b, cross)
        else:
            slabs.append((a, b, cross))
    return [((a,) + lo, (b,) + hi) for a, b, cross in slabs for lo, hi in cross]


class BoxUnion:
    """Finite union of boxes, stored as pairwise interior-disjoint pieces."""

    def __init__(self, boxes: Iterable[Box | Sequence]):
        items = []
        for b in boxes:
            if not isinstance(b, Box):
                b = Box(*b)
            items.append(b)
        dims = {b.dim for b in items}
        if len(dims) > 1:
            raise ValueError("all boxes must share one dimension")
        self.dim = dims.pop() if dims else 0
        pieces = _disjoint([(b.lo, b.hi) for b in items])
        self.boxes: tuple[Box, ...] = tuple(Box(lo, hi) for lo, hi in pieces)

    def __repr__(self):
        return f"BoxUnion({[(b.lo, b.hi) for b in self.boxes]})"

    def __eq__(self, other):
        return isinstance(other, BoxUnion) and self.boxes == other.boxes

    def __hash__(self):
        return hash(self.boxes)

    def __len__(self):
        return len(self.boxes)

    def __iter__(self):
        return iter(self.boxes)

    def contains(self, p) -> bool:
        return any(b.contains(p) for b in self.boxes)

    def corner_radius(self) -> float:
        return max((b.corner_radius() for b in self.boxes), default=0.0)

    def affine(self, scale: float = 1.0, shift=None) -> "BoxUnion":
        """Image under ``z -> scale * z + shift`` (``scale > 0``)."""
        if not scale > 0:
            raise ValueError("scale must be positive")
        k = _exact(scale)
        s = [Fraction(0)] * self.dim if shift is None else [_exact(v) for v in shift]
        return BoxUnion(
            Box([k * a + c for a, c in zip(b.lo, s)], [k * a + c for a, c in zip(b.hi, s)]) for b in self.boxes
        )


def exact_volume(B: BoxUnion) -> float:
    return float(sum((_box_volume(b) for b in B.boxes), Fraction(0)))


def exact_barycenter(B: BoxUnion) -> np.ndarray:
    vol = sum((_box_volume(b) for b in B.boxes), Fraction(0))
    if vol <= 0:
        raise ValueError("empty box union has no barycenter")
    acc = [Fraction(0)] * B.dim
    for b in B.boxes:
        v = _box_volume(b)
        acc = [s + v * (l + h) / 2 for s, l, h in zip(acc, b.lo, b.hi)]
    return np.array([float(s / vol) for s in acc])


def _box_moment(b: Box) -> Fraction:
    widths = [h - l for l, h in zip(b.lo, b.hi)]
    total = Fraction(0)
    for k in range(b.dim):
        others = math.prod((w for j, w in enumerate(widths) if j != k), start=Fraction(1))
        total += (b.hi[k] ** 3 - b.lo[k] ** 3) / 3 * others
    return total


def exact_moment(B: BoxUnion) -> float:
    """``int_B ||z||^2`` in closed form."""
    return float(sum((_box_moment(b) for b in B.boxes), Fraction(0)))


def _arrangement(coords: list[list[float]]):
    """Yield ``(lo, hi, center)`` for every cell of a rectangular arrangement."""
    axes = [sorted(set(c)) for c in coords]
    for idx in itertools.product(*(range(len(a) - 1) for a in axes)):
        lo = tuple(a[i] for a, i in zip(axes, idx))
        hi = tuple(a[i + 1] for a, i in zip(axes, idx))
        yield lo, hi, tuple((x + y) / 2 for x, y in zip(lo, hi))


def exact_symmetral_axis(B: BoxUnion, axis: int) -> BoxUnion:
    """Steiner symmetral of ``B`` along coordinate axis ``axis``."""
    d = B.dim
    if not 0 <= axis < d:
        raise ValueError(f"axis must be in [0, {d})")
    if not B.boxes:
        return BoxUnion([])
    others = [j for j in range(d) if j != axis]
    coords = [[v for b in B.boxes for v in (b.lo[j], b.hi[j])] for j in others]
    out = []
    for lo, hi, mid in _arrangement(coords):
        chord = Fraction(0)
        for b in B.boxes:
            if all(b.lo[j] <= m <= b.hi[j] for j, m in zip(others, mid)):
                chord += b.hi[axis] - b.lo[axis]
        if chord <= 0:
            continue
        blo = [Fraction(0)] * d
        bhi = [Fraction(0)] * d
        for j, a, c in zip(others, lo, hi):
            blo[j], bhi[j] = a, c
        blo[axis], bhi[axis] = -chord / 2, chord / 2
        out.append(Box(blo, bhi))
    return BoxUnion(out)


def exact_nikodym(B1: BoxUnion, B2: BoxUnion) -> float:
    """Exact volume of the symmetric difference."""
    boxes = B1.boxes + B2.boxes
    if not boxes:
        return 0.0
    d = boxes[0].dim
    coords = [[v for b in boxes for v in (b.lo[j], b.hi[j])] for j in range(d)]
    total = Fraction(0)
    for lo, hi, mid in _arrangement(coords):
        if B1.contains(mid) != B2.contains(mid):
            total += math.prod((b - a for a, b in zip(lo, hi)), start=Fraction(1))
    return float(total)


def _coverage_1d(lo: float, hi: float, grid: GridSpec) -> np.ndarray:
    h = grid.cell_size
    edges = -grid.extent + np.arange(grid.resolution) * h
    return np.clip(np.minimum(hi, edges + h) - np.maximum(lo, edges), 0.0, h) / h


def to_field(B: BoxUnion, grid: GridSpec) -> OccupancyField:
    """Exact per-cell coverage of ``B``."""
    if B.boxes and B.dim != grid.dim:
        raise ValueError("box union and grid dimensions differ")
    if B.corner_radius() > grid.extent:
        raise ShapeOutOfDomain(f"box union reaches radius {B.corner_radius():.4g} > {grid.extent}")
    values = np.zeros(grid.shape)
    for b in B.boxes:
        cov = [_coverage_1d(float(lo), float(hi), grid) for lo, hi in zip(b.lo, b.hi)]
        block = cov[0]
        for c in cov[1:]:
            block = np.multiply.outer(block, c)
        values += block
    return OccupancyField(grid, np.clip(values, 0.0, 1.0))


def random_box_union(
    rng: np.random.Generator,
    dim: int = 2,
    max_boxes: int = 6,
    radius: float = 1.3,
    min_side: float = 0.2,
    max_side: float = 0.9,
) -> BoxUnion:
    """Union of 1..max_boxes random boxes inside the cube ``[-r, r]^d``, ``r = radius / sqrt(d)``.

    Side lengths are uniform in ``[min_side, max_side]`` (capped by the cube).
    """
    half = radius / np.sqrt(dim)
    n = int(rng.integers(1, max_boxes + 1))
    boxes = []
    for _ in range(n):
        side = np.minimum(rng.uniform(min_side, max_side, size=dim), 2 * half)
        lo = rng.uniform(-half, half - side)
        boxes.append(Box(lo, lo + side))
    return BoxUnion(boxes)
