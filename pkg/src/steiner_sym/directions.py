"""Directions modulo sign, their metric and probability, and direction streams.

A direction is a unit vector with ``u`` and ``-u`` identified.  The canonical
representative has its first component that is nonzero (beyond ``SIGN_TOL``)
positive.

Random streams use numpy's PCG64 bit generator seeded with an integer, which
gives the same stream on every platform numpy supports.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy import stats

from .errors import EmptyCycle, ZeroVector

SIGN_TOL = 1e-12
GOLDEN = (math.sqrt(5.0) - 1.0) / 2.0


def _plastic_steps() -> tuple[float, float]:
    # inverse powers of the plastic number: the 2-D golden-ratio analogue
    p = 1.0
    for _ in range(64):
        p = (1.0 + p) ** (1.0 / 3.0)
    return 1.0 / p, 1.0 / (p * p)


R2_STEPS = _plastic_steps()


def canonicalize(v) -> np.ndarray:
    """Unit vector representing the class ``{v, -v}``."""
    v = np.asarray(v, dtype=np.float64)
    n = float(np.linalg.norm(v))
    if not n > 0.0 or not math.isfinite(n):
        raise ZeroVector(f"cannot build a direction from {v!r}")
    # already-unit input is kept as is, so canonicalize is exactly idempotent
    u = v if abs(n - 1.0) <= 1e-15 else v / n
    for c in u:
        if abs(c) > SIGN_TOL:
            return -u if c < 0 else u
    return u


def direction_distance(u, v) -> float:
    """``min(||u - v||, ||u + v||)``, a metric on directions modulo sign."""
    u = np.asarray(u, dtype=np.float64)
    v = np.asarray(v, dtype=np.float64)
    return float(min(np.linalg.norm(u - v), np.linalg.norm(u + v)))


def sample_uniform(rng: np.random.Generator, dim: int) -> np.ndarray:
    """Uniform direction: normalized Gaussian vector, canonicalized."""
    while True:
        v = rng.standard_normal(dim)
        if np.any(v != 0.0):
            return canonicalize(v)


def sample_uniform_batch(rng: np.random.Generator, dim: int, n: int) -> np.ndarray:
    """``n`` uniform canonical directions as an ``(n, dim)`` array."""
    v = rng.standard_normal((n, dim))
    norms = np.linalg.norm(v, axis=1)
    while np.any(norms == 0.0):
        bad = norms == 0.0
        v[bad] = rng.standard_normal((int(bad.sum()), dim))
        norms = np.linalg.norm(v, axis=1)
    u = v / norms[:, None]
    lead = np.argmax(np.abs(u) > SIGN_TOL, axis=1)
    sign = np.where(u[np.arange(n), lead] < 0, -1.0, 1.0)
    return u * sign[:, None]


def double_cap_probability(dim: int) -> float:
    """Probability that a uniform direction has ``|u . w| >= 1/sqrt(2)``."""
    if dim == 2:
        return 0.5
    if dim == 3:
        return 1.0 - 1.0 / math.sqrt(2.0)
    raise ValueError(f"dim must be 2 or 3, got {dim}")


def hemisphere_bins(u: np.ndarray, n_bins: int = 10) -> np.ndarray:
    """Equal-area bin index of canonical directions (rows of ``u``).

    d=2: ``n_bins`` equal arcs of the half circle ``u_1 >= 0``.
    d=3: ``n_bins`` bands in ``u_1`` (uniform on [0, 1] by Archimedes)
    times ``n_bins`` sectors of the azimuth around ``e_1``.
    """
    u = np.atleast_2d(u)
    if u.shape[1] == 2:
        theta = np.arctan2(u[:, 1], u[:, 0])  # in [-pi/2, pi/2]
        return np.clip(((theta + np.pi / 2) / np.pi * n_bins).astype(int), 0, n_bins - 1)
    band = np.clip((np.abs(u[:, 0]) * n_bins).astype(int), 0, n_bins - 1)
    phi = np.arctan2(u[:, 2], u[:, 1]) + np.pi
    sector = np.clip((phi / (2 * np.pi) * n_bins).astype(int), 0, n_bins - 1)
    return band * n_bins + sector


def chi_square_uniformity(u: np.ndarray, n_bins: int = 10) -> tuple[float, float]:
    """Chi-square statistic and p-value of the equal-area binning of ``u``."""
    u = np.atleast_2d(u)
    k = n_bins if u.shape[1] == 2 else n_bins * n_bins
    counts = np.bincount(hemisphere_bins(u, n_bins), minlength=k)
    res = stats.chisquare(counts)
    return float(res.statistic), float(res.pvalue)


def star_discrepancy(points) -> float:
    """Exact star discrepancy of points in [0, 1)."""
    x = np.sort(np.asarray(points, dtype=float))
    n = len(x)
    i = np.arange(1, n + 1)
    return float(np.max(np.maximum(i / n - x, x - (i - 1) / n)))


def _equidistributed(n: int, dim: int) -> np.ndarray:
    if dim == 2:
        theta = math.modf(n * GOLDEN)[0] * math.pi
        return canonicalize([math.cos(theta), math.sin(theta)])
    # Kronecker point on the unit square, mapped area-preservingly onto the
    # upper hemisphere (height uniform on [0, 1], longitude uniform)
    a1, a2 = R2_STEPS
    z = math.modf(0.5 + n * a1)[0]
    phi = 2.0 * math.pi * math.modf(0.5 + n * a2)[0]
    r = math.sqrt(max(0.0, 1.0 - z * z))
    return canonicalize([r * math.cos(phi), r * math.sin(phi), z])


@dataclass
class DirectionSource:
    """Stateful producer of the direction sequence ``u_1, u_2, ...``.

    ``policy`` is one of ``"iid_uniform"``, ``"equidistributed"``,
    ``"cyclic"`` or ``"axis_biased"``.  ``state`` counts the directions
    produced so far.
    """

    policy: str
    dim: int
    seed: int | None = None
    cycle: Sequence[Sequence[float]] = ()
    exponent: float = 0.0
    state: int = 0
    _rng: np.random.Generator | None = field(default=None, repr=False, compare=False)

    POLICIES = ("iid_uniform", "equidistributed", "cyclic", "axis_biased")

    def __post_init__(self):
        if self.policy not in self.POLICIES:
            raise ValueError(f"unknown direction policy {self.policy!r}")
        if self.dim not in (2, 3):
            raise ValueError(f"dim must be 2 or 3, got {self.dim}")
        if self.policy == "cyclic":
            if not len(self.cycle):
                raise EmptyCycle("cyclic direction source needs at least one direction")
            cyc = [canonicalize(c) for c in self.cycle]
            if any(len(c) != self.dim for c in cyc):
                raise ValueError("cyclic directions must match dim")
            self.cycle = tuple(tuple(c) for c in cyc)
        if self.policy == "axis_biased" and self.exponent < 0:
            raise ValueError("axis_biased exponent must be >= 0")
        if self.policy in ("iid_uniform", "axis_biased"):
            self._rng = np.random.Generator(np.random.PCG64(self.seed))
            # replay to the requested state so (policy, state, seed) fixes the stream
            start, self.state = self.state, 0
            for _ in range(start):
                self.next()

    @classmethod
    def iid_uniform(cls, dim: int, seed: int) -> "DirectionSource":
        return cls("iid_uniform", dim, seed=seed)

    @classmethod
    def equidistributed(cls, dim: int) -> "DirectionSource":
        return cls("equidistributed", dim)

    @classmethod
    def cyclic(cls, directions: Sequence[Sequence[float]]) -> "DirectionSource":
        if not len(directions):
            raise EmptyCycle("cyclic direction source needs at least one direction")
        return cls("cyclic", len(directions[0]), cycle=directions)

    @classmethod
    def axis_biased(cls, dim: int, seed: int, exponent: float) -> "DirectionSource":
        return cls("axis_biased", dim, seed=seed, exponent=exponent)

    def next(self) -> np.ndarray:
        n = self.state
        if self.policy == "iid_uniform":
            u = sample_uniform(self._rng, self.dim)
        elif self.policy == "equidistributed":
            u = _equidistributed(n + 1, self.dim)
        elif self.policy == "cyclic":
            u = np.array(self.cycle[n % len(self.cycle)])
        else:
            # density proportional to |u . e_1|^k w.r.t. the uniform law
            while True:
                u = sample_uniform(self._rng, self.dim)
                if self.exponent == 0 or self._rng.random() < abs(u[0]) ** self.exponent:
                    break
        self.state = n + 1
        return u

    def take(self, n: int) -> list[np.ndarray]:
        return [self.next() for _ in range(n)]

    def __iter__(self):
        while True:
            yield self.next()
