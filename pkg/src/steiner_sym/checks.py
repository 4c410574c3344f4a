"""Self-checks run by the command line: raster vs box oracle, and the sampler."""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .boxes import exact_nikodym, exact_symmetral_axis, exact_volume, random_box_union, to_field
from .directions import chi_square_uniformity, double_cap_probability, sample_uniform_batch
from .field import GridSpec, nikodym_distance
from .symmetrize import steiner_symmetrize


@dataclass
class OracleReport:
    max_rel_error: float
    shrink_factor: float
    max_lipschitz_excess_exact: float
    max_lipschitz_excess_raster: float
    passed: bool


def oracle_check(
    n_unions: int = 10,
    n_pairs: int = 50,
    resolution: int = 256,
    extent: float = 2.0,
    seed: int = 0,
    tol: float = 0.05,
    min_shrink: float = 1.7,
    lipschitz_slack: float = 0.02,
) -> OracleReport:
    """Compare axis symmetrals of random box unions on the raster with the exact ones.

    The relative error is measured at ``resolution`` and at half of it; the
    shrink factor is the ratio of the summed errors.  The Lipschitz part
    symmetrizes random pairs along a random axis.
    """
    rng = np.random.default_rng(seed)
    unions = [random_box_union(rng) for _ in range(n_unions)]
    errors = {}
    for n in (resolution // 2, resolution):
        grid = GridSpec(2, n, extent)
        errs = []
        for k, B in enumerate(unions):
            axis = k % 2
            exact = to_field(exact_symmetral_axis(B, axis), grid)
            raster = steiner_symmetrize(to_field(B, grid), np.eye(2)[axis])
            errs.append(nikodym_distance(raster, exact) / exact_volume(B))
        errors[n] = np.array(errs)
    shrink = float(errors[resolution // 2].sum() / errors[resolution].sum())

    grid = GridSpec(2, resolution, extent)
    exact_excess = -math.inf
    raster_excess = -math.inf
    for _ in range(n_pairs):
        A = random_box_union(rng)
        B = random_box_union(rng)
        axis = int(rng.integers(2))
        before = exact_nikodym(A, B)
        after = exact_nikodym(exact_symmetral_axis(A, axis), exact_symmetral_axis(B, axis))
        exact_excess = max(exact_excess, after - before)
        FA, FB = to_field(A, grid), to_field(B, grid)
        u = np.eye(2)[axis]
        d_before = nikodym_distance(FA, FB)
        d_after = nikodym_distance(steiner_symmetrize(FA, u), steiner_symmetrize(FB, u))
        scale = max(exact_volume(A), exact_volume(B))
        raster_excess = max(raster_excess, (d_after - d_before) / scale)

    max_err = float(errors[resolution].max())
    passed = max_err <= tol and shrink >= min_shrink and exact_excess <= 0.0 and raster_excess <= lipschitz_slack
    return OracleReport(max_err, shrink, exact_excess, raster_excess, passed)


@dataclass
class SamplerReport:
    dim: int
    samples: int
    empirical: float
    analytic: float
    sigma: float
    chi2: float
    p_value: float
    passed: bool


def sampler_check(dim: int = 3, samples: int = 100_000, seed: int = 0, alpha: float = 1e-3) -> SamplerReport:
    """Double-cap frequency within 3 sigma of the closed form, plus chi-square uniformity."""
    rng = np.random.Generator(np.random.PCG64(seed))
    u = sample_uniform_batch(rng, dim, samples)
    w = np.ones(dim) / math.sqrt(dim)
    emp = float(np.mean(np.abs(u @ w) >= 1.0 / math.sqrt(2.0)))
    p = double_cap_probability(dim)
    sigma = math.sqrt(p * (1 - p) / samples)
    chi2, pval = chi_square_uniformity(u)
    passed = abs(emp - p) <= 3 * sigma and pval > alpha
    return SamplerReport(dim, samples, emp, p, sigma, chi2, pval, passed)
