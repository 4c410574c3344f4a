"""
Direction policies
==================

Directions live on the projective sphere: u and -u give the same
symmetrization. This demo draws from each policy and checks how evenly
the samples cover the upper hemisphere.
"""

import numpy as np

from steiner_sym import DirectionSource
from steiner_sym.directions import chi_square_uniformity, double_cap_probability

# independent uniform draws in 3-D, from a seeded PCG64 generator
u = np.array(DirectionSource.iid_uniform(3, seed=0).take(100_000))
w = np.ones(3) / np.sqrt(3)
print("double cap: empirical", np.mean(np.abs(u @ w) >= 1 / np.sqrt(2)), "analytic", double_cap_probability(3))
print("chi-square p-value, uniform:", chi_square_uniformity(u)[1])

# a deterministic low-discrepancy sequence covers the hemisphere evenly
q = np.array(DirectionSource.equidistributed(3).take(10_000))
print("chi-square statistic, equidistributed:", chi_square_uniformity(q)[0])

# a symmetric but non-uniform law concentrated near the first axis
a = np.array(DirectionSource.axis_biased(3, seed=0, exponent=8).take(10_000))
print("mean |u_1|, axis-biased (k=8):", np.abs(a[:, 0]).mean(), " uniform:", np.abs(u[:, 0]).mean())

# a cyclic source repeats a fixed list
c = DirectionSource.cyclic([[1, 0], [0, 1]])
print("cyclic:", [v.tolist() for v in c.take(4)])
