import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steiner_sym import DirectionSource, EmptyCycle, ZeroVector, canonicalize, direction_distance, double_cap_probability
from steiner_sym.directions import chi_square_uniformity, sample_uniform, sample_uniform_batch, star_discrepancy


@pytest.mark.parametrize("v,expected", [((-1, 0), (1, 0)), ((0, -2), (0, 1)), ((3, 4), (0.6, 0.8))])
def test_canonicalize_examples(v, expected):
    np.testing.assert_allclose(canonicalize(v), expected, atol=1e-15)


def test_canonicalize_zero_vector():
    with pytest.raises(ZeroVector):
        canonicalize([0.0, 0.0, 0.0])


def test_canonicalize_sign_tolerance():
    # a first component below the tolerance does not decide the sign
    u = canonicalize([-1e-14, -1.0])
    assert u[1] > 0


vec3 = st.lists(st.floats(-10, 10, allow_nan=False), min_size=3, max_size=3).filter(
    lambda v: np.linalg.norm(v) > 1e-3
)


@settings(max_examples=200, deadline=None)
@given(vec3)
def test_canonicalize_idempotent_and_class_consistent(v):
    u = canonicalize(v)
    assert abs(np.linalg.norm(u) - 1) <= 1e-12
    np.testing.assert_array_equal(canonicalize(u), u)
    if abs(np.asarray(v)[np.abs(v) > 1e-9 * np.linalg.norm(v)][0]) > 1e-6:
        np.testing.assert_allclose(canonicalize(-np.asarray(v)), u, atol=1e-15)


def test_distance_examples():
    assert direction_distance((1, 0), (1, 0)) == 0.0
    assert direction_distance((1, 0), (0, 1)) == pytest.approx(math.sqrt(2))
    assert direction_distance((1, 0), (-1, 0)) == 0.0


def test_distance_metric_axioms():
    rng = np.random.Generator(np.random.PCG64(5))
    for _ in range(1000):
        u, v, w = (sample_uniform(rng, 3) for _ in range(3))
        duv = direction_distance(u, v)
        assert duv >= 0 and duv == direction_distance(v, u)
        assert direction_distance(u, w) <= duv + direction_distance(v, w) + 1e-12
        assert direction_distance(u, -u) == 0.0


def test_double_cap_closed_form():
    assert double_cap_probability(2) == 0.5
    assert double_cap_probability(3) == pytest.approx(0.29289, abs=1e-5)


@pytest.mark.parametrize("dim", [2, 3])
def test_sampler_moments_and_double_cap(dim):
    rng = np.random.Generator(np.random.PCG64(11))
    u = sample_uniform_batch(rng, dim, 100_000)
    np.testing.assert_allclose(np.linalg.norm(u, axis=1), 1.0, atol=1e-12)
    w = np.ones(dim) / math.sqrt(dim)
    # canonical representatives are not symmetric; the sign-flipped law is
    signs = rng.choice([-1.0, 1.0], size=len(u))
    assert abs(np.mean(signs * (u @ w))) <= 3 / math.sqrt(1e5 * dim)
    assert np.mean(np.abs(u @ w) >= 1 / math.sqrt(2)) == pytest.approx(double_cap_probability(dim), abs=5e-3)


def test_sampler_outputs_are_canonical():
    rng = np.random.Generator(np.random.PCG64(2))
    u = sample_uniform_batch(rng, 3, 1000)
    assert np.all(u[:, 0] > 0)


def test_iid_source_reproducible():
    a = DirectionSource.iid_uniform(3, seed=42).next()
    b = DirectionSource.iid_uniform(3, seed=42).next()
    assert a.tobytes() == b.tobytes()


def test_cyclic_source_order():
    src = DirectionSource.cyclic([[1, 0], [0, 1]])
    got = src.take(5)
    np.testing.assert_array_equal(got, [[1, 0], [0, 1], [1, 0], [0, 1], [1, 0]])


def test_cyclic_source_rejects_empty_list():
    with pytest.raises(EmptyCycle):
        DirectionSource.cyclic([]).next()


def test_equidistributed_2d_discrepancy():
    src = DirectionSource.equidistributed(2)
    u = np.array(src.take(10_000))
    theta = np.arctan2(u[:, 1], u[:, 0]) % math.pi
    assert star_discrepancy(theta / math.pi) <= 0.01


def test_equidistributed_3d_uniform_on_hemisphere():
    u = np.array(DirectionSource.equidistributed(3).take(20_000))
    _, p = chi_square_uniformity(u)
    assert p > 1e-3
    # far more regular than random: bin counts nearly equal
    assert np.all(np.abs(np.linalg.norm(u, axis=1) - 1) < 1e-12)


@pytest.mark.parametrize("dim", [2, 3])
def test_uniform_sampler_chi_square(dim):
    rng = np.random.Generator(np.random.PCG64(0))
    _, p = chi_square_uniformity(sample_uniform_batch(rng, dim, 100_000))
    assert p > 1e-3


def test_axis_biased_zero_exponent_looks_uniform():
    u = np.array(DirectionSource.axis_biased(3, seed=9, exponent=0).take(100_000))
    _, p = chi_square_uniformity(u)
    assert p > 1e-3


def test_axis_biased_concentrates_on_first_axis():
    u = np.array(DirectionSource.axis_biased(2, seed=9, exponent=8).take(5000))
    assert np.mean(np.abs(u[:, 0])) > 0.85
    _, p = chi_square_uniformity(u)
    assert p < 1e-3


def test_source_state_counts_draws():
    src = DirectionSource.iid_uniform(2, seed=1)
    src.take(7)
    assert src.state == 7
