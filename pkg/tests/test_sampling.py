import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from scipy.stats import ks_2samp

from simplex_limits.rng import RandomStream
from simplex_limits.sampling import (
    check_ball_invariants,
    check_simplex_invariants,
    exponential_block,
    lp_ball_block,
    pgen_gaussian_block,
    sample_exponentials,
    sample_lp_ball,
    sample_pgen_gaussian,
    sample_simplex,
    spacings_block,
)


def _uniform_ks(values, lo, hi):
    """One-sample KS distance against the uniform law on [lo, hi]."""
    v = np.sort(values)
    f = np.clip((v - lo) / (hi - lo), 0.0, 1.0)
    i = np.arange(1, len(v) + 1)
    return max(np.max(i / len(v) - f), np.max(f - (i - 1) / len(v)))


# ---------------------------------------------------------------------------
# exponentials


def test_exponentials_deterministic():
    s = RandomStream(1, 2)
    assert np.array_equal(sample_exponentials(s, 1), sample_exponentials(s, 1))
    assert np.array_equal(sample_exponentials(s, 100), sample_exponentials(s, 100))


def test_exponentials_match_block_layout():
    s = RandomStream(3)
    assert np.array_equal(sample_exponentials(s, 5), exponential_block(s, 1, 5)[0])


def test_exponentials_zero_dimension_rejected():
    with pytest.raises(ValueError):
        sample_exponentials(RandomStream(0), 0)


def test_exponential_moments():
    n = 10**6
    x = sample_exponentials(RandomStream(11), n)
    assert abs(x.mean() - 1.0) < 4.0 * n**-0.5
    # Var(E) = 1 with Var of the variance estimator driven by the 4th moment 9
    assert abs(x.var() - 1.0) < 5.0 * n**-0.5 * math.sqrt(8.0)


# ---------------------------------------------------------------------------
# simplex


def test_simplex_n1_is_exact():
    assert sample_simplex(RandomStream(0), 1, centered=True).coords[0] == 0.0
    assert sample_simplex(RandomStream(0), 1, centered=False).coords[0] == 1.0
    assert spacings_block(RandomStream(0), 3, 1).tolist() == [[1.0], [1.0], [1.0]]


@settings(max_examples=60, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32),
    n=st.integers(min_value=1, max_value=64),
    centered=st.booleans(),
    construction=st.sampled_from(["exponential", "spacings"]),
)
def test_simplex_invariants(seed, n, centered, construction):
    point = sample_simplex(RandomStream(seed), n, centered=centered, construction=construction)
    check_simplex_invariants(point)


def test_simplex_first_coordinate_is_centered_uniform_at_n2():
    e = exponential_block(RandomStream(21), 100_000, 2)
    u = e[:, 0] / e.sum(axis=1)  # Beta(1,1)
    assert _uniform_ks(u - 0.5, -0.5, 0.5) <= 0.01


@pytest.mark.parametrize("n,q", [(2, 2.0), (5, 2.0), (20, 2.0), (50, math.inf)])
def test_constructions_equidistributed(n, q):
    reps = 100_000
    e = exponential_block(RandomStream(33).substream(n), reps, n)
    g = spacings_block(RandomStream(44).substream(n), reps, n)
    ze = e / e.sum(axis=1)[:, None] - 1.0 / n
    zg = g - 1.0 / n
    if math.isinf(q):
        a, b = np.abs(ze).max(axis=1), np.abs(zg).max(axis=1)
    else:
        scale = n ** (1.0 - 1.0 / q)
        a = scale * (np.abs(ze) ** q).sum(axis=1) ** (1.0 / q)
        b = scale * (np.abs(zg) ** q).sum(axis=1) ** (1.0 / q)
    assert ks_2samp(a, b).statistic <= 0.01


# ---------------------------------------------------------------------------
# p-generalized Gaussian


def test_pgen_rejects_bad_p():
    with pytest.raises(ValueError):
        sample_pgen_gaussian(RandomStream(0), 0.9)


def test_pgen_scalar_is_deterministic():
    s = RandomStream(5)
    assert sample_pgen_gaussian(s, 1.5) == sample_pgen_gaussian(s, 1.5)


def test_pgen_p2_is_standard_gaussian():
    y = pgen_gaussian_block(RandomStream(6), 1, 10**6, 2.0)[0]
    assert abs(y.var() - 1.0) < 0.01


def test_pgen_p1_is_standard_laplace():
    y = pgen_gaussian_block(RandomStream(7), 1, 10**6, 1.0)[0]
    assert abs(np.abs(y).mean() - 1.0) < 0.01


@pytest.mark.parametrize("p", [1.0, 1.5, 2.0, 4.0])
def test_pgen_sign_symmetry(p):
    y = pgen_gaussian_block(RandomStream(8), 1, 10**6, p)[0]
    assert abs(np.mean(y > 0) - 0.5) < 4.0 * 10**-3 / 2.0


# ---------------------------------------------------------------------------
# lp ball


def test_ball_1d_is_uniform_interval():
    y = lp_ball_block(RandomStream(9), 100_000, 1, 2.0)[:, 0]
    assert _uniform_ks(y, -1.0, 1.0) <= 0.01


def test_ball_radius_power_is_uniform():
    # ||coords||_2 = U**(1/n), so its n-th power is uniform with mean 1/2
    reps, n = 100_000, 3
    c = lp_ball_block(RandomStream(10), reps, n, 2.0)
    r_cubed = np.sqrt((c * c).sum(axis=1)) ** n
    se = r_cubed.std() / math.sqrt(reps)
    assert abs(r_cubed.mean() - 0.5) <= 3.0 * se


def test_ball_membership_l1():
    c = lp_ball_block(RandomStream(12), 100_000, 10, 1.0)
    assert np.abs(c).sum(axis=1).max() <= 1.0 + 1e-12


@settings(max_examples=40, deadline=None)
@given(
    seed=st.integers(min_value=0, max_value=2**32),
    n=st.integers(min_value=1, max_value=32),
    p=st.sampled_from([1.0, 1.5, 2.0, 4.0]),
)
def test_ball_invariants(seed, n, p):
    check_ball_invariants(sample_lp_ball(RandomStream(seed), n, p))


def test_ball_deterministic():
    a = sample_lp_ball(RandomStream(13), 6, 1.5)
    b = sample_lp_ball(RandomStream(13), 6, 1.5)
    assert np.array_equal(a.coords, b.coords)
