import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from simplex_limits import statistics as stats
from simplex_limits.constants import moment_constants
from simplex_limits.experiments import clt_sample, sup_norm_sample
from simplex_limits.sampling import LpBallPoint, SimplexPoint


def _sample(values, kind="test", n=10, seed=0):
    return stats.EmpiricalSample.from_values(values, n=n, statistic_kind=kind, seed=seed)


# ---------------------------------------------------------------------------
# lq_norm


def test_lq_norm_values():
    assert stats.lq_norm([3.0, -4.0], 2.0) == 5.0
    assert stats.lq_norm([1.0, -2.0, 0.0], math.inf) == 2.0
    n = 17
    assert abs(stats.lq_norm(np.ones(n), 3.0) - n ** (1.0 / 3.0)) < 1e-12


def test_lq_norm_errors():
    with pytest.raises(ValueError):
        stats.lq_norm([], 2.0)
    with pytest.raises(ValueError):
        stats.lq_norm([1.0], 0.5)


@settings(max_examples=80, deadline=None)
@given(
    x=st.lists(st.floats(min_value=-1e8, max_value=1e8), min_size=1, max_size=12),
    c=st.floats(min_value=-1e6, max_value=1e6),
    q=st.sampled_from([1.0, 1.5, 2.0, 3.0, 7.0, math.inf]),
)
def test_lq_norm_homogeneity(x, c, q):
    lhs = stats.lq_norm(np.array(x) * c, q)
    rhs = abs(c) * stats.lq_norm(x, q)
    assert lhs == pytest.approx(rhs, rel=1e-12, abs=1e-300)


@settings(max_examples=80, deadline=None)
@given(x=st.lists(st.floats(min_value=-100.0, max_value=100.0), min_size=1, max_size=12))
def test_lq_norm_monotone_in_q(x):
    qs = [1.0, 1.5, 2.0, 4.0, 16.0, math.inf]
    norms = [stats.lq_norm(x, q) for q in qs]
    for a, b in zip(norms, norms[1:]):
        assert a >= b - 1e-12 * max(1.0, abs(a))


# ---------------------------------------------------------------------------
# scaled statistics


def _centered_point(coords):
    coords = np.asarray(coords, dtype=np.float64)
    return SimplexPoint(coords=coords, n=len(coords), centered=True)


def test_clt_statistic_zero_at_its_normalizer():
    q, n = 2.0, 4
    mc = moment_constants(q)
    a = math.sqrt(mc.mu_q) * n ** (1.0 / q - 1.0) / 2.0  # ||coords||_2 hits the normalizer
    point = _centered_point([a, -a, a, -a])
    assert abs(stats.clt_statistic(point, q, mc)) < 1e-12


def test_clt_statistic_validates_inputs():
    mc = moment_constants(2.0)
    uncentered = SimplexPoint(coords=np.array([0.5, 0.5]), n=2, centered=False)
    with pytest.raises(ValueError):
        stats.clt_statistic(uncentered, 2.0, mc)
    with pytest.raises(ValueError):
        stats.clt_statistic(_centered_point([0.1, -0.1]), 3.0, mc)


def test_clt_statistic_small_n_pushforward():
    # at n=2, q=2 the statistic is sqrt(2)*(2|U - 1/2| - 1), uniform on [-sqrt(2), 0]
    sample = clt_sample(seed=17, n=2, q=2.0, replicates=100_000)
    v = np.sort(sample.values)
    f = np.clip(v / math.sqrt(2.0) + 1.0, 0.0, 1.0)
    i = np.arange(1, len(v) + 1)
    ks = max(np.max(i / len(v) - f), np.max(f - (i - 1) / len(v)))
    assert ks <= 0.01


def test_gumbel_statistic_zero_case():
    n = 100
    target = (math.log(n) - 1.0) / n
    point = _centered_point([target] + [-target / (n - 1)] * (n - 1))
    assert abs(stats.gumbel_statistic(point)) < 1e-12


def test_gumbel_statistic_median_near_limit():
    base = sup_norm_sample(seed=23, n=1000, replicates=20_000)
    med = float(np.median(base.values)) - (math.log(1000) - 1.0)
    assert abs(med - 0.36651292058166435) < 0.1


def test_ldp_statistic_zero_case_and_guard():
    n = 50
    target = math.log(n) / n
    point = _centered_point([target] + [-target / (n - 1)] * (n - 1))
    assert abs(stats.ldp_statistic(point) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        stats.ldp_statistic(_centered_point([0.0]))


def test_mdp_statistic_zero_case_and_speed_guard():
    n = 50
    target = math.log(n) / n
    point = _centered_point([target] + [-target / (n - 1)] * (n - 1))
    assert abs(stats.mdp_statistic(point, s_n=1.5)) < 1e-12
    with pytest.raises(ValueError):
        stats.mdp_statistic(point, s_n=0.5)
    with pytest.raises(ValueError):
        stats.mdp_statistic(point, s_n=math.log(n) + 1.0)


def test_lp_ldp_statistic_zero_case():
    n, p = 64, 2.0
    target = (p * math.log(n) / n) ** (1.0 / p)
    coords = np.zeros(n)
    coords[0] = target
    point = LpBallPoint(coords=coords, n=n, p=p)
    assert abs(stats.lp_ldp_statistic(point, p) - 1.0) < 1e-12
    with pytest.raises(ValueError):
        stats.lp_ldp_statistic(point, 3.0)


def test_default_mdp_speed():
    assert stats.default_mdp_speed(10**6) == pytest.approx(math.sqrt(math.log(10**6)))


# ---------------------------------------------------------------------------
# equivalence indicator


def test_equivalence_indicator_cases():
    assert stats.equivalence_indicator(np.array([1.0, 1.0])) is False
    assert stats.equivalence_indicator(np.array([1.0, 1.0, 10.0])) is False
    assert stats.equivalence_indicator(np.array([0.5, 1.0, 1.1])) is True


def test_equivalence_indicator_tie_resolves_false():
    # symmetric vector: both sides attain the same magnitude exactly
    assert stats.equivalence_indicator(np.array([2.0, 1.0, 0.0]) + 1.0) is False


def test_equivalence_indicator_needs_vector():
    with pytest.raises(ValueError):
        stats.equivalence_indicator(np.array([1.0]))


# ---------------------------------------------------------------------------
# reference CDFs


def test_gumbel_cdf_values():
    assert float(stats.gumbel_cdf(0.0)) == pytest.approx(math.exp(-1.0), abs=1e-15)
    assert float(stats.gumbel_cdf(50.0)) == pytest.approx(1.0, abs=1e-15)
    assert float(stats.gumbel_cdf(-math.log(math.log(2.0)))) == pytest.approx(0.5, abs=1e-15)


def test_gaussian_cdf_values():
    assert float(stats.gaussian_cdf(0.0)) == 0.5
    assert float(stats.gaussian_cdf(1.959963985)) == pytest.approx(0.975, abs=1e-9)


@given(st.floats(min_value=-30.0, max_value=30.0))
def test_gaussian_cdf_symmetry(x):
    assert float(stats.gaussian_cdf(-x)) == pytest.approx(1.0 - float(stats.gaussian_cdf(x)),
                                                          abs=1e-12)


# ---------------------------------------------------------------------------
# KS distance


def test_ks_distance_exact_quantile_construction():
    m = 200
    quantiles = [-math.log(-math.log((i - 0.5) / m)) for i in range(1, m + 1)]
    got = stats.ks_distance(_sample(quantiles), stats.gumbel_cdf, reference="gumbel")
    assert got.ks_distance == pytest.approx(1.0 / (2.0 * m), abs=1e-12)
    assert got.reference == "gumbel"


def test_ks_distance_single_point_at_median():
    got = stats.ks_distance(_sample([0.0]), stats.gaussian_cdf)
    assert got.ks_distance == 0.5


def test_ks_distance_iid_reference_draws():
    rng = np.random.default_rng(2024)
    sample = _sample(rng.standard_normal(100_000))
    got = stats.ks_distance(sample, stats.gaussian_cdf)
    # 99% Kolmogorov bound at m = 1e5
    assert got.ks_distance <= 1.63 / math.sqrt(100_000)


def test_ks_distance_probability_integral_transform():
    rng = np.random.default_rng(7)
    values = rng.standard_normal(5000)
    direct = stats.ks_distance(_sample(values), stats.gaussian_cdf).ks_distance
    uniforms = stats.gaussian_cdf(np.sort(values))
    via_pit = stats.ks_distance(_sample(uniforms), lambda u: np.clip(u, 0.0, 1.0)).ks_distance
    assert direct == via_pit


# ---------------------------------------------------------------------------
# tail log-probabilities


def test_tail_log_prob_counts():
    sample = _sample([0.0, 1.0, 2.0, 3.0])
    dev = stats.tail_log_prob(sample, 1.5, speed=1.0, direction="above")
    assert dev.hit_count == 2
    assert dev.normalized_log_prob == pytest.approx(math.log(2.0))
    assert dev.std_error == pytest.approx(math.sqrt(0.5 / (0.5 * 4)))
    assert not dev.empty_tail


def test_tail_log_prob_below_direction():
    sample = _sample([0.0, 1.0, 2.0, 3.0])
    dev = stats.tail_log_prob(sample, 0.5, speed=2.0, direction="below")
    assert dev.hit_count == 1
    assert dev.normalized_log_prob == pytest.approx(math.log(4.0) / 2.0)


def test_tail_log_prob_empty_tail():
    dev = stats.tail_log_prob(_sample([0.0, 1.0]), 5.0, speed=1.0, direction="above")
    assert dev.empty_tail
    assert dev.hit_count == 0
    assert math.isinf(dev.normalized_log_prob)


def test_tail_log_prob_validation():
    with pytest.raises(ValueError):
        stats.tail_log_prob(_sample([0.0]), 1.0, speed=0.0)
    with pytest.raises(ValueError):
        stats.tail_log_prob(_sample([0.0]), 1.0, speed=1.0, direction="sideways")


# ---------------------------------------------------------------------------
# empirical sample container


def test_empirical_sample_sorts_and_validates():
    s = _sample([3.0, 1.0, 2.0])
    assert s.values.tolist() == [1.0, 2.0, 3.0]
    with pytest.raises(ValueError):
        stats.EmpiricalSample(values=np.array([2.0, 1.0]), replicates=2, n=1,
                              statistic_kind="bad", seed=0)
    with pytest.raises(ValueError):
        stats.EmpiricalSample(values=np.array([1.0, 2.0]), replicates=3, n=1,
                              statistic_kind="bad", seed=0)


# ---------------------------------------------------------------------------
# general central-moment CLT


def test_general_stat_constant_data():
    mq = 0.25
    assert stats.general_central_moment_stat([2.0] * 9, 1.0, mu=2.0, mq=mq) == \
        pytest.approx(3.0 * (0.0 - mq))


def test_general_stat_validation():
    with pytest.raises(ValueError):
        stats.general_central_moment_stat([], 1.0, mu=0.0, mq=0.0)
    with pytest.raises(ValueError):
        stats.general_central_moment_stat([1.0], 0.5, mu=0.0, mq=0.0)


def test_general_clt_variance_exponential_q2():
    # derivative term vanishes and Var (E-1)^2 = 9 - 1
    assert stats.general_clt_variance(stats.ExponentialDist, 2.0) == pytest.approx(8.0, abs=1e-6)


def test_general_clt_variance_uniform_q1():
    # |X - 1/2| is uniform on [0, 1/2]: variance 1/48
    assert stats.general_clt_variance(stats.Uniform01Dist, 1.0) == pytest.approx(1.0 / 48.0,
                                                                                 abs=1e-9)


def test_abs_moment_centers():
    assert stats.abs_moment(stats.ExponentialDist, 1.0, 1.0) == pytest.approx(2.0 / math.e,
                                                                              abs=1e-10)
    assert stats.abs_moment(stats.Uniform01Dist, 1.0, 0.5) == pytest.approx(0.25, abs=1e-12)


def test_degenerate_variance_raises(monkeypatch):
    monkeypatch.setattr(stats, "_expect", lambda dist, f, split: 1.0)
    with pytest.raises(stats.DegenerateVarianceError):
        stats.general_clt_variance(stats.Uniform01Dist, 2.0)
