"""Norms, scaled limit statistics, reference CDFs, empirical-distribution
machinery, and deviation-rate estimators.

Statistics are pure maps from sampled points to reals; anything distributional
(KS distances, tail log-probabilities) operates on an
:class:`EmpiricalSample`, so the oracle module can evaluate exact
probabilities of the very same statistics.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numpy as np
from scipy.integrate import quad
from scipy.special import ndtr

from .constants import MomentConstants
from .sampling import LpBallPoint, SimplexPoint


class DegenerateVarianceError(ValueError):
    """The central-moment CLT variance is not strictly positive."""


# ---------------------------------------------------------------------------
# norms and scaled statistics


def lq_norm(x, q: float) -> float:
    """(sum |x_i|**q)**(1/q), or the coordinate maximum for q = inf.

    Scales by the coordinate maximum before powering, so large inputs do not
    overflow for big q.
    """
    x = np.asarray(x, dtype=np.float64)
    if x.size == 0:
        raise ValueError("lq_norm of an empty vector")
    if not q >= 1.0:
        raise ValueError(f"norm exponent must satisfy q >= 1, got {q}")
    a = np.abs(x)
    top = float(a.max())
    if math.isinf(q) or top == 0.0:
        return top
    return top * float(np.sum((a / top) ** q)) ** (1.0 / q)


def clt_statistic(point: SimplexPoint, q: float, mc: MomentConstants) -> float:
    """sqrt(n) * (n**(1-1/q) * ||Z||_q * mu_q**(-1/q) - 1) / sigma_q."""
    if not point.centered:
        raise ValueError("clt_statistic requires a centered simplex point")
    if mc.q != q:
        raise ValueError(f"constants bundle is for q={mc.q}, statistic asked for q={q}")
    if math.isinf(q):
        raise ValueError("clt_statistic requires q < inf")
    n = point.n
    scaled = n ** (1.0 - 1.0 / q) * lq_norm(point.coords, q) * mc.mu_q ** (-1.0 / q)
    return math.sqrt(n) * (scaled - 1.0) / math.sqrt(mc.sigma_q_sq)


def gumbel_statistic(point: SimplexPoint) -> float:
    """n * ||Z||_inf - (log n - 1)."""
    if not point.centered:
        raise ValueError("gumbel_statistic requires a centered simplex point")
    n = point.n
    return n * lq_norm(point.coords, math.inf) - (math.log(n) - 1.0)


def ldp_statistic(point: SimplexPoint) -> float:
    """(n / log n) * ||Z||_inf."""
    if not point.centered:
        raise ValueError("ldp_statistic requires a centered simplex point")
    if point.n < 2:
        raise ValueError("ldp_statistic requires n >= 2")
    return point.n * lq_norm(point.coords, math.inf) / math.log(point.n)


def default_mdp_speed(n: int) -> float:
    """Default moderate-deviation speed sqrt(log n)."""
    return math.sqrt(math.log(n))


def mdp_statistic(point: SimplexPoint, s_n: float) -> float:
    """(log n / s_n) * ((n / log n) * ||Z||_inf - 1)."""
    if not point.centered:
        raise ValueError("mdp_statistic requires a centered simplex point")
    if point.n < 2:
        raise ValueError("mdp_statistic requires n >= 2")
    log_n = math.log(point.n)
    if not 1.0 < s_n < log_n:
        raise ValueError(f"moderate speed must satisfy 1 < s_n < log n, got {s_n} at n={point.n}")
    return (log_n / s_n) * (point.n * lq_norm(point.coords, math.inf) / log_n - 1.0)


def lp_ldp_statistic(point: LpBallPoint, p: float) -> float:
    """(n / (p log n))**(1/p) * ||Z||_inf for an lp-ball point."""
    if point.p != p:
        raise ValueError(f"point was sampled with p={point.p}, statistic asked for p={p}")
    if point.n < 2:
        raise ValueError("lp_ldp_statistic requires n >= 2")
    n = point.n
    return (n / (p * math.log(n))) ** (1.0 / p) * lq_norm(point.coords, math.inf)


def equivalence_indicator(exponentials: np.ndarray) -> bool:
    """True iff ||Z||_inf differs from the one-sided maximum for this vector.

    The two statistics differ exactly when the most negative centered
    coordinate strictly exceeds the most positive one in absolute value,
    i.e. when 2 * mean(E) > max(E) + min(E).  Ties resolve to False (the
    norms agree); this comparison form is also exactly tie-symmetric in
    floating point at n = 2, where the two sides are equal by construction.
    """
    e = np.asarray(exponentials, dtype=np.float64)
    if e.ndim != 1 or e.size < 2:
        raise ValueError("equivalence_indicator needs a vector of length >= 2")
    return bool(2.0 * float(e.sum()) / e.size > float(e.max()) + float(e.min()))


# ---------------------------------------------------------------------------
# reference CDFs


def gumbel_cdf(x):
    """Standard Gumbel CDF exp(-exp(-x)); accepts scalars or arrays."""
    return np.exp(-np.exp(-np.asarray(x, dtype=np.float64)))


def gaussian_cdf(x):
    """Standard normal CDF; accepts scalars or arrays."""
    return ndtr(np.asarray(x, dtype=np.float64))


# ---------------------------------------------------------------------------
# empirical samples


@dataclass(frozen=True)
class EmpiricalSample:
    """Sorted replicated statistic values with their generation metadata."""

    values: np.ndarray
    replicates: int
    n: int
    statistic_kind: str
    seed: int

    def __post_init__(self) -> None:
        if self.replicates != len(self.values):
            raise ValueError("replicates must equal len(values)")
        if np.any(np.diff(self.values) < 0):
            raise ValueError("values must be sorted nondecreasing")

    @classmethod
    def from_values(cls, values, n: int, statistic_kind: str, seed: int) -> "EmpiricalSample":
        v = np.sort(np.asarray(values, dtype=np.float64))
        return cls(values=v, replicates=len(v), n=n, statistic_kind=statistic_kind, seed=seed)


@dataclass(frozen=True)
class GoodnessOfFit:
    ks_distance: float
    replicates: int
    reference: str

    def __post_init__(self) -> None:
        if not 0.0 <= self.ks_distance <= 1.0:
            raise ValueError(f"KS distance {self.ks_distance} outside [0, 1]")


def ks_distance(sample: EmpiricalSample, cdf: Callable, reference: str = "custom") -> GoodnessOfFit:
    """Kolmogorov-Smirnov sup-distance of the sample against a reference CDF.

    Evaluates both one-sided step discrepancies at every sorted sample point.
    """
    m = sample.replicates
    if m < 1:
        raise ValueError("ks_distance requires a nonempty sample")
    f = np.asarray(cdf(sample.values), dtype=np.float64)
    i = np.arange(1, m + 1, dtype=np.float64)
    d_plus = float(np.max(i / m - f))
    d_minus = float(np.max(f - (i - 1.0) / m))
    return GoodnessOfFit(ks_distance=max(d_plus, d_minus), replicates=m, reference=reference)


@dataclass(frozen=True)
class DeviationEstimate:
    """A tail log-probability estimate normalized by a deviation speed.

    When no replicate lands in the tail the estimate is flagged empty rather
    than extrapolated; ``normalized_log_prob`` is +inf in that case, which is
    the honest one-sided reading of a zero count.
    """

    threshold: float
    speed: float
    hit_count: int
    replicates: int
    normalized_log_prob: float
    std_error: float
    empty_tail: bool

    def __post_init__(self) -> None:
        if not 0 <= self.hit_count <= self.replicates:
            raise ValueError(f"hit count {self.hit_count} outside [0, {self.replicates}]")


def tail_log_prob(sample: EmpiricalSample, z: float, speed: float,
                  direction: str = "above") -> DeviationEstimate:
    """-(1/speed) * log of the empirical tail frequency beyond ``z``.

    The standard error is the delta-method binomial error on the normalized
    value: (1/speed) * sqrt((1 - phat) / (phat * replicates)).
    """
    if speed <= 0:
        raise ValueError(f"speed must be positive, got {speed}")
    if direction not in ("above", "below"):
        raise ValueError(f"direction must be 'above' or 'below', got {direction!r}")
    m = sample.replicates
    if m < 1:
        raise ValueError("tail_log_prob requires a nonempty sample")
    if direction == "above":
        hits = int(np.count_nonzero(sample.values > z))
    else:
        hits = int(np.count_nonzero(sample.values < z))
    if hits == 0:
        return DeviationEstimate(threshold=z, speed=speed, hit_count=0, replicates=m,
                                 normalized_log_prob=math.inf, std_error=math.inf,
                                 empty_tail=True)
    phat = hits / m
    return DeviationEstimate(
        threshold=z, speed=speed, hit_count=hits, replicates=m,
        normalized_log_prob=-math.log(phat) / speed,
        std_error=math.sqrt((1.0 - phat) / (phat * m)) / speed,
        empty_tail=False,
    )


# ---------------------------------------------------------------------------
# general central-moment CLT (arbitrary source distribution)


class ExponentialDist:
    """Standard exponential source for the central-moment CLT."""

    name = "exponential"
    mean = 1.0

    @staticmethod
    def sample(rng: np.random.Generator, shape) -> np.ndarray:
        return rng.standard_exponential(shape)

    @staticmethod
    def _pdf(x: float) -> float:
        return math.exp(-x)

    support = (0.0, math.inf)


class Uniform01Dist:
    """Uniform [0, 1] source for the central-moment CLT."""

    name = "uniform01"
    mean = 0.5

    @staticmethod
    def sample(rng: np.random.Generator, shape) -> np.ndarray:
        return rng.random(shape)

    @staticmethod
    def _pdf(x: float) -> float:
        return 1.0

    support = (0.0, 1.0)


SOURCE_DISTRIBUTIONS = {"exponential": ExponentialDist, "uniform01": Uniform01Dist}


def _expect(dist, f: Callable[[float], float], split: float) -> float:
    # Integrands here have a kink at `split`, so integrate the two pieces.
    a, b = dist.support
    total = 0.0
    for lo, hi in ((a, split), (split, b)):
        if lo >= hi:
            continue
        val, _ = quad(lambda x: f(x) * dist._pdf(x), lo, hi,
                      epsabs=1e-11, epsrel=1e-11, limit=200)
        total += val
    return total


def abs_moment(dist, q: float, t: float) -> float:
    """E|X - t|**q for the named source distribution, by quadrature."""
    return _expect(dist, lambda x: abs(x - t) ** q, split=t)


def general_central_moment_stat(data, q: float, mu: float, mq: float) -> float:
    """sqrt(n) * ((1/n) sum |X_i - Xbar|**q - mq).

    ``mu`` is the distribution mean used by the matching variance formula; the
    statistic itself centers at the empirical mean.
    """
    x = np.asarray(data, dtype=np.float64)
    if x.size == 0:
        raise ValueError("general_central_moment_stat requires nonempty data")
    if not q >= 1.0:
        raise ValueError(f"moment order must satisfy q >= 1, got {q}")
    n = x.size
    centered = np.abs(x - x.mean())
    return math.sqrt(n) * (float(np.mean(centered**q)) - mq)


def general_clt_variance(dist, q: float, fd_step: float = 1e-4) -> float:
    """Variance Var(d * X + |X - mu|**q) with d the derivative of
    t -> E|X - t|**q at the mean, taken by central finite difference."""
    if not q >= 1.0:
        raise ValueError(f"moment order must satisfy q >= 1, got {q}")
    mu = dist.mean
    d = (abs_moment(dist, q, mu + fd_step) - abs_moment(dist, q, mu - fd_step)) / (2.0 * fd_step)

    def g(x: float) -> float:
        return d * x + abs(x - mu) ** q

    first = _expect(dist, g, split=mu)
    second = _expect(dist, lambda x: g(x) ** 2, split=mu)
    var = second - first * first
    if var <= 0.0:
        raise DegenerateVarianceError(f"central-moment CLT variance {var} is not positive")
    return var
