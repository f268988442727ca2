"""Exact and quadrature evaluation of the moment constants, ball
normalization constants, tail quantiles, and deviation rate functions.

All functions here are pure and deterministic.  The central quantity is the
absolute moment

    mu_q = E|E - 1|**q = exp(-1) * (Gamma(q + 1) + int_0^1 x**q exp(x) dx)

for a standard exponential E; the infinite part is folded into the Gamma
term so only a finite integral is ever quadratured.  For integer q the same
moment has an exact subfactorial form used as a cross-check.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import NamedTuple

from scipy.integrate import quad
from scipy.optimize import brentq
from scipy.special import gammaincc

#: Quadrature absolute tolerance for the finite moment integrals.
QUAD_ABS_TOL = 1e-12

RATE_KINDS = ("simplex_sup", "mdp", "lp_sup")


class NumericalError(RuntimeError):
    """A numerical routine (quadrature, root-finding) failed to converge."""


def gamma_fn(x: float) -> float:
    """Gamma function on the positive half-line."""
    if not x > 0:
        raise ValueError(f"gamma_fn requires x > 0, got {x}")
    return math.gamma(x)


def subfactorial(q: int) -> int:
    """Derangement count !q, exactly, by the integer recurrence."""
    if q < 0 or q != int(q):
        raise ValueError(f"subfactorial requires a nonnegative integer, got {q}")
    d = 1
    for k in range(1, int(q) + 1):
        d = k * d + (-1) ** k
    return d


def _check_q(q: float) -> None:
    if not q >= 1.0:
        raise ValueError(f"moment order q must satisfy q >= 1, got {q}")


def mu_q(q: float) -> float:
    """Absolute moment E|E - 1|**q of a standard exponential."""
    _check_q(q)
    finite, err = quad(lambda x: x**q * math.exp(x), 0.0, 1.0,
                       epsabs=QUAD_ABS_TOL, epsrel=QUAD_ABS_TOL)
    if err > 1e-9:
        raise NumericalError(f"mu_q quadrature error {err} too large at q={q}")
    return math.exp(-1.0) * (math.gamma(q + 1.0) + finite)


def mu_q_integer(q: int) -> float:
    """Closed form of mu_q for integer q via the subfactorial."""
    if q < 1 or q != int(q):
        raise ValueError(f"integer moment order >= 1 required, got {q}")
    q = int(q)
    signed = float(subfactorial(q))  # E(E-1)**q
    if q % 2 == 0:
        return signed
    return 2.0 * math.factorial(q) / math.e - signed


def sigma_q_sq(q: float) -> float:
    """Limit variance of the scaled lq-norm statistic."""
    _check_q(q)
    m, m2 = mu_q(q), mu_q(2.0 * q)
    return (m2 - (q * q + 2.0 * q + 2.0) * m * m + 2.0 * (q + 1.0) * m - 1.0) / (q * q * m * m)


def cov_e_absq(q: float) -> float:
    """Covariance of E and |E - 1|**q: (q + 1) * mu_q - 1."""
    _check_q(q)
    return (q + 1.0) * mu_q(q) - 1.0


def moment_derivative(q: float) -> float:
    """Derivative of t -> E|E - t|**q at t = 1: equals 1 - mu_q."""
    _check_q(q)
    return 1.0 - mu_q(q)


@dataclass(frozen=True)
class MomentConstants:
    """Per-q bundle of the moment constants, with evaluation provenance."""

    q: float
    mu_q: float
    mu_2q: float
    sigma_q_sq: float
    cov_e_absq: float
    method: str  # "closed_form_integer_q" or "quadrature"


def moment_constants(q: float) -> MomentConstants:
    """Assemble the moment bundle; integer q uses the exact closed form."""
    _check_q(q)
    if float(q).is_integer():
        m, m2 = mu_q_integer(int(q)), mu_q_integer(2 * int(q))
        method = "closed_form_integer_q"
    else:
        m, m2 = mu_q(q), mu_q(2.0 * q)
        method = "quadrature"
    sig = (m2 - (q * q + 2.0 * q + 2.0) * m * m + 2.0 * (q + 1.0) * m - 1.0) / (q * q * m * m)
    return MomentConstants(q=float(q), mu_q=m, mu_2q=m2, sigma_q_sq=sig,
                           cov_e_absq=(q + 1.0) * m - 1.0, method=method)


def c_p(p: float) -> float:
    """Normalization constant of the p-generalized Gaussian density."""
    if not p >= 1.0:
        raise ValueError(f"c_p requires p >= 1, got {p}")
    return 1.0 / (2.0 * p ** (1.0 / p) * math.gamma(1.0 + 1.0 / p))


def m1(q: float) -> float:
    """Centering constant Gamma(q + 1) of the l1-ball comparison CLT."""
    return math.gamma(q + 1.0)


def c1_qq(q: float) -> float:
    """Variance constant of the l1-ball comparison CLT (informational only)."""
    return (math.gamma(2.0 * q + 1.0) / math.gamma(q + 1.0) ** 2 - 1.0) / (q * q) - 1.0


@dataclass(frozen=True)
class LpConstants:
    """Ball-side constants for one exponent p, plus the comparison pair at q = p."""

    p: float
    c_p: float
    m1: float
    c1_qq: float


def lp_constants(p: float) -> LpConstants:
    return LpConstants(p=float(p), c_p=c_p(p), m1=m1(p), c1_qq=c1_qq(p))


def pgen_two_sided_tail(p: float, m: float) -> float:
    """P[|Y| > m] for a p-generalized Gaussian Y.

    The gamma transform gives the exact identity
    P[|Y| > m] = Q(1/p, m**p / p) with Q the regularized upper incomplete
    gamma function, so no truncated quadrature is needed here.
    """
    if not p >= 1.0:
        raise ValueError(f"p must satisfy p >= 1, got {p}")
    if m < 0:
        raise ValueError(f"threshold must be nonnegative, got {m}")
    return float(gammaincc(1.0 / p, m**p / p))


def m_n(p: float, n: int) -> float:
    """The 1/n two-sided tail quantile of the p-generalized Gaussian.

    Solves P[|Y| > m] = 1/n by bracketed root-finding; the upper bracket end
    2 * p**(1/p) * (log n)**(1/p) + 10 is safe because the quantile is
    asymptotic to p**(1/p) * (log n)**(1/p).
    """
    if not p >= 1.0:
        raise ValueError(f"p must satisfy p >= 1, got {p}")
    if n < 2:
        raise ValueError(f"n must be >= 2, got {n}")
    lo, hi = 1e-6, 2.0 * p ** (1.0 / p) * math.log(n) ** (1.0 / p) + 10.0

    def f(m: float) -> float:
        return pgen_two_sided_tail(p, m) - 1.0 / n

    if not (f(lo) > 0.0 > f(hi)):
        raise NumericalError(f"m_n bracket failed for p={p}, n={n}")
    try:
        root = brentq(f, lo, hi, xtol=1e-13, rtol=1e-12, maxiter=200)
    except RuntimeError as exc:  # pragma: no cover - brentq converges on this bracket
        raise NumericalError(f"m_n root-finding did not converge: {exc}") from exc
    return float(root)


class TailSandwich(NamedTuple):
    lower: float
    value: float
    upper: float


def tail_sandwich(p: float, x: float) -> TailSandwich:
    """Lower bound, quadrature value, and upper bound of int_x^inf exp(-y**p / p) dy."""
    if not p >= 1.0:
        raise ValueError(f"p must satisfy p >= 1, got {p}")
    if not x > 0:
        raise ValueError(f"x must be positive, got {x}")
    value, err = quad(lambda y: math.exp(-(y**p) / p), x, math.inf,
                      epsabs=1e-12, epsrel=1e-12)
    if err > 1e-8:
        raise NumericalError(f"tail quadrature error {err} too large at p={p}, x={x}")
    envelope = math.exp(-(x**p) / p)
    lower = x / (x**p + p) * envelope
    upper = x ** (1.0 - p) * envelope
    if not (lower <= value + err and value - err <= upper):
        raise NumericalError(f"tail sandwich violated at p={p}, x={x}: "
                             f"{lower} <= {value} <= {upper} fails")
    # the true integral provably lies in the sandwich (at p = 1 the upper
    # bound is exact), so clamp away last-ulp quadrature overshoot
    return TailSandwich(lower=lower, value=min(max(value, lower), upper), upper=upper)


def rate_function(kind: str, z: float, p: float | None = None) -> float:
    """Deviation rate function value; +inf below the finite-domain threshold.

    Kinds: ``simplex_sup`` (z - 1 above 1), ``mdp`` (z above 0), ``lp_sup``
    (z**p - 1 above 1, requires p).
    """
    if kind not in RATE_KINDS:
        raise ValueError(f"unknown rate function kind {kind!r}; expected one of {RATE_KINDS}")
    if not math.isfinite(z):
        raise ValueError(f"threshold must be finite, got {z}")
    if kind == "simplex_sup":
        return z - 1.0 if z >= 1.0 else math.inf
    if kind == "mdp":
        return z if z >= 0.0 else math.inf
    if p is None:
        raise ValueError("lp_sup rate function requires the ball exponent p")
    if not p >= 1.0:
        raise ValueError(f"p must satisfy p >= 1, got {p}")
    return z**p - 1.0 if z >= 1.0 else math.inf


def constants_table(q_list) -> list[dict]:
    """Rows (q, mu_q, sigma_q^2, cov, M1, C1) for the constants CLI table."""
    rows = []
    for q in q_list:
        mc = moment_constants(q)
        rows.append({
            "q": mc.q,
            "mu_q": mc.mu_q,
            "sigma_q_sq": mc.sigma_q_sq,
            "cov_e_absq": mc.cov_e_absq,
            "m1": m1(q),
            "c1_qq": c1_qq(q),
            "method": mc.method,
        })
    return rows
