"""Seeded samplers for exponential vectors, uniform simplex points,
p-generalized Gaussians, and uniform lp-ball points.

All samplers are pure functions of a :class:`~simplex_limits.rng.RandomStream`;
calling one twice with the same stream yields bitwise-identical output.  The
block variants (``*_block``) draw a whole matrix of replicates from a single
stream and are the unit of work for the parallel experiment engine: the
per-replicate draw order inside a block is fixed, so the output never depends
on worker scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .rng import RandomStream

#: Loose bound used to validate the sum invariants of generated points.
SUM_TOL = 1e-12


@dataclass(frozen=True)
class SimplexPoint:
    """A uniform point of the regular simplex, optionally barycenter-shifted.

    ``construction`` records which of the two equidistributed recipes built
    the point: normalized exponentials or uniform order-statistic spacings.
    """

    coords: np.ndarray
    n: int
    centered: bool
    construction: str = "exponential"


@dataclass(frozen=True)
class LpBallPoint:
    """A uniform point of the unit lp-ball in dimension ``n``."""

    coords: np.ndarray
    n: int
    p: float


def _check_dimension(n: int) -> None:
    if n < 1:
        raise ValueError(f"dimension must be a positive integer, got {n}")


def _check_p(p: float) -> None:
    if not p >= 1.0:
        raise ValueError(f"ball exponent p must satisfy p >= 1, got {p}")


def _redraw_exact_zeros(rng: np.random.Generator, draw, x: np.ndarray) -> np.ndarray:
    # A coordinate that underflows to exactly 0.0 would break the strict
    # positivity the normalizing sums rely on; probability is ~2**-64 per
    # draw but the guard makes it impossible rather than merely unlikely.
    while True:
        mask = x == 0.0
        if not mask.any():
            return x
        x[mask] = draw(rng, int(mask.sum()))


def exponential_block(stream: RandomStream, rows: int, n: int) -> np.ndarray:
    """Matrix of ``rows`` i.i.d. standard-exponential vectors of length ``n``."""
    _check_dimension(n)
    rng = stream.generator()
    x = rng.standard_exponential((rows, n))
    return _redraw_exact_zeros(rng, lambda r, k: r.standard_exponential(k), x)


def sample_exponentials(stream: RandomStream, n: int) -> np.ndarray:
    """Vector of ``n`` i.i.d. standard-exponential variates."""
    return exponential_block(stream, 1, n)[0]


def spacings_block(stream: RandomStream, rows: int, n: int) -> np.ndarray:
    """Matrix of uniform spacings vectors: gaps of n-1 sorted uniforms on [0, 1]."""
    _check_dimension(n)
    rng = stream.generator()
    u = np.sort(rng.random((rows, n - 1)), axis=1)
    out = np.empty((rows, n))
    out[:, 0] = u[:, 0] if n > 1 else 1.0
    if n > 1:
        out[:, 1:-1] = np.diff(u, axis=1)
        out[:, -1] = 1.0 - u[:, -1]
    return out


def sample_simplex(
    stream: RandomStream,
    n: int,
    centered: bool = True,
    construction: str = "exponential",
) -> SimplexPoint:
    """A uniform point of the simplex, shifted by its barycenter when centered.

    Both constructions sample the same distribution; ``exponential`` is the
    default (O(n), no sort).
    """
    _check_dimension(n)
    if construction == "exponential":
        e = sample_exponentials(stream, n)
        coords = e / e.sum()
    elif construction == "spacings":
        coords = spacings_block(stream, 1, n)[0]
    else:
        raise ValueError(f"unknown construction {construction!r}")
    if centered:
        coords = coords - 1.0 / n
    return SimplexPoint(coords=coords, n=n, centered=centered, construction=construction)


def pgen_gaussian_block(stream: RandomStream, rows: int, n: int, p: float) -> np.ndarray:
    """Matrix of i.i.d. p-generalized Gaussian variates.

    Uses the exact gamma transform |Y|**p / p ~ Gamma(1/p) with an independent
    fair sign; rejection-free for every p >= 1.  Draw order (magnitudes, then
    signs) is fixed.
    """
    _check_p(p)
    rng = stream.generator()
    w = rng.gamma(1.0 / p, 1.0, (rows, n))
    w = _redraw_exact_zeros(rng, lambda r, k: r.gamma(1.0 / p, 1.0, k), w)
    signs = 2.0 * rng.integers(0, 2, (rows, n)).astype(np.float64) - 1.0
    return signs * (p * w) ** (1.0 / p)


def sample_pgen_gaussian(stream: RandomStream, p: float, size: int | None = None):
    """One variate (or ``size`` variates) with density proportional to exp(-|y|**p / p)."""
    if size is None:
        return float(pgen_gaussian_block(stream, 1, 1, p)[0, 0])
    return pgen_gaussian_block(stream, 1, size, p)[0]


def lp_ball_block(stream: RandomStream, rows: int, n: int, p: float) -> np.ndarray:
    """Matrix of uniform points of the unit lp-ball.

    Each row is U**(1/n) * Y / ||Y||_p with Y a vector of i.i.d. p-generalized
    Gaussians and U an independent uniform radius factor.
    """
    _check_dimension(n)
    _check_p(p)
    rng = stream.generator()
    w = rng.gamma(1.0 / p, 1.0, (rows, n))
    w = _redraw_exact_zeros(rng, lambda r, k: r.gamma(1.0 / p, 1.0, k), w)
    signs = 2.0 * rng.integers(0, 2, (rows, n)).astype(np.float64) - 1.0
    y = signs * (p * w) ** (1.0 / p)
    radius = rng.random(rows) ** (1.0 / n)
    norms = np.sum(np.abs(y) ** p, axis=1) ** (1.0 / p)
    return y * (radius / norms)[:, None]


def sample_lp_ball(stream: RandomStream, n: int, p: float) -> LpBallPoint:
    """A uniform point of the unit lp-ball in dimension ``n``."""
    coords = lp_ball_block(stream, 1, n, p)[0]
    return LpBallPoint(coords=coords, n=n, p=float(p))


def check_simplex_invariants(point: SimplexPoint) -> None:
    """Raise if the sum/positivity invariants of a simplex point fail."""
    target = 0.0 if point.centered else 1.0
    floor = -1.0 / point.n if point.centered else 0.0
    if abs(float(point.coords.sum()) - target) > SUM_TOL * point.n:
        raise AssertionError(f"coordinate sum {point.coords.sum()} != {target}")
    if np.any(point.coords < floor - SUM_TOL):
        raise AssertionError("coordinate below simplex floor")


def check_ball_invariants(point: LpBallPoint) -> None:
    """Raise if a ball point leaves the unit ball beyond arithmetic slack."""
    norm = float(np.sum(np.abs(point.coords) ** point.p) ** (1.0 / point.p))
    if norm > 1.0 + SUM_TOL:
        raise AssertionError(f"lp norm {norm} exceeds 1")
