"""Reproducible point clouds in the l^p unit ball.

Random streams come from numpy's ``Generator`` over the counter-based
``Philox`` bit generator, seeded with the config's 64-bit seed.  Output is
bitwise reproducible within one numpy version; across implementations only
the distribution is meant to agree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from enum import Enum

import numpy as np

from .lp_core import TOL_MEMBERSHIP, BallPoint, LpSpace, p_norm

GRID_MAX_DIMENSION = 3


class SampleMode(str, Enum):
    UNIFORM_BALL = "uniform_ball"
    UNIFORM_SPHERE = "uniform_sphere"
    GRID = "grid"


@dataclass(frozen=True)
class SampleConfig:
    space: LpSpace
    count: int
    seed: int = 42
    mode: SampleMode = SampleMode.UNIFORM_BALL
    resolution: int | None = None

    def __post_init__(self):
        object.__setattr__(self, "mode", SampleMode(self.mode))
        if int(self.count) != self.count or self.count < 1:
            raise ValueError(f"count must be a positive integer, got {self.count!r}")
        if not 0 <= int(self.seed) < 2**64:
            raise ValueError("seed must be a 64-bit unsigned integer")
        if self.mode is SampleMode.GRID:
            if self.space.dimension > GRID_MAX_DIMENSION:
                raise ValueError(f"grid mode supports N <= {GRID_MAX_DIMENSION}")
            if self.resolution is None or self.resolution < 1:
                raise ValueError("grid mode needs a resolution >= 1")


def make_rng(seed: int) -> np.random.Generator:
    return np.random.Generator(np.random.Philox(int(seed)))


def generalized_normal(rng: np.random.Generator, p: float, size) -> np.ndarray:
    """Variates with density proportional to ``exp(-|t|^p)``.

    ``|t|^p`` is Gamma(1/p, 1) distributed, so take its ``1/p`` power and
    attach an independent random sign.
    """
    g = rng.gamma(1 / p, 1.0, size=size) ** (1 / p)
    signs = rng.integers(0, 2, size=size) * 2 - 1
    return g * signs


def ball_array(space: LpSpace, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` points uniform on ``K_p^N`` as a ``(count, N)`` array.

    Uses ``x = g / (sum |g_i|^p + z)^(1/p)`` with ``g`` generalized normal and
    ``z`` standard exponential, which is exactly uniform for every ``p``.
    """
    p = space.exponent
    g = generalized_normal(rng, p, (count, space.dimension))
    z = rng.standard_exponential(count)
    r = ((np.abs(g) ** p).sum(axis=1) + z) ** (1 / p)
    return g / r[:, None]


def sphere_array(space: LpSpace, count: int, rng: np.random.Generator) -> np.ndarray:
    """``count`` points on the unit sphere of ``l^p_N`` (cone measure)."""
    p = space.exponent
    g = generalized_normal(rng, p, (count, space.dimension))
    n = p_norm(g, p)
    # all-zero rows have probability zero but would divide by zero
    while np.any(n == 0):
        bad = n == 0
        g[bad] = generalized_normal(rng, p, (int(bad.sum()), space.dimension))
        n = p_norm(g, p)
    x = g / n[:, None]
    # one extra division brings the norm back to 1 within a couple of ulps
    return x / p_norm(x, p)[:, None]


def _as_points(arr: np.ndarray, space: LpSpace) -> list[BallPoint]:
    return [BallPoint(row, space) for row in arr]


def sample_ball(config: SampleConfig) -> list[BallPoint]:
    if config.mode is not SampleMode.UNIFORM_BALL:
        raise ValueError(f"sample_ball needs mode uniform_ball, got {config.mode.value}")
    arr = ball_array(config.space, config.count, make_rng(config.seed))
    return _as_points(arr, config.space)


def sample_sphere(config: SampleConfig) -> list[BallPoint]:
    if config.mode is not SampleMode.UNIFORM_SPHERE:
        raise ValueError(f"sample_sphere needs mode uniform_sphere, got {config.mode.value}")
    arr = sphere_array(config.space, config.count, make_rng(config.seed))
    return _as_points(arr, config.space)


def grid_array(space: LpSpace, resolution: int) -> np.ndarray:
    """Lattice points of ``{-1, -1 + 2/resolution, ..., 1}^N`` inside the ball.

    Rows come out in lexicographic order.
    """
    if space.dimension > GRID_MAX_DIMENSION:
        raise ValueError(f"grid_points supports N <= {GRID_MAX_DIMENSION}, got {space.dimension}")
    if int(resolution) != resolution or resolution < 1:
        raise ValueError(f"resolution must be a positive integer, got {resolution!r}")
    ticks = (2 * np.arange(resolution + 1)) / resolution - 1
    lattice = np.array(list(itertools.product(ticks, repeat=space.dimension)), dtype=float)
    keep = p_norm(lattice, space.exponent) <= 1 + TOL_MEMBERSHIP
    return lattice[keep]


def grid_points(space: LpSpace, resolution: int) -> list[BallPoint]:
    return _as_points(grid_array(space, resolution), space)


def sample_array(config: SampleConfig) -> np.ndarray:
    """Dispatch on ``config.mode`` and return a raw ``(m, N)`` array.

    In grid mode ``count`` is ignored; the lattice decides the size.
    """
    if config.mode is SampleMode.GRID:
        return grid_array(config.space, config.resolution)
    rng = make_rng(config.seed)
    if config.mode is SampleMode.UNIFORM_BALL:
        return ball_array(config.space, config.count, rng)
    return sphere_array(config.space, config.count, rng)


def sample(config: SampleConfig) -> list[BallPoint]:
    return _as_points(sample_array(config), config.space)
