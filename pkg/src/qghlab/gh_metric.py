"""Finite metric spaces, correspondences and Gromov-Hausdorff estimates.

The GH distance between compact spaces is half the smallest distortion of a
correspondence between them.  Any single correspondence therefore gives an
upper bound, and for very small spaces enumerating correspondences gives the
exact value.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterable

import numpy as np

from . import sampling
from ._kernels import max_triangle_excess
from .lp_core import BallPoint, LpSpace, mazur_array, p_norm, p_norm_power

METRIC_TOL = 1e-9
BRUTE_FORCE_MAX_SIZE = 6
ALL_PAIRS_MAX_POINTS = 2000
SUBSAMPLED_PAIRS = 4_000_000
_PAIR_CHUNK = 250_000


def metric_violation(dist: np.ndarray) -> tuple[float, tuple[int, int, int]]:
    """Largest triangle-inequality excess of `dist` and the offending triple."""
    d = np.ascontiguousarray(dist, dtype=float)
    worst, i, j, k = max_triangle_excess(d)
    return float(worst), (int(i), int(j), int(k))


@dataclass(frozen=True, eq=False)
class FiniteMetricSpace:
    """A distance matrix, checked against the metric axioms on construction."""

    dist: np.ndarray
    labels: tuple | None = None
    size: int = field(init=False)

    def __post_init__(self):
        d = np.array(self.dist, dtype=float)
        if d.ndim != 2 or d.shape[0] != d.shape[1] or d.shape[0] == 0:
            raise ValueError(f"distance matrix must be square and nonempty, got {d.shape}")
        if not np.all(np.isfinite(d)) or np.any(d < 0):
            raise ValueError("distances must be finite and nonnegative")
        if np.any(np.diag(d) != 0):
            raise ValueError("distance matrix must have a zero diagonal")
        if not np.array_equal(d, d.T):
            raise ValueError("distance matrix must be symmetric")
        excess, (i, j, k) = metric_violation(d)
        if excess > METRIC_TOL:
            raise ValueError(
                f"triangle inequality fails: d[{i},{j}] > d[{i},{k}] + d[{k},{j}] by {excess:.3g}"
            )
        if self.labels is not None and len(self.labels) != d.shape[0]:
            raise ValueError("one label per point required")
        d.setflags(write=False)
        object.__setattr__(self, "dist", d)
        object.__setattr__(self, "size", d.shape[0])

    def __len__(self):
        return self.size

    @property
    def diameter(self) -> float:
        return float(self.dist.max())


def metric_from_points(points, space: LpSpace | None = None) -> FiniteMetricSpace:
    """Pairwise ``||x_i - x_j||_p`` for a list of ball points."""
    points = list(points)
    if not points:
        raise ValueError("need at least one point")
    if space is None:
        if not isinstance(points[0], BallPoint):
            raise ValueError("pass `space` when giving raw coordinates")
        space = points[0].space
    for pt in points:
        if isinstance(pt, BallPoint) and pt.space != space:
            raise ValueError("all points must live in the same space")
    xs = np.array([np.asarray(pt, dtype=float) for pt in points])
    d = p_norm(xs[:, None, :] - xs[None, :, :], space.exponent)
    d = np.atleast_2d(d)
    # exact symmetry; the two orders can differ in the last ulp
    d = np.maximum(d, d.T)
    np.fill_diagonal(d, 0.0)
    return FiniteMetricSpace(d)


@dataclass(frozen=True)
class Correspondence:
    """A relation between point indices of two spaces, given as ``(i, j)`` pairs."""

    pairs: frozenset

    def __init__(self, pairs: Iterable[tuple[int, int]]):
        object.__setattr__(self, "pairs", frozenset((int(i), int(j)) for i, j in pairs))

    @classmethod
    def identity(cls, size: int) -> Correspondence:
        return cls((i, i) for i in range(size))

    @classmethod
    def from_map(cls, images: Iterable[int]) -> Correspondence:
        """Graph of ``i -> images[i]``."""
        return cls(enumerate(images))

    def covers(self, size_a: int, size_b: int) -> bool:
        left = {i for i, _ in self.pairs}
        right = {j for _, j in self.pairs}
        return left == set(range(size_a)) and right == set(range(size_b))

    def as_arrays(self) -> tuple[np.ndarray, np.ndarray]:
        ordered = sorted(self.pairs)
        return (np.array([i for i, _ in ordered], dtype=int),
                np.array([j for _, j in ordered], dtype=int))


def correspondence_distortion(R: Correspondence, A: FiniteMetricSpace, B: FiniteMetricSpace) -> float:
    """``max |A[i, i'] - B[j, j']|`` over pairs ``(i, j), (i', j')`` in `R`."""
    if not R.covers(A.size, B.size):
        raise ValueError("relation is not a correspondence: it must cover every point of both spaces")
    I, J = R.as_arrays()
    return float(np.abs(A.dist[np.ix_(I, I)] - B.dist[np.ix_(J, J)]).max())


def gh_upper_from_correspondence(R: Correspondence, A: FiniteMetricSpace, B: FiniteMetricSpace) -> float:
    return correspondence_distortion(R, A, B) / 2


def brute_force_gh(A: FiniteMetricSpace, B: FiniteMetricSpace) -> float:
    """Exact GH distance of two spaces with at most six points each.

    Every correspondence contains one made of the graph of a map
    ``f: A -> B`` plus one partner for each point of B outside the image of
    ``f``, and dropping pairs never increases distortion.  So it is enough
    to search those, depth first, abandoning a branch as soon as its running
    distortion reaches the best complete one found so far.
    """
    m, n = A.size, B.size
    if max(m, n) > BRUTE_FORCE_MAX_SIZE:
        raise ValueError(f"brute_force_gh is capped at {BRUTE_FORCE_MAX_SIZE} points per space")
    # cost[i, j, k, l] = distortion between pairs (i, j) and (k, l)
    cost = np.abs(A.dist[:, None, :, None] - B.dist[None, :, None, :]).tolist()
    best = max(A.diameter, B.diameter)  # distortion of A x B itself
    chosen: list[tuple[int, int]] = []

    def added_cost(i, j):
        row = cost[i][j]
        return max((row[k][l] for k, l in chosen), default=0.0)

    def cover_b(uncovered, start, running):
        nonlocal best
        if start == len(uncovered):
            best = running
            return
        j = uncovered[start]
        options = sorted((max(running, added_cost(i, j)), i) for i in range(m))
        for c, i in options:
            if c >= best:
                break
            chosen.append((i, j))
            cover_b(uncovered, start + 1, c)
            chosen.pop()

    def assign_a(i, running, image):
        if i == m:
            uncovered = [j for j in range(n) if j not in image]
            cover_b(uncovered, 0, running)
            return
        options = sorted((max(running, added_cost(i, j)), j) for j in range(n))
        for c, j in options:
            if c >= best:
                break
            chosen.append((i, j))
            image[j] = image.get(j, 0) + 1
            assign_a(i + 1, c, image)
            image[j] -= 1
            if not image[j]:
                del image[j]
            chosen.pop()

    assign_a(0, 0.0, {})
    return best / 2


def hausdorff_distance(S, T, M: FiniteMetricSpace) -> float:
    """Hausdorff distance between index subsets `S` and `T` of `M`."""
    S = np.unique(np.asarray(list(S), dtype=int))
    T = np.unique(np.asarray(list(T), dtype=int))
    if S.size == 0 or T.size == 0:
        raise ValueError("Hausdorff distance needs nonempty subsets")
    if min(S.min(), T.min()) < 0 or max(S.max(), T.max()) >= M.size:
        raise IndexError("subset index out of range")
    block = M.dist[np.ix_(S, T)]
    return float(max(block.min(axis=1).max(), block.min(axis=0).max()))


@dataclass(frozen=True)
class DistortionReport:
    p: float
    N: int
    sample_count: int
    seed: int
    empirical_distortion: float
    theoretical_bound: float
    gh_upper_bound: float
    pair_count: int
    chain_max: float
    chain_bound: float

    @property
    def within_bound(self) -> bool:
        return (self.empirical_distortion <= self.theoretical_bound + METRIC_TOL
                and self.chain_max <= self.chain_bound + METRIC_TOL)


def _pair_gaps(xs, ys, p, I, J):
    diff = xs[I] - xs[J]
    dp_pow = p_norm_power(diff, p)
    dp = p_norm(diff, p)
    d1 = np.abs(ys[I] - ys[J]).sum(axis=-1)
    return np.abs(dp - d1), np.abs(dp_pow - d1)


def mazur_pair_gaps(xs: np.ndarray, p: float, rng: np.random.Generator | None = None):
    """Max over point pairs of the Mazur distance gaps.

    Returns ``(distortion, chain, pair_count)`` where distortion is the largest
    ``| ||x-y||_p - ||phi(x)-phi(y)||_1 |`` and chain the largest
    ``| ||x-y||_p^p - ||phi(x)-phi(y)||_1 |``.  All unordered pairs are used for
    up to ``ALL_PAIRS_MAX_POINTS`` points; beyond that a uniform random sample
    of ``SUBSAMPLED_PAIRS`` pairs drawn from `rng`.
    """
    xs = np.asarray(xs, dtype=float)
    m = xs.shape[0]
    ys = mazur_array(xs, p)
    dis = chain = 0.0
    if m <= ALL_PAIRS_MAX_POINTS:
        I, J = np.triu_indices(m, k=1)
    else:
        if rng is None:
            raise ValueError("a generator is needed to subsample pairs")
        I = rng.integers(0, m, SUBSAMPLED_PAIRS)
        J = (I + rng.integers(1, m, SUBSAMPLED_PAIRS)) % m
    for start in range(0, I.size, _PAIR_CHUNK):
        sl = slice(start, start + _PAIR_CHUNK)
        g, c = _pair_gaps(xs, ys, p, I[sl], J[sl])
        dis = max(dis, float(g.max()))
        chain = max(chain, float(c.max()))
    return dis, chain, int(I.size)


def mazur_bounds(p: float) -> tuple[float, float]:
    """``(2(2^p - 2), 2^p - 2)``: distortion bound and GH upper bound."""
    gh = 2.0**p - 2.0
    return 2 * gh, gh


def mazur_correspondence_experiment(p: float, N: int, sample_count: int, seed: int = 42) -> DistortionReport:
    """Empirical distortion of the Mazur map on sampled points of ``K_p^N``.

    Half the points are uniform in the ball and half uniform on its
    boundary sphere, all from one stream seeded by `seed`.
    """
    p = float(p)
    if not 1 <= p <= 2:
        raise ValueError(f"experiment runs for p in [1, 2], got {p!r}")
    if sample_count < 2:
        raise ValueError("need at least two sample points")
    space = LpSpace(N, p)
    rng = sampling.make_rng(seed)
    n_ball = sample_count // 2
    xs = np.vstack([
        sampling.ball_array(space, n_ball, rng),
        sampling.sphere_array(space, sample_count - n_ball, rng),
    ])
    dis, chain, pairs = mazur_pair_gaps(xs, p, rng)
    bound, gh = mazur_bounds(p)
    return DistortionReport(
        p=p, N=space.dimension, sample_count=int(sample_count), seed=int(seed),
        empirical_distortion=dis, theoretical_bound=bound, gh_upper_bound=gh,
        pair_count=pairs, chain_max=chain, chain_bound=gh,
    )
