"""Closed-form bounds separating the two Gromov-Hausdorff distances.

For the unit balls ``K_p^N`` and ``K_1^N``:

* the GH distance of the state spaces is at most ``2^p - 2`` for every N;
* any pair of affine isometric embeddings into a normed space has Hausdorff
  distance at least ``1/2 - N^(1/p - 1)``, so the quantum GH distance does too.

Letting ``p -> 1`` while choosing N large enough keeps the second bound above
``1/2 - threshold`` as the first one goes to zero.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Mapping, Sequence

import mpmath
import numpy as np

from . import sampling
from ._kernels import max_triangle_excess, min_plus
from .gh_metric import METRIC_TOL
from .lp_core import LpSpace, mazur_array, p_norm

CHAIN_TOL = 1e-12


def _check_exponent(p: float) -> float:
    p = float(p)
    if not 1 < p <= 2:
        raise ValueError(f"exponent must lie in (1, 2], got {p!r}")
    return p


def _check_dimension(N) -> int:
    if int(N) != N or N < 1:
        raise ValueError(f"dimension must be a positive integer, got {N!r}")
    return int(N)


def _digits(N: int) -> int:
    # neighbouring N differ in relative terms by about 10^-digits, so the
    # working precision has to grow with N
    return 60 + 2 * len(str(N))


def _decay(N: int, p: float) -> mpmath.mpf:
    """``N^(1/p - 1)`` in extended precision (call inside a ``workdps`` block)."""
    return mpmath.power(mpmath.mpf(N), 1 / mpmath.mpf(p) - 1)


def qgh_lower_bound(p: float, N: int) -> float:
    """``1/2 - N^(1/p - 1)``, the lower bound on the quantum GH distance."""
    p = _check_exponent(p)
    N = _check_dimension(N)
    with mpmath.workdps(_digits(N)):
        return float(mpmath.mpf("0.5") - _decay(N, p))


def _meets(N: int, p: float, threshold: float) -> bool:
    """``N^(1/p - 1) <= threshold``, treating agreement to ~30 extra digits as a tie."""
    with mpmath.workdps(_digits(N)):
        tie = mpmath.mpf(10) ** -(len(str(N)) + 30)
        return _decay(N, p) <= mpmath.mpf(threshold) * (1 + tie)


def min_dimension_for_separation(p: float, threshold: float = 0.25) -> int:
    """Smallest N with ``N^(1/p - 1) <= threshold``.

    The decision is made in extended precision, so exact powers such as
    ``p = 1.5, threshold = 1/4 -> 64`` come out right and the huge N needed
    for p near 1 are still exact integers.
    """
    p = _check_exponent(p)
    threshold = float(threshold)
    if not 0 < threshold < 0.5:
        raise ValueError(f"threshold must lie in (0, 1/2), got {threshold!r}")
    with mpmath.workdps(30):
        scale = mpmath.power(1 / mpmath.mpf(threshold), mpmath.mpf(p) / (mpmath.mpf(p) - 1))
    with mpmath.workdps(_digits(int(scale) + 1)):
        est = mpmath.power(1 / mpmath.mpf(threshold), mpmath.mpf(p) / (mpmath.mpf(p) - 1))
        N = max(1, int(mpmath.ceil(est)))
    while not _meets(N, p, threshold):
        N += 1
    while N > 1 and _meets(N - 1, p, threshold):
        N -= 1
    return N


@dataclass(frozen=True)
class SeparationRow:
    p: float
    N: int
    gh_upper: float
    qgh_lower: float


def separation_table(p_sequence: Sequence[float], threshold: float = 0.25) -> list[SeparationRow]:
    rows = []
    for p in p_sequence:
        N = min_dimension_for_separation(p, threshold)
        rows.append(SeparationRow(float(p), N, 2.0 ** float(p) - 2.0, qgh_lower_bound(p, N)))
    return rows


def default_p_sequence(length: int = 10) -> list[float]:
    """``p_n = 1 + 1/n`` for ``n = 1..length``."""
    return [1 + 1 / n for n in range(1, length + 1)]


@dataclass(frozen=True)
class CertificateChain:
    """The final inequality ``N <= 2 N delta + 2 N^(1/p)``.

    If it fails for some embedding's Hausdorff distance ``delta`` then that
    ``delta`` is impossible.
    """

    p: float
    N: int
    delta: float
    lhs: float
    rhs: float
    lower_bound: float

    @property
    def holds(self) -> bool:
        return self.lhs <= self.rhs

    @property
    def violated(self) -> bool:
        return not self.holds


def certificate_chain_check(p: float, N: int, delta: float) -> CertificateChain:
    """Evaluate both sides of the chain and cross-check the rearranged form.

    ``N <= 2 N delta + 2 N^(1/p)`` is equivalent to
    ``delta >= 1/2 - N^(1/p - 1)``.  The two tests are computed separately;
    they may only disagree when ``delta`` is within ``1e-12`` of the bound.
    """
    p = _check_exponent(p)
    N = _check_dimension(N)
    delta = float(delta)
    if not delta >= 0:
        raise ValueError(f"delta must be nonnegative, got {delta!r}")
    lhs = float(N)
    rhs = 2 * N * delta + 2 * N ** (1 / p)
    lower = 0.5 - N ** (1 / p - 1)
    chain = CertificateChain(p, N, delta, lhs, rhs, lower)
    if chain.holds != (delta >= lower) and abs(delta - lower) > CHAIN_TOL:
        raise ArithmeticError(
            f"chain and closed form disagree at p={p!r}, N={N}, delta={delta!r}"
        )
    return chain


def homogeneous_extension(ball_map: Callable | Mapping, x, p: float) -> np.ndarray:
    """Recover the linear part of an affine isometry from its values on the ball.

    Returns ``||x|| * (ball_map(x/||x||) - ball_map(0))``, and 0 at the
    origin.  `ball_map` is a callable or a mapping keyed by coordinate tuples.
    """
    x = np.asarray(x, dtype=float)
    r = p_norm(x, p)
    if r > 1 + 1e-12:
        raise ValueError(f"point has norm {r!r} > 1; only the unit ball is covered")
    if isinstance(ball_map, Mapping):
        lookup = lambda v: np.asarray(ball_map[tuple(np.asarray(v, dtype=float).tolist())], dtype=float)
    else:
        lookup = lambda v: np.asarray(ball_map(v), dtype=float)
    origin = lookup(np.zeros_like(x))
    if r == 0:
        return np.zeros_like(origin)
    return r * (lookup(x / r) - origin)


@dataclass(frozen=True)
class EmbeddingWitness:
    """Hausdorff distance of two lattice nets glued along the Mazur map."""

    p: float
    N: int
    resolution: int
    step: float
    gluing: float
    net_distortion: float
    hausdorff: float
    lower_bound: float
    metric_excess: float
    size_p: int
    size_1: int

    @property
    def consistent(self) -> bool:
        return self.hausdorff + 2 * self.step >= self.lower_bound


def _glued_cross_distances(dxx, xs, ys, p, gluing):
    """``d(x, y) = min_x' d_p(x, x') + gluing + d_1(phi(x'), y)``."""
    d_phi_y = np.abs(mazur_array(xs, p)[:, None, :] - ys[None, :, :]).sum(axis=-1)
    return min_plus(np.ascontiguousarray(dxx), np.ascontiguousarray(d_phi_y)) + gluing


def simulated_embedding_experiment(p: float, N: int, resolution: int, seed: int = 42,
                                   audit: bool = True) -> EmbeddingWitness:
    """Glue lattice nets of ``K_p^N`` and ``K_1^N`` and measure their Hausdorff distance.

    The nets live in the disjoint union with
    ``d(x, y) = min_x' d_p(x, x') + eps + d_1(phi(x'), y)``.  This is a metric
    once ``eps`` is at least half the Mazur distortion on the net, so
    ``eps = max(step, distortion / 2)`` with ``step = 2 / resolution`` the
    lattice spacing.  The returned witness is not the quantum GH infimum.

    `seed` is accepted for interface symmetry; the lattice nets are
    deterministic.
    """
    p = float(p)
    if not 1 < p < 2:
        raise ValueError(f"exponent must lie in (1, 2), got {p!r}")
    N = _check_dimension(N)
    if N > sampling.GRID_MAX_DIMENSION:
        raise ValueError(f"nets are lattice based and need N <= {sampling.GRID_MAX_DIMENSION}")
    xs = sampling.grid_array(LpSpace(N, p), resolution)
    ys = sampling.grid_array(LpSpace(N, 1.0), resolution)
    step = 2 / resolution

    phi = mazur_array(xs, p)
    dxx = p_norm(xs[:, None, :] - xs[None, :, :], p)
    net_dis = float(np.abs(dxx - np.abs(phi[:, None, :] - phi[None, :, :]).sum(axis=-1)).max())
    gluing = max(step, net_dis / 2)
    dxy = _glued_cross_distances(dxx, xs, ys, p, gluing)

    hausdorff = float(max(dxy.min(axis=1).max(), dxy.min(axis=0).max()))
    excess = -math.inf
    if audit:
        dyy = np.abs(ys[:, None, :] - ys[None, :, :]).sum(axis=-1)
        full = np.block([[dxx, dxy], [dxy.T, dyy]])
        excess, i, j, k = max_triangle_excess(np.ascontiguousarray(full))
        if excess > METRIC_TOL:
            raise ArithmeticError(
                f"glued distance is not a metric: triple ({i}, {j}, {k}) exceeds by {excess:.3g}"
            )
    lower = qgh_lower_bound(p, N)
    witness = EmbeddingWitness(p, N, int(resolution), step, gluing, net_dis, hausdorff,
                               lower, float(excess), xs.shape[0], ys.shape[0])
    if not witness.consistent:
        raise ArithmeticError(
            f"witness Hausdorff distance {hausdorff!r} undercuts the lower bound {lower!r}"
        )
    return witness
