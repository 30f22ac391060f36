"""Greedy sign selection keeping signed sums of ball points short.

Given ``x_1, ..., x_n`` in the unit ball of ``l^p_N`` with ``1 < p < 2``,
pick signs one at a time so that after ``k`` steps the partial sum has norm
at most ``k^(1/p)``.  Clarkson's inequality guarantees one of the two
choices ``s + x`` or ``s - x`` always stays within the budget.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .lp_core import TOL_MEMBERSHIP, BallPoint, p_norm

BOUND_TOL = 1e-9


@dataclass(frozen=True)
class BalanceResult:
    signs: np.ndarray
    signed_sum: np.ndarray
    norm: float
    bound: float
    partial_norms: np.ndarray

    @property
    def within_bound(self) -> bool:
        return self.norm <= self.bound + BOUND_TOL


def _check_balancing_exponent(p: float) -> float:
    p = float(p)
    if not 1 < p < 2:
        raise ValueError(f"sign balancing is stated for 1 < p < 2, got {p!r}")
    return p


def _stack(points) -> np.ndarray:
    if isinstance(points, np.ndarray):
        arr = np.asarray(points, dtype=float)
    else:
        points = list(points)
        if not points:
            raise ValueError("need at least one point")
        arr = np.array([pt.coords if isinstance(pt, BallPoint) else pt for pt in points], dtype=float)
    if arr.ndim != 2 or arr.shape[0] == 0 or arr.shape[1] == 0:
        raise ValueError(f"expected a nonempty (n, N) collection of points, got shape {arr.shape}")
    return arr


def balance_signs(points, p: float) -> BalanceResult:
    """Choose ``alpha in {-1, +1}^n`` with ``||sum alpha_i x_i||_p <= n^(1/p)``.

    `points` is a sequence of :class:`BallPoint` (or an ``(n, N)`` array).
    The first sign is +1; afterwards +1 is taken whenever
    ``||s + x||_p <= ||s - x||_p``, so ties go to +1.
    """
    p = _check_balancing_exponent(p)
    xs = _stack(points)
    norms = p_norm(xs, p)
    bad = np.flatnonzero(norms > 1 + TOL_MEMBERSHIP)
    if bad.size:
        raise ValueError(f"point {bad[0]} lies outside the unit ball (norm {norms[bad[0]]!r})")

    n = xs.shape[0]
    signs = np.empty(n, dtype=int)
    partial = np.empty(n)
    s = xs[0].copy()
    signs[0] = 1
    partial[0] = p_norm(s, p)
    for k in range(1, n):
        plus = s + xs[k]
        minus = s - xs[k]
        np_, nm = p_norm(plus, p), p_norm(minus, p)
        if np_ <= nm:
            signs[k], s, partial[k] = 1, plus, np_
        else:
            signs[k], s, partial[k] = -1, minus, nm
    signs.setflags(write=False)
    s.setflags(write=False)
    partial.setflags(write=False)
    return BalanceResult(signs, s, float(partial[-1]), float(n ** (1 / p)), partial)


def balance_certificate_check(points, signs, p: float) -> bool:
    """Recompute ``sum signs_i x_i`` from scratch and test it against ``n^(1/p)``."""
    xs = _stack(points)
    signs = np.asarray(signs)
    if signs.shape != (xs.shape[0],):
        raise ValueError(f"{signs.size} signs for {xs.shape[0]} points")
    if not np.all(np.isin(signs, (-1, 1))):
        raise ValueError("signs must be +1 or -1")
    total = (signs[:, None] * xs).sum(axis=0)
    return bool(p_norm(total, p) <= xs.shape[0] ** (1 / p) + BOUND_TOL)
