"""Finite dimensional l^p geometry: norms, unit balls and the Mazur map.

Everything here works on float64 numpy arrays.  Functions that take a vector
also accept a stack of vectors along the leading axes and reduce over the
last axis, which is what the distortion experiments rely on.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

#: Slack allowed when deciding membership in the closed unit ball.
TOL_MEMBERSHIP = 1e-12


def _check_exponent(p: float) -> float:
    p = float(p)
    if not np.isfinite(p) or p < 1:
        raise ValueError(f"exponent must satisfy 1 <= p < inf, got {p!r}")
    return p


def p_norm(x, p: float) -> float | np.ndarray:
    """Return ``(sum |x_i|^p)^(1/p)`` over the last axis of `x`.

    The vector is rescaled by its largest entry before raising to the
    power `p`, so tiny and huge coordinates neither underflow nor overflow.
    """
    p = _check_exponent(p)
    x = np.asarray(x, dtype=float)
    if x.ndim == 0 or x.shape[-1] == 0:
        raise ValueError("p_norm needs a nonempty vector")
    a = np.abs(x)
    if p == 1:
        return a.sum(axis=-1)
    m = a.max(axis=-1, keepdims=True)
    safe = np.where(m > 0, m, 1.0)
    s = ((a / safe) ** p).sum(axis=-1)
    out = m[..., 0] * s ** (1 / p)
    return out if out.ndim else float(out)


def p_norm_power(x, p: float) -> float | np.ndarray:
    """``sum |x_i|^p``, i.e. ``p_norm(x, p) ** p`` without the root."""
    p = _check_exponent(p)
    x = np.asarray(x, dtype=float)
    out = (np.abs(x) ** p).sum(axis=-1)
    return out if np.ndim(out) else float(out)


def conjugate_exponent(p: float) -> float:
    """Hölder conjugate ``q = p / (p - 1)``, defined for ``p > 1``."""
    p = float(p)
    if not p > 1 or not np.isfinite(p):
        raise ValueError(f"conjugate exponent needs 1 < p < inf, got {p!r}")
    return p / (p - 1)


@dataclass(frozen=True)
class LpSpace:
    """``R^dimension`` with the ``exponent``-norm."""

    dimension: int
    exponent: float

    def __post_init__(self):
        if int(self.dimension) != self.dimension or self.dimension < 1:
            raise ValueError(f"dimension must be a positive integer, got {self.dimension!r}")
        object.__setattr__(self, "dimension", int(self.dimension))
        object.__setattr__(self, "exponent", _check_exponent(self.exponent))

    @property
    def conjugate(self) -> float:
        return conjugate_exponent(self.exponent)

    def norm(self, x) -> float | np.ndarray:
        return p_norm(x, self.exponent)

    def distance(self, x, y) -> float | np.ndarray:
        return p_norm(np.asarray(x, dtype=float) - np.asarray(y, dtype=float), self.exponent)

    def contains(self, x, tol: float = TOL_MEMBERSHIP):
        x = np.asarray(x, dtype=float)
        if x.shape[-1] != self.dimension:
            return False if x.ndim == 1 else np.zeros(x.shape[:-1], dtype=bool)
        return p_norm(x, self.exponent) <= 1 + tol

    def point(self, coords) -> BallPoint:
        return BallPoint(coords, self)


@dataclass(frozen=True, eq=False)
class BallPoint:
    """A vector known to lie in the closed unit ball of `space`."""

    coords: np.ndarray
    space: LpSpace
    norm: float = field(init=False)

    def __post_init__(self):
        c = np.array(self.coords, dtype=float).reshape(-1)
        if c.shape != (self.space.dimension,):
            raise ValueError(
                f"expected {self.space.dimension} coordinates, got shape {np.shape(self.coords)}"
            )
        if not np.all(np.isfinite(c)):
            raise ValueError("coordinates must be finite")
        n = p_norm(c, self.space.exponent)
        if n > 1 + TOL_MEMBERSHIP:
            raise ValueError(
                f"point has {self.space.exponent}-norm {n!r} > 1; not in the unit ball"
            )
        c.setflags(write=False)
        object.__setattr__(self, "coords", c)
        object.__setattr__(self, "norm", float(n))

    def __array__(self, dtype=None, copy=None):
        return self.coords if dtype is None else self.coords.astype(dtype)

    def __eq__(self, other):
        if not isinstance(other, BallPoint):
            return NotImplemented
        return self.space == other.space and np.array_equal(self.coords, other.coords)

    def __hash__(self):
        return hash((self.space, self.coords.tobytes()))

    def __repr__(self):
        return f"BallPoint({self.coords.tolist()}, p={self.space.exponent}, N={self.space.dimension})"


def signed_power(x, e: float) -> np.ndarray:
    """Coordinatewise ``sgn(x) |x|^e``."""
    x = np.asarray(x, dtype=float)
    return np.sign(x) * np.abs(x) ** e


def mazur_array(x, p: float) -> np.ndarray:
    """Mazur map on raw arrays, no membership checks."""
    return signed_power(x, _check_exponent(p))


def mazur_inverse_array(y, p: float) -> np.ndarray:
    return signed_power(y, 1 / _check_exponent(p))


def mazur_map(x: BallPoint) -> BallPoint:
    """Send a point of ``K_p^N`` to ``K_1^N`` by ``x_i -> sgn(x_i)|x_i|^p``.

    ``||mazur_map(x)||_1 == ||x||_p ** p``.
    """
    if not isinstance(x, BallPoint):
        raise TypeError("mazur_map expects a BallPoint; use mazur_array for raw arrays")
    space = x.space
    return BallPoint(mazur_array(x.coords, space.exponent), LpSpace(space.dimension, 1.0))


def mazur_map_inverse(y, p: float) -> BallPoint:
    """Inverse Mazur map ``K_1^N -> K_p^N``, ``y_i -> sgn(y_i)|y_i|^(1/p)``."""
    p = _check_exponent(p)
    if isinstance(y, BallPoint):
        if y.space.exponent != 1:
            raise ValueError("mazur_map_inverse expects a point of the l^1 ball")
        y = y.coords
    y = np.asarray(y, dtype=float).reshape(-1)
    if y.size == 0:
        raise ValueError("empty vector")
    if p_norm(y, 1) > 1 + TOL_MEMBERSHIP:
        raise ValueError("point is outside the l^1 unit ball")
    return BallPoint(mazur_inverse_array(y, p), LpSpace(y.size, p))


def f_gap(x, p: float):
    """``|x^p - x|`` on ``[0, 2]``; bounded by ``2^p - 2`` with the max at 2."""
    p = _check_exponent(p)
    x = np.asarray(x, dtype=float)
    if np.any(x < 0) or np.any(x > 2) or np.any(np.isnan(x)):
        raise ValueError("f_gap is defined on [0, 2] only")
    out = np.abs(x**p - x)
    return out if out.ndim else float(out)


def clarkson_slack(x, y, p: float):
    """How far Clarkson's inequality is from being tight.

    Returns ``2 (||x||^p + ||y||^p)^(q/p) - ||x + y||^q - ||x - y||^q`` with
    ``q`` the conjugate of `p`.  Nonnegative for ``1 < p <= 2``; at ``p = 2``
    it is the parallelogram law and the slack is zero.
    """
    p = float(p)
    if not 1 < p <= 2:
        raise ValueError(f"Clarkson's inequality is used for 1 < p <= 2, got {p!r}")
    x = np.asarray(x, dtype=float)
    y = np.asarray(y, dtype=float)
    if x.shape != y.shape:
        raise ValueError(f"dimension mismatch: {x.shape} vs {y.shape}")
    q = conjugate_exponent(p)
    rhs = 2 * (p_norm_power(x, p) + p_norm_power(y, p)) ** (q / p)
    return rhs - p_norm(x + y, p) ** q - p_norm(x - y, p) ** q


def scalar_gap(a, b, p: float):
    """Both sides of the scalar Mazur estimate, as ``(lhs, rhs)``.

    lhs = ``| |a-b|^p - |sgn(a)|a|^p - sgn(b)|b|^p| |``,
    rhs = ``(2^(p-1) - 1)(|a|^p + |b|^p)``.
    """
    p = _check_exponent(p)
    a = np.asarray(a, dtype=float)
    b = np.asarray(b, dtype=float)
    lhs = np.abs(np.abs(a - b) ** p - np.abs(signed_power(a, p) - signed_power(b, p)))
    rhs = (2 ** (p - 1) - 1) * (np.abs(a) ** p + np.abs(b) ** p)
    return lhs, rhs


def scalar_gap_bound_check(a, b, p: float, tol: float = 1e-12):
    lhs, rhs = scalar_gap(a, b, p)
    ok = lhs <= rhs + tol
    return bool(ok) if np.ndim(ok) == 0 else ok
