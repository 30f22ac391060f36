import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st
from numpy import testing

from qghlab.lp_core import (
    BallPoint,
    LpSpace,
    clarkson_slack,
    conjugate_exponent,
    f_gap,
    mazur_array,
    mazur_map,
    mazur_map_inverse,
    p_norm,
    p_norm_power,
    scalar_gap,
    scalar_gap_bound_check,
)
from qghlab.sampling import ball_array, make_rng, sphere_array

exponents = st.floats(1.0, 4.0)
exponents_12 = st.floats(1.05, 2.0 - 1e-6)
coords = st.floats(-10, 10, allow_nan=False)
unit_coords = st.floats(-1, 1, allow_nan=False)


def vectors(n, elements=coords):
    return st.lists(elements, min_size=n, max_size=n).map(np.array)


# --- p_norm -----------------------------------------------------------------

def test_p_norm_pythagoras():
    assert p_norm([3, 4], 2) == 5


def test_p_norm_l1():
    assert p_norm([1, -1, 1], 1) == 3


def test_p_norm_against_mpmath():
    # (2 * 0.7^1.5)^(2/3) at 50 digits, using the exact binary value of 0.7
    with mpmath.workdps(50):
        expected = (2 * mpmath.mpf(0.7) ** mpmath.mpf(1.5)) ** (mpmath.mpf(2) / 3)
    assert abs(p_norm([0.7, 0.7], 1.5) - float(expected)) <= 2e-16
    assert abs(p_norm([0.7, 0.7], 1.5) - 1.11118073637773956183) <= 2e-16


def test_p_norm_rejects_bad_input():
    with pytest.raises(ValueError):
        p_norm([1.0], 0.5)
    with pytest.raises(ValueError):
        p_norm([], 2)


def test_p_norm_no_overflow():
    assert p_norm([1e200, 1e200], 2) == pytest.approx(np.sqrt(2) * 1e200)
    assert p_norm([1e-200, 0.0], 3) == pytest.approx(1e-200)


def test_p_norm_batched():
    x = np.array([[3.0, 4.0], [0.0, 0.0], [1.0, 0.0]])
    testing.assert_allclose(p_norm(x, 2), [5.0, 0.0, 1.0])


@given(exponents, st.integers(1, 6).flatmap(lambda n: st.tuples(vectors(n), vectors(n), vectors(n))))
def test_triangle_inequality(p, xyz):
    x, y, z = xyz
    assert p_norm(x - z, p) <= p_norm(x - y, p) + p_norm(y - z, p) + 1e-12 * (1 + p_norm(x - z, p))


@given(exponents, st.floats(-100, 100), vectors(4))
def test_homogeneity(p, lam, x):
    assert p_norm(lam * x, p) == pytest.approx(abs(lam) * p_norm(x, p), rel=1e-12, abs=1e-300)


# --- conjugate exponent -----------------------------------------------------

@pytest.mark.parametrize("p, q", [(2, 2), (1.5, 3), (4 / 3, 4)])
def test_conjugate_values(p, q):
    assert conjugate_exponent(p) == pytest.approx(q, rel=1e-14)


@given(st.floats(1.0001, 100))
def test_conjugate_identity(p):
    assert abs(1 / p + 1 / conjugate_exponent(p) - 1) <= 1e-14


@pytest.mark.parametrize("p", [1.0, 0.5, -2.0])
def test_conjugate_rejects(p):
    with pytest.raises(ValueError):
        conjugate_exponent(p)


def test_lp_space():
    s = LpSpace(3, 1.5)
    assert s.conjugate == pytest.approx(3.0)
    with pytest.raises(ValueError):
        LpSpace(3, 1.0).conjugate
    with pytest.raises(ValueError):
        LpSpace(0, 2)
    with pytest.raises(ValueError):
        LpSpace(2, 0.9)
    assert s.contains([1.0, 0, 0]) and not s.contains([1.0, 0.1, 0])


def test_ball_point_membership():
    s = LpSpace(2, 2)
    BallPoint([0.6, 0.8], s)
    BallPoint([0.6, 0.8 + 1e-13], s)
    with pytest.raises(ValueError):
        BallPoint([0.6, 0.81], s)
    with pytest.raises(ValueError):
        BallPoint([1.0, 0.0, 0.0], s)
    pt = BallPoint([0.6, 0.8], s)
    with pytest.raises(ValueError):
        pt.coords[0] = 0.0


# --- Mazur map --------------------------------------------------------------

def test_mazur_squares():
    y = mazur_map(BallPoint([0.6, 0.8], LpSpace(2, 2)))
    testing.assert_allclose(y.coords, [0.36, 0.64], rtol=1e-15)
    assert y.space == LpSpace(2, 1)
    assert y.norm == pytest.approx(1.0, abs=1e-15)


def test_mazur_signs_preserved():
    y = mazur_map(BallPoint([-0.6, 0.8], LpSpace(2, 2)))
    testing.assert_allclose(y.coords, [-0.36, 0.64])


@pytest.mark.parametrize("p", [1.0, 1.3, 2.0, 3.7])
def test_mazur_fixes_extreme_point(p):
    e1 = np.zeros(5)
    e1[0] = 1
    testing.assert_array_equal(mazur_map(BallPoint(e1, LpSpace(5, p))).coords, e1)


def test_mazur_identity_at_p1():
    x = ball_array(LpSpace(6, 1.0), 20, make_rng(3))
    testing.assert_array_equal(mazur_array(x, 1.0), x)


def test_mazur_inverse_examples():
    testing.assert_allclose(mazur_map_inverse([0.36, 0.64], 2).coords, [0.6, 0.8], rtol=1e-15)
    testing.assert_array_equal(mazur_map_inverse(np.zeros(3), 1.7).coords, np.zeros(3))
    with pytest.raises(ValueError):
        mazur_map_inverse([0.6, 0.6], 2)


def test_mazur_round_trip_random():
    rng = make_rng(11)
    ys = ball_array(LpSpace(4, 1.0), 500, rng)
    for y in ys:
        back = mazur_map(mazur_map_inverse(y, 1.3)).coords
        assert np.max(np.abs(back - y)) <= 1e-12


@settings(max_examples=200)
@given(st.floats(1.0, 3.0), st.integers(1, 12), st.integers(0, 2**32 - 1))
def test_mazur_properties(p, n, seed):
    rng = make_rng(seed)
    space = LpSpace(n, p)
    xs = np.vstack([ball_array(space, 5, rng), sphere_array(space, 5, rng)])
    ys = mazur_array(xs, p)
    testing.assert_allclose(p_norm(ys, 1), p_norm_power(xs, p), atol=1e-12, rtol=0)
    assert np.max(np.abs(mazur_array(mazur_map_inverse(ys[0], p).coords, p) - ys[0])) <= 1e-12


# --- f_gap ------------------------------------------------------------------

def test_f_gap_examples():
    assert f_gap(1.0, 1.7) == 0.0
    assert f_gap(2.0, 2.0) == 2.0
    with pytest.raises(ValueError):
        f_gap(2.5, 1.5)
    with pytest.raises(ValueError):
        f_gap(-0.1, 1.5)


@pytest.mark.parametrize("p", [1.01, 1.1, 1.4, 1.5, 1.9, 2.0, 3.0])
def test_f_gap_grid_argmax(p):
    grid = np.append(np.arange(2000) * 1e-3, 2.0)
    vals = f_gap(grid, p)
    assert grid[np.argmax(vals)] == 2.0
    assert abs(vals.max() - (2**p - 2)) <= 1e-9


@pytest.mark.parametrize("p", [1.01, 1.2, 1.5, 1.99])
def test_f_gap_interior_critical_point(p):
    # interior max of x - x^p at (1/p)^(1/(p-1)) equals (p-1)/p^q <= 2^p - 2
    x0 = (1 / p) ** (1 / (p - 1))
    q = conjugate_exponent(p)
    assert f_gap(x0, p) == pytest.approx((p - 1) / p**q, rel=1e-12)
    assert f_gap(x0, p) <= p - 1 <= 2**p - 2


@given(st.floats(1.0, 3.0), st.floats(0, 1e6), st.floats(0, 1))
def test_power_estimates(p, t, frac):
    s = frac * t
    low = (t - s) ** p + s**p
    scale = 1 + t**p
    assert low <= t**p + 1e-12 * scale
    assert t**p <= 2 ** (p - 1) * low + 1e-12 * scale


# --- Clarkson ---------------------------------------------------------------

def test_clarkson_parallelogram_at_p2():
    rng = make_rng(5)
    for _ in range(200):
        x, y = rng.normal(size=(2, 7))
        assert abs(clarkson_slack(x, y, 2.0)) <= 1e-10 * (1 + x @ x + y @ y)


@pytest.mark.parametrize("p", [1.1, 1.5, 1.9])
def test_clarkson_equality_at_x_equals_y(p):
    x = ball_array(LpSpace(6, p), 1, make_rng(2))[0]
    assert abs(clarkson_slack(x, x, p)) <= 1e-12


def test_clarkson_random_pairs():
    rng = make_rng(7)
    space = LpSpace(8, 1.5)
    x = ball_array(space, 100_000, rng)
    y = ball_array(space, 100_000, rng)
    assert clarkson_slack(x, y, 1.5).min() >= -1e-10


def test_clarkson_rejects():
    with pytest.raises(ValueError):
        clarkson_slack([1, 2], [1, 2, 3], 1.5)
    for p in (1.0, 2.5, 0.5):
        with pytest.raises(ValueError):
            clarkson_slack([1.0], [1.0], p)


@given(exponents_12, st.integers(1, 8).flatmap(
    lambda n: st.tuples(vectors(n, unit_coords), vectors(n, unit_coords))))
def test_clarkson_property(p, xy):
    x, y = xy
    q = conjugate_exponent(p)
    scale = 1 + (p_norm_power(x, p) + p_norm_power(y, p)) ** (q / p)
    assert clarkson_slack(x, y, p) >= -1e-10 * scale


# --- scalar gap ---------------------------------------------------------------

def test_scalar_gap_examples():
    assert scalar_gap_bound_check(0.3, 0.3, 1.5)
    lhs, rhs = scalar_gap(0.3, 0.3, 1.5)
    assert lhs == 0.0
    # a = 1, b = -1, p = 1.5: both sides equal 2^1.5 - 2 = 2(sqrt 2 - 1)
    with mpmath.workdps(50):
        exact = 2 ** mpmath.mpf(1.5) - 2
    lhs, rhs = scalar_gap(1.0, -1.0, 1.5)
    assert lhs == pytest.approx(float(exact), abs=1e-15)
    assert rhs == pytest.approx(float(exact), abs=1e-15)
    assert scalar_gap_bound_check(1.0, -1.0, 1.5)
    for t in (0.0, 0.2, 0.9):
        assert scalar_gap(0.0, t, 1.7)[0] == 0.0


@given(st.floats(1.0, 3.0), st.floats(-1, 1), st.floats(-1, 1))
def test_scalar_gap_property(p, a, b):
    assert scalar_gap_bound_check(a, b, p)
