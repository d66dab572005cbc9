"""Tests of the [x, y, sigma] angle arithmetic."""

import math
from fractions import Fraction

import mpmath
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

import certilink as cl
from certilink.errors import DegenerateDirection, ExponentRange
from _util import U, add_error_in_u, assert_equivalent, exact_radius_sq, random_normalized_triple


class TestPointSign:
    def test_upper_half_plane(self):
        assert cl.point_sign(0.0, 1.0) == 1

    def test_negative_x_axis(self):
        assert cl.point_sign(-1.0, 0.0) == 1

    def test_positive_x_axis(self):
        assert cl.point_sign(1.0, 0.0) == -1

    def test_lower_half_plane(self):
        assert cl.point_sign(0.3, -2.0) == -1

    def test_origin_rejected(self):
        with pytest.raises(DegenerateDirection):
            cl.point_sign(0.0, 0.0)

    def test_partition(self):
        rng = np.random.default_rng(7)
        for _ in range(500):
            x, y = rng.normal(size=2)
            assert cl.point_sign(x, y) in (1, -1)
            # antipodal points get opposite signs except on the x-axis
            if y != 0.0:
                assert cl.point_sign(-x, -y) == -cl.point_sign(x, y)


class TestCrossDetect:
    @pytest.mark.parametrize("s,sp,sd,expected", [
        (1, 1, -1, 1),
        (1, -1, -1, 0),
        (-1, -1, 1, -1),
        (1, 1, 1, 0),
        (-1, -1, -1, 0),
        (-1, 1, 1, 0),
    ])
    def test_table(self, s, sp, sd, expected):
        assert cl.cross_detect(s, sp, sd) == expected


class TestAngleOf:
    def test_zero(self):
        assert cl.angle_of(cl.AngleTriple(1.0, 0.0, 0)) == 0.0

    def test_with_turns(self):
        assert cl.angle_of(cl.AngleTriple(0.0, 1.0, 2)) == pytest.approx(math.pi / 2 + 4 * math.pi, abs=1e-15)

    def test_negative_turn(self):
        # atan2(0, -1) = +pi, minus one full turn
        assert cl.angle_of(cl.AngleTriple(-1.0, 0.0, -1)) == pytest.approx(-math.pi, abs=1e-15)


class TestNormalize:
    def test_three_four_five(self):
        t = cl.normalize(cl.AngleTriple(3.0, 4.0, 0))
        assert (t.x, t.y, t.sigma) == (3.0 / 8.0, 4.0 / 8.0, 0)

    def test_unit_unchanged(self):
        t = cl.normalize(cl.AngleTriple(1.0, 0.0, 5))
        assert (t.x, t.y, t.sigma) == (1.0, 0.0, 5)

    def test_tiny_components_exact(self):
        t0 = cl.AngleTriple(2.0 ** -60, 2.0 ** -60, 0)
        t = cl.normalize(t0)
        assert math.atan2(t.y, t.x) == math.atan2(t0.y, t0.x)
        assert 0.25 < float(exact_radius_sq(t)) <= 1.0

    def test_radius_invariant_exact(self):
        rng = np.random.default_rng(11)
        for _ in range(2000):
            scale = 2.0 ** rng.integers(-300, 300)
            t = cl.AngleTriple(rng.normal() * scale, rng.normal() * scale, 0)
            n = cl.normalize(t)
            r2 = exact_radius_sq(n)
            assert Fraction(1, 4) < r2 <= 1
            # direction preserved exactly: cross product is exactly zero
            assert Fraction(n.x) * Fraction(t.y) == Fraction(n.y) * Fraction(t.x)
            assert n.sigma == t.sigma

    def test_idempotent(self):
        rng = np.random.default_rng(12)
        for _ in range(500):
            t = cl.normalize(cl.AngleTriple(rng.normal(), rng.normal(), 1))
            again = cl.normalize(t)
            assert (again.x, again.y) == (t.x, t.y)

    def test_axis_boundary(self):
        t = cl.normalize(cl.AngleTriple(2.0, 0.0, 0))
        assert (t.x, t.y) == (1.0, 0.0)
        t = cl.normalize(cl.AngleTriple(0.0, -8.0, 3))
        assert (t.x, t.y, t.sigma) == (0.0, -1.0, 3)

    def test_underflow_signalled(self):
        with pytest.raises(ExponentRange):
            cl.normalize(cl.AngleTriple(2.0 ** -1074, 1.0, 0))


class TestAdd:
    def test_quarter_plus_quarter(self):
        t = cl.AngleTriple(0.0, 1.0, 0)
        assert_equivalent(cl.add(t, t), cl.AngleTriple(-1.0, 0.0, 0))

    def test_three_quarters_wraps(self):
        t = cl.AngleTriple(-1.0, 1.0, 0)
        res = cl.add(t, t)
        assert_equivalent(res, cl.AngleTriple(0.0, -2.0, 1))

    def test_identity_element(self):
        rng = np.random.default_rng(13)
        for _ in range(200):
            t = random_normalized_triple(rng)
            res = cl.add(t, cl.IDENTITY)
            assert res.sigma == t.sigma
            assert math.atan2(res.y, res.x) == math.atan2(t.y, t.x)

    def test_commutative(self):
        rng = np.random.default_rng(14)
        for _ in range(200):
            a = random_normalized_triple(rng)
            b = random_normalized_triple(rng)
            r1 = cl.add(a, b)
            r2 = cl.add(b, a)
            assert (r1.x, r1.y, r1.sigma) == (r2.x, r2.y, r2.sigma)

    def test_double_precision_error_bound(self):
        # smaller companion of the acceptance criterion (which runs 1e5)
        rng = np.random.default_rng(15)
        worst = 0.0
        for _ in range(10_000):
            a = random_normalized_triple(rng)
            b = random_normalized_triple(rng)
            worst = max(worst, add_error_in_u(a, b))
        assert worst <= 2.829

    def test_exact_on_short_dyadics(self):
        # directions with 20-bit mantissas multiply without rounding, so the
        # angle identity must hold to the oracle's own precision
        rng = np.random.default_rng(16)
        with mpmath.workprec(200):
            for _ in range(300):
                ax, ay, bx, by = [float(rng.integers(-(1 << 20), 1 << 20)) for _ in range(4)]
                if (ax == 0 and ay == 0) or (bx == 0 and by == 0):
                    continue
                a = cl.AngleTriple(ax, ay, 0)
                b = cl.AngleTriple(bx, by, 0)
                res = cl.add(a, b)
                lhs = mpmath.atan2(res.y, res.x) + 2 * mpmath.pi * res.sigma
                rhs = (mpmath.atan2(ay, ax) + mpmath.atan2(by, bx))
                diff = abs(lhs - rhs)
                diff = min(diff, abs(diff - 2 * mpmath.pi), abs(diff + 2 * mpmath.pi))
                assert diff < mpmath.mpf(2) ** -150

    def test_sigma_matches_high_precision_floor(self):
        rng = np.random.default_rng(17)
        checked = 0
        with mpmath.workprec(120):
            for _ in range(3000):
                a = random_normalized_triple(rng, sigma_range=0)
                b = random_normalized_triple(rng, sigma_range=0)
                total = mpmath.atan2(a.y, a.x) + mpmath.atan2(b.y, b.x)
                pos = (total + mpmath.pi) / (2 * mpmath.pi)
                # skip samples where the wrap decision sits within rounding
                if abs(pos - mpmath.nint(pos)) < 1e-9:
                    continue
                expected = int(mpmath.floor(pos))
                assert cl.add(a, b).sigma == expected
                checked += 1
        assert checked > 2500

    def test_scale_equivalence_bitwise(self):
        rng = np.random.default_rng(18)
        for _ in range(300):
            a = random_normalized_triple(rng)
            b = random_normalized_triple(rng)
            for k in (-40, -3, 2, 37):
                scaled = cl.AngleTriple(math.ldexp(a.x, k), math.ldexp(a.y, k), a.sigma)
                r1 = cl.add(a, b)
                r2 = cl.add(scaled, b)
                assert (r1.x, r1.y, r1.sigma) == (r2.x, r2.y, r2.sigma)

    def test_degenerate_direction_rejected(self):
        with pytest.raises(DegenerateDirection):
            cl.AngleTriple(0.0, 0.0, 0)


class TestSubAndScalar:
    def test_self_difference_is_zero(self):
        rng = np.random.default_rng(19)
        for _ in range(300):
            t = random_normalized_triple(rng)
            if t.y == 0.0 and t.x < 0.0:
                continue  # angle exactly pi: principal-value negation adds a turn
            assert cl.angle_of(cl.sub(t, t)) == 0.0

    def test_pi_branch_behaviour(self):
        # subtracting an angle of exactly pi adds a full turn instead of
        # cancelling: the direction (x<0, 0) is its own mirror image
        t = cl.AngleTriple(-1.0, 0.0, 0)
        res = cl.sub(t, t)
        assert (res.x, res.y, res.sigma) == (1.0, 0.0, 1)

    def test_subtract_zero(self):
        t = cl.AngleTriple(0.0, 1.0, 0)
        assert_equivalent(cl.sub(t, cl.IDENTITY), t)

    def test_spec_difference(self):
        # 3pi/4 - 3pi/2 = -3pi/4
        res = cl.sub(cl.AngleTriple(-1.0, 1.0, 0), cl.AngleTriple(0.0, -2.0, 1))
        assert_equivalent(res, cl.AngleTriple(-1.0, -1.0, 0))

    def test_scalar_zero(self):
        assert cl.scalar_mul(0, cl.AngleTriple(0.3, 0.4, 7)) == cl.IDENTITY

    def test_four_right_angles(self):
        res = cl.scalar_mul(4, cl.AngleTriple(0.0, 1.0, 0))
        assert (res.x, res.y, res.sigma) == (1.0, 0.0, 1)

    def test_negation(self):
        res = cl.scalar_mul(-1, cl.AngleTriple(0.0, 1.0, 0))
        assert_equivalent(res, cl.AngleTriple(0.0, -1.0, 0))

    def test_scalar_matches_repeated_add(self):
        rng = np.random.default_rng(20)
        for _ in range(100):
            t = random_normalized_triple(rng)
            acc = t
            for w in range(2, 6):
                acc = cl.add(acc, t)
                res = cl.scalar_mul(w, t)
                assert (res.x, res.y, res.sigma) == (acc.x, acc.y, acc.sigma)


@settings(max_examples=300, deadline=None)
@given(
    x=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
    y=st.floats(min_value=-1e6, max_value=1e6, allow_nan=False),
    sigma=st.integers(min_value=-5, max_value=5),
)
def test_normalize_properties(x, y, sigma):
    if x == 0.0 and y == 0.0:
        return
    try:
        t = cl.normalize(cl.AngleTriple(x, y, sigma))
    except ExponentRange:
        # signalled, not clamped: only legitimate when the components span
        # (nearly) the whole exponent range
        ex = math.frexp(x)[1]
        ey = math.frexp(y)[1]
        assert x != 0.0 and y != 0.0 and abs(ex - ey) > 970
        return
    assert Fraction(1, 4) < exact_radius_sq(t) <= 1
    assert t.sigma == sigma
    assert math.copysign(1.0, t.x) == math.copysign(1.0, x) or t.x == x == 0.0
    assert math.atan2(t.y, t.x) == math.atan2(y, x)


@settings(max_examples=300, deadline=None)
@given(
    theta=st.floats(min_value=-3.14, max_value=3.14),
    phi=st.floats(min_value=-3.14, max_value=3.14),
)
def test_add_error_bound_property(theta, phi):
    a = cl.normalize(cl.AngleTriple(math.cos(theta), math.sin(theta), 0))
    b = cl.normalize(cl.AngleTriple(math.cos(phi), math.sin(phi), 0))
    assert add_error_in_u(a, b) <= 2.829
