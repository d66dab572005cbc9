"""Tests of the segment-pair angle construction and its error bounds."""

import math

import mpmath
import numpy as np
import pytest

import certilink as cl
from certilink.errors import DegenerateSegments, IntersectionDetected
from certilink.oracle import pair_angle_by_gauss_quadrature, pair_angle_reference
from certilink.segment import a_priori_ok_batch, build_angle_batch
from _util import U


def random_pairs(rng, n):
    """Random disjoint segment pairs (endpoints uniform in the unit cube)."""
    pts = rng.uniform(-1.0, 1.0, size=(n, 4, 3))
    return pts[:, 0], pts[:, 1], pts[:, 2], pts[:, 3]


def triple_angles(x, y, sigma):
    return np.arctan2(y, x) + 2.0 * math.pi * sigma


class TestBuildAngle:
    def test_zero_length_first_segment(self):
        # degenerate segment with distinct, non-collinear other points: the
        # contribution is zero (within the pair's own bound)
        p = (0.0, 0.0, 0.0)
        res = cl.build_angle(p, p, (0.0, 0.0, 1.0), (1.0, 0.0, 1.0))
        assert res.triple.sigma == 0
        assert abs(cl.angle_of(res.triple)) <= res.err_bound * U

    def test_coplanar_parallel_segments(self):
        res = cl.build_angle((0, 0, 0), (1, 0, 0), (0, 0, 1), (1, 0, 1))
        assert res.triple.y == 0.0
        assert res.triple.sigma == 0
        assert cl.angle_of(res.triple) == 0.0

    def test_against_adaptive_quadrature(self):
        p, pn = (0.0, 0.0, 0.0), (1.0, 0.0, 0.0)
        q, qn = (0.3, -0.4, 0.25), (0.3, 0.6, 0.25)
        res = cl.build_angle(p, pn, q, qn)
        ref = pair_angle_by_gauss_quadrature(p, pn, q, qn)
        assert cl.angle_of(res.triple) == pytest.approx(ref, abs=1e-6)

    def test_shared_endpoint_rejected(self):
        with pytest.raises(DegenerateSegments):
            cl.build_angle((0, 0, 0), (1, 0, 0), (1, 0, 0), (1, 1, 0))

    def test_intersecting_segments_detected(self):
        # antiparallel axis-aligned connecting vectors make the intermediate
        # direction exactly (0, 0); the segments do cross at (0.5, 0, 0)
        with pytest.raises(IntersectionDetected):
            cl.build_angle((0, 0, 0), (1, 0, 0), (0, 0, 2), (1, 0, -2))

    def test_sign_field_matches_triple(self):
        rng = np.random.default_rng(21)
        for _ in range(300):
            p, pn, q, qn = [rng.uniform(-1, 1, 3) for _ in range(4)]
            res = cl.build_angle(p, pn, q, qn)
            assert res.sign == cl.point_sign(res.triple.x, res.triple.y)
            assert res.err_bound >= 2.829

    def test_symmetry_and_antisymmetry(self):
        rng = np.random.default_rng(22)
        for _ in range(500):
            p, pn, q, qn = [rng.uniform(-1, 1, 3) for _ in range(4)]
            res = cl.build_angle(p, pn, q, qn)
            swapped = cl.build_angle(q, qn, p, pn)
            reverse = cl.build_angle(pn, p, q, qn)
            a = cl.angle_of(res.triple)
            tol = 2.0 * res.err_bound * U
            assert abs(cl.angle_of(swapped.triple) - a) <= tol
            assert abs(cl.angle_of(reverse.triple) + a) <= tol

    def test_opposite_triple_product_signs(self):
        # y * y' <= 0 always: the two intermediate ordinates cannot agree in sign
        rng = np.random.default_rng(23)
        p, pn, q, qn = random_pairs(rng, 20_000)
        alpha = q - p
        beta = q - pn
        gamma = qn - pn
        omega = qn - p

        def unit(v):
            return v / np.linalg.norm(v, axis=1)[:, None]

        ua, ub, ug, uo = unit(alpha), unit(beta), unit(gamma), unit(omega)
        t2 = np.cross(ua, ug)
        y1 = np.sum(ub * t2, axis=1)
        y2 = np.sum(uo * t2, axis=1)
        assert np.all(y1 * y2 <= 0.0)

    def test_batch_matches_scalar_bitwise(self):
        rng = np.random.default_rng(24)
        p, pn, q, qn = random_pairs(rng, 500)
        bx, by, bs, bsg, be = build_angle_batch(p, pn, q, qn)
        for i in range(500):
            res = cl.build_angle(p[i], pn[i], q[i], qn[i])
            assert res.triple.x == bx[i]
            assert res.triple.y == by[i]
            assert res.triple.sigma == bs[i]
            assert res.sign == bsg[i]
            assert res.err_bound == be[i]


class TestAPriori:
    def test_far_unit_segments(self):
        assert cl.a_priori_ok((0, 0, 0), (1, 0, 0), (0, 2, 0), (1, 2, 0))

    def test_close_endpoints(self):
        assert not cl.a_priori_ok((0, 0, 0), (1, 0, 0), (1.1, 0, 0), (2.1, 0, 0))

    def test_hopf_all_pairs(self):
        a, b = __import__("certilink.generators", fromlist=["hopf"]).hopf(64)
        av, bv = a.vertices, b.vertices
        i, j = np.divmod(np.arange(64 * 64), 64)
        ok = a_priori_ok_batch(av[i], av[(i + 1) % 64], bv[j], bv[(j + 1) % 64])
        assert np.all(ok)


class TestLemma13Bound:
    def test_posteriori_bound_random_pairs(self):
        # companion sample of the acceptance criterion (which runs 1e5)
        rng = np.random.default_rng(25)
        p, pn, q, qn = random_pairs(rng, 2000)
        x, y, sigma, _, err = build_angle_batch(p, pn, q, qn)
        angles = triple_angles(x, y, sigma)
        for i in range(2000):
            ref = pair_angle_reference(p[i], pn[i], q[i], qn[i])
            diff = abs(mpmath.mpf(angles[i]) - ref)
            assert diff <= err[i] * U

    def test_apriori_bound(self):
        rng = np.random.default_rng(26)
        # short segments far apart: all a-priori admissible
        centers_p = rng.uniform(-1, 1, size=(2000, 3))
        offs = rng.uniform(-1, 1, size=(2000, 2, 3)) * 0.02
        shift = np.array([3.0, 0.0, 0.0])
        p = centers_p + offs[:, 0]
        pn = centers_p + offs[:, 1]
        centers_q = rng.uniform(-1, 1, size=(2000, 3)) + shift
        offs_q = rng.uniform(-1, 1, size=(2000, 2, 3)) * 0.02
        q = centers_q + offs_q[:, 0]
        qn = centers_q + offs_q[:, 1]
        assert np.all(a_priori_ok_batch(p, pn, q, qn))
        x, y, sigma, _, _ = build_angle_batch(p, pn, q, qn)
        angles = triple_angles(x, y, sigma)
        for i in range(0, 2000, 4):
            ref = pair_angle_reference(p[i], pn[i], q[i], qn[i])
            assert abs(mpmath.mpf(angles[i]) - ref) <= 117.861 * U


class TestAppendixConstants:
    """Empirical validation of the per-step worst-case constants.

    The double-precision computation is compared against an 80-bit extended
    reference; measured errors sit far enough below the published constants
    that the reference's own rounding (~2**-64 relative) cannot matter.
    """

    N = 100_000

    def _vectors(self, rng, count):
        return rng.uniform(-1.0, 1.0, size=(count, 3))

    def test_normalized_component_error(self):
        rng = np.random.default_rng(27)
        v = self._vectors(rng, self.N)
        d = np.sqrt(np.sum(v * v, axis=1))
        unit = v / d[:, None]
        ref = v.astype(np.longdouble) / np.sqrt(np.sum(v.astype(np.longdouble) ** 2, axis=1))[:, None]
        rel = np.abs(unit.astype(np.longdouble) - ref) / np.abs(ref)
        assert float(np.max(rel)) <= 3.415 * U

    def test_unit_dot_error(self):
        rng = np.random.default_rng(28)
        a = self._vectors(rng, self.N)
        b = self._vectors(rng, self.N)

        def unit(v):
            return v / np.sqrt(np.sum(v * v, axis=1))[:, None]

        got = np.sum(unit(a) * unit(b), axis=1)

        al = a.astype(np.longdouble)
        bl = b.astype(np.longdouble)
        ref = np.sum(al * bl, axis=1) / (np.sqrt(np.sum(al * al, axis=1)) * np.sqrt(np.sum(bl * bl, axis=1)))
        assert float(np.max(np.abs(got.astype(np.longdouble) - ref))) <= 13.838 * U

    def test_one_plus_three_dots_error(self):
        rng = np.random.default_rng(29)
        a = self._vectors(rng, self.N)
        b = self._vectors(rng, self.N)
        c = self._vectors(rng, self.N)

        def unit(v):
            return v / np.sqrt(np.sum(v * v, axis=1))[:, None]

        ua, ub, uc = unit(a), unit(b), unit(c)
        got = 1.0 + (np.sum(ua * ub, axis=1) + np.sum(ub * uc, axis=1) + np.sum(ua * uc, axis=1))

        def unit_l(v):
            vl = v.astype(np.longdouble)
            return vl / np.sqrt(np.sum(vl * vl, axis=1))[:, None]

        la, lb, lc = unit_l(a), unit_l(b), unit_l(c)
        ref = 1.0 + np.sum(la * lb, axis=1) + np.sum(lb * lc, axis=1) + np.sum(la * lc, axis=1)
        assert float(np.max(np.abs(got.astype(np.longdouble) - ref))) <= 57.515 * U

    def test_scalar_triple_product_error(self):
        rng = np.random.default_rng(30)
        a = self._vectors(rng, self.N)
        b = self._vectors(rng, self.N)
        c = self._vectors(rng, self.N)

        def unit(v):
            return v / np.sqrt(np.sum(v * v, axis=1))[:, None]

        got = np.sum(unit(a) * np.cross(unit(b), unit(c)), axis=1)

        def unit_l(v):
            vl = v.astype(np.longdouble)
            return vl / np.sqrt(np.sum(vl * vl, axis=1))[:, None]

        la, lb, lc = unit_l(a), unit_l(b), unit_l(c)
        ref = np.sum(la * np.cross(lb, lc), axis=1)
        assert float(np.max(np.abs(got.astype(np.longdouble) - ref))) <= 23.26 * U
