"""Angle contribution of one segment pair, with its rounding-error bound.

For disjoint segments [p, p_next] and [q, q_next] the mutual angle is the
difference of two atan2-style angles built from the four connecting vectors.
Both are carried as plane directions, so the pair contribution comes out as a
single angle triple together with an a-posteriori bound on how far floating
point arithmetic can have moved it, expressed in units of the unit roundoff.

The module offers a scalar routine (`build_angle`) and a vectorized batch
routine used by the curve-level loops.  Both follow the same operation
sequence so they produce bit-identical values.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateSegments, IntersectionDetected
from .precision import ADD_ERR_U, POSTERIORI_COEF_U
from .triple import AngleTriple, PointSign, cross_detect, point_sign


@dataclass(frozen=True)
class SegmentPairAngle:
    """One pair's angle triple, its direction sign, and its error bound.

    ``err_bound`` is a multiple of the unit roundoff u and is always at least
    the single-addition constant; it grows as 1/R + 1/R' when either of the
    two intermediate directions gets short.
    """

    triple: AngleTriple
    sign: PointSign
    err_bound: float


def _sub3(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _norm3(v):
    return math.sqrt(v[0] * v[0] + v[1] * v[1] + v[2] * v[2])


def build_angle(p, p_next, q, q_next) -> SegmentPairAngle:
    """Angle triple for the segment pair [p, p_next], [q, q_next].

    The segments must be disjoint; any zero-length connecting vector raises
    `DegenerateSegments`, and an intermediate direction that evaluates to
    exactly (0, 0) raises `IntersectionDetected` (for disjoint segments that
    is impossible in exact arithmetic).
    """
    alpha = _sub3(q, p)
    beta = _sub3(q, p_next)
    gamma = _sub3(q_next, p_next)
    omega = _sub3(q_next, p)

    la = _norm3(alpha)
    lb = _norm3(beta)
    lg = _norm3(gamma)
    lo = _norm3(omega)
    if la == 0.0 or lb == 0.0 or lg == 0.0 or lo == 0.0:
        raise DegenerateSegments("segment pair shares an endpoint or has zero length")

    ax, ay, az = alpha[0] / la, alpha[1] / la, alpha[2] / la
    bx, by, bz = beta[0] / lb, beta[1] / lb, beta[2] / lb
    gx, gy, gz = gamma[0] / lg, gamma[1] / lg, gamma[2] / lg
    ox, oy, oz = omega[0] / lo, omega[1] / lo, omega[2] / lo

    t1x, t1y, t1z = ax + gx, ay + gy, az + gz
    t2x = ay * gz - az * gy
    t2y = az * gx - ax * gz
    t2z = ax * gy - ay * gx
    t3 = 1.0 + (ax * gx + ay * gy + az * gz)

    x1 = t3 + (bx * t1x + by * t1y + bz * t1z)
    y1 = bx * t2x + by * t2y + bz * t2z
    x2 = t3 + (ox * t1x + oy * t1y + oz * t1z)
    y2 = ox * t2x + oy * t2y + oz * t2z

    if (x1 == 0.0 and y1 == 0.0) or (x2 == 0.0 and y2 == 0.0):
        raise IntersectionDetected("intermediate direction vanished; segments intersect")

    xs = x1 * x2 + y1 * y2
    ys = x1 * y2 - y1 * x2
    if xs == 0.0 and ys == 0.0:
        raise IntersectionDetected("combined direction vanished; segments intersect")

    s = 1 if (ys > 0.0 or (ys == 0.0 and xs < 0.0)) else -1
    sigma = -s if s * y1 > 0.0 else 0
    # The closed form above specializes cross detection on (x1, -y1), (x2, y2);
    # away from the atan2 branch cut the generic test must agree.
    if y1 != 0.0 and y2 != 0.0:
        assert sigma == cross_detect(point_sign(x1, -y1), point_sign(x2, y2), s)

    radius1 = math.sqrt(x1 * x1 + y1 * y1)
    radius2 = math.sqrt(x2 * x2 + y2 * y2)
    err = ADD_ERR_U + POSTERIORI_COEF_U * (1.0 / radius1 + 1.0 / radius2)

    return SegmentPairAngle(AngleTriple(xs, ys, sigma), s, err)


def a_priori_ok(p, p_next, q, q_next) -> bool:
    """Sufficient geometric condition for the fixed a-priori error bound.

    True when both segments are no longer than every endpoint-to-endpoint
    distance between them; the pair error is then at most `APRIORI_ERR_U`
    units of roundoff no matter what the a-posteriori radii say.
    """
    lp = _norm3(_sub3(p_next, p))
    lq = _norm3(_sub3(q_next, q))
    c = min(
        _norm3(_sub3(q, p)),
        _norm3(_sub3(q, p_next)),
        _norm3(_sub3(q_next, p)),
        _norm3(_sub3(q_next, p_next)),
    )
    return lp <= c and lq <= c


def _unit_rows(v: np.ndarray, what: str) -> np.ndarray:
    n = np.sqrt(np.sum(v * v, axis=1))
    if np.any(n == 0.0):
        raise DegenerateSegments(f"zero-length {what} vector in batch")
    return v / n[:, None]


def build_angle_batch(p, p_next, q, q_next, dtype=np.float64):
    """Vectorized `build_angle` over K segment pairs.

    All four arguments are (K, 3) arrays.  Returns arrays
    ``(x, y, sigma, sign, err)`` of length K; ``sigma`` and ``sign`` are
    int64.  ``dtype`` selects the arithmetic (float32 gives the
    single-precision model).  Elementwise results match the scalar routine
    bit for bit in float64.
    """
    p = np.asarray(p, dtype=dtype)
    p_next = np.asarray(p_next, dtype=dtype)
    q = np.asarray(q, dtype=dtype)
    q_next = np.asarray(q_next, dtype=dtype)

    alpha = _unit_rows(q - p, "alpha")
    beta = _unit_rows(q - p_next, "beta")
    gamma = _unit_rows(q_next - p_next, "gamma")
    omega = _unit_rows(q_next - p, "omega")

    t1 = alpha + gamma
    t2 = np.cross(alpha, gamma)
    t3 = dtype(1.0) + np.sum(alpha * gamma, axis=1)

    x1 = t3 + np.sum(beta * t1, axis=1)
    y1 = np.sum(beta * t2, axis=1)
    x2 = t3 + np.sum(omega * t1, axis=1)
    y2 = np.sum(omega * t2, axis=1)

    if np.any(((x1 == 0.0) & (y1 == 0.0)) | ((x2 == 0.0) & (y2 == 0.0))):
        raise IntersectionDetected("intermediate direction vanished; segments intersect")

    xs = x1 * x2 + y1 * y2
    ys = x1 * y2 - y1 * x2
    if np.any((xs == 0.0) & (ys == 0.0)):
        raise IntersectionDetected("combined direction vanished; segments intersect")

    sign = np.where((ys > 0.0) | ((ys == 0.0) & (xs < 0.0)), 1, -1).astype(np.int64)
    sigma = np.where(sign * y1 > 0.0, -sign, 0).astype(np.int64)

    radius1 = np.sqrt(x1 * x1 + y1 * y1)
    radius2 = np.sqrt(x2 * x2 + y2 * y2)
    err = ADD_ERR_U + POSTERIORI_COEF_U * (1.0 / radius1.astype(np.float64)
                                           + 1.0 / radius2.astype(np.float64))

    return xs, ys, sigma, sign, err


def a_priori_ok_batch(p, p_next, q, q_next) -> np.ndarray:
    """Vectorized `a_priori_ok` over (K, 3) arrays; returns a bool array."""
    p = np.asarray(p, dtype=np.float64)
    p_next = np.asarray(p_next, dtype=np.float64)
    q = np.asarray(q, dtype=np.float64)
    q_next = np.asarray(q_next, dtype=np.float64)

    def _len(v):
        return np.sqrt(np.sum(v * v, axis=1))

    lp = _len(p_next - p)
    lq = _len(q_next - q)
    c = np.minimum.reduce([_len(q - p), _len(q - p_next), _len(q_next - p), _len(q_next - p_next)])
    return (lp <= c) & (lq <= c)
