"""Independent ground-truth computations for verification.

Nothing here shares code with the certified production path: the projection
oracle counts signed crossings of a generic planar diagram, and the
quadrature oracles evaluate the classical four-vector atan2 formula per
segment pair in extended precision (mpmath, default 120 bits, at least twice
the working precision).  These are slow by design and exist so that tests
and the ``verify`` subcommand have something to disagree with.
"""

from __future__ import annotations

import math

import mpmath
import numpy as np

from .errors import NonGenericDirection

#: Default binary precision (bits) of the extended-precision oracles.
DEFAULT_PRECISION_BITS = 120

_GENERIC_TOL = 1e-12
_PARAM_MARGIN = 1e-9


# ---------------------------------------------------------------------------
# extended-precision pair angle (atan2 formula on the four connecting vectors)

def _mp_dot(a, b):
    return a[0] * b[0] + a[1] * b[1] + a[2] * b[2]


def _mp_cross(a, b):
    return (a[1] * b[2] - a[2] * b[1],
            a[2] * b[0] - a[0] * b[2],
            a[0] * b[1] - a[1] * b[0])


def _mp_norm(a):
    return mpmath.sqrt(_mp_dot(a, a))


def _mp_sub(a, b):
    return (a[0] - b[0], a[1] - b[1], a[2] - b[2])


def _mp_theta(a, b, c):
    na, nb, nc = _mp_norm(a), _mp_norm(b), _mp_norm(c)
    x = na * nb * nc + _mp_dot(b, c) * na + _mp_dot(c, a) * nb + _mp_dot(a, b) * nc
    y = _mp_dot(a, _mp_cross(b, c))
    return mpmath.atan2(y, x)


def _as_mp_point(p):
    return (mpmath.mpf(float(p[0])), mpmath.mpf(float(p[1])), mpmath.mpf(float(p[2])))


def pair_angle_reference(p, p_next, q, q_next, prec_bits: int = DEFAULT_PRECISION_BITS):
    """Extended-precision mutual angle of one segment pair (mpf, radians).

    Evaluates the difference of two four-quadrant angles built from the
    connecting vectors; this is a different formula route than the
    production triple construction.
    """
    with mpmath.workprec(prec_bits):
        mp_p = _as_mp_point(p)
        mp_pn = _as_mp_point(p_next)
        mp_q = _as_mp_point(q)
        mp_qn = _as_mp_point(q_next)
        alpha = _mp_sub(mp_q, mp_p)
        beta = _mp_sub(mp_q, mp_pn)
        gamma = _mp_sub(mp_qn, mp_pn)
        omega = _mp_sub(mp_qn, mp_p)
        return _mp_theta(alpha, beta, gamma) - _mp_theta(alpha, omega, gamma)


def _pair_indices_self(n: int):
    i, j = np.triu_indices(n, k=2)
    keep = ~((i == 0) & (j == n - 1))
    return i[keep], j[keep]


def linking_by_quadrature(P, Q, prec_bits: int = DEFAULT_PRECISION_BITS):
    """Linking number as an extended-precision angle sum over all pairs (mpf).

    For disjoint closed curves the result is within the oracle's own rounding
    of an integer; the caller decides how to round.
    """
    pv = np.asarray(P.vertices if hasattr(P, "vertices") else P, dtype=np.float64)
    qv = np.asarray(Q.vertices if hasattr(Q, "vertices") else Q, dtype=np.float64)
    n, m = pv.shape[0], qv.shape[0]
    with mpmath.workprec(prec_bits):
        mp_p = [_as_mp_point(pv[i]) for i in range(n)]
        mp_q = [_as_mp_point(qv[j]) for j in range(m)]
        total = mpmath.mpf(0)
        for i in range(n):
            p, pn = mp_p[i], mp_p[(i + 1) % n]
            for j in range(m):
                q, qn = mp_q[j], mp_q[(j + 1) % m]
                alpha = _mp_sub(q, p)
                beta = _mp_sub(q, pn)
                gamma = _mp_sub(qn, pn)
                omega = _mp_sub(qn, p)
                total += _mp_theta(alpha, beta, gamma) - _mp_theta(alpha, omega, gamma)
        return total / (2 * mpmath.pi)


def writhe_by_quadrature(P, prec_bits: int = DEFAULT_PRECISION_BITS):
    """Writhe as an extended-precision angle sum over self pairs (mpf).

    Vertex-sharing pairs (including the wrap-adjacent one) contribute zero
    and are skipped; each unordered pair is counted twice.
    """
    pv = np.asarray(P.vertices if hasattr(P, "vertices") else P, dtype=np.float64)
    n = pv.shape[0]
    ii, jj = _pair_indices_self(n)
    with mpmath.workprec(prec_bits):
        mp_p = [_as_mp_point(pv[i]) for i in range(n)]
        total = mpmath.mpf(0)
        for i, j in zip(ii.tolist(), jj.tolist()):
            p, pn = mp_p[i], mp_p[(i + 1) % n]
            q, qn = mp_p[j], mp_p[(j + 1) % n]
            alpha = _mp_sub(q, p)
            beta = _mp_sub(q, pn)
            gamma = _mp_sub(qn, pn)
            omega = _mp_sub(qn, p)
            total += _mp_theta(alpha, beta, gamma) - _mp_theta(alpha, omega, gamma)
        return total / mpmath.pi


# ---------------------------------------------------------------------------
# signed-crossing projection oracle

def _orthobasis(direction: np.ndarray):
    d = direction / np.linalg.norm(direction)
    helper = np.array([1.0, 0.0, 0.0]) if abs(d[0]) < 0.9 else np.array([0.0, 1.0, 0.0])
    e1 = np.cross(d, helper)
    e1 /= np.linalg.norm(e1)
    e2 = np.cross(d, e1)
    return e1, e2, d


def _cross2(a, b):
    return a[..., 0] * b[..., 1] - a[..., 1] * b[..., 0]


def _project_crossings(pv: np.ndarray, qv: np.ndarray, direction: np.ndarray) -> int:
    """Signed over-crossing count of P over Q for one projection direction.

    Raises `NonGenericDirection` whenever a distance, determinant, crossing
    parameter, or depth difference falls below the genericity threshold.
    """
    e1, e2, d = _orthobasis(direction)
    p2 = np.stack([pv @ e1, pv @ e2], axis=1)
    q2 = np.stack([qv @ e1, qv @ e2], axis=1)
    pz = pv @ d
    qz = qv @ d

    scale = max(
        float(np.max(np.abs(p2), initial=0.0)),
        float(np.max(np.abs(q2), initial=0.0)),
        1e-30,
    )
    tol_d = _GENERIC_TOL * scale

    # projected P vertices must stay clear of projected Q vertices
    dmin = np.min(np.linalg.norm(p2[:, None, :] - q2[None, :, :], axis=2))
    if dmin < tol_d:
        raise NonGenericDirection("projected vertices collide")

    n, m = p2.shape[0], q2.shape[0]
    a = p2
    b = p2[(np.arange(n) + 1) % n]
    c = q2
    e = q2[(np.arange(m) + 1) % m]
    az, bz = pz, pz[(np.arange(n) + 1) % n]
    cz, ez = qz, qz[(np.arange(m) + 1) % m]

    r = b - a
    s = e - c

    total = 0
    # chunk over P segments to bound the (rows, m) temporaries
    rows = max(1, int(4e6 // max(m, 1)))
    for start in range(0, n, rows):
        stop = min(start + rows, n)
        ra = r[start:stop, None, :]
        sa = s[None, :, :]
        denom = _cross2(ra, sa)
        diff = c[None, :, :] - a[start:stop, None, :]
        with np.errstate(divide="ignore", invalid="ignore"):
            t = _cross2(diff, sa) / denom
            u = _cross2(diff, ra) / denom
        inside = (t > 0.0) & (t < 1.0) & (u > 0.0) & (u < 1.0)
        if not np.any(inside):
            continue
        near_core = (t > -_PARAM_MARGIN) & (t < 1.0 + _PARAM_MARGIN) \
            & (u > -_PARAM_MARGIN) & (u < 1.0 + _PARAM_MARGIN)
        if np.any(near_core & (np.abs(denom) < _GENERIC_TOL * scale * scale)):
            raise NonGenericDirection("near-parallel crossing determinant")
        ti = t[inside]
        ui = u[inside]
        if np.any((ti < _PARAM_MARGIN) | (ti > 1.0 - _PARAM_MARGIN)
                  | (ui < _PARAM_MARGIN) | (ui > 1.0 - _PARAM_MARGIN)):
            raise NonGenericDirection("crossing at a segment endpoint")
        ii, jj = np.nonzero(inside)
        ii = ii + start
        zp = az[ii] + ti * (bz[ii] - az[ii])
        zq = cz[jj] + ui * (ez[jj] - cz[jj])
        if np.any(np.abs(zp - zq) < tol_d):
            raise NonGenericDirection("strands too close along the view direction")
        over = zp > zq
        signs = np.sign(denom[inside])
        total += int(np.sum(np.where(over, signs, 0.0)))
    return total


def linking_by_projection(P, Q, direction=None, rng=None, max_tries: int = 100) -> int:
    """Linking number by signed crossings of a generic planar projection.

    Projects both curves along ``direction`` (re-randomized until generic,
    up to ``max_tries``), counts crossings where a P strand passes over a Q
    strand, and returns the signed total.  Independent of the direction for
    every generic choice.
    """
    pv = np.asarray(P.vertices if hasattr(P, "vertices") else P, dtype=np.float64)
    qv = np.asarray(Q.vertices if hasattr(Q, "vertices") else Q, dtype=np.float64)
    if direction is not None:
        return _project_crossings(pv, qv, np.asarray(direction, dtype=np.float64))
    if rng is None:
        rng = np.random.default_rng(0x5EED)
    last = None
    for _ in range(max_tries):
        d = rng.normal(size=3)
        if np.linalg.norm(d) < 1e-3:
            continue
        try:
            return _project_crossings(pv, qv, d)
        except NonGenericDirection as exc:
            last = exc
    raise NonGenericDirection(f"no generic direction in {max_tries} tries: {last}")


# ---------------------------------------------------------------------------
# adaptive 2D quadrature of the pair integrand (slowest, most independent)

def pair_angle_by_gauss_quadrature(p, p_next, q, q_next, tol: float = 1e-9) -> float:
    """Mutual angle of one segment pair by adaptive quadrature of the
    defining double integral (scipy ``dblquad``)."""
    from scipy.integrate import dblquad

    p = np.asarray(p, dtype=np.float64)
    dp = np.asarray(p_next, dtype=np.float64) - p
    q0 = np.asarray(q, dtype=np.float64)
    dq = np.asarray(q_next, dtype=np.float64) - q0
    cr = np.cross(dq, dp)
    base = q0 - p

    def integrand(s, t):
        r = base + s * dq - t * dp
        rr = float(r @ r)
        return float(r @ cr) / (rr * math.sqrt(rr))

    val, _ = dblquad(integrand, 0.0, 1.0, 0.0, 1.0, epsabs=tol, epsrel=tol)
    return 0.5 * val
