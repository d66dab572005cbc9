"""Test-link generators: canonical links and random closed curves.

All generators are deterministic for fixed parameters (the random one for a
fixed seed), so generated files are byte-reproducible.
"""

from __future__ import annotations

import numpy as np

from .linking import PolygonalCurve

_TAU = 2.0 * np.pi


def circle(segments: int, radius: float = 1.0, center=(0.0, 0.0, 0.0),
           normal: str = "z", clockwise: bool = False) -> PolygonalCurve:
    """Regular polygon inscribed in a circle; ``normal`` picks the axis."""
    t = _TAU * np.arange(segments) / segments
    if clockwise:
        t = -t
    c, s = radius * np.cos(t), radius * np.sin(t)
    zero = np.zeros_like(t)
    if normal == "z":
        pts = np.stack([c, s, zero], axis=1)
    elif normal == "y":
        pts = np.stack([c, zero, s], axis=1)
    elif normal == "x":
        pts = np.stack([zero, c, s], axis=1)
    else:
        raise ValueError(f"unknown normal {normal!r}")
    return PolygonalCurve(pts + np.asarray(center, dtype=np.float64))


def hopf(segments: int = 64) -> tuple[PolygonalCurve, PolygonalCurve]:
    """Hopf link: unit circle in the xy-plane at the origin, and a unit
    circle in the xz-plane centered at (1, 0, 0).

    Orientations are chosen so the linking number is +1 (pinned once against
    the signed-crossing oracle).
    """
    a = circle(segments, normal="z")
    b = circle(segments, normal="y", center=(1.0, 0.0, 0.0), clockwise=True)
    return a, b


def unlink(segments: int = 32) -> tuple[PolygonalCurve, PolygonalCurve]:
    """Two far-apart unit circles; linking number 0."""
    a = circle(segments, normal="z")
    b = circle(segments, normal="z", center=(4.0, 0.0, 0.0))
    return a, b


def torus_link(k: int, segments: int = 256) -> tuple[PolygonalCurve, PolygonalCurve]:
    """The two components of the T(2, 2k) torus link on the torus R=2, r=1.

    Each component is a (1, k) curve; the pair links k times.  Orientations
    are chosen so the linking number is +k.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    t = _TAU * np.arange(segments) / segments

    def component(phase: float) -> PolygonalCurve:
        w = k * t + phase
        rad = 2.0 + np.cos(w)
        pts = np.stack([rad * np.cos(t), rad * np.sin(t), -np.sin(w)], axis=1)
        return PolygonalCurve(pts)

    return component(0.0), component(np.pi)


def trefoil(segments: int = 12) -> PolygonalCurve:
    """Polygonal trefoil: the (2, 3) torus knot sampled at ``segments`` points."""
    t = _TAU * np.arange(segments) / segments
    rad = 2.0 + np.cos(3.0 * t)
    pts = np.stack([rad * np.cos(2.0 * t), rad * np.sin(2.0 * t), -np.sin(3.0 * t)], axis=1)
    return PolygonalCurve(pts)


def mirror(curve: PolygonalCurve) -> PolygonalCurve:
    """Reflection through the xy-plane (negates writhe)."""
    v = curve.vertices.copy()
    v[:, 2] = -v[:, 2]
    return PolygonalCurve(v)


def _trig_curve(rng: np.random.Generator, segments: int, degree: int) -> PolygonalCurve:
    t = _TAU * np.arange(segments) / segments
    pts = np.zeros((segments, 3))
    for axis in range(3):
        coeff_c = rng.normal(size=degree + 1)
        coeff_s = rng.normal(size=degree + 1)
        v = np.zeros_like(t)
        for d in range(1, degree + 1):
            v += (coeff_c[d] * np.cos(d * t) + coeff_s[d] * np.sin(d * t)) / d
        pts[:, axis] = v + 0.3 * coeff_c[0]
    return PolygonalCurve(pts)


def min_segment_distance(P: PolygonalCurve, Q: PolygonalCurve) -> float:
    """Minimum distance between any segment of P and any segment of Q."""
    a0 = P.vertices
    a1 = np.roll(a0, -1, axis=0)
    b0 = Q.vertices
    b1 = np.roll(b0, -1, axis=0)

    d1 = (a1 - a0)[:, None, :]
    d2 = (b1 - b0)[None, :, :]
    r = a0[:, None, :] - b0[None, :, :]
    a = np.sum(d1 * d1, axis=2)
    e = np.sum(d2 * d2, axis=2)
    f = np.sum(d2 * r, axis=2)
    c = np.sum(d1 * r, axis=2)
    b = np.sum(d1 * d2, axis=2)
    denom = a * e - b * b
    with np.errstate(divide="ignore", invalid="ignore"):
        s = np.where(denom > 0.0, np.clip((b * f - c * e) / denom, 0.0, 1.0), 0.0)
        t = (b * s + f) / e
    t_cl = np.clip(t, 0.0, 1.0)
    # re-clamp s where t was clamped
    s = np.clip((b * t_cl - c) / np.where(a > 0.0, a, 1.0), 0.0, 1.0)
    closest = r + s[:, :, None] * d1 - t_cl[:, :, None] * d2
    return float(np.sqrt(np.min(np.sum(closest * closest, axis=2))))


def random_link(seed: int, segments: int = 32, degree: int = 5,
                min_gap: float = 0.05, max_tries: int = 200
                ) -> tuple[PolygonalCurve, PolygonalCurve]:
    """Two disjoint random closed curves from trigonometric polynomials.

    Curves are rejected and redrawn until their segments keep a gap of at
    least ``min_gap`` (relative to unit scale), so downstream computations
    meet the disjointness precondition.  Deterministic per seed.
    """
    rng = np.random.default_rng(seed)
    for _ in range(max_tries):
        a = _trig_curve(rng, segments, degree)
        b = _trig_curve(rng, segments, degree)
        shift = rng.normal(scale=0.5, size=3)
        b = PolygonalCurve(b.vertices + shift)
        if min_segment_distance(a, b) > min_gap:
            return a, b
    raise RuntimeError(f"no disjoint random link found in {max_tries} tries (seed {seed})")
