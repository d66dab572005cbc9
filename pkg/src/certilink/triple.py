"""Angle arithmetic on [x, y, sigma] triples.

An angle is stored as a plane direction (x, y) plus an integer count of full
turns: the represented value is ``atan2(y, x) + 2*pi*sigma``.  Sums of angles
then become complex-style products of the direction parts, with the turn
counter bumped whenever the accumulated direction crosses the negative x-axis.
No trigonometric function is evaluated anywhere in this module; the only
rounding happens in the four multiplications and two additions of `add`.

Directions are kept in the annulus 1/2 < sqrt(x^2 + y^2) <= 1 by `normalize`,
which rescales both components by one common power of two.  Power-of-two
scaling is exact in binary floating point, so normalization never moves the
represented angle.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateDirection, ExponentRange

TWO_PI = 2.0 * math.pi

#: Sign of a plane point: +1 for the closed upper half plane split along the
#: negative x-axis, -1 for its complement (see `point_sign`).
PointSign = int


def point_sign(x: float, y: float) -> PointSign:
    """Classify a nonzero plane point into the half planes Q+ / Q-.

    Q+ is y > 0 together with the negative x-axis; Q- is y < 0 together with
    the positive x-axis.  The two half planes partition the punctured plane,
    and a sign change of the accumulated direction is what detects a crossing
    of the +/- pi branch cut.
    """
    if y > 0.0:
        return 1
    if y < 0.0:
        return -1
    if x < 0.0:
        return 1
    if x > 0.0:
        return -1
    raise DegenerateDirection("point sign undefined at the origin")


def cross_detect(s: PointSign, s_prime: PointSign, s_dprime: PointSign) -> int:
    """Ternary branch-cut crossing test for one direction product.

    Returns ``s`` when the two operand signs agree and the product's sign
    flipped (+1 counter-clockwise crossing, -1 clockwise), else 0.
    """
    if s * s_prime > 0 and s * s_dprime < 0:
        return s
    return 0


@dataclass(frozen=True)
class AngleTriple:
    """An angle ``atan2(y, x) + 2*pi*sigma`` as a direction plus turn count."""

    x: float
    y: float
    sigma: int = 0

    def __post_init__(self):
        # +0.0 canonically for zero components so the atan2 branch at pi is
        # taken consistently (Definition range is (-pi, pi], not [-pi, pi)).
        object.__setattr__(self, "x", self.x + 0.0)
        object.__setattr__(self, "y", self.y + 0.0)
        object.__setattr__(self, "sigma", int(self.sigma))
        if not (math.isfinite(self.x) and math.isfinite(self.y)):
            raise ValueError(f"non-finite direction ({self.x}, {self.y})")
        if self.x == 0.0 and self.y == 0.0:
            raise DegenerateDirection("triple direction must not be (0, 0)")

    @property
    def sign(self) -> PointSign:
        return point_sign(self.x, self.y)

    def radius(self) -> float:
        return math.hypot(self.x, self.y)


IDENTITY = AngleTriple(1.0, 0.0, 0)


def angle_of(t: AngleTriple) -> float:
    """Angle represented by ``t``, in radians (double evaluation of atan2)."""
    return math.atan2(t.y, t.x) + TWO_PI * t.sigma


def _exceeds_unit(x: float, y: float) -> bool:
    """Exact test of x**2 + y**2 > 1 via integer mantissa arithmetic."""
    xn, xd = x.as_integer_ratio()
    yn, yd = y.as_integer_ratio()
    xd2 = xd * xd
    yd2 = yd * yd
    return xn * xn * yd2 + yn * yn * xd2 > xd2 * yd2


# fl(x*x + y*y) carries < 3u relative error, so only results this close to
# the boundary need the exact comparison.
_BOUNDARY_WINDOW = 1e-15


def normalize(t: AngleTriple) -> AngleTriple:
    """Rescale the direction by a common power of two into 1/2 < r <= 1.

    The scaling is exact (mantissas are untouched), preserves sigma, and
    preserves the direction of (x, y) exactly.  Raises `ExponentRange` when
    the required scaling would push a component out of the representable
    range, which is signalled rather than silently flushed to zero.
    """
    x, y = t.x, t.y
    _, ex = math.frexp(x)
    _, ey = math.frexp(y)
    if x == 0.0:
        h = ey
    elif y == 0.0:
        h = ex
    else:
        h = ex if ex > ey else ey
    nx = math.ldexp(x, -h)
    ny = math.ldexp(y, -h)
    # Exactness check: scaling down by the dominant exponent can denormalize
    # a vastly smaller component.
    if math.ldexp(nx, h) != x or math.ldexp(ny, h) != y:
        raise ExponentRange(f"exact power-of-two scaling of ({x}, {y}) impossible")

    # Now max(|nx|, |ny|) is in [1/2, 1), hence r in [1/2, sqrt(2)).
    r2 = nx * nx + ny * ny
    if r2 > 1.0 + _BOUNDARY_WINDOW or (r2 > 1.0 - _BOUNDARY_WINDOW and _exceeds_unit(nx, ny)):
        nx *= 0.5
        ny *= 0.5
    elif (ny == 0.0 and abs(nx) == 0.5) or (nx == 0.0 and abs(ny) == 0.5):
        # radius exactly 1/2 happens only on the axes
        nx *= 2.0
        ny *= 2.0
    return AngleTriple(nx, ny, t.sigma)


def add(t: AngleTriple, t_prime: AngleTriple) -> AngleTriple:
    """Angle sum of two triples, normalized.

    The direction product is the only rounded step; the turn counter update
    is exact because it only compares signs.  A direction product that rounds
    to (0, 0) — possible only for nearly opposite angles — is a hard error:
    the caller's error accounting is already invalid in that situation.
    """
    a = normalize(t)
    b = normalize(t_prime)
    xs = a.x * b.x - a.y * b.y
    ys = a.x * b.y + a.y * b.x
    if xs == 0.0 and ys == 0.0:
        raise DegenerateDirection("angle sum direction rounded to (0, 0)")
    sig = t.sigma + t_prime.sigma + cross_detect(a.sign, b.sign, point_sign(xs, ys))
    return normalize(AngleTriple(xs, ys, sig))


def negate(t: AngleTriple) -> AngleTriple:
    """Principal-value negation [x, -y, -sigma].

    Exactly inverts the angle except when it is exactly pi (the atan2 branch
    point), where the direction (x, 0) is its own mirror image and the
    "negation" represents +pi rather than -pi.
    """
    return AngleTriple(t.x, -t.y, -t.sigma)


def sub(t: AngleTriple, t_prime: AngleTriple) -> AngleTriple:
    """Angle difference, defined as ``add(t, negate(t_prime))``."""
    return add(t, negate(t_prime))


def scalar_mul(w: int, t: AngleTriple) -> AngleTriple:
    """Integer multiple of an angle by repeated addition.

    Left-to-right folding (not repeated squaring) keeps the error accounting
    simple: |w| - 1 additions, each within the single-addition bound.
    """
    if w == 0:
        return IDENTITY
    base = normalize(t) if w > 0 else normalize(negate(t))
    acc = base
    for _ in range(abs(w) - 1):
        acc = add(acc, base)
    return acc
