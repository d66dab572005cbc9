"""Linking number and writhe with a running certified error budget.

Per-pair angle triples are folded into one accumulator triple [X, Y, ell];
the integer ell counts branch-cut crossings and, for disjoint closed curves,
ends up equal to the linking number while (X, Y) returns to the positive
x-axis up to the accumulated rounding error.  Alongside the fold, an upper
bound for that rounding error is accumulated in units of the unit roundoff,
kept as an exact integer part plus a fractional part so the bookkeeping
itself cannot drown in its own rounding.  The result is certified when the
bound stays below a quarter turn, which forces the rounded integer to be the
exact linking number.

Two evaluation strategies are available: the sequential reference fold (the
default), and a chunked reduction tree over the same per-pair triples for
``parallel=True``.  Both charge the budget one addition constant per pair.
"""

from __future__ import annotations

import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .errors import CurveTooSmall, DegenerateDirection, DegenerateSegments, ExponentRange
from .precision import ADD_ERR_U, FloatModel, get_model
from .segment import SegmentPairAngle, build_angle_batch
from .triple import AngleTriple, PointSign, _exceeds_unit, point_sign

_DEFAULT_CHUNK = 1 << 18

# Budget contributions in tree mode are padded by this relative amount so the
# vectorized pairwise summation can never under-report the sequential total.
_TREE_BUDGET_PAD = 1.0 + 2.0 ** -40


class PolygonalCurve:
    """Closed 3D polyline: segment i joins vertex i to vertex i+1 (mod N).

    Closure is implicit; the first vertex is not repeated at the end.
    Consecutive vertices (including the wrap pair) must be distinct.
    """

    __slots__ = ("vertices",)

    def __init__(self, vertices):
        v = np.array(vertices, dtype=np.float64)
        if v.ndim != 2 or v.shape[1] != 3:
            raise ValueError(f"expected an (N, 3) vertex array, got shape {v.shape}")
        if v.shape[0] < 3:
            raise CurveTooSmall(f"closed curve needs >= 3 vertices, got {v.shape[0]}")
        if not np.all(np.isfinite(v)):
            raise ValueError("curve vertices must be finite")
        if np.any(np.all(v == np.roll(v, -1, axis=0), axis=1)):
            raise DegenerateSegments("consecutive curve vertices coincide")
        v.setflags(write=False)
        self.vertices = v

    def __len__(self) -> int:
        return self.vertices.shape[0]

    def reversed(self) -> "PolygonalCurve":
        return PolygonalCurve(self.vertices[::-1])

    def scaled(self, factor: float) -> "PolygonalCurve":
        return PolygonalCurve(self.vertices * factor)


@dataclass
class ErrorBudget:
    """Accumulated error bound as (integer + fractional) multiple of u."""

    int_part: int = 0
    frac_part: float = 0.0

    def add(self, amount_u: float) -> None:
        """Fold one contribution (in units of u) into the (I, R) split."""
        e = amount_u + self.frac_part
        k = int(e)
        self.int_part += k
        self.frac_part = e - k

    @property
    def total_u(self) -> float:
        return self.int_part + self.frac_part


@dataclass(frozen=True)
class CertifiedValue:
    """A computed value, its error bound in units of u, and the verdict.

    ``certified`` means the integer budget stayed below floor(pi/(2u)), i.e.
    the accumulated angle error is provably below a quarter turn.  The extra
    fields expose the final accumulator angle atan2(Y, X) as ``residual``
    (for linking this is the leftover that exact arithmetic closes to zero;
    for writhe it is the fractional part of the value) and the number of
    segment pairs folded.
    """

    value: float
    err_bound_u: float
    certified: bool
    residual: float = 0.0
    pairs: int = 0
    precision: str = "double"


@dataclass
class Accumulator:
    """Reference implementation of one accumulation step.

    Holds the running direction (x, y), the crossing counter, the cached
    point sign of the direction, and the error budget.  `fold` performs one
    triple addition with inline crossing update, renormalization, and budget
    charge.  The bulk folds used by the curve routines are tuned copies of
    this step; tests pin them against this one.
    """

    x: float = 1.0
    y: float = 0.0
    ell: int = 0
    sign: PointSign = -1
    budget: ErrorBudget = field(default_factory=ErrorBudget)

    def fold(self, pair: SegmentPairAngle) -> None:
        self.fold_triple(pair.triple, pair.err_bound)

    def fold_triple(self, t: AngleTriple, err_u: float) -> None:
        xp = self.x * t.x - self.y * t.y
        yp = self.x * t.y + self.y * t.x
        if xp == 0.0 and yp == 0.0:
            raise DegenerateDirection("accumulator direction rounded to (0, 0)")
        self.ell += t.sigma
        s = point_sign(t.x, t.y)
        sp = point_sign(xp, yp)
        if self.sign * s > 0 and self.sign * sp < 0:
            self.ell -= sp
        self.x, self.y = _renormalize(xp, yp)
        self.sign = sp
        self.budget.add(err_u + ADD_ERR_U)

    def residual_angle(self) -> float:
        return math.atan2(self.y, self.x)

    def as_triple(self) -> AngleTriple:
        return AngleTriple(self.x, self.y, self.ell)


# boundary windows around radius^2 == 1 inside which the exact test runs
_R2_HI64 = 1.0 + 8.0 * 2.0 ** -53
_R2_LO64 = 1.0 - 8.0 * 2.0 ** -53


def _renormalize(xp: float, yp: float) -> tuple[float, float]:
    """Scale (xp, yp) by one power of two into radius (1/2, 1], exactly."""
    if xp == 0.0:
        h = math.frexp(yp)[1]
    elif yp == 0.0:
        h = math.frexp(xp)[1]
    else:
        ex = math.frexp(xp)[1]
        ey = math.frexp(yp)[1]
        h = ex if ex > ey else ey
    x = math.ldexp(xp, -h)
    y = math.ldexp(yp, -h)
    if (x == 0.0 and xp != 0.0) or (y == 0.0 and yp != 0.0):
        raise ExponentRange("renormalization underflowed a direction component")
    r2 = x * x + y * y
    if r2 > _R2_HI64 or (r2 > _R2_LO64 and _exceeds_unit(x, y)):
        x *= 0.5
        y *= 0.5
    elif y == 0.0:
        if x == 0.5 or x == -0.5:
            x *= 2.0
    elif x == 0.0:
        if y == 0.5 or y == -0.5:
            y *= 2.0
    return x, y


def _fold_block_f64(xs, ys, sigmas, signs, errs, state, track_budget=True):
    """Sequential fold of one block of pair triples, double precision.

    ``state`` is (X, Y, ell, S, I, R); a new state tuple is returned.  This
    is the hot loop: it inlines `Accumulator.fold_triple` over plain floats.
    """
    X, Y, ell, S, I, R = state
    frexp = math.frexp
    ldexp = math.ldexp
    add_err = ADD_ERR_U
    for x, y, sig, s, e in zip(xs, ys, sigmas, signs, errs):
        xp = X * x - Y * y
        yp = X * y + Y * x
        ell += sig
        if yp > 0.0:
            sp = 1
        elif yp < 0.0:
            sp = -1
        elif xp < 0.0:
            sp = 1
        elif xp > 0.0:
            sp = -1
        else:
            raise DegenerateDirection("accumulator direction rounded to (0, 0)")
        if S * s > 0 and S * sp < 0:
            ell -= sp
        if xp == 0.0:
            h = frexp(yp)[1]
        elif yp == 0.0:
            h = frexp(xp)[1]
        else:
            ex = frexp(xp)[1]
            ey = frexp(yp)[1]
            h = ex if ex > ey else ey
        X = ldexp(xp, -h)
        Y = ldexp(yp, -h)
        if (X == 0.0 and xp != 0.0) or (Y == 0.0 and yp != 0.0):
            raise ExponentRange("renormalization underflowed a direction component")
        r2 = X * X + Y * Y
        if r2 > _R2_HI64 or (r2 > _R2_LO64 and _exceeds_unit(X, Y)):
            X *= 0.5
            Y *= 0.5
        elif Y == 0.0:
            if X == 0.5 or X == -0.5:
                X *= 2.0
        elif X == 0.0:
            if Y == 0.5 or Y == -0.5:
                Y *= 2.0
        S = sp
        if track_budget:
            E = e + add_err + R
            k = int(E)
            I += k
            R = E - k
    return X, Y, ell, S, I, R


def _fold_block_f32(xs, ys, sigmas, signs, errs, state, track_budget=True):
    """Sequential fold in the single-precision model (np.float32 scalars).

    Products of float32 values are exact in double, so rounding each
    elementary operation back to float32 reproduces single-precision
    arithmetic operation for operation.  The budget itself is tracked in
    double; it only needs to never under-report.
    """
    f32 = np.float32
    hi = float(f32(1.0) + f32(8.0) * f32(2.0 ** -24))
    lo = float(f32(1.0) - f32(8.0) * f32(2.0 ** -24))
    X, Y, ell, S, I, R = state
    frexp = math.frexp
    ldexp = math.ldexp
    add_err = ADD_ERR_U
    for x, y, sig, s, e in zip(xs, ys, sigmas, signs, errs):
        xp = float(f32(float(f32(X * x)) - float(f32(Y * y))))
        yp = float(f32(float(f32(X * y)) + float(f32(Y * x))))
        ell += sig
        if yp > 0.0:
            sp = 1
        elif yp < 0.0:
            sp = -1
        elif xp < 0.0:
            sp = 1
        elif xp > 0.0:
            sp = -1
        else:
            raise DegenerateDirection("accumulator direction rounded to (0, 0)")
        if S * s > 0 and S * sp < 0:
            ell -= sp
        if xp == 0.0:
            h = frexp(yp)[1]
        elif yp == 0.0:
            h = frexp(xp)[1]
        else:
            ex = frexp(xp)[1]
            ey = frexp(yp)[1]
            h = ex if ex > ey else ey
        X = ldexp(xp, -h)
        Y = ldexp(yp, -h)
        if (X == 0.0 and xp != 0.0) or (Y == 0.0 and yp != 0.0):
            raise ExponentRange("renormalization underflowed a direction component")
        r2 = float(f32(float(f32(X * X)) + float(f32(Y * Y))))
        if r2 > hi or (r2 > lo and _exceeds_unit(X, Y)):
            X *= 0.5
            Y *= 0.5
        elif Y == 0.0:
            if X == 0.5 or X == -0.5:
                X *= 2.0
        elif X == 0.0:
            if Y == 0.5 or Y == -0.5:
                Y *= 2.0
        S = sp
        if track_budget:
            E = e + add_err + R
            k = int(E)
            I += k
            R = E - k
    return X, Y, ell, S, I, R


def _signs_arr(x, y):
    return np.where((y > 0.0) | ((y == 0.0) & (x < 0.0)), 1, -1).astype(np.int64)


def _renormalize_arr(x, y, dtype):
    """Vectorized common-power-of-two renormalization into (1/2, 1]."""
    _, ex = np.frexp(x)
    _, ey = np.frexp(y)
    h = np.where(x == 0.0, ey, np.where(y == 0.0, ex, np.maximum(ex, ey)))
    nx = np.ldexp(x, -h)
    ny = np.ldexp(y, -h)
    if np.any(((nx == 0.0) & (x != 0.0)) | ((ny == 0.0) & (y != 0.0))):
        raise ExponentRange("renormalization underflowed a direction component")
    u = 2.0 ** -24 if dtype == np.float32 else 2.0 ** -53
    r2 = nx * nx + ny * ny
    halve = r2 > dtype(1.0 + 8.0 * u)
    near = (~halve) & (r2 > dtype(1.0 - 8.0 * u))
    if np.any(near):
        for i in np.nonzero(near)[0]:
            if _exceeds_unit(float(nx[i]), float(ny[i])):
                halve[i] = True
    np.multiply(nx, dtype(0.5), out=nx, where=halve)
    np.multiply(ny, dtype(0.5), out=ny, where=halve)
    double_ = ((ny == 0.0) & (np.abs(nx) == 0.5)) | ((nx == 0.0) & (np.abs(ny) == 0.5))
    np.multiply(nx, dtype(2.0), out=nx, where=double_)
    np.multiply(ny, dtype(2.0), out=ny, where=double_)
    return nx, ny


def _tree_fold(x, y, sigma, dtype):
    """Reduce per-pair triples pairwise until one [X, Y, sigma] remains."""
    x = np.array(x, dtype=dtype)
    y = np.array(y, dtype=dtype)
    sigma = np.array(sigma, dtype=np.int64)
    while x.shape[0] > 1:
        if x.shape[0] % 2:
            x = np.append(x, dtype(1.0))
            y = np.append(y, dtype(0.0))
            sigma = np.append(sigma, 0)
        xa, xb = x[0::2], x[1::2]
        ya, yb = y[0::2], y[1::2]
        xs = xa * xb - ya * yb
        ys = xa * yb + ya * xb
        if np.any((xs == 0.0) & (ys == 0.0)):
            raise DegenerateDirection("tree reduction direction rounded to (0, 0)")
        sa = _signs_arr(xa, ya)
        sb = _signs_arr(xb, yb)
        ss = _signs_arr(xs, ys)
        cross = np.where((sa == sb) & (sa != ss), sa, 0)
        sigma = sigma[0::2] + sigma[1::2] + cross
        x, y = _renormalize_arr(xs, ys, dtype)
    return float(x[0]), float(y[0]), int(sigma[0])


def _combine_states(parts, dtype):
    """Fold per-chunk [X, Y, sigma] results, in chunk order, into one triple."""
    x = np.array([p[0] for p in parts], dtype=dtype)
    y = np.array([p[1] for p in parts], dtype=dtype)
    sigma = np.array([p[2] for p in parts], dtype=np.int64)
    # sequential pairing preserves chunk order; reuse the tree on the few parts
    return _tree_fold(x, y, sigma, dtype)


def _pair_chunks(n_pairs: int, chunk: int):
    for start in range(0, n_pairs, chunk):
        yield start, min(start + chunk, n_pairs)


class _PairSource:
    """Enumerates the segment-pair endpoints for a curve pair or self pairs."""

    def __init__(self, pv: np.ndarray, qv: np.ndarray | None):
        self.pv = pv
        self.qv = qv
        n = pv.shape[0]
        if qv is None:
            # unordered non-adjacent self pairs; the wrap-adjacent (0, n-1)
            # pair shares a vertex and is excluded like the others
            i, j = np.triu_indices(n, k=2)
            keep = ~((i == 0) & (j == n - 1))
            self.i = i[keep]
            self.j = j[keep]
            self.count = self.i.shape[0]
        else:
            self.count = n * qv.shape[0]

    def endpoints(self, start: int, stop: int):
        idx = np.arange(start, stop)
        if self.qv is None:
            i = self.i[idx]
            j = self.j[idx]
            pv = self.pv
            n = pv.shape[0]
            return pv[i], pv[(i + 1) % n], pv[j], pv[(j + 1) % n]
        pv, qv = self.pv, self.qv
        m = qv.shape[0]
        i, j = np.divmod(idx, m)
        n = pv.shape[0]
        return pv[i], pv[(i + 1) % n], qv[j], qv[(j + 1) % m]


def _accumulate_source(source: _PairSource, dtype, parallel: bool,
                       track_budget: bool, chunk: int):
    """Run the fold (sequential or tree) over all pairs of a source."""
    budget = ErrorBudget()
    if not parallel:
        state = (1.0, 0.0, 0, -1, 0, 0.0)
        fold = _fold_block_f32 if dtype == np.float32 else _fold_block_f64
        for start, stop in _pair_chunks(source.count, chunk):
            p, pn, q, qn = source.endpoints(start, stop)
            x, y, sigma, sign, err = build_angle_batch(p, pn, q, qn, dtype=dtype)
            state = fold(x.tolist(), y.tolist(), sigma.tolist(), sign.tolist(),
                         err.tolist(), state, track_budget)
        X, Y, ell, _, I, R = state
        budget.int_part = I
        budget.frac_part = R
        return X, Y, ell, budget

    spans = list(_pair_chunks(source.count, chunk))

    def _one(span):
        start, stop = span
        p, pn, q, qn = source.endpoints(start, stop)
        x, y, sigma, sign, err = build_angle_batch(p, pn, q, qn, dtype=dtype)
        part = _tree_fold(x, y, sigma, dtype)
        e_sum = (float(np.sum(err)) + err.shape[0] * ADD_ERR_U) * _TREE_BUDGET_PAD
        return part, e_sum

    workers = int(os.environ.get("CERTILINK_THREADS", "0")) or (os.cpu_count() or 1)
    if len(spans) == 1 or workers == 1:
        results = [_one(s) for s in spans]
    else:
        with ThreadPoolExecutor(max_workers=workers) as pool:
            results = list(pool.map(_one, spans))
    parts = [r[0] for r in results]
    X, Y, ell = _combine_states(parts, dtype)
    if track_budget:
        for _, e_sum in results:
            budget.add(e_sum)
    return X, Y, ell, budget


def _finish(X, Y, ell, budget: ErrorBudget, model: FloatModel, pairs: int,
            mode: str, writhe_result: bool = False) -> CertifiedValue:
    residual = math.atan2(Y, X)
    if mode == "exact_style":
        bound = math.nan
        certified = False
    else:
        certified = budget.int_part < model.max_int_budget
        bound = budget.total_u
    if writhe_result:
        value = 2.0 * (ell + residual / (2.0 * math.pi))
        bound = 2.0 * bound
    else:
        value = ell
    return CertifiedValue(value=value, err_bound_u=bound, certified=certified,
                          residual=residual, pairs=pairs, precision=model.name)


def linking_number(P: PolygonalCurve, Q: PolygonalCurve, mode: str = "certified",
                   precision: str = "double", parallel: bool = False,
                   chunk: int = _DEFAULT_CHUNK) -> CertifiedValue:
    """Certified linking number of two disjoint closed polygonal curves.

    ``mode="certified"`` (default) tracks the running error budget and
    reports it; ``mode="exact_style"`` runs the same fold without error
    tracking and reports a NaN bound.  ``precision="single"`` quantizes the
    input to float32 and computes in the single-precision model (u = 2**-24),
    which makes certification loss observable at desk scale.
    """
    if mode not in ("certified", "exact_style"):
        raise ValueError(f"unknown mode {mode!r}")
    model = get_model(precision)
    if len(P) < 3 or len(Q) < 3:
        raise CurveTooSmall("both curves need >= 3 vertices")
    dtype = np.float32 if model.name == "single" else np.float64
    source = _PairSource(P.vertices.astype(dtype), Q.vertices.astype(dtype))
    track = mode == "certified"
    X, Y, ell, budget = _accumulate_source(source, dtype, parallel, track, chunk)
    return _finish(X, Y, ell, budget, model, source.count, mode)


def writhe(P: PolygonalCurve, precision: str = "double", parallel: bool = False,
           chunk: int = _DEFAULT_CHUNK) -> CertifiedValue:
    """Writhe of one closed polygonal curve, with certified error bound.

    Vertex-sharing segment pairs contribute exactly zero and are skipped;
    each remaining unordered pair stands for two ordered pairs in the
    underlying double sum, hence the factor two on both the value and the
    budget.  This is the one computation where an atan2 is evaluated (once,
    on the final accumulator).
    """
    model = get_model(precision)
    dtype = np.float32 if model.name == "single" else np.float64
    source = _PairSource(P.vertices.astype(dtype), None)
    X, Y, ell, budget = _accumulate_source(source, dtype, parallel, True, chunk)
    return _finish(X, Y, ell, budget, model, source.count, "certified", writhe_result=True)
