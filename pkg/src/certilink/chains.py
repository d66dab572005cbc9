"""Integer-weighted edge chains: boundary operator and weighted linking.

A chain is a formal integer combination of directed segments between points
of one point set.  A chain with zero boundary is a generalized closed loop;
the linking number of two such loops folds one angle triple per edge pair,
scaled by the product of the edge weights.  Bilinearity in the weights comes
for free from the scalar multiple of the triple algebra.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import NotClosed
from .linking import Accumulator, CertifiedValue, PolygonalCurve, _finish
from .precision import ADD_ERR_U, get_model
from .segment import build_angle
from .triple import scalar_mul

#: 0-chain: integer coefficients on point indices (zero coefficients omitted).
ZeroChain = dict


@dataclass(frozen=True)
class Edge:
    i: int
    j: int
    w: int


@dataclass
class Chain:
    """Points plus integer-weighted directed edges (i -> j with weight w).

    Zero-weight edges are dropped at construction; they would contribute the
    identity angle anyway.  Edges must join distinct, valid point indices.
    """

    points: np.ndarray
    edges: list = field(default_factory=list)

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=np.float64)
        if pts.ndim != 2 or pts.shape[1] != 3:
            raise ValueError(f"expected an (N, 3) point array, got shape {pts.shape}")
        self.points = pts
        n = pts.shape[0]
        cleaned = []
        for e in self.edges:
            i, j, w = (e.i, e.j, e.w) if isinstance(e, Edge) else e
            i, j, w = int(i), int(j), int(w)
            if w == 0:
                continue
            if i == j:
                raise ValueError(f"edge ({i}, {j}) joins a point to itself")
            if not (0 <= i < n and 0 <= j < n):
                raise ValueError(f"edge ({i}, {j}) indexes outside {n} points")
            cleaned.append(Edge(i, j, w))
        self.edges = cleaned

    def scaled_weights(self, factor: int) -> "Chain":
        return Chain(self.points, [(e.i, e.j, e.w * factor) for e in self.edges])


def boundary(c: Chain) -> ZeroChain:
    """Boundary 0-chain: each edge (i, j, w) contributes +w at i and -w at j."""
    coeff: dict[int, int] = {}
    for e in c.edges:
        coeff[e.i] = coeff.get(e.i, 0) + e.w
        coeff[e.j] = coeff.get(e.j, 0) - e.w
    return {k: v for k, v in coeff.items() if v != 0}


def is_closed(c: Chain) -> bool:
    return not boundary(c)


def chain_from_curve(curve: PolygonalCurve, weight: int = 1) -> Chain:
    """Weight-``weight`` chain tracing the curve's segments in order."""
    n = len(curve)
    return Chain(curve.vertices, [(i, (i + 1) % n, weight) for i in range(n)])


def chain_linking(c1: Chain, c2: Chain) -> CertifiedValue:
    """Weighted linking number of two generalized closed loops.

    Each edge pair's triple is built once and then scaled by the combined
    integer weight before folding, so the expensive geometric step runs once
    per pair.  A combined weight w charges the budget |w| copies of the pair
    bound plus |w| - 1 extra addition constants for the scaling, on top of
    the usual one constant for the fold itself.
    """
    if not is_closed(c1):
        raise NotClosed("first chain has nonzero boundary")
    if not is_closed(c2):
        raise NotClosed("second chain has nonzero boundary")
    model = get_model("double")
    acc = Accumulator()
    pairs = 0
    p1, p2 = c1.points, c2.points
    for e1 in c1.edges:
        a, b = p1[e1.i], p1[e1.j]
        for e2 in c2.edges:
            pair = build_angle(a, b, p2[e2.i], p2[e2.j])
            w = e1.w * e2.w
            t = scalar_mul(w, pair.triple)
            aw = abs(w)
            eff_err = aw * pair.err_bound + (aw - 1) * ADD_ERR_U
            acc.fold_triple(t, eff_err)
            pairs += 1
    return _finish(acc.x, acc.y, acc.ell, acc.budget, model, pairs, "certified")
