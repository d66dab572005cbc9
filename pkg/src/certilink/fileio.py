"""JSON file formats for curves and chains.

Curve files:  {"curves": [{"name": ..., "vertices": [[x, y, z], ...]}, ...]}
Chain files:  {"points": [[x, y, z], ...],
               "chains": [{"name": ..., "edges": [[i, j, w], ...]}, ...]}

Vertices are not repeated to close a curve (closure is implicit), edge
indices are 0-based, and numbers are serialized with full round-trip
precision so parse(write(x)) is value-identical.
"""

from __future__ import annotations

import json
import math
from typing import IO

import numpy as np

from .chains import Chain
from .linking import PolygonalCurve


def _check_finite(rows, what: str):
    for row in rows:
        for v in row:
            if not math.isfinite(v):
                raise ValueError(f"non-finite number in {what}")


def curves_to_json(curves: dict[str, PolygonalCurve]) -> str:
    doc = {
        "curves": [
            {"name": name, "vertices": [[float(x), float(y), float(z)] for x, y, z in c.vertices]}
            for name, c in curves.items()
        ]
    }
    return json.dumps(doc, indent=1) + "\n"


def curves_from_json(text: str) -> dict[str, PolygonalCurve]:
    doc = json.loads(text)
    out: dict[str, PolygonalCurve] = {}
    for entry in doc["curves"]:
        name = entry["name"]
        if name in out:
            raise ValueError(f"duplicate curve name {name!r}")
        verts = entry["vertices"]
        _check_finite(verts, f"curve {name!r}")
        out[name] = PolygonalCurve(verts)
    return out


def write_curves(fp: IO[str] | str, curves: dict[str, PolygonalCurve]) -> None:
    text = curves_to_json(curves)
    if isinstance(fp, str):
        with open(fp, "w") as fh:
            fh.write(text)
    else:
        fp.write(text)


def read_curves(fp: IO[str] | str) -> dict[str, PolygonalCurve]:
    if isinstance(fp, str):
        with open(fp) as fh:
            return curves_from_json(fh.read())
    return curves_from_json(fp.read())


def chains_to_json(points: np.ndarray, chains: dict[str, Chain]) -> str:
    doc = {
        "points": [[float(x), float(y), float(z)] for x, y, z in np.asarray(points, dtype=np.float64)],
        "chains": [
            {"name": name, "edges": [[e.i, e.j, e.w] for e in c.edges]}
            for name, c in chains.items()
        ],
    }
    return json.dumps(doc, indent=1) + "\n"


def chains_from_json(text: str) -> tuple[np.ndarray, dict[str, Chain]]:
    doc = json.loads(text)
    points = doc["points"]
    _check_finite(points, "chain points")
    pts = np.asarray(points, dtype=np.float64)
    out: dict[str, Chain] = {}
    for entry in doc["chains"]:
        name = entry["name"]
        if name in out:
            raise ValueError(f"duplicate chain name {name!r}")
        edges = []
        for i, j, w in entry["edges"]:
            if int(w) != w:
                raise ValueError(f"edge weight {w!r} in chain {name!r} is not an integer")
            edges.append((int(i), int(j), int(w)))
        out[name] = Chain(pts, edges)
    return pts, out


def write_chains(fp: IO[str] | str, points, chains: dict[str, Chain]) -> None:
    text = chains_to_json(points, chains)
    if isinstance(fp, str):
        with open(fp, "w") as fh:
            fh.write(text)
    else:
        fp.write(text)


def read_chains(fp: IO[str] | str) -> tuple[np.ndarray, dict[str, Chain]]:
    if isinstance(fp, str):
        with open(fp) as fh:
            return chains_from_json(fh.read())
    return chains_from_json(fp.read())
