"""Command-line interface.

Exit codes: 0 when the reported result is certified, 2 when it is not, and
1 on any error (bad input, touching curves, malformed files, ...), so
pipelines can gate on certification.
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
import time

import mpmath

from . import generators
from .chains import chain_linking
from .errors import CertilinkError
from .fileio import read_chains, read_curves, write_curves
from .linking import linking_number, writhe
from .oracle import linking_by_projection, linking_by_quadrature
from .precision import get_model


def _pick_curve(curves, name, what):
    if name is None:
        raise CertilinkError(f"missing --{what} (file has {len(curves)} curves)")
    try:
        return curves[name]
    except KeyError:
        raise CertilinkError(f"no curve named {name!r} in file") from None


def _report_exit(certified: bool) -> int:
    return 0 if certified else 2


def _cmd_link(args) -> int:
    curves = read_curves(args.file)
    a = _pick_curve(curves, args.a, "a")
    b = _pick_curve(curves, args.b, "b")
    t0 = time.perf_counter()
    res = linking_number(a, b, precision=args.precision, parallel=args.parallel)
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    if args.json:
        print(json.dumps({
            "linking_number": int(res.value),
            "error_bound_u": res.err_bound_u,
            "certified": res.certified,
            "pairs": res.pairs,
            "elapsed_ms": elapsed_ms,
        }))
    else:
        word = "certified" if res.certified else "UNCERTIFIED"
        print(f"L = {int(res.value)} ({word}, bound {res.err_bound_u:.3g} u)")
    return _report_exit(res.certified)


def _cmd_writhe(args) -> int:
    curves = read_curves(args.file)
    if args.curve is None and len(curves) == 1:
        (curve,) = curves.values()
    else:
        curve = _pick_curve(curves, args.curve, "curve")
    t0 = time.perf_counter()
    res = writhe(curve, precision=args.precision, parallel=args.parallel)
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    abs_bound = res.err_bound_u * get_model(args.precision).u
    if args.json:
        print(json.dumps({
            "writhe": res.value,
            "error_bound_u": res.err_bound_u,
            "certified": res.certified,
            "pairs": res.pairs,
            "elapsed_ms": elapsed_ms,
        }))
    else:
        word = "certified" if res.certified else "UNCERTIFIED"
        print(f"W = {res.value:.15g} ± {abs_bound:.3g} ({word}, bound {res.err_bound_u:.3g} u)")
    return _report_exit(res.certified)


def _cmd_chain_link(args) -> int:
    _, chains = read_chains(args.file)
    try:
        c1 = chains[args.a]
        c2 = chains[args.b]
    except KeyError as exc:
        raise CertilinkError(f"no chain named {exc.args[0]!r} in file") from None
    t0 = time.perf_counter()
    res = chain_linking(c1, c2)
    elapsed_ms = (time.perf_counter() - t0) * 1e3
    if args.json:
        print(json.dumps({
            "linking_number": int(res.value),
            "error_bound_u": res.err_bound_u,
            "certified": res.certified,
            "pairs": res.pairs,
            "elapsed_ms": elapsed_ms,
        }))
    else:
        word = "certified" if res.certified else "UNCERTIFIED"
        print(f"L = {int(res.value)} ({word}, bound {res.err_bound_u:.3g} u)")
    return _report_exit(res.certified)


def _generate(kind: str, segments: int, k: int, seed: int):
    if kind == "hopf":
        a, b = generators.hopf(segments)
        return {"a": a, "b": b}
    if kind == "unlink":
        a, b = generators.unlink(segments)
        return {"a": a, "b": b}
    if kind == "torus":
        a, b = generators.torus_link(k, segments)
        return {"a": a, "b": b}
    if kind == "trefoil":
        return {"trefoil": generators.trefoil(segments)}
    if kind == "random":
        a, b = generators.random_link(seed, segments)
        return {"a": a, "b": b}
    raise CertilinkError(f"unknown generator {kind!r}")


def _cmd_gen(args) -> int:
    curves = _generate(args.kind, args.segments, args.k, args.seed)
    if args.output == "-":
        write_curves(sys.stdout, curves)
    else:
        write_curves(args.output, curves)
    return 0


def _cmd_verify(args) -> int:
    curves = read_curves(args.file)
    a = _pick_curve(curves, args.a, "a")
    b = _pick_curve(curves, args.b, "b")
    res = linking_number(a, b, precision=args.precision, parallel=args.parallel)
    proj = linking_by_projection(a, b)
    quad = linking_by_quadrature(a, b)
    quad_int = int(mpmath.nint(quad))
    print(f"certified:  L = {int(res.value)} "
          f"({'certified' if res.certified else 'UNCERTIFIED'}, bound {res.err_bound_u:.3g} u)")
    print(f"projection: L = {proj}")
    print(f"quadrature: L = {quad_int} (raw {mpmath.nstr(quad, 12)})")
    agree = int(res.value) == proj == quad_int
    print("AGREE" if agree else "DISAGREE")
    if not agree:
        return 1
    return _report_exit(res.certified)


def _cmd_bench(args) -> int:
    rows = []
    n = args.min_segments
    while n <= args.max_segments:
        curves = _generate(args.link, n, args.k, args.seed)
        if len(curves) == 1:
            raise CertilinkError("bench needs a two-component link generator")
        a, b = curves.values()
        t0 = time.perf_counter()
        res = linking_number(a, b, precision=args.precision, parallel=args.parallel)
        elapsed_ms = (time.perf_counter() - t0) * 1e3
        rows.append((n, n, res.pairs, int(res.value), res.err_bound_u,
                     "true" if res.certified else "false", f"{elapsed_ms:.3f}"))
        n *= 2
    buf = io.StringIO()
    writer = csv.writer(buf)
    writer.writerow(["n", "m", "pairs", "value", "bound_u", "certified", "elapsed_ms"])
    writer.writerows(rows)
    text = buf.getvalue()
    if args.output == "-":
        sys.stdout.write(text)
    else:
        with open(args.output, "w") as fh:
            fh.write(text)
    return 0


def _add_common(p, parallel=True):
    p.add_argument("--precision", choices=["double", "single"], default="double")
    if parallel:
        p.add_argument("--parallel", action="store_true",
                       help="evaluate pairs with a vectorized reduction tree")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="certilink",
        description="Linking numbers and writhe with certified floating-point error bounds.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("link", help="linking number of two curves from a curve file")
    p.add_argument("file")
    p.add_argument("--a", required=True, help="name of the first curve")
    p.add_argument("--b", required=True, help="name of the second curve")
    _add_common(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_link)

    p = sub.add_parser("writhe", help="writhe of one curve from a curve file")
    p.add_argument("file")
    p.add_argument("--curve", help="curve name (optional if the file has exactly one)")
    _add_common(p)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_writhe)

    p = sub.add_parser("chain-link", help="weighted linking number of two chains")
    p.add_argument("file")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_chain_link)

    p = sub.add_parser("gen", help="write a curve file for a canonical or random link")
    p.add_argument("kind", choices=["hopf", "unlink", "torus", "trefoil", "random"])
    p.add_argument("--k", type=int, default=1, help="torus link parameter (T(2, 2k))")
    p.add_argument("--seed", type=int, default=0, help="seed for the random generator")
    p.add_argument("--segments", type=int, default=64)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("verify", help="compare the certified result against both oracles")
    p.add_argument("file")
    p.add_argument("--a", required=True)
    p.add_argument("--b", required=True)
    _add_common(p)
    p.set_defaults(func=_cmd_verify)

    p = sub.add_parser("bench", help="sweep N=M over powers of two and emit CSV")
    p.add_argument("--link", choices=["hopf", "unlink", "torus", "random"], default="hopf")
    p.add_argument("--k", type=int, default=1)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--min-segments", type=int, default=16)
    p.add_argument("--max-segments", type=int, default=512)
    _add_common(p)
    p.add_argument("-o", "--output", default="-")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except CertilinkError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1
    except (OSError, ValueError, KeyError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
