"""Command-line interface.

Exit codes: 0 success, 1 usage error, 2 verification failure,
3 numeric pathology (iteration cap hit / vertex grazing).
"""
from __future__ import annotations

import argparse
import json
import math
import sys

from . import bounds as bd
from . import enumerator as en
from . import surgery as sg
from . import tracer as tr
from .billiards import (
    Polygon,
    diagonal_count_bound,
    double_polygon,
    enumerate_generalized_diagonals,
    enumerate_periodic_families,
    periodic_count_bound,
)
from .delaunay import delaunay_triangulation, locate
from .errors import CapExceeded, FlatSphereError, VertexGrazing
from .examples import build_example
from .surface import InfiniteFlatSphere, Surface, curvature_gap

EXIT_OK = 0
EXIT_USAGE = 1
EXIT_VERIFICATION = 2
EXIT_NUMERIC = 3


def _load_surface(path: str, tol: float) -> Surface:
    with open(path) as fh:
        return Surface.from_json(fh.read(), tol=tol)


def cmd_validate(args) -> int:
    surface = _load_surface(args.surface, args.tol)
    rep = surface.validate(args.tol)
    print(json.dumps(rep.to_dict(), indent=2))
    return EXIT_OK if rep.passes else EXIT_VERIFICATION


def cmd_trace(args) -> int:
    surface = _load_surface(args.surface, args.tol)
    x, y = (float(v) for v in args.at.split(","))
    dx, dy = (float(v) for v in args.dir.split(","))
    complex_ = surface
    face, pt = args.face, (x, y)
    if args.triangulation == "delaunay":
        T = delaunay_triangulation(surface)
        if T.flips_performed:
            face, pt = locate(T.complex, surface, face, pt, tol=args.tol)
        complex_ = T.complex
    traj = tr.trace(complex_, (face, pt), (dx, dy), args.budget, tol=args.tol)
    iota = tr.self_intersection_number(traj)
    switches = tr.corner_switches(traj)
    out = {
        "threads": [
            {
                "face": t.face,
                "entry": list(t.entry),
                "exit": list(t.exit),
                "entry_mark": list(t.entry_mark),
                "exit_mark": list(t.exit_mark),
            }
            for t in traj.threads
        ],
        "length": traj.total_length,
        "iota": iota,
        "corner_switches": switches,
        "end_status": _status_json(traj.end_status),
    }
    print(json.dumps(out, indent=2))
    return EXIT_OK


def _status_json(status):
    kind = status[0]
    if kind == "cone":
        return {"kind": "ConePoint", "label": status[1]}
    sp = status[1]
    name = {"budget": "BudgetExhausted", "interior": "Interior", "boundary": "Boundary"}[kind]
    return {"kind": name, "face": sp.face, "point": list(sp.xy)}


def cmd_delaunay(args) -> int:
    surface = _load_surface(args.surface, args.tol)
    T = delaunay_triangulation(surface)
    print(json.dumps(T.to_json_dict(), indent=2))
    return EXIT_OK


def cmd_enumerate(args) -> int:
    surface = _load_surface(args.surface, args.tol)
    if args.normalize_area:
        surface = surface.normalized()
    T = delaunay_triangulation(surface)
    print("kind,length,iota,endpoints,corridor_depth")
    if args.kind in ("sc", "both"):
        scs = en.enumerate_saddle_connections(
            surface, args.max_length, triangulation=T, with_iota=True, threads=args.threads
        )
        for sc in scs:
            print(f"sc,{sc.length!r},{sc.iota},{sc.endpoints[0]}|{sc.endpoints[1]},{len(sc.faces)}")
    if args.kind in ("cyl", "both"):
        cyls = en.enumerate_cylinders(surface, args.max_length, triangulation=T, with_iota=True)
        for c in cyls:
            print(f"cyl,{c.circumference!r},{c.iota},-,{len(c.itinerary)}")
    return EXIT_OK


def cmd_count(args) -> int:
    surface = _load_surface(args.surface, args.tol)
    lo, hi, step = (float(v) for v in args.grid.split(":"))
    grid = []
    r = lo
    while r <= hi + 1e-12:
        grid.append(r)
        r += step
    rows = en.counting_functions(surface, grid)
    print("R,N_sc,N_cg")
    for (r, nsc, ncg) in rows:
        print(f"{r!r},{nsc},{ncg}")
    return EXIT_OK


def cmd_constants(args) -> int:
    surface = _load_surface(args.surface, args.tol)
    cs = bd.constant_set(surface)
    print(json.dumps(cs.to_dict(), indent=2))
    return EXIT_OK


def cmd_verify(args) -> int:
    surface = _load_surface(args.surface, args.tol)
    rep = bd.verify_bounds(surface, args.max_length)
    for line in rep.to_csv_lines():
        print(line)
    return EXIT_OK if rep.passed else EXIT_VERIFICATION


def cmd_surgery(args) -> int:
    surface = _load_surface(args.surface, args.tol)
    cluster = [int(v) for v in args.collapse.split(",")]
    T = delaunay_triangulation(surface)
    if len(cluster) == 2:
        tree = sg.spanning_tree(T.complex, cluster)
        hull = sg.convex_hull(T.complex, cluster, tree=tree)
    else:
        hull = sg.convex_hull(T.complex, cluster)
    res = sg.generalized_surgery(T.complex, [hull])
    out = args.out or "."
    top_path = f"{out}/top.json"
    with open(top_path, "w") as fh:
        fh.write(res.top.to_json(indent=2))
    paths = [top_path]
    for i, inf in enumerate(res.infinitesimal):
        p = f"{out}/infinitesimal_{i}.json"
        with open(p, "w") as fh:
            fh.write(json.dumps(inf.to_json_dict(), indent=2))
        paths.append(p)
    print(json.dumps({
        "written": paths,
        "apex_labels": res.apex_labels,
        "added_area": res.added_area,
        "top_curvatures": {str(k): v for k, v in res.top.curvatures.items()},
    }, indent=2))
    return EXIT_OK


def cmd_core(args) -> int:
    with open(args.infinite) as fh:
        X = InfiniteFlatSphere.from_json_dict(json.load(fh), tol=args.tol)
    core, legs, degenerate = sg.core_of_infinite_sphere(X)
    count, log2_bound, passes, stats = sg.count_saddle_connections_infinite(X)
    out = {
        "degenerate": degenerate,
        "core_area": None if core is None else core.area,
        "boundary_length": None if core is None else core.boundary_length(),
        "saddle_connections": count,
        "log2_bound": log2_bound,
        "within_bound": passes,
        "stats": stats,
    }
    if core is not None:
        out["core"] = core.complex.to_json_dict()
    print(json.dumps(out, indent=2))
    return EXIT_OK if passes else EXIT_VERIFICATION


def cmd_billiard(args) -> int:
    with open(args.polygon) as fh:
        data = json.load(fh)
    poly = Polygon([(float(v[0]), float(v[1])) for v in data["vertices"]])
    if args.normalize:
        poly = poly.normalized()
    n = len(poly.vertices)
    delta = poly.curvature_gap()
    c1, c2 = bd.constants_uniform(n, min(delta, 1.0 / 3.0))
    ok = True
    if args.kind == "diag":
        diags = enumerate_generalized_diagonals(poly, args.max_length)
        print("length,segments")
        for (l, p) in diags:
            print(f"{l!r},{len(p.segments)}")
        count = len(diags)
        log2_bound = diagonal_count_bound(n, delta, args.max_length, c1, c2)
        ok = count == 0 or math.log2(count) <= log2_bound
        print(f"# N_diag={count} log2_bound={log2_bound!r} within_bound={ok}")
    else:
        fams = enumerate_periodic_families(poly, args.max_length)
        print("path_length,circumference,height")
        for (pl, c) in fams:
            print(f"{pl!r},{c.circumference!r},{c.height!r}")
        count = len(fams)
        log2_bound = periodic_count_bound(n, delta, args.max_length, c1, c2)
        ok = count == 0 or math.log2(count) <= log2_bound
        print(f"# N_per={count} log2_bound={log2_bound!r} within_bound={ok}")
    return EXIT_OK if ok else EXIT_VERIFICATION


def cmd_example(args) -> int:
    params = {}
    for kv in args.param or []:
        k, v = kv.split("=")
        params[k] = int(v) if k in ("m", "n", "seed") else float(v)
    ex = build_example(args.family, **params)
    descriptor = {
        "family": ex.family,
        "params": ex.params,
        "designated": {
            k: (list(v) if isinstance(v, tuple) else v) for k, v in ex.designated.items()
        }
        if ex.designated
        else None,
        "expected": ex.expected or None,
    }
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(ex.surface.to_json(indent=2))
        desc_path = args.out.rsplit(".json", 1)[0] + ".descriptor.json"
        with open(desc_path, "w") as fh:
            fh.write(json.dumps(descriptor, indent=2))
        print(json.dumps({"surface": args.out, "descriptor": desc_path}))
    else:
        descriptor["surface"] = ex.surface.to_json_dict()
        print(json.dumps(descriptor, indent=2))
    return EXIT_OK


def make_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="flatsphere", description=__doc__)
    p.add_argument("--tol", type=float, default=1e-9, help="absolute metric tolerance")
    p.add_argument("--threads", type=int, default=1, help="worker threads for enumeration")
    p.add_argument("--seed", type=int, default=0, help="seed for randomized fixtures")
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("validate", help="check surface invariants")
    s.add_argument("surface")
    s.set_defaults(func=cmd_validate)

    s = sub.add_parser("trace", help="trace a geodesic")
    s.add_argument("surface")
    s.add_argument("--face", type=int, required=True)
    s.add_argument("--at", required=True, help="x,y in the face chart")
    s.add_argument("--dir", required=True, help="dx,dy")
    s.add_argument("--budget", type=float, required=True)
    s.add_argument("--triangulation", choices=["delaunay"], default=None)
    s.set_defaults(func=cmd_trace)

    s = sub.add_parser("delaunay", help="Delaunay triangulation report")
    s.add_argument("surface")
    s.set_defaults(func=cmd_delaunay)

    s = sub.add_parser("enumerate", help="saddle connections / cylinders up to a length")
    s.add_argument("surface")
    s.add_argument("--max-length", type=float, required=True)
    s.add_argument("--kind", choices=["sc", "cyl", "both"], default="both")
    s.add_argument("--normalize-area", action="store_true")
    s.set_defaults(func=cmd_enumerate)

    s = sub.add_parser("count", help="counting functions N_sc, N_cg on a grid")
    s.add_argument("surface")
    s.add_argument("--grid", required=True, help="lo:hi:step")
    s.set_defaults(func=cmd_count)

    s = sub.add_parser("constants", help="the explicit constants for a surface")
    s.add_argument("surface")
    s.set_defaults(func=cmd_constants)

    s = sub.add_parser("verify", help="check the length-vs-intersection bounds")
    s.add_argument("surface")
    s.add_argument("--max-length", type=float, required=True)
    s.set_defaults(func=cmd_verify)

    s = sub.add_parser("surgery", help="collapse a singularity cluster")
    s.add_argument("surface")
    s.add_argument("--collapse", required=True, help="v1,v2[,v3...]")
    s.add_argument("--loop", default=None, help="unused placeholder for an explicit loop")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_surgery)

    s = sub.add_parser("core", help="core and saddle-connection census of an infinite sphere")
    s.add_argument("infinite")
    s.set_defaults(func=cmd_core)

    s = sub.add_parser("billiard", help="generalized diagonals / periodic families")
    s.add_argument("polygon")
    s.add_argument("--max-length", type=float, required=True)
    s.add_argument("--kind", choices=["diag", "per"], default="diag")
    s.add_argument("--normalize", action="store_true")
    s.set_defaults(func=cmd_billiard)

    s = sub.add_parser("example", help="build a named example family fixture")
    s.add_argument("family")
    s.add_argument("--param", action="append", help="name=value (repeatable)")
    s.add_argument("--out", default=None)
    s.set_defaults(func=cmd_example)
    return p


def main(argv=None) -> int:
    parser = make_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_USAGE if e.code not in (0, None) else EXIT_OK
    try:
        return args.func(args)
    except (CapExceeded, VertexGrazing) as err:
        print(f"numeric pathology: {err}", file=sys.stderr)
        return EXIT_NUMERIC
    except FlatSphereError as err:
        print(f"error: {err}", file=sys.stderr)
        return EXIT_USAGE
    except OSError as err:
        print(f"io error: {err}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
