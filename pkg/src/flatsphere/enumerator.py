"""Complete enumeration of saddle connections and cylinder families up to a
length bound, with the counting functions N^sc and N^cg.

Saddle connections: per-corner sector search (kernel) + the triangulation
edges as seeds, deduplicated by the geodesic's two end signatures (vertex
label + angular position in the per-vertex offset registry).

Cylinders: every maximal family's boundary chain consists of saddle
connections of length <= circumference, so each family is reached by walking
pi-continuations from an enumerated connection; the family is then measured
by a periodic strip sweep and certified by re-tracing an explicit closed
midline geodesic.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from . import geometry as geo
from . import tracer as tr
from .delaunay import Triangulation, delaunay_triangulation
from .errors import CapExceeded
from .surface import Surface


@dataclass
class SaddleConnection:
    endpoints: tuple[int, int]
    faces: tuple[int, ...]
    edges: tuple[int, ...]
    holonomy: geo.Vec
    length: float
    start: tuple[int, int, geo.Vec]  # (face, corner, chart direction)
    end: tuple[int, int, geo.Vec]  # (face, corner, outgoing chart direction of reverse)
    signature: frozenset = field(default=frozenset(), repr=False)
    iota: int | None = None
    is_edge: bool = False

    def canonical_key(self, digits: int = 7):
        sig = tuple(sorted((l, round(phi, digits)) for (l, phi) in self.signature))
        word = min(self.faces, tuple(reversed(self.faces)))
        return (tuple(sorted(self.endpoints)), word, sig, round(self.length, digits))


@dataclass
class CylinderFamily:
    circumference: float
    height: float
    boundary: list[list[tuple[int, int, float]]]  # chains of (start, end, length)
    rep_point: tuple[int, geo.Vec]
    rep_direction: geo.Vec
    itinerary: tuple
    iota: int | None = None

    @property
    def key(self):
        return self.itinerary


# ---------------------------------------------------------------------------
# saddle connections


def _signature(complex_: Surface, sc_start, sc_end, length):
    (f0, c0, d0) = sc_start
    (f1, c1, d1) = sc_end
    a = (int(complex_.labels[f0, c0]), tr.direction_angle_at_vertex(complex_, f0, c0, d0))
    b = (int(complex_.labels[f1, c1]), tr.direction_angle_at_vertex(complex_, f1, c1, d1))
    return frozenset((a, b)) if a != b else frozenset((a, (b[0], b[1] + 0.0)))


def _edge_seed(complex_: Surface, f: int, e: int) -> SaddleConnection:
    A = tuple(complex_.verts[f, e])
    B = tuple(complex_.verts[f, (e + 1) % 3])
    g, ge = int(complex_.adj_face[f, e]), int(complex_.adj_edge[f, e])
    dirAB = geo.normalize(geo.sub(B, A))
    start = (f, e, dirAB)
    if g >= 0:
        A2 = tuple(complex_.verts[g, ge])
        B2 = tuple(complex_.verts[g, (ge + 1) % 3])
        dirBA = geo.normalize(geo.sub(B2, A2))
        end = (g, ge, dirBA)
    else:
        # boundary edge: the reverse run starts at the far corner of f
        end = (f, (e + 1) % 3, (-dirAB[0], -dirAB[1]))
    length = geo.dist(A, B)
    sc = SaddleConnection(
        endpoints=(int(complex_.labels[f, e]), int(complex_.labels[f, (e + 1) % 3])),
        faces=(f,),
        edges=(),
        holonomy=geo.sub(B, A),
        length=length,
        start=start,
        end=end,
        iota=0,
        is_edge=True,
    )
    sc.signature = _signature(complex_, start, end, length)
    return sc


def _match(sig_a, sig_b, ang_tol=1e-6):
    if len(sig_a) != len(sig_b):
        return False
    rest = list(sig_b)
    for (l, phi) in sig_a:
        hit = None
        for k, (l2, phi2) in enumerate(rest):
            if l == l2 and abs(phi - phi2) <= ang_tol:
                hit = k
                break
        if hit is None:
            return False
        rest.pop(hit)
    return True


class _Dedup:
    def __init__(self, len_tol=1e-7):
        self.len_tol = len_tol
        self.buckets: dict = {}

    def add(self, sc: SaddleConnection) -> bool:
        lab = tuple(sorted(sc.endpoints))
        for q in (round(sc.length / self.len_tol), round(sc.length / self.len_tol) + 1,
                  round(sc.length / self.len_tol) - 1):
            for other in self.buckets.get((lab, q), ()):
                if _match(other.signature, sc.signature):
                    return False
        self.buckets.setdefault((lab, round(sc.length / self.len_tol)), []).append(sc)
        return True


def _depth_cap(complex_: Surface, width: float, R: float) -> int:
    from .bounds import m0_constant

    n = complex_.num_cone_points
    ks = list(complex_.curvatures.values())
    m0 = m0_constant(0, n, ks)
    return int(math.ceil(2.0 * m0 * (R / width + 1.0))) + 1


def _connection_threads(complex_: Surface, sc: SaddleConnection):
    """Thread decomposition of a connection from its developed corridor."""
    if sc.is_edge:
        f, e = sc.faces[0], sc.start[1]
        A = tuple(complex_.verts[f, e])
        B = tuple(complex_.verts[f, (e + 1) % 3])
        return [tr.Thread(f, A, B, ("vertex", e), ("vertex", (e + 1) % 3))]
    placements = complex_.develop(sc.faces, sc.edges)
    U = sc.holonomy
    # the development places the root face at the identity, so the segment
    # runs from the root corner's chart position
    o = tuple(complex_.verts[sc.faces[0], sc.start[1]])
    params = [0.0]
    for i, e in enumerate(sc.edges):
        f = sc.faces[i]
        a = placements[i](tuple(complex_.verts[f, e]))
        b = placements[i](tuple(complex_.verts[f, (e + 1) % 3]))
        # line intersection: the corridor guarantees the segment crosses the
        # developed edge's line with increasing parameters
        ab = geo.sub(b, a)
        denom = geo.cross(U, ab)
        if denom == 0.0:
            raise CapExceeded(f"corridor clipping degenerate at step {i}")
        s = geo.cross(geo.sub(a, o), ab) / denom
        s = min(1.0, max(params[-1], s))
        params.append(s)
    params.append(1.0)
    threads = []
    for i, f in enumerate(sc.faces):
        inv = placements[i].inverse()
        p = inv((o[0] + params[i] * U[0], o[1] + params[i] * U[1]))
        q = inv((o[0] + params[i + 1] * U[0], o[1] + params[i + 1] * U[1]))
        entry = ("vertex", sc.start[1]) if i == 0 else ("edge", int(complex_.adj_edge[sc.faces[i - 1], sc.edges[i - 1]]))
        exit_ = ("vertex", sc.end[1]) if i == len(sc.faces) - 1 else ("edge", sc.edges[i])
        threads.append(tr.Thread(f, p, q, entry, exit_))
    return threads


def connection_trajectory(complex_: Surface, sc: SaddleConnection) -> tr.Trajectory:
    threads = _connection_threads(complex_, sc)
    total = sum(t.length for t in threads)
    return tr.Trajectory(
        complex_, threads, total,
        ("cone", sc.endpoints[0]), ("cone", sc.endpoints[1]),
        along_edge=sc.is_edge,
    )


def connection_iota(complex_: Surface, sc: SaddleConnection) -> int:
    if sc.iota is None:
        if sc.is_edge:
            sc.iota = 0
        else:
            sc.iota = tr.self_intersection_number(connection_trajectory(complex_, sc))
    return sc.iota


def enumerate_on_complex(
    complex_: Surface,
    R: float,
    cap: int,
    with_iota: bool = False,
    stats_out: dict | None = None,
    threads: int = 1,
) -> list[SaddleConnection]:
    """Sector search + edge seeds on an arbitrary complex (possibly with
    boundary), capped at combinatorial depth `cap`.

    With threads > 1 the root corners are partitioned across a thread pool;
    results are merged in root order, so the output is deterministic."""
    tol = complex_.tol
    dedup = _Dedup()
    out = []
    for (f, e), (g, ge) in complex_.edges():
        sc = _edge_seed(complex_, f, e)
        if sc.length <= R + tol and dedup.add(sc):
            out.append(sc)

    tri, adj_f, adj_e, _, glue_dev = complex_.mesh()
    agg = {"nodes": 0, "deepest": 1, "cap_hit": False, "deepest_found": 1}
    roots = [(f, c) for f in range(complex_.num_faces) for c in range(3)]

    def run_root(root):
        f, c = root
        return K.saddle_search(tri, adj_f, adj_e, glue_dev, f, c, R + tol, cap, tol)

    if threads > 1:
        from concurrent.futures import ThreadPoolExecutor

        with ThreadPoolExecutor(max_workers=threads) as pool:
            results = list(pool.map(run_root, roots))
    else:
        results = [run_root(r) for r in roots]

    for (f, c), (found, corridors, stats) in zip(roots, results):
        agg["nodes"] += stats["nodes"]
        agg["deepest"] = max(agg["deepest"], stats["deepest"])
        agg["cap_hit"] = agg["cap_hit"] or stats["cap_hit"]
        for (end_face, end_corner, hx, hy, depth, pc, ps), (faces, edges) in zip(
            found, corridors
        ):
            length = math.hypot(hx, hy)
            d0 = (hx / length, hy / length)
            # incoming chart direction at the end face, reversed
            d1 = (-(pc * d0[0] + ps * d0[1]), -(-ps * d0[0] + pc * d0[1]))
            start = (f, c, d0)
            end = (int(end_face), int(end_corner), d1)
            sc = SaddleConnection(
                endpoints=(
                    int(complex_.labels[f, c]),
                    int(complex_.labels[end_face, end_corner]),
                ),
                faces=tuple(faces),
                edges=tuple(edges),
                holonomy=(hx, hy),
                length=length,
                start=start,
                end=end,
            )
            sc.signature = _signature(complex_, start, end, length)
            if dedup.add(sc):
                out.append(sc)
                agg["deepest_found"] = max(agg["deepest_found"], depth)
    if with_iota:
        for sc in out:
            connection_iota(complex_, sc)
    out.sort(key=lambda s: (s.length, tuple(sorted(s.endpoints)), s.faces))
    if stats_out is not None:
        stats_out.update(agg)
    return out


def enumerate_saddle_connections(
    surface: Surface,
    R: float,
    triangulation: Triangulation | None = None,
    with_iota: bool = False,
    max_depth: int | None = None,
    stats_out: dict | None = None,
    threads: int = 1,
) -> list[SaddleConnection]:
    """Every saddle connection of length <= R, each exactly once.

    Runs on the Delaunay complex of the surface (better pruning; same metric).
    The combinatorial depth cap comes from the paper's width/length chain:
    a length-R trajectory crosses at most 2*m0*(R/d(T)+1) faces.
    """
    T = triangulation or delaunay_triangulation(surface)
    complex_ = T.complex
    cap = max_depth if max_depth is not None else _depth_cap(complex_, T.width, R)
    return enumerate_on_complex(
        complex_, R, cap, with_iota=with_iota, stats_out=stats_out, threads=threads
    )


def relative_systole(surface: Surface, triangulation: Triangulation | None = None) -> float:
    """Length of the shortest saddle connection: enumerate up to the shortest
    triangulation edge (itself a saddle connection) and take the minimum."""
    T = triangulation or delaunay_triangulation(surface)
    R = T.min_edge_length
    scs = enumerate_saddle_connections(surface, R, triangulation=T)
    return min(sc.length for sc in scs)


# ---------------------------------------------------------------------------
# cylinders


def _pi_continuation(complex_: Surface, face: int, corner: int, incoming: geo.Vec, side: str):
    """Boundary continuation at a cone point: the outgoing direction making
    angle exactly pi with the incoming segment on the cylinder side."""
    back = (-incoming[0], -incoming[1])
    delta = -math.pi if side == "L" else math.pi
    return tr.rotate_at_vertex(complex_, face, corner, back, delta)


def _walk_chain(complex_: Surface, start_face: int, start_corner: int, d0: geo.Vec,
                side: str, budget: float, tol: float):
    """Walk pi-continuations from a cone point until the chain closes.

    Returns (segments, total) where segments are traced saddle connections,
    or None when the walk leaves the budget or fails to close.
    """
    phi0 = tr.direction_angle_at_vertex(complex_, start_face, start_corner, d0)
    lab0 = int(complex_.labels[start_face, start_corner])
    segments = []
    total = 0.0
    face, corner, d = start_face, start_corner, d0
    guard = 0
    while True:
        guard += 1
        if guard > 10000:
            return None
        try:
            traj = tr.trace(complex_, tr.ConePointStart(face, corner), d,
                            budget - total + tol, tol=tol)
        except Exception:
            return None
        if traj.end_status[0] != "cone":
            return None
        segments.append(traj)
        total += traj.total_length
        if total > budget + tol:
            return None
        last = traj.threads[-1]
        if last.exit_mark[0] == "vertex":
            end_face, end_corner = last.face, last.exit_mark[1]
        else:
            return None
        try:
            face, corner, d = _pi_continuation(complex_, end_face, end_corner,
                                               last.direction, side)
        except Exception:
            return None
        lab = int(complex_.labels[face, corner])
        if lab == lab0:
            phi = tr.direction_angle_at_vertex(complex_, face, corner, d)
            theta = complex_.cone_angles[lab]
            dphi = abs((phi - phi0 + theta / 2) % theta - theta / 2)
            if dphi <= 1e-9:
                return segments, total
    return None


def _chain_development(segments):
    """Placements aligning every thread of the chain along the x-axis."""
    placed = []
    x = 0.0
    for traj in segments:
        for t in traj.threads:
            l = t.length
            iso = geo.Isometry.from_segments(t.entry, t.exit, (x, 0.0), (x + l, 0.0))
            placed.append((t.face, iso))
            x += l
    return placed, x


def _sweep_strip(complex_: Surface, placed, C: float, side: str, tol: float,
                 max_visits: int | None = None):
    """Maximal empty strip above (side 'L') or below the chain.

    Flood-fills face placements intersecting the strip, canonicalizing the
    x-translation modulo the period C; the height is the least positive
    offset of a developed cone point on the cylinder side. Returns
    (height, visited placements)."""
    sgn = 1.0 if side == "L" else -1.0
    H = math.inf
    eps = 16.0 * tol
    visited: dict[int, list] = {}
    all_placements = []
    max_visits = max_visits or (20000 + 200 * complex_.num_faces)

    def seen(face, iso):
        tx = iso.tx % C
        key = (iso.c, iso.s, tx, iso.ty)
        for (c, s, kx, ky) in visited.get(face, ()):
            if (
                abs(c - key[0]) <= 1e-9
                and abs(s - key[1]) <= 1e-9
                and abs(ky - key[3]) <= eps
                and (abs(kx - key[2]) <= eps or abs(abs(kx - key[2]) - C) <= eps)
            ):
                return True
        visited.setdefault(face, []).append(key)
        all_placements.append((face, iso))
        return False

    stack = []
    count = 0
    for face, iso in placed:
        if not seen(face, iso):
            stack.append((face, iso))
    while stack:
        count += 1
        if count > max_visits:
            raise CapExceeded(f"strip sweep exceeded {max_visits} placements")
        face, iso = stack.pop()
        ys = []
        for v in range(3):
            p = iso(tuple(complex_.verts[face, v]))
            y = sgn * p[1]
            ys.append(y)
            if eps < y < H:
                H = y
        for e in range(3):
            y1, y2 = ys[e], ys[(e + 1) % 3]
            if min(y1, y2) >= H - eps or max(y1, y2) <= eps:
                continue
            g = int(complex_.adj_face[face, e])
            if g < 0:
                continue
            niso = iso.compose(complex_.gluing_map(face, e))
            if not seen(g, niso):
                stack.append((g, niso))
    return H, all_placements


def _primitive_cycle(s):
    n = len(s)
    for p in range(1, n + 1):
        if n % p == 0 and s == s[p:] + s[:p]:
            return s[:p]
    return s


def _best_rotation(s):
    return min(tuple(s[i:] + s[:i]) for i in range(len(s)))


def _itinerary_key(threads):
    """Canonical cyclic crossing sequence of a closed geodesic: (face, entry
    edge) per crossing, reduced to the primitive period, minimized over
    rotations and over the reversed traversal (which enters through the
    forward exit edges)."""
    fwd = [(t.face, t.entry_mark[1]) for t in threads if t.entry_mark[0] == "edge"]
    rev = [
        (t.face, t.exit_mark[1])
        for t in reversed(threads)
        if t.exit_mark[0] == "edge"
    ]
    if not fwd:
        return ()
    return min(
        _best_rotation(_primitive_cycle(fwd)), _best_rotation(_primitive_cycle(rev))
    )


def _certify_midline(complex_: Surface, placements, C: float, H: float, side: str, tol: float):
    """Exhibit the closed straight line at half height; returns (point, dir,
    itinerary, trajectory) or None. The half-height line is the canonical
    family representative (the same geometric line from either boundary)."""
    sgn = 1.0 if side == "L" else -1.0
    for fx in (0.2371843, 0.6180339, 0.0613929, 0.8139217, 0.4472135):
        target = (fx * C, sgn * H * 0.5)
        hit = None
        for face, iso in placements:
            q = iso.inverse()(target)
            a, b, c = (tuple(complex_.verts[face, k]) for k in range(3))
            if geo.point_in_triangle(q, a, b, c, tol=-16 * tol):
                hit = (face, q, iso)
                break
        if hit is None:
            continue
        face, q, iso = hit
        d = iso.inverse().apply_vector((1.0, 0.0))
        try:
            traj = tr.trace(complex_, (face, q), d, C, tol=tol)
        except Exception:
            continue
        if traj.end_status[0] != "budget":
            continue
        sp = traj.end_status[1]
        p_end = sp.xy
        same = sp.face == face and geo.dist(p_end, q) <= 1e-7 * max(1.0, C)
        if not same:
            cf, cp = tr._canonical_point(complex_, sp.face, p_end, 4 * tol)
            cf2, cp2 = tr._canonical_point(complex_, face, q, 4 * tol)
            same = cf == cf2 and geo.dist(cp, cp2) <= 1e-7 * max(1.0, C)
        if not same:
            continue
        dend = traj.threads[-1].direction
        if geo.dist(dend, d) > 1e-7 and sp.face == face:
            continue
        itinerary = _itinerary_key(traj.threads)
        traj.closed = True
        return (face, q), d, itinerary, traj
    return None


def enumerate_cylinders(
    surface: Surface,
    R: float,
    triangulation: Triangulation | None = None,
    with_iota: bool = False,
    connections: list[SaddleConnection] | None = None,
) -> list[CylinderFamily]:
    """Every maximal family of parallel regular closed geodesics with
    circumference <= R, each family once."""
    T = triangulation or delaunay_triangulation(surface)
    complex_ = T.complex
    tol = complex_.tol
    scs = connections
    if scs is None:
        scs = enumerate_saddle_connections(surface, R, triangulation=T)
    families: dict = {}
    for sc in scs:
        for side in ("L", "R"):
            res = _walk_chain(
                complex_, sc.start[0], sc.start[1], sc.start[2], side, R, tol
            )
            if res is None:
                continue
            segments, C = res
            placed, C2 = _chain_development(segments)
            if abs(C2 - C) > 1e-7 * max(1.0, C):
                continue
            try:
                H, placements = _sweep_strip(complex_, placed, C, side, tol)
            except CapExceeded:
                continue
            if not (H > 16 * tol) or not math.isfinite(H):
                continue
            cert = _certify_midline(complex_, placements, C, H, side, tol)
            if cert is None:
                continue
            rep_point, rep_dir, itinerary, traj = cert
            if itinerary in families:
                continue
            chain_summary = [
                [
                    (
                        seg.start_status[1],
                        seg.end_status[1],
                        seg.total_length,
                    )
                    for seg in segments
                ]
            ]
            fam = CylinderFamily(
                circumference=float(C),
                height=float(H),
                boundary=chain_summary,
                rep_point=rep_point,
                rep_direction=rep_dir,
                itinerary=itinerary,
                iota=tr.self_intersection_number(traj) if with_iota else None,
            )
            families[itinerary] = fam
    out = sorted(families.values(), key=lambda f: (f.circumference, f.itinerary))
    return out


# ---------------------------------------------------------------------------
# counting functions


def counting_functions(surface: Surface, R_grid, triangulation: Triangulation | None = None):
    """Table of (R, N^sc, N^cg) on the grid, computed on the unit-area
    normalization of the surface."""
    norm = surface.normalized()
    T = delaunay_triangulation(norm)
    grid = sorted(float(r) for r in R_grid)
    if not grid:
        return []
    Rmax = grid[-1]
    scs = enumerate_saddle_connections(norm, Rmax, triangulation=T)
    cyls = enumerate_cylinders(norm, Rmax, triangulation=T, connections=scs)
    sc_lengths = sorted(sc.length for sc in scs)
    cg_lengths = sorted(c.circumference for c in cyls)
    import bisect

    tol = norm.tol
    rows = []
    for r in grid:
        nsc = bisect.bisect_right(sc_lengths, r + tol)
        ncg = bisect.bisect_right(cg_lengths, r + tol)
        rows.append((r, nsc, ncg))
    return rows
