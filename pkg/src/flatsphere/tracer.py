"""Geodesic tracing: straight-line propagation across face charts, thread
decomposition, self-intersection counting, and corner-switch classification."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import _kernels as K
from . import geometry as geo
from .errors import (
    CapExceeded,
    ContainedInEdge,
    DegenerateStart,
    TangentialOverlap,
    VertexGrazing,
)
from .surface import Surface


@dataclass(frozen=True)
class SurfacePoint:
    face: int
    xy: geo.Vec


@dataclass(frozen=True)
class ConePointStart:
    """Start at the cone point sitting at corner (face, corner)."""

    face: int
    corner: int


# entry/exit marks: ("interior",) | ("edge", e) | ("vertex", local_v)
@dataclass(frozen=True)
class Thread:
    face: int
    entry: geo.Vec
    exit: geo.Vec
    entry_mark: tuple
    exit_mark: tuple

    @property
    def length(self) -> float:
        return geo.dist(self.entry, self.exit)

    @property
    def direction(self) -> geo.Vec:
        return geo.normalize(geo.sub(self.exit, self.entry))


@dataclass
class Trajectory:
    surface: Surface
    threads: list[Thread]
    total_length: float
    start_status: tuple
    end_status: tuple
    closed: bool = False
    along_edge: bool = False
    params: list[float] = field(default_factory=list)

    def __post_init__(self):
        if not self.params:
            acc = 0.0
            self.params = []
            for t in self.threads:
                self.params.append(acc)
                acc += t.length

    @property
    def num_threads(self) -> int:
        return len(self.threads)


def _decode_mark(code: float) -> tuple:
    c = int(round(code))
    if c == -1:
        return ("interior",)
    if c >= 3:
        return ("vertex", c - 3)
    return ("edge", c)


def _vertex_label(surface: Surface, face: int, local_v: int) -> int:
    return int(surface.labels[face, local_v])


def _on_edge(surface: Surface, face: int, p: geo.Vec, tol: float):
    """Local edge index whose segment contains p within tol, or None."""
    for e in range(3):
        a = tuple(surface.verts[face, e])
        b = tuple(surface.verts[face, (e + 1) % 3])
        if geo.point_segment_distance(p, a, b) <= tol:
            return e
    return None


def trace(surface: Surface, start, direction: geo.Vec, budget: float,
          tol: float | None = None, max_threads: int = 2_000_000) -> Trajectory:
    """Trace a geodesic from an interior point, an edge point, or a cone point.

    The trace stops when the budget is exhausted, when it reaches a cone
    point (any pass within tol of a cone point counts as hitting it; the
    trace never continues through), or when it reaches a boundary edge of a
    bounded complex.
    """
    tol = surface.tol if tol is None else tol
    if geo.norm(direction) <= 0:
        raise DegenerateStart("direction must be nonzero")
    d = geo.normalize(direction)

    if isinstance(start, ConePointStart):
        return _trace_from_corner(surface, start.face, start.corner, d, budget, tol, max_threads)
    if isinstance(start, SurfacePoint):
        face, p = start.face, tuple(start.xy)
    else:
        face, p = int(start[0]), (float(start[1][0]), float(start[1][1]))

    # vertex start given as a raw point: anchor at the matched corner
    for c in range(3):
        if geo.dist(p, tuple(surface.verts[face, c])) <= tol:
            return _trace_from_vertex(surface, face, c, d, budget, tol, max_threads)

    e = _on_edge(surface, face, p, tol)
    if e is not None:
        a = tuple(surface.verts[face, e])
        b = tuple(surface.verts[face, (e + 1) % 3])
        edge_dir = geo.normalize(geo.sub(b, a))
        side = geo.cross(edge_dir, d)
        if abs(side) <= tol:
            return _trace_along_edge(surface, face, e, p, d, budget, tol)
        if side < 0:  # direction points out of this face: jump across
            iso = surface.transfer_map(face, e)
            p = iso(p)
            d = iso.apply_vector(d)
            face = int(surface.adj_face[face, e])

    return _run_kernel(surface, face, p, d, budget, tol, max_threads,
                       ("interior", SurfacePoint(face, p)))


def _run_kernel(surface, face, p, d, budget, tol, max_threads, start_status) -> Trajectory:
    tri, adj_f, adj_e, glue_fwd, _ = surface.mesh()
    rows, status, ef, ea, eb = K.trace(
        tri, adj_f, adj_e, glue_fwd, face, p[0], p[1], d[0], d[1], budget, tol, max_threads
    )
    if status == K.STATUS_CAP:
        raise CapExceeded(
            f"trace exceeded {max_threads} threads or stalled (tol {tol:.1e})"
        )
    threads = [
        Thread(
            int(r[0]),
            (r[1], r[2]),
            (r[3], r[4]),
            _decode_mark(r[5]),
            _decode_mark(r[6]),
        )
        for r in rows
    ]
    total = sum(t.length for t in threads)
    if status == K.STATUS_CONE_POINT:
        end = ("cone", _vertex_label(surface, int(ef), int(ea)))
    elif status == K.STATUS_BOUNDARY:
        end = ("boundary", SurfacePoint(int(ef), (ea, eb)))
    else:
        end = ("budget", SurfacePoint(int(ef), (ea, eb)))
    return Trajectory(surface, threads, total, start_status, end)


def _trace_from_corner(surface, face, corner, d, budget, tol, max_threads) -> Trajectory:
    """Start at the cone point at (face, corner) with direction in that
    face's chart; the direction must lie inside the corner sector."""
    v = tuple(surface.verts[face, corner])
    u = geo.sub(tuple(surface.verts[face, (corner + 1) % 3]), v)
    w = geo.sub(tuple(surface.verts[face, (corner + 2) % 3]), v)
    if geo.cross(u, d) < -tol or geo.cross(d, w) < -tol:
        raise DegenerateStart(
            f"direction not inside the corner sector of face {face} corner {corner} "
            f"(tol {tol:.1e})"
        )
    if abs(geo.cross(u, d)) <= tol:
        return _trace_along_edge(surface, face, corner, v, geo.normalize(u), budget, tol)
    if abs(geo.cross(d, w)) <= tol:
        e = (corner + 2) % 3
        return _trace_along_edge(surface, face, e, v, geo.normalize(w), budget, tol)
    label = _vertex_label(surface, face, corner)
    traj = _run_kernel(surface, face, v, d, budget, tol, max_threads, ("cone", label))
    # patch the first thread's entry mark: it starts at the corner vertex
    if traj.threads:
        t0 = traj.threads[0]
        traj.threads[0] = Thread(t0.face, t0.entry, t0.exit, ("vertex", corner), t0.exit_mark)
    return traj


def _trace_from_vertex(surface, face, corner, d, budget, tol, max_threads) -> Trajectory:
    """Start at the cone point at (face, corner) with a chart direction that
    may point outside that corner's sector: resolve the sector through the
    angular registry using the signed planar angle from the corner's start
    ray (valid for directions within pi of it)."""
    v = tuple(surface.verts[face, corner])
    u = geo.sub(tuple(surface.verts[face, (corner + 1) % 3]), v)
    w = geo.sub(tuple(surface.verts[face, (corner + 2) % 3]), v)
    if geo.cross(u, d) >= -tol and geo.cross(d, w) >= -tol:
        return _trace_from_corner(surface, face, corner, d, budget, tol, max_threads)
    offs = surface.corner_offsets()
    signed = math.atan2(geo.cross(u, d), geo.dot(u, d))
    label = _vertex_label(surface, face, corner)
    phi = offs[(face, corner)] + signed
    f2, c2, d2 = direction_at_angle(surface, label, phi, tol=tol)
    return _trace_from_corner(surface, f2, c2, d2, budget, tol, max_threads)


def _trace_along_edge(surface, face, e, p, d, budget, tol) -> Trajectory:
    """Edge-coincident travel: one thread in the face left of the direction,
    ending at the far vertex (a cone point) or at the budget."""
    a = tuple(surface.verts[face, e])
    b = tuple(surface.verts[face, (e + 1) % 3])
    edge_dir = geo.normalize(geo.sub(b, a))
    forward = geo.dot(edge_dir, d) > 0
    # face lies left of its own CCW edge a->b; for reversed travel use partner
    if not forward:
        g, ge = int(surface.adj_face[face, e]), int(surface.adj_edge[face, e])
        if g >= 0:
            iso = surface.transfer_map(face, e)
            return _trace_along_edge(surface, g, ge, iso(p), iso.apply_vector(d), budget, tol)
    target = b if forward else a
    local_v = (e + 1) % 3 if forward else e
    dist_left = geo.dist(p, target)
    if geo.dist(p, a if forward else b) <= tol:
        src = e if forward else (e + 1) % 3
        entry_mark = ("vertex", src)
        start = ("cone", _vertex_label(surface, face, src))
    else:
        entry_mark = ("edge", e)
        start = ("interior", SurfacePoint(face, p))
    if dist_left <= tol:
        raise DegenerateStart(f"edge travel starts within tol {tol:.1e} of a cone point")
    if budget < dist_left:
        q = (p[0] + budget * d[0], p[1] + budget * d[1])
        t = Thread(face, p, q, entry_mark, ("edge", e))
        return Trajectory(surface, [t], budget, start, ("budget", SurfacePoint(face, q)),
                          along_edge=True)
    t = Thread(face, p, target, entry_mark, ("vertex", local_v))
    return Trajectory(surface, [t], dist_left, start,
                      ("cone", _vertex_label(surface, face, local_v)), along_edge=True)


# ---------------------------------------------------------------------------
# vertex fans: angular positions of directions around a cone point


def direction_angle_at_vertex(surface: Surface, face: int, corner: int, d: geo.Vec) -> float:
    """Angular position (in the per-vertex offset registry) of chart direction
    d based at the cone point sitting at (face, corner)."""
    offs = surface.corner_offsets()
    v = tuple(surface.verts[face, corner])
    start_ray = geo.sub(tuple(surface.verts[face, (corner + 1) % 3]), v)
    return offs[(face, corner)] + geo.ccw_angle(start_ray, d)


def direction_at_angle(surface: Surface, label: int, phi: float, tol: float | None = None):
    """Inverse of direction_angle_at_vertex: (face, corner, unit chart vector)
    whose angular position around the cone point equals phi mod cone angle."""
    tol = surface.tol if tol is None else tol
    theta = surface.cone_angles[label]
    phi = phi % theta
    offs = surface.corner_offsets()
    best = None
    for (f, c) in surface.corners_of_vertex(label):
        o = offs[(f, c)]
        ang = surface.corner_angle(f, c)
        local = (phi - o) % theta
        if local <= ang + tol:
            v = tuple(surface.verts[f, c])
            ray = geo.normalize(geo.sub(tuple(surface.verts[f, (c + 1) % 3]), v))
            cand = (f, c, geo.rotate(ray, local))
            if local <= ang:
                return cand
            best = cand
    if best is not None:
        return best
    raise DegenerateStart(f"no corner sector of vertex {label} contains angle {phi}")


def rotate_at_vertex(surface: Surface, face: int, corner: int, d: geo.Vec, delta: float):
    """Rotate direction d (based at the cone point at (face, corner)) by delta
    counterclockwise around the cone point; returns (face, corner, vector)."""
    label = _vertex_label(surface, face, corner)
    phi = direction_angle_at_vertex(surface, face, corner, d) + delta
    return direction_at_angle(surface, label, phi)


# ---------------------------------------------------------------------------
# self-intersection counting


def _canonical_point(surface: Surface, face: int, p: geo.Vec, tol: float):
    """Canonical (face, point) pair: points within tol of a glued edge are
    assigned to the smaller face id (ties: lexicographic on coordinates)."""
    best = (face, p)
    e = _on_edge(surface, face, p, tol)
    if e is not None:
        g = int(surface.adj_face[face, e])
        if g >= 0:
            q = surface.transfer_map(face, e)(p)
            cand = (g, q)
            if (g, round(q[0], 9), round(q[1], 9)) < (face, round(p[0], 9), round(p[1], 9)):
                best = cand
    return best


def _event_direction(surface: Surface, thread: Thread, point: geo.Vec,
                     canon_face: int, canon_point: geo.Vec, tol: float) -> geo.Vec:
    """Direction of the thread at the event point, expressed in the canonical
    face's chart. Faces may share several edges, so the right transfer is the
    one carrying the event point onto the canonical representative."""
    d = thread.direction
    if thread.face == canon_face and geo.dist(point, canon_point) <= 4.0 * tol:
        return d
    for k in range(3):
        if int(surface.adj_face[thread.face, k]) != canon_face:
            continue
        a = tuple(surface.verts[thread.face, k])
        b = tuple(surface.verts[thread.face, (k + 1) % 3])
        if geo.point_segment_distance(point, a, b) > 4.0 * tol:
            continue
        iso = surface.transfer_map(thread.face, k)
        if geo.dist(iso(point), canon_point) <= 4.0 * tol:
            return iso.apply_vector(d)
    return d


def self_intersection_number(traj: Trajectory, tol: float | None = None) -> int:
    """Number of transverse pairs over all interior points of the trajectory.

    Collects pairwise thread intersections per face, canonicalizes points
    that lie on glued edges, groups coincident surface points, merges
    passages (events at the same arclength parameter) and counts unordered
    pairs of tangent directions that span the plane. Raises TangentialOverlap
    on positive-length overlap of two threads.
    """
    tol = traj.surface.tol if tol is None else tol
    surface = traj.surface
    n = len(traj.threads)
    if n == 0:
        return 0
    faces = np.array([t.face for t in traj.threads], dtype=np.int64)
    p = np.array([t.entry for t in traj.threads], dtype=np.float64)
    q = np.array([t.exit for t in traj.threads], dtype=np.float64)
    events, overlaps = K.segment_events(faces, p, q, tol)
    if len(overlaps):
        i, j = int(overlaps[0][0]), int(overlaps[0][1])
        raise TangentialOverlap(
            f"threads {i} and {j} overlap along a sub-segment (tol {tol:.1e}); "
            "the self-intersection count is undefined"
        )
    total_len = traj.total_length
    clusters: dict = {}
    order = []
    for row in np.asarray(events):
        i, j = int(row[0]), int(row[1])
        x, y, si, tj = row[2], row[3], row[4], row[5]
        cf, cp = _canonical_point(surface, traj.threads[i].face, (x, y), tol)
        cell = max(16.0 * tol, 1e-12)
        key = (cf, round(cp[0] / cell), round(cp[1] / cell))
        # search neighbor cells to avoid rounding splits
        found = None
        for dx_ in (-1, 0, 1):
            for dy_ in (-1, 0, 1):
                k2 = (key[0], key[1] + dx_, key[2] + dy_)
                if k2 in clusters:
                    found = k2
                    break
            if found:
                break
        if found is None:
            clusters[key] = (cp, [])
            order.append(key)
            found = key
        canon_pt = clusters[found][0]
        for idx, frac in ((i, si), (j, tj)):
            t = traj.threads[idx]
            param = traj.params[idx] + frac * t.length
            clusters[found][1].append(
                (param, _event_direction(surface, t, (x, y), cf, canon_pt, tol))
            )
    count = 0
    for key in order:
        entries = clusters[key][1]
        entries.sort(key=lambda e: e[0])
        passages = []
        for param, d in entries:
            merged = False
            for pas in passages:
                dp = abs(param - pas[0])
                if traj.closed:
                    dp = min(dp, abs(total_len - dp))
                if dp <= 16.0 * max(tol, 1e-12):
                    merged = True
                    break
            if not merged:
                passages.append((param, d))
        if not traj.closed:
            passages = [
                (t, d) for (t, d) in passages
                if t > 16.0 * max(tol, 1e-12) and t < total_len - 16.0 * max(tol, 1e-12)
            ]
        for a in range(len(passages)):
            for b in range(a + 1, len(passages)):
                c = abs(geo.cross(passages[a][1], passages[b][1]))
                if c <= tol:
                    raise TangentialOverlap(
                        f"two passages through the same point are parallel within tol "
                        f"{tol:.1e}; count undefined"
                    )
                count += 1
    return count


# ---------------------------------------------------------------------------
# combinatorial length and corner switches


def decompose_threads(traj: Trajectory, triangulation=None):
    """(threads, combinatorial length m) with respect to the complex the
    trajectory was traced on (= the triangulation's complex)."""
    if traj.along_edge:
        raise ContainedInEdge(
            "trajectory lies inside a triangulation edge; handle the iota = 0 case separately"
        )
    if triangulation is not None:
        base = getattr(triangulation, "complex", triangulation)
        if base is not traj.surface:
            raise ValueError("trajectory was not traced on this triangulation's complex")
    return traj.threads, len(traj.threads)


LEFT, RIGHT, BOTH = "L", "R", "B"


def thread_corner_side(surface: Surface, t: Thread):
    """Which corner the thread cuts and on which side: (corner, 'L'|'R'|'B'),
    or (None, None) for partial threads starting/ending at interior points."""
    if t.entry_mark[0] == "vertex" or t.exit_mark[0] == "vertex":
        return (t.entry_mark[1] if t.entry_mark[0] == "vertex" else t.exit_mark[1], BOTH)
    if t.entry_mark[0] != "edge" or t.exit_mark[0] != "edge":
        return (None, None)
    e_in, e_out = t.entry_mark[1], t.exit_mark[1]
    if e_in == e_out:
        return (None, None)
    shared = ({e_in, (e_in + 1) % 3} & {e_out, (e_out + 1) % 3})
    corner = shared.pop()
    cpos = tuple(surface.verts[t.face, corner])
    side = geo.cross(geo.sub(t.exit, t.entry), geo.sub(cpos, t.entry))
    return (corner, LEFT if side > 0 else RIGHT)


def corner_sides(traj: Trajectory) -> list[tuple]:
    return [thread_corner_side(traj.surface, t) for t in traj.threads]


def is_switch(side_a, side_b) -> bool:
    if side_a is None or side_b is None:
        return False
    if BOTH in (side_a, side_b):
        return True
    return side_a != side_b


def corner_switches(traj: Trajectory) -> list[int]:
    """Indices i such that threads (i, i+1) cut corners on opposite sides."""
    sides = [s for (_, s) in corner_sides(traj)]
    out = []
    for i in range(len(sides) - 1):
        if is_switch(sides[i], sides[i + 1]):
            out.append(i)
    return out
