"""Convex-polygon billiards through the double construction: generalized
diagonals and periodic families pulled back from saddle connections and
cylinders on the doubled sphere."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import geometry as geo
from . import tracer as tr
from .builders import double_polygon_surface, triangulate_polygon
from .delaunay import delaunay_triangulation
from .enumerator import (
    connection_trajectory,
    enumerate_cylinders,
    enumerate_saddle_connections,
)
from .errors import InvalidReflection, NonSimplePolygon
from .surface import Surface, curvature_gap


@dataclass
class Polygon:
    vertices: list[geo.Vec]
    angles: list[float] = field(default_factory=list)
    curvatures: list[float] = field(default_factory=list)
    area: float = 0.0
    convex: bool = False

    def __post_init__(self):
        pts = [tuple(map(float, p)) for p in self.vertices]
        if geo.polygon_area(pts) <= 0 or not geo.is_simple_polygon(pts):
            raise NonSimplePolygon("polygon must be simple and counterclockwise")
        self.vertices = pts
        n = len(pts)
        self.angles = []
        for i in range(n):
            u = geo.sub(pts[(i - 1) % n], pts[i])
            w = geo.sub(pts[(i + 1) % n], pts[i])
            self.angles.append(geo.ccw_angle(w, u))
        self.curvatures = [(math.pi - a) / math.pi for a in self.angles]
        self.area = geo.polygon_area(pts)
        self.convex = all(k > 0 for k in self.curvatures)

    def curvature_gap(self) -> float:
        return curvature_gap(self.curvatures)

    def normalized(self) -> "Polygon":
        s = 1.0 / math.sqrt(self.area)
        return Polygon([(x * s, y * s) for (x, y) in self.vertices])


@dataclass
class BilliardPath:
    """Segments s_1..s_m inside the polygon; consecutive segments reflect at
    edge-interior points with complementary angles."""

    segments: list[tuple[geo.Vec, geo.Vec]]
    closed: bool = False
    generalized_diagonal: bool = False

    @property
    def length(self) -> float:
        return sum(geo.dist(a, b) for (a, b) in self.segments)


def _edge_at(polygon: Polygon, p: geo.Vec, tol: float):
    pts = polygon.vertices
    n = len(pts)
    for i in range(n):
        if geo.point_segment_distance(p, pts[i], pts[(i + 1) % n]) <= tol:
            return i
    return None


def validate_billiard_path(polygon: Polygon, path: BilliardPath, tol: float = 1e-9) -> None:
    segs = path.segments
    pairs = list(zip(segs, segs[1:]))
    if path.closed:
        pairs.append((segs[-1], segs[0]))
    for (a, b) in pairs:
        if geo.dist(a[1], b[0]) > 1e-7:
            raise InvalidReflection("consecutive segments do not share a reflection point")
        e = _edge_at(polygon, a[1], 1e-7)
        if e is None:
            raise InvalidReflection("reflection point not on a polygon edge")
        pts = polygon.vertices
        for v in (pts[e], pts[(e + 1) % len(pts)]):
            if geo.dist(a[1], v) <= tol:
                raise InvalidReflection("reflection at a vertex is not allowed")
        edge = geo.normalize(geo.sub(pts[(e + 1) % len(pts)], pts[e]))
        din = geo.normalize(geo.sub(a[1], a[0]))
        dout = geo.normalize(geo.sub(b[1], b[0]))
        # complementary angles: the reflected direction mirrors across the edge
        refl = (
            din[0] * (edge[0] * edge[0] - edge[1] * edge[1]) + din[1] * 2 * edge[0] * edge[1],
            din[0] * 2 * edge[0] * edge[1] + din[1] * (edge[1] * edge[1] - edge[0] * edge[0]),
        )
        if geo.dist(refl, dout) > 1e-7:
            raise InvalidReflection("reflection law violated (angles not complementary)")


@dataclass
class Double:
    polygon: Polygon
    surface: Surface
    n_front: int  # faces < n_front are the front copy, with polygon charts


def double_polygon(polygon: Polygon, tol: float = 1e-9) -> Double:
    """Flat cone sphere from two mirror copies of the polygon; front faces
    keep the polygon's own coordinates as their charts."""
    surface = double_polygon_surface(polygon.vertices, tol=tol)
    n_front = len(triangulate_polygon(polygon.vertices))
    return Double(polygon, surface, n_front)


def _locate_front(double: Double, p: geo.Vec, tol=1e-9):
    s = double.surface
    for f in range(double.n_front):
        a, b, c = (tuple(s.verts[f, k]) for k in range(3))
        if geo.point_in_triangle(p, a, b, c, tol=tol):
            return f
    raise NonSimplePolygon(f"point {p} is not inside the polygon")


def fold_point(double: Double, face: int, p: geo.Vec):
    """Project a chart point of the double back to polygon coordinates."""
    if face < double.n_front:
        return (p[0], p[1]), 0
    return (p[0], -p[1]), 1


def lift_billiard_path(double: Double, path: BilliardPath, tol: float = 1e-9):
    """Trace the path's lift on the double.

    A generalized diagonal lifts to a saddle connection of equal length; a
    periodic path lifts to a regular closed geodesic of equal (even number of
    segments) or doubled (odd) length."""
    validate_billiard_path(double.polygon, path, tol)
    start = path.segments[0][0]
    d = geo.normalize(geo.sub(path.segments[0][1], start))
    m = len(path.segments)
    if path.closed:
        budget = path.length * (2 if m % 2 == 1 else 1)
    else:
        budget = path.length
    f = _locate_front(double, start, tol)
    traj = tr.trace(double.surface, (f, start), d, budget + 10 * tol, tol=tol)
    if path.generalized_diagonal:
        if traj.end_status[0] != "cone":
            raise InvalidReflection("generalized diagonal lift did not end at a cone point")
    elif path.closed:
        traj = tr.trace(double.surface, (f, start), d, budget, tol=tol)
        traj.closed = True
    return traj


def project_trajectory(double: Double, traj: tr.Trajectory) -> BilliardPath:
    """Fold a trajectory of the double to a billiard path: threads merge until
    the copy changes (a boundary reflection)."""
    segments = []
    cur_start = None
    cur_end = None
    cur_copy = None
    for t in traj.threads:
        p0, c0 = fold_point(double, t.face, t.entry)
        p1, c1 = fold_point(double, t.face, t.exit)
        if cur_copy is None:
            cur_start, cur_end, cur_copy = p0, p1, c0
        elif c0 == cur_copy:
            cur_end = p1
        else:
            segments.append((cur_start, cur_end))
            cur_start, cur_end, cur_copy = p0, p1, c0
    segments.append((cur_start, cur_end))
    return BilliardPath(segments)


def _diagonal_key(path: BilliardPath, digits: int = 7):
    pts = [path.segments[0][0]] + [s[1] for s in path.segments]
    fwd = tuple((round(x, digits), round(y, digits)) for (x, y) in pts)
    return min(fwd, tuple(reversed(fwd)))


def _own_triangulation(dbl: Double):
    """The double's own complex is a geometric triangulation (polygon
    triangulation edges are saddle connections), so the enumerators can run
    on it directly, keeping the front/back tags usable."""
    from .delaunay import Triangulation

    return Triangulation(dbl.surface, dbl.surface, 0)


def enumerate_generalized_diagonals(polygon: Polygon, R: float,
                                    double: Double | None = None):
    """All generalized diagonals of length <= R via the double. Returns a
    sorted list of (length, BilliardPath); mirror-image saddle connections
    project to the same diagonal and are merged."""
    dbl = double or double_polygon(polygon)
    T = _own_triangulation(dbl)
    scs = enumerate_saddle_connections(dbl.surface, R, triangulation=T)
    out = {}
    for sc in scs:
        traj = connection_trajectory(dbl.surface, sc)
        path = project_trajectory(dbl, traj)
        path.generalized_diagonal = True
        key = _diagonal_key(path)
        if key not in out:
            out[key] = (sc.length, path)
    return sorted(out.values(), key=lambda t: (t[0], _diagonal_key(t[1])))


def enumerate_periodic_families(polygon: Polygon, R: float,
                                double: Double | None = None):
    """Maximal families of parallel periodic billiard paths with path length
    <= R: cylinders on the double with circumference <= 2R, folded back.
    Returns sorted (path_length, CylinderFamily) pairs."""
    dbl = double or double_polygon(polygon)
    T = _own_triangulation(dbl)
    cyls = enumerate_cylinders(dbl.surface, 2.0 * R, triangulation=T)
    out = []
    for cyl in cyls:
        face, q = cyl.rep_point
        d = cyl.rep_direction
        path_len = cyl.circumference
        if _mirror_state_at_half(dbl, face, q, d, cyl.circumference):
            path_len = cyl.circumference / 2.0
        out.append((path_len, cyl))
    return sorted(((pl, c) for (pl, c) in out if pl <= R + 1e-9),
                  key=lambda t: (t[0], t[1].itinerary))


def _mirror_state_at_half(dbl: Double, face, q, d, C) -> bool:
    """True when the closed geodesic at arclength C/2 sits at the mirror
    image of its start (an odd periodic path traversed twice)."""
    try:
        traj = tr.trace(dbl.surface, (face, q), d, C / 2.0)
    except Exception:
        return False
    if traj.end_status[0] != "budget":
        return False
    sp = traj.end_status[1]
    dend = traj.threads[-1].direction
    p0, c0 = fold_point(dbl, face, q)
    p1, c1 = fold_point(dbl, sp.face, sp.xy)
    if geo.dist(p0, p1) > 1e-7:
        return False
    d0 = d if c0 == 0 else (d[0], -d[1])
    d1 = dend if c1 == 0 else (dend[0], -dend[1])
    return geo.dist(d0, d1) <= 1e-7 and c0 != c1


def diagonal_count_bound(n: int, delta: float, R: float, c1: float, c2: float) -> float:
    """log2 of the Corollary bound for N^diag(P, R) on a unit-area polygon."""
    return math.log2(3 * n - 6) + 20.0 * n / delta * (c1 * (n - 1) * (R / math.sqrt(2.0) + c2) + 1.0)


def periodic_count_bound(n: int, delta: float, R: float, c1: float, c2: float) -> float:
    return math.log2(3 * n - 6) + 20.0 * n / delta * (c1 * (n - 1) * (math.sqrt(2.0) * R + c2) + 1.0)


def sc_count_bound(n: int, delta: float, R: float, c1: float, c2: float) -> float:
    """log2 of the Corollary bound for N^sc(X, R) on a unit-area sphere."""
    return math.log2(3 * n - 6) + 20.0 * n / delta * (c1 * (n - 1) * (R + c2) + 1.0)
