"""Constructors for the surfaces used throughout: doubles of polygons,
self-glued polygons, and randomized convex examples."""
from __future__ import annotations

import math

import numpy as np

from . import geometry as geo
from .errors import NonSimplePolygon, NonMatchingGluing
from .surface import Surface, DEFAULT_TOL


def triangulate_polygon(points: list[geo.Vec], tol: float = 1e-12):
    """Triangulate a simple CCW polygon into (corner-index triples).

    Tries a fan from each vertex first (works for star-shaped polygons,
    tolerating straight vertices), then falls back to ear clipping.
    """
    n = len(points)
    if n < 3:
        raise NonSimplePolygon("polygon needs at least 3 vertices")
    if geo.polygon_area(points) <= 0:
        raise NonSimplePolygon("polygon must be counterclockwise with positive area")
    if not geo.is_simple_polygon(points):
        raise NonSimplePolygon("polygon edges self-intersect")

    def fan_ok(apex: int) -> bool:
        for k in range(n):
            i, j = k, (k + 1) % n
            if i == apex or j == apex:
                continue
            if geo.triangle_area(points[apex], points[i], points[j]) <= tol:
                return False
            # the fan diagonal (apex, i) must not cross any boundary edge
        for i in range(n):
            if i == apex or (i + 1) % n == apex or (i - 1) % n == apex:
                for k in range(n):
                    a, b = points[k], points[(k + 1) % n]
                    if k == i or (k + 1) % n == i or k == apex or (k + 1) % n == apex:
                        continue
                    if geo.segments_properly_intersect(points[apex], points[i], a, b):
                        return False
        return True

    for apex in range(n):
        if fan_ok(apex):
            return [
                (apex, (apex + k) % n, (apex + k + 1) % n) for k in range(1, n - 1)
            ]

    # ear clipping
    idx = list(range(n))
    tris = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > n * n + 10:
            raise NonSimplePolygon("ear clipping failed; polygon may be degenerate")
        m = len(idx)
        clipped = False
        for k in range(m):
            a, b, c = idx[(k - 1) % m], idx[k], idx[(k + 1) % m]
            if geo.triangle_area(points[a], points[b], points[c]) <= tol:
                continue
            ok = True
            for other in idx:
                if other in (a, b, c):
                    continue
                if geo.point_in_triangle(points[other], points[a], points[b], points[c], tol=-tol):
                    ok = False
                    break
            if ok:
                tris.append((a, b, c))
                idx.pop(k)
                clipped = True
                break
        if not clipped:
            raise NonSimplePolygon("no ear found; polygon may be non-simple")
    tris.append((idx[0], idx[1], idx[2]))
    return tris


def _face_tables(points, tris, labels):
    """Face arrays plus a map from directed vertex pairs to half-edges."""
    faces = []
    half = {}
    for f, (a, b, c) in enumerate(tris):
        faces.append(((labels[a], labels[b], labels[c]), (points[a], points[b], points[c])))
        for e, (i, j) in enumerate(((a, b), (b, c), (c, a))):
            half[(i, j)] = (f, e)
    return faces, half


def double_domain(points, tris, labels, pairings=None, tol=DEFAULT_TOL) -> Surface:
    """Double of a triangulated planar domain.

    points/tris/labels describe one copy; pairings lists directed vertex-index
    pairs ((i, j), (k, l)) glued within the copy (applied to both copies).
    Every directed pair (i, j) whose reverse is not a triangle edge and which
    is not in a pairing becomes a boundary edge glued to its mirror.
    """
    n_faces = len(tris)
    faces_front, half_front = _face_tables(points, tris, labels)
    # back copy: mirror y -> -y, reverse vertex order to stay CCW
    mpoints = [(p[0], -p[1]) for p in points]
    tris_back = [(a, c, b) for (a, b, c) in tris]
    faces_back, half_back = _face_tables(mpoints, tris_back, labels)

    triangles = faces_front + faces_back

    def back_he(i, j):
        f, e = half_back[(i, j)]
        return (f + n_faces, e)

    gluings = []
    used = set()
    internal = set()
    if pairings:
        for (ij, kl) in pairings:
            internal.add(ij)
            internal.add(kl)
    for (i, j), (f, e) in half_front.items():
        if (i, j) in used:
            continue
        if (j, i) in half_front and (i, j) not in internal:
            g, ge = half_front[(j, i)]
            gluings.append(((f, e), (g, ge)))
            bf, be = back_he(j, i)
            bg, bge = back_he(i, j)
            gluings.append(((bf, be), (bg, bge)))
            used.update({(i, j), (j, i)})
        elif (i, j) not in internal:
            gluings.append(((f, e), back_he(j, i)))
            used.add((i, j))
    if pairings:
        for (ij, kl) in pairings:
            gluings.append((half_front[ij], half_front[kl]))
            gluings.append((back_he(*ij), back_he(*kl)))
    return Surface.build_from_triangles(triangles, gluings, tol=tol)


def double_polygon_surface(points, labels=None, tol=DEFAULT_TOL) -> Surface:
    """Flat cone sphere obtained by gluing two mirror copies of a simple
    polygon along their boundaries. Vertex i gets label i unless given."""
    points = [tuple(map(float, p)) for p in points]
    if labels is None:
        labels = list(range(len(points)))
    tris = triangulate_polygon(points)
    return double_domain(points, tris, labels, tol=tol)


def glue_polygon(points, pairings, labels=None, tol=DEFAULT_TOL) -> Surface:
    """Flat cone sphere from one polygon with self-identified boundary.

    pairings: list of ((i, j), (k, l)) directed boundary edges (i->j glued to
    k->l traversed oppositely, so i~l and j~k on the surface). Every boundary
    edge must appear exactly once. Vertex labels are the union-find classes.
    """
    points = [tuple(map(float, p)) for p in points]
    n = len(points)
    parent = list(range(n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(x, y):
        rx, ry = find(x), find(y)
        if rx != ry:
            parent[max(rx, ry)] = min(rx, ry)

    seen = set()
    for (i, j), (k, l) in pairings:
        for (a, b) in ((i, j), (k, l)):
            if (b - a) % n != 1:
                raise NonMatchingGluing(f"({a},{b}) is not a CCW boundary edge")
            if (a, b) in seen:
                raise NonMatchingGluing(f"boundary edge ({a},{b}) paired twice")
            seen.add((a, b))
        union(i, l)
        union(j, k)
    if len(seen) != n:
        raise NonMatchingGluing("every boundary edge must be paired exactly once")

    merged = [find(i) for i in range(n)]
    if labels is None:
        labels = merged
    else:
        labels = [labels[m] for m in merged]

    tris = triangulate_polygon(points)
    faces, half = _face_tables(points, tris, labels)
    gluings = []
    used = set()
    for (i, j), (f, e) in half.items():
        if (i, j) in used:
            continue
        if (j, i) in half:
            gluings.append(((f, e), half[(j, i)]))
            used.update({(i, j), (j, i)})
    for (ij, kl) in pairings:
        gluings.append((half[ij], half[kl]))
    return Surface.build_from_triangles(faces, gluings, tol=tol)


def double_pieces(tris, internal, tol=DEFAULT_TOL) -> Surface:
    """Double of a triangulated flat domain given as a triangle soup.

    tris: list of (labels, coords) for one copy (CCW); internal: half-edge
    pairs glued within the copy. Unmatched half-edges become the boundary,
    glued to the mirrored second copy.
    """
    n = len(tris)
    faces = [(tuple(lab), tuple(tuple(p) for p in pts)) for (lab, pts) in tris]
    # mirror copy: (x, -y), reverse the last two vertices to stay CCW
    mirror_edge = {0: 2, 1: 1, 2: 0}
    for (lab, pts) in tris:
        faces.append(
            (
                (lab[0], lab[2], lab[1]),
                ((pts[0][0], -pts[0][1]), (pts[2][0], -pts[2][1]), (pts[1][0], -pts[1][1])),
            )
        )

    def back(f, e):
        return (f + n, mirror_edge[e])

    gluings = []
    internal_set = set()
    for (a, b) in internal:
        internal_set.add(a)
        internal_set.add(b)
        gluings.append((a, b))
        gluings.append((back(*a), back(*b)))
    for f in range(n):
        for e in range(3):
            if (f, e) not in internal_set:
                gluings.append(((f, e), back(f, e)))
    return Surface.build_from_triangles(faces, gluings, tol=tol)


# ---------------------------------------------------------------------------
# stock examples


def equilateral_triangle(side: float = 1.0):
    return [(0.0, 0.0), (side, 0.0), (side / 2.0, side * math.sqrt(3.0) / 2.0)]


def doubled_equilateral(side: float = 1.0, tol=DEFAULT_TOL) -> Surface:
    return double_polygon_surface(equilateral_triangle(side), tol=tol)


def triangle_30_60_90(hypotenuse: float = 1.0):
    """Angles pi/6, pi/3, pi/2 at vertices 0, 1, 2."""
    h = hypotenuse
    x3 = (0.75 * h, math.sqrt(3.0) / 4.0 * h)
    return [(0.0, 0.0), (h, 0.0), x3]


def doubled_30_60_90(hypotenuse: float = 1.0, tol=DEFAULT_TOL) -> Surface:
    return double_polygon_surface(triangle_30_60_90(hypotenuse), tol=tol)


def doubled_square(side: float = 1.0, tol=DEFAULT_TOL) -> Surface:
    return double_polygon_surface(
        [(0.0, 0.0), (side, 0.0), (side, side), (0.0, side)], tol=tol
    )


# ---------------------------------------------------------------------------
# randomized fixtures


def random_convex_polygon(n: int, rng, min_gap: float = 0.35, jitter: float = 0.25):
    """Random convex polygon with n vertices: sorted angles on a circle with a
    minimum angular gap, mild radial jitter, resampled until convex."""
    for _ in range(1000):
        angles = np.sort(rng.uniform(0.0, 2.0 * math.pi, size=n))
        gaps = np.diff(np.concatenate([angles, [angles[0] + 2.0 * math.pi]]))
        if gaps.min() < min_gap:
            continue
        radii = 1.0 + rng.uniform(-jitter, jitter, size=n)
        pts = [(r * math.cos(a), r * math.sin(a)) for r, a in zip(radii, angles)]
        ok = True
        for i in range(n):
            a, b, c = pts[i - 1], pts[i], pts[(i + 1) % n]
            if geo.cross(geo.sub(b, a), geo.sub(c, b)) <= 1e-6:
                ok = False
                break
        if ok:
            return pts
    raise RuntimeError("failed to sample a convex polygon")


def random_doubled_polygon(n: int, rng, tol=DEFAULT_TOL) -> Surface:
    return double_polygon_surface(random_convex_polygon(n, rng), tol=tol)


def convex_polygon_with_angles(angles, rng, short: dict[int, float] | None = None):
    """Convex polygon with the prescribed interior angles.

    Edge headings are fixed by the angles; edge lengths are sampled and then
    the non-fixed ones are least-squares corrected to close the polygon.
    short maps edge index -> exact length to keep (for tight clusters).
    """
    n = len(angles)
    if abs(sum(angles) - (n - 2) * math.pi) > 1e-9:
        raise ValueError("interior angles must sum to (n-2)*pi")
    headings = []
    h = 0.0
    for i in range(n):
        headings.append(h)
        h += math.pi - angles[(i + 1) % n]
    dirs = np.array([[math.cos(t), math.sin(t)] for t in headings])
    short = short or {}
    free = [i for i in range(n) if i not in short]
    if len(free) < 3:
        raise ValueError("need at least 3 free edges to close the polygon")
    for _ in range(1000):
        lengths = np.ones(n)
        for i, v in short.items():
            lengths[i] = v
        lengths[free] = rng.uniform(0.8, 1.6, size=len(free))
        # correct free lengths to close: dirs[free].T @ x = -residual
        resid = dirs.T @ lengths
        A = dirs[free].T
        corr, *_ = np.linalg.lstsq(A, -resid, rcond=None)
        lengths[free] += corr
        if (lengths > 1e-3).all() and np.linalg.norm(dirs.T @ lengths) < 1e-12:
            pts = [(0.0, 0.0)]
            for i in range(n - 1):
                pts.append(
                    (pts[-1][0] + lengths[i] * dirs[i, 0], pts[-1][1] + lengths[i] * dirs[i, 1])
                )
            if geo.polygon_area(pts) > 0 and geo.is_simple_polygon(pts):
                return pts
    raise RuntimeError("failed to close a polygon with the prescribed angles")
