import math

import numpy as np
import pytest

from flatsphere import geometry as geo
from flatsphere import tracer as tr
from flatsphere.builders import (
    convex_polygon_with_angles,
    double_polygon_surface,
    doubled_square,
)
from flatsphere.delaunay import delaunay_triangulation
from flatsphere.editing import cone_triangle
from flatsphere.enumerator import enumerate_saddle_connections
from flatsphere.errors import CurvatureTooLarge, NoHull, NotSimple
from flatsphere.surface import InfiniteFlatSphere, Surface, curvature_gap
from flatsphere.surgery import (
    added_cone_from_boundary,
    collapse_cluster,
    convex_hull,
    core_of_infinite_sphere,
    count_saddle_connections_infinite,
    epsilon_geometric_forests,
    generalized_surgery,
    hull_existence_condition,
    spanning_tree,
    surgery_along_saddle_connection,
)


def _cluster_surface(ks_cluster, ks_rest, rng, short=0.08):
    ks = list(ks_cluster) + list(ks_rest)
    angles = [math.pi * (1 - k) for k in ks]
    short_map = {i: short for i in range(len(ks_cluster) - 1)}
    pts = convex_polygon_with_angles(angles, rng, short=short_map)
    return double_polygon_surface(pts).normalized()


def _pick_connection(surface, pred):
    T = delaunay_triangulation(surface)
    R = T.min_edge_length
    for _ in range(12):
        for sc in enumerate_saddle_connections(surface, R, triangulation=T):
            if pred(sc):
                return T.complex, sc
        R *= 2.0
    raise AssertionError("no matching connection found")


def test_quarter_curvature_collapse(rng):
    # collapse two curvature-1/4 points: new cone point of curvature 1/2,
    # added cone = doubled triangle with angles pi/2, pi/4, pi/4
    ks = [0.25, 0.25, 0.75, 0.75]
    s = _cluster_surface(ks[:2], ks[2:], rng)
    cx, sc = _pick_connection(
        s, lambda c: sorted(c.endpoints) == [0, 1] and c.endpoints[0] != c.endpoints[1]
    )
    res = surgery_along_saddle_connection(cx, sc)
    assert res.top.validate().passes
    assert res.top.curvatures[res.apex_label] == pytest.approx(0.5, abs=1e-9)
    A, B, C = cone_triangle(0.25, 0.25, sc.length)
    assert res.cone_area == pytest.approx(2 * geo.triangle_area(B, C, A), abs=1e-12)
    # triangle angles are pi/2 at the apex, pi/4 at the base corners
    ang_A = geo.angle_between(geo.sub(B, A), geo.sub(C, A))
    assert ang_A == pytest.approx(math.pi / 2, abs=1e-12)


def test_zero_curvature_forgets_marked_point():
    # a straight polygon vertex doubles to a marked point; surgery forgets it
    pts = [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.9, 0.8), (0.1, 0.9)]
    s = double_polygon_surface(pts)
    marked = [l for l, k in s.curvatures.items() if abs(k) < 1e-12][0]
    cx, sc = _pick_connection(s, lambda c: marked in c.endpoints and c.endpoints[0] != c.endpoints[1])
    area0 = s.area
    res = surgery_along_saddle_connection(cx, sc)
    assert res.cone_area == 0.0
    assert marked not in res.top.cone_angles
    assert res.top.area == pytest.approx(area0, abs=1e-9)
    rep = res.top.validate()
    assert rep.passes and rep.gauss_bonnet_residual < 1e-9


def test_curvature_too_large(pillowcase):
    cx, sc = _pick_connection(
        pillowcase, lambda c: c.endpoints[0] != c.endpoints[1]
    )
    with pytest.raises(CurvatureTooLarge):
        surgery_along_saddle_connection(cx, sc)


def test_not_simple_rejected(rng):
    s = _cluster_surface([0.25, 0.2], [0.8, 0.75], rng)
    T = delaunay_triangulation(s)
    with pytest.raises(NotSimple):
        # a closed connection has equal endpoints
        scs = enumerate_saddle_connections(s, 3.0, triangulation=T)
        closed = [c for c in scs if c.endpoints[0] == c.endpoints[1]][0]
        surgery_along_saddle_connection(T.complex, closed)


def test_single_point_hull(rng):
    s = _cluster_surface([0.25, 0.2], [0.8, 0.75], rng)
    hull = convex_hull(s, [0])
    assert hull.degenerate and hull.area == 0.0


def test_degenerate_hull_pillowcase(pillowcase):
    # two adjacent corners with curvature 1/2: hull = the edge between them
    T = delaunay_triangulation(pillowcase)
    tree = spanning_tree(T.complex, [0, 1])
    hull = convex_hull(T.complex, [0, 1], tree=tree)
    assert hull.degenerate
    assert hull.boundary_length == pytest.approx(2.0 * tree[0].length, abs=1e-9)


def test_hull_existence_condition(rng):
    s = _cluster_surface([0.22, 0.2, 0.22], [0.68, 0.68], rng, short=0.05)
    T = delaunay_triangulation(s)
    tree = spanning_tree(T.complex, [0, 1, 2])
    ok, witness = hull_existence_condition(T.complex, tree)
    assert ok and witness is None
    # a long tree on the same surface fails: short crossers exist
    far_tree = spanning_tree(T.complex, [0, 3])
    ok2, witness2 = hull_existence_condition(T.complex, far_tree)
    if not ok2:
        assert witness2 is not None
        assert witness2.length < 2.0 * sum(x.length for x in far_tree)


def test_hull_curvature_sum_guard(rng):
    s = _cluster_surface([0.25, 0.2], [0.8, 0.75], rng)
    with pytest.raises(NoHull):
        convex_hull(s, [0, 1, 2, 3])  # sum = 2 > 1


def test_generalized_surgery_full(rng):
    s = _cluster_surface([0.25, 0.2, 0.25], [0.65, 0.65], rng)
    T = delaunay_triangulation(s)
    cluster = [0, 1, 2]
    hull = convex_hull(T.complex, cluster, tree=spanning_tree(T.complex, cluster))
    assert not hull.degenerate
    cone = hull.added_cone()
    res = generalized_surgery(T.complex, [hull])
    top = res.top
    assert top.validate().passes
    ksum = sum(s.curvatures[c] for c in cluster)
    assert top.curvatures[res.apex_labels[0]] == pytest.approx(ksum, abs=1e-9)
    # area identity, with Area(C_D) computed independently by development
    assert s.area == pytest.approx(top.area - (cone.area - hull.area), abs=1e-9)
    assert res.added_area[0] == pytest.approx(cone.area - hull.area, abs=1e-9)
    # infinitesimal sphere data
    X = res.infinitesimal[0]
    assert X.pole_curvature == pytest.approx(2.0 - ksum, abs=1e-9)
    assert sorted(X.conical_curvatures.values()) == pytest.approx(
        sorted(s.curvatures[c] for c in cluster), abs=1e-9
    )
    consistency = sum(X.conical_curvatures.values()) + X.pole_curvature
    assert consistency == pytest.approx(2.0, abs=1e-9)


def test_degenerate_hull_reduces_to_pairwise(rng):
    # degenerate pair hulls need cone angles >= pi at both ends (k <= 1/2)
    s = _cluster_surface([0.45, 0.4], [0.6, 0.55], rng, short=0.06)
    T = delaunay_triangulation(s)
    tree = spanning_tree(T.complex, [0, 1])
    hull = convex_hull(T.complex, [0, 1], tree=tree)
    assert hull.degenerate
    res = generalized_surgery(T.complex, [hull])
    pair = surgery_along_saddle_connection(T.complex, tree[0])
    assert res.top.area == pytest.approx(pair.top.area, abs=1e-9)
    assert sorted(res.top.curvatures.values()) == pytest.approx(
        sorted(pair.top.curvatures.values()), abs=1e-9
    )


def test_collapse_order_independence(rng):
    s = _cluster_surface([0.25, 0.2, 0.25], [0.65, 0.65], rng)
    T = delaunay_triangulation(s)
    cluster = [0, 1, 2]
    hull = convex_hull(T.complex, cluster, tree=spanning_tree(T.complex, cluster))
    cone = hull.added_cone()
    r1 = generalized_surgery(T.complex, [hull], order="shortest")
    r2 = generalized_surgery(T.complex, [hull], order="longest")
    assert r1.top.area == pytest.approx(r2.top.area, abs=1e-9)
    assert r1.added_area[0] == pytest.approx(r2.added_area[0], abs=1e-9)
    assert r1.added_area[0] == pytest.approx(cone.area - hull.area, abs=1e-9)
    nz1 = sorted(v for v in r1.top.curvatures.values() if v > 1e-9)
    nz2 = sorted(v for v in r2.top.curvatures.values() if v > 1e-9)
    assert nz1 == pytest.approx(nz2, abs=1e-9)
    # the development-based cone is order independent by construction; its
    # boundary signature pins both collapses to the same isometry class
    assert cone.boundary_signature() == hull.added_cone().boundary_signature()


def test_remainder_isometry(rng):
    s = _cluster_surface([0.25, 0.2], [0.78, 0.77], rng)
    T = delaunay_triangulation(s)
    cx, sc = _pick_connection(
        s, lambda c: sorted(set(c.endpoints)) == [0, 1]
    )
    res = surgery_along_saddle_connection(cx, sc)
    drift = _remainder_drift(cx, res.top, sc, rng, pairs=20)
    assert drift < 1e-7


def _fingerprint(surface: Surface, f: int):
    return (
        tuple(int(x) for x in surface.labels[f]),
        tuple(round(float(x), 10) for x in surface.verts[f].ravel()),
    )


def _remainder_drift(before: Surface, after: Surface, sc, rng, pairs=20):
    """Trace identical geodesics through faces untouched by the surgery; the
    far endpoint's chart data must agree (the remainder embeds isometrically)."""
    touched = set(sc.endpoints)
    labels = [l for l in before.cone_angles if l not in touched]
    after_prints = {_fingerprint(after, f): f for f in range(after.num_faces)}
    worst = 0.0
    done = 0
    attempts = 0
    while done < pairs and attempts < 2000:
        attempts += 1
        label = labels[int(rng.integers(len(labels)))]
        corners_b = before.corners_of_vertex(label)
        f, c = corners_b[int(rng.integers(len(corners_b)))]
        if _fingerprint(before, f) not in after_prints:
            continue
        ang = before.corner_angle(f, c)
        frac = float(rng.uniform(0.15, 0.85))
        v = tuple(before.verts[f, c])
        ray = geo.normalize(geo.sub(tuple(before.verts[f, (c + 1) % 3]), v))
        d = geo.rotate(ray, frac * ang)
        budget = float(rng.uniform(0.05, 0.4))
        try:
            t1 = tr.trace(before, tr.ConePointStart(f, c), d, budget)
        except Exception:
            continue
        if t1.end_status[0] != "budget":
            continue
        # every visited face must survive the surgery verbatim
        if any(_fingerprint(before, t.face) not in after_prints for t in t1.threads):
            continue
        f2 = after_prints[_fingerprint(before, f)]
        try:
            t2 = tr.trace(after, tr.ConePointStart(f2, c), d, budget)
        except Exception:
            continue
        if t2.end_status[0] != "budget":
            continue
        p1 = t1.end_status[1].xy
        p2 = t2.end_status[1].xy
        worst = max(worst, abs(t1.total_length - t2.total_length), geo.dist(p1, p2))
        done += 1
    assert done >= pairs, f"only {done} comparable geodesic pairs"
    return worst


def _truncated_cone_sphere(A, tol=1e-9):
    """Infinite sphere: a cone of angle A truncated at radius 2, with the
    apex (labeled 0) plus one zero-curvature marked point (1) at distance 1
    on the bisector. Labels: 0 apex, 1 marked, 2 seam point B1~B2, 3 outer
    midpoint."""
    O = (0.0, 0.0)
    M = (math.cos(A / 2), math.sin(A / 2))
    B1 = (2.0, 0.0)
    Bm = (2.0 * math.cos(A / 2), 2.0 * math.sin(A / 2))
    B2 = (2.0 * math.cos(A), 2.0 * math.sin(A))
    tris = [
        ((0, 2, 1), (O, B1, M)),
        ((1, 2, 3), (M, B1, Bm)),
        ((1, 3, 2), (M, Bm, B2)),
        ((0, 1, 2), (O, M, B2)),
    ]
    gluings = [
        ((0, 0), (3, 2)),  # seam: O->B1 ~ B2->O
        ((0, 1), (1, 0)),  # B1-M
        ((0, 2), (3, 0)),  # M-O
        ((1, 2), (2, 0)),  # Bm-M
        ((2, 2), (3, 1)),  # B2-M
    ]
    s = Surface.build_from_triangles(tris, gluings, tol=tol, require_sphere=False)
    boundary = [(1, 1), (2, 1)]  # B1->Bm, Bm->B2
    k_pole = 1.0 + A / (2.0 * math.pi)  # the end looks like a cone of angle A
    return InfiniteFlatSphere(s, boundary, k_pole)


def test_core_degenerate_iff_wide_cone():
    X = _truncated_cone_sphere(math.pi + 0.3)
    core, legs, degenerate = core_of_infinite_sphere(X)
    assert degenerate
    X2 = _truncated_cone_sphere(math.pi - 0.5)
    core2, legs2, degenerate2 = core_of_infinite_sphere(X2)
    assert not degenerate2
    assert core2 is not None
    # boundary corners of the complement have angle >= pi: equivalently every
    # leg-to-leg right angle is >= pi (checked by the tightening fixed point)


def test_infinite_census_cone_with_marked_point():
    X = _truncated_cone_sphere(math.pi - 0.5)
    count, log2_bound, ok, stats = count_saddle_connections_infinite(X)
    assert ok
    assert count >= 1
    assert not stats.get("cap_hit", False)
    # degenerate core: the chain has one segment, so exactly one connection
    X2 = _truncated_cone_sphere(math.pi + 0.3)
    count2, _, ok2, stats2 = count_saddle_connections_infinite(X2)
    assert ok2 and count2 == 1 and stats2["degenerate"]


def test_infinite_census_from_surgery(rng):
    s = _cluster_surface([0.25, 0.2, 0.25], [0.65, 0.65], rng)
    T = delaunay_triangulation(s)
    cluster = [0, 1, 2]
    hull = convex_hull(T.complex, cluster, tree=spanning_tree(T.complex, cluster))
    res = generalized_surgery(T.complex, [hull])
    X = res.infinitesimal[0]
    assert X.curvature_gap() > 0
    count, log2_bound, ok, stats = count_saddle_connections_infinite(X)
    assert ok
    assert count >= len(cluster) - 1
    assert stats["deepest_found"] < stats["cap"]


def test_no_cylinders_on_infinite_sphere(rng):
    """Positive-gap infinite non-negative spheres carry no regular closed
    geodesic: no boundary chain of core connections ever closes up."""
    from flatsphere.enumerator import enumerate_cylinders
    from flatsphere.delaunay import Triangulation

    s = _cluster_surface([0.25, 0.2, 0.25], [0.65, 0.65], rng)
    T = delaunay_triangulation(s)
    cluster = [0, 1, 2]
    hull = convex_hull(T.complex, cluster, tree=spanning_tree(T.complex, cluster))
    res = generalized_surgery(T.complex, [hull])
    X = res.infinitesimal[0]
    core, _, degenerate = core_of_infinite_sphere(X)
    assert not degenerate
    cx = core.complex
    fake_T = Triangulation(cx, cx, 0)
    cyls = enumerate_cylinders(cx, 10.0 * math.sqrt(cx.area), triangulation=fake_T)
    assert cyls == []


def test_epsilon_forests(rng):
    s = _cluster_surface([0.25, 0.2, 0.25], [0.65, 0.65], rng, short=0.05)
    scs, forests = epsilon_geometric_forests(s, 0.2)
    assert all(sc.length < 0.2 for sc in scs)
    for combo in forests:
        labels = set()
        for i in combo:
            labels.update(scs[i].endpoints)
        assert len(labels) > len(combo)  # acyclic
    assert any(len(c) == 2 for c in forests)
