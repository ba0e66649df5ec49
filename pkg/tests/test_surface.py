import math

import pytest
from hypothesis import given, strategies as st

from flatsphere import geometry as geo
from flatsphere.builders import (
    doubled_equilateral,
    doubled_30_60_90,
    double_polygon_surface,
    equilateral_triangle,
)
from flatsphere.errors import NonMatchingGluing, NotASphere
from flatsphere.surface import Surface, curvature_gap

SQRT3 = math.sqrt(3.0)


def test_doubled_equilateral_invariants(eq_double):
    s = eq_double
    assert s.num_faces == 2
    assert s.num_cone_points == 3
    for angle in s.cone_angles.values():
        assert angle == pytest.approx(2.0 * math.pi / 3.0, abs=1e-12)
    for k in s.curvatures.values():
        assert k == pytest.approx(2.0 / 3.0, abs=1e-12)
    assert s.area == pytest.approx(SQRT3 / 2.0, abs=1e-12)
    rep = s.validate()
    assert rep.passes and rep.gauss_bonnet_residual < 1e-9


def test_non_matching_gluing_rejected():
    tris = [
        ((0, 1, 2), ((0.0, 0.0), (1.0, 0.0), (0.5, SQRT3 / 2))),
        ((0, 2, 1), ((0.0, 0.0), (0.5, -SQRT3 / 2), (1.1, 0.0))),  # longer edge
    ]
    gluings = [((0, 0), (1, 2)), ((0, 1), (1, 1)), ((0, 2), (1, 0))]
    with pytest.raises(NonMatchingGluing):
        Surface.build_from_triangles(tris, gluings)


def test_doubled_306090_cone_angles(tri_306090):
    angles = sorted(tri_306090.cone_angles.values())
    assert angles == pytest.approx([math.pi / 3, 2 * math.pi / 3, math.pi], abs=1e-12)
    ks = sorted(tri_306090.curvatures.values())
    assert ks == pytest.approx([1 / 2, 2 / 3, 5 / 6], abs=1e-12)
    assert tri_306090.validate().passes


def test_not_a_sphere_unglued():
    tris = [((0, 1, 2), ((0.0, 0.0), (1.0, 0.0), (0.5, SQRT3 / 2)))]
    with pytest.raises(NotASphere):
        Surface.build_from_triangles(tris, [])


def test_curvature_gap_examples():
    assert curvature_gap([2 / 3, 2 / 3, 2 / 3]) == pytest.approx(1 / 3, abs=1e-15)
    assert curvature_gap([1 / 2, 1 / 2, 1 / 2, 1 / 2]) == pytest.approx(0.0, abs=1e-15)
    # the empty subset always yields 1, so the gap never exceeds 1
    assert curvature_gap([7.0]) <= 1.0


@given(st.lists(st.floats(0.01, 0.99), min_size=1, max_size=8), st.randoms())
def test_curvature_gap_permutation_invariant(ks, rnd):
    shuffled = list(ks)
    rnd.shuffle(shuffled)
    assert curvature_gap(ks) == pytest.approx(curvature_gap(shuffled), abs=1e-12)


def test_curvature_gap_meet_in_the_middle():
    ks = [0.02 + 0.001 * i for i in range(30)]
    small = curvature_gap(ks[:20])
    # exact and MITM agree on the overlap regime
    assert curvature_gap(ks) <= small + 1e-12


def test_validate_detects_tampering(eq_double):
    import copy

    s = doubled_equilateral()
    s.curvatures[0] += 0.01
    rep = s.validate()
    assert not rep.passes
    assert rep.gauss_bonnet_residual == pytest.approx(0.01, abs=1e-12)


def test_json_round_trip(tri_306090):
    s = tri_306090
    text = s.to_json()
    s2 = Surface.from_json(text)
    assert s2.num_faces == s.num_faces
    assert s2.area == pytest.approx(s.area, abs=1e-12)
    assert sorted(s2.cone_angles.values()) == pytest.approx(
        sorted(s.cone_angles.values()), abs=1e-12
    )


def test_json_accepts_decimal_strings():
    data = {
        "triangles": [
            {"id": 0, "vertices": [["0.0", "0.0"], ["1.0", "0.0"], ["0.5", "0.8660254037844386"]],
             "labels": [0, 1, 2]},
            {"id": 1, "vertices": [[0.0, 0.0], [0.5, -0.8660254037844386], [1.0, 0.0]],
             "labels": [0, 2, 1]},
        ],
        "gluings": [{"a": [0, 0], "b": [1, 2]}, {"a": [0, 1], "b": [1, 1]},
                     {"a": [0, 2], "b": [1, 0]}],
    }
    s = Surface.from_json_dict(data)
    assert s.validate().passes


def test_develop_identity_and_rhombus(eq_double):
    s = eq_double
    placements = s.develop([0])
    assert placements[0].c == 1.0 and placements[0].tx == 0.0

    placements = s.develop([0, 1], [0])
    ge = int(s.adj_edge[0, 0])
    img = placements[1](tuple(s.verts[1, (ge + 2) % 3]))
    # the far vertex of the neighbor forms a rhombus of side 1 below edge 0
    assert geo.dist(img, (0.5, -SQRT3 / 2)) < 1e-12


def test_develop_broken_corridor(eq_double):
    from flatsphere.errors import BrokenCorridor

    with pytest.raises(BrokenCorridor):
        eq_double.develop([0, 0], [0])


def test_develop_holonomy_around_cone_point(eq_double):
    """Developing the closed counterclockwise corner fan around a cone point
    gives rotational holonomy +theta (mod 2*pi): the package's orientation
    convention fixes the sign."""
    s = eq_double
    label = 0
    fan = []
    cur = s.corners_of_vertex(label)[0]
    start = cur
    while True:
        fan.append(cur)
        cur = s.ccw_next_corner(*cur)
        if cur == start:
            break
    faces = [f for (f, c) in fan] + [start[0]]
    edges = [(c + 2) % 3 for (f, c) in fan]
    placements = s.develop(faces, edges)
    rot = placements[-1].angle
    theta = s.cone_angles[label]
    off = (rot - theta) % (2 * math.pi)
    assert min(off, 2 * math.pi - off) < 1e-9


def test_marked_point_polygon():
    # a straight vertex doubles into a zero-curvature marked point
    pts = [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), (0.5, 0.9)]
    s = double_polygon_surface(pts)
    assert s.validate().passes
    ks = sorted(s.curvatures.values())
    assert ks[0] == pytest.approx(0.0, abs=1e-12)


def test_corner_offsets_cover_cone_angle(eq_double):
    offs = eq_double.corner_offsets()
    for label, theta in eq_double.cone_angles.items():
        corners = eq_double.corners_of_vertex(label)
        total = sum(eq_double.corner_angle(f, c) for (f, c) in corners)
        assert total == pytest.approx(theta, abs=1e-12)
        assert min(offs[c] for c in corners) == pytest.approx(0.0, abs=1e-12)
