import math

import pytest

from flatsphere import geometry as geo
from flatsphere import tracer as tr
from flatsphere.delaunay import delaunay_triangulation
from flatsphere.errors import ContainedInEdge, TangentialOverlap

from conftest import random_direction, random_interior_point, random_surface
from oracles import brute_force_iota

SQRT3 = math.sqrt(3.0)
FAGNANO_DIR = (math.cos(math.pi / 3.0), math.sin(math.pi / 3.0))


def test_single_thread_budget(eq_double):
    t = tr.trace(eq_double, (0, (0.2, 0.1)), (1.0, 0.0), 0.3)
    assert t.num_threads == 1
    assert t.end_status[0] == "budget"
    assert t.total_length == pytest.approx(0.3, abs=1e-12)


def test_fagnano_closes(eq_double):
    t = tr.trace(eq_double, (0, (0.5, 0.0)), FAGNANO_DIR, 3.0)
    assert t.num_threads == 6
    assert t.total_length == pytest.approx(3.0, abs=1e-9)
    sp = t.end_status[1]
    cf, cp = tr._canonical_point(eq_double, sp.face, sp.xy, 1e-7)
    cf0, cp0 = tr._canonical_point(eq_double, 0, (0.5, 0.0), 1e-7)
    assert cf == cf0 and geo.dist(cp, cp0) < 1e-9
    d_end = t.threads[-1].direction
    # same direction after folding back to the start chart
    assert abs(abs(d_end[0]) - abs(FAGNANO_DIR[0])) < 1e-9


def test_fagnano_iota_open_and_closed(eq_double):
    t = tr.trace(eq_double, (0, (0.5, 0.0)), FAGNANO_DIR, 3.0)
    assert tr.self_intersection_number(t) == 2
    t.closed = True
    assert tr.self_intersection_number(t) == 3


def test_gamma_x_witness(tri_306090):
    for r in (0.1, 0.3, 0.6):
        d = (math.cos(5 * math.pi / 6), math.sin(5 * math.pi / 6))
        t = tr.trace(tri_306090, (0, (r, 0.0)), d, SQRT3 * r)
        assert t.total_length == pytest.approx(SQRT3 * r, abs=1e-9)
        sp = t.end_status[1]
        cf, cp = tr._canonical_point(tri_306090, sp.face, sp.xy, 1e-7)
        cf0, cp0 = tr._canonical_point(tri_306090, 0, (r, 0.0), 1e-7)
        assert cf == cf0 and geo.dist(cp, cp0) < 1e-7
        assert tr.self_intersection_number(t) == 1


def test_single_thread_iota_zero(eq_double):
    t = tr.trace(eq_double, (0, (0.2, 0.1)), (1.0, 0.0), 0.3)
    assert tr.self_intersection_number(t) == 0


def test_cone_point_termination(eq_double):
    # aim straight at a vertex from inside
    t = tr.trace(eq_double, (0, (0.5, 0.2)), geo.normalize((0.0, SQRT3 / 2 - 0.2)), 5.0)
    assert t.end_status == ("cone", 2)
    assert t.total_length < 5.0


def test_trace_along_edge(eq_double):
    t = tr.trace(eq_double, (0, (0.25, 0.0)), (1.0, 0.0), 10.0)
    assert t.along_edge
    assert t.end_status == ("cone", 1)
    assert t.total_length == pytest.approx(0.75, abs=1e-12)
    with pytest.raises(ContainedInEdge):
        tr.decompose_threads(t)


def test_tangential_overlap_detected(eq_double):
    # twice around the Fagnano geodesic retraces itself
    t = tr.trace(eq_double, (0, (0.5, 0.0)), FAGNANO_DIR, 6.0)
    with pytest.raises(TangentialOverlap):
        tr.self_intersection_number(t)


def test_reversibility(rng):
    for _ in range(20):
        s = random_surface(rng)
        f, p = random_interior_point(s, rng)
        d = random_direction(rng)
        budget = float(rng.uniform(0.5, 4.0))
        t = tr.trace(s, (f, p), d, budget)
        if t.end_status[0] != "budget":
            continue
        sp = t.end_status[1]
        d_end = t.threads[-1].direction
        back = tr.trace(s, (sp.face, sp.xy), (-d_end[0], -d_end[1]), budget)
        assert back.num_threads == t.num_threads
        for a, b in zip(back.threads, reversed(t.threads)):
            assert a.face == b.face
            assert geo.dist(a.entry, b.exit) < 1e-8
            assert geo.dist(a.exit, b.entry) < 1e-8


def test_iota_matches_brute_force(rng):
    checked = 0
    for _ in range(60):
        s = random_surface(rng)
        from flatsphere.enumerator import relative_systole

        T = delaunay_triangulation(s)
        rs = T.min_edge_length
        f, p = random_interior_point(T.complex, rng)
        d = random_direction(rng)
        budget = float(rng.uniform(2.0, 20.0)) * rs
        try:
            t = tr.trace(T.complex, (f, p), d, budget)
            fast = tr.self_intersection_number(t)
        except TangentialOverlap:
            continue
        slow = brute_force_iota(t)
        assert fast == slow
        checked += 1
    assert checked > 40


def test_combinatorial_vs_intersections(rng):
    # m >= sqrt(2 * iota) for every traced trajectory
    for _ in range(25):
        s = random_surface(rng)
        T = delaunay_triangulation(s)
        f, p = random_interior_point(T.complex, rng)
        t = tr.trace(T.complex, (f, p), random_direction(rng), float(rng.uniform(1, 8)))
        if t.end_status[0] != "budget":
            continue
        _, m = tr.decompose_threads(t, T)
        iota = tr.self_intersection_number(t)
        assert m >= math.sqrt(2.0 * iota) - 1e-9


def test_corner_sides_fagnano(eq_double):
    t = tr.trace(eq_double, (0, (0.5, 0.0)), FAGNANO_DIR, 3.0)
    sides = tr.corner_sides(t)
    # interior threads alternate around distinct cone points: all switches
    switches = tr.corner_switches(t)
    inner_pairs = [i for i in range(1, t.num_threads - 2)]
    for i in inner_pairs:
        assert i in switches


def test_vertex_thread_counts_both_sides(eq_double):
    # a trajectory ending at a vertex: its final thread cuts on both sides
    t = tr.trace(eq_double, (0, (0.5, 0.2)), geo.normalize((0.0, SQRT3 / 2 - 0.2)), 5.0)
    corner, side = tr.thread_corner_side(eq_double, t.threads[-1])
    assert side == tr.BOTH
    assert tr.is_switch(side, tr.LEFT) and tr.is_switch(side, tr.RIGHT)


def test_same_side_spiral_is_not_switch(tri_306090):
    # gamma_x wraps the pi/3 cone on one side: no switches among its middle threads
    r = 0.4
    d = (math.cos(5 * math.pi / 6), math.sin(5 * math.pi / 6))
    t = tr.trace(tri_306090, (0, (r, 0.0)), d, SQRT3 * r)
    sides = [s for (_, s) in tr.corner_sides(t)][1:-1]
    assert all(s == sides[0] for s in sides)
    assert tr.corner_switches(t) == []
