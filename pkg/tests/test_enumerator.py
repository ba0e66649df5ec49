import math
from collections import Counter

import pytest

from flatsphere import geometry as geo
from flatsphere import tracer as tr
from flatsphere.builders import doubled_30_60_90, doubled_equilateral, doubled_square
from flatsphere.delaunay import delaunay_triangulation
from flatsphere.enumerator import (
    connection_iota,
    connection_trajectory,
    counting_functions,
    enumerate_cylinders,
    enumerate_saddle_connections,
    relative_systole,
)
from flatsphere.examples import build_example
from flatsphere.surface import curvature_gap

from conftest import random_surface
from oracles import naive_corridor_enumeration

SQRT3 = math.sqrt(3.0)


def test_equilateral_edges_only(eq_double):
    scs = enumerate_saddle_connections(eq_double, 1.01)
    assert len(scs) == 3
    assert all(sc.length == pytest.approx(1.0, abs=1e-12) for sc in scs)
    assert all(connection_iota(eq_double, sc) == 0 for sc in scs)
    assert enumerate_saddle_connections(eq_double, 0.5) == []


def test_relative_systoles(eq_double, tri_306090):
    assert relative_systole(eq_double) == pytest.approx(1.0, abs=1e-12)
    assert relative_systole(tri_306090) == pytest.approx(0.5, abs=1e-12)
    # homothety equivariance
    assert relative_systole(eq_double.rescaled(2.5)) == pytest.approx(2.5, abs=1e-9)


def test_naive_oracle_equivalence(rng):
    surfaces = [doubled_equilateral(), doubled_30_60_90()]
    import numpy as np

    surfaces.append(random_surface(np.random.default_rng(1), n=3))
    for s in surfaces:
        T = delaunay_triangulation(s)
        rs = relative_systole(s, triangulation=T)
        R = 3.0 * rs
        fast = enumerate_saddle_connections(s, R, triangulation=T)
        assert max((len(sc.faces) for sc in fast), default=0) <= 14
        slow = naive_corridor_enumeration(T.complex, R, 16)
        fast_multiset = Counter()
        for sc in fast:
            fast_multiset[(tuple(sorted(sc.endpoints)), round(sc.length, 7))] += 2
        assert Counter(dict(Counter(map(tuple, slow)))) == fast_multiset


def test_no_duplicate_canonical_keys(rng):
    for _ in range(8):
        s = random_surface(rng).normalized()
        scs = enumerate_saddle_connections(s, 3.0)
        keys = [sc.canonical_key() for sc in scs]
        assert len(keys) == len(set(keys))


def test_retrace_terminates_at_claimed_endpoint(rng):
    for _ in range(6):
        s = random_surface(rng).normalized()
        T = delaunay_triangulation(s)
        scs = enumerate_saddle_connections(s, 2.5, triangulation=T)
        for sc in scs:
            f, c, d = sc.start
            traj = tr.trace(T.complex, tr.ConePointStart(f, c), d, sc.length + 1e-7)
            assert traj.end_status[0] == "cone"
            assert traj.end_status[1] == sc.endpoints[1]
            assert traj.total_length == pytest.approx(sc.length, abs=1e-7)


def test_delta_witness_connection_found():
    theta, m = 0.3, 3
    ex = build_example("delta-witness", theta=theta, m=m)
    s = ex.surface
    L = 2.0 * math.sin(m * theta / 2.0)
    scs = enumerate_saddle_connections(s, L * 1.01)
    lengths = [sc.length for sc in scs]
    assert any(abs(l - L) < 1e-9 for l in lengths)
    match = [sc for sc in scs if abs(sc.length - L) < 1e-9]
    T = delaunay_triangulation(s)
    assert any(connection_iota(T.complex, sc) == m - 1 for sc in match)


def test_cylinders_equilateral(eq_double):
    cyls = enumerate_cylinders(eq_double, 3.1, with_iota=True)
    Cs = sorted(round(c.circumference, 6) for c in cyls)
    assert Cs == [round(SQRT3, 6)] * 3 + [3.0]
    fag = [c for c in cyls if abs(c.circumference - 3.0) < 1e-9][0]
    assert fag.iota == 3
    assert fag.height == pytest.approx(SQRT3 / 2.0, abs=1e-9)


def test_cylinders_pillowcase(pillowcase):
    cyls = enumerate_cylinders(pillowcase, 2.9)
    Cs = sorted(round(c.circumference, 6) for c in cyls)
    assert Cs == [2.0, 2.0, round(2.0 * math.sqrt(2.0), 6), round(2.0 * math.sqrt(2.0), 6)]
    for c in cyls:
        if abs(c.circumference - 2.0) < 1e-9:
            assert c.height == pytest.approx(1.0, abs=1e-9)


def test_closed_geodesic_lower_bound(rng):
    # normalized circumference >= sqrt(pi * delta) on convex spheres
    for _ in range(6):
        s = random_surface(rng).normalized()
        delta = curvature_gap(list(s.curvatures.values()))
        if delta <= 0:
            continue
        cyls = enumerate_cylinders(s, 3.0)
        for c in cyls:
            assert c.circumference >= math.sqrt(math.pi * delta) - 1e-9
    # and below sqrt(pi delta) the list is empty
    s = doubled_equilateral().normalized()
    delta = 1.0 / 3.0
    assert enumerate_cylinders(s, math.sqrt(math.pi * delta) * 0.999) == []


def test_counting_functions_monotone(eq_double):
    grid = [0.25 * k for k in range(1, 17)]
    rows = counting_functions(eq_double, grid)
    assert all(rows[i][1] <= rows[i + 1][1] for i in range(len(rows) - 1))
    assert all(rows[i][2] <= rows[i + 1][2] for i in range(len(rows) - 1))
    assert all(ncg <= nsc for (_, nsc, ncg) in rows)
    # below the normalized relative systole both counts vanish
    rs = relative_systole(eq_double.normalized())
    for (r, nsc, ncg) in rows:
        if r < rs - 1e-9:
            assert nsc == 0 and ncg == 0


def test_threads_param_matches_serial(rng):
    s = random_surface(rng).normalized()
    a = enumerate_saddle_connections(s, 2.5, threads=1)
    b = enumerate_saddle_connections(s, 2.5, threads=4)
    assert [(x.endpoints, round(x.length, 9)) for x in a] == [
        (x.endpoints, round(x.length, 9)) for x in b
    ]


def test_connection_iota_via_threads(eq_double):
    # the sqrt(3) closed connections on the doubled equilateral are the
    # doubled altitudes: simple (iota 0)
    scs = enumerate_saddle_connections(eq_double, 1.8, with_iota=True)
    for sc in scs:
        assert sc.iota == 0
