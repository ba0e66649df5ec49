import math

import numpy as np
import pytest

from flatsphere import geometry as geo
from flatsphere.bounds import delaunay_edge_bound
from flatsphere.builders import random_doubled_polygon
from flatsphere.delaunay import (
    ANGLE_TOL,
    _quad,
    delaunay_triangulation,
    edge_width,
    locate,
)
from flatsphere.errors import NotEnoughVertices
from flatsphere.surface import curvature_gap

from conftest import random_surface

SQRT3 = math.sqrt(3.0)


def test_equilateral_already_delaunay(eq_double):
    T = delaunay_triangulation(eq_double)
    assert T.flips_performed == 0
    assert T.is_delaunay()
    assert T.width == pytest.approx(SQRT3 / 2.0, abs=1e-9)
    assert T.max_circumradius == pytest.approx(1.0 / SQRT3, abs=1e-9)


def test_rescaled_circumradius(eq_double):
    s = (2.0 / SQRT3) ** 0.5
    T = delaunay_triangulation(eq_double.rescaled(s))
    assert T.max_circumradius == pytest.approx(s / SQRT3, abs=1e-9)
    # Delaunay edge bound at unit area, delta = 1/3
    c = delaunay_edge_bound(3, 1.0 / 3.0)
    assert c == pytest.approx(math.sqrt(4.0 / math.pi + 3.0 / (2.0 * math.pi)), abs=1e-12)
    assert T.max_circumradius < 0.5 * c
    assert max(i.length for i in T.edge_infos()) < c


def test_flip_idempotence_and_condition(rng):
    for _ in range(25):
        s = random_surface(rng)
        T = delaunay_triangulation(s)
        assert T.is_delaunay()
        assert T.complex.validate().passes
        again = delaunay_triangulation(T.complex)
        assert again.flips_performed == 0
        for info in T.edge_infos():
            assert info.opposite_angle_sum <= math.pi + ANGLE_TOL


def test_width_against_sampled_oracle(rng):
    # d(e) equals the sampled min distance between opposite quad sides
    for _ in range(6):
        s = random_surface(rng)
        T = delaunay_triangulation(s)
        cx = T.complex
        for (f, e), _ in cx.edges()[:4]:
            A, Q, B, P = _quad(cx, f, e)
            w = edge_width(cx, f, e)
            best = math.inf
            ts = np.linspace(0.0, 1.0, 160)
            for pair in (((A, Q), (B, P)), ((Q, B), (P, A))):
                (u0, u1), (v0, v1) = pair
                us = [(u0[0] + t * (u1[0] - u0[0]), u0[1] + t * (u1[1] - u0[1])) for t in ts]
                vs = [(v0[0] + t * (v1[0] - v0[0]), v0[1] + t * (v1[1] - v0[1])) for t in ts]
                for u in us:
                    for v in vs:
                        d = geo.dist(u, v)
                        if d < best:
                            best = d
            assert w <= best + 1e-12
            assert best - w <= 0.05 * max(1.0, best)


def test_width_vs_relative_systole(rng):
    from flatsphere.enumerator import relative_systole

    for _ in range(10):
        s = random_surface(rng).normalized()
        T = delaunay_triangulation(s)
        rs = relative_systole(s, triangulation=T)
        assert T.width >= rs * rs / (2.0 * T.max_circumradius) - 1e-9


def test_delaunay_edge_bound_random(rng):
    for _ in range(10):
        s = random_surface(rng).normalized()
        T = delaunay_triangulation(s)
        delta = curvature_gap(list(s.curvatures.values()))
        if delta <= 0:
            continue
        c = delaunay_edge_bound(s.num_cone_points, min(delta, 1 / 3))
        assert T.max_circumradius < 0.5 * c + 1e-9
        assert max(i.length for i in T.edge_infos()) < c + 1e-9


def test_not_enough_vertices():
    import flatsphere.surface as sf

    tris = [
        ((0, 1, 1), ((0.0, 0.0), (1.0, 0.0), (0.5, SQRT3 / 2))),
    ]
    with pytest.raises(NotEnoughVertices):
        # a fake 2-vertex complex cannot be Delaunay-triangulated
        s = sf.Surface.build_from_triangles(tris * 2, [], require_sphere=False)
        delaunay_triangulation(s)


def test_locate_round_trip(rng):
    moved = 0
    for _ in range(12):
        s = random_surface(rng)
        T = delaunay_triangulation(s)
        if not T.flips_performed:
            continue
        moved += 1
        f = int(rng.integers(s.num_faces))
        lam = rng.dirichlet([3.0, 3.0, 3.0])
        p = tuple(lam @ s.verts[f])
        g, q = locate(T.complex, s, f, p)
        f2, p2 = locate(s, T.complex, g, q)
        cf1, cp1 = _canon(s, f, p)
        cf2, cp2 = _canon(s, f2, p2)
        assert cf1 == cf2 and geo.dist(cp1, cp2) < 1e-7
    assert moved >= 3


def _canon(surface, f, p):
    from flatsphere import tracer as tr

    return tr._canonical_point(surface, f, tuple(p), 1e-7)
