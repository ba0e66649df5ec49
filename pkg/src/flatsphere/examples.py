"""Fixture builders for the witness families used throughout the test and
verification suites, each with a designated trajectory and its closed-form
quantities."""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .builders import (
    double_pieces,
    doubled_30_60_90,
    glue_polygon,
    random_doubled_polygon,
)
from .errors import ParamOutOfRange
from .surface import Surface

SQRT3 = math.sqrt(3.0)


@dataclass
class ExampleFamily:
    family: str
    params: dict
    surface: Surface
    designated: dict = field(default_factory=dict)
    expected: dict = field(default_factory=dict)


def fagnano_cut(t: float) -> ExampleFamily:
    """Equilateral side-1 billiard with its corner swapped for a scaled copy's
    truncation, doubled: carries a regular closed geodesic of length 3t.

    The construction glues the two truncated triangles along their side-t/3
    cuts; its doubled area is sqrt(3)/2 + (7*sqrt(3)/18) t^2 (the magnitude of
    the t^2 coefficient matches the source example; the constructed surface
    determines the sign).
    """
    if not (0.0 < t < 1.0):
        raise ParamOutOfRange(f"fagnano-cut needs 0 < t < 1, got {t!r}")
    c, s = 0.5, SQRT3 / 2.0
    # big truncated triangle: quad [cutB, x2, x3, cutA] in the unit chart
    q1 = [(t / 3.0, 0.0), (1.0, 0.0), (0.5, s), (t / 6.0, t * s / 3.0)]
    # small truncated triangle, same chart orientation; the cut is glued by an
    # orientation-preserving isometry, which swaps the cut endpoints: the
    # small copy's cut corners take labels 3 (at its base) and 0 (on its slant)
    q2 = [(t / 3.0, 0.0), (t, 0.0), (t / 2.0, t * s), (t / 6.0, t * s / 3.0)]
    # labels: 0 = cutB ~ cutA', 1 = x2, 2 = x3, 3 = cutA ~ cutB', 4 = x2t, 5 = x3t
    tris = [
        ((0, 1, 3), (q1[0], q1[1], q1[3])),
        ((1, 2, 3), (q1[1], q1[2], q1[3])),
        ((3, 4, 5), (q2[0], q2[1], q2[2])),
        ((3, 5, 0), (q2[0], q2[2], q2[3])),
    ]
    # face0 = (cutB, x2, cutA), face1 = (x2, x3, cutA): q1 diagonal x2-cutA;
    # face2/face3 split q2 along its (cutB', x3t) diagonal; the cut glues
    # face0 edge 2 (3 -> 0) to face3 edge 2 (0 -> 3)
    internal = [
        ((0, 1), (1, 2)),
        ((2, 2), (3, 0)),
        ((0, 2), (3, 2)),
    ]
    surface = double_pieces(tris, internal)
    # Fagnano of the scaled copy: starts at the midpoint of its bottom edge
    start_pt = (t / 2.0, 0.0)
    start_face = 2  # (cutB', x2t, x3t) contains the bottom edge
    designated = {
        "start": (start_face, start_pt),
        "direction": (math.cos(math.pi / 3.0), math.sin(math.pi / 3.0)),
        "budget": 3.0 * t,
        "closed": True,
    }
    expected = {
        "geodesic_length": 3.0 * t,
        "area": SQRT3 / 2.0 + 7.0 * SQRT3 / 18.0 * t * t,
        "area_t2_coefficient_abs": 7.0 * SQRT3 / 18.0,
        "curvatures": sorted([2.0 / 3.0] * 4 + [-1.0 / 3.0] * 2),
    }
    return ExampleFamily("fagnano-cut", {"t": t}, surface, designated, expected)


def b2_witness(x: float) -> ExampleFamily:
    """Doubled 30-60-90 triangle with the trajectory gamma_x from the point at
    distance x along the hypotenuse: one self-intersection, length sqrt(3)*x."""
    if not (0.0 < x < 1.0):
        raise ParamOutOfRange(f"b2-witness needs 0 < x < 1, got {x!r}")
    surface = doubled_30_60_90()
    designated = {
        "start": (0, (x, 0.0)),
        "direction": (math.cos(5.0 * math.pi / 6.0), math.sin(5.0 * math.pi / 6.0)),
        "budget": SQRT3 * x,
        "closed": False,
    }
    expected = {
        "length": SQRT3 * x,
        "iota": 1,
        "returns_to_start": True,
        "cone_angles": sorted([math.pi / 3.0, 2.0 * math.pi / 3.0, math.pi]),
    }
    return ExampleFamily("b2-witness", {"x": x}, surface, designated, expected)


def c2_witness(t: float) -> ExampleFamily:
    """Isosceles trapezoid (from the pi/6-apex isosceles triangle) with a
    scaled equilateral cap, self-glued: the two cap altitudes form a saddle
    connection of length sqrt(3)*t with one self-intersection."""
    if not (0.0 < t < 1.0):
        raise ParamOutOfRange(f"c2-witness needs 0 < t < 1, got {t!r}")
    h = 0.5 * math.tan(5.0 * math.pi / 12.0)
    y1 = (0.5, h)
    xm = (0.5 - 0.5 * t, h * (1.0 - t))  # x2 (cap lower-left)
    xp = (0.5 + 0.5 * t, h * (1.0 - t))  # x2' (cap lower-right)
    x1 = (0.5, h * (1.0 - t) + SQRT3 * t / 2.0)
    pts = [(0.0, 0.0), (0.5, 0.0), (1.0, 0.0), xp, x1, xm]
    pairings = [((3, 4), (4, 5)), ((2, 3), (5, 0)), ((0, 1), (1, 2))]
    surface = glue_polygon(pts, pairings)
    mid = ((x1[0] + xm[0]) / 2.0, (x1[1] + xm[1]) / 2.0)
    d = geo.normalize(geo.sub(mid, xp))
    designated = {
        "start": (None, xp),  # resolve the face by point location
        "direction": d,
        "budget": SQRT3 * t,
        "closed": False,
        "from_vertex": True,
    }
    expected = {
        "length": SQRT3 * t,
        "iota": 1,
        "curvatures": sorted([5.0 / 6.0, 1.0 / 12.0, 7.0 / 12.0, 0.5]),
        "gap": 1.0 / 12.0,
    }
    return ExampleFamily("c2-witness", {"t": t}, surface, designated, expected)


def delta_witness(theta: float, m: int) -> ExampleFamily:
    """Truncated-apex isosceles trapezoid (apex angle theta, unit slant) plus
    a 2*pi/3-apex isosceles triangle on the long base, self-glued. The saddle
    connection gamma_m has length 2*sin(m*theta/2) and m-1 self-intersections.

    Admissibility: the chord at radius cos(m*theta/2) must clear the inner
    truncation ring of radius 1/3.
    """
    if not (0.0 < theta < math.pi / 6.0):
        raise ParamOutOfRange(f"delta-witness needs 0 < theta < pi/6, got {theta!r}")
    if m < 1:
        raise ParamOutOfRange("delta-witness needs m >= 1")
    if math.cos(m * theta / 2.0) <= 1.0 / 3.0 + 1e-6:
        raise ParamOutOfRange(
            f"m*theta = {m * theta!r} too large: the chord would cross the truncation"
        )
    a0 = -math.pi / 2.0 - theta / 2.0
    a1 = -math.pi / 2.0 + theta / 2.0
    PL = (math.cos(a0), math.sin(a0))
    PR = (math.cos(a1), math.sin(a1))
    QL = (PL[0] / 3.0, PL[1] / 3.0)
    QR = (PR[0] / 3.0, PR[1] / 3.0)
    x4 = ((QL[0] + QR[0]) / 2.0, (QL[1] + QR[1]) / 2.0)
    base = 2.0 * math.sin(theta / 2.0)
    mid_base = ((PL[0] + PR[0]) / 2.0, (PL[1] + PR[1]) / 2.0)
    drop = base / (2.0 * SQRT3)
    nrm = geo.normalize(mid_base)  # outward (away from the apex at the origin)
    X3 = (mid_base[0] + drop * nrm[0], mid_base[1] + drop * nrm[1])
    pts = [PL, X3, PR, QR, x4, QL]
    pairings = [((0, 1), (1, 2)), ((2, 3), (5, 0)), ((3, 4), (4, 5))]
    surface = glue_polygon(pts, pairings)
    target = geo.rotate(PR, -m * theta)
    d = geo.normalize(geo.sub(target, PR))
    designated = {
        "start": (None, PR),
        "direction": d,
        "budget": 2.0 * math.sin(m * theta / 2.0),
        "closed": False,
        "from_vertex": True,
    }
    expected = {
        "length": 2.0 * math.sin(m * theta / 2.0),
        "iota": m - 1,
        "area": (4.0 / 9.0) * math.sin(theta) + math.sin(theta / 2.0) ** 2 / SQRT3,
        "gap": theta / (2.0 * math.pi),
        "cone_angles": sorted(
            [math.pi + theta, 4.0 * math.pi / 3.0 - theta, 2.0 * math.pi / 3.0, math.pi]
        ),
    }
    return ExampleFamily("delta-witness", {"theta": theta, "m": m}, surface, designated, expected)


def random_convex(n: int, seed: int) -> ExampleFamily:
    rng = np.random.default_rng(seed)
    surface = random_doubled_polygon(n, rng)
    return ExampleFamily("random-convex", {"n": n, "seed": seed}, surface)


FAMILIES = {
    "fagnano-cut": fagnano_cut,
    "b2-witness": b2_witness,
    "c2-witness": c2_witness,
    "delta-witness": delta_witness,
    "random-convex": random_convex,
}


def build_example(family: str, **params) -> ExampleFamily:
    if family not in FAMILIES:
        raise ParamOutOfRange(f"unknown example family {family!r}; choose from {sorted(FAMILIES)}")
    return FAMILIES[family](**params)


def designated_trajectory(ex: ExampleFamily):
    """Trace the family's designated trajectory; returns the Trajectory."""
    from . import tracer as tr

    des = ex.designated
    if not des:
        raise ParamOutOfRange(f"family {ex.family} has no designated trajectory")
    face, pt = des["start"]
    if face is None:
        face = _face_containing_vertex(ex.surface, pt)
    traj = tr.trace(ex.surface, (face, pt), des["direction"], des["budget"] + 1e-12)
    traj.closed = bool(des.get("closed"))
    return traj


def _face_containing_vertex(surface: Surface, pt, tol=1e-9):
    for f in range(surface.num_faces):
        for c in range(3):
            if geo.dist(tuple(surface.verts[f, c]), pt) <= tol:
                return f
    raise ParamOutOfRange(f"no face has a vertex at {pt}")
