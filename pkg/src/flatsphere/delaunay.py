"""Geometric (Delaunay) triangulations: edge flips, widths, circumradii.

The flipped complex is itself a Surface (new face charts); its per-corner
angular offsets stay in the original surface's registry so points and
directions can be carried between the two complexes.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from .errors import FlipNonTermination, NotEnoughVertices, VertexGrazing
from .surface import Surface

ANGLE_TOL = 1e-9


@dataclass
class EdgeInfo:
    half_a: tuple[int, int]
    half_b: tuple[int, int]
    length: float
    width: float
    opposite_angle_sum: float
    is_delaunay: bool

    @property
    def endpoints(self) -> tuple[int, int]:
        return self._endpoints

    def __post_init__(self):
        self._endpoints = (0, 0)


class Triangulation:
    """A geometric triangulation handle: flipped complex + caches."""

    def __init__(self, surface: Surface, complex_: Surface, flips: int):
        self.surface = surface
        self.complex = complex_
        self.flips_performed = flips
        self._edge_infos = None
        self._circumradii = None

    def edge_infos(self) -> list[EdgeInfo]:
        if self._edge_infos is None:
            infos = []
            for (f, e), (g, ge) in self.complex.edges():
                s = _opposite_angle_sum(self.complex, f, e)
                info = EdgeInfo(
                    half_a=(f, e),
                    half_b=(g, ge),
                    length=self.complex.edge_length(f, e),
                    width=edge_width(self.complex, f, e),
                    opposite_angle_sum=s,
                    is_delaunay=s <= math.pi + ANGLE_TOL,
                )
                info._endpoints = (
                    int(self.complex.labels[f, e]),
                    int(self.complex.labels[f, (e + 1) % 3]),
                )
                infos.append(info)
            self._edge_infos = infos
        return self._edge_infos

    def circumradii(self) -> np.ndarray:
        if self._circumradii is None:
            self._circumradii = np.array(
                [
                    geo.circumradius(*(tuple(v) for v in self.complex.verts[f]))
                    for f in range(self.complex.num_faces)
                ]
            )
        return self._circumradii

    @property
    def width(self) -> float:
        """d(T): minimum edge width."""
        return min(i.width for i in self.edge_infos())

    @property
    def max_circumradius(self) -> float:
        """R(T): maximum face circumradius."""
        return float(self.circumradii().max())

    @property
    def min_edge_length(self) -> float:
        return min(i.length for i in self.edge_infos())

    def is_delaunay(self) -> bool:
        return all(i.is_delaunay for i in self.edge_infos())

    def to_json_dict(self) -> dict:
        return {
            "edges": [
                {
                    "endpoints": list(i.endpoints),
                    "length": i.length,
                    "width": i.width,
                    "opposite_angle_sum": i.opposite_angle_sum,
                }
                for i in self.edge_infos()
            ],
            "d_T": self.width,
            "R_T": self.max_circumradius,
            "flips_performed": self.flips_performed,
        }


def _opposite_angle_sum(surface: Surface, f: int, e: int) -> float:
    g, ge = int(surface.adj_face[f, e]), int(surface.adj_edge[f, e])
    a = surface.corner_angle(f, (e + 2) % 3)
    b = surface.corner_angle(g, (ge + 2) % 3)
    return a + b


def _quad(surface: Surface, f: int, e: int):
    """Developed quadrilateral of the two faces adjacent to half-edge (f, e):
    (A, Q, B, P) in CCW order in f's chart, with P the apex of f and Q the
    developed apex of the partner face."""
    g, ge = int(surface.adj_face[f, e]), int(surface.adj_edge[f, e])
    A = tuple(surface.verts[f, e])
    B = tuple(surface.verts[f, (e + 1) % 3])
    P = tuple(surface.verts[f, (e + 2) % 3])
    Q = surface.gluing_map(f, e)(tuple(surface.verts[g, (ge + 2) % 3]))
    return A, Q, B, P


def edge_width(surface: Surface, f: int, e: int) -> float:
    """d(e): minimal distance between opposite sides of the developed quad."""
    A, Q, B, P = _quad(surface, f, e)
    d1 = geo.segment_segment_distance(A, Q, B, P)
    d2 = geo.segment_segment_distance(Q, B, P, A)
    return min(d1, d2)


def delaunay_triangulation(surface: Surface, max_flips: int | None = None) -> Triangulation:
    """Flip to the Delaunay condition: opposite-angle sum <= pi at every edge.

    Largest-excess-first flips; cocircular edges (sum within ANGLE_TOL of pi)
    are accepted and never flipped. The iteration cap (default 10*E^2) turns
    a tolerance pathology into FlipNonTermination instead of a hang.
    """
    if surface.num_cone_points < 3:
        raise NotEnoughVertices(
            f"Delaunay triangulation needs >= 3 cone points, got {surface.num_cone_points}"
        )
    if not surface.is_closed:
        raise NotEnoughVertices("Delaunay flips need a closed surface")

    labels = surface.labels.copy()
    verts = surface.verts.copy()
    adj_f = surface.adj_face.copy()
    adj_e = surface.adj_edge.copy()
    offsets = dict(surface.corner_offsets())

    F = labels.shape[0]
    E = (3 * F) // 2
    cap = 10 * E * E if max_flips is None else max_flips

    def corner_angle(f, c):
        p = tuple(verts[f, c])
        u = geo.sub(tuple(verts[f, (c + 1) % 3]), p)
        w = geo.sub(tuple(verts[f, (c + 2) % 3]), p)
        return geo.angle_between(u, w)

    def angle_sum(f, e):
        g, ge = int(adj_f[f, e]), int(adj_e[f, e])
        return corner_angle(f, (e + 2) % 3) + corner_angle(g, (ge + 2) % 3)

    def dev_map(f, e):
        g, ge = int(adj_f[f, e]), int(adj_e[f, e])
        return geo.Isometry.from_segments(
            tuple(verts[g, ge]),
            tuple(verts[g, (ge + 1) % 3]),
            tuple(verts[f, (e + 1) % 3]),
            tuple(verts[f, e]),
        )

    flips = 0
    while True:
        worst = None
        worst_excess = ANGLE_TOL
        seen = set()
        for f in range(F):
            for e in range(3):
                if (f, e) in seen:
                    continue
                g, ge = int(adj_f[f, e]), int(adj_e[f, e])
                seen.add((g, ge))
                excess = angle_sum(f, e) - math.pi
                if excess > worst_excess:
                    worst_excess = excess
                    worst = (f, e)
        if worst is None:
            break
        if flips >= cap:
            raise FlipNonTermination(
                f"edge flips did not terminate within {cap} iterations "
                f"(angle tol {ANGLE_TOL:.1e}); worst excess {worst_excess:.3e}"
            )
        f, e = worst
        g, ge = int(adj_f[f, e]), int(adj_e[f, e])
        if f == g:
            raise FlipNonTermination(
                f"edge ({f},{e}) is glued to its own face; flipping such an edge "
                "is unsupported"
            )
        # developed quad in f's chart
        A = tuple(verts[f, e])
        B = tuple(verts[f, (e + 1) % 3])
        P = tuple(verts[f, (e + 2) % 3])
        Q = dev_map(f, e)(tuple(verts[g, (ge + 2) % 3]))
        if geo.triangle_area(A, Q, P) <= 0 or geo.triangle_area(Q, B, P) <= 0:
            raise FlipNonTermination(
                f"flip of edge ({f},{e}) would create an inverted face (non-convex quad)"
            )
        lab_A = int(labels[f, e])
        lab_B = int(labels[f, (e + 1) % 3])
        lab_P = int(labels[f, (e + 2) % 3])
        lab_Q = int(labels[g, (ge + 2) % 3])

        # angular offsets of the corners that survive or split
        off_A = offsets[(g, (ge + 1) % 3)]
        off_B = offsets[(f, (e + 1) % 3)]
        off_P = offsets[(f, (e + 2) % 3)]
        off_Q = offsets[(g, (ge + 2) % 3)]

        # old outer half-edges -> their partners
        outer = {
            (f, (e + 1) % 3): "g1",  # B->P
            (f, (e + 2) % 3): "f2",  # P->A
            (g, (ge + 1) % 3): "f0",  # A->Q
            (g, (ge + 2) % 3): "g0",  # Q->B
        }
        partners = {}
        for old, new_name in outer.items():
            of, oe = old
            partners[new_name] = (int(adj_f[of, oe]), int(adj_e[of, oe]))

        new_slot = {"f0": (f, 0), "f1": (f, 1), "f2": (f, 2), "g0": (g, 0), "g1": (g, 1), "g2": (g, 2)}
        old_to_new = {old: new_slot[name] for old, name in outer.items()}

        # rewrite the two faces: f' = (A, Q, P), g' = (Q, B, P)
        labels[f] = (lab_A, lab_Q, lab_P)
        verts[f] = (A, Q, P)
        labels[g] = (lab_Q, lab_B, lab_P)
        verts[g] = (Q, B, P)

        for name, slot in new_slot.items():
            if name in ("f1", "g2"):
                continue
            partner = partners[name]
            partner = old_to_new.get(partner, partner)
            nf, ne = new_slot[name]
            pf, pe = partner
            adj_f[nf, ne], adj_e[nf, ne] = pf, pe
            adj_f[pf, pe], adj_e[pf, pe] = nf, ne
        # the new diagonal
        adj_f[f, 1], adj_e[f, 1] = g, 2
        adj_f[g, 2], adj_e[g, 2] = f, 1

        # offsets: merged corners keep the CCW-first offset; split corners add
        # the developed angle of the first part
        for key in ((f, 0), (f, 1), (f, 2), (g, 0), (g, 1), (g, 2)):
            offsets.pop(key, None)
        offsets[(f, 0)] = off_A
        offsets[(g, 1)] = off_B
        offsets[(f, 2)] = off_P
        offsets[(g, 2)] = (off_P + geo.angle_between(geo.sub(A, P), geo.sub(Q, P))) % (
            surface.cone_angles[lab_P]
        )
        offsets[(g, 0)] = off_Q
        offsets[(f, 1)] = (off_Q + geo.angle_between(geo.sub(B, Q), geo.sub(P, Q))) % (
            surface.cone_angles[lab_Q]
        )
        flips += 1

    if flips == 0:
        complex_ = surface
    else:
        complex_ = Surface(labels, verts, adj_f, adj_e, tol=surface.tol)
        complex_._offsets = offsets
    return Triangulation(surface, complex_, flips)


def max_circumradius(triangulation: Triangulation) -> float:
    return triangulation.max_circumradius


def locate(target: Surface, source: Surface, face: int, point, tol: float | None = None):
    """Carry a surface point from one complex of the same metric to another.

    Uses polar coordinates at a shared cone point: the point is joined to a
    vertex of its source face by a chord, whose angular position lives in the
    shared offset registry; the chord is then re-traced on the target.
    Returns (face, point) on the target complex.
    """
    from . import tracer as _tracer

    tol = source.tol if tol is None else tol
    p = (float(point[0]), float(point[1]))
    # nearest corner of the source face (best conditioning)
    corners = sorted(
        range(3), key=lambda c: geo.dist(p, tuple(source.verts[face, c]))
    )
    last_err = None
    for c in corners:
        v = tuple(source.verts[face, c])
        r = geo.dist(p, v)
        label = int(source.labels[face, c])
        if r <= tol:
            # the point is the cone point itself: any corner works on target
            tf, tc = target.corners_of_vertex(label)[0]
            return tf, tuple(target.verts[tf, tc])
        try:
            phi = _tracer.direction_angle_at_vertex(source, face, c, geo.sub(p, v))
            tf, tc, d = _tracer.direction_at_angle(target, label, phi, tol=tol)
            traj = _tracer.trace(target, _tracer.ConePointStart(tf, tc), d, r, tol=tol)
        except Exception as err:  # blocked chord: try another anchor corner
            last_err = err
            continue
        if traj.end_status[0] == "budget":
            sp = traj.end_status[1]
            return sp.face, sp.xy
    raise VertexGrazing(
        f"could not carry point {p} of face {face} across complexes (tol {tol:.1e})"
        + (f": {last_err}" if last_err else "")
    )
