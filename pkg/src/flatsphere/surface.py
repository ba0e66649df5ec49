"""Flat cone spheres and flat domains as glued Euclidean triangles.

A surface is a list of positively oriented triangles with per-corner chart
coordinates, plus an involutive pairing of half-edges. Local edge e of face f
runs from corner e to corner (e+1)%3; the corner at local index c spans
counterclockwise from the ray toward corner (c+1)%3 to the ray toward corner
(c+2)%3. Crossing half-edge (f, e) lands on (g, e') with f's corner (e+1)%3
identified with g's corner e'.
"""
from __future__ import annotations

import itertools
import json
import math
from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from .errors import (
    BrokenCorridor,
    DegenerateFace,
    NonMatchingGluing,
    NotASphere,
)

TWO_PI = 2.0 * math.pi
DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class EuclideanTriangle:
    """One positively oriented triangle in its own planar chart."""

    face_id: int
    vertex_positions: tuple[geo.Vec, geo.Vec, geo.Vec]
    vertex_ids: tuple[int, int, int]


@dataclass(frozen=True)
class EdgeGluing:
    """Pairing of two half-edges; the isometry is derived from the charts."""

    side_a: tuple[int, int]
    side_b: tuple[int, int]


def curvature_gap(curvatures) -> float:
    """min over subsets I of |1 - sum_{i in I, k_i < 1} k_i|.

    Exact enumeration up to 24 curvatures, meet-in-the-middle beyond.
    Curvatures >= 1 (poles) never enter a subset sum.
    """
    ks = [k for k in curvatures if k < 1.0]
    n = len(ks)
    if n <= 24:
        best = 1.0  # empty subset
        for mask in range(1, 1 << n):
            s = 0.0
            m = mask
            i = 0
            while m:
                if m & 1:
                    s += ks[i]
                m >>= 1
                i += 1
            best = min(best, abs(1.0 - s))
        return best
    half = n // 2
    left = [sum(c) for r in range(half + 1) for c in itertools.combinations(ks[:half], r)]
    right = sorted(
        sum(c) for r in range(n - half + 1) for c in itertools.combinations(ks[half:], r)
    )
    import bisect

    best = 1.0
    for a in left:
        target = 1.0 - a
        idx = bisect.bisect_left(right, target)
        for j in (idx - 1, idx):
            if 0 <= j < len(right):
                best = min(best, abs(1.0 - a - right[j]))
    return best


@dataclass
class ValidationReport:
    gauss_bonnet_residual: float
    vertex_angle_residuals: dict[int, float]
    euler_characteristic: int
    connected: bool
    oriented: bool
    max_gluing_mismatch: float
    tol: float
    passes: bool
    messages: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "passes": self.passes,
            "gauss_bonnet_residual": self.gauss_bonnet_residual,
            "euler_characteristic": self.euler_characteristic,
            "connected": self.connected,
            "oriented": self.oriented,
            "max_gluing_mismatch": self.max_gluing_mismatch,
            "vertex_angle_residuals": {str(k): v for k, v in self.vertex_angle_residuals.items()},
            "tol": self.tol,
            "messages": self.messages,
        }


class Surface:
    """Immutable flat cone surface (closed, genus 0) or flat domain (disk).

    Attributes
    ----------
    labels : (F, 3) int array of global cone-point labels per corner
    verts : (F, 3, 2) float array of chart coordinates
    adj_face, adj_edge : (F, 3) int arrays; -1 marks boundary half-edges
    cone_angles : label -> total angle
    curvatures : label -> (2*pi - angle) / (2*pi)
    """

    def __init__(self, labels, verts, adj_face, adj_edge, tol=DEFAULT_TOL, _skip_checks=False):
        self.labels = np.asarray(labels, dtype=np.int32)
        self.verts = np.asarray(verts, dtype=np.float64)
        self.adj_face = np.asarray(adj_face, dtype=np.int32)
        self.adj_edge = np.asarray(adj_edge, dtype=np.int32)
        self.tol = float(tol)
        self.genus = 0
        F = self.labels.shape[0]
        if not (self.verts.shape == (F, 3, 2) and self.adj_face.shape == (F, 3)):
            raise ValueError("inconsistent array shapes")
        self._finalize(_skip_checks)

    # -- construction ---------------------------------------------------

    def _finalize(self, skip_checks: bool) -> None:
        F = self.num_faces
        areas = np.empty(F)
        for f in range(F):
            a, b, c = self.verts[f]
            areas[f] = geo.triangle_area(tuple(a), tuple(b), tuple(c))
            if not skip_checks:
                if areas[f] <= 1e-30:
                    raise DegenerateFace(
                        f"face {f} has non-positive area {areas[f]:.3e}"
                    )
                for e in range(3):
                    if geo.dist(tuple(self.verts[f, e]), tuple(self.verts[f, (e + 1) % 3])) <= self.tol:
                        raise DegenerateFace(f"face {f} edge {e} shorter than tol {self.tol:.1e}")
        self.face_areas = areas
        self.area = float(areas.sum())

        if not skip_checks:
            self._check_gluing()

        # cone angles by accumulating corner angles
        angles: dict[int, float] = {}
        for f in range(F):
            for c in range(3):
                angles[int(self.labels[f, c])] = angles.get(int(self.labels[f, c]), 0.0) + self.corner_angle(f, c)
        self.cone_angles = angles
        self.curvatures = {l: (TWO_PI - a) / TWO_PI for l, a in angles.items()}
        self.boundary_half_edges = [
            (f, e) for f in range(F) for e in range(3) if self.adj_face[f, e] < 0
        ]
        self._offsets: dict[tuple[int, int], float] | None = None
        self._mesh_cache = None
        self._edge_list = None

    def _check_gluing(self) -> None:
        F = self.num_faces
        for f in range(F):
            for e in range(3):
                g = int(self.adj_face[f, e])
                if g < 0:
                    continue
                ge = int(self.adj_edge[f, e])
                if int(self.adj_face[g, ge]) != f or int(self.adj_edge[g, ge]) != e:
                    raise NonMatchingGluing(f"gluing at ({f},{e}) is not an involution")
                la = geo.dist(tuple(self.verts[f, e]), tuple(self.verts[f, (e + 1) % 3]))
                lb = geo.dist(tuple(self.verts[g, ge]), tuple(self.verts[g, (ge + 1) % 3]))
                if abs(la - lb) > self.tol:
                    raise NonMatchingGluing(
                        f"glued edges ({f},{e}) and ({g},{ge}) have lengths "
                        f"{la!r} vs {lb!r}; mismatch {abs(la-lb):.3e} > tol {self.tol:.1e}"
                    )
                if self.labels[f, (e + 1) % 3] != self.labels[g, ge] or self.labels[f, e] != self.labels[g, (ge + 1) % 3]:
                    raise NonMatchingGluing(
                        f"labels across gluing ({f},{e})~({g},{ge}) are inconsistent"
                    )

    @staticmethod
    def build_from_triangles(triangles, gluings, tol=DEFAULT_TOL, require_sphere=True) -> "Surface":
        """Assemble a surface from EuclideanTriangle + EdgeGluing lists.

        Triangles may also be given as (labels, coords) pairs. Raises
        NonMatchingGluing / NotASphere / DegenerateFace per the type contract.
        """
        tris = []
        for t in triangles:
            if isinstance(t, EuclideanTriangle):
                tris.append((t.vertex_ids, t.vertex_positions))
            else:
                tris.append((tuple(t[0]), tuple(t[1])))
        F = len(tris)
        labels = np.array([t[0] for t in tris], dtype=np.int32)
        verts = np.array([t[1] for t in tris], dtype=np.float64)
        adj_face = -np.ones((F, 3), dtype=np.int32)
        adj_edge = -np.ones((F, 3), dtype=np.int32)
        for g in gluings:
            if isinstance(g, EdgeGluing):
                (fa, ea), (fb, eb) = g.side_a, g.side_b
            else:
                (fa, ea), (fb, eb) = g
            if adj_face[fa, ea] >= 0 or adj_face[fb, eb] >= 0:
                raise NonMatchingGluing(f"half-edge glued twice: ({fa},{ea}) or ({fb},{eb})")
            adj_face[fa, ea], adj_edge[fa, ea] = fb, eb
            adj_face[fb, eb], adj_edge[fb, eb] = fa, ea
        surf = Surface(labels, verts, adj_face, adj_edge, tol=tol)
        if require_sphere:
            if surf.boundary_half_edges:
                raise NotASphere("unglued half-edges remain on a closed surface")
            if surf.euler_characteristic() != 2:
                raise NotASphere(
                    f"Euler characteristic {surf.euler_characteristic()} != 2"
                )
            if not surf.is_connected():
                raise NotASphere("face complex is not connected")
        return surf

    # -- basic queries ----------------------------------------------------

    @property
    def num_faces(self) -> int:
        return self.labels.shape[0]

    @property
    def vertex_labels(self) -> list[int]:
        return sorted(self.cone_angles)

    @property
    def num_cone_points(self) -> int:
        return len(self.cone_angles)

    def corner_angle(self, f: int, c: int) -> float:
        p = tuple(self.verts[f, c])
        u = geo.sub(tuple(self.verts[f, (c + 1) % 3]), p)
        w = geo.sub(tuple(self.verts[f, (c + 2) % 3]), p)
        return geo.angle_between(u, w)

    def edge_length(self, f: int, e: int) -> float:
        return geo.dist(tuple(self.verts[f, e]), tuple(self.verts[f, (e + 1) % 3]))

    def edges(self) -> list[tuple[tuple[int, int], tuple[int, int]]]:
        """Unordered edge list; each entry is the pair of half-edges (or a
        single boundary half-edge paired with (-1, -1))."""
        if self._edge_list is None:
            seen = set()
            out = []
            for f in range(self.num_faces):
                for e in range(3):
                    if (f, e) in seen:
                        continue
                    g, ge = int(self.adj_face[f, e]), int(self.adj_edge[f, e])
                    if g < 0:
                        out.append(((f, e), (-1, -1)))
                        seen.add((f, e))
                    else:
                        out.append(((f, e), (g, ge)))
                        seen.add((f, e))
                        seen.add((g, ge))
            self._edge_list = out
        return self._edge_list

    def num_edges(self) -> int:
        return len(self.edges())

    def euler_characteristic(self) -> int:
        return self.num_cone_points - self.num_edges() + self.num_faces

    def is_connected(self) -> bool:
        F = self.num_faces
        if F == 0:
            return False
        seen = {0}
        stack = [0]
        while stack:
            f = stack.pop()
            for e in range(3):
                g = int(self.adj_face[f, e])
                if g >= 0 and g not in seen:
                    seen.add(g)
                    stack.append(g)
        return len(seen) == F

    @property
    def is_closed(self) -> bool:
        return not self.boundary_half_edges

    def gluing_map(self, f: int, e: int) -> geo.Isometry:
        """Isometry placing chart of the partner face across half-edge (f, e),
        i.e. mapping partner-chart coordinates into f's chart plane."""
        g, ge = int(self.adj_face[f, e]), int(self.adj_edge[f, e])
        if g < 0:
            raise BrokenCorridor(f"half-edge ({f},{e}) is a boundary edge")
        return geo.Isometry.from_segments(
            tuple(self.verts[g, ge]),
            tuple(self.verts[g, (ge + 1) % 3]),
            tuple(self.verts[f, (e + 1) % 3]),
            tuple(self.verts[f, e]),
        )

    def transfer_map(self, f: int, e: int) -> geo.Isometry:
        """Isometry mapping f-chart points into the partner's chart (for
        continuing a ray across half-edge (f, e))."""
        return self.gluing_map(f, e).inverse()

    # -- corner walks and angular offsets ---------------------------------

    def ccw_next_corner(self, f: int, c: int) -> tuple[int, int]:
        """Next corner counterclockwise around the vertex at corner (f, c);
        (-1, -1) where the walk exits through a boundary edge."""
        e = (c + 2) % 3
        g, ge = int(self.adj_face[f, e]), int(self.adj_edge[f, e])
        if g < 0:
            return (-1, -1)
        return (g, ge)

    def cw_next_corner(self, f: int, c: int) -> tuple[int, int]:
        g, ge = int(self.adj_face[f, c]), int(self.adj_edge[f, c])
        if g < 0:
            return (-1, -1)
        return (g, (ge + 1) % 3)

    def corners_of_vertex(self, label: int) -> list[tuple[int, int]]:
        return [
            (f, c)
            for f in range(self.num_faces)
            for c in range(3)
            if int(self.labels[f, c]) == label
        ]

    def corner_offsets(self) -> dict[tuple[int, int], float]:
        """Angular position of each corner's start ray around its vertex.

        Offsets are measured counterclockwise from a per-vertex reference
        corner (the first one in the walk; for boundary vertices the fan
        start). Complexes derived by flips keep offsets in the same registry.
        """
        if self._offsets is None:
            offsets: dict[tuple[int, int], float] = {}
            all_corners = {
                (f, c) for f in range(self.num_faces) for c in range(3)
            }
            done: set[tuple[int, int]] = set()
            for start in sorted(all_corners):
                if start in done:
                    continue
                # rewind clockwise to the fan start for boundary vertices
                first = start
                steps = 0
                while True:
                    prev = self.cw_next_corner(*first)
                    if prev == (-1, -1) or prev == start:
                        break
                    first = prev
                    steps += 1
                    if steps > 4 * self.num_faces:
                        raise NotASphere("corner walk does not close")
                acc = 0.0
                cur = first
                while True:
                    offsets[cur] = acc
                    done.add(cur)
                    acc += self.corner_angle(*cur)
                    cur = self.ccw_next_corner(*cur)
                    if cur == (-1, -1) or cur == first:
                        break
                    if cur in done:
                        raise NotASphere("corner walk revisits a corner")
            self._offsets = offsets
        return self._offsets

    # -- developing --------------------------------------------------------

    def develop(self, faces, edges=None) -> list[geo.Isometry]:
        """Develop a face corridor into the plane.

        faces: ordered face ids; edges: for each step, the local edge of the
        current face crossed to reach the next one. The first face is placed
        by the identity. Raises BrokenCorridor when a declared edge does not
        lead to the declared next face.
        """
        faces = list(faces)
        if edges is None:
            edges = []
        placements = [geo.Isometry.identity()]
        for i, e in enumerate(edges):
            f = faces[i]
            g = int(self.adj_face[f, e])
            if g < 0 or (i + 1 < len(faces) and g != faces[i + 1]):
                raise BrokenCorridor(
                    f"corridor step {i}: edge {e} of face {f} does not lead to face "
                    f"{faces[i + 1] if i + 1 < len(faces) else '?'}"
                )
            placements.append(placements[-1].compose(self.gluing_map(f, e)))
        return placements

    # -- validation ---------------------------------------------------------

    def validate(self, tol: float | None = None) -> ValidationReport:
        tol = self.tol if tol is None else tol
        messages = []
        target = 2 - 2 * self.genus if self.is_closed else None
        gb = abs(sum(self.curvatures.values()) - (2 - 2 * self.genus)) if self.is_closed else 0.0
        residuals = {}
        for label, angle in self.cone_angles.items():
            s = sum(self.corner_angle(f, c) for (f, c) in self.corners_of_vertex(label))
            residuals[label] = abs(s - angle)
        mismatch = 0.0
        for (f, e), (g, ge) in self.edges():
            if g < 0:
                continue
            mismatch = max(mismatch, abs(self.edge_length(f, e) - self.edge_length(g, ge)))
        oriented = bool(np.all(self.face_areas > 0))
        chi = self.euler_characteristic()
        connected = self.is_connected()
        ok = oriented and connected and mismatch <= tol
        if self.is_closed:
            ok = ok and chi == 2 and gb < tol
            if chi != 2:
                messages.append(f"Euler characteristic {chi} != 2")
            if gb >= tol:
                messages.append(
                    f"Gauss-Bonnet residual {gb:.3e} >= tol {tol:.1e}"
                )
        else:
            ok = ok and chi == 1
            if chi != 1:
                messages.append(f"Euler characteristic {chi} != 1 for a disk")
        if not connected:
            messages.append("complex is not connected")
        if mismatch > tol:
            messages.append(f"max gluing length mismatch {mismatch:.3e} > tol {tol:.1e}")
        return ValidationReport(
            gauss_bonnet_residual=gb,
            vertex_angle_residuals=residuals,
            euler_characteristic=chi,
            connected=connected,
            oriented=oriented,
            max_gluing_mismatch=mismatch,
            tol=tol,
            passes=ok,
        )

    # -- scaling and copies --------------------------------------------------

    def rescaled(self, factor: float) -> "Surface":
        return Surface(
            self.labels.copy(),
            self.verts * factor,
            self.adj_face.copy(),
            self.adj_edge.copy(),
            tol=self.tol,
            _skip_checks=True,
        )

    def normalized(self) -> "Surface":
        """Homothety to unit area."""
        return self.rescaled(1.0 / math.sqrt(self.area))

    # -- mesh tables for the kernels ------------------------------------------

    def mesh(self):
        """(tri, adj_face, adj_edge, glue_fwd, glue_dev) tables for the kernels.

        glue_fwd[f, e] maps f-chart coordinates into the partner chart (ray
        continuation across half-edge (f, e)); glue_dev[f, e] is its inverse,
        placing the partner chart across (f, e) in f's plane (development).
        """
        if self._mesh_cache is None:
            F = self.num_faces
            glue_fwd = np.zeros((F, 3, 4), dtype=np.float64)
            glue_dev = np.zeros((F, 3, 4), dtype=np.float64)
            glue_fwd[:, :, 0] = 1.0
            glue_dev[:, :, 0] = 1.0
            for f in range(F):
                for e in range(3):
                    if self.adj_face[f, e] < 0:
                        continue
                    dev = self.gluing_map(f, e)
                    fwd = dev.inverse()
                    glue_fwd[f, e] = (fwd.c, fwd.s, fwd.tx, fwd.ty)
                    glue_dev[f, e] = (dev.c, dev.s, dev.tx, dev.ty)
            self._mesh_cache = (
                np.ascontiguousarray(self.verts),
                np.ascontiguousarray(self.adj_face),
                np.ascontiguousarray(self.adj_edge),
                glue_fwd,
                glue_dev,
            )
        return self._mesh_cache

    # -- serialization ----------------------------------------------------------

    def to_json_dict(self) -> dict:
        tris = []
        for f in range(self.num_faces):
            tris.append(
                {
                    "id": f,
                    "vertices": [[float(x) for x in self.verts[f, c]] for c in range(3)],
                    "labels": [int(x) for x in self.labels[f]],
                }
            )
        gl = []
        for (f, e), (g, ge) in self.edges():
            if g >= 0:
                gl.append({"a": [f, e], "b": [g, ge]})
        return {"triangles": tris, "gluings": gl}

    def to_json(self, **kw) -> str:
        return json.dumps(self.to_json_dict(), **kw)

    @staticmethod
    def from_json_dict(data: dict, tol: float = DEFAULT_TOL, require_sphere: bool = True) -> "Surface":
        tris = sorted(data["triangles"], key=lambda t: t["id"])
        ids = [t["id"] for t in tris]
        if ids != list(range(len(ids))):
            raise ValueError("triangle ids must be 0..F-1")
        triangles = [
            (
                [int(l) for l in t["labels"]],
                [(float(v[0]), float(v[1])) for v in t["vertices"]],
            )
            for t in tris
        ]
        gluings = [((g["a"][0], g["a"][1]), (g["b"][0], g["b"][1])) for g in data["gluings"]]
        return Surface.build_from_triangles(
            triangles, gluings, tol=tol, require_sphere=require_sphere
        )

    @staticmethod
    def from_json(text: str, tol: float = DEFAULT_TOL, require_sphere: bool = True) -> "Surface":
        return Surface.from_json_dict(json.loads(text), tol=tol, require_sphere=require_sphere)

    def __repr__(self) -> str:
        kind = "closed" if self.is_closed else "bounded"
        return (
            f"<Surface {kind}: {self.num_faces} faces, {self.num_cone_points} cone points, "
            f"area {self.area:.6g}>"
        )


@dataclass
class FlatDomain:
    """A flat surface with disk topology: the complex plus its boundary loop.

    boundary is the ordered list of boundary half-edges; corner_angles maps
    each boundary vertex label to its total inside angle.
    """

    complex: Surface
    boundary: list[tuple[int, int]]
    corner_angles: dict[int, float]
    degenerate: bool = False

    @property
    def area(self) -> float:
        return self.complex.area

    def boundary_length(self) -> float:
        return sum(self.complex.edge_length(f, e) for (f, e) in self.boundary)


@dataclass
class InfiniteFlatSphere:
    """Finite triangulated part plus a symbolic truncated cone glued along its
    single boundary loop. The pole never enters metric computations: all
    saddle connections live in the core.

    boundary_cone_angles give, per boundary vertex label, the angle on the
    cone side of the seam; the package requires each to be >= pi, which makes
    the finite part contain the core. A vertex's conical angle on the sphere
    is its finite-part angle plus its cone-side angle.
    """

    finite_part: Surface
    boundary: list[tuple[int, int]]
    pole_curvature: float
    boundary_cone_angles: dict[int, float] | None = None

    def __post_init__(self):
        if self.pole_curvature < 1.0:
            raise ValueError("pole curvature must be >= 1")
        blabels = {int(self.finite_part.labels[f, e]) for (f, e) in self.boundary}
        if self.boundary_cone_angles is None:
            # default: regular seam points (total angle 2*pi)
            self.boundary_cone_angles = {
                l: TWO_PI - self.finite_part.cone_angles[l] for l in blabels
            }
        for l, a in self.boundary_cone_angles.items():
            if a < math.pi - 1e-9:
                raise ValueError(
                    f"cone-side angle {a!r} at boundary vertex {l} is < pi; the "
                    "finite part would not contain the core"
                )
        bad = [l for l, k in self.conical_curvatures.items() if k < 0 or k >= 1.0]
        if bad:
            raise ValueError(f"conical curvatures outside [0, 1) at {bad}")

    @property
    def attached_cone_angle(self) -> float:
        return TWO_PI * (self.pole_curvature - 1.0)

    def total_angle(self, label: int) -> float:
        extra = self.boundary_cone_angles.get(label, 0.0)
        return self.finite_part.cone_angles[label] + extra

    @property
    def conical_curvatures(self) -> dict[int, float]:
        return {
            l: (TWO_PI - self.total_angle(l)) / TWO_PI
            for l in self.finite_part.cone_angles
        }

    def curvature_gap(self) -> float:
        return curvature_gap(list(self.conical_curvatures.values()))

    def to_json_dict(self) -> dict:
        d = self.finite_part.to_json_dict()
        d["boundary"] = [[f, e] for (f, e) in self.boundary]
        d["pole_curvature"] = self.pole_curvature
        d["boundary_cone_angles"] = {str(k): v for k, v in self.boundary_cone_angles.items()}
        return d

    @staticmethod
    def from_json_dict(data: dict, tol: float = DEFAULT_TOL) -> "InfiniteFlatSphere":
        surf = Surface.from_json_dict(data, tol=tol, require_sphere=False)
        boundary = [(int(f), int(e)) for f, e in data["boundary"]]
        bca = data.get("boundary_cone_angles")
        if bca is not None:
            bca = {int(k): float(v) for k, v in bca.items()}
        return InfiniteFlatSphere(surf, boundary, float(data["pole_curvature"]), bca)


def boundary_loop(surface: Surface) -> list[tuple[int, int]]:
    """Order the boundary half-edges of a bounded complex into a single loop."""
    half = set(surface.boundary_half_edges)
    if not half:
        return []
    # successor: walk clockwise around the end vertex of (f, e) until boundary
    def successor(f, e):
        c = (e + 1) % 3  # corner at the far end of the half-edge
        cur = (f, c)
        for _ in range(4 * surface.num_faces):
            nf, nc = surface.cw_next_corner(*cur)
            if (nf, nc) == (-1, -1):
                return (cur[0], cur[1])  # edge starting at this corner is boundary
            cur = (nf, nc)
        raise NotASphere("boundary walk does not terminate")

    start = min(half)
    loop = [start]
    f, e = start
    while True:
        nxt = successor(f, e)
        if nxt == start:
            break
        if nxt not in half or nxt in loop:
            raise NotASphere("boundary half-edges do not form a single loop")
        loop.append(nxt)
        f, e = nxt
    if len(loop) != len(half):
        raise NotASphere("boundary has more than one loop")
    return loop


def make_domain(surface: Surface) -> FlatDomain:
    """Wrap a bounded complex as a FlatDomain (checks disk topology)."""
    loop = boundary_loop(surface)
    if surface.euler_characteristic() != 1:
        raise NotASphere(
            f"domain has Euler characteristic {surface.euler_characteristic()} != 1"
        )
    boundary_labels = {int(surface.labels[f, e]) for (f, e) in loop}
    corner_angles = {
        l: surface.cone_angles[l] for l in boundary_labels
    }
    return FlatDomain(surface, loop, corner_angles)
