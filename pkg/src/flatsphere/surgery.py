"""Convex hulls of singularity clusters, Thurston surgeries (pairwise and
generalized), cores of infinite non-negative flat spheres, and the
saddle-connection finiteness check on them.

Loops (hull boundaries, core boundaries) are polygonal: traced geodesic legs
between breakpoint cone points, oriented with the enclosed side on the left.
Geodesic tightening slides a breakpoint across the right side whenever the
right angle is below pi; the fixed points are exactly the hull/core
boundaries.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import editing, geometry as geo
from . import tracer as tr
from .delaunay import delaunay_triangulation
from .enumerator import (
    SaddleConnection,
    connection_iota,
    connection_trajectory,
    enumerate_on_complex,
    enumerate_saddle_connections,
)
from .errors import (
    CapExceeded,
    CurvatureTooLarge,
    NoHull,
    NotSimple,
    OverlappingHulls,
)
from .surface import (
    FlatDomain,
    InfiniteFlatSphere,
    Surface,
    boundary_loop,
    curvature_gap,
    make_domain,
)

TWO_PI = 2.0 * math.pi
ANGLE_TOL = 1e-9


# ---------------------------------------------------------------------------
# loop representation and tightening


@dataclass
class Leg:
    """A geodesic loop leg: a traced trajectory between two cone points."""

    start_label: int
    end_label: int
    start: tuple[int, int, geo.Vec]  # (face, corner, chart direction)
    traj: tr.Trajectory

    @property
    def length(self) -> float:
        return self.traj.total_length

    def end_data(self):
        last = self.traj.threads[-1]
        return last.face, last.exit_mark[1], last.direction


def leg_from_connection(complex_: Surface, sc: SaddleConnection) -> Leg:
    traj = connection_trajectory(complex_, sc)
    return Leg(sc.endpoints[0], sc.endpoints[1], sc.start, traj)


def _trace_leg(complex_: Surface, face: int, corner: int, d: geo.Vec, budget: float,
               tol: float) -> Leg:
    traj = tr.trace(complex_, tr.ConePointStart(face, corner), d, budget, tol=tol)
    if traj.end_status[0] != "cone":
        raise CapExceeded(
            f"loop leg trace did not reach a cone point within budget {budget!r}"
        )
    return Leg(int(complex_.labels[face, corner]), traj.end_status[1],
               (face, corner, d), traj)


def _inside_angle(complex_: Surface, prev: Leg, nxt: Leg, extra_angle) -> float:
    """Angle on the enclosed (left) side at the breakpoint between two legs."""
    f_in, c_in, d_in = prev.end_data()
    phi_prev = tr.direction_angle_at_vertex(complex_, f_in, c_in, (-d_in[0], -d_in[1]))
    f_out, c_out, d_out = nxt.start
    phi_next = tr.direction_angle_at_vertex(complex_, f_out, c_out, d_out)
    label = nxt.start_label
    theta = complex_.cone_angles[label] + extra_angle(label)
    v = (phi_prev - phi_next) % theta
    if v > theta - 1e-9:  # float drift around zero must not wrap to theta
        v = 0.0
    return v


def _shortcut_legs(complex_: Surface, w1_leg: Leg, w2_leg: Leg, outside: float,
                   tol: float) -> list[Leg]:
    """Replace the corner between w1_leg (into v) and w2_leg (out of v) by the
    geodesic across the outside wedge; intermediate cone points become new
    breakpoints with the straight-through continuation on the v side."""
    L1, L2 = w1_leg.length, w2_leg.length
    v_at = (0.0, 0.0)
    w1 = (L1, 0.0)
    w2 = (L2 * math.cos(outside), L2 * math.sin(outside))
    target = w2_leg.end_label
    # direction at w1: rotate the ray (w1 -> v) by the developed angle
    f0, c0, d_back = w1_leg.start  # w1_leg runs w1 -> v, so start dir points at v
    to_v = geo.sub(v_at, w1)
    to_w2 = geo.sub(w2, w1)
    alpha = math.atan2(geo.cross(to_v, to_w2), geo.dot(to_v, to_w2))
    phi = tr.direction_angle_at_vertex(complex_, f0, c0, d_back) + alpha
    face, corner, d = tr.direction_at_angle(complex_, w1_leg.start_label, phi, tol=tol)
    total = geo.dist(w1, w2)
    legs = []
    remaining = total
    pos = w1
    guard = 0
    while remaining > 4 * tol:
        guard += 1
        if guard > 1000:
            raise CapExceeded("shortcut subdivision did not terminate")
        leg = _trace_leg(complex_, face, corner, d, remaining + 4 * tol, tol)
        legs.append(leg)
        remaining -= leg.length
        if remaining <= 4 * tol:
            break
        # intermediate breakpoint: continue straight, with angle pi on the
        # side of v
        f_in, c_in, d_in = leg.end_data()
        dirvec = geo.normalize(geo.sub(w2, w1))
        pos = (pos[0] + leg.length * dirvec[0], pos[1] + leg.length * dirvec[1])
        side = geo.cross(geo.sub(w2, w1), geo.sub(v_at, pos))
        delta = -math.pi if side > 0 else math.pi
        face, corner, d = tr.rotate_at_vertex(complex_, f_in, c_in,
                                              (-d_in[0], -d_in[1]), delta)
    if not legs or legs[-1].end_label != target:
        raise CapExceeded(
            f"shortcut did not land on the expected breakpoint (tol {tol:.1e})"
        )
    return legs


def tighten_loop(complex_: Surface, legs: list[Leg], movable, tol: float,
                 extra_angle=None, max_iter: int | None = None):
    """Shorten a breakpoint loop until every right-side angle is >= pi.

    movable: labels the loop may slide across (they end up on the left side).
    extra_angle(label): angle outside the complex at seam vertices (cores).
    Returns (legs, inside_angles, pinned) where pinned lists breakpoints that
    wanted to move but were not movable.
    """
    extra_angle = extra_angle or (lambda l: 0.0)
    cap = max_iter or 10_000 * max(4, len(legs))
    it = 0
    while True:
        it += 1
        if it > cap:
            raise CapExceeded(f"loop tightening hit the iteration cap {cap}")
        n = len(legs)
        moved = False
        pinned = []
        insides = []
        for i in range(n):
            prev = legs[(i - 1) % n]
            nxt = legs[i]
            label = nxt.start_label
            inside = _inside_angle(complex_, prev, nxt, extra_angle)
            theta = complex_.cone_angles[label] + extra_angle(label)
            outside = theta - inside
            insides.append(inside)
            if outside < math.pi - ANGLE_TOL:
                if label not in movable:
                    pinned.append((i, label, outside))
                    continue
                if n == 1:
                    raise NoHull(
                        f"loop slides off its last breakpoint (vertex {label}); "
                        "the shortest representative touches no allowed singularity"
                    )
                new_legs = _shortcut_legs(complex_, prev, nxt, outside, tol)
                rot = (i - 1) % n
                rotated = legs[rot:] + legs[:rot]  # rotated[0] = prev, [1] = nxt
                legs = new_legs + rotated[2:]
                moved = True
                break
        if not moved:
            return legs, insides, pinned


def _legs_degenerate(complex_: Surface, legs: list[Leg], tol: float) -> bool:
    """True when the loop is a doubled chain (every leg paired with its
    reverse), i.e. it encloses no area."""
    if len(legs) % 2 != 0:
        return False
    from .enumerator import _match, _signature

    sigs = []
    for leg in legs:
        f1, c1, d1 = leg.start
        f2, c2, d2 = leg.end_data()
        sigs.append(
            _signature(complex_, (f1, c1, d1), (f2, c2, (-d2[0], -d2[1])), leg.length)
        )
    used = [False] * len(legs)
    for i in range(len(legs)):
        if used[i]:
            continue
        found = False
        for j in range(i + 1, len(legs)):
            if used[j]:
                continue
            if abs(legs[i].length - legs[j].length) <= 1e-7 and _match(sigs[i], sigs[j]):
                used[i] = used[j] = True
                found = True
                break
        if not found:
            return False
    return True


# ---------------------------------------------------------------------------
# convex hulls


@dataclass
class ConeData:
    """The added cone C_D, reconstructed from the hull boundary alone:
    develop the boundary polyline with the cone-side interior angles and take
    the fixed point of its holonomy as the apex."""

    curvature: float
    boundary: list[tuple[float, float]]  # (leg length, inside-hull angle at start)
    area: float
    apex_distances: list[float]

    def boundary_signature(self, digits: int = 7):
        seq = tuple((round(l, digits), round(a, digits)) for (l, a) in self.boundary)
        return min(tuple(seq[i:] + seq[:i]) for i in range(len(seq)))


def added_cone_from_boundary(leg_lengths, inside_angles, vertex_angles,
                             curvature: float) -> ConeData:
    """Develop C_D's boundary: interior angle of C_D at breakpoint i is
    2*pi - (vertex_angle_i - inside_angle_i)."""
    pts = [(0.0, 0.0)]
    d = (1.0, 0.0)
    interior = []
    n = len(leg_lengths)
    for i in range(n):
        pts.append((pts[-1][0] + leg_lengths[i] * d[0], pts[-1][1] + leg_lengths[i] * d[1]))
        a_out = vertex_angles[(i + 1) % n] - inside_angles[(i + 1) % n]
        ci = TWO_PI - a_out
        interior.append(ci)
        d = geo.rotate(d, math.pi - ci)
    rot = sum(math.pi - c for c in interior)
    c, s = math.cos(rot), math.sin(rot)
    tx, ty = pts[-1]
    denom = (1.0 - c) ** 2 + s * s
    if denom < 1e-18:
        raise CapExceeded("added cone holonomy is a translation; curvature must be > 0")
    ax = ((1.0 - c) * tx - s * ty) / denom
    ay = (s * tx + (1.0 - c) * ty) / denom
    apex = (ax, ay)
    poly = [apex] + pts
    area = abs(geo.polygon_area(poly))
    return ConeData(
        curvature=curvature,
        boundary=[(leg_lengths[i], inside_angles[i]) for i in range(n)],
        area=area,
        apex_distances=[geo.dist(apex, p) for p in pts[:-1]],
    )


@dataclass
class ConvexHull:
    cluster: list[int]
    legs: list[Leg]
    inside_angles: list[float]
    degenerate: bool
    domain: FlatDomain | None
    complex: Surface  # the complex the legs live on
    area: float

    @property
    def boundary_length(self) -> float:
        return sum(l.length for l in self.legs)

    def boundary_vertex_labels(self) -> list[int]:
        return [l.start_label for l in self.legs]

    def added_cone(self) -> ConeData:
        # degenerate hulls double each geodesic leg; the generic development
        # handles that case uniformly (inside angles are then 0)
        lengths = [l.length for l in self.legs]
        vangles = [self.complex.cone_angles[l.start_label] for l in self.legs]
        k = sum(
            self.complex.curvatures[x]
            for x in set(self.cluster)
        )
        return added_cone_from_boundary(lengths, self.inside_angles, vangles, k)


def tree_contour(complex_: Surface, tree: list[SaddleConnection]) -> list[Leg]:
    """The doubled-tree loop: each edge twice, with the tree on the left."""
    # directed edge list with angular positions at each vertex
    darts = []  # (label, phi, leg)
    for sc in tree:
        leg_f = leg_from_connection(complex_, sc)
        f, c, d = leg_f.start
        phi_f = tr.direction_angle_at_vertex(complex_, f, c, d)
        f2, c2, d2 = leg_f.end_data()
        rev_dir = (-d2[0], -d2[1])
        phi_r = tr.direction_angle_at_vertex(complex_, f2, c2, rev_dir)
        rev_traj = tr.trace(
            complex_, tr.ConePointStart(f2, c2), rev_dir, sc.length + 4 * complex_.tol,
            tol=complex_.tol,
        )
        if rev_traj.end_status[0] != "cone":
            raise CapExceeded("tree edge does not re-trace; data inconsistent")
        leg_r = Leg(leg_f.end_label, leg_f.start_label, (f2, c2, rev_dir), rev_traj)
        darts.append([leg_f.start_label, phi_f, leg_f])
        darts.append([leg_f.end_label, phi_r, leg_r])
    by_vertex: dict[int, list] = {}
    for dart in darts:
        by_vertex.setdefault(dart[0], []).append(dart)
    for v, lst in by_vertex.items():
        lst.sort(key=lambda d: d[1])
    # Euler tour: after arriving along a dart, leave along the next CCW dart
    legs = []
    first = darts[0]
    cur = first
    guard = 0
    while True:
        guard += 1
        if guard > 4 * len(darts) + 8:
            raise CapExceeded("tree contour walk did not close")
        legs.append(cur[2])
        end_label = cur[2].end_label
        f2, c2, d2 = cur[2].end_data()
        phi_in = tr.direction_angle_at_vertex(complex_, f2, c2, (-d2[0], -d2[1]))
        lst = by_vertex[end_label]
        theta = complex_.cone_angles[end_label]
        nxt = min(lst, key=lambda dd: (dd[1] - phi_in - 1e-12) % theta)
        if nxt is first and len(legs) == 2 * len(tree):
            break
        cur = nxt
        if len(legs) > 2 * len(tree):
            raise CapExceeded("tree contour visited too many darts")
    return legs


def convex_hull(surface: Surface, cluster, enclosing_loop=None,
                tree: list[SaddleConnection] | None = None) -> ConvexHull:
    """Convex hull of a singularity cluster.

    The homotopy class is fixed by an initial loop: either an explicit list
    of Legs (enclosing_loop) or the contour of a geometric spanning tree of
    the cluster (tree; computed from short saddle connections when omitted).
    """
    cluster = list(cluster)
    ksum = sum(surface.curvatures[c] for c in set(cluster))
    if ksum > 1.0 + 1e-9:
        raise NoHull(
            f"cluster curvature sum {ksum!r} exceeds 1; no enclosing loop with "
            "outside angles >= pi exists"
        )
    if len(cluster) == 1:
        return ConvexHull([cluster[0]], [], [], True, None, surface, 0.0)
    if enclosing_loop is not None:
        legs0 = enclosing_loop
    else:
        if tree is None:
            tree = spanning_tree(surface, cluster)
        legs0 = tree_contour(surface, tree)
    movable = set(cluster)
    legs, insides, pinned = tighten_loop(surface, legs0, movable, surface.tol)
    bad = [p for p in pinned]
    if bad:
        raise NoHull(
            f"shortest representative is pinned at non-cluster singularities {bad}"
        )
    labels = {l.start_label for l in legs}
    if not labels <= set(cluster):
        raise NoHull(
            f"boundary passes through non-cluster singularities {sorted(labels - set(cluster))}"
        )
    if _legs_degenerate(surface, legs, surface.tol):
        return ConvexHull(cluster, legs, insides, True, None, surface, 0.0)
    # insert the legs and extract the enclosed region
    new_surface, links, face_map, markers = editing.insert_chains(
        surface, [l.traj for l in legs]
    )
    barrier = set()
    for link in links:
        for (lhe, rhe) in link:
            barrier.add(lhe)
            barrier.add(rhe)
    seed = links[0][0][0][0]
    region, remap = editing.extract_region(new_surface, barrier, seed)
    domain = make_domain(region)
    return ConvexHull(cluster, legs, insides, False, domain, surface, domain.area)


def spanning_tree(surface: Surface, cluster, R0: float | None = None):
    """Short geometric spanning tree of the cluster: greedy over enumerated
    saddle connections by length, mutually non-crossing."""
    T = delaunay_triangulation(surface)
    R = R0 or T.min_edge_length
    for _ in range(24):
        scs = enumerate_saddle_connections(surface, R, triangulation=T)
        cand = [
            sc
            for sc in scs
            if sc.endpoints[0] in cluster and sc.endpoints[1] in cluster
            and sc.endpoints[0] != sc.endpoints[1]
        ]
        parent = {c: c for c in cluster}

        def find(x):
            while parent[x] != x:
                parent[x] = parent[parent[x]]
                x = parent[x]
            return x

        tree = []
        used_trajs = []
        for sc in sorted(cand, key=lambda s: s.length):
            a, b = find(sc.endpoints[0]), find(sc.endpoints[1])
            if a == b:
                continue
            traj = connection_trajectory(T.complex, sc)
            if any(_trajectories_cross(T.complex, traj, t2) for t2 in used_trajs):
                continue
            parent[a] = b
            tree.append(sc)
            used_trajs.append(traj)
        if len(tree) == len(cluster) - 1:
            return tree
        R *= 2.0
    raise NoHull(f"could not build a geometric spanning tree of {cluster}")


def _trajectories_cross(complex_: Surface, t1: tr.Trajectory, t2: tr.Trajectory) -> bool:
    for a in t1.threads:
        for b in t2.threads:
            if a.face != b.face:
                continue
            if geo.segments_properly_intersect(a.entry, a.exit, b.entry, b.exit):
                return True
    return False


def hull_existence_condition(surface: Surface, tree: list[SaddleConnection],
                             R_search: float | None = None):
    """Sufficient condition: no simple saddle connection shorter than twice
    the tree length crosses the loop around the tree. Returns (True, None) or
    (False, witness). Crossing is tested as transversal intersection with a
    tree edge or as having exactly one endpoint among the tree's vertices."""
    T = delaunay_triangulation(surface)
    total = sum(sc.length for sc in tree)
    R = R_search if R_search is not None else 2.0 * total
    tree_vertices = set()
    for sc in tree:
        tree_vertices.update(sc.endpoints)
    tree_trajs = [connection_trajectory(T.complex, sc) for sc in tree]
    tree_keys = {sc.canonical_key() for sc in tree}
    for sc in enumerate_saddle_connections(surface, min(R, 2.0 * total), triangulation=T):
        if sc.canonical_key() in tree_keys:
            continue
        if connection_iota(T.complex, sc) != 0:
            continue  # not simple
        in_tree = [e in tree_vertices for e in sc.endpoints]
        crossing = in_tree.count(True) == 1
        if not crossing:
            traj = connection_trajectory(T.complex, sc)
            crossing = any(_trajectories_cross(T.complex, traj, t2) for t2 in tree_trajs)
        if crossing and sc.length < 2.0 * total:
            return False, sc
    return True, None


# ---------------------------------------------------------------------------
# surgeries


@dataclass
class PairwiseSurgery:
    top: Surface
    apex_label: int
    cone_area: float
    collapsed: tuple[int, int]


def surgery_along_saddle_connection(surface: Surface, sc: SaddleConnection,
                                    tol: float | None = None) -> PairwiseSurgery:
    """Thurston's surgery: slit the connection open and glue the doubled cone
    triangle; the endpoints become regular and are removed, the apex is a new
    singularity of curvature k_i + k_j."""
    tol = surface.tol if tol is None else tol
    xi, xj = sc.endpoints
    if xi == xj:
        raise NotSimple(f"surgery needs distinct endpoints, got {xi} twice")
    ki, kj = surface.curvatures[xi], surface.curvatures[xj]
    if ki < -1e-12 or kj < -1e-12:
        raise CurvatureTooLarge("surgery endpoints must have non-negative curvature")
    if ki + kj >= 1.0 - 1e-12:
        raise CurvatureTooLarge(
            f"curvature sum {ki + kj!r} at the endpoints is >= 1"
        )
    if connection_iota(surface, sc) != 0:
        raise NotSimple("saddle connection self-intersects; surgery needs a simple one")
    if ki <= 1e-12 or kj <= 1e-12:
        # degenerate rule: forget the flat marked point (larger index when both)
        victim = xj if (kj <= 1e-12 and (ki > 1e-12 or xj > xi)) else xi
        out = editing.remove_flat_vertex(surface, victim, tol=tol)
        keep = xi if victim == xj else xj
        return PairwiseSurgery(out, keep, 0.0, (xi, xj))

    traj = connection_trajectory(surface, sc)
    with_chain, links, face_map, markers = editing.insert_chains(surface, [traj], tol=tol)
    apex = max(with_chain.cone_angles) + 1
    glued, cone_area, seam_markers = editing.slit_and_glue_cone(
        with_chain, links[0], ki, kj, apex, tol=tol
    )
    out, kept = editing.remove_flat_vertices(glued, seam_markers + [xi, xj], tol=tol)
    return PairwiseSurgery(out, apex, cone_area, (xi, xj))


@dataclass
class SurgeryResult:
    top: Surface
    infinitesimal: list[InfiniteFlatSphere]
    added_cones: list[ConeData]
    hulls: list[ConvexHull]
    apex_labels: list[int]
    added_area: list[float]  # per hull: sum of doubled-triangle areas
    steps: list[PairwiseSurgery] = field(default_factory=list)


def collapse_cluster(surface: Surface, cluster, tol: float | None = None,
                     order: str = "shortest"):
    """Repeated pairwise surgeries until one singularity remains.

    order: 'shortest' collapses the currently shortest internal connection
    first; 'longest' picks the longest candidate instead (used by the
    order-independence checks). Returns (surface, apex_label, steps)."""
    cur = surface
    active = set(cluster)
    steps = []
    guard = 0
    while len(active) > 1:
        guard += 1
        if guard > len(cluster) + 4:
            raise CapExceeded("cluster collapse did not terminate")
        T = delaunay_triangulation(cur)
        R = T.min_edge_length
        pick = None
        for _ in range(24):
            scs = enumerate_saddle_connections(cur, R, triangulation=T)
            cand = [
                s
                for s in scs
                if s.endpoints[0] in active and s.endpoints[1] in active
                and s.endpoints[0] != s.endpoints[1]
                and cur.curvatures[s.endpoints[0]] + cur.curvatures[s.endpoints[1]] < 1.0 - 1e-12
                and connection_iota(T.complex, s) == 0
            ]
            if cand:
                cand.sort(key=lambda s: s.length)
                pick = cand[0] if order == "shortest" else cand[-1]
                break
            R *= 2.0
        if pick is None:
            raise CapExceeded(f"no collapsible connection among {sorted(active)}")
        step = surgery_along_saddle_connection(T.complex, pick, tol=tol)
        steps.append(step)
        active -= set(step.collapsed)
        active.add(step.apex_label)
        cur = step.top
    return cur, next(iter(active)), steps


def generalized_surgery(surface: Surface, hulls: list[ConvexHull],
                        order: str = "shortest") -> SurgeryResult:
    """Collapse each hull's cluster by repeated pairwise surgeries (the
    constructive proof of the added-cone lemma); the result after all
    clusters are single points is the top sphere. Each hull also yields an
    infinitesimal sphere: its domain with the truncated cone re-attached."""
    seen: set[int] = set()
    for h in hulls:
        if seen & set(h.cluster):
            raise OverlappingHulls("hulls share singularities")
        boundary_labels = set(h.boundary_vertex_labels())
        if (seen - set(h.cluster)) & boundary_labels:
            raise OverlappingHulls("hull boundaries touch another cluster")
        seen |= set(h.cluster)
    cur = surface
    apexes = []
    added = []
    cones = []
    steps_all = []
    infs = []
    for h in hulls:
        cur, apex, steps = collapse_cluster(cur, h.cluster, order=order)
        apexes.append(apex)
        added.append(sum(s.cone_area for s in steps))
        steps_all.extend(steps)
        cones.append(h.added_cone())
        ksum = sum(h.complex.curvatures[c] for c in set(h.cluster))
        if h.domain is not None:
            fp = h.domain.complex
            binfo = h.domain.boundary
            # cone-side angles: the complement's corner angles at the hull
            # boundary = vertex angle - inside-domain angle
            bca = {}
            for (f, e) in binfo:
                lab = int(fp.labels[f, e])
                bca[lab] = h.complex.cone_angles[lab] - fp.cone_angles[lab]
            infs.append(
                InfiniteFlatSphere(fp, binfo, 2.0 - ksum, bca)
            )
    return SurgeryResult(
        top=cur,
        infinitesimal=infs,
        added_cones=cones,
        hulls=hulls,
        apex_labels=apexes,
        added_area=added,
        steps=steps_all,
    )


# ---------------------------------------------------------------------------
# cores of infinite non-negative flat spheres


def core_of_infinite_sphere(X: InfiniteFlatSphere):
    """The unique minimal region containing all saddle connections: tighten
    the finite-part boundary loop around the conical singularities.

    Returns (FlatDomain | None, legs, degenerate). The cone-side seam angles
    are >= pi by the data contract, so the loop only ever moves inward."""
    fp = X.finite_part
    tol = fp.tol
    loop = X.boundary
    legs = []
    for (f, e) in loop:
        a = tuple(fp.verts[f, e])
        b = tuple(fp.verts[f, (e + 1) % 3])
        d = geo.normalize(geo.sub(b, a))
        traj = tr.trace(fp, tr.ConePointStart(f, e), d, geo.dist(a, b) + 4 * tol, tol=tol)
        legs.append(Leg(int(fp.labels[f, e]), traj.end_status[1], (f, e, d), traj))

    extra = lambda l: X.boundary_cone_angles.get(l, 0.0)
    movable = set(fp.cone_angles)
    legs, insides, pinned = tighten_loop(fp, legs, movable, tol, extra_angle=extra)
    if _legs_degenerate(fp, legs, tol):
        return None, legs, True
    all_edges = all(l.traj.along_edge for l in legs)
    if all_edges and {l.start_label for l in legs} == {
        int(fp.labels[f, e]) for (f, e) in loop
    } and len(legs) == len(loop):
        # loop did not move: the finite part is the core
        return make_domain(fp), legs, False
    new_surface, links, face_map, markers = editing.insert_chains(
        fp, [l.traj for l in legs]
    )
    barrier = set()
    for link in links:
        for (lhe, rhe) in link:
            barrier.add(lhe)
            if rhe[0] >= 0:
                barrier.add(rhe)
    seed = links[0][0][0][0]
    region, remap = editing.extract_region(new_surface, barrier, seed)
    return make_domain(region), legs, False


def count_saddle_connections_infinite(X: InfiniteFlatSphere):
    """Exact census of the saddle connections of an infinite non-negative
    flat sphere, with the finiteness bound (3n-6) * 2^(4n^2/delta - 1).

    Enumerates inside the core with the combinatorial cap ceil(4n^2/delta).
    Returns (count, log2_bound, passes, stats)."""
    delta = X.curvature_gap()
    if delta <= 0:
        raise CurvatureTooLarge("finiteness needs a positive curvature gap")
    core, legs, degenerate = core_of_infinite_sphere(X)
    n = len(X.finite_part.cone_angles)
    if n < 3:
        raise NotSimple(
            f"the finiteness bound (3n-6)*2^(4n^2/delta-1) is vacuous for n={n} < 3"
        )
    if degenerate:
        # the core is a chain of segments: its saddle connections are exactly
        # the sub-segments between consecutive marked points
        m = len(legs) // 2
        count = m * (m + 1) // 2
        stats = {"degenerate": True, "cap": 0, "deepest_found": 0, "cap_hit": False}
    else:
        cx = core.complex
        n_core = cx.num_cone_points
        cap = int(math.ceil(4.0 * n_core * n_core / delta))
        stats = {}
        scs = enumerate_on_complex(cx, 1e30, cap, stats_out=stats)
        count = len(scs)
        stats["cap"] = cap
        stats["degenerate"] = False
    n_bound = max(n, len(core.complex.cone_angles) if core is not None else n)
    log2_bound = math.log2(3 * n_bound - 6) + 4.0 * n_bound * n_bound / delta - 1.0
    passes = (math.log2(count) if count > 0 else -1.0) <= log2_bound
    return count, log2_bound, passes, stats


# ---------------------------------------------------------------------------
# epsilon-geometric forests (thin wrapper over the enumerator)


def epsilon_geometric_forests(surface: Surface, eps: float, d: int | None = None,
                              max_forests: int = 100000):
    """All geometric forests whose edges have normalized length < eps.

    Returns (short_connections, forests) with forests given as index tuples
    into the connection list; a forest is an acyclic set of pairwise
    non-crossing simple connections with distinct endpoints."""
    import itertools

    norm = surface.normalized()
    T = delaunay_triangulation(norm)
    scs = [
        sc
        for sc in enumerate_saddle_connections(norm, eps * (1 - 1e-12), triangulation=T)
        if sc.endpoints[0] != sc.endpoints[1] and connection_iota(T.complex, sc) == 0
    ]
    scs = [sc for sc in scs if sc.length < eps]
    d = d if d is not None else max(1, norm.num_cone_points - 3)
    trajs = [connection_trajectory(T.complex, sc) for sc in scs]
    forests = []
    for size in range(1, min(d, len(scs)) + 1):
        for combo in itertools.combinations(range(len(scs)), size):
            # acyclic on labels
            parent = {}

            def find(x):
                while parent.setdefault(x, x) != x:
                    parent[x] = parent[parent[x]]
                    x = parent[x]
                return x

            ok = True
            for i in combo:
                a, b = (find(x) for x in scs[i].endpoints)
                if a == b:
                    ok = False
                    break
                parent[a] = b
            if not ok:
                continue
            if any(
                _trajectories_cross(T.complex, trajs[i], trajs[j])
                for i, j in itertools.combinations(combo, 2)
            ):
                continue
            forests.append(combo)
            if len(forests) >= max_forests:
                return scs, forests
    return scs, forests
