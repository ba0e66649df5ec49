"""Complex surgery primitives: inserting geodesic chains as edges, slitting,
gluing cones, and removing flat (angle 2*pi) marker vertices.

All operations rebuild only the affected faces and return fresh Surface
objects plus provenance maps; untouched faces keep their charts verbatim.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from . import geometry as geo
from .errors import CapExceeded, NonMatchingGluing
from .surface import Surface


@dataclass
class _Item:
    """A boundary point of a face being subdivided."""

    kind: str  # "corner" | "split"
    edge: int  # local edge for splits; local corner index for corners
    t: float  # param along the half-edge (splits only)
    label: int
    xy: geo.Vec


class _FaceBuild:
    def __init__(self, face: int, surface: Surface):
        self.face = face
        self.surface = surface
        self.corners = [
            _Item("corner", c, 0.0, int(surface.labels[face, c]), tuple(surface.verts[face, c]))
            for c in range(3)
        ]
        self.splits: dict[int, list[_Item]] = {0: [], 1: [], 2: []}
        self.chords: list[tuple[_Item, _Item, tuple]] = []  # (a, b, tag)

    def cycle(self) -> list[_Item]:
        out = []
        for c in range(3):
            out.append(self.corners[c])
            out.extend(sorted(self.splits[c], key=lambda s: s.t))
        return out


def _fresh_labels(surface: Surface):
    nxt = max(surface.cone_angles) + 1

    def gen():
        nonlocal nxt
        nxt += 1
        return nxt - 1

    return gen


def _triangulate_piece(items: list[_Item], tol: float):
    """Ear-clip a simple CCW polygon of _Items into triangles of items.

    Prefers well-shaped ears; falls back to any positive-area ear (thin
    slivers are legitimate around nearly collinear link points)."""
    idx = list(range(len(items)))
    pts = [it.xy for it in items]
    scale2 = max(
        (p[0] - q[0]) ** 2 + (p[1] - q[1]) ** 2 for p in pts for q in pts
    )
    tris = []
    guard = 0
    while len(idx) > 3:
        guard += 1
        if guard > len(items) ** 2 + 16:
            raise CapExceeded("ear clipping failed during face subdivision")
        m = len(idx)
        done = False
        for thr in (1e-9 * scale2, tol * tol, 0.0):
            for k in range(m):
                a, b, c = idx[(k - 1) % m], idx[k], idx[(k + 1) % m]
                if geo.triangle_area(pts[a], pts[b], pts[c]) <= thr:
                    continue
                ok = True
                for o in idx:
                    if o in (a, b, c):
                        continue
                    if geo.point_in_triangle(pts[o], pts[a], pts[b], pts[c], tol=tol * tol):
                        ok = False
                        break
                if ok:
                    tris.append((items[a], items[b], items[c]))
                    idx.pop(k)
                    done = True
                    break
            if done:
                break
        if not done:
            raise CapExceeded("no ear found during face subdivision")
    a, b, c = idx
    tris.append((items[a], items[b], items[c]))
    return tris


def _split_pieces(cycle: list[_Item], chords, tol: float):
    """Split an item cycle by disjoint chords; returns chord-free cycles and
    the list of (chord, tag) diagonals created (as item pairs)."""
    pieces = [(cycle, list(chords))]
    final = []
    cuts = []
    guard = 0
    while pieces:
        guard += 1
        if guard > 10 * (len(chords) + 2) + 20:
            raise CapExceeded("face subdivision did not terminate")
        cyc, chs = pieces.pop()
        if not chs:
            final.append(cyc)
            continue
        a, b, tag = chs.pop()
        ia = cyc.index(a)
        ib = cyc.index(b)
        if ia > ib:
            ia, ib = ib, ia
            a, b = b, a
        arc1 = cyc[ia : ib + 1]  # a .. b
        arc2 = cyc[ib:] + cyc[: ia + 1]  # b .. a
        cuts.append((a, b, tag))
        rest1, rest2 = [], []
        for (x, y, tg) in chs:
            in1 = x in arc1 and y in arc1
            in2 = x in arc2 and y in arc2
            if in1 and in2:
                # both endpoints on the cut boundary: decide by a midpoint test
                mid = ((x.xy[0] + y.xy[0]) / 2, (x.xy[1] + y.xy[1]) / 2)
                s = geo.cross(geo.sub(b.xy, a.xy), geo.sub(mid, a.xy))
                (rest1 if s <= 0 else rest2).append((x, y, tg))
            elif in1:
                rest1.append((x, y, tg))
            elif in2:
                rest2.append((x, y, tg))
            else:
                raise CapExceeded("chord endpoints lost during face subdivision")
        pieces.append((arc1, rest1))
        pieces.append((arc2, rest2))
    return final, cuts


def insert_chains(surface: Surface, trajectories, tol: float | None = None):
    """Insert traced vertex-to-vertex geodesics as edge chains.

    Each trajectory must start and end at cone points and the set of
    trajectories must be mutually non-crossing. Returns (new_surface, links,
    face_map, markers) where links[i] is the ordered list of
    (left_half_edge, right_half_edge) pairs of trajectory i in travel order,
    face_map maps old faces to lists of new face ids, and markers lists the
    zero-curvature labels created at edge crossings.
    """
    tol = surface.tol if tol is None else tol
    fresh = _fresh_labels(surface)
    builds: dict[int, _FaceBuild] = {}

    def build_for(f):
        if f not in builds:
            builds[f] = _FaceBuild(f, surface)
        return builds[f]

    # split points per unordered edge: {(f,e) canonical: [(t_on_f_side, label)]}
    edge_key = {}
    for (a, b) in surface.edges():
        edge_key[a] = a
        if b[0] >= 0:
            edge_key[b] = a
    edge_splits: dict = {}
    markers = []

    def split_marker(f, e, t):
        """Register a split at param t on half-edge (f, e); returns the
        deduplicated (t_local, label) in this half-edge's own parameter."""
        key = edge_key[(f, e)]
        tc = t if key == (f, e) else 1.0 - t
        lst = edge_splits.setdefault(key, [])
        elen = surface.edge_length(*key)
        for (t0, lab) in lst:
            if abs(t0 - tc) * elen <= 4 * tol:
                return (t0 if key == (f, e) else 1.0 - t0, lab)
        lab = fresh()
        markers.append(lab)
        lst.append((tc, lab))
        return (t, lab)

    # collect chords
    chain_specs = []  # per trajectory: list of (face, item_a, item_b)
    for ti, traj in enumerate(trajectories):
        spec = []
        if traj.along_edge:
            t0 = traj.threads[0]
            if t0.entry_mark[0] != "vertex" or t0.exit_mark[0] != "vertex":
                raise NonMatchingGluing("edge-run chains must join two vertices")
            # the existing edge between those corners
            ca, cb = t0.entry_mark[1], t0.exit_mark[1]
            e = ca if (ca + 1) % 3 == cb else cb
            forward = (ca + 1) % 3 == cb
            spec.append(("existing", t0.face, e, forward))
            chain_specs.append(spec)
            continue
        n = len(traj.threads)
        for i, t in enumerate(traj.threads):
            fb = build_for(t.face)
            items = []
            for mark, t_or_none, pt in ((t.entry_mark, None, t.entry), (t.exit_mark, None, t.exit)):
                if mark[0] == "vertex":
                    items.append(fb.corners[mark[1]])
                elif mark[0] == "edge":
                    e = mark[1]
                    a = tuple(surface.verts[t.face, e])
                    b = tuple(surface.verts[t.face, (e + 1) % 3])
                    tpar = geo.dot(geo.sub(pt, a), geo.sub(b, a)) / (geo.dist(a, b) ** 2)
                    tpar, lab = split_marker(t.face, e, tpar)
                    found = None
                    for s in fb.splits[e]:
                        if s.label == lab:
                            found = s
                            break
                    if found is None:
                        xy = (a[0] + tpar * (b[0] - a[0]), a[1] + tpar * (b[1] - a[1]))
                        found = _Item("split", e, tpar, lab, xy)
                        fb.splits[e].append(found)
                    items.append(found)
                else:
                    raise NonMatchingGluing("chains must join vertices (interior endpoint found)")
            fb.chords.append((items[0], items[1], (ti, i)))
            spec.append(("chord", t.face, items[0], items[1]))
        chain_specs.append(spec)

    # propagate splits to partner faces that have no chords themselves
    for key, lst in edge_splits.items():
        f, e = key
        g, ge = int(surface.adj_face[f, e]), int(surface.adj_edge[f, e])
        for (t, lab) in lst:
            for (ff, ee, tt) in ((f, e, t), (g, ge, 1.0 - t)) if g >= 0 else ((f, e, t),):
                fb = build_for(ff)
                if not any(s.label == lab for s in fb.splits[ee]):
                    a = tuple(surface.verts[ff, ee])
                    b = tuple(surface.verts[ff, (ee + 1) % 3])
                    xy = (a[0] + tt * (b[0] - a[0]), a[1] + tt * (b[1] - a[1]))
                    fb.splits[ee].append(_Item("split", ee, tt, lab, xy))

    # rebuild faces
    new_faces = []  # (labels, coords)
    half_of = {}  # (new_face, e) -> ("old", f, e, t_lo, t_hi) | ("cut", tag_dir)
    face_map: dict[int, list[int]] = {}
    cut_halves: dict = {}

    def add_face(f_old, it0, it1, it2, cuts_lookup, chord_dir):
        fid = len(new_faces)
        new_faces.append(
            ((it0.label, it1.label, it2.label), (it0.xy, it1.xy, it2.xy))
        )
        face_map.setdefault(f_old, []).append(fid)
        for e, (x, y) in enumerate(((it0, it1), (it1, it2), (it2, it0))):
            pair = (id(x), id(y))
            tag = cuts_lookup.get(pair)
            if tag is not None:
                # travel orientation decides which side of the slit this is
                side = "fwd" if pair == chord_dir[tag] else "rev"
                cut_halves.setdefault(tag, {})[side] = (fid, e)
            else:
                half_of[(fid, e)] = (x, y)
        return fid

    untouched = [f for f in range(surface.num_faces) if f not in builds]
    for f in untouched:
        fid = len(new_faces)
        new_faces.append(
            (tuple(int(x) for x in surface.labels[f]), tuple(tuple(v) for v in surface.verts[f]))
        )
        face_map[f] = [fid]

    internal_pairs = []  # ((fid,e),(gid,ge)) glued inside rebuilt faces
    for f, fb in builds.items():
        cyc = fb.cycle()
        chord_dir = {tag: (id(a), id(b)) for (a, b, tag) in fb.chords}
        pieces, cuts = _split_pieces(cyc, fb.chords, tol)
        cuts_lookup = {}
        for (a, b, tag) in cuts:
            cuts_lookup[(id(a), id(b))] = tag
            cuts_lookup[(id(b), id(a))] = tag
        # ear clip pieces; collect item-pair -> half-edge to glue internal diagonals
        item_half: dict = {}
        for piece in pieces:
            for (i0, i1, i2) in _triangulate_piece(piece, tol):
                fid = add_face(f, i0, i1, i2, cuts_lookup, chord_dir)
                for e, (x, y) in enumerate(((i0, i1), (i1, i2), (i2, i0))):
                    if (fid, e) in half_of:
                        item_half[(id(x), id(y))] = (fid, e)
        # glue internal diagonals (non-cut): both directions present
        for (pa, pb), he in list(item_half.items()):
            if (pb, pa) in item_half and (pa, pb) < (pb, pa):
                internal_pairs.append((he, item_half[(pb, pa)]))
                half_of.pop(he, None)
                half_of.pop(item_half[(pb, pa)], None)

    # determine remaining boundary sub-edges per original half-edge; the
    # surviving half-edges join cycle-adjacent items, so they lie on exactly
    # one original edge
    owner = {}
    for f_old, lst in face_map.items():
        for fid in lst:
            owner[fid] = f_old
    sub_edges: dict = {}
    for (fid, e), (x, y) in half_of.items():
        f_old = owner[fid]
        if x.kind == "corner" and y.kind == "corner":
            eo, lo, hi = x.edge, 0.0, 1.0
        elif x.kind == "split" and y.kind == "split":
            eo, lo, hi = x.edge, x.t, y.t
        elif x.kind == "split":
            eo, lo, hi = x.edge, x.t, 1.0
        else:
            eo, lo, hi = y.edge, 0.0, y.t
        sub_edges.setdefault((f_old, eo), []).append(((lo, hi), (fid, e)))

    for f in untouched:
        fid = face_map[f][0]
        for e in range(3):
            sub_edges.setdefault((f, e), []).append(((0.0, 1.0), (fid, e)))

    # drop duplicates (untouched might have been added twice)
    for k in sub_edges:
        uniq = []
        seen = set()
        for item in sub_edges[k]:
            if item[1] not in seen:
                uniq.append(item)
                seen.add(item[1])
        sub_edges[k] = sorted(uniq, key=lambda it: it[0][0])

    gluings = list(internal_pairs)
    done_old = set()
    for (f, e), subs in sub_edges.items():
        g, ge = int(surface.adj_face[f, e]), int(surface.adj_edge[f, e])
        if (f, e) in done_old:
            continue
        if g < 0:
            continue  # boundary stays boundary
        done_old.add((f, e))
        done_old.add((g, ge))
        others = sorted(sub_edges.get((g, ge), []), key=lambda it: it[0][0])
        if len(subs) != len(others):
            raise NonMatchingGluing(
                f"edge subdivision mismatch across ({f},{e})~({g},{ge}): "
                f"{len(subs)} vs {len(others)} pieces (tol {tol:.1e})"
            )
        for (rng, he), (rng2, he2) in zip(subs, reversed(others)):
            if abs(rng[0] - (1.0 - rng2[1])) > 1e-6 or abs(rng[1] - (1.0 - rng2[0])) > 1e-6:
                raise NonMatchingGluing(
                    f"edge subdivision params disagree across ({f},{e})~({g},{ge})"
                )
            gluings.append((he, he2))

    # chain links: pair the two sides of each cut
    links = []
    for ti, spec in enumerate(chain_specs):
        link = []
        for j, entry in enumerate(spec):
            if entry[0] == "existing":
                _, f, e, forward = entry
                fid = face_map[f][0]
                g, ge = int(surface.adj_face[f, e]), int(surface.adj_edge[f, e])
                gid = face_map[g][0] if g >= 0 else -1
                left = (fid, e) if forward else (gid, ge)
                right = (gid, ge) if forward else (fid, e)
                link.append((left, right))
            else:
                halves = cut_halves.get((ti, j))
                if not halves or "fwd" not in halves or "rev" not in halves:
                    raise NonMatchingGluing(f"chain {ti} thread {j} lost its cut halves")
                # fwd half-edge runs along the travel direction: its face is on
                # the left of the chain
                link.append((halves["fwd"], halves["rev"]))
                gluings.append((halves["fwd"], halves["rev"]))
        links.append(link)

    new_surface = Surface.build_from_triangles(
        new_faces, gluings, tol=tol, require_sphere=surface.is_closed
    )
    return new_surface, links, face_map, markers


def cone_triangle(k_i: float, k_j: float, length: float):
    """The Thurston cone triangle: angles pi*(1-ki-kj) at the apex A and
    pi*ki, pi*kj at B, C, with |BC| = length. Returns (A, B, C) with B at the
    origin and C on the positive x-axis."""
    aB = math.pi * k_i
    aC = math.pi * k_j
    aA = math.pi * (1.0 - k_i - k_j)
    dBA = length * math.sin(aC) / math.sin(aA)
    A = (dBA * math.cos(aB), dBA * math.sin(aB))
    return A, (0.0, 0.0), (length, 0.0)


def slit_and_glue_cone(surface: Surface, link, k_i: float, k_j: float,
                       apex_label: int, tol: float | None = None):
    """Slit the chain open and glue the doubled cone triangle.

    link: ordered (left_half_edge, right_half_edge) pairs from x_i to x_j.
    Interior chain markers split into two surface points; the right side of
    the slit gets fresh labels. Returns (new_surface, cone_area,
    seam_marker_labels) with every seam marker flat (angle 2*pi) and
    removable.
    """
    tol = surface.tol if tol is None else tol
    m = len(link)
    piece_lengths = [surface.edge_length(*l) for (l, r) in link]
    L = sum(piece_lengths)
    chain_labels = [int(surface.labels[l[0], l[1]]) for (l, r) in link]
    chain_labels.append(int(surface.labels[link[-1][0][0], (link[-1][0][1] + 1) % 3]))

    # split interior markers: the right-side corner arc gets a fresh label
    nxt_label = max(max(surface.cone_angles), apex_label) + 1

    def fresh():
        nonlocal nxt_label
        nxt_label += 1
        return nxt_label - 1
    chain_slots = set()
    for (l, r) in link:
        chain_slots.add(l)
        chain_slots.add(r)
        chain_slots.add((int(surface.adj_face[l[0], l[1]]), int(surface.adj_edge[l[0], l[1]])))
        chain_slots.add((int(surface.adj_face[r[0], r[1]]), int(surface.adj_edge[r[0], r[1]])))
    relabel: dict[tuple[int, int], int] = {}
    right_labels = [chain_labels[0]]
    for j in range(1, m):
        lab2 = fresh()
        right_labels.append(lab2)
        rprev = link[j - 1][1]
        cur = (rprev[0], rprev[1])  # corner of the right half-edge at u_j
        guard = 0
        while True:
            guard += 1
            if guard > 3 * surface.num_faces + 3:
                raise CapExceeded("right-arc walk at a slit marker did not close")
            relabel[cur] = lab2
            f, c = cur
            crossing = (f, (c + 2) % 3)
            if crossing in chain_slots:
                break
            cur = surface.ccw_next_corner(*cur)
            if cur == (-1, -1):
                raise CapExceeded("right-arc walk hit a boundary")
    right_labels.append(chain_labels[-1])

    A, B, C = cone_triangle(k_i, k_j, L)
    cumul = [0.0]
    for pl in piece_lengths:
        cumul.append(cumul[-1] + pl)
    P = [(c, 0.0) for c in cumul]

    F0 = surface.num_faces
    faces = []
    for f in range(F0):
        labs = [int(surface.labels[f, c]) for c in range(3)]
        for c in range(3):
            if (f, c) in relabel:
                labs[c] = relabel[(f, c)]
        faces.append((tuple(labs), tuple(tuple(v) for v in surface.verts[f])))
    # copy 1 glues to the right side: its base labels are the primed ones;
    # copy 2 glues to the left side and keeps the original labels
    for j in range(m):
        faces.append(((apex_label, right_labels[j], right_labels[j + 1]), (A, P[j], P[j + 1])))
    Am = (A[0], -A[1])
    Pm = [(p[0], -p[1]) for p in P]
    for j in range(m):
        faces.append(((apex_label, chain_labels[j + 1], chain_labels[j]), (Am, Pm[j + 1], Pm[j])))

    def c1(j):
        return F0 + j

    def c2(j):
        return F0 + m + j

    link_set = set()
    for (l, r) in link:
        link_set.add(l)
        link_set.add(r)
    gluings = []
    seen = set()
    for (a, b) in surface.edges():
        if b[0] < 0 or a in link_set or b in link_set:
            continue
        gluings.append((a, b))
    # slit gluings: left half-edge (runs with travel) glues to copy1's base
    # (which runs with travel too -> must glue to a reversed half-edge), so
    # left pairs with copy2's base and right with copy1's base
    for j, (l, r) in enumerate(link):
        gluings.append((r, (c1(j), 1)))
        gluings.append((l, (c2(j), 1)))
    # fan radials
    for j in range(m - 1):
        gluings.append(((c1(j), 2), (c1(j + 1), 0)))
        gluings.append(((c2(j), 0), (c2(j + 1), 2)))
    gluings.append(((c1(0), 0), (c2(0), 2)))
    gluings.append(((c1(m - 1), 2), (c2(m - 1), 0)))

    new_surface = Surface.build_from_triangles(
        faces, gluings, tol=max(tol, 1e-7), require_sphere=surface.is_closed
    )
    cone_area = 2.0 * geo.triangle_area(B, C, A)
    return new_surface, cone_area, chain_labels[1:-1] + right_labels[1:-1]


def remove_flat_vertex(surface: Surface, label: int, tol: float | None = None) -> Surface:
    """Remove a zero-curvature marked point by re-triangulating its star.

    The vertex must have total angle 2*pi within tolerance and a star in
    which no face repeats.
    """
    tol = surface.tol if tol is None else tol
    angle = surface.cone_angles[label]
    if abs(angle - 2.0 * math.pi) > 1e-7:
        raise CapExceeded(
            f"vertex {label} has angle {angle!r}, not 2*pi within 1e-7; cannot remove"
        )
    start = surface.corners_of_vertex(label)[0]
    fan = []
    cur = start
    while True:
        fan.append(cur)
        cur = surface.ccw_next_corner(*cur)
        if cur == start:
            break
        if cur == (-1, -1) or len(fan) > 3 * surface.num_faces:
            raise CapExceeded(f"star walk at vertex {label} did not close")
    fan_faces = [f for (f, c) in fan]
    # a face may appear twice in the fan (self-adjacent star); everything
    # below is keyed by (face, corner) slots, which stay distinct
    # develop the fan around the vertex
    placements = []
    iso = geo.Isometry(1.0, 0.0, -surface.verts[start[0], start[1]][0],
                       -surface.verts[start[0], start[1]][1])
    for (f, c) in fan:
        placements.append(iso)
        e = (c + 2) % 3  # end side: cross it to the next fan face
        iso = iso.compose(surface.gluing_map(f, e))
    items = []
    for (f, c), pl in zip(fan, placements):
        nxt = (c + 1) % 3
        items.append(
            _Item("corner", 0, 0.0, int(surface.labels[f, nxt]), pl(tuple(surface.verts[f, nxt])))
        )
    if any(it.label == label for it in items):
        # the point lies on its own link: re-triangulating the star cannot
        # make it interior, so it stays as a zero-curvature marked point
        raise CapExceeded(f"vertex {label} lies on its own link; keeping the marker")
    # closure check: last face's far end equals the first link point
    f_last, c_last = fan[-1]
    closing = placements[-1](tuple(surface.verts[f_last, (c_last + 2) % 3]))
    if geo.dist(closing, items[0].xy) > 1e-6:
        raise CapExceeded(f"star of vertex {label} does not develop flat (gap "
                          f"{geo.dist(closing, items[0].xy):.2e})")

    tris = _triangulate_piece(items, tol)
    d = len(fan)
    old_to_keep = [f for f in range(surface.num_faces) if f not in set(fan_faces)]
    remap = {f: i for i, f in enumerate(old_to_keep)}
    faces = [
        (tuple(int(x) for x in surface.labels[f]), tuple(tuple(v) for v in surface.verts[f]))
        for f in old_to_keep
    ]
    nbase = len(faces)
    item_half = {}
    for tI, (i0, i1, i2) in enumerate(tris):
        faces.append(((i0.label, i1.label, i2.label), (i0.xy, i1.xy, i2.xy)))
        for e, (x, y) in enumerate(((i0, i1), (i1, i2), (i2, i0))):
            item_half[(id(x), id(y))] = (nbase + tI, e)

    gluings = []
    seen_pairs = set()
    # internal diagonals of the new star
    for (pa, pb), he in item_half.items():
        if (pb, pa) in item_half and (pa, pb) not in seen_pairs:
            gluings.append((he, item_half[(pb, pa)]))
            seen_pairs.add((pa, pb))
            seen_pairs.add((pb, pa))
    # outer link edges: fan face i's far edge (u_i -> u_i+1) had a partner;
    # two fan faces may share their far edges (the link passes the same
    # complex edge twice), in which case the two new slots glue to each other
    far_slot = {}
    for i, (f, c) in enumerate(fan):
        far_slot[(f, (c + 1) % 3)] = i
    fan_face_set = set(fan_faces)
    done_link = set()
    for i, (f, c) in enumerate(fan):
        if i in done_link:
            continue
        x, y = items[i], items[(i + 1) % d]
        he = item_half[(id(x), id(y))]
        ef = (c + 1) % 3
        g, ge = int(surface.adj_face[f, ef]), int(surface.adj_edge[f, ef])
        if g < 0:
            continue
        if (g, ge) in far_slot:
            j = far_slot[(g, ge)]
            x2, y2 = items[j], items[(j + 1) % d]
            he2 = item_half[(id(x2), id(y2))]
            gluings.append((he, he2))
            done_link.add(i)
            done_link.add(j)
        elif g in fan_face_set:
            # a star face's non-far edges touch the vertex and cannot be the
            # partner of a far edge when labels are consistent
            raise CapExceeded(
                f"inconsistent star adjacency at vertex {label}"
            )
        else:
            gluings.append((he, (remap[g], ge)))
            done_link.add(i)
    # untouched gluings
    for (a, b) in surface.edges():
        (f, e), (g, ge) = a, b
        if g < 0:
            continue
        if f in set(fan_faces) or g in set(fan_faces):
            continue
        gluings.append(((remap[f], e), (remap[g], ge)))
    return Surface.build_from_triangles(
        faces, gluings, tol=max(tol, 1e-7), require_sphere=surface.is_closed
    )


def remove_flat_vertices(surface: Surface, labels, tol: float | None = None,
                         best_effort: bool = True):
    """Remove the listed flat vertices; with best_effort a vertex that cannot
    be removed (it lies on its own link) is kept as a zero-curvature marked
    point. Returns (surface, kept_labels)."""
    out = surface
    kept = []
    for lab in labels:
        try:
            out = remove_flat_vertex(out, lab, tol=tol)
        except CapExceeded:
            if not best_effort:
                raise
            kept.append(lab)
    return out, kept


def extract_region(surface: Surface, barrier, seed_face: int):
    """Subcomplex flood-filled from seed_face without crossing the barrier
    half-edges; the barrier becomes boundary. Returns (region, face_map)."""
    barrier = set(barrier)
    keep = {seed_face}
    stack = [seed_face]
    while stack:
        f = stack.pop()
        for e in range(3):
            if (f, e) in barrier:
                continue
            g = int(surface.adj_face[f, e])
            if g < 0:
                continue
            ge = int(surface.adj_edge[f, e])
            if (g, ge) in barrier:
                continue
            if g not in keep:
                keep.add(g)
                stack.append(g)
    order = sorted(keep)
    remap = {f: i for i, f in enumerate(order)}
    faces = [
        (tuple(int(x) for x in surface.labels[f]), tuple(tuple(v) for v in surface.verts[f]))
        for f in order
    ]
    gluings = []
    for (a, b) in surface.edges():
        (f, e), (g, ge) = a, b
        if g < 0:
            continue
        if f not in keep or g not in keep:
            continue
        if (f, e) in barrier or (g, ge) in barrier:
            continue
        gluings.append(((remap[f], e), (remap[g], ge)))
    region = Surface.build_from_triangles(faces, gluings, tol=surface.tol, require_sphere=False)
    return region, remap
