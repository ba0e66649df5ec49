"""Independent reference implementations used to cross-check the fast paths.

Everything here deliberately avoids the production kernels: intersections,
clustering and corridor searches are re-derived from scratch.
"""
from __future__ import annotations

import math


def _cross(ax, ay, bx, by):
    return ax * by - ay * bx


def _seg_intersection(p1, p2, q1, q2, tol):
    """('none') | ('point', x, y, s, t) | ('overlap',) for closed segments."""
    dax, day = p2[0] - p1[0], p2[1] - p1[1]
    dbx, dby = q2[0] - q1[0], q2[1] - q1[1]
    la = math.hypot(dax, day)
    lb = math.hypot(dbx, dby)
    den = _cross(dax, day, dbx, dby)
    if abs(den) <= tol * max(la, lb):
        off = _cross(dax, day, q1[0] - p1[0], q1[1] - p1[1]) / la
        if abs(off) > tol:
            return ("none",)
        u0 = ((q1[0] - p1[0]) * dax + (q1[1] - p1[1]) * day) / (la * la)
        u1 = ((q2[0] - p1[0]) * dax + (q2[1] - p1[1]) * day) / (la * la)
        lo, hi = max(min(u0, u1), 0.0), min(max(u0, u1), 1.0)
        if (hi - lo) * la > tol:
            return ("overlap",)
        if (hi - lo) * la >= -tol:
            s = 0.5 * (lo + hi)
            return ("point", p1[0] + s * dax, p1[1] + s * day, s, 0.0)
        return ("none",)
    s = _cross(q1[0] - p1[0], q1[1] - p1[1], dbx, dby) / den
    t = _cross(q1[0] - p1[0], q1[1] - p1[1], dax, day) / den
    if -tol / la <= s <= 1 + tol / la and -tol / lb <= t <= 1 + tol / lb:
        s = min(1.0, max(0.0, s))
        t = min(1.0, max(0.0, t))
        return ("point", p1[0] + s * dax, p1[1] + s * day, s, t)
    return ("none",)


def brute_force_iota(traj, tol=1e-9):
    """All-pairs same-face segment intersections with deduplication.

    Re-implements the transverse-pair count: canonicalize edge points to the
    smaller face, cluster coincident surface points, merge passages at equal
    arclength, drop the open trajectory's endpoints, count non-parallel
    direction pairs.
    """
    surface = traj.surface
    threads = traj.threads
    n = len(threads)
    params = traj.params
    total = traj.total_length
    events = []  # (x, y, face, param, dirx, diry)
    for i in range(n):
        for j in range(i + 1, n):
            ti, tj = threads[i], threads[j]
            if ti.face != tj.face:
                continue
            hit = _seg_intersection(ti.entry, ti.exit, tj.entry, tj.exit, tol)
            if hit[0] == "overlap":
                raise AssertionError("tangential overlap in oracle")
            if hit[0] != "point":
                continue
            _, x, y, s, t = hit
            for idx, frac in ((i, s), (j, t)):
                th = threads[idx]
                dx, dy = th.exit[0] - th.entry[0], th.exit[1] - th.entry[1]
                l = math.hypot(dx, dy)
                events.append((x, y, th.face, params[idx] + frac * l, dx / l, dy / l))
    # canonicalize: map edge points into the smallest adjacent face id
    canon = []
    for (x, y, face, param, dx, dy) in events:
        best = (face, x, y, dx, dy)
        for e in range(3):
            a = surface.verts[face, e]
            b = surface.verts[face, (e + 1) % 3]
            abx, aby = b[0] - a[0], b[1] - a[1]
            l2 = abx * abx + aby * aby
            u = ((x - a[0]) * abx + (y - a[1]) * aby) / l2
            u = min(1.0, max(0.0, u))
            px, py = a[0] + u * abx, a[1] + u * aby
            if math.hypot(px - x, py - y) <= tol:
                g = int(surface.adj_face[face, e])
                if g >= 0 and g < best[0]:
                    iso = surface.transfer_map(face, e)
                    qx, qy = iso((x, y))
                    ddx, ddy = iso.apply_vector((dx, dy))
                    best = (g, qx, qy, ddx, ddy)
        canon.append((best[0], best[1], best[2], param, best[3], best[4]))
    # cluster by surface point
    clusters = []
    for ev in canon:
        placed = False
        for cl in clusters:
            if cl[0][0] == ev[0] and math.hypot(cl[0][1] - ev[1], cl[0][2] - ev[2]) <= 32 * tol:
                cl.append(ev)
                placed = True
                break
        if not placed:
            clusters.append([ev])
    count = 0
    for cl in clusters:
        passages = []
        for (_, _, _, param, dx, dy) in cl:
            merged = False
            for (p0, _, _) in passages:
                dp = abs(param - p0)
                if traj.closed:
                    dp = min(dp, abs(total - dp))
                if dp <= 32 * tol:
                    merged = True
                    break
            if not merged:
                passages.append((param, dx, dy))
        if not traj.closed:
            passages = [p for p in passages if 32 * tol < p[0] < total - 32 * tol]
        for a in range(len(passages)):
            for b in range(a + 1, len(passages)):
                cr = abs(passages[a][1] * passages[b][2] - passages[a][2] * passages[b][1])
                if cr > tol:
                    count += 1
    return count


def naive_corridor_enumeration(complex_, R, depth, tol=1e-9):
    """Exhaustive corridor search without geometric pruning.

    Enumerates every face corridor up to the given combinatorial depth from
    every cone-point corner and keeps the straight segments to developed
    vertices that cross all corridor edges strictly and stay clear of the
    other developed vertices. Returns the multiset of (sorted endpoint pair,
    rounded length): each unoriented connection appears twice.
    """
    out = []
    for f0 in range(complex_.num_faces):
        for c0 in range(3):
            origin = tuple(complex_.verts[f0, c0])
            start_label = int(complex_.labels[f0, c0])

            def visible(placements, faces, edges, target):
                # target must hit every crossed edge inside (0,1), with
                # increasing parameters, and avoid all developed vertices
                params = [0.0]
                for i, e in enumerate(edges):
                    pl = placements[i]
                    a = pl(tuple(complex_.verts[faces[i], e]))
                    b = pl(tuple(complex_.verts[faces[i], (e + 1) % 3]))
                    hit = _seg_intersection(origin, target, a, b, 0.0)
                    if hit[0] != "point":
                        return False
                    s, t = hit[3], hit[4]
                    if not (tol < s < 1 - tol) or not (tol / 10 < t < 1 - tol / 10):
                        return False
                    seg_l = math.hypot(b[0] - a[0], b[1] - a[1])
                    if min(t, 1 - t) * seg_l <= tol:
                        return False
                    if s <= params[-1]:
                        return False
                    params.append(s)
                return True

            stack = [([f0], [], None)]
            while stack:
                faces, edges, _ = stack.pop()
                placements = complex_.develop(faces, edges)
                f = faces[-1]
                pl = placements[-1]
                entry_e = None
                if edges:
                    entry_e = int(complex_.adj_edge[faces[-2], edges[-1]])
                for c in range(3):
                    if not edges and c == c0:
                        continue
                    if not edges and c == (c0 + 2) % 3:
                        # the reversed half-edge of this face: the partner
                        # face's corner counts that orientation
                        continue
                    target = pl(tuple(complex_.verts[f, c]))
                    d = math.hypot(target[0] - origin[0], target[1] - origin[1])
                    if d <= tol or d > R + tol:
                        continue
                    if visible(placements, faces, edges, target):
                        end_label = int(complex_.labels[f, c])
                        out.append(
                            (tuple(sorted((start_label, end_label))), round(d, 7))
                        )
                if len(faces) >= depth:
                    continue
                for e in range(3):
                    if edges and e == entry_e:
                        continue
                    if not edges and e != (c0 + 1) % 3:
                        continue
                    g = int(complex_.adj_face[f, e])
                    if g < 0:
                        continue
                    stack.append((faces + [g], edges + [e], None))
    return sorted(out)


def equilateral_diagonal_census(R):
    """Oriented generalized-diagonal count of the unit equilateral billiard
    from one vertex: visible triangular-lattice points in the closed 60-degree
    sector within radius R (norm^2 = i^2 + i*j + j^2, visibility = gcd 1)."""
    count = 0
    i_max = int(R) + 1
    for i in range(0, i_max + 1):
        for j in range(0, i_max + 1):
            if i == 0 and j == 0:
                continue
            if i * i + i * j + j * j > R * R + 1e-12:
                continue
            if math.gcd(i, j) != 1:
                continue
            count += 1
    return count
