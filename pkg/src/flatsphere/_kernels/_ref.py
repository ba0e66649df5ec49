"""Pure-Python reference implementation of the hot kernels.

The compiled module flatsphere._kernels._fast mirrors these functions
exactly; tests assert bit-level-compatible behaviour on shared inputs.

Status codes for trace: 0 budget exhausted, 1 cone point hit, 2 thread cap
exceeded, 3 boundary edge hit. Entry/exit codes per thread row: -1 interior
point, 0..2 local edge index, 3+v local vertex index.
"""
from __future__ import annotations

import math

import numpy as np

IMPLEMENTATION = "python"

STATUS_BUDGET = 0
STATUS_CONE_POINT = 1
STATUS_CAP = 2
STATUS_BOUNDARY = 3


def trace(tri, adj_face, adj_edge, glue_fwd, f0, px, py, dx, dy, budget, tol, max_threads):
    """Propagate a straight ray chart-by-chart.

    Returns (threads float64[N,7], status, end_face, end_a, end_b) where the
    thread rows are [face, entry_x, entry_y, exit_x, exit_y, entry_code,
    exit_code]. For status 1 (cone point) end_a is the local vertex index in
    end_face; otherwise (end_a, end_b) is the final chart point.
    """
    n = math.hypot(dx, dy)
    dx, dy = dx / n, dy / n
    f = int(f0)
    remaining = float(budget)
    entry_code = -1.0
    rows = []
    status = STATUS_BUDGET
    end_face, end_a, end_b = f, px, py
    while True:
        if len(rows) >= max_threads:
            status = STATUS_CAP
            end_face, end_a, end_b = f, px, py
            break
        v = tri[f]
        best_s = math.inf
        best_e = -1
        for e in range(3):
            ax, ay = v[e][0], v[e][1]
            bx, by = v[(e + 1) % 3][0], v[(e + 1) % 3][1]
            ex_, ey_ = bx - ax, by - ay
            denom = dx * ey_ - dy * ex_
            if denom == 0.0:
                continue
            s = ((ax - px) * ey_ - (ay - py) * ex_) / denom
            if s <= tol or s >= best_s:
                continue
            u = (dx * (py - ay) - dy * (px - ax)) / denom
            elen = math.hypot(ex_, ey_)
            if -tol / elen <= u <= 1.0 + tol / elen:
                best_s = s
                best_e = e
        if best_e < 0:
            # numerically stuck; report as cap (pathology)
            status = STATUS_CAP
            end_face, end_a, end_b = f, px, py
            break
        if best_s >= remaining:
            qx, qy = px + remaining * dx, py + remaining * dy
            rows.append([f, px, py, qx, qy, entry_code, -1.0])
            status = STATUS_BUDGET
            end_face, end_a, end_b = f, qx, qy
            break
        qx, qy = px + best_s * dx, py + best_s * dy
        hit = -1
        for which, vi in ((0, best_e), (1, (best_e + 1) % 3)):
            wx, wy = v[vi][0], v[vi][1]
            if math.hypot(qx - wx, qy - wy) <= tol:
                hit = vi
                break
        if hit >= 0:
            rows.append([f, px, py, v[hit][0], v[hit][1], entry_code, 3.0 + hit])
            status = STATUS_CONE_POINT
            end_face, end_a, end_b = f, float(hit), 0.0
            break
        rows.append([f, px, py, qx, qy, entry_code, float(best_e)])
        g = int(adj_face[f][best_e])
        if g < 0:
            status = STATUS_BOUNDARY
            end_face, end_a, end_b = f, qx, qy
            break
        remaining -= best_s
        c, s_, tx, ty = glue_fwd[f][best_e]
        px, py = c * qx - s_ * qy + tx, s_ * qx + c * qy + ty
        dx, dy = c * dx - s_ * dy, s_ * dx + c * dy
        entry_code = float(adj_edge[f][best_e])
        f = g
    threads = np.array(rows, dtype=np.float64) if rows else np.zeros((0, 7))
    return threads, status, end_face, end_a, end_b


def segment_events(faces, p, q, tol):
    """All pairwise intersections of same-face closed segments.

    faces: int array (M,), p/q: float arrays (M, 2). Returns
    (events float64[K,6] rows [i, j, x, y, si, tj], overlaps int64[L,2]).
    Endpoint touches within tol count; parallel overlap of positive length is
    reported separately.
    """
    M = len(faces)
    events = []
    overlaps = []
    for i in range(M):
        for j in range(i + 1, M):
            if faces[i] != faces[j]:
                continue
            a0x, a0y = p[i][0], p[i][1]
            dax, day = q[i][0] - a0x, q[i][1] - a0y
            b0x, b0y = p[j][0], p[j][1]
            dbx, dby = q[j][0] - b0x, q[j][1] - b0y
            la = math.hypot(dax, day)
            lb = math.hypot(dbx, dby)
            if la == 0.0 or lb == 0.0:
                continue
            denom = dax * dby - day * dbx
            if abs(denom) <= tol * max(la, lb):
                off = (dax * (b0y - a0y) - day * (b0x - a0x)) / la
                if abs(off) > tol:
                    continue
                u0 = ((b0x - a0x) * dax + (b0y - a0y) * day) / (la * la)
                u1 = ((b0x + dbx - a0x) * dax + (b0y + dby - a0y) * day) / (la * la)
                lo, hi = min(u0, u1), max(u0, u1)
                lo, hi = max(lo, 0.0), min(hi, 1.0)
                if (hi - lo) * la > tol:
                    overlaps.append([i, j])
                elif (hi - lo) * la >= -tol:
                    s = 0.5 * (lo + hi)
                    x, y = a0x + s * dax, a0y + s * day
                    t = ((x - b0x) * dbx + (y - b0y) * dby) / (lb * lb)
                    if -tol / lb <= t <= 1.0 + tol / lb:
                        events.append([i, j, x, y, min(1.0, max(0.0, s)), min(1.0, max(0.0, t))])
                continue
            s = ((b0x - a0x) * dby - (b0y - a0y) * dbx) / denom
            t = ((b0x - a0x) * day - (b0y - a0y) * dax) / denom
            if -tol / la <= s <= 1.0 + tol / la and -tol / lb <= t <= 1.0 + tol / lb:
                s = min(1.0, max(0.0, s))
                t = min(1.0, max(0.0, t))
                events.append([i, j, a0x + s * dax, a0y + s * day, s, t])
    ev = np.array(events, dtype=np.float64) if events else np.zeros((0, 6))
    ov = np.array(overlaps, dtype=np.int64) if overlaps else np.zeros((0, 2), dtype=np.int64)
    return ev, ov


def saddle_search(tri, adj_face, adj_edge, glue_dev, root_face, root_corner, R, max_depth, tol):
    """Sector search for saddle connections leaving one cone-point corner.

    Develops face corridors from the corner (placed at the origin), keeping
    the open wedge of directions that traverse the corridor. Every cone point
    whose developed image falls strictly inside the wedge within radius R is
    a saddle connection from the root corner.

    Returns (found, corridors, stats):
      found: list of (end_face, end_local_corner, hx, hy, depth, pc, ps)
             with (pc, ps) the rotation of the final face placement,
      corridors: list of (faces tuple, edges tuple) matching found,
      stats: dict(nodes=..., deepest=..., cap_hit=..., deepest_found=...).
    """
    f0 = int(root_face)
    c0 = int(root_corner)
    ox, oy = tri[f0][c0][0], tri[f0][c0][1]
    # placement of the root face: translation bringing the corner to 0
    p0 = (1.0, 0.0, -ox, -oy)

    def apply(pl, x, y):
        c, s, tx, ty = pl
        return (c * x - s * y + tx, s * x + c * y + ty)

    def compose(pl, iso):
        c1, s1, t1x, t1y = pl
        c2, s2, t2x, t2y = iso
        c = c1 * c2 - s1 * s2
        s = s1 * c2 + c1 * s2
        h = math.hypot(c, s)
        tx, ty = apply(pl, t2x, t2y)
        return (c / h, s / h, tx, ty)

    def dev_iso(f, e):
        # inverse of glue_fwd-style map: stored glue_dev maps partner chart into f's plane
        return tuple(glue_dev[f][e])

    nnext = (c0 + 1) % 3
    pprev = (c0 + 2) % 3
    wl = apply(p0, tri[f0][nnext][0], tri[f0][nnext][1])
    wr = apply(p0, tri[f0][pprev][0], tri[f0][pprev][1])
    nl = math.hypot(*wl)
    nr = math.hypot(*wr)
    wl = (wl[0] / nl, wl[1] / nl)
    wr = (wr[0] / nr, wr[1] / nr)

    found = []
    corridors = []
    nodes = 0
    deepest = 1
    deepest_found = 1
    cap_hit = False
    Rtol = R + tol

    first_edge = nnext  # edge opposite the root corner
    g = int(adj_face[f0][first_edge])
    stack = []
    if g >= 0:
        pl = compose(p0, dev_iso(f0, first_edge))
        stack.append((g, int(adj_edge[f0][first_edge]), pl, wl, wr, 2, ((f0, g), (first_edge,))))

    while stack:
        face, entry_e, pl, wl, wr, depth, path = stack.pop()
        nodes += 1
        if depth > deepest:
            deepest = depth
        v = tri[face]
        ui = (entry_e + 2) % 3
        Ux, Uy = apply(pl, v[ui][0], v[ui][1])
        dU = math.hypot(Ux, Uy)
        inside = (wl[0] * Uy - wl[1] * Ux) > tol and (Ux * wr[1] - Uy * wr[0]) > tol
        if inside and dU <= Rtol:
            found.append((face, ui, Ux, Uy, depth, pl[0], pl[1]))
            corridors.append(path)
            if depth > deepest_found:
                deepest_found = depth
        if depth >= max_depth:
            cap_hit = True
            continue
        ax, ay = apply(pl, v[entry_e][0], v[entry_e][1])
        bx, by = apply(pl, v[(entry_e + 1) % 3][0], v[(entry_e + 1) % 3][1])
        # crossing into the face through entry_e: children are the other two edges
        for child_e, (sx, sy, exx, eyy) in (
            ((entry_e + 1) % 3, (bx, by, Ux, Uy)),
            ((entry_e + 2) % 3, (Ux, Uy, ax, ay)),
        ):
            # CCW cone over the developed child edge
            if sx * eyy - sy * exx > 0.0:
                d1, d2 = (sx, sy), (exx, eyy)
            else:
                d1, d2 = (exx, eyy), (sx, sy)
            n1 = math.hypot(*d1)
            n2 = math.hypot(*d2)
            if n1 == 0.0 or n2 == 0.0:
                continue
            d1 = (d1[0] / n1, d1[1] / n1)
            d2 = (d2[0] / n2, d2[1] / n2)
            nwl = d1 if (wl[0] * d1[1] - wl[1] * d1[0]) > 0.0 else wl
            nwr = d2 if (d2[0] * wr[1] - d2[1] * wr[0]) > 0.0 else wr
            if (nwl[0] * nwr[1] - nwl[1] * nwr[0]) <= 1e-15:
                continue
            if _point_segment_dist(0.0, 0.0, sx, sy, exx, eyy) > Rtol:
                continue
            g = int(adj_face[face][child_e])
            if g < 0:
                continue
            pl2 = compose(pl, dev_iso(face, child_e))
            stack.append(
                (
                    g,
                    int(adj_edge[face][child_e]),
                    pl2,
                    nwl,
                    nwr,
                    depth + 1,
                    (path[0] + (g,), path[1] + (child_e,)),
                )
            )
    stats = {"nodes": nodes, "deepest": deepest, "cap_hit": cap_hit, "deepest_found": deepest_found}
    return found, corridors, stats


def _point_segment_dist(px, py, ax, ay, bx, by):
    abx, aby = bx - ax, by - ay
    l2 = abx * abx + aby * aby
    if l2 == 0.0:
        return math.hypot(px - ax, py - ay)
    t = ((px - ax) * abx + (py - ay) * aby) / l2
    t = min(1.0, max(0.0, t))
    return math.hypot(px - (ax + t * abx), py - (ay + t * aby))
