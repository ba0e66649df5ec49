# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled kernels: straight-ray tracing, pairwise segment events, and the
saddle-connection sector search. Mirrors flatsphere._kernels._ref exactly."""

import math

import numpy as np

cimport numpy as cnp
from libc.math cimport hypot, INFINITY

cnp.import_array()

IMPLEMENTATION = "cython"

STATUS_BUDGET = 0
STATUS_CONE_POINT = 1
STATUS_CAP = 2
STATUS_BOUNDARY = 3


def trace(tri, adj_face, adj_edge, glue_fwd, f0, px, py, dx, dy, budget, tol, max_threads):
    cdef double[:, :, ::1] v = np.ascontiguousarray(tri, dtype=np.float64)
    cdef int[:, ::1] af = np.ascontiguousarray(adj_face, dtype=np.int32)
    cdef int[:, ::1] ae = np.ascontiguousarray(adj_edge, dtype=np.int32)
    cdef double[:, :, ::1] gl = np.ascontiguousarray(glue_fwd, dtype=np.float64)

    cdef double cpx = px, cpy = py, cdx = dx, cdy = dy
    cdef double n = hypot(cdx, cdy)
    cdx /= n
    cdy /= n
    cdef int f = int(f0)
    cdef double remaining = budget
    cdef double entry_code = -1.0
    cdef double ctol = tol
    cdef int cap = int(max_threads)

    rows = []
    cdef int status = STATUS_BUDGET
    cdef int end_face = f
    cdef double end_a = cpx, end_b = cpy
    cdef int e, best_e, hit, vi, which, g
    cdef double ax, ay, bx, by, ex_, ey_, denom, s, u, elen, best_s, qx, qy, wx, wy
    cdef double c_, s_, tx, ty

    while True:
        if len(rows) >= cap:
            status = STATUS_CAP
            end_face = f
            end_a = cpx
            end_b = cpy
            break
        best_s = INFINITY
        best_e = -1
        for e in range(3):
            ax = v[f, e, 0]
            ay = v[f, e, 1]
            bx = v[f, (e + 1) % 3, 0]
            by = v[f, (e + 1) % 3, 1]
            ex_ = bx - ax
            ey_ = by - ay
            denom = cdx * ey_ - cdy * ex_
            if denom == 0.0:
                continue
            s = ((ax - cpx) * ey_ - (ay - cpy) * ex_) / denom
            if s <= ctol or s >= best_s:
                continue
            u = (cdx * (cpy - ay) - cdy * (cpx - ax)) / denom
            elen = hypot(ex_, ey_)
            if -ctol / elen <= u <= 1.0 + ctol / elen:
                best_s = s
                best_e = e
        if best_e < 0:
            status = STATUS_CAP
            end_face = f
            end_a = cpx
            end_b = cpy
            break
        if best_s >= remaining:
            qx = cpx + remaining * cdx
            qy = cpy + remaining * cdy
            rows.append([f, cpx, cpy, qx, qy, entry_code, -1.0])
            status = STATUS_BUDGET
            end_face = f
            end_a = qx
            end_b = qy
            break
        qx = cpx + best_s * cdx
        qy = cpy + best_s * cdy
        hit = -1
        for which in range(2):
            vi = best_e if which == 0 else (best_e + 1) % 3
            wx = v[f, vi, 0]
            wy = v[f, vi, 1]
            if hypot(qx - wx, qy - wy) <= ctol:
                hit = vi
                break
        if hit >= 0:
            rows.append([f, cpx, cpy, v[f, hit, 0], v[f, hit, 1], entry_code, 3.0 + hit])
            status = STATUS_CONE_POINT
            end_face = f
            end_a = <double> hit
            end_b = 0.0
            break
        rows.append([f, cpx, cpy, qx, qy, entry_code, <double> best_e])
        g = af[f, best_e]
        if g < 0:
            status = STATUS_BOUNDARY
            end_face = f
            end_a = qx
            end_b = qy
            break
        remaining -= best_s
        c_ = gl[f, best_e, 0]
        s_ = gl[f, best_e, 1]
        tx = gl[f, best_e, 2]
        ty = gl[f, best_e, 3]
        cpx, cpy = c_ * qx - s_ * qy + tx, s_ * qx + c_ * qy + ty
        cdx, cdy = c_ * cdx - s_ * cdy, s_ * cdx + c_ * cdy
        entry_code = <double> ae[f, best_e]
        f = g
    threads = np.array(rows, dtype=np.float64) if rows else np.zeros((0, 7))
    return threads, status, end_face, end_a, end_b


def segment_events(faces, p, q, tol):
    cdef long[::1] fc = np.ascontiguousarray(faces, dtype=np.int64)
    cdef double[:, ::1] pp = np.ascontiguousarray(p, dtype=np.float64)
    cdef double[:, ::1] qq = np.ascontiguousarray(q, dtype=np.float64)
    cdef double ctol = tol
    cdef int M = fc.shape[0]
    cdef int i, j
    cdef double a0x, a0y, dax, day, b0x, b0y, dbx, dby, la, lb, denom, off
    cdef double u0, u1, lo, hi, s, t, x, y
    events = []
    overlaps = []
    for i in range(M):
        for j in range(i + 1, M):
            if fc[i] != fc[j]:
                continue
            a0x = pp[i, 0]
            a0y = pp[i, 1]
            dax = qq[i, 0] - a0x
            day = qq[i, 1] - a0y
            b0x = pp[j, 0]
            b0y = pp[j, 1]
            dbx = qq[j, 0] - b0x
            dby = qq[j, 1] - b0y
            la = hypot(dax, day)
            lb = hypot(dbx, dby)
            if la == 0.0 or lb == 0.0:
                continue
            denom = dax * dby - day * dbx
            if abs(denom) <= ctol * (la if la > lb else lb):
                off = (dax * (b0y - a0y) - day * (b0x - a0x)) / la
                if abs(off) > ctol:
                    continue
                u0 = ((b0x - a0x) * dax + (b0y - a0y) * day) / (la * la)
                u1 = ((b0x + dbx - a0x) * dax + (b0y + dby - a0y) * day) / (la * la)
                lo = u0 if u0 < u1 else u1
                hi = u1 if u0 < u1 else u0
                if lo < 0.0:
                    lo = 0.0
                if hi > 1.0:
                    hi = 1.0
                if (hi - lo) * la > ctol:
                    overlaps.append([i, j])
                elif (hi - lo) * la >= -ctol:
                    s = 0.5 * (lo + hi)
                    x = a0x + s * dax
                    y = a0y + s * day
                    t = ((x - b0x) * dbx + (y - b0y) * dby) / (lb * lb)
                    if -ctol / lb <= t <= 1.0 + ctol / lb:
                        t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
                        events.append([i, j, x, y,
                                       0.0 if s < 0.0 else (1.0 if s > 1.0 else s), t])
                continue
            s = ((b0x - a0x) * dby - (b0y - a0y) * dbx) / denom
            t = ((b0x - a0x) * day - (b0y - a0y) * dax) / denom
            if -ctol / la <= s <= 1.0 + ctol / la and -ctol / lb <= t <= 1.0 + ctol / lb:
                s = 0.0 if s < 0.0 else (1.0 if s > 1.0 else s)
                t = 0.0 if t < 0.0 else (1.0 if t > 1.0 else t)
                events.append([i, j, a0x + s * dax, a0y + s * day, s, t])
    ev = np.array(events, dtype=np.float64) if events else np.zeros((0, 6))
    ov = np.array(overlaps, dtype=np.int64) if overlaps else np.zeros((0, 2), dtype=np.int64)
    return ev, ov


cdef inline double _pt_seg_dist(double px, double py, double ax, double ay,
                                double bx, double by) nogil:
    cdef double abx = bx - ax
    cdef double aby = by - ay
    cdef double l2 = abx * abx + aby * aby
    cdef double t
    if l2 == 0.0:
        return hypot(px - ax, py - ay)
    t = ((px - ax) * abx + (py - ay) * aby) / l2
    if t < 0.0:
        t = 0.0
    elif t > 1.0:
        t = 1.0
    return hypot(px - (ax + t * abx), py - (ay + t * aby))


def saddle_search(tri, adj_face, adj_edge, glue_dev, root_face, root_corner, R, max_depth, tol):
    cdef double[:, :, ::1] v = np.ascontiguousarray(tri, dtype=np.float64)
    cdef int[:, ::1] af = np.ascontiguousarray(adj_face, dtype=np.int32)
    cdef int[:, ::1] ae = np.ascontiguousarray(adj_edge, dtype=np.int32)
    cdef double[:, :, ::1] gd = np.ascontiguousarray(glue_dev, dtype=np.float64)
    cdef double ctol = tol
    cdef double Rtol = R + tol
    cdef int cap = int(max_depth)

    cdef int f0 = int(root_face)
    cdef int c0 = int(root_corner)
    cdef double ox = v[f0, c0, 0]
    cdef double oy = v[f0, c0, 1]

    # stack arrays (grown on demand)
    cdef int alloc = 1024
    cdef cnp.ndarray[cnp.float64_t, ndim=2] st = np.empty((alloc, 8), dtype=np.float64)
    cdef cnp.ndarray[cnp.int32_t, ndim=2] sti = np.empty((alloc, 4), dtype=np.int32)
    # parent-pointer tree for corridor reconstruction
    nodes_face = []
    nodes_edge = []
    nodes_parent = []

    cdef double[:, ::1] stv = st
    cdef int[:, ::1] stiv = sti

    cdef int top = 0
    cdef int nnext = (c0 + 1) % 3
    cdef int pprev = (c0 + 2) % 3
    cdef double wlx = v[f0, nnext, 0] - ox
    cdef double wly = v[f0, nnext, 1] - oy
    cdef double wrx = v[f0, pprev, 0] - ox
    cdef double wry = v[f0, pprev, 1] - oy
    cdef double nl = hypot(wlx, wly)
    cdef double nr = hypot(wrx, wry)
    wlx /= nl
    wly /= nl
    wrx /= nr
    wry /= nr

    found = []
    corridors = []
    cdef long nodes = 0
    cdef int deepest = 1
    cdef int deepest_found = 1
    cdef bint cap_hit = False

    cdef int first_edge = nnext
    cdef int g = af[f0, first_edge]
    cdef double plc, pls, pltx, plty, c2, s2, t2x, t2y, h
    cdef int face, entry_e, depth, node_id, ui, child_e, k
    cdef double Ux, Uy, dU, axx, ayy, bxx, byy, sx, sy, exx, eyy
    cdef double d1x, d1y, d2x, d2y, n1, n2, nwlx, nwly, nwrx, nwry
    cdef double cwlx, cwly, cwrx, cwry

    if g >= 0:
        # placement of the root: translation only
        c2 = gd[f0, first_edge, 0]
        s2 = gd[f0, first_edge, 1]
        t2x = gd[f0, first_edge, 2]
        t2y = gd[f0, first_edge, 3]
        stv[0, 0] = c2
        stv[0, 1] = s2
        stv[0, 2] = t2x - ox
        stv[0, 3] = t2y - oy
        stv[0, 4] = wlx
        stv[0, 5] = wly
        stv[0, 6] = wrx
        stv[0, 7] = wry
        stiv[0, 0] = g
        stiv[0, 1] = ae[f0, first_edge]
        stiv[0, 2] = 2  # depth
        stiv[0, 3] = 0  # node id
        nodes_face.append(g)
        nodes_edge.append(first_edge)
        nodes_parent.append(-1)
        top = 1

    while top > 0:
        top -= 1
        plc = stv[top, 0]
        pls = stv[top, 1]
        pltx = stv[top, 2]
        plty = stv[top, 3]
        wlx = stv[top, 4]
        wly = stv[top, 5]
        wrx = stv[top, 6]
        wry = stv[top, 7]
        face = stiv[top, 0]
        entry_e = stiv[top, 1]
        depth = stiv[top, 2]
        node_id = stiv[top, 3]
        nodes += 1
        if depth > deepest:
            deepest = depth
        ui = (entry_e + 2) % 3
        Ux = plc * v[face, ui, 0] - pls * v[face, ui, 1] + pltx
        Uy = pls * v[face, ui, 0] + plc * v[face, ui, 1] + plty
        dU = hypot(Ux, Uy)
        if (wlx * Uy - wly * Ux) > ctol and (Ux * wry - Uy * wrx) > ctol:
            if dU <= Rtol:
                found.append((face, ui, Ux, Uy, depth, plc, pls))
                # reconstruct corridor
                path_f = [f0]
                path_e = []
                chain = []
                k = node_id
                while k >= 0:
                    chain.append(k)
                    k = nodes_parent[k]
                for k in reversed(chain):
                    path_f.append(nodes_face[k])
                    path_e.append(nodes_edge[k])
                corridors.append((tuple(path_f), tuple(path_e)))
                if depth > deepest_found:
                    deepest_found = depth
        if depth >= cap:
            cap_hit = True
            continue
        axx = plc * v[face, entry_e, 0] - pls * v[face, entry_e, 1] + pltx
        ayy = pls * v[face, entry_e, 0] + plc * v[face, entry_e, 1] + plty
        bxx = plc * v[face, (entry_e + 1) % 3, 0] - pls * v[face, (entry_e + 1) % 3, 1] + pltx
        byy = pls * v[face, (entry_e + 1) % 3, 0] + plc * v[face, (entry_e + 1) % 3, 1] + plty
        for k in range(2):
            if k == 0:
                child_e = (entry_e + 1) % 3
                sx = bxx
                sy = byy
                exx = Ux
                eyy = Uy
            else:
                child_e = (entry_e + 2) % 3
                sx = Ux
                sy = Uy
                exx = axx
                eyy = ayy
            if sx * eyy - sy * exx > 0.0:
                d1x = sx
                d1y = sy
                d2x = exx
                d2y = eyy
            else:
                d1x = exx
                d1y = eyy
                d2x = sx
                d2y = sy
            n1 = hypot(d1x, d1y)
            n2 = hypot(d2x, d2y)
            if n1 == 0.0 or n2 == 0.0:
                continue
            d1x /= n1
            d1y /= n1
            d2x /= n2
            d2y /= n2
            if (wlx * d1y - wly * d1x) > 0.0:
                cwlx = d1x
                cwly = d1y
            else:
                cwlx = wlx
                cwly = wly
            if (d2x * wry - d2y * wrx) > 0.0:
                cwrx = d2x
                cwry = d2y
            else:
                cwrx = wrx
                cwry = wry
            if (cwlx * cwry - cwly * cwrx) <= 1e-15:
                continue
            if _pt_seg_dist(0.0, 0.0, sx, sy, exx, eyy) > Rtol:
                continue
            g = af[face, child_e]
            if g < 0:
                continue
            if top >= alloc:
                alloc *= 2
                st = np.resize(st, (alloc, 8))
                sti = np.resize(sti, (alloc, 4))
                stv = st
                stiv = sti
            c2 = gd[face, child_e, 0]
            s2 = gd[face, child_e, 1]
            t2x = gd[face, child_e, 2]
            t2y = gd[face, child_e, 3]
            # compose: new = pl o iso
            stv[top, 0] = plc * c2 - pls * s2
            stv[top, 1] = pls * c2 + plc * s2
            h = hypot(stv[top, 0], stv[top, 1])
            stv[top, 0] /= h
            stv[top, 1] /= h
            stv[top, 2] = plc * t2x - pls * t2y + pltx
            stv[top, 3] = pls * t2x + plc * t2y + plty
            stv[top, 4] = cwlx
            stv[top, 5] = cwly
            stv[top, 6] = cwrx
            stv[top, 7] = cwry
            stiv[top, 0] = g
            stiv[top, 1] = ae[face, child_e]
            stiv[top, 2] = depth + 1
            stiv[top, 3] = len(nodes_face)
            nodes_face.append(g)
            nodes_edge.append(child_e)
            nodes_parent.append(node_id)
            top += 1

    stats = {"nodes": int(nodes), "deepest": deepest, "cap_hit": bool(cap_hit),
             "deepest_found": deepest_found}
    return found, corridors, stats
