"""Planar Euclidean primitives: orientation-preserving isometries and segment tests.

Everything works on plain (x, y) float pairs; the hot per-thread loops live in
flatsphere._kernels and only mirror what is here.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

Vec = tuple[float, float]


def sub(a: Vec, b: Vec) -> Vec:
    return (a[0] - b[0], a[1] - b[1])


def add(a: Vec, b: Vec) -> Vec:
    return (a[0] + b[0], a[1] + b[1])


def dot(a: Vec, b: Vec) -> float:
    return a[0] * b[0] + a[1] * b[1]


def cross(a: Vec, b: Vec) -> float:
    return a[0] * b[1] - a[1] * b[0]


def norm(a: Vec) -> float:
    return math.hypot(a[0], a[1])


def dist(a: Vec, b: Vec) -> float:
    return math.hypot(a[0] - b[0], a[1] - b[1])


def normalize(a: Vec) -> Vec:
    n = norm(a)
    if n == 0.0:
        raise ValueError("cannot normalize zero vector")
    return (a[0] / n, a[1] / n)


def rotate(a: Vec, angle: float) -> Vec:
    c, s = math.cos(angle), math.sin(angle)
    return (c * a[0] - s * a[1], s * a[0] + c * a[1])


def angle_of(a: Vec) -> float:
    return math.atan2(a[1], a[0])


def angle_between(a: Vec, b: Vec) -> float:
    """Unsigned angle in [0, pi] between two nonzero vectors."""
    v = dot(a, b) / (norm(a) * norm(b))
    return math.acos(min(1.0, max(-1.0, v)))


def ccw_angle(a: Vec, b: Vec) -> float:
    """Angle in [0, 2*pi) swept rotating a counterclockwise onto b."""
    ang = angle_of(b) - angle_of(a)
    return ang % (2.0 * math.pi)


@dataclass(frozen=True)
class Isometry:
    """Orientation-preserving planar isometry x -> R x + t.

    R is the rotation (cos, sin); no reflections ever appear, which keeps
    holonomies in the rotation group.
    """

    c: float
    s: float
    tx: float
    ty: float

    @staticmethod
    def identity() -> "Isometry":
        return Isometry(1.0, 0.0, 0.0, 0.0)

    @staticmethod
    def rotation(angle: float, center: Vec = (0.0, 0.0)) -> "Isometry":
        c, s = math.cos(angle), math.sin(angle)
        cx, cy = center
        return Isometry(c, s, cx - c * cx + s * cy, cy - s * cx - c * cy)

    @staticmethod
    def from_segments(a0: Vec, a1: Vec, b0: Vec, b1: Vec) -> "Isometry":
        """The isometry sending segment (a0, a1) onto (b0, b1).

        Segment lengths must agree (up to the caller's tolerance); the map is
        the unique rotation+translation with a0 -> b0 and a1 -> b1.
        """
        da = sub(a1, a0)
        db = sub(b1, b0)
        la = norm(da)
        c = (da[0] * db[0] + da[1] * db[1]) / (la * la)
        s = (da[0] * db[1] - da[1] * db[0]) / (la * la)
        # renormalize to kill length mismatch drift
        h = math.hypot(c, s)
        c, s = c / h, s / h
        tx = b0[0] - (c * a0[0] - s * a0[1])
        ty = b0[1] - (s * a0[0] + c * a0[1])
        return Isometry(c, s, tx, ty)

    def __call__(self, p: Vec) -> Vec:
        return (self.c * p[0] - self.s * p[1] + self.tx, self.s * p[0] + self.c * p[1] + self.ty)

    def apply_vector(self, v: Vec) -> Vec:
        return (self.c * v[0] - self.s * v[1], self.s * v[0] + self.c * v[1])

    def compose(self, other: "Isometry") -> "Isometry":
        """self o other (apply other first)."""
        c = self.c * other.c - self.s * other.s
        s = self.s * other.c + self.c * other.s
        tx, ty = self(
            (other.tx, other.ty)
        )
        h = math.hypot(c, s)
        return Isometry(c / h, s / h, tx, ty)

    def inverse(self) -> "Isometry":
        c, s = self.c, -self.s
        tx = -(c * self.tx - s * self.ty)
        ty = -(s * self.tx + c * self.ty)
        return Isometry(c, s, tx, ty)

    @property
    def angle(self) -> float:
        return math.atan2(self.s, self.c)


def triangle_area(a: Vec, b: Vec, c: Vec) -> float:
    """Signed area; positive for counterclockwise triangles."""
    return 0.5 * cross(sub(b, a), sub(c, a))


def circumradius(a: Vec, b: Vec, c: Vec) -> float:
    area = abs(triangle_area(a, b, c))
    return dist(a, b) * dist(b, c) * dist(c, a) / (4.0 * area)


def point_in_triangle(p: Vec, a: Vec, b: Vec, c: Vec, tol: float = 0.0) -> bool:
    """Closed-triangle membership for a CCW triangle, with slack tol."""
    return (
        cross(sub(b, a), sub(p, a)) >= -tol
        and cross(sub(c, b), sub(p, b)) >= -tol
        and cross(sub(a, c), sub(p, c)) >= -tol
    )


def point_segment_distance(p: Vec, a: Vec, b: Vec) -> float:
    ab = sub(b, a)
    l2 = dot(ab, ab)
    if l2 == 0.0:
        return dist(p, a)
    t = dot(sub(p, a), ab) / l2
    t = min(1.0, max(0.0, t))
    return dist(p, (a[0] + t * ab[0], a[1] + t * ab[1]))


def segment_segment_distance(a0: Vec, a1: Vec, b0: Vec, b1: Vec) -> float:
    if segments_properly_intersect(a0, a1, b0, b1):
        return 0.0
    return min(
        point_segment_distance(a0, b0, b1),
        point_segment_distance(a1, b0, b1),
        point_segment_distance(b0, a0, a1),
        point_segment_distance(b1, a0, a1),
    )


def segments_properly_intersect(a0: Vec, a1: Vec, b0: Vec, b1: Vec) -> bool:
    d1 = cross(sub(a1, a0), sub(b0, a0))
    d2 = cross(sub(a1, a0), sub(b1, a0))
    d3 = cross(sub(b1, b0), sub(a0, b0))
    d4 = cross(sub(b1, b0), sub(a1, b0))
    return ((d1 > 0) != (d2 > 0)) and ((d3 > 0) != (d4 > 0))


def segment_intersection(a0: Vec, a1: Vec, b0: Vec, b1: Vec, tol: float):
    """Intersection of two closed segments.

    Returns one of
      ("none",)
      ("point", p, s, t)   with p the point, s and t arclength fractions on a and b
      ("overlap",)         collinear overlap of positive length
    Endpoint touches within tol count as intersections at the clamped endpoint.
    """
    da = sub(a1, a0)
    db = sub(b1, b0)
    denom = cross(da, db)
    la, lb = norm(da), norm(db)
    if la == 0.0 or lb == 0.0:
        return ("none",)
    if abs(denom) <= tol * la * lb / max(la, lb):
        # parallel: overlap only if collinear and ranges meet in more than a point
        off = cross(da, sub(b0, a0)) / la
        if abs(off) > tol:
            return ("none",)
        u0 = dot(sub(b0, a0), da) / (la * la)
        u1 = dot(sub(b1, a0), da) / (la * la)
        lo, hi = min(u0, u1), max(u0, u1)
        lo = max(lo, 0.0)
        hi = min(hi, 1.0)
        if hi * la - lo * la > tol:
            return ("overlap",)
        if hi * la - lo * la >= -tol:
            s = 0.5 * (lo + hi)
            p = (a0[0] + s * da[0], a0[1] + s * da[1])
            t = dot(sub(p, b0), db) / (lb * lb)
            return ("point", p, min(1.0, max(0.0, s)), min(1.0, max(0.0, t)))
        return ("none",)
    s = cross(sub(b0, a0), db) / denom
    t = cross(sub(b0, a0), da) / denom
    if -tol / la <= s <= 1.0 + tol / la and -tol / lb <= t <= 1.0 + tol / lb:
        s = min(1.0, max(0.0, s))
        t = min(1.0, max(0.0, t))
        p = (a0[0] + s * da[0], a0[1] + s * da[1])
        return ("point", p, s, t)
    return ("none",)


def polygon_area(points: list[Vec]) -> float:
    """Signed shoelace area of a closed polygon (vertices in order)."""
    total = 0.0
    n = len(points)
    for i in range(n):
        total += cross(points[i], points[(i + 1) % n])
    return 0.5 * total


def is_simple_polygon(points: list[Vec], tol: float = 1e-12) -> bool:
    n = len(points)
    if n < 3:
        return False
    for i in range(n):
        a0, a1 = points[i], points[(i + 1) % n]
        if dist(a0, a1) <= tol:
            return False
        for j in range(i + 1, n):
            if j == i or (j + 1) % n == i or (i + 1) % n == j:
                continue
            b0, b1 = points[j], points[(j + 1) % n]
            if segments_properly_intersect(a0, a1, b0, b1):
                return False
    return True
