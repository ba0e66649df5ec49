"""Explicit constants and verification of the length-vs-self-intersection
inequalities.

Uniform constants (n, delta): lower c1, c2; upper a1, a2. Per-surface
constants b1, b2 from the relative systole and the Delaunay circumradius.
Thin-part scales sigma_d and the thread-window integer m0.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

from .delaunay import Triangulation, delaunay_triangulation
from .errors import DeltaOutOfRange
from .surface import Surface, curvature_gap

SLACK = 1e-9


def m0_constant(g: int, n: int, curvatures) -> int:
    """m0 = 6*(4g + 2n - 4) * ceil(1 / (2 min(1 - k_i))).

    The ceiling gets a small backoff so float drift in the curvatures cannot
    bump an exactly integral ratio to the next integer."""
    m = min(1.0 - k for k in curvatures)
    if m <= 0:
        raise DeltaOutOfRange("a curvature >= 1 admits no thread-window constant")
    v = 1.0 / (2.0 * m)
    return 6 * (4 * g + 2 * n - 4) * math.ceil(v - 1e-9 * max(1.0, v))


def sigma_constants(curvatures) -> list[float]:
    """sigma_d = delta^2/(4n^2) * (delta^2/(6n))^(n-2-d) for d = 1..n-3."""
    n = len(curvatures)
    if n < 4:
        return []
    delta = curvature_gap(curvatures)
    base = delta * delta / (4.0 * n * n)
    ratio = delta * delta / (6.0 * n)
    return [base * ratio ** (n - 2 - d) for d in range(1, n - 2)]


def _check_delta(delta: float) -> None:
    if not (0.0 < delta <= 1.0 / 3.0 + SLACK):
        raise DeltaOutOfRange(
            f"curvature gap {delta!r} outside (0, 1/3] (flat cone spheres always "
            "satisfy delta <= 1/3)"
        )


def constants_uniform(n: int, delta: float) -> tuple[float, float]:
    """(c1, c2): the uniform lower-bound constants."""
    _check_delta(delta)
    c1 = 9.0 * math.sqrt(2.0) * delta / (8.0 * n * n) * (delta * delta / (6.0 * n)) ** (2 * n - 4)
    c2 = (81.0 / 4.0) * (1.0 / (54.0 * n)) ** (2 * n - 4)
    return c1, c2


def constants_upper(n: int, delta: float) -> tuple[float, float]:
    """(a1, a2): the uniform upper-bound constants."""
    _check_delta(delta)
    a1 = 20.0 * n * (n - 1) / math.sqrt(math.pi) * (
        2.0 / delta + 1.0 / (math.sqrt(2.0) * delta ** 1.5)
    )
    a2 = 40.0 * n / (delta * math.sqrt(math.pi)) + 20.0 * n / (
        delta ** 1.5 * math.sqrt(2.0 * math.pi)
    )
    return a1, a2


def delaunay_edge_bound(n: int, delta: float) -> float:
    """c(n, delta) = sqrt(4/pi + 1/(2 pi delta)): Delaunay circumdisks of a
    unit-area surface have radius < c/2 and edges length < c."""
    _check_delta(delta)
    return math.sqrt(4.0 / math.pi + 1.0 / (2.0 * math.pi * delta))


def constants_individual(surface: Surface, triangulation: Triangulation | None = None,
                         relsys: float | None = None) -> tuple[float, float]:
    """(b1, b2) for the surface, computed on its unit-area normalization.

    R(X) is the circumradius bound of the single Delaunay triangulation
    returned by the flip algorithm (see the module notes on the maximal-R
    convention)."""
    norm = surface.normalized()
    scale = 1.0 / math.sqrt(surface.area)
    if triangulation is None:
        T = delaunay_triangulation(norm)
        RX = T.max_circumradius
    else:
        RX = triangulation.max_circumradius * scale
    if relsys is None:
        from .enumerator import relative_systole

        rs = relative_systole(norm)
    else:
        rs = relsys * scale
    n = norm.num_cone_points
    g = 0
    mink = min(1.0 - k for k in norm.curvatures.values())
    b1 = math.sqrt(2.0) * (rs * rs / RX) * mink / (12.0 * (4 * g + 2 * n - 4))
    b2 = rs * rs / (2.0 * RX)
    return b1, b2


@dataclass
class ConstantSet:
    n: int
    delta: float
    b1: float | None
    b2: float | None
    c1: float
    c2: float
    a1: float
    a2: float
    m0: int
    sigma: list[float]

    def to_dict(self) -> dict:
        return {
            "n": self.n,
            "delta": self.delta,
            "b1": self.b1,
            "b2": self.b2,
            "c1": self.c1,
            "c2": self.c2,
            "a1": self.a1,
            "a2": self.a2,
            "m0": self.m0,
            "sigma": list(self.sigma),
        }


def constant_set(surface: Surface, with_individual: bool = True) -> ConstantSet:
    ks = list(surface.curvatures.values())
    n = len(ks)
    delta = curvature_gap(ks)
    c1, c2 = constants_uniform(n, min(delta, 1.0 / 3.0))
    a1, a2 = constants_upper(n, min(delta, 1.0 / 3.0))
    b1 = b2 = None
    if with_individual:
        b1, b2 = constants_individual(surface)
    return ConstantSet(
        n=n,
        delta=delta,
        b1=b1,
        b2=b2,
        c1=c1,
        c2=c2,
        a1=a1,
        a2=a2,
        m0=m0_constant(0, n, ks),
        sigma=sigma_constants(ks),
    )


# ---------------------------------------------------------------------------
# verification


@dataclass
class BoundRow:
    kind: str  # "sc" | "cg" | "trajectory"
    length: float
    iota: int
    checks: list[tuple[str, bool, float]]  # (name, passed, slack)

    @property
    def passed(self) -> bool:
        return all(ok for (_, ok, _) in self.checks)


@dataclass
class BoundReport:
    rows: list[BoundRow]
    constants: ConstantSet
    informative: list[tuple[int, str, bool, float]] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return all(r.passed for r in self.rows)

    def to_csv_lines(self) -> list[str]:
        lines = ["kind,length,iota,passed,failed_checks"]
        for r in self.rows:
            failed = ";".join(name for (name, ok, _) in r.checks if not ok)
            lines.append(f"{r.kind},{r.length!r},{r.iota},{int(r.passed)},{failed}")
        return lines


def _row(kind: str, length: float, iota: int, cs: ConstantSet) -> BoundRow:
    sq = math.sqrt(iota)
    checks = [
        ("c1*sqrt(iota)-c2<=len[Thm1.3]", cs.c1 * sq - cs.c2 <= length + SLACK, SLACK),
        ("len<=a1*sqrt(iota)+a2[FT]", length <= cs.a1 * sq + cs.a2 + SLACK, SLACK),
    ]
    if kind in ("sc", "cg"):
        checks.append(
            ("b1*sqrt(iota)<=len[Thm1.2]", cs.b1 * sq <= length + SLACK, SLACK)
        )
    else:
        checks.append(
            ("b1*sqrt(iota)-b2<=len[Thm1.2]", cs.b1 * sq - cs.b2 <= length + SLACK, SLACK)
        )
    if kind == "cg":
        checks.append(("c1*sqrt(iota)<=len[Thm1.3]", cs.c1 * sq <= length + SLACK, SLACK))
        checks.append(("len<=a1*sqrt(iota)[FT]", length <= cs.a1 * sq + SLACK, SLACK))
        checks.append(
            (
                "len>=sqrt(pi*delta)[closed-lower]",
                length >= math.sqrt(math.pi * cs.delta) - SLACK,
                SLACK,
            )
        )
    return BoundRow(kind, length, iota, checks)


def verify_bounds(surface: Surface, R: float, triangulation=None) -> BoundReport:
    """Enumerate saddle connections and cylinders up to R on the unit-area
    normalization and check every inequality row by row."""
    from . import enumerator as en

    norm = surface.normalized()
    T = delaunay_triangulation(norm)
    cs = constant_set(norm)
    if cs.delta <= 0:
        raise DeltaOutOfRange("verify_bounds needs a positive curvature gap")
    scs = en.enumerate_saddle_connections(norm, R, triangulation=T, with_iota=True)
    cyls = en.enumerate_cylinders(norm, R, triangulation=T, with_iota=True, connections=scs)
    rows = [_row("sc", sc.length, sc.iota, cs) for sc in scs]
    rows += [_row("cg", c.circumference, c.iota, cs) for c in cyls]
    return BoundReport(rows, cs)


def trajectory_report(surface: Surface, trajectories, iotas=None) -> BoundReport:
    """Inequality rows for arbitrary traced trajectories (lengths normalized
    by sqrt(area)). The zero-constant bound b1*sqrt(iota) <= len is reported
    as informative only: Theorem 1.2 grants it for saddle connections and
    closed geodesics, and the b2-witness family shows it must fail for
    general trajectories."""
    from . import tracer as tr

    cs = constant_set(surface)
    scale = 1.0 / math.sqrt(surface.area)
    rows = []
    informative = []
    for idx, traj in enumerate(trajectories):
        iota = iotas[idx] if iotas is not None else tr.self_intersection_number(traj)
        length = traj.total_length * scale
        rows.append(_row("trajectory", length, iota, cs))
        informative.append(
            (
                idx,
                "b1*sqrt(iota)<=len[zero-constant]",
                cs.b1 * math.sqrt(iota) <= length + SLACK,
                SLACK,
            )
        )
    return BoundReport(rows, cs, informative=informative)
