import math

import mpmath
import pytest

from flatsphere.bounds import (
    constant_set,
    constants_individual,
    constants_uniform,
    constants_upper,
    delaunay_edge_bound,
    m0_constant,
    sigma_constants,
    trajectory_report,
    verify_bounds,
)
from flatsphere.builders import doubled_equilateral
from flatsphere.errors import DeltaOutOfRange

mpmath.mp.dps = 40


def _mp_constants(n, delta):
    n = mpmath.mpf(n)
    d = mpmath.mpf(delta)
    c1 = 9 * mpmath.sqrt(2) * d / (8 * n**2) * (d**2 / (6 * n)) ** (2 * n - 4)
    c2 = mpmath.mpf(81) / 4 * (1 / (54 * n)) ** (2 * n - 4)
    a1 = 20 * n * (n - 1) / mpmath.sqrt(mpmath.pi) * (2 / d + 1 / (mpmath.sqrt(2) * d ** mpmath.mpf(1.5)))
    a2 = 40 * n / (d * mpmath.sqrt(mpmath.pi)) + 20 * n / (
        d ** mpmath.mpf(1.5) * mpmath.sqrt(2 * mpmath.pi)
    )
    return c1, c2, a1, a2


def _sig12(a, b):
    return abs(a - b) <= abs(b) * 1e-12


def test_uniform_constants_high_precision():
    for (n, delta) in ((3, 1 / 3), (4, 0.2), (5, 1 / 3), (6, 0.05)):
        c1, c2 = constants_uniform(n, delta)
        a1, a2 = constants_upper(n, delta)
        mc1, mc2, ma1, ma2 = _mp_constants(n, delta)
        assert _sig12(c1, float(mc1))
        assert _sig12(c2, float(mc2))
        assert _sig12(a1, float(ma1))
        assert _sig12(a2, float(ma2))


def test_known_values_n3():
    c1, c2 = constants_uniform(3, 1 / 3)
    a1, a2 = constants_upper(3, 1 / 3)
    assert c1 == pytest.approx(2.2452966429995e-06, rel=1e-10)
    assert c2 == pytest.approx(7.716049382716e-04, rel=1e-10)
    assert a1 == pytest.approx(654.9722877737, rel=1e-10)


def test_sigma_constants():
    # n = 5, delta = 1/3: sigma_d = delta^2/(4n^2) * (delta^2/(6n))^(n-2-d).
    # Positive 5-vectors cannot reach gap 1/3; two marked points realize it.
    ks = [2 / 3, 2 / 3, 2 / 3, 0.0, 0.0]
    from flatsphere.surface import curvature_gap

    assert curvature_gap(ks) == pytest.approx(1 / 3, abs=1e-12)
    sig = sigma_constants(ks)
    assert len(sig) == 2
    base = (1 / 9) / 100
    ratio = (1 / 9) / 30
    assert _sig12(sig[0], base * ratio**2)
    assert _sig12(sig[1], base * ratio)
    # monotone: sigma_{d+1} = (6n/delta^2) sigma_d > sigma_d
    assert sig[0] < sig[1]
    assert sig[1] / sig[0] == pytest.approx(30 / (1 / 9), rel=1e-12)
    assert sigma_constants([2 / 3] * 3) == []


def test_m0_values():
    assert m0_constant(0, 3, [2 / 3, 2 / 3, 2 / 3]) == 24
    # spec formula check: 6*(4g+2n-4)*ceil(1/(2 min(1-k)))
    assert m0_constant(0, 4, [0.9, 0.5, 0.3, 0.3]) == 6 * 4 * 5
    assert m0_constant(1, 3, [0.5] * 3) == 6 * (4 + 2) * 1


def test_delta_out_of_range():
    with pytest.raises(DeltaOutOfRange):
        constants_uniform(3, 0.4)
    with pytest.raises(DeltaOutOfRange):
        constants_upper(3, 0.0)
    with pytest.raises(DeltaOutOfRange):
        delaunay_edge_bound(3, -0.1)


def test_monotonicity_in_delta():
    deltas = [0.02 * k for k in range(1, 17)]
    a1s = [constants_upper(4, d)[0] for d in deltas]
    c1s = [constants_uniform(4, d)[0] for d in deltas]
    assert all(a1s[i] > a1s[i + 1] for i in range(len(a1s) - 1))
    assert all(c1s[i] < c1s[i + 1] for i in range(len(c1s) - 1))


def test_individual_constants_equilateral():
    s = doubled_equilateral()
    b1, b2 = constants_individual(s)
    scale = (2.0 / math.sqrt(3.0)) ** 0.5
    relsys, RT = scale, scale / math.sqrt(3.0)
    exp_b1 = math.sqrt(2.0) * (relsys**2 / RT) * (1 / 3) / (12 * 2)
    exp_b2 = relsys**2 / (2 * RT)
    assert b1 == pytest.approx(exp_b1, rel=1e-12)
    assert b2 == pytest.approx(exp_b2, rel=1e-12)
    assert b1 == pytest.approx(0.0365576114709, rel=1e-9)
    assert b2 == pytest.approx(0.93060485910, rel=1e-9)


def test_scaling_invariance():
    s = doubled_equilateral()
    b = constants_individual(s)
    b_scaled = constants_individual(s.rescaled(3.7))
    assert b[0] == pytest.approx(b_scaled[0], rel=1e-9)
    assert b[1] == pytest.approx(b_scaled[1], rel=1e-9)


def test_all_constants_positive():
    cs = constant_set(doubled_equilateral())
    assert cs.b1 > 0 and cs.b2 > 0 and cs.c1 > 0 and cs.c2 > 0
    assert cs.a1 > 0 and cs.a2 > 0 and cs.m0 > 0


def test_verify_bounds_equilateral():
    rep = verify_bounds(doubled_equilateral(), 4.0)
    assert rep.passed
    kinds = {r.kind for r in rep.rows}
    assert kinds == {"sc", "cg"}
    # every closed geodesic on a positive-gap sphere self-intersects
    for r in rep.rows:
        if r.kind == "cg":
            assert r.iota >= 1


def test_b2_witness_breaks_zero_constant_bound():
    """The gamma_x family shows the per-surface zero-constant lower bound
    cannot hold for general trajectories (only b1*sqrt(iota) - b2 does)."""
    from flatsphere import tracer as tr
    from flatsphere.examples import build_example, designated_trajectory

    surface = build_example("b2-witness", x=0.5).surface
    trajs = []
    for x in [0.001 * 2 ** (0.5 * k) for k in range(10)]:
        ex = build_example("b2-witness", x=x)
        trajs.append(designated_trajectory(ex))
    rep = trajectory_report(surface, trajs)
    assert rep.passed  # the honest b1*sqrt(iota) - b2 <= len rows all hold
    zero_const = [ok for (_, _, ok, _) in rep.informative]
    assert not all(zero_const)  # the zero-constant variant fails eventually
