from fractions import Fraction as F

import mpmath
import pytest

from ellq import numerics
from ellq.ellfun import EllFun, derive, eval_numeric
from ellq.errors import UnresolvedPoles
from ellq.integration import (PrimitiveResult, ResidueObstruction,
                              elliptic_primitive, polar_divisor,
                              residual_points)
from ellq.lattice import (TorsionPoint, ZERO_POINT, catalog_divisor,
                          make_exact_curve, torsion_to_complex)
from ellq.sampling import sample_ellfun

from conftest import lattice_for_real_curve


def test_primitive_examples(lem_curve):
    x = EllFun.X(lem_curve)
    y = EllFun.Y(lem_curve)
    res = elliptic_primitive(x)
    assert isinstance(res, PrimitiveResult)
    assert res.u.is_zero() and res.r == F(-1) and res.s == 0
    res = elliptic_primitive(x * x)
    assert res.u == y / 6 and res.r == 0 and res.s == F(4, 12)
    res = elliptic_primitive(y / (x - 1))
    assert isinstance(res, ResidueObstruction)
    assert res.odd_part is not None


def test_obstruction_points(lem_curve, lem_lattice):
    x = EllFun.X(lem_curve)
    y = EllFun.Y(lem_curve)
    h = y / (x - 1)
    res = elliptic_primitive(h, lem_curve, lattice=lem_lattice)
    assert isinstance(res, ResidueObstruction)
    div = res.points
    # double pole of (X - 1) at a half-period: residues (2, -2)
    half = [p for p in div.support() if p != ZERO_POINT]
    assert len(half) == 1 and div.value(half[0]) == 2
    assert div.value(ZERO_POINT) == -2


def test_round_trips(lem_curve, rng):
    x = EllFun.X(lem_curve)
    for _ in range(30):
        u = EllFun.zero(lem_curve)
        for _ in range(3):
            u = u + sample_ellfun(rng, lem_curve, allow_fraction=True)
        r = F(rng.randrange(-2, 3))
        s = F(rng.randrange(-2, 3))
        h = derive(u) - x.scale(r) + EllFun.const(s, lem_curve)
        res = elliptic_primitive(h)
        assert isinstance(res, PrimitiveResult)
        assert res.r == r and res.s == s and (res.u - u).is_constant()


def test_quasi_period_obstruction_numeric(lem_curve, lem_lattice):
    # whenever the returned zeta-coefficient is nonzero, the primitive is
    # genuinely non-periodic: its period pairing is the quasi-period
    x = EllFun.X(lem_curve)
    res = elliptic_primitive(x)
    assert res.r == F(-1)
    with mpmath.workdps(40):
        z0 = mpmath.mpc("0.23", "0.31")
        # w = u + r*zeta + s*z; its omega-increment is r*eta + s*omega != 0
        inc = res.r * lem_lattice.eta1 + res.s * lem_lattice.omega1
        assert abs(inc) > mpmath.mpf(10) ** -10
        # cross-check against actual zeta values
        _, _, zt0 = numerics.wp_eval(lem_lattice, z0)
        _, _, zt1 = numerics.wp_eval(lem_lattice, z0 + lem_lattice.omega1)
        winc = res.r * (zt1 - zt0)
        assert abs(winc - inc) < mpmath.mpf(10) ** -24


def test_residual_points_examples(lem_curve, lem_lattice):
    x = EllFun.X(lem_curve)
    assert residual_points(x, lem_curve, lem_lattice).is_zero()
    assert residual_points(EllFun.zero(lem_curve), lem_curve,
                           lem_lattice).is_zero()


def test_residual_points_three_torsion():
    # curve with a rational three-torsion x-coordinate: wp(P) = 1 on
    # (g2, g3) = (4, -4/3); residues of Y/(X - 1) are +1 at both points
    # over x = 1 and -2 at the origin
    curve = make_exact_curve(4, F(-4, 3), 2)
    lat = lattice_for_real_curve(4, F(-4, 3), digits=30)
    x = EllFun.X(curve)
    y = EllFun.Y(curve)
    h = y / (x - 1)
    div = residual_points(h, curve, lat)
    pts = sorted(div.entries.items(), key=lambda kv: (kv[0].r1, kv[0].r2))
    assert div.value(ZERO_POINT) == -2
    others = [kv for kv in pts if kv[0] != ZERO_POINT]
    assert len(others) == 2
    assert all(v == 1 for _, v in others)
    assert others[0][0] == -others[1][0]
    # order three: 3P = 0
    assert others[0][0].scale(3).is_zero()
    # the log-derivative divisor equals the catalogued divisor
    a = x - 1
    lder = derive(a) / a
    div2 = residual_points(lder, curve, lat)
    assert div2 == catalog_divisor("x_minus_const", point=others[0][0])


def test_obstruction_soundness_numeric(lem_curve, lem_lattice, rng):
    x = EllFun.X(lem_curve)
    y = EllFun.Y(lem_curve)
    for e in (0, 1, -1):
        h = y / (x - e)
        div = residual_points(h, lem_curve, lem_lattice)
        assert not div.is_zero()
        with mpmath.workdps(40):
            for pt, val in div.entries.items():
                zc = torsion_to_complex(lem_lattice, pt)
                rr = numerics.residue(
                    lambda w: eval_numeric(h, lem_lattice, w), zc,
                    abs(lem_lattice.omega2) / 8, digits=22)
                assert abs(rr - mpmath.mpf(val.numerator) / val.denominator
                           ) < mpmath.mpf(10) ** -10
                assert abs(rr) > mpmath.mpf(10) ** -10


def test_polar_divisor_examples(lem_curve, lem_lattice):
    x = EllFun.X(lem_curve)
    d = polar_divisor(x, 2, lem_lattice)
    assert d == __import__("ellq.divisors", fromlist=["PeriodicDivisor"]
                           ).PeriodicDivisor.single(ZERO_POINT)
    assert polar_divisor(x, 1, lem_lattice).is_zero()


def test_polar_divisor_higher_order(lem_curve, lem_lattice):
    # 1/(X - 1)^... X - 1 vanishes doubly at the half-period; h = 1/(X-1)
    # has a second-order pole there with known leading coefficient
    x = EllFun.X(lem_curve)
    h = EllFun.one(lem_curve) / (x - 1)
    d2 = polar_divisor(h, 2, lem_lattice)
    half = [p for p in d2.support()]
    assert len(half) == 1
    # wp(z) - 1 = c2 w^2 + ... with c2 = wp''(half)/2 = (6*1 - 2)/2 = 2,
    # so 1/(X-1) ~ (1/2) w^-2
    assert d2.value(half[0]) == F(1, 2)


def test_unresolved_poles(lem_curve, lem_lattice):
    x = EllFun.X(lem_curve)
    # poles where wp = 5: not a torsion point of small order on this grid
    h = EllFun.one(lem_curve) / (x - 5) + x
    with pytest.raises(UnresolvedPoles):
        residual_points(h, lem_curve, lem_lattice)
