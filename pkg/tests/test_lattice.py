from fractions import Fraction as F

import mpmath
import pytest

from ellq import serialize as se
from ellq.errors import BadMultiplier, BadOrientation, BadPoint, SingularCurve
from ellq.lattice import (TorsionPoint, ZERO_POINT, catalog_divisor,
                          make_exact_curve, make_numeric_lattice,
                          torsion_to_complex)
from ellq import scalars


def test_curve_examples():
    make_exact_curve(4, 0, 2)
    make_exact_curve(0, 4, 3)
    # discriminant of (3, 1/3) is 27 - 27/9 = 24, so the curve is accepted
    c = make_exact_curve(3, F(1, 3), 2)
    assert c.discriminant() == 24


def test_curve_rejections():
    with pytest.raises(SingularCurve):
        make_exact_curve(3, 1, 2)       # 27 = 27
    with pytest.raises(SingularCurve):
        make_exact_curve(0, 0, 2)
    with pytest.raises(BadMultiplier):
        make_exact_curve(4, 0, 1)
    with pytest.raises(BadMultiplier):
        make_exact_curve(4, 0, -2)


def test_gaussian_curve():
    i = scalars.GAUSSIAN.i
    c = make_exact_curve(i, scalars.GAUSSIAN.from_int(1), 2,
                         field=scalars.GAUSSIAN)
    assert c.discriminant() == scalars.GaussianRational(-27, -1)


def test_square_lattice_g3_vanishes():
    lat = make_numeric_lattice(mpmath.mpc(0, 1), mpmath.mpf(1), 30)
    assert abs(lat.g3n) < mpmath.mpf(10) ** -25


def test_orientation_rejected():
    with pytest.raises(BadOrientation):
        make_numeric_lattice(mpmath.mpf(1), mpmath.mpc(0, 1), 30)


def test_legendre_residual():
    lat = make_numeric_lattice(mpmath.mpc(0, 2), mpmath.mpf(1), 30)
    assert lat.legendre_residual() < mpmath.mpf(10) ** -25


def test_torsion_canonical_and_linear():
    p = TorsionPoint(F(5, 3), F(-1, 2))
    assert (p.r1, p.r2) == (F(2, 3), F(1, 2))
    assert TorsionPoint(p.r1, p.r2) == p  # reduction is idempotent
    lat = make_numeric_lattice(mpmath.mpc(0, 2), mpmath.mpf(1), 30)
    with mpmath.workdps(35):
        z = torsion_to_complex(lat, TorsionPoint(F(1, 3), F(1, 2)))
        assert abs(z - (lat.omega1 / 3 + lat.omega2 / 2)) < 1e-25
        assert torsion_to_complex(lat, ZERO_POINT) == 0


def test_torsion_dynamics():
    p = TorsionPoint(F(1, 3), F(0))
    assert p.image(2) == TorsionPoint(F(2, 3), F(0))
    pre = p.preimages(2)
    assert len(pre) == 4
    assert all(x.image(2) == p for x in pre)


def test_catalog_divisors():
    d = catalog_divisor("x_minus_const", point=TorsionPoint(F(1, 2), F(0)))
    assert d.value(TorsionPoint(F(1, 2), F(0))) == 2
    assert d.value(ZERO_POINT) == -2
    d = catalog_divisor("x_minus_const", point=TorsionPoint(F(1, 3), F(0)))
    assert d.value(TorsionPoint(F(1, 3), F(0))) == 1
    assert d.value(TorsionPoint(F(2, 3), F(0))) == 1
    d = catalog_divisor("yfun")
    assert d.value(ZERO_POINT) == -3
    assert sum(v for v in d.entries.values()) == 0
    with pytest.raises(BadPoint):
        catalog_divisor("x_minus_const", point=ZERO_POINT)


def test_json_round_trips():
    c = make_exact_curve(4, 0, 2)
    assert se.curve_from_json(se.curve_to_json(c)) == c
    lat = make_numeric_lattice(mpmath.mpc(0, 1), mpmath.mpf(1), 30)
    doc = se.lattice_to_json(lat)
    lat2 = se.lattice_from_json(doc)
    assert abs(lat2.omega1 - lat.omega1) < 1e-25
    p = TorsionPoint(F(1, 3), F(5, 7))
    assert se.torsion_from_json(se.torsion_to_json(p)) == p
