from fractions import Fraction as F

import mpmath
import pytest

from ellq import serialize as se
from ellq.ellfun import EllFun, zeta_defect
from ellq.errors import DomainViolation
from ellq.sampling import sample_selem
from ellq.sring import (InS, Inconclusive, SElem, SFraction, apply_delta,
                        apply_partial, apply_phi, apply_phi_inverse,
                        eval_selem, kernel_phi_minus_a, q_power_exponent,
                        s_arith, s_membership_test, selem_exact_divide,
                        z_coefficients, z_reassemble)


def test_ring_examples(lem_curve):
    z = SElem.z(lem_curve)
    zeta = SElem.zeta(lem_curve)
    assert s_arith("*", z, SElem.z(lem_curve, -1)) == SElem.one(lem_curve)
    lhs = s_arith("*", zeta + z, zeta + z)
    rhs = zeta * zeta + (z * zeta).scale(EllFun.const(2, lem_curve)) + z * z
    assert lhs == rhs
    with pytest.raises(DomainViolation):
        SElem.z(lem_curve, -1, s0=True)


def test_phi_rules(lem_curve):
    z = SElem.z(lem_curve)
    zeta = SElem.zeta(lem_curve)
    q = EllFun.const(2, lem_curve)
    assert apply_phi(z) == z.scale(q)
    fz = zeta_defect(lem_curve, 2)
    assert apply_phi(zeta) == zeta.scale(q) + SElem.from_ellfun(fz)
    c = SElem.const(F(9, 4), lem_curve)
    assert apply_phi(c) == c


def test_partial_delta_rules(lem_curve):
    z = SElem.z(lem_curve)
    zeta = SElem.zeta(lem_curve)
    x = EllFun.X(lem_curve)
    assert apply_partial(zeta) == SElem.from_ellfun(-x)
    assert apply_partial(z) == SElem.one(lem_curve)
    zn = SElem.z(lem_curve, 5)
    assert apply_delta(zn) == zn.scale(EllFun.const(5, lem_curve))


def test_commutation_exact(lem_curve, rng):
    q = EllFun.const(2, lem_curve)
    for _ in range(15):
        f = sample_selem(rng, lem_curve, zdeg=2, zetadeg=2)
        assert (apply_partial(apply_phi(f))
                - apply_phi(apply_partial(f)).scale(q)).is_zero()
        assert (apply_delta(apply_phi(f))
                - apply_phi(apply_delta(f))).is_zero()
        g = sample_selem(rng, lem_curve, zdeg=2, zetadeg=2)
        assert apply_partial(f * g) == \
            apply_partial(f) * g + f * apply_partial(g)
        assert apply_delta(f * g) == \
            apply_delta(f) * g + f * apply_delta(g)


def test_phi_automorphism_round_trip(lem_curve, rng):
    for _ in range(6):
        f = sample_selem(rng, lem_curve, zdeg=2, zetadeg=2)
        g = sample_selem(rng, lem_curve, zdeg=1, zetadeg=1)
        assert apply_phi(f * g) == apply_phi(f) * apply_phi(g)
        assert apply_phi_inverse(apply_phi(f)) == f


def test_kernels(lem_curve):
    assert kernel_phi_minus_a(F(8), lem_curve, "S")[0] == \
        SElem.z(lem_curve, 3)
    assert kernel_phi_minus_a(F(5), lem_curve, "S") == []
    assert kernel_phi_minus_a(F(1), lem_curve, "KZ")[0] == \
        SElem.one(lem_curve)
    assert kernel_phi_minus_a(F(2), lem_curve, "KZ") == []
    assert kernel_phi_minus_a(F(1, 2), lem_curve, "S")[0] == \
        SElem.z(lem_curve, -1)
    assert kernel_phi_minus_a(F(1, 2), lem_curve, "S0") == []
    assert q_power_exponent(F(16), 2) == 4
    assert q_power_exponent(F(1, 8), 2) == -3
    assert q_power_exponent(F(6), 2) is None


def test_z_coefficients(lem_curve):
    z = SElem.z(lem_curve)
    zeta = SElem.zeta(lem_curve)
    f = z * z * zeta + z * z
    parts = z_coefficients(f)
    assert len(parts) == 1 and parts[0][0] == 2
    assert parts[0][1] == SElem.zeta(lem_curve, s0=True) + \
        SElem.one(lem_curve, s0=True)
    assert z_coefficients(SElem.zero(lem_curve)) == []
    fz = zeta_defect(lem_curve, 2)
    g = SElem.from_ellfun(fz).mul_z(-1)
    parts = z_coefficients(g)
    assert parts[0][0] == -1 and parts[0][1] == SElem.from_ellfun(
        fz).as_s0()
    assert z_reassemble(z_coefficients(f), lem_curve) == f


def test_membership(lem_curve):
    zeta = SElem.zeta(lem_curve)
    z = SElem.z(lem_curve)
    r = s_membership_test(SFraction.from_selem(zeta), lem_curve, 3)
    assert isinstance(r, InS) and r.order <= 2
    r = s_membership_test(SFraction.from_selem(z), lem_curve, 2)
    assert isinstance(r, InS) and r.order <= 1
    # 1/z IS a ring element: a dependence must appear at order 1
    r = s_membership_test(SFraction(SElem.one(lem_curve), z), lem_curve, 4)
    assert isinstance(r, InS) and r.order == 1
    r = s_membership_test(SFraction(SElem.one(lem_curve), zeta),
                          lem_curve, 2)
    assert isinstance(r, Inconclusive)


def test_exact_divide(lem_curve, rng):
    for _ in range(8):
        f = sample_selem(rng, lem_curve, zdeg=1, zetadeg=1, terms=2)
        g = sample_selem(rng, lem_curve, zdeg=1, zetadeg=1, terms=2)
        if f.is_zero() or g.is_zero():
            continue
        prod = f * g
        q = selem_exact_divide(prod, g)
        assert q is not None and q == f
    x = EllFun.X(lem_curve)
    assert selem_exact_divide(SElem.from_ellfun(x),
                              SElem.zeta(lem_curve)) is None


def test_fraction_reduction(lem_curve):
    z = SElem.z(lem_curve)
    zeta = SElem.zeta(lem_curve)
    fr = SFraction(zeta * z + z, z)
    assert fr == SFraction.from_selem(zeta + SElem.one(lem_curve))
    assert fr.factors == []  # the z cancelled
    a = SFraction(zeta * zeta - z * z, zeta + z)
    assert a == SFraction.from_selem(zeta - z)


def test_numeric_shadow_phi(lem_curve, lem_lattice, rng):
    f = sample_selem(rng, lem_curve, zdeg=2, zetadeg=2)
    with mpmath.workdps(40):
        z0 = mpmath.mpc("0.23", "0.11")
        v1 = eval_selem(apply_phi(f), lem_lattice, z0)
        v2 = eval_selem(f, lem_lattice, 2 * z0)
        assert abs(v1 - v2) < mpmath.mpf(10) ** (5 - lem_lattice.precision)


def test_selem_json_round_trip(lem_curve, rng):
    f = sample_selem(rng, lem_curve, zdeg=2, zetadeg=2)
    assert se.selem_from_json(se.selem_to_json(f), lem_curve) == f
    fr = SFraction(f, SElem.z(lem_curve) + SElem.one(lem_curve))
    doc = se.sfraction_to_json(fr)
    assert se.sfraction_from_json(doc, lem_curve) == fr
