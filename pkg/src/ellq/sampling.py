"""Seeded random generators shared by the test-suite and the self-test CLI.

Desk-scale instances: small heights, small degrees, and unimodular gauge
matrices (unit determinant) so the exact matrix identities stay affordable.
"""

from __future__ import annotations

from fractions import Fraction

from .ellfun import EllFun
from .lattice import TorsionPoint, ZERO_POINT
from .divisors import PeriodicDivisor
from .linsys import MatrixOverE
from .sring import SElem, SFraction


def sample_scalar(rng, height=2):
    v = Fraction(rng.randrange(-height, height + 1))
    if rng.random() < 0.25:
        v /= rng.randrange(1, height + 1)
    return v


def sample_ellfun(rng, curve, height=2, allow_fraction=False):
    """Small field element: linear in X with an optional Y term."""
    x = EllFun.X(curve)
    y = EllFun.Y(curve)
    out = (EllFun.const(sample_scalar(rng, height), curve)
           + x.scale(curve.field.from_fraction(sample_scalar(rng, height))))
    if rng.random() < 0.5:
        out = out + y.scale(curve.field.from_fraction(
            sample_scalar(rng, height)))
    if allow_fraction and rng.random() < 0.3:
        den = x + EllFun.const(rng.randrange(1, height + 2), curve)
        out = out / den
    if out.is_zero():
        out = EllFun.one(curve)
    return out


def sample_selem(rng, curve, zdeg=3, zetadeg=3, terms=3, s0=False,
                 height=2):
    lo = 0 if s0 else -1
    f = SElem.zero(curve, s0)
    for _ in range(terms):
        f = f + SElem.monomial(sample_ellfun(rng, curve, height),
                               rng.randrange(lo, zdeg + 1),
                               rng.randrange(0, zetadeg + 1), s0)
    return f


def sample_monomial_fraction(rng, curve):
    num = sample_selem(rng, curve, zdeg=1, zetadeg=1, terms=2)
    if num.is_zero():
        num = SElem.one(curve)
    return SFraction.from_selem(num)


def sample_unimodular(rng, curve, n, steps=3):
    """Product of shear and unit-diagonal matrices: exact inverse stays
    polynomial, keeping gauge identities desk-scale."""
    m = MatrixOverE.identity(n, curve)
    x = EllFun.X(curve)
    y = EllFun.Y(curve)
    for _ in range(steps):
        i = rng.randrange(n)
        j = rng.randrange(n)
        if i == j:
            continue
        e = MatrixOverE.identity(n, curve)
        c = rng.choice([EllFun.one(curve), EllFun.const(-1, curve),
                        EllFun.const(2, curve), x, y, x + 1])
        e.rows[i][j] = SFraction.from_selem(
            SElem.monomial(c, rng.randrange(0, 2), rng.randrange(0, 2)))
        m = m * e
    k = rng.randrange(n)
    d = MatrixOverE.identity(n, curve)
    d.rows[k][k] = SFraction.from_selem(SElem.z(curve, rng.choice([1, -1])))
    return m * d


def sample_consistent_pair(rng, curve, n):
    """(A, B) satisfying the mixed-system consistency relation, built from a
    random unimodular fundamental matrix."""
    u = sample_unimodular(rng, curve, n)
    uinv = u.inverse()
    return u.phi() * uinv, u.partial() * uinv


def sample_torsion_point(rng, denominator=12, nonzero=False):
    while True:
        p = TorsionPoint(Fraction(rng.randrange(denominator), denominator),
                         Fraction(rng.randrange(denominator), denominator))
        if not (nonzero and p.is_zero()):
            return p


def sample_divisor(rng, denominator=12, points=3, height=2, integral=True):
    d = PeriodicDivisor.zero()
    for _ in range(points):
        v = rng.randrange(-height, height + 1)
        if not integral:
            v = Fraction(v, rng.randrange(1, 3))
        d = d + PeriodicDivisor.single(
            sample_torsion_point(rng, denominator), v)
    return d


def sample_principal_divisor(rng, denominator=12, blocks=2):
    """Sums of [P] + [-P] - 2[0]: degree zero with vanishing point sum."""
    d = PeriodicDivisor.zero()
    for _ in range(blocks):
        p = sample_torsion_point(rng, denominator, nonzero=True)
        d = (d + PeriodicDivisor.single(p) + PeriodicDivisor.single(-p)
             + PeriodicDivisor.single(ZERO_POINT, -2))
    return d


def sample_unipotent_pair(rng, n):
    """Commuting unipotent matrices from the algebra generated by one
    strictly upper-triangular nilpotent."""
    from .monodromy import UnipotentPair, fmat_add, fmat_mul, fmat_scale, \
        nilpotent_exp
    n1 = [[Fraction(0)] * n for _ in range(n)]
    for i in range(n):
        for j in range(i + 1, n):
            n1[i][j] = Fraction(rng.randrange(-2, 3))
    n2 = fmat_scale(n1, Fraction(rng.randrange(-2, 3)))
    if n >= 3 and rng.random() < 0.5:
        n2 = fmat_add(n2, fmat_mul(n1, n1))
    return UnipotentPair(nilpotent_exp(n1), nilpotent_exp(n2))
