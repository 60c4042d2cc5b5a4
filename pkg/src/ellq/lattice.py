"""Exact curve parameters, numeric period lattices and torsion coordinates.

The exact side fixes a Weierstrass cubic y^2 = 4x^3 - g2*x - g3 over one of
the scalar modes, together with the integer dilation multiplier q >= 2.  The
numeric side carries an oriented period basis at a requested precision with
derived invariants and quasi-periods, and is built so that the two sides can
be matched: rescaling a classical lattice produces numeric invariants equal
to a chosen rational pair.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import BadMultiplier, BadOrientation, BadPoint, SingularCurve
from . import scalars


@dataclass(frozen=True)
class ExactCurve:
    """Nonsingular Weierstrass parameters plus the dilation multiplier."""

    g2: object
    g3: object
    q: int
    field: object = scalars.RATIONAL

    def discriminant(self):
        s = self.field
        return self.g2 * self.g2 * self.g2 - s.from_int(27) * self.g3 * self.g3

    def __hash__(self):
        return hash((self.g2, self.g3, self.q, id(self.field)))


def make_exact_curve(g2, g3, q, field=scalars.RATIONAL) -> ExactCurve:
    if not isinstance(q, int) or q < 2:
        raise BadMultiplier(f"multiplier must be an integer >= 2, got {q!r}")
    if isinstance(g2, (int, Fraction)):
        g2 = field.from_fraction(Fraction(g2))
    if isinstance(g3, (int, Fraction)):
        g3 = field.from_fraction(Fraction(g3))
    curve = ExactCurve(g2, g3, q, field)
    if not curve.discriminant():
        raise SingularCurve("g2^3 - 27*g3^2 = 0")
    return curve


@dataclass(frozen=True)
class TorsionPoint:
    """The point r1*omega1 + r2*omega2 mod the lattice, r_i in [0,1)."""

    r1: Fraction
    r2: Fraction

    def __post_init__(self):
        object.__setattr__(self, "r1", Fraction(self.r1) % 1)
        object.__setattr__(self, "r2", Fraction(self.r2) % 1)

    def is_zero(self):
        return self.r1 == 0 and self.r2 == 0

    def __neg__(self):
        return TorsionPoint(-self.r1, -self.r2)

    def __add__(self, other):
        return TorsionPoint(self.r1 + other.r1, self.r2 + other.r2)

    def scale(self, n):
        return TorsionPoint(self.r1 * n, self.r2 * n)

    def image(self, q: int):
        """The point q*P."""
        return TorsionPoint(self.r1 * q, self.r2 * q)

    def preimages(self, q: int):
        """All q^2 points mapping to this one under P -> q*P."""
        return [TorsionPoint((self.r1 + i) / q, (self.r2 + j) / q)
                for i in range(q) for j in range(q)]

    def order_denominator(self):
        from math import lcm
        return lcm(self.r1.denominator, self.r2.denominator)

    def __repr__(self):
        return f"({self.r1},{self.r2})"


ZERO_POINT = TorsionPoint(Fraction(0), Fraction(0))
HALF_PERIODS = (TorsionPoint(Fraction(1, 2), Fraction(0)),
                TorsionPoint(Fraction(0), Fraction(1, 2)),
                TorsionPoint(Fraction(1, 2), Fraction(1, 2)))


class NumericLattice:
    """Oriented period basis with derived invariants at fixed precision.

    Attributes g2n, g3n, eta1, eta2 are mpmath complex numbers computed to
    ``precision`` decimal digits; eta_i = 2*zeta(omega_i/2) and the Legendre
    residual |omega1*eta2 - omega2*eta1 - 2*pi*i| is checked at construction.
    """

    __slots__ = ("omega1", "omega2", "precision", "g2n", "g3n",
                 "eta1", "eta2", "_red", "_series", "_memo")

    def __init__(self, omega1, omega2, precision, derived):
        self.omega1 = omega1
        self.omega2 = omega2
        self.precision = precision
        self.g2n = derived["g2"]
        self.g3n = derived["g3"]
        self.eta1 = derived["eta1"]
        self.eta2 = derived["eta2"]
        self._red = derived["reduced"]
        self._series = derived["series"]
        self._memo = {}

    def legendre_residual(self):
        with mpmath.workdps(self.precision + 10):
            return abs(self.omega1 * self.eta2 - self.omega2 * self.eta1
                       - 2 * mpmath.pi * mpmath.mpc(0, 1))

    def __repr__(self):
        return (f"NumericLattice(omega1={self.omega1}, omega2={self.omega2}, "
                f"precision={self.precision})")


def make_numeric_lattice(omega1, omega2, precision: int) -> NumericLattice:
    """Build a lattice from an oriented basis; precision in decimal digits."""
    if precision < 15:
        raise ValueError("precision must be at least 15 digits")
    with mpmath.workdps(precision + 15):
        w1 = mpmath.mpc(omega1)
        w2 = mpmath.mpc(omega2)
        ratio = w1 / w2
        if not mpmath.im(ratio) > 0:
            raise BadOrientation("Im(omega1/omega2) must be positive")
    from . import numerics
    derived = numerics.derive_lattice_data(w1, w2, precision)
    return NumericLattice(w1, w2, precision, derived)


def torsion_to_complex(lattice: NumericLattice, point: TorsionPoint):
    """The complex number r1*omega1 + r2*omega2."""
    with mpmath.workdps(lattice.precision + 10):
        return (lattice.omega1 * mpmath.mpf(point.r1.numerator)
                / point.r1.denominator
                + lattice.omega2 * mpmath.mpf(point.r2.numerator)
                / point.r2.denominator)


@lru_cache(maxsize=None)
def named_lattice(name: str, precision: int) -> NumericLattice:
    """Classical lattices rescaled so the invariants hit a rational pair.

    ``lemniscatic``    - square lattice scaled to (g2, g3) = (4, 0)
    ``equianharmonic`` - triangular lattice scaled to (g2, g3) = (0, 4)
    ``square5``        - square lattice scaled to (g2, g3) = (5, 0)
    """
    with mpmath.workdps(precision + 15):
        if name == "lemniscatic" or name == "square5":
            base = make_numeric_lattice(mpmath.mpc(0, 1), mpmath.mpf(1),
                                        precision + 10)
            target = 4 if name == "lemniscatic" else 5
            lam = (base.g2n / target) ** mpmath.mpf("0.25")
            return make_numeric_lattice(base.omega1 * lam, base.omega2 * lam,
                                        precision)
        if name == "equianharmonic":
            rho = mpmath.exp(2 * mpmath.pi * mpmath.mpc(0, 1) / 3)
            base = make_numeric_lattice(rho, mpmath.mpf(1), precision + 10)
            lam = (base.g3n / 4) ** (mpmath.mpf(1) / 6)
            return make_numeric_lattice(base.omega1 * lam, base.omega2 * lam,
                                        precision)
    raise ValueError(f"unknown lattice name {name!r}")


def curve_for_lattice(lattice: NumericLattice, q: int, tol=None) -> ExactCurve:
    """Exact curve matching a named/rescaled lattice's rational invariants."""
    with mpmath.workdps(lattice.precision):
        g2r = _round_rational(lattice.g2n, lattice.precision, tol)
        g3r = _round_rational(lattice.g3n, lattice.precision, tol)
    if g2r is None or g3r is None:
        raise SingularCurve("lattice invariants are not near small rationals")
    return make_exact_curve(g2r, g3r, q)


def _round_rational(x, precision, tol=None):
    tol = tol or mpmath.mpf(10) ** (8 - precision)
    if abs(mpmath.im(x)) > tol:
        return None
    r = mpmath.re(x)
    best = Fraction(mpmath.nstr(r, 20)).limit_denominator(10 ** 6)
    if abs(r - mpmath.mpf(best.numerator) / best.denominator) < tol:
        return best
    return None


def catalog_divisor(kind, curve=None, point: TorsionPoint | None = None):
    """Divisors of the two catalogued function families.

    ``x_minus_const`` with a nonzero torsion point P gives the divisor of
    (X - const) vanishing at P, i.e. [P] + [-P] - 2[0]; ``yfun`` gives the
    divisor of the odd generator: the three half-periods minus 3[0].
    """
    from .divisors import PeriodicDivisor
    if kind == "x_minus_const":
        if point is None or point.is_zero():
            raise BadPoint("x_minus_const needs a nonzero torsion point")
        d = {ZERO_POINT: Fraction(-2)}
        for p in (point, -point):
            d[p] = d.get(p, Fraction(0)) + 1
        return PeriodicDivisor(d)
    if kind == "yfun":
        d = {p: Fraction(1) for p in HALF_PERIODS}
        d[ZERO_POINT] = Fraction(-3)
        return PeriodicDivisor(d)
    raise ValueError(f"unknown catalogued function {kind!r}")
