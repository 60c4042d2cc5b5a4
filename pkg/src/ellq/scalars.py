"""Exact coefficient fields for curve constants.

Three modes are supported, mirroring the constructors in :mod:`ellq.lattice`:

* ``RATIONAL``  -- plain rationals (``fractions.Fraction``);
* ``GAUSSIAN``  -- Gaussian rationals a + b*i;
* ``SYMBOLIC``  -- the field Q(g2, g3) with the two curve invariants kept as
  free transcendentals, realised as the tower Frac(Q(g2)[g3]).  Identities
  proved here hold generically and can be shadow-checked on any lattice by
  substituting its computed invariants.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZero
from .polys import Poly, QQ as QQ_POLYDOM, RatFun, RatFunDomain


class GaussianRational:
    """a + b*i with rational a, b."""

    __slots__ = ("re", "im")

    def __init__(self, re, im=0):
        self.re = Fraction(re)
        self.im = Fraction(im)

    def __add__(self, other):
        other = _as_gauss(other)
        return GaussianRational(self.re + other.re, self.im + other.im)

    __radd__ = __add__

    def __neg__(self):
        return GaussianRational(-self.re, -self.im)

    def __sub__(self, other):
        return self + (-_as_gauss(other))

    def __rsub__(self, other):
        return _as_gauss(other) + (-self)

    def __mul__(self, other):
        other = _as_gauss(other)
        return GaussianRational(self.re * other.re - self.im * other.im,
                                self.re * other.im + self.im * other.re)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = _as_gauss(other)
        n = other.re * other.re + other.im * other.im
        if n == 0:
            raise DivisionByZero("division by zero Gaussian rational")
        return GaussianRational((self.re * other.re + self.im * other.im) / n,
                                (self.im * other.re - self.re * other.im) / n)

    def __rtruediv__(self, other):
        return _as_gauss(other) / self

    def __eq__(self, other):
        try:
            other = _as_gauss(other)
        except (TypeError, ValueError):
            return NotImplemented
        return self.re == other.re and self.im == other.im

    def __bool__(self):
        return bool(self.re) or bool(self.im)

    def __hash__(self):
        return hash((self.re, self.im))

    def __repr__(self):
        return f"GaussianRational({self.re}, {self.im})"


def _as_gauss(x):
    if isinstance(x, GaussianRational):
        return x
    if isinstance(x, (int, Fraction)):
        return GaussianRational(x)
    raise TypeError(f"cannot coerce {x!r} to a Gaussian rational")


class RationalMode:
    """Scalar domain Q."""

    name = "rational"
    zero = Fraction(0)
    one = Fraction(1)

    @staticmethod
    def from_int(n):
        return Fraction(n)

    @staticmethod
    def from_fraction(f):
        return Fraction(f)

    @staticmethod
    def rational_part(x):
        """Return x as a Fraction if it is rational, else None."""
        return Fraction(x)

    @staticmethod
    def to_mp(x, ctx, env=None):
        return ctx.mpf(x.numerator) / ctx.mpf(x.denominator)


class GaussianMode:
    """Scalar domain Q(i)."""

    name = "gaussian"
    zero = GaussianRational(0)
    one = GaussianRational(1)
    i = GaussianRational(0, 1)

    @staticmethod
    def from_int(n):
        return GaussianRational(n)

    @staticmethod
    def from_fraction(f):
        return GaussianRational(f)

    @staticmethod
    def rational_part(x):
        return x.re if not x.im else None

    @staticmethod
    def to_mp(x, ctx, env=None):
        return ctx.mpc(ctx.mpf(x.re.numerator) / ctx.mpf(x.re.denominator),
                       ctx.mpf(x.im.numerator) / ctx.mpf(x.im.denominator))


class SymbolicMode:
    """Scalar domain Q(g2, g3): curve invariants as free transcendentals.

    Elements are RatFun over Poly over RatFun over Poly over Fraction; the
    inner variable is g2, the outer g3.
    """

    name = "symbolic"

    def __init__(self):
        self._inner = RatFunDomain(QQ_POLYDOM, name="QQ(g2)")
        self.zero = RatFun.zero(self._inner)
        self.one = RatFun.const(self._inner.one, self._inner)
        self.g2 = RatFun.const(RatFun.gen(QQ_POLYDOM), self._inner)
        self.g3 = RatFun.gen(self._inner)

    def from_int(self, n):
        return RatFun.const(self._inner.from_int(n), self._inner)

    def from_fraction(self, f):
        return RatFun.const(
            RatFun.const(Fraction(f), QQ_POLYDOM), self._inner)

    @staticmethod
    def rational_part(x):
        if x.is_constant():
            inner = x.constant_value()
            if inner.is_constant():
                return inner.constant_value()
        return None

    @staticmethod
    def to_mp(x, ctx, env):
        """Evaluate with the numeric invariants env = (g2n, g3n)."""
        g2n, g3n = env

        def inner_eval(y):
            return _poly_mp(y.num, ctx, g2n) / _poly_mp(y.den, ctx, g2n)

        num = _poly_mp_coeffs(x.num, ctx, g3n, inner_eval)
        den = _poly_mp_coeffs(x.den, ctx, g3n, inner_eval)
        return num / den


def _poly_mp(p, ctx, at):
    acc = ctx.mpf(0)
    for k in range(p.degree, -1, -1):
        c = p.coeff(k)
        acc = acc * at + ctx.mpf(c.numerator) / ctx.mpf(c.denominator)
    return acc


def _poly_mp_coeffs(p, ctx, at, coeff_eval):
    acc = ctx.mpf(0)
    for k in range(p.degree, -1, -1):
        acc = acc * at + coeff_eval(p.coeff(k))
    return acc


RATIONAL = RationalMode()
GAUSSIAN = GaussianMode()
SYMBOLIC = SymbolicMode()

MODES = {m.name: m for m in (RATIONAL, GAUSSIAN, SYMBOLIC)}


def scalar_to_str(x, mode):
    if mode is RATIONAL:
        return f"{x.numerator}/{x.denominator}"
    if mode is GAUSSIAN:
        return f"{x.re.numerator}/{x.re.denominator}+{x.im.numerator}/{x.im.denominator}i"
    raise ValueError(f"no string form for scalars of mode {mode.name}")


def scalar_from_str(s, mode):
    s = s.strip()
    if mode is RATIONAL:
        return Fraction(s)
    if mode is GAUSSIAN:
        if s.endswith("i"):
            body = s[:-1]
            k = max(body.rfind("+", 1), body.rfind("-", 1))
            if k <= 0:
                return GaussianRational(0, Fraction(body or "1"))
            return GaussianRational(Fraction(body[:k]), Fraction(body[k:]))
        return GaussianRational(Fraction(s))
    raise ValueError(f"cannot parse scalars of mode {mode.name}")
