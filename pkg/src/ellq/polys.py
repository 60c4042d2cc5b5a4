"""Dense univariate polynomials and rational functions over an exact field.

The coefficient field is pluggable: anything whose elements support
``+ - * / ==`` and truthiness (zero is falsy) works, which lets the same
code run over Q, Q(i), towers like Q(g2)(g3), and the elliptic function
field itself.  A *domain* object supplies the constants ``zero``, ``one``
and a ``from_int`` hook.
"""

from __future__ import annotations

from fractions import Fraction

from .errors import DivisionByZero


class FractionDomain:
    """Domain adapter for the ordinary rationals."""

    zero = Fraction(0)
    one = Fraction(1)
    name = "QQ"

    @staticmethod
    def from_int(n):
        return Fraction(n)


QQ = FractionDomain()


class Poly:
    """Dense polynomial, coefficients ascending, trailing zeros trimmed."""

    __slots__ = ("c", "dom")

    def __init__(self, coeffs, dom):
        coeffs = list(coeffs)
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        self.c = tuple(coeffs)
        self.dom = dom

    # -- constructors --------------------------------------------------

    @staticmethod
    def const(value, dom):
        return Poly([value], dom)

    @staticmethod
    def gen(dom):
        return Poly([dom.zero, dom.one], dom)

    @staticmethod
    def zero(dom):
        return Poly([], dom)

    # -- structure -----------------------------------------------------

    @property
    def degree(self):
        return len(self.c) - 1  # -1 for the zero polynomial

    def is_zero(self):
        return not self.c

    def __bool__(self):
        return bool(self.c)

    def leading(self):
        return self.c[-1] if self.c else self.dom.zero

    def coeff(self, k):
        return self.c[k] if 0 <= k < len(self.c) else self.dom.zero

    def is_constant(self):
        return len(self.c) <= 1

    def constant_value(self):
        return self.c[0] if self.c else self.dom.zero

    def monic(self):
        if not self.c:
            return self
        lead = self.c[-1]
        if lead == self.dom.one:
            return self
        return Poly([x / lead for x in self.c], self.dom)

    def __hash__(self):
        return hash(self.c)

    def __eq__(self, other):
        if not isinstance(other, Poly):
            return NotImplemented
        return self.c == other.c

    def __repr__(self):
        return f"Poly({list(self.c)!r})"

    # -- arithmetic ------------------------------------------------------

    def __add__(self, other):
        a, b = self.c, other.c
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, x in enumerate(b):
            out[k] = out[k] + x
        return Poly(out, self.dom)

    def __neg__(self):
        return Poly([-x for x in self.c], self.dom)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, Poly):
            return self.scale(other)
        if not self.c or not other.c:
            return Poly([], self.dom)
        out = [self.dom.zero] * (len(self.c) + len(other.c) - 1)
        for i, x in enumerate(self.c):
            if not x:
                continue
            for j, y in enumerate(other.c):
                if y:
                    out[i + j] = out[i + j] + x * y
        return Poly(out, self.dom)

    def scale(self, s):
        if not s:
            return Poly([], self.dom)
        return Poly([x * s for x in self.c], self.dom)

    def shift(self, k):
        """Multiply by x^k."""
        if not self.c:
            return self
        return Poly([self.dom.zero] * k + list(self.c), self.dom)

    def divmod(self, other):
        if other.is_zero():
            raise DivisionByZero("polynomial division by zero")
        rem = list(self.c)
        dn = other.degree
        lead = other.c[-1]
        quo = [self.dom.zero] * max(0, len(rem) - dn)
        for k in range(len(rem) - 1, dn - 1, -1):
            r = rem[k]
            if not r:
                continue
            f = r / lead
            quo[k - dn] = f
            for j, y in enumerate(other.c):
                rem[k - dn + j] = rem[k - dn + j] - f * y
        return Poly(quo, self.dom), Poly(rem, self.dom)

    def __mod__(self, other):
        return self.divmod(other)[1]

    def __floordiv__(self, other):
        return self.divmod(other)[0]

    def derivative(self):
        return Poly(
            [self.c[k] * self.dom.from_int(k) for k in range(1, len(self.c))],
            self.dom,
        )

    def eval(self, x):
        """Horner evaluation; x may live in any ring containing the field."""
        if not self.c:
            return self.dom.zero
        acc = self.c[-1]
        for k in range(len(self.c) - 2, -1, -1):
            acc = acc * x + self.c[k]
        return acc

    def compose_with(self, value, embed, one):
        """Evaluate at ``value`` in another ring, mapping coefficients by ``embed``."""
        acc = embed(self.dom.zero) if not self.c else embed(self.c[-1]) * one
        for k in range(len(self.c) - 2, -1, -1):
            acc = acc * value + embed(self.c[k]) * one
        return acc


def poly_gcd(a: Poly, b: Poly) -> Poly:
    """Monic gcd; rational coefficients go through an integer subresultant
    sequence (plain Euclid swells uncontrollably past degree ~20)."""
    if isinstance(a.dom, FractionDomain) or a.dom is QQ:
        return _poly_gcd_rational(a, b)
    while not b.is_zero():
        a, b = b, a % b
    return a.monic()


def _int_primitive(c):
    from math import gcd as igcd
    g = 0
    for x in c:
        g = igcd(g, abs(x))
    if g in (0, 1):
        return list(c)
    return [x // g for x in c]


def _int_pseudo_rem(a, b):
    """lc(b)^(deg a - deg b + 1) * a  mod  b, over the integers."""
    r = list(a)
    db = len(b) - 1
    lb = b[-1]
    e = len(a) - db  # deg a - deg b + 1 scaling steps expected
    while r and len(r) - 1 >= db:
        lr = r[-1]
        if lr == 0:
            r.pop()
            continue
        k = len(r) - 1 - db
        r = [x * lb for x in r]
        for j in range(db + 1):
            r[k + j] -= lr * b[j]
        while r and r[-1] == 0:
            r.pop()
        e -= 1
    if e > 0 and r:
        scale = lb ** e
        r = [x * scale for x in r]
    return r


def _poly_gcd_rational(a: Poly, b: Poly) -> Poly:
    if a.is_zero():
        return b.monic()
    if b.is_zero():
        return a.monic()

    def to_int(p):
        from math import lcm
        den = 1
        for x in p.c:
            den = lcm(den, x.denominator)
        return _int_primitive([int(x * den) for x in p.c])

    u, v = to_int(a), to_int(b)
    if len(u) < len(v):
        u, v = v, u
    g = h = 1
    while True:
        if not v:
            out = u
            break
        if len(v) == 1:
            out = [1]
            break
        d = len(u) - len(v)
        r = _int_pseudo_rem(u, v)
        u = v
        if not r:
            out = u
            break
        denom = g * h ** d
        v = [x // denom for x in r]
        g = u[-1]
        h = (g ** d) // (h ** (d - 1)) if d >= 1 else h
    out = _int_primitive(out)
    dom = a.dom
    res = Poly([Fraction(x) for x in out], dom).monic()
    if (a % res).is_zero() and (b % res).is_zero():
        return res
    # integrality slipped (should not happen): fall back to plain Euclid
    x, y = a, b
    while not y.is_zero():
        x, y = y, x % y
    return x.monic()


def poly_exgcd(a: Poly, b: Poly):
    """Extended gcd: returns (g, s, t) with s*a + t*b = g, g monic."""
    dom = a.dom
    r0, r1 = a, b
    s0, s1 = Poly.const(dom.one, dom), Poly.zero(dom)
    t0, t1 = Poly.zero(dom), Poly.const(dom.one, dom)
    while not r1.is_zero():
        q, r = r0.divmod(r1)
        r0, r1 = r1, r
        s0, s1 = s1, s0 - q * s1
        t0, t1 = t1, t0 - q * t1
    if r0.is_zero():
        return r0, s0, t0
    lead = r0.leading()
    inv = dom.one / lead
    return r0.monic(), s0.scale(inv), t0.scale(inv)


def squarefree_decomposition(p: Poly):
    """Yun's algorithm.  Returns [(factor, multiplicity), ...], factors monic,
    pairwise coprime, multiplicities strictly increasing; constants dropped."""
    out = []
    if p.degree < 1:
        return out
    dp = p.derivative()
    g = poly_gcd(p, dp)
    if g.degree == 0:
        return [(p.monic(), 1)]
    w = p // g
    y = dp // g
    i = 1
    while w.degree > 0:
        z = y - w.derivative()
        f = poly_gcd(w, z)
        if f.degree > 0:
            out.append((f, i))
        w = w // f
        y = z // f
        i += 1
    return out


class RatFun:
    """Reduced fraction of two Polys; denominator monic and nonzero."""

    __slots__ = ("num", "den")

    def __init__(self, num: Poly, den: Poly, reduce=True):
        if den.is_zero():
            raise DivisionByZero("rational function with zero denominator")
        if den.degree == 0:
            lead = den.c[0]
            if lead != den.dom.one:
                num = num.scale(den.dom.one / lead)
                den = Poly.const(den.dom.one, den.dom)
        elif reduce:
            g = poly_gcd(num, den)
            if g.degree > 0:
                num = num // g
                den = den // g
            lead = den.leading()
            if lead != den.dom.one:
                num = num.scale(den.dom.one / lead)
                den = den.monic()
        self.num = num
        self.den = den

    # -- constructors ----------------------------------------------------

    @staticmethod
    def from_poly(p: Poly):
        return RatFun(p, Poly.const(p.dom.one, p.dom), reduce=False)

    @staticmethod
    def const(value, dom):
        return RatFun.from_poly(Poly.const(value, dom))

    @staticmethod
    def zero(dom):
        return RatFun.from_poly(Poly.zero(dom))

    @staticmethod
    def gen(dom):
        return RatFun.from_poly(Poly.gen(dom))

    @property
    def dom(self):
        return self.num.dom

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def is_constant(self):
        return self.num.is_constant() and self.den.is_constant()

    def constant_value(self):
        if self.den.degree == 0:
            return self.num.constant_value() / self.den.constant_value()
        raise ValueError("not a constant")

    def is_polynomial(self):
        return self.den.degree == 0

    def __hash__(self):
        return hash((self.num.c, self.den.c))

    def __eq__(self, other):
        if not isinstance(other, RatFun):
            return NotImplemented
        return self.num == other.num and self.den == other.den

    def __repr__(self):
        return f"RatFun({self.num!r}/{self.den!r})"

    # -- arithmetic --------------------------------------------------------

    def __add__(self, other):
        pa = self.den.degree == 0
        pb = other.den.degree == 0
        if pa and pb:
            return RatFun(self.num + other.num, self.den, reduce=False)
        if pa:
            return RatFun(self.num * other.den + other.num, other.den)
        if pb:
            return RatFun(self.num + other.num * self.den, self.den)
        if self.den == other.den:
            return RatFun(self.num + other.num, self.den)
        g = poly_gcd(self.den, other.den)
        if g.degree > 0:
            da = self.den // g
            db = other.den // g
            return RatFun(self.num * db + other.num * da, da * other.den)
        return RatFun(self.num * other.den + other.num * self.den,
                      self.den * other.den)

    def __neg__(self):
        return RatFun(-self.num, self.den, reduce=False)

    def __sub__(self, other):
        return self + (-other)

    def __mul__(self, other):
        if not isinstance(other, RatFun):
            return RatFun(self.num.scale(other), self.den, reduce=False)
        if self.den.degree == 0 and other.den.degree == 0:
            return RatFun(self.num * other.num, self.den, reduce=False)
        # cross-cancel before multiplying to curb degree growth
        n1, d2 = _cross_cancel(self.num, other.den)
        n2, d1 = _cross_cancel(other.num, self.den)
        return RatFun(n1 * n2, d1 * d2)

    def __truediv__(self, other):
        if other.is_zero():
            raise DivisionByZero("division by zero rational function")
        n1, n2 = _cross_cancel(self.num, other.num)
        d1, d2 = _cross_cancel(self.den, other.den)
        return RatFun(n1 * d2, d1 * n2)

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero")
        return RatFun(self.den, self.num)

    def derivative(self):
        return RatFun(self.num.derivative() * self.den
                      - self.num * self.den.derivative(),
                      self.den * self.den)

    def eval(self, x):
        dv = self.den.eval(x)
        return self.num.eval(x) / dv


def _cross_cancel(a: Poly, b: Poly):
    if a.degree < 1 or b.degree < 1:
        return a, b
    g = poly_gcd(a, b)
    if g.degree > 0:
        return a // g, b // g
    return a, b


class RatFunDomain:
    """Domain adapter presenting RatFun over an inner domain as a field."""

    __slots__ = ("inner", "zero", "one", "name")

    def __init__(self, inner, name=None):
        self.inner = inner
        self.zero = RatFun.zero(inner)
        self.one = RatFun.const(inner.one, inner)
        self.name = name or f"Frac({getattr(inner, 'name', '?')}[x])"

    def from_int(self, n):
        return RatFun.const(self.inner.from_int(n), self.inner)


def hermite_reduce(num: Poly, den: Poly):
    """Hermite reduction of the rational integrand num/den.

    Returns (rat_part, log_num, log_den, poly_part) with

        num/den = d/dx(rat_part) + log_num/log_den + poly_part,

    log_den squarefree and deg(log_num) < deg(log_den).  The middle term is
    the full logarithmic obstruction; it vanishes iff num/den has a rational
    primitive.
    """
    dom = num.dom
    quo, rem = num.divmod(den)
    rat = RatFun.zero(dom)
    frac = RatFun(rem, den)
    while True:
        d = frac.den
        sqf = squarefree_decomposition(d)
        target = None
        for v, m in sqf:
            if m >= 2:
                target = (v, m)
                break
        if target is None:
            break
        v, m = target
        # u = d / v^m, the cofactor of the highest-multiplicity block
        u = d
        for _ in range(m):
            u = u // v
        # Solve  n == b * u * v' * (1-m)  (mod v); then
        #   frac - d/dx(b / v^(m-1))  has v-multiplicity < m.
        n = frac.num
        w = (u * v.derivative()).scale(dom.from_int(1 - m))
        g, s, _t = poly_exgcd(w % v, v)
        if g.degree != 0:
            raise ArithmeticError("hermite: unexpected common factor")
        b = (s * (n % v)) % v
        b = b.scale(dom.one / g.constant_value())
        vm1 = v
        for _ in range(m - 2):
            vm1 = vm1 * v
        piece = RatFun(b, vm1)
        rat = rat + piece
        frac = frac - piece.derivative()
    return rat, frac.num, frac.den, quo


def integrate_poly(p: Poly) -> Poly:
    """Antiderivative with zero constant term."""
    dom = p.dom
    out = [dom.zero]
    for k, x in enumerate(p.c):
        out.append(x / dom.from_int(k + 1))
    return Poly(out, dom)
