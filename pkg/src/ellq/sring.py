"""The rings K[z, zeta] and K[z, z^-1, zeta] over an elliptic function field.

``zeta`` is a formal variable: all analytic content enters through the two
rules  d(zeta)/dz = -X  and  phi(zeta) = q*zeta + f_q  with f_q the exact
dilation defect from :func:`ellq.ellfun.zeta_defect`.  The generators are
algebraically independent over the field, so elements have a unique finite
coefficient map (i, j) -> EllFun for the monomial z^i zeta^j; a flag
restricts to i >= 0 when the subring without z^-1 is wanted.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache

import mpmath

from .errors import DomainViolation, DivisionByZero, NotInPhiImage
from .ellfun import (EllFun, EllFunDomain, derive, ellfun_domain, eval_numeric,
                     phi_field, phi_field_inverse, zeta_defect)
from .linalg import nullspace
from .polys import Poly, RatFun, RatFunDomain, poly_gcd


class SElem:
    """Finite coefficient map (i, j) -> EllFun for z^i zeta^j."""

    __slots__ = ("coeffs", "s0", "curve")

    def __init__(self, coeffs, curve, s0=False):
        clean = {}
        for (i, j), c in coeffs.items():
            if j < 0:
                raise DomainViolation("negative zeta powers do not exist")
            if s0 and i < 0:
                raise DomainViolation("z^-1 is not available in the subring")
            if not c.is_zero():
                clean[(i, j)] = c
        self.coeffs = clean
        self.curve = curve
        self.s0 = s0

    # -- constructors ----------------------------------------------------

    @staticmethod
    def zero(curve, s0=False):
        return SElem({}, curve, s0)

    @staticmethod
    def one(curve, s0=False):
        return SElem({(0, 0): EllFun.one(curve)}, curve, s0)

    @staticmethod
    def const(value, curve, s0=False):
        return SElem({(0, 0): EllFun.const(value, curve)}, curve, s0)

    @staticmethod
    def from_ellfun(c, s0=False):
        return SElem({(0, 0): c}, c.curve, s0)

    @staticmethod
    def z(curve, power=1, s0=False):
        return SElem({(power, 0): EllFun.one(curve)}, curve, s0)

    @staticmethod
    def zeta(curve, power=1, s0=False):
        return SElem({(0, power): EllFun.one(curve)}, curve, s0)

    @staticmethod
    def monomial(c: EllFun, i: int, j: int, s0=False):
        return SElem({(i, j): c}, c.curve, s0)

    # -- structure ----------------------------------------------------------

    def is_zero(self):
        return not self.coeffs

    def __bool__(self):
        return bool(self.coeffs)

    def is_constant(self):
        if not self.coeffs:
            return True
        return set(self.coeffs) == {(0, 0)} and self.coeffs[(0, 0)].is_constant()

    def constant_value(self):
        if self.is_zero():
            return self.curve.field.zero
        return self.coeffs[(0, 0)].constant_value()

    def coeff(self, i, j):
        return self.coeffs.get((i, j), EllFun.zero(self.curve))

    def zeta_degree(self):
        return max((j for (_, j) in self.coeffs), default=-1)

    def z_degrees(self):
        return (min((i for (i, _) in self.coeffs), default=0),
                max((i for (i, _) in self.coeffs), default=0))

    def size(self):
        return sum(c.size() for c in self.coeffs.values())

    def __eq__(self, other):
        if not isinstance(other, SElem):
            return NotImplemented
        return self.coeffs == other.coeffs

    def __hash__(self):
        return hash(frozenset(self.coeffs.items()))

    def __repr__(self):
        terms = ", ".join(f"z^{i} zeta^{j}" for (i, j) in sorted(self.coeffs))
        return f"SElem[{terms or '0'}]"

    def as_s(self):
        """The same element viewed in the full ring (z invertible)."""
        return SElem(self.coeffs, self.curve, s0=False) if self.s0 else self

    def as_s0(self):
        return SElem(self.coeffs, self.curve, s0=True)

    # -- arithmetic -----------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, SElem):
            return other
        if isinstance(other, EllFun):
            return SElem.from_ellfun(other, self.s0)
        return SElem.const(other, self.curve, self.s0)

    def __add__(self, other):
        other = self._coerce(other)
        out = dict(self.coeffs)
        for k, c in other.coeffs.items():
            out[k] = out[k] + c if k in out else c
        return SElem(out, self.curve, self.s0 and other.s0)

    __radd__ = __add__

    def __neg__(self):
        return SElem({k: -c for k, c in self.coeffs.items()},
                     self.curve, self.s0)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        other = self._coerce(other)
        out = {}
        for (i1, j1), c1 in self.coeffs.items():
            for (i2, j2), c2 in other.coeffs.items():
                k = (i1 + i2, j1 + j2)
                p = c1 * c2
                out[k] = out[k] + p if k in out else p
        return SElem(out, self.curve, self.s0 and other.s0)

    __rmul__ = __mul__

    def scale(self, c: EllFun):
        return SElem({k: v * c for k, v in self.coeffs.items()},
                     self.curve, self.s0)

    def mul_z(self, power: int):
        if self.s0 and power < 0 and any(i + power < 0 for (i, _) in self.coeffs):
            raise DomainViolation("z^-1 is not available in the subring")
        return SElem({(i + power, j): c for (i, j), c in self.coeffs.items()},
                     self.curve, self.s0)

    # -- coefficient views -------------------------------------------------

    def zeta_polys(self):
        """dict z-degree -> dense list of EllFun coefficients in zeta."""
        out = {}
        for (i, j), c in self.coeffs.items():
            row = out.setdefault(i, [])
            while len(row) <= j:
                row.append(EllFun.zero(self.curve))
            row[j] = c
        return out

    @staticmethod
    def from_zeta_polys(data, curve, s0=False):
        coeffs = {}
        for i, row in data.items():
            for j, c in enumerate(row):
                if not c.is_zero():
                    coeffs[(i, j)] = c
        return SElem(coeffs, curve, s0)


def s_arith(op, f: SElem, g: SElem) -> SElem:
    if op == "+":
        return f + g
    if op == "-":
        return f - g
    if op == "*":
        return f * g
    raise ValueError(f"unknown ring operation {op!r}")


def apply_phi(f: SElem) -> SElem:
    """The dilation endomorphism: z -> qz, zeta -> q*zeta + defect."""
    curve = f.curve
    q = curve.q
    fz = zeta_defect(curve, q)
    zq = (SElem.from_ellfun(fz, f.s0)
          + SElem.zeta(curve, s0=f.s0).scale(EllFun.const(q, curve)))
    powers = [SElem.one(curve, f.s0)]
    jmax = f.zeta_degree()
    for _ in range(max(jmax, 0)):
        powers.append(powers[-1] * zq)
    out = SElem.zero(curve, f.s0)
    for (i, j), c in f.coeffs.items():
        lead = phi_field(c).scale(curve.field.from_fraction(Fraction(q) ** i))
        out = out + powers[j].scale(lead).mul_z(i)
    return out


def apply_phi_inverse(g: SElem) -> SElem:
    """Inverse of the dilation endomorphism on its image.

    Triangular in the zeta degree; the field-level preimage can raise
    NotInPhiImage when the coefficient is not a dilate.
    """
    curve = g.curve
    q = curve.q
    residual = g
    out = SElem.zero(curve, g.s0)
    while not residual.is_zero():
        jtop = residual.zeta_degree()
        layer = {(i, j): c for (i, j), c in residual.coeffs.items() if j == jtop}
        piece = SElem.zero(curve, g.s0)
        for (i, j), c in layer.items():
            scalar = Fraction(q) ** (i + j)
            pre = phi_field_inverse(c.scale(
                curve.field.from_fraction(1 / scalar)))
            piece = piece + SElem.monomial(pre, i, j, g.s0)
        out = out + piece
        residual = residual - apply_phi(piece)
        if residual.zeta_degree() >= jtop and not residual.is_zero():
            raise NotInPhiImage("triangular elimination failed to descend")
    return out


def apply_partial(f: SElem) -> SElem:
    """d/dz with dz/dz = 1, d(zeta)/dz = -X, coefficients via the field."""
    curve = f.curve
    x = EllFun.X(curve)
    out = {}

    def add(key, val):
        if key in out:
            out[key] = out[key] + val
        else:
            out[key] = val

    for (i, j), c in f.coeffs.items():
        add((i, j), derive(c))
        if i != 0:
            add((i - 1, j), c * EllFun.const(i, curve))
        if j != 0:
            add((i, j - 1), -(c * EllFun.const(j, curve)) * x)
    # no z^-1 can appear: the i*z^(i-1) term vanishes at i = 0
    return SElem(out, curve, f.s0)


def apply_delta(f: SElem) -> SElem:
    """z d/dz; stays inside the subring without z^-1."""
    return apply_partial(f).mul_z(1)


def kernel_phi_minus_a(a, curve, domain="S"):
    """Basis of ker(phi - a) on the stated domain.

    On the full ring the kernel is spanned by z^r when a = q^r (r in Z),
    on the zeta-polynomial subring only a = 1 has kernel (the constants),
    and it is trivial otherwise.
    """
    frac = _as_fraction(a, curve)
    if domain == "KZ":
        if frac == 1:
            return [SElem.one(curve)]
        return []
    if domain not in ("S", "S0"):
        raise ValueError(f"unknown kernel domain {domain!r}")
    if frac is None:
        return []
    r = q_power_exponent(frac, curve.q)
    if r is None:
        return []
    if domain == "S0" and r < 0:
        return []
    return [SElem.z(curve, r, s0=(domain == "S0"))]


def q_power_exponent(a: Fraction, q: int):
    """r with a == q^r, else None."""
    if a <= 0:
        return None
    num, den = a.numerator, a.denominator
    if den == 1:
        r = 0
        while num % q == 0:
            num //= q
            r += 1
        return r if num == 1 else None
    if num == 1:
        r = 0
        while den % q == 0:
            den //= q
            r += 1
        return -r if den == 1 else None
    return None


def _as_fraction(a, curve):
    if isinstance(a, int):
        return Fraction(a)
    if isinstance(a, Fraction):
        return a
    return curve.field.rational_part(a)


def z_coefficients(f: SElem):
    """Exact decomposition [(i, g_i)] with g_i zeta-polynomials."""
    rows = {}
    for (i, j), c in f.coeffs.items():
        rows.setdefault(i, {})[(0, j)] = c
    return [(i, SElem(rows[i], f.curve, True)) for i in sorted(rows)]


def z_reassemble(parts, curve, s0=False):
    out = SElem.zero(curve, s0)
    for i, gi in parts:
        out = out + gi.as_s().mul_z(i)
    return out.as_s0() if s0 else out


def selem_exact_divide(num: SElem, f: SElem):
    """num / f when f divides num in the z/zeta ring (z a unit); else None.

    Layered division: in the zeta variable over z-polynomials, each step
    divides leading z-polynomial coefficients exactly.  Uniqueness of the
    division algorithm makes step failure a certificate of indivisibility.
    """
    curve = num.curve
    if f.is_zero():
        raise DivisionByZero("division by the zero element")
    if num.is_zero():
        return num
    if f.is_constant():
        return num.scale(f.coeffs[(0, 0)].inverse())
    nlo = min(i for (i, _) in num.coeffs)
    flo = min(i for (i, _) in f.coeffs)
    zdom = ellfun_domain(curve)

    def layered(g, lo):
        rows = {}
        for (i, j), c in g.coeffs.items():
            rows.setdefault(j, {})[i - lo] = c
        out = []
        for j in range(max(rows) + 1):
            row = rows.get(j, {})
            deg = max(row) if row else 0
            out.append(Poly([row.get(k, zdom.zero) for k in range(deg + 1)],
                            zdom))
        return out

    def trim(p):
        while p and p[-1].is_zero():
            p.pop()
        return p

    n_l = trim(layered(num, nlo))
    f_l = trim(layered(f, flo))
    flead = f_l[-1]
    df = len(f_l) - 1
    quot = {}
    while n_l:
        dn = len(n_l) - 1
        if dn < df:
            return None
        qz, rem = n_l[-1].divmod(flead)
        if not rem.is_zero():
            return None
        quot[dn - df] = qz
        for j in range(df + 1):
            k = dn - df + j
            n_l[k] = n_l[k] - f_l[j] * qz
        trim(n_l)
    out = SElem.zero(curve)
    shift = nlo - flo
    for j, zp in quot.items():
        for k in range(zp.degree + 1):
            c = zp.coeff(k)
            if not c.is_zero():
                out = out + SElem.monomial(c, k + shift, j)
    return out


class SFraction:
    """num over a lazily expanded product of denominator factors.

    Denominators in the matrix algebra only ever multiply, so they are kept
    as factor lists; cancellation happens by cheap exact division of the
    numerator by single factors rather than by full multivariate gcds.
    Fractions are therefore not canonical: equality goes through cross
    multiplication.
    """

    __slots__ = ("num", "factors", "_den")

    def __init__(self, num: SElem, den=None, factors=None, reduce=True):
        num = num.as_s()
        work = list(factors) if factors is not None else []
        if den is not None:
            if den.is_zero():
                raise DivisionByZero("fraction with zero denominator")
            if not den.is_constant() or not (
                    den.coeffs.get((0, 0)) == EllFun.one(num.curve)):
                work.append(den.as_s())
        self.num = num
        self.factors = work
        self._den = None
        if reduce:
            self._normalize()

    def _normalize(self):
        curve = self.num.curve
        if self.num.is_zero():
            self.factors = []
            self._den = None
            return
        out = []
        num = self.num
        for f in self.factors:
            if f.is_zero():
                raise DivisionByZero("fraction with zero denominator factor")
            if f.is_constant():
                num = num.scale(f.coeffs[(0, 0)].inverse())
                continue
            # push z-monomial units out of the factor
            flo = min(i for (i, _) in f.coeffs)
            if flo:
                f = f.mul_z(-flo)
                num = num.mul_z(-flo)
            q = selem_exact_divide(num, f)
            if q is not None:
                num = q
            else:
                out.append(f)
        self.num = num
        self.factors = out
        self._den = None

    # -- constructors ------------------------------------------------------

    @staticmethod
    def from_selem(f: SElem):
        return SFraction(f, reduce=False)

    @staticmethod
    def zero(curve):
        return SFraction(SElem.zero(curve), reduce=False)

    @staticmethod
    def one(curve):
        return SFraction(SElem.one(curve), reduce=False)

    # -- structure ------------------------------------------------------------

    @property
    def curve(self):
        return self.num.curve

    @property
    def den(self) -> SElem:
        if self._den is None:
            d = SElem.one(self.curve)
            for f in self.factors:
                d = d * f
            self._den = d
        return self._den

    def is_zero(self):
        return self.num.is_zero()

    def __bool__(self):
        return bool(self.num)

    def size(self):
        return self.num.size() + sum(f.size() for f in self.factors)

    def __eq__(self, other):
        if not isinstance(other, SFraction):
            return NotImplemented
        a, b = _strip_common(self.factors, other.factors)
        lhs = self.num
        for f in b:
            lhs = lhs * f
        rhs = other.num
        for f in a:
            rhs = rhs * f
        return lhs == rhs

    def __hash__(self):
        raise TypeError("fractions are not canonical; do not hash")

    def __repr__(self):
        return f"SFraction({self.num!r} / {self.factors!r})"

    # -- arithmetic --------------------------------------------------------------

    def _coerce(self, other):
        if isinstance(other, SFraction):
            return other
        if isinstance(other, SElem):
            return SFraction.from_selem(other)
        return SFraction.from_selem(SElem.const(other, self.curve))

    def __add__(self, other):
        other = self._coerce(other)
        mine, theirs = _strip_common(self.factors, other.factors)
        shared = _multiset_diff(self.factors, mine)
        lhs = self.num
        for f in theirs:
            lhs = lhs * f
        rhs = other.num
        for f in mine:
            rhs = rhs * f
        return SFraction(lhs + rhs, factors=shared + mine + theirs)

    __radd__ = __add__

    def __neg__(self):
        return SFraction(-self.num, factors=self.factors, reduce=False)

    def __sub__(self, other):
        return self + (-self._coerce(other))

    def __rsub__(self, other):
        return self._coerce(other) + (-self)

    def __mul__(self, other):
        if not isinstance(other, (SFraction, SElem)):
            other = self._coerce(other)
        if isinstance(other, SElem):
            return SFraction(self.num * other, factors=self.factors)
        return SFraction(self.num * other.num,
                         factors=self.factors + other.factors)

    __rmul__ = __mul__

    def __truediv__(self, other):
        other = self._coerce(other)
        return self * other.inverse()

    def inverse(self):
        if self.is_zero():
            raise DivisionByZero("inverse of zero fraction")
        return SFraction(self.den, factors=[self.num])

    def phi(self):
        return SFraction(apply_phi(self.num),
                         factors=[apply_phi(f) for f in self.factors])

    def partial(self):
        # d(n / f1...fk) = [dn * prod - n * sum df_i * prod/f_i] / prod^2
        n = self.num
        parts = _cofactor_products(self.factors, self.curve)
        total = apply_partial(n) * self.den
        for f, cof in zip(self.factors, parts):
            total = total - n * (apply_partial(f) * cof)
        return SFraction(total, factors=self.factors + self.factors)

    def delta(self):
        p = self.partial()
        return SFraction(p.num.mul_z(1), factors=p.factors, reduce=False)

    def reduce_full(self):
        """Small fractions get the canonical zeta/z gcd treatment."""
        if self.size() <= _GCD_SIZE_LIMIT:
            num, den = _reduce_pair(self.num, self.den)
            return SFraction(num, den)
        return self


def _strip_common(fa, fb):
    """Remove the shared multiset of factors from both lists."""
    rb = list(fb)
    ra = []
    for f in fa:
        try:
            rb.remove(f)
        except ValueError:
            ra.append(f)
    return ra, rb


def _multiset_diff(full, sub):
    out = list(full)
    for f in sub:
        out.remove(f)
    return out


def _cofactor_products(factors, curve):
    """prod of all factors except the i-th, for each i."""
    n = len(factors)
    if n == 0:
        return []
    prefix = [SElem.one(curve)]
    for f in factors[:-1]:
        prefix.append(prefix[-1] * f)
    suffix = [SElem.one(curve)]
    for f in reversed(factors[1:]):
        suffix.append(suffix[-1] * f)
    suffix.reverse()
    return [prefix[i] * suffix[i] for i in range(n)]


_GCD_SIZE_LIMIT = 60


def _reduce_pair(num: SElem, den: SElem):
    """Cheap content reduction always; polynomial gcd only at small sizes.

    Fractions are not fully canonical (equality goes through cross
    multiplication), so skipping the structural gcd on large operands is
    sound; it only trades memory for the cost of nested-field Euclid runs.
    """
    num, den = _content_reduce(num, den)
    if (num.is_zero() or den.is_constant()
            or num.size() + den.size() > _GCD_SIZE_LIMIT):
        return num, den
    pair = _poly_gcd_pair(num, den)
    if pair is not None:
        num, den = _content_reduce(*pair)
    return num, den


def _content_reduce(num: SElem, den: SElem):
    curve = num.curve
    if num.is_zero():
        return SElem.zero(curve), SElem.one(curve)
    # z is a unit: push all z-monomial content of the denominator into num
    dlo = min(i for (i, _) in den.coeffs)
    if dlo:
        num = num.mul_z(-dlo)
        den = den.mul_z(-dlo)
    # scalar normalisation, only when it cannot inflate the entries
    lead = den.coeffs[max(den.coeffs)]
    if not (lead == EllFun.one(curve)) and (
            len(den.coeffs) == 1 or lead.size() <= 12):
        inv = lead.inverse()
        num = num.scale(inv)
        den = den.scale(inv)
    return num, den


@lru_cache(maxsize=None)
def _kz_domain(curve):
    """Rational functions of z over the elliptic field, as a poly domain."""
    return RatFunDomain(ellfun_domain(curve), name="K(z)")


def _to_zeta_poly(f: SElem):
    """(Poly in zeta over K(z), z-shift applied) for gcd computations."""
    curve = f.curve
    zdom = ellfun_domain(curve)
    kz = _kz_domain(curve)
    lo = min((i for (i, _) in f.coeffs), default=0)
    shift = -min(0, lo)
    rows = {}
    for (i, j), c in f.coeffs.items():
        rows.setdefault(j, {})[i + shift] = c
    coeffs = []
    for j in range(max(rows) + 1 if rows else 0):
        row = rows.get(j, {})
        if row:
            deg = max(row)
            zp = Poly([row.get(k, zdom.zero) for k in range(deg + 1)], zdom)
            coeffs.append(RatFun.from_poly(zp))
        else:
            coeffs.append(kz.zero)
    return Poly(coeffs, kz), shift


def _z_lcm(polys, zdom):
    turn = Poly.const(zdom.one, zdom)
    for c in polys:
        turn = (turn * c.den) // poly_gcd(turn, c.den)
    return turn


def _from_zeta_poly(p: Poly, curve, turn, zshift=0):
    """Rebuild a ring element from a zeta-poly, clearing with ``turn``."""
    out = SElem.zero(curve)
    for j, c in enumerate(p.c):
        zp = c.num * (turn // c.den)
        for k in range(zp.degree + 1):
            ck = zp.coeff(k)
            if not ck.is_zero():
                out = out + SElem.monomial(ck, k - zshift, j)
    return out


def _poly_gcd_pair(num: SElem, den: SElem):
    """Divide out a common zeta-polynomial factor when one exists."""
    try:
        pn, sn = _to_zeta_poly(num)
        pd, sd = _to_zeta_poly(den)
        g = poly_gcd(pn, pd)
        if g.degree < 1:
            return None
        qn, rn = pn.divmod(g)
        qd, rd = pd.divmod(g)
        if not rn.is_zero() or not rd.is_zero():
            return None
        # one shared clearing factor keeps the fraction value unchanged
        zdom = ellfun_domain(num.curve)
        turn = _z_lcm(list(qn.c) + list(qd.c), zdom)
        num2 = _from_zeta_poly(qn, num.curve, turn, sn)
        den2 = _from_zeta_poly(qd, num.curve, turn, sd)
        return num2, den2
    except (ZeroDivisionError, DivisionByZero):
        return None


@dataclass
class InS:
    """A linear dependence certificate: sum a_i phi^i(f) = 0 over the field."""
    order: int
    witness: list

    def __bool__(self):
        return True


@dataclass
class Inconclusive:
    bound: int

    def __bool__(self):
        return False


def s_membership_test(fr: SFraction, curve, bound: int):
    """Semi-decidable membership in the ring via dilate span dimension.

    Searches for an exact field-linear dependence among phi^i(fr) for
    i <= m, m growing to the bound; a dependence certifies membership,
    exhaustion is honestly Inconclusive.
    """
    if bound < 1:
        raise ValueError("bound must be >= 1")
    iterates = [fr]
    for m in range(1, bound + 1):
        iterates.append(iterates[-1].phi())
        # common denominator product and cleared numerators
        terms = []
        for i in range(m + 1):
            t = iterates[i].num
            for k in range(m + 1):
                if k != i:
                    t = t * iterates[k].den
            terms.append(t)
        monomials = sorted({k for t in terms for k in t.coeffs})
        rows = [[t.coeffs.get(mon, EllFun.zero(curve)) for t in terms]
                for mon in monomials]
        basis = nullspace(rows, m + 1, EllFun.zero(curve), EllFun.one(curve),
                          complexity=lambda e: e.size())
        if basis:
            return InS(order=m, witness=basis[0])
    return Inconclusive(bound=bound)


def eval_selem(f: SElem, lattice, z0, env=None):
    """Numeric value of a ring element at z0 (shadow checks)."""
    from . import numerics
    digits = lattice.precision
    with mpmath.workdps(digits + 10):
        z0 = mpmath.mpc(z0)
        _, _, zt = numerics.wp_eval(lattice, z0)
        acc = mpmath.mpc(0)
        for (i, j), c in f.coeffs.items():
            acc += eval_numeric(c, lattice, z0, env) * z0 ** i * zt ** j
        return acc
