"""Transfer of derivation relations into pure dilation relations.

Given ring elements satisfying (delta - c)(g) = (phi - a)(f) + p with exact
scalars a, c and a z-polynomial p, this module produces u and a normalised
z-monomial remainder with g = (phi - a)(u) + remainder.  The engine works
one z-degree at a time: equating z^i coefficients turns the hypothesis into
a ladder of relations

    d/dz(g_{i-1}) + (i - c) g_i = (q^i phi - a)(f_i) + p_i

over the zeta-polynomial ring, each solved by an induction on the zeta
degree whose base step integrates an elliptic function into the shape
u + r*zeta + s*z.  Branches the hypothesis provably excludes raise
ImpossibleCase: reaching one means the input lied or arithmetic broke.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction

from .ellfun import EllFun, derive, phi_field, zeta_defect
from .errors import HypothesisViolated, ImpossibleCase
from .integration import PrimitiveResult, elliptic_primitive
from .sring import SElem, apply_delta, apply_phi


# -- zeta-polynomial layer ----------------------------------------------------
# A ZPoly is a plain list of EllFun coefficients, ascending in zeta.

def zp_trim(p):
    while p and p[-1].is_zero():
        p.pop()
    return p


def zp_zero():
    return []


def zp_deg(p):
    return len(p) - 1


def zp_is_zero(p):
    return not p


def zp_add(p, r):
    out = list(p) if len(p) >= len(r) else list(r)
    small = r if len(p) >= len(r) else p
    for k, c in enumerate(small):
        out[k] = out[k] + c
    return zp_trim(out)


def zp_neg(p):
    return [-c for c in p]


def zp_sub(p, r):
    return zp_add(p, zp_neg(r))


def zp_scale(p, c: EllFun):
    return zp_trim([x * c for x in p])


def zp_partial(p, curve):
    """d/dz with d(zeta)/dz = -X."""
    x = EllFun.X(curve)
    out = [EllFun.zero(curve)] * max(len(p), 1)
    for j, c in enumerate(p):
        out[j] = out[j] + derive(c)
        if j:
            out[j - 1] = out[j - 1] - c.scale(curve.field.from_int(j)) * x
    return zp_trim(out)


def zp_phi(p, curve):
    """phi(sum f_j zeta^j) = sum phi(f_j) (q zeta + defect)^j."""
    q = curve.q
    fz = zeta_defect(curve, q)
    qc = EllFun.const(q, curve)
    out = []
    # powers of (q zeta + defect)
    pw = [EllFun.one(curve)]
    for j, c in enumerate(p):
        if j:
            new = [EllFun.zero(curve)] * (len(pw) + 1)
            for k, w in enumerate(pw):
                new[k] = new[k] + w * fz
                new[k + 1] = new[k + 1] + w * qc
            pw = new
        if c.is_zero():
            continue
        fc = phi_field(c)
        need = len(pw)
        while len(out) < need:
            out.append(EllFun.zero(curve))
        for k, w in enumerate(pw):
            out[k] = out[k] + fc * w
    return zp_trim(out)


def zp_phi_op(p, curve, alpha, a):
    """(alpha*phi - a)(p) with exact scalars alpha, a."""
    lhs = zp_scale(zp_phi(p, curve), EllFun.const(alpha, curve))
    rhs = zp_scale(p, EllFun.const(a, curve))
    return zp_sub(lhs, rhs)


def zp_from_selem(g: SElem):
    rows = g.zeta_polys()
    return {i: zp_trim(list(row)) for i, row in rows.items() if zp_trim(list(row))}


def zp_to_selem(rows, curve, s0=True):
    coeffs = {}
    for i, p in rows.items():
        for j, c in enumerate(p):
            if not c.is_zero():
                coeffs[(i, j)] = c
    return SElem(coeffs, curve, s0)


# -- scalar helpers -----------------------------------------------------------

def _scal(curve, x):
    if isinstance(x, (int, Fraction)):
        return curve.field.from_fraction(Fraction(x))
    return x


def _qpow(curve, k: int):
    return curve.field.from_fraction(Fraction(curve.q) ** k)


def leading_analysis(f, a, curve):
    """Classify (phi - a)(f) for a zeta-polynomial f: the generic case keeps
    the degree, constants can die at a = 1, and a constant leading
    coefficient with a = q^d drops the degree by exactly one.

    Returns (case, degree, leading) with case in {"generic", "kills",
    "drops"}.
    """
    if zp_is_zero(f):
        raise ValueError("f must be nonzero")
    a = _scal(curve, a)
    d = zp_deg(f)
    fd = f[d]
    s = curve.field
    if not (fd.is_constant() and a == _qpow(curve, d)):
        lead = phi_field(fd).scale(_qpow(curve, d)) - fd.scale(a)
        return "generic", d, lead
    if d == 0:
        return "kills", -1, EllFun.zero(curve)
    fz = zeta_defect(curve, curve.q)
    fd1 = f[d - 1] if d - 1 < len(f) else EllFun.zero(curve)
    lead = (fz.scale(fd.constant_value() * s.from_int(d) * _qpow(curve, d - 1))
            + (phi_field(fd1) - fd1.scale(_scal(curve, curve.q))).scale(
                _qpow(curve, d - 1)))
    return "drops", d - 1, lead


# -- the zeta-degree induction ------------------------------------------------

BRANCH_BASE = "base-integrate"
BRANCH_BASE_IMPOSSIBLE = "base-shift-impossible"
BRANCH_CONST_LEAD = "const-lead"
BRANCH_CONST_LEAD_IMPOSSIBLE = "const-lead-impossible"
BRANCH_LEAD_GENERIC = "lead-generic"
BRANCH_LEAD_SHIFT1 = "lead-shift1"
BRANCH_LEAD_SHIFT2 = "lead-shift2"
BRANCH_LEAD_SHIFT2_IMPOSSIBLE = "lead-shift2-impossible"

ALL_REACHABLE_BRANCHES = {
    BRANCH_BASE, BRANCH_CONST_LEAD, BRANCH_LEAD_GENERIC,
    BRANCH_LEAD_SHIFT1, BRANCH_LEAD_SHIFT2,
}


def solve_derivative_relation(g, f, a, gamma, curve, level=0, branches=None,
                              verify=True):
    """Solve g = (q^level phi - a)(u) + beta given
    d/dz(g) = (q^(level+1) phi - a)(f) + gamma on zeta-polynomials.

    beta comes back zero whenever a != q^level (it is swallowed into u).
    """
    a = _scal(curve, a)
    gamma = _scal(curve, gamma)
    if level:
        # divide the operator through by q^level: with a' = a/q^level,
        # (q^(l+1) phi - a)(f) = (q phi - a')(q^l f) and
        # (q^l phi - a)(u'/q^l) = (phi - a')(u'), the constant unchanged
        scale = _qpow(curve, level)
        u, beta = _solve_unit(g, zp_scale(f, EllFun.const(scale, curve)),
                              a / scale, gamma, curve, branches, verify)
        inv = curve.field.one / scale
        return zp_scale(u, EllFun.const(inv, curve)), beta
    return _solve_unit(g, f, a, gamma, curve, branches, verify)


def _solve_unit(g, f, a, gamma, curve, branches, verify):
    """g' = (q phi - a)(f) + gamma  ==>  g = (phi - a)(u) + beta."""
    s = curve.field
    if branches is None:
        branches = set()
    if verify:
        lhs = zp_partial(g, curve)
        rhs = zp_add(zp_phi_op(f, curve, _scal(curve, curve.q), a),
                     [] if not gamma else [EllFun.const(gamma, curve)])
        if not zp_is_zero(zp_sub(lhs, rhs)):
            raise HypothesisViolated("derivative relation residual != 0")
    if zp_is_zero(g):
        return zp_zero(), s.zero
    ell = zp_deg(g)
    q1 = _qpow(curve, 1)
    if ell == 0:
        d = zp_deg(f)
        if d >= 1:
            if d == 1 and a == _qpow(curve, 2) and f[1].is_constant():
                branches.add(BRANCH_BASE_IMPOSSIBLE)
                raise ImpossibleCase(
                    "elliptic target with a degree-one dilation source")
            raise HypothesisViolated("source degree too large at base")
        branches.add(BRANCH_BASE)
        f0 = f[0] if f else EllFun.zero(curve)
        prim = elliptic_primitive(f0, curve)
        if not isinstance(prim, PrimitiveResult):
            raise ImpossibleCase("residue obstruction in a forced primitive")
        # g = (phi - a)(v + r*zeta) + [s_w (q - a) + gamma] z + beta
        zcoef = prim.s * (q1 - a) + gamma
        if zcoef != s.zero:
            raise ImpossibleCase("non-elliptic remainder at the base step")
        cand = zp_phi_op([prim.u, EllFun.const(prim.r, curve)], curve,
                         s.one, a)
        rest = zp_sub(g, cand)
        if not zp_is_zero(rest) and (zp_deg(rest) > 0 or not rest[0].is_constant()):
            raise ImpossibleCase("base reconstruction is not a constant")
        beta = rest[0].constant_value() if rest else s.zero
        u = [prim.u, EllFun.const(prim.r, curve)]
        if a != s.one and beta != s.zero:
            # swallow the constant: (phi - a)(b/(1-a)) = b
            u = zp_add(u, [EllFun.const(beta / (s.one - a), curve)])
            beta = s.zero
        return zp_trim(u), beta
    # induction step
    gl = g[ell]
    if gl.is_constant():
        if a == _qpow(curve, ell):
            branches.add(BRANCH_CONST_LEAD_IMPOSSIBLE)
            raise ImpossibleCase("constant lead at the resonant scalar")
        branches.add(BRANCH_CONST_LEAD)
        v = [EllFun.zero(curve)] * ell + [
            gl.scale(s.one / (_qpow(curve, ell) - a))]
        g2 = zp_sub(g, zp_phi_op(v, curve, s.one, a))
        if not zp_deg(g2) < ell:
            raise AssertionError("leading elimination failed")
        f2 = zp_sub(f, zp_partial(v, curve))
        u2, beta = _solve_unit(g2, f2, a, gamma, curve, branches, False)
        return zp_add(u2, v), beta
    # non-constant leading coefficient
    aq1 = a == _qpow(curve, ell + 1)
    aq2 = a == _qpow(curve, ell + 2)
    d = zp_deg(f)
    if d == ell + 1 and aq2 and f[d].is_constant():
        branches.add(BRANCH_LEAD_SHIFT2_IMPOSSIBLE)
        raise ImpossibleCase("overshooting source degree at the double shift")
    if d != ell:
        raise HypothesisViolated(f"source degree {d} incompatible with {ell}")
    if aq1:
        branches.add(BRANCH_LEAD_SHIFT1)
    elif aq2:
        branches.add(BRANCH_LEAD_SHIFT2)
    else:
        branches.add(BRANCH_LEAD_GENERIC)
    prim = elliptic_primitive(f[ell], curve)
    if not isinstance(prim, PrimitiveResult):
        raise ImpossibleCase("residue obstruction in a forced primitive")
    shift = _qpow(curve, ell + 1) - a
    if prim.r * shift != s.zero and not aq1:
        raise ImpossibleCase("quasi-periodic term survives the lead step")
    if prim.s * shift != s.zero:
        raise ImpossibleCase("linear term survives the lead step")
    fz = zeta_defect(curve, curve.q)
    # g_l = (q^l phi - a)(v) + q^l r fz + alpha with alpha constant
    lst = zp_phi_op([prim.u], curve, _qpow(curve, ell), a)
    recon = lst[0] if lst else EllFun.zero(curve)
    alpha_fun = gl - recon - fz.scale(prim.r * _qpow(curve, ell))
    if not alpha_fun.is_constant():
        raise ImpossibleCase("lead reconstruction is not a constant")
    # correction V = v zeta^l + (r/(l+1)) zeta^(l+1) kills the lead exactly,
    # leaving at most the constant alpha at degree l for the recursion
    v = [EllFun.zero(curve)] * ell + [
        prim.u, EllFun.const(prim.r / s.from_int(ell + 1), curve)]
    v = zp_trim(v)
    g2 = zp_sub(g, zp_phi_op(v, curve, s.one, a))
    if zp_deg(g2) >= ell and not (zp_deg(g2) == ell and g2[ell].is_constant()):
        raise AssertionError("lead elimination failed")
    f2 = zp_sub(f, zp_partial(v, curve))
    u2, beta = _solve_unit(g2, f2, a, gamma, curve, branches, False)
    return zp_add(u2, v), beta


# -- the z-degree ladder -------------------------------------------------------

@dataclass
class TransferInstance:
    """Inputs g, f (no z^-1), exact scalars a, c, and a z-polynomial p with
    (delta - c)(g) = (phi - a)(f) + p; the residual is checked exactly."""
    g: SElem
    f: SElem
    a: object
    c: object
    p: dict
    curve: object = None

    def __post_init__(self):
        self.curve = self.curve or self.g.curve
        self.a = _scal(self.curve, self.a)
        self.c = _scal(self.curve, self.c)
        self.p = {int(i): _scal(self.curve, v) for i, v in self.p.items()
                  if _scal(self.curve, v) != self.curve.field.zero}
        for elem in (self.g, self.f):
            lo, _ = elem.z_degrees()
            if lo < 0:
                raise HypothesisViolated("inputs must avoid z^-1")
        if any(i < 0 for i in self.p):
            raise HypothesisViolated("remainder polynomial must avoid z^-1")
        if not self.residual().is_zero():
            raise HypothesisViolated("instance residual is nonzero")

    def residual(self) -> SElem:
        curve = self.curve
        lhs = apply_delta(self.g) - self.g.scale(EllFun.const(self.c, curve))
        rhs = apply_phi(self.f) - self.f.scale(EllFun.const(self.a, curve))
        for i, v in self.p.items():
            rhs = rhs + SElem.monomial(EllFun.const(v, curve), i, 0)
        return lhs - rhs


@dataclass
class TransferSolution:
    u: SElem
    remainder: dict           # z-degree -> scalar; canonical monomial or zero
    branches: set = field(default_factory=set)

    def remainder_monomial(self):
        """(d, r) when the remainder is d*z^r, else None for zero."""
        if not self.remainder:
            return None
        (r, d), = self.remainder.items()
        return d, r


def solve_delta_relation(inst: TransferInstance) -> TransferSolution:
    """The z-degree descending ladder; returns u with
    g = (phi - a)(u) + remainder and the remainder normalised to d*z^r
    (a = q^r) or zero."""
    curve = inst.curve
    s = curve.field
    grows = zp_from_selem(inst.g)
    frows = zp_from_selem(inst.f)
    m = max(list(grows) + list(frows) + [deg for deg in inst.p] + [0])
    branches = set()
    u_rows = {}
    betas = {}
    # seed at z-degree M via the i = M+1 relation: d/dz(g_M) = 0
    u_prev = zp_zero()
    beta_prev = s.zero
    for i in range(m + 1, 0, -1):
        gi = grows.get(i - 1, zp_zero())
        fi = frows.get(i, zp_zero())
        pi = inst.p.get(i, s.zero)
        # d/dz(g_{i-1}) = (q^i phi - a)(f_i - (i - c) u_{i}) + p_i - (i-c) beta_i
        coef = s.from_int(i) - inst.c
        fsrc = zp_sub(fi, zp_scale(u_prev, EllFun.const(coef, curve)))
        gamma = pi - coef * beta_prev
        u_i, beta_i = solve_derivative_relation(
            gi, fsrc, inst.a, gamma, curve, level=i - 1, branches=branches,
            verify=False)
        if u_i:
            u_rows[i - 1] = u_i
        if beta_i != s.zero:
            betas[i - 1] = beta_i
        u_prev, beta_prev = u_i, beta_i
    # normalise the remainder: swallow beta_i z^i whenever q^i != a
    remainder = {}
    for i, b in betas.items():
        qi = _qpow(curve, i)
        if qi == inst.a:
            remainder[i] = b
        else:
            u_rows[i] = zp_add(u_rows.get(i, zp_zero()),
                               [EllFun.const(b / (qi - inst.a), curve)])
    u = zp_to_selem(u_rows, curve, s0=True)
    sol = TransferSolution(u=u, remainder=remainder, branches=branches)
    _check_solution(inst, sol)
    return sol


def _check_solution(inst: TransferInstance, sol: TransferSolution):
    curve = inst.curve
    recon = apply_phi(sol.u) - sol.u.scale(EllFun.const(inst.a, curve))
    for i, v in sol.remainder.items():
        recon = recon + SElem.monomial(EllFun.const(v, curve), i, 0)
    if not (inst.g - recon).is_zero():
        raise AssertionError("transfer solution failed its defining identity")


def solve_operator_relation(b: SElem, f: SElem, a, roots, curve=None):
    """Iterate the ladder along a monic operator in the Euler derivation.

    ``roots`` lists the exact factor constants (c_1, ..., c_k) of the
    operator (delta - c_k) o ... o (delta - c_1); given
    operator(b) = (phi - a)(f), returns (h, remainder, branches) with
    b = (phi - a)(h) + remainder.
    """
    curve = curve or b.curve
    s = curve.field
    a = _scal(curve, a)
    roots = [_scal(curve, c) for c in roots]
    prefixes = [b]
    for c in roots[:-1]:
        prev = prefixes[-1]
        prefixes.append(apply_delta(prev) - prev.scale(EllFun.const(c, curve)))
    # check the full relation
    top = prefixes[-1]
    full = apply_delta(top) - top.scale(EllFun.const(roots[-1], curve))
    rhs = apply_phi(f) - f.scale(EllFun.const(a, curve))
    if not (full - rhs).is_zero():
        raise HypothesisViolated("operator relation residual is nonzero")
    branches = set()
    cur_f = f
    cur_p = {}
    for j in range(len(roots) - 1, -1, -1):
        inst = TransferInstance(g=prefixes[j], f=cur_f, a=a, c=roots[j],
                                p=cur_p, curve=curve)
        sol = solve_delta_relation(inst)
        branches |= sol.branches
        cur_f = sol.u
        cur_p = dict(sol.remainder)
    return cur_f, cur_p, branches
