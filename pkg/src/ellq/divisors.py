"""Lattice-periodic divisor calculus on torsion points.

Divisors are finite rational-valued maps on (Q/Z)^2 coordinates.  The
dilation action reads the value at q*P, so its "pullback" has support on the
q-division preimages.  The heart of the module solves (phi - 1)(D) = E with
finite support: the support of any solution lies in the forward closure of
supp(E) (values propagate unchanged down any dilation-free backward chain,
so a nonzero value outside the closure forces infinite support), which makes
the problem a finite linear system over the closure; cycle telescoping plus
zero pins at points with preimages outside the closure solve it, and the
candidate is verified exactly on a saturated neighbourhood before returning.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import lcm

from .errors import NonIntegralValues, NonzeroDegree, SupportTooLarge
from .lattice import TorsionPoint, ZERO_POINT
from .linalg import solve_dense


class PeriodicDivisor:
    """Finite map TorsionPoint -> Fraction; zero values are dropped."""

    __slots__ = ("entries",)

    def __init__(self, entries=None):
        d = {}
        for p, v in (entries or {}).items():
            v = Fraction(v)
            if v:
                d[p] = v
        self.entries = d

    @staticmethod
    def single(point, value=1):
        return PeriodicDivisor({point: Fraction(value)})

    @staticmethod
    def zero():
        return PeriodicDivisor({})

    def support(self):
        return set(self.entries)

    def value(self, point):
        return self.entries.get(point, Fraction(0))

    def is_zero(self):
        return not self.entries

    def is_integral(self):
        return all(v.denominator == 1 for v in self.entries.values())

    def __eq__(self, other):
        if not isinstance(other, PeriodicDivisor):
            return NotImplemented
        return self.entries == other.entries

    def __hash__(self):
        return hash(frozenset(self.entries.items()))

    def __add__(self, other):
        d = dict(self.entries)
        for p, v in other.entries.items():
            d[p] = d.get(p, Fraction(0)) + v
        return PeriodicDivisor(d)

    def __neg__(self):
        return PeriodicDivisor({p: -v for p, v in self.entries.items()})

    def __sub__(self, other):
        return self + (-other)

    def scale(self, s):
        return PeriodicDivisor({p: v * Fraction(s)
                                for p, v in self.entries.items()})

    def __repr__(self):
        terms = " + ".join(f"{v}[{p}]" for p, v in sorted(
            self.entries.items(), key=lambda kv: (kv[0].r1, kv[0].r2)))
        return f"PeriodicDivisor({terms or '0'})"


def degree(d: PeriodicDivisor) -> Fraction:
    return sum(d.entries.values(), Fraction(0))


def abel_jacobi(d: PeriodicDivisor, lattice_scale: int = 1) -> TorsionPoint:
    """The weighted point sum, optionally relative to the scaled sublattice.

    With scale m > 1 the divisor must be integral of degree zero; the result
    is m^2 * sum(n_P * P) read in coordinates of the index-m^2 sublattice,
    i.e. (m * s1 mod 1, m * s2 mod 1) for s_i the plain coordinate sums over
    canonical representatives.
    """
    if lattice_scale == 1:
        s1 = sum((v * p.r1 for p, v in d.entries.items()), Fraction(0))
        s2 = sum((v * p.r2 for p, v in d.entries.items()), Fraction(0))
        return TorsionPoint(s1, s2)
    if not d.is_integral():
        raise NonIntegralValues("scaled point sums need integer values")
    if degree(d) != 0:
        raise NonzeroDegree("scaled point sums need degree zero")
    m = int(lattice_scale)
    s1 = sum((v * p.r1 for p, v in d.entries.items()), Fraction(0))
    s2 = sum((v * p.r2 for p, v in d.entries.items()), Fraction(0))
    return TorsionPoint(m * s1, m * s2)


def phi_pullback(d: PeriodicDivisor, q: int) -> PeriodicDivisor:
    """The dilation action: value at P is d(q*P); support q-divides."""
    out = {}
    for p, v in d.entries.items():
        for pre in p.preimages(q):
            out[pre] = out.get(pre, Fraction(0)) + v
    return PeriodicDivisor(out)


def is_principal(d: PeriodicDivisor) -> bool:
    """Degree zero and vanishing point sum (integer values required)."""
    if not d.is_integral():
        raise NonIntegralValues("principality is defined for integer values")
    return degree(d) == 0 and abel_jacobi(d).is_zero()


@dataclass
class Solution:
    divisor: PeriodicDivisor


@dataclass
class NoSolution:
    reason: str
    certificate: dict

    def __bool__(self):
        return False


def _forward_closure(points, q):
    seen = set(points)
    frontier = list(points)
    while frontier:
        p = frontier.pop()
        nxt = p.image(q)
        if nxt not in seen:
            seen.add(nxt)
            frontier.append(nxt)
    return seen


def solve_phi_minus_one(e: PeriodicDivisor, q: int):
    """The unique finitely supported D with D(qP) - D(P) = E(P), if any.

    Works on the forward closure W of supp(E): any solution vanishes off W.
    Each weak component of the orbit graph carries one cycle, along which E
    must telescope to zero, and one free additive constant; every point of W
    with a dilation preimage outside W pins the solution to zero there, and
    a counting argument guarantees at least one pin per component.  The
    candidate is verified exactly on W union its preimage layer before it is
    returned, so a wrong pin or a missed constraint surfaces as NoSolution
    rather than a bad answer.
    """
    if e.is_zero():
        return Solution(PeriodicDivisor.zero())
    w = _forward_closure(e.support(), q)
    order_key = lambda p: (p.r1, p.r2)
    comp_root = {}
    cycles = {}
    for start in sorted(w, key=order_key):
        if start in comp_root:
            continue
        path = []
        seen_at = {}
        p = start
        while p not in seen_at and p not in comp_root:
            seen_at[p] = len(path)
            path.append(p)
            p = p.image(q)
        if p in comp_root:
            root = comp_root[p]
        else:
            cycle = path[seen_at[p]:]
            root = cycle[0]
            cycles[root] = cycle
        for pt in path:
            comp_root[pt] = root
    # telescoped offsets relative to each component's cycle root
    offsets = {}
    for root, cycle in cycles.items():
        offsets[root] = Fraction(0)
        for p in cycle[:-1]:
            offsets[p.image(q)] = offsets[p] + e.value(p)
        closing = offsets[cycle[-1]] + e.value(cycle[-1])
        if closing != 0:
            return NoSolution("cycle-sum", {
                "cycle": [[str(p.r1), str(p.r2)] for p in cycle],
                "sum": str(closing)})
    for start in w:
        stack = []
        p = start
        while p not in offsets:
            stack.append(p)
            p = p.image(q)
        while stack:
            p = stack.pop()
            offsets[p] = offsets[p.image(q)] - e.value(p)
    # pins: points fed from outside the closure must vanish
    pin = {}
    for p in sorted(w, key=order_key):
        if any(pre not in w for pre in p.preimages(q)):
            root = comp_root[p]
            req = -offsets[p]
            if root in pin and pin[root] != req:
                return NoSolution("boundary", {
                    "point": [str(p.r1), str(p.r2)],
                    "conflict": [str(pin[root]), str(req)]})
            pin[root] = req
    for root in cycles:
        if root not in pin:  # impossible: q^2 |W| preimages vs |W| edges
            raise AssertionError("orbit component without boundary pin")
    values = {p: pin[comp_root[p]] + offsets[p] for p in w}
    d = PeriodicDivisor(values)
    # exact verification on the saturated neighbourhood
    check = set(w) | d.support()
    check |= {pre for p in check for pre in p.preimages(q)}
    for p in check:
        if d.value(p.image(q)) - d.value(p) != e.value(p):
            return NoSolution("boundary", {
                "point": [str(p.r1), str(p.r2)],
                "lhs": str(d.value(p.image(q)) - d.value(p)),
                "rhs": str(e.value(p))})
    return Solution(d)


def brute_force_solve(e: PeriodicDivisor, q: int, n: int, k_max: int = 1):
    """Independent oracle: dense exact solve over full torsion grids.

    Unknowns are divisor values on the (n*q^k)-torsion grid; equations are
    D(qP) - D(P) = E(P) for every P on the (n*q^(k+1))-grid.  Inconsistency
    at every level up to k_max certifies NoSolution for supports inside the
    largest grid tried.
    """
    for p in e.support():
        if n % p.order_denominator() != 0:
            raise SupportTooLarge(f"support point {p} is not {n}-torsion")
    last_cert = None
    for k in range(k_max + 1):
        grid_n = n * q ** k
        pts = [TorsionPoint(Fraction(i, grid_n), Fraction(j, grid_n))
               for i in range(grid_n) for j in range(grid_n)]
        index = {p: c for c, p in enumerate(pts)}
        eq_n = grid_n * q
        rows = []
        rhs = []
        for i in range(eq_n):
            for j in range(eq_n):
                p = TorsionPoint(Fraction(i, eq_n), Fraction(j, eq_n))
                row = {}
                img = p.image(q)
                if img in index:
                    row[index[img]] = row.get(index[img], Fraction(0)) + 1
                if p in index:
                    row[index[p]] = row.get(index[p], Fraction(0)) - 1
                b = e.value(p)
                if row or b:
                    rows.append(row)
                    rhs.append(b)
        sol = _solve_sparse(rows, rhs, len(pts))
        if sol is None:
            last_cert = {"grid": grid_n}
            continue
        d = PeriodicDivisor({pts[c]: v for c, v in sol.items()})
        return Solution(d)
    return NoSolution("inconsistent-grid", last_cert or {})


def _solve_sparse(rows, rhs, width):
    """Sparse exact elimination over dict-rows; None if inconsistent.

    Each incoming row is reduced against the pivot rows seen so far, then
    becomes a pivot itself; back-substitution walks the pivots in reverse,
    free variables at zero.
    """
    pivots = {}          # column -> (reduced row, rhs)
    pivot_order = []
    pivot_rank = {}
    for raw, b in zip(rows, rhs):
        row = {c: Fraction(v) for c, v in raw.items() if v}
        b = Fraction(b)
        while True:
            hit = [c for c in row if c in pivots]
            if not hit:
                break
            c = min(hit, key=pivot_rank.__getitem__)
            prow, pb = pivots[c]
            f = row[c] / prow[c]
            for cc, v in prow.items():
                nv = row.get(cc, Fraction(0)) - f * v
                if nv:
                    row[cc] = nv
                else:
                    row.pop(cc, None)
            b = b - f * pb
        if not row:
            if b != 0:
                return None
            continue
        c = min(row)
        pivots[c] = (row, b)
        pivot_rank[c] = len(pivot_order)
        pivot_order.append(c)
    sol = {}
    for c in reversed(pivot_order):
        row, b = pivots[c]
        acc = b
        for cc, v in row.items():
            if cc != c:
                acc -= v * sol.get(cc, Fraction(0))
        sol[c] = acc / row[c]
    return {c: v for c, v in sol.items() if v}


def torsion_lcm(d: PeriodicDivisor) -> int:
    return lcm(1, *(p.order_denominator() for p in d.entries)) if d.entries else 1
