"""Exact linear algebra over any field whose elements support + - * / and
truthiness.  Used with Fraction entries (divisor systems), elliptic function
entries (membership tests) and S-fraction entries (matrix systems)."""

from __future__ import annotations

from .errors import DivisionByZero, SingularGauge


def _is_zero(x):
    return not x


def row_echelon(rows, width, complexity=None):
    """In-place fraction Gauss elimination.  Returns list of pivot columns.

    ``rows`` is a list of dense lists of field elements (length ``width``).
    ``complexity`` optionally ranks pivot candidates (smaller preferred) to
    keep entry growth down for structured fields.
    """
    pivots = []
    r = 0
    for c in range(width):
        cand = [i for i in range(r, len(rows)) if not _is_zero(rows[i][c])]
        if not cand:
            continue
        if complexity is not None and len(cand) > 1:
            cand.sort(key=lambda i: complexity(rows[i][c]))
        i = cand[0]
        rows[r], rows[i] = rows[i], rows[r]
        piv = rows[r][c]
        for j in range(len(rows)):
            if j == r or _is_zero(rows[j][c]):
                continue
            f = rows[j][c] / piv
            rowj, rowr = rows[j], rows[r]
            for k in range(c, width):
                rowj[k] = rowj[k] - f * rowr[k]
        pivots.append(c)
        r += 1
        if r == len(rows):
            break
    return pivots


def nullspace(rows, width, zero, one, complexity=None):
    """Basis of the right nullspace of the matrix given by ``rows``."""
    work = [list(row) for row in rows]
    pivots = row_echelon(work, width, complexity)
    pivot_set = set(pivots)
    free = [c for c in range(width) if c not in pivot_set]
    basis = []
    for fc in free:
        vec = [zero] * width
        vec[fc] = one
        for r, pc in enumerate(pivots):
            # back-substitute: pivot row r reads  piv*x_pc + sum(...) = 0
            s = work[r][fc]
            if not _is_zero(s):
                vec[pc] = zero - s / work[r][pc]
        basis.append(vec)
    return basis


def solve_dense(rows, rhs, width, zero, complexity=None):
    """Solve A x = b.  Returns a solution vector or None if inconsistent.

    Underdetermined systems get free variables set to zero.
    """
    work = [list(row) + [b] for row, b in zip(rows, rhs)]
    pivots = row_echelon(work, width + 1, complexity)
    if width in pivots:
        return None  # a row reduced to (0 ... 0 | nonzero)
    # row_echelon clears each pivot column above and below, so with free
    # variables pinned at zero each pivot row determines its variable.
    sol = [zero] * width
    for r, pc in enumerate(pivots):
        sol[pc] = work[r][width] / work[r][pc]
    return sol


def mat_mul(a, b, zero):
    n, m = len(a), len(b[0])
    inner = len(b)
    return [[_dot(a[i], [b[k][j] for k in range(inner)], zero)
             for j in range(m)] for i in range(n)]


def _dot(u, v, zero):
    acc = zero
    for x, y in zip(u, v):
        if not _is_zero(x) and not _is_zero(y):
            acc = acc + x * y
    return acc


def mat_inverse(a, zero, one, complexity=None):
    """Inverse by Gauss-Jordan; raises SingularGauge when not invertible."""
    n = len(a)
    work = [list(row) + [one if i == j else zero for j in range(n)]
            for i, row in enumerate(a)]
    r = 0
    for c in range(n):
        cand = [i for i in range(r, n) if not _is_zero(work[i][c])]
        if not cand:
            raise SingularGauge("matrix is singular")
        if complexity is not None and len(cand) > 1:
            cand.sort(key=lambda i: complexity(work[i][c]))
        i = cand[0]
        work[r], work[i] = work[i], work[r]
        piv = work[r][c]
        work[r] = [x / piv for x in work[r]]
        for j in range(n):
            if j != r and not _is_zero(work[j][c]):
                f = work[j][c]
                work[j] = [xj - f * xr for xj, xr in zip(work[j], work[r])]
        r += 1
    return [row[n:] for row in work]


def mat_det(a, zero, one):
    """Determinant by fraction Gaussian elimination."""
    n = len(a)
    work = [list(row) for row in a]
    det = one
    for c in range(n):
        piv_row = None
        for i in range(c, n):
            if not _is_zero(work[i][c]):
                piv_row = i
                break
        if piv_row is None:
            return zero
        if piv_row != c:
            work[c], work[piv_row] = work[piv_row], work[c]
            det = zero - det
        piv = work[c][c]
        det = det * piv
        for i in range(c + 1, n):
            if _is_zero(work[i][c]):
                continue
            f = work[i][c] / piv
            for j in range(c, n):
                work[i][j] = work[i][j] - f * work[c][j]
    return det
