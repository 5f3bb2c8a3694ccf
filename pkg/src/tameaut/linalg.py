"""Exact Gaussian elimination over Q or F_p (raw field values, lists of lists)."""

from __future__ import annotations

from .coeffs import FieldSpec
from .errors import SingularSystem


def rref(field: FieldSpec, rows):
    """Reduced row echelon form; returns (matrix, pivot columns)."""
    m = [[field.coerce(v) for v in row] for row in rows]
    if not m:
        return m, []
    ncols = len(m[0])
    pivots = []
    r = 0
    for c in range(ncols):
        piv = next((i for i in range(r, len(m)) if m[i][c]), None)
        if piv is None:
            continue
        m[r], m[piv] = m[piv], m[r]
        inv = field.inv(m[r][c])
        m[r] = [field.reduce(v * inv) for v in m[r]]
        for i in range(len(m)):
            if i != r and m[i][c]:
                f = m[i][c]
                m[i] = [field.reduce(a - f * b) for a, b in zip(m[i], m[r])]
        pivots.append(c)
        r += 1
        if r == len(m):
            break
    return m, pivots


def nullspace(field: FieldSpec, rows, ncols=None):
    """Basis of {v : A v = 0}."""
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    red, pivots = rref(field, rows)
    free = [c for c in range(ncols) if c not in pivots]
    basis = []
    for fc in free:
        v = [0] * ncols
        v[fc] = 1
        for r, pc in enumerate(pivots):
            v[pc] = field.neg(red[r][fc])
        basis.append(v)
    return basis


def solve(field: FieldSpec, rows, rhs):
    """One solution of A v = b (free variables set to 0).

    Raises SingularSystem carrying the kernel of A^T restricted to the
    inconsistency (a left-null vector certifying it) when no solution exists.
    """
    ncols = len(rows[0]) if rows else 0
    aug = [list(row) + [b] for row, b in zip(rows, rhs)]
    red, pivots = rref(field, aug)
    if ncols in pivots:
        raise SingularSystem("inconsistent linear system", kernel=nullspace(field, rows, ncols))
    x = [0] * ncols
    for r, pc in enumerate(pivots):
        x[pc] = red[r][ncols]
    return x


def matmul(field: FieldSpec, a, b):
    return [[field.reduce(sum(a[i][k] * b[k][j] for k in range(len(b))))
             for j in range(len(b[0]))] for i in range(len(a))]


def identity(n: int):
    return [[1 if i == j else 0 for j in range(n)] for i in range(n)]


def inverse(field: FieldSpec, a):
    n = len(a)
    aug = [list(a[i]) + identity(n)[i] for i in range(n)]
    red, pivots = rref(field, aug)
    if pivots[:n] != list(range(n)):
        raise SingularSystem("singular matrix", kernel=nullspace(field, a, n))
    return [row[n:] for row in red]


def det(field: FieldSpec, a):
    m = [[field.coerce(v) for v in row] for row in a]
    n = len(m)
    d = 1
    for c in range(n):
        piv = next((i for i in range(c, n) if m[i][c]), None)
        if piv is None:
            return 0
        if piv != c:
            m[c], m[piv] = m[piv], m[c]
            d = -d
        d = field.reduce(d * m[c][c])
        inv = field.inv(m[c][c])
        for i in range(c + 1, n):
            if m[i][c]:
                f = field.reduce(m[i][c] * inv)
                m[i] = [field.reduce(x - f * y) for x, y in zip(m[i], m[c])]
    return field.reduce(d)
