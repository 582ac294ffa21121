"""Dense exact linear algebra over rationals and :class:`~q2.scalars.Scalar` rings.

Matrices are lists of rows.  Entries may mix ``Fraction`` and ``Scalar``
values from one context; division goes through ``Scalar.inverse`` and so
raises :class:`~q2.scalars.ZeroDivisor` on a non-unit pivot.
"""

from __future__ import annotations

from fractions import Fraction

from . import kernels as _kernels

ZERO = Fraction(0)
ONE = Fraction(1)


def zeros(r: int, c: int):
    return [[ZERO] * c for _ in range(r)]


def identity(n: int):
    return [[ONE if i == j else ZERO for j in range(n)] for i in range(n)]


def shape(a, cols_if_empty: int = 0):
    return (len(a), len(a[0]) if a else cols_if_empty)


def matmul(a, b, ncols: int | None = None):
    """``a @ b``; ``ncols`` sizes the result when ``b`` has no rows."""
    if not a:
        return []
    if not b:
        if ncols is None:
            raise ValueError("ncols required for a product through a zero-dimensional space")
        return zeros(len(a), ncols)
    return _kernels.matmul(a, b)


def matvec(a, v):
    return [_kernels.dot(row, v) for row in a]


def add(a, b):
    return [[x + y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def sub(a, b):
    return [[x - y for x, y in zip(ra, rb)] for ra, rb in zip(a, b)]


def scale(a, s):
    return [[s * x for x in row] for row in a]


def transpose(a, rows_if_empty: int = 0):
    if not a:
        return [[] for _ in range(rows_if_empty)]
    return [list(col) for col in zip(*a)]


def is_zero(a) -> bool:
    return all(not x for row in a for x in row)


def rref(a):
    """Reduced row echelon form: returns ``(rows, pivot_columns)``."""
    return _kernels.rref([list(r) for r in a])


def rank(a) -> int:
    return len(rref(a)[1])


def nullspace(a, ncols: int | None = None):
    """Basis of ``{x : a x = 0}``; vectors normalized at their free variable."""
    n = len(a[0]) if a else (ncols or 0)
    rows, piv = rref(a)
    free = [j for j in range(n) if j not in set(piv)]
    basis = []
    for f in free:
        v = [ZERO] * n
        v[f] = ONE
        for r, p in zip(rows, piv):
            v[p] = -r[f]
        basis.append(v)
    return basis


def column_space(vectors):
    """Echelon basis of the span of ``vectors`` (given as a list of vectors)."""
    rows, piv = rref(vectors)
    return rows, piv


def inverse(a):
    n = len(a)
    aug = [list(row) + [ONE if i == j else ZERO for j in range(n)] for i, row in enumerate(a)]
    rows, piv = rref(aug)
    if piv[:n] != list(range(n)) or len(piv) < n:
        return None
    return [row[n:] for row in rows[:n]]


def solve_in_span(basis_rows, v):
    """Coordinates of ``v`` in the span of ``basis_rows``, or ``None``."""
    if not basis_rows:
        return [] if all(not x for x in v) else None
    m = transpose(basis_rows)
    aug = [row + [x] for row, x in zip(m, v)]
    rows, piv = rref(aug)
    k = len(basis_rows)
    if k in piv:
        return None
    coords = [ZERO] * k
    for r, p in zip(rows, piv):
        coords[p] = r[k]
    return coords


def charpoly(a):
    """Characteristic polynomial coefficients ``[c_0, ..., c_n]`` (monic, Faddeev-LeVerrier)."""
    n = len(a)
    coeffs = [ZERO] * (n + 1)
    coeffs[n] = ONE
    m = zeros(n, n)
    for k in range(1, n + 1):
        am = matmul(a, m) if k > 1 else zeros(n, n)
        m = [[am[i][j] + (coeffs[n - k + 1] if i == j else ZERO) for j in range(n)] for i in range(n)]
        am = matmul(a, m)
        tr = sum((am[i][i] for i in range(n)), ZERO)
        coeffs[n - k] = -tr / k
    return coeffs


def mat_power(a, k: int):
    n = len(a)
    out = identity(n)
    for _ in range(k):
        out = matmul(out, a)
    return out


def shift_diag(a, s):
    return [[x - s if i == j else x for j, x in enumerate(row)] for i, row in enumerate(a)]


def generalized_kernel(a, value):
    """Basis of the generalized ``value``-eigenspace of a square matrix."""
    n = len(a)
    if n == 0:
        return []
    b = shift_diag(a, value)
    return nullspace(mat_power(b, n))


def block_diag(blocks):
    n = sum(len(b) for b in blocks)
    out = zeros(n, n)
    off = 0
    for b in blocks:
        for i, row in enumerate(b):
            for j, x in enumerate(row):
                out[off + i][off + j] = x
        off += len(b)
    return out
