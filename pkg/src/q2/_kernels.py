"""Inner loops shared by the linear algebra and module code.

This file is plain Python.  The build also compiles it with Cython into
``q2._ckernels``; :mod:`q2.kernels` picks whichever is available.
"""

from fractions import Fraction

_ZERO = Fraction(0)
_ONE = Fraction(1)


def dot(row, v):
    acc = _ZERO
    for x, y in zip(row, v):
        if x and y:
            acc = acc + x * y
    return acc


def matmul(a, b):
    ncols = len(b[0])
    inner = len(b)
    out = []
    for row in a:
        acc = [_ZERO] * ncols
        for k in range(inner):
            x = row[k]
            if not x:
                continue
            brow = b[k]
            for j in range(ncols):
                y = brow[j]
                if y:
                    acc[j] = acc[j] + x * y
        out.append(acc)
    return out


def _pivot_cost(x):
    # rationals are cheapest to divide by
    terms = getattr(x, "terms", None)
    return 0 if terms is None else len(terms)


def rref(rows):
    """In-place reduced row echelon form; returns ``(nonzero_rows, pivots)``."""
    nrows = len(rows)
    if not nrows:
        return [], []
    ncols = len(rows[0])
    pivots = []
    r = 0
    for c in range(ncols):
        if r >= nrows:
            break
        best = -1
        best_cost = 1 << 30
        for i in range(r, nrows):
            x = rows[i][c]
            if x:
                cost = _pivot_cost(x)
                if cost < best_cost:
                    best, best_cost = i, cost
                    if cost == 0:
                        break
        if best < 0:
            continue
        rows[r], rows[best] = rows[best], rows[r]
        prow = rows[r]
        inv = _ONE / prow[c]
        if inv != 1:
            prow = [x * inv if x else x for x in prow]
            rows[r] = prow
        nz = [j for j in range(c, ncols) if prow[j]]
        for i in range(nrows):
            if i == r:
                continue
            row = rows[i]
            f = row[c]
            if not f:
                continue
            for j in nz:
                row[j] = row[j] - f * prow[j]
        pivots.append(c)
        r += 1
    return rows[:r], pivots


def sparse_reduce(row, pivots):
    """Reduce a sparse row (dict col -> value) against echelon pivot rows."""
    while True:
        hit = -1
        for j in row:
            if j in pivots and (hit < 0 or j < hit):
                hit = j
        if hit < 0:
            return row
        f = row[hit]
        prow = pivots[hit]
        for j, v in prow.items():
            s = row.get(j, _ZERO) - f * v
            if s:
                row[j] = s
            else:
                row.pop(j, None)


def sparse_insert(row, pivots):
    """Add a row to a sparse echelon system; returns True if the rank grew."""
    row = sparse_reduce(dict(row), pivots)
    if not row:
        return False
    c = min(row)
    inv = _ONE / row[c]
    pivots[c] = {j: v * inv for j, v in row.items()}
    return True


def sparse_nullspace(pivots, n):
    """Nullspace basis of an echelon system over ``n`` unknowns."""
    free = [j for j in range(n) if j not in pivots]
    order = sorted(pivots, reverse=True)
    basis = []
    for f in free:
        x = {f: _ONE}
        for p in order:
            acc = _ZERO
            for j, v in pivots[p].items():
                if j != p:
                    xj = x.get(j)
                    if xj:
                        acc = acc + v * xj
            if acc:
                x[p] = -acc
        basis.append([x.get(j, _ZERO) for j in range(n)])
    return basis
