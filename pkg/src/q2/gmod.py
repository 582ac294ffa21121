"""gl(2) weight modules: Verma and simple highest weight modules, dense
modules, tensor products with finite-dimensional simples, translation, and
composition factors on a window.
"""

from __future__ import annotations

from collections import Counter
from fractions import Fraction

from . import linalg
from .modules import SHIFT, WeightModule, quotient_module, restrict_window, subspace_module
from .scalars import ALPHA, Scalar, Weight, rational_sqrt, to_fraction

__all__ = [
    "NotDense",
    "EmptyProjection",
    "Inconclusive",
    "gl2_verma",
    "gl2_simple",
    "gl2_dense",
    "gl2_finite",
    "tensor_finite",
    "translate",
    "casimir_matrix",
    "casimir_spectrum",
    "composition_factors",
    "factor_casimirs",
]


class NotDense(ValueError):
    pass


class EmptyProjection(ValueError):
    pass


class Inconclusive(RuntimeError):
    pass


def _diag(x, n=1):
    return [[x if i == j else Fraction(0) for j in range(n)] for i in range(n)]


def _one_dim_module(base, kmin, kmax, e_coef, f_coef, closed_top=False, closed_bottom=False, provenance=None):
    """gl2 module with one basis vector per weight; ``e_coef(k)`` and ``f_coef(k)``
    give the action of E and F on the vector at index ``k``."""
    dims = {k: (1, 0) for k in range(kmin, kmax + 1)}
    actions = {}
    for k in range(kmin, kmax + 1):
        w = base + ALPHA * k
        actions["H1", k] = _diag(w.l1)
        actions["H2", k] = _diag(w.l2)
        if k + 1 <= kmax:
            actions["E", k] = [[e_coef(k)]]
        if k - 1 >= kmin:
            actions["F", k] = [[f_coef(k)]]
    return WeightModule(
        algebra="gl2",
        base=base,
        kmin=kmin,
        kmax=kmax,
        dims=dims,
        actions=actions,
        closed_top=closed_top,
        closed_bottom=closed_bottom,
        labels={k: [f"x{-k}" if closed_top else f"x{k}"] for k in range(kmin, kmax + 1)},
        provenance=provenance or {},
    )


def gl2_verma(lam: Weight, depth: int) -> WeightModule:
    """Verma module with basis ``x_j = F^j x_0`` at weights ``lam - j*alpha``."""
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    delta = lam.diff

    def e(k):
        j = -k
        return j * (delta - j + 1)

    return _one_dim_module(
        lam, -depth, 0, e, lambda k: Fraction(1), closed_top=True,
        provenance={"kind": "verma", "algebra": "gl2", "lambda": str(lam), "depth": depth},
    )


def gl2_simple(lam: Weight, depth: int) -> WeightModule:
    """Simple quotient of the Verma module (finite-dimensional iff ``lam1 - lam2`` in N0)."""
    m = lam.diff
    verma = gl2_verma(lam, depth)
    if m.denominator != 1 or m < 0:
        verma.provenance["kind"] = "simple"
        return verma
    m = int(m)
    if depth <= m:
        out = verma
    else:
        out = restrict_window(verma, -m, 0)
        out = out.replace(closed_bottom=True)
    out.provenance = {"kind": "simple", "algebra": "gl2", "lambda": str(lam), "depth": depth}
    return out


def gl2_finite(d: int, shift=0) -> WeightModule:
    """The ``d``-dimensional simple module with ``H1 + H2`` acting by ``shift``."""
    shift = to_fraction(shift)
    top = Weight((shift + d - 1) / 2, (shift - d + 1) / 2)
    return gl2_simple(top, d - 1)


def _dense_zero_k(casimir, coset):
    """Integers ``k`` with ``casimir = (coset + 2k - 1)^2``."""
    if isinstance(casimir, Scalar):
        return []
    r = rational_sqrt(to_fraction(casimir))
    if r is None:
        return []
    out = []
    for root in {r, -r}:
        k = (root - coset + 1) / 2
        if k.denominator == 1:
            out.append(int(k))
    return sorted(out)


def gl2_dense(charge, casimir, coset, window: int) -> WeightModule:
    """Dense module: ``H1 - H2`` acts by ``coset + 2k`` on ``x_k``, ``E x_k = x_{k+1}``."""
    charge, coset = to_fraction(charge), to_fraction(coset)
    if not isinstance(casimir, Scalar):
        casimir = to_fraction(casimir)
    bad = _dense_zero_k(casimir, coset)
    if bad:
        raise NotDense(f"F x_k vanishes at k = {bad[0]}: the module has a singular vector")
    base = Weight((charge + coset) / 2, (charge - coset) / 2)

    def f(k):
        return (casimir - (coset + 2 * k - 1) ** 2) / 4

    return _one_dim_module(
        base, -window, window, lambda k: Fraction(1), f,
        provenance={"kind": "dense", "charge": str(charge), "casimir": str(casimir), "coset": str(coset), "window": window},
    )


def tensor_finite(m: WeightModule, d: int, shift=0) -> WeightModule:
    """``m`` tensored with the ``d``-dimensional simple module of charge ``shift``."""
    if d < 1:
        raise ValueError("d must be at least 1")
    if m.algebra != "gl2":
        raise ValueError("tensor_finite expects a gl2 module")
    shift = to_fraction(shift)
    w0 = Weight((shift + d - 1) / 2, (shift - d + 1) / 2)
    base = m.base + w0
    kmin = m.kmin - (d - 1) if m.closed_bottom else m.kmin
    kmax = m.kmax if m.closed_top else m.kmax - (d - 1)
    if kmin > kmax:
        raise ValueError("window too small for the tensor product")

    def blocks(k):
        out, off = [], 0
        for j in range(d):
            n = m.dim(k + j)
            out.append((j, off, n))
            off += n
        return out, off

    dims = {}
    layout = {}
    for k in range(kmin, kmax + 1):
        bl, n = blocks(k)
        layout[k] = bl
        dims[k] = (n, 0)
    actions = {}
    for k in range(kmin, kmax + 1):
        n = dims[k][0]
        w = m.weight(k)
        # Cartan: diagonal by weight of v plus weight of w_j
        h1, h2 = linalg.zeros(n, n), linalg.zeros(n, n)
        for j, off, nb in layout[k]:
            wj = w0 - ALPHA * j
            a1, a2 = m.action("H1", k + j), m.action("H2", k + j)
            for i in range(nb):
                for ii in range(nb):
                    h1[off + i][off + ii] = a1[i][ii] + (wj.l1 if i == ii else 0)
                    h2[off + i][off + ii] = a2[i][ii] + (wj.l2 if i == ii else 0)
        actions["H1", k], actions["H2", k] = h1, h2
        for g in ("E", "F"):
            t = k + SHIFT[g]
            if not (kmin <= t <= kmax):
                continue
            nt = dims[t][0]
            mat = linalg.zeros(nt, n)
            tl = {j: (off, nb) for j, off, nb in layout[t]}
            ok = True
            for j, off, nb in layout[k]:
                a = m.action(g, k + j)
                if a is None:
                    ok = False
                    break
                toff, tnb = tl[j]
                for r in range(tnb):
                    for c in range(nb):
                        mat[toff + r][off + c] = a[r][c]
                # action on the finite factor
                if g == "E" and j >= 1:
                    coef = j * (d - j)
                    toff2, tnb2 = tl[j - 1]
                    for c in range(nb):
                        mat[toff2 + c][off + c] = mat[toff2 + c][off + c] + coef
                if g == "F" and j + 1 < d:
                    toff2, tnb2 = tl[j + 1]
                    for c in range(nb):
                        mat[toff2 + c][off + c] = mat[toff2 + c][off + c] + 1
            actions[g, k] = mat if ok else None
    return WeightModule(
        algebra="gl2",
        base=base,
        kmin=kmin,
        kmax=kmax,
        dims=dims,
        actions=actions,
        closed_top=m.closed_top,
        closed_bottom=m.closed_bottom,
        ctx=m.ctx,
        provenance={"kind": "tensor", "d": d, "shift": str(shift), "of": m.provenance.get("kind")},
    )


def casimir_matrix(m: WeightModule, k: int):
    """Matrix of ``(H1-H2+1)^2 + 4FE`` on the ``k`` space (via ``EF`` at an open top)."""
    h = m.weight(k).diff
    n = m.dim(k)
    e, f_up = m.action("E", k), m.action("F", k + 1)
    if e is not None and f_up is not None:
        p = linalg.matmul(f_up, e, n)
        const = (h + 1) ** 2
    else:
        f, e_dn = m.action("F", k), m.action("E", k - 1)
        if f is None or e_dn is None:
            return None
        p = linalg.matmul(e_dn, f, n)
        const = (h - 1) ** 2
    return [[4 * p[i][j] + (const if i == j else 0) for j in range(n)] for i in range(n)]


def _rational_roots(coeffs):
    """Rational roots of a polynomial with coefficients ``[c0, ..., cn]``."""
    if any(isinstance(c, Scalar) for c in coeffs):
        raise Inconclusive("Casimir characteristic polynomial has irrational coefficients")
    import sympy

    x = sympy.Symbol("x")
    poly = sympy.Poly([sympy.Rational(c.numerator, c.denominator) for c in reversed(coeffs)], x, domain="QQ")
    roots = []
    _, factors = poly.factor_list()
    for fac, _mult in factors:
        if fac.degree() == 1:
            a, b = fac.all_coeffs()
            r = -b / a
            roots.append(Fraction(int(r.p), int(r.q)))
        else:
            raise Inconclusive(f"Casimir has a non-rational eigenvalue (factor {fac.as_expr()})")
    return sorted(set(roots))


def casimir_spectrum(m: WeightModule, ks=None):
    """Distinct Casimir eigenvalues over the given weight indices."""
    vals = set()
    for k in ks if ks is not None else m.interior():
        c = casimir_matrix(m, k)
        if c is None or not c:
            continue
        vals.update(_rational_roots(linalg.charpoly(c)))
    return sorted(vals)


def translate(m: WeightModule, target) -> WeightModule:
    """Generalized ``target``-eigenspace of the Casimir on ``m`` tensor the 3-dimensional module."""
    t = tensor_finite(m, 3, 0)
    bases = {}
    total = 0
    for k in t.krange():
        c = casimir_matrix(t, k)
        if c is None:
            bases[k] = []
            continue
        ker = linalg.generalized_kernel(c, target)
        bases[k] = ker
        total += len(ker)
    if total == 0:
        raise EmptyProjection(f"Casimir eigenvalue {target} does not occur")
    out = subspace_module(t, bases)
    out.provenance = {"kind": "translate", "target": str(target), "of": m.provenance.get("kind")}
    return out


# -- composition factors --------------------------------------------------------


def _vec_nonzero(v):
    return any(bool(x) for x in v)


def _generalized_submodule(m, value, ks):
    bases = {}
    for k in ks:
        c = casimir_matrix(m, k)
        bases[k] = linalg.generalized_kernel(c, value) if c else []
    return subspace_module(m, bases)


def _peel(q: WeightModule, value, charge):
    factors = []
    guard = 0
    while q.total_dim() > 0:
        guard += 1
        if guard > 10_000:
            raise Inconclusive("peeling did not terminate")
        k0, v = None, None
        for k in reversed(list(q.krange())):
            if not q.dim(k):
                continue
            c = casimir_matrix(q, k)
            if c is None:
                continue
            ker = linalg.nullspace(linalg.shift_diag(c, value))
            if ker:
                k0, v = k, ker[0]
                break
        if k0 is None:
            raise Inconclusive("no Casimir eigenvector found")
        u = {k0: v}
        k = k0
        while k + 1 <= q.kmax:
            a = q.action("E", k)
            if a is None:
                break
            w = linalg.matvec(a, u[k])
            if not _vec_nonzero(w):
                break
            u[k + 1] = w
            k += 1
        k = k0
        while k - 1 >= q.kmin:
            a = q.action("F", k)
            if a is None:
                break
            w = linalg.matvec(a, u[k])
            if not _vec_nonzero(w):
                break
            u[k - 1] = w
            k -= 1
        lo, hi = min(u), max(u)

        def e_edge(k):
            a = q.action("E", k)
            return k + 1 <= hi and a is not None and _vec_nonzero(linalg.matvec(a, u[k]))

        def f_edge(k):
            a = q.action("F", k)
            return k - 1 >= lo and a is not None and _vec_nonzero(linalg.matvec(a, u[k]))

        # strongly connected segments of the path graph
        segments = []
        start = lo
        for k in range(lo, hi):
            if not (e_edge(k) and f_edge(k + 1)):
                segments.append((start, k))
                start = k + 1
        segments.append((start, hi))
        idx = next(i for i, (a, b) in enumerate(segments) if a <= k0 <= b)
        while True:
            a, b = segments[idx]
            if e_edge(b) and idx + 1 < len(segments):
                idx += 1
            elif f_edge(a) and idx > 0:
                idx -= 1
            else:
                break
        a, b = segments[idx]
        e_top = q.action("E", b)
        f_bot = q.action("F", a)
        top_closed = e_top is not None and not _vec_nonzero(linalg.matvec(e_top, u[b]))
        bottom_closed = f_bot is not None and not _vec_nonzero(linalg.matvec(f_bot, u[a]))
        if top_closed and bottom_closed:
            kind = "finite"
        elif top_closed:
            kind = "highest"
        elif bottom_closed:
            kind = "lowest"
        else:
            kind = "dense"
        factors.append(
            {
                "charge": charge,
                "casimir": value,
                "kind": kind,
                "top": str(q.weight(b)) if top_closed else None,
                "bottom": str(q.weight(a)) if bottom_closed else None,
                "dim": b - a + 1 if kind == "finite" else None,
                "support": (a, b),
            }
        )
        q = quotient_module(q, {k: [u[k]] for k in range(a, b + 1)})
    return factors


def _factors_on(m: WeightModule, ks):
    sub = restrict_window(m, ks[0], ks[-1])
    charge = m.weight(ks[0]).charge
    out = []
    for value in casimir_spectrum(sub, list(sub.krange())):
        g = _generalized_submodule(sub, value, list(sub.krange()))
        out.extend(_peel(g, value, charge))
    return out


def _label(f):
    return (
        ("charge", str(f["charge"])),
        ("casimir", str(f["casimir"])),
        ("kind", f["kind"]),
        ("top", f["top"]),
        ("bottom", f["bottom"]),
        ("dim", f["dim"]),
    )


def composition_factors(m: WeightModule, window: int | None = None):
    """Composition factors of a gl2 module on its interior window.

    Returns ``[(label, multiplicity), ...]`` with labels built from the charge,
    the Casimir eigenvalue and the shape of the factor on the window.  The
    computation is repeated on a window shrunk by one weight at each open
    side; :class:`Inconclusive` is raised if the two disagree.
    """
    if m.algebra != "gl2":
        raise ValueError("composition_factors expects a gl2 module")
    ks = list(m.interior())
    if window is not None and len(ks) > window:
        mid = len(ks) // 2
        ks = ks[max(0, mid - window // 2) : max(0, mid - window // 2) + window]
    if len(ks) < 3 and not (m.closed_top and m.closed_bottom):
        raise Inconclusive("window too small")
    full = Counter(_label(f) for f in _factors_on(m, ks))
    lo = ks[0] if (m.closed_bottom and ks[0] == m.kmin) else ks[0] + 1
    hi = ks[-1] if (m.closed_top and ks[-1] == m.kmax) else ks[-1] - 1
    small = Counter(_label(f) for f in _factors_on(m, list(range(lo, hi + 1))))
    if sum(full.values()) != sum(small.values()):
        raise Inconclusive(f"factor count changed with the window: {sum(small.values())} -> {sum(full.values())}")
    return sorted(((dict(l), c) for l, c in full.items()), key=lambda t: tuple(str(x) for x in t[0].values()))


def factor_casimirs(factors):
    """Multiset of Casimir values, expanded by multiplicity and sorted."""
    out = []
    for label, mult in factors:
        out.extend([Fraction(label["casimir"])] * mult)
    return sorted(out)
