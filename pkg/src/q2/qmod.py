"""q(2)-supermodules: Clifford modules over the Cartan subsuperalgebra,
Verma supermodules and their simple tops, induction from and restriction to
gl(2), annihilation tests and simplicity checks on a window.
"""

from __future__ import annotations

import itertools
from fractions import Fraction

from . import linalg
from .gmod import Inconclusive, composition_factors
from .modules import (
    SHIFT,
    Intertwiner,
    WeightModule,
    intertwiners,
    is_intertwiner,
    parity_flip,
    quotient_module,
    subspace_module,
)
from .scalars import Scalar, Weight, make_scalar_context
from .superalg import (
    GENERATORS,
    ODD_FIRST_ORDER,
    PARITY,
    TRIANGULAR_ORDER,
    SuperElement,
    engine,
    gen_index,
)

__all__ = [
    "clifford",
    "verma_super",
    "radical",
    "simple_top",
    "highest_weight_simple",
    "induce",
    "restrict",
    "intertwiners",
    "is_intertwiner",
    "Intertwiner",
    "parity_flip",
    "composition_factors",
    "annihilates",
    "annihilation_check",
    "is_simple_on_window",
    "singular_vectors",
    "Inconclusive",
]

_F, _H1, _H2, _E, _BF, _BH1, _BH2, _BE = range(8)


def clifford(lam: Weight, parity_flip_: bool = False, couple_roots: bool = True) -> WeightModule:
    """The simple Cartan supermodule ``V(lam)`` (or its parity flip).

    ``V(0)`` is the trivial module; otherwise the basis is ``v`` (even) and
    ``v'`` (odd) with ``bH1 v = sqrt(l1) v'``, ``bH2 v = -i sqrt(l2) v'``,
    ``bH1 v' = sqrt(l1) v``, ``bH2 v' = i sqrt(l2) v``.
    """
    ctx = make_scalar_context(lam, couple_roots=couple_roots)
    zero = Fraction(0)
    if lam.is_zero():
        dims = {0: (1, 0)}
        actions = {("H1", 0): [[zero]], ("H2", 0): [[zero]], ("bH1", 0): [[zero]], ("bH2", 0): [[zero]]}
        labels = {0: ["v"]}
    else:
        s1, s2, i = ctx.sqrt1(), ctx.sqrt2(), ctx.i()
        dims = {0: (1, 1)}
        actions = {
            ("H1", 0): [[lam.l1, zero], [zero, lam.l1]],
            ("H2", 0): [[lam.l2, zero], [zero, lam.l2]],
            ("bH1", 0): [[zero, s1], [s1, zero]],
            ("bH2", 0): [[zero, i * s2], [-(i * s2), zero]],
        }
        actions = {key: [[_demote(x) for x in row] for row in m] for key, m in actions.items()}
        labels = {0: ["v", "v'"]}
    mod = WeightModule(
        algebra="h",
        base=lam,
        kmin=0,
        kmax=0,
        dims=dims,
        actions=actions,
        closed_top=True,
        closed_bottom=True,
        ctx=ctx,
        labels=labels,
        provenance={"kind": "clifford", "lambda": str(lam)},
    )
    return parity_flip(mod) if parity_flip_ else mod


def _demote(x):
    if isinstance(x, Scalar) and not x.terms:
        return Fraction(0)
    return x


def _apply(mat, vec):
    return linalg.matvec(mat, vec)


def verma_super(v: WeightModule, depth: int) -> WeightModule:
    """``M(V)`` with basis ``F^a bF^e (x)`` for ``x`` in ``V`` and ``a + e <= depth``.

    Generator actions come from straightening ``g F^a bF^e`` with the
    lowering part first and the raising part last; the raising part kills
    ``V`` and the Cartan part is evaluated on ``V``.
    """
    if depth < 0:
        raise ValueError("depth must be nonnegative")
    if v.algebra != "h":
        raise ValueError("verma_super expects a Cartan supermodule")
    eng = engine(TRIANGULAR_ORDER)
    lam = v.base
    ne, no = v.dims[0]
    nv = ne + no
    vpar = [0] * ne + [1] * no
    vmats = {g: v.actions[g, 0] for g in ("H1", "H2", "bH1", "bH2")}

    def basis(a):
        items = [(a, 0, x) for x in range(nv)] if a == 0 else [(a, 0, x) for x in range(nv)] + [(a - 1, 1, x) for x in range(nv)]
        items.sort(key=lambda t: (vpar[t[2]] + t[1]) % 2)
        return items

    bases = {-a: basis(a) for a in range(depth + 1)}
    index = {k: {b: i for i, b in enumerate(bs)} for k, bs in bases.items()}
    dims = {}
    labels = {}
    vlab = v.labels.get(0) or [f"x{i}" for i in range(nv)]
    for k, bs in bases.items():
        e = sum(1 for (a, eps, x) in bs if (vpar[x] + eps) % 2 == 0)
        dims[k] = (e, len(bs) - e)
        labels[k] = [_verma_label(a, eps, vlab[x]) for (a, eps, x) in bs]
    actions = {}
    zero = Fraction(0)
    for g in ("E", "F", "H1", "H2", "bE", "bF", "bH1", "bH2"):
        gi = gen_index(g)
        for k in range(-depth, 1):
            t = k + SHIFT[g]
            if t > 0:
                continue
            if t < -depth:
                continue
            mat = linalg.zeros(len(bases[t]), len(bases[k]))
            for col, (a, eps, x) in enumerate(bases[k]):
                mono = [0] * 8
                mono[_F], mono[_BF] = a, eps
                for m, c in eng.left_mul(gi, tuple(mono)).items():
                    if m[_E] or m[_BE]:
                        continue
                    vec = [zero] * nv
                    vec[x] = Fraction(1)
                    for h in (_BH2, _BH1, _H2, _H1):
                        for _ in range(m[h]):
                            vec = _apply(vmats[GENERATORS[h]], vec)
                    key_a, key_e = m[_F], m[_BF]
                    for y, val in enumerate(vec):
                        if val:
                            row = index[t][(key_a, key_e, y)]
                            mat[row][col] = mat[row][col] + c * val
            actions[g, k] = mat
    return WeightModule(
        algebra="q",
        base=lam,
        kmin=-depth,
        kmax=0,
        dims=dims,
        actions=actions,
        closed_top=True,
        ctx=v.ctx,
        labels=labels,
        provenance={"kind": "verma", "lambda": str(lam), "depth": depth, "flipped": v.provenance.get("parity_flips", 0)},
    )


def _verma_label(a, eps, x):
    parts = []
    if a:
        parts.append("F" if a == 1 else f"F^{a}")
    if eps:
        parts.append("bF")
    return "*".join(parts + [x]) if parts else x


def radical(m: WeightModule) -> dict:
    """Per weight, a basis of the maximal submodule avoiding the top weight.

    A vector ``w`` of weight ``top - a*alpha`` lies in the radical iff every
    raising monomial of weight ``a*alpha`` kills it.  Raising monomials are
    ``E^a`` and ``E^(a-1) bE`` (``bE`` squares to zero and commutes with E).
    """
    if not m.closed_top:
        raise ValueError("radical needs a highest weight module")
    top = m.kmax
    cache: dict = {}
    out = {}
    for k in m.krange():
        a = top - k
        if a == 0 or m.dim(k) == 0:
            out[k] = []
            continue
        n = m.dim(k)
        rows = []
        for word in ((_E,) * a, (_E,) * (a - 1) + (_BE,)):
            mat = m.word_matrix(word, k, cache)
            rows.extend(mat)
        out[k] = linalg.nullspace(rows, n) if rows else [linalg.identity(n)[i] for i in range(n)]
    return out


def simple_top(m: WeightModule) -> WeightModule:
    """Quotient of a highest weight supermodule by its radical."""
    if m.provenance.get("kind") != "verma":
        raise ValueError("simple_top expects a Verma supermodule")
    rad = radical(m)
    q = quotient_module(m, rad)
    q.provenance = dict(m.provenance, kind="simple", radical_dims={str(m.weight(k)): len(v) for k, v in rad.items() if v})
    # drop trailing zero spaces so a finite-dimensional quotient is closed below
    ks = [k for k in q.krange() if q.dim(k)]
    if ks and all(q.dim(k) == 0 for k in range(q.kmin, min(ks))) and min(ks) > q.kmin:
        lo = min(ks)
        from .modules import restrict_window

        q = restrict_window(q, lo, q.kmax)
        q = q.replace(closed_bottom=True)
    return q


def highest_weight_simple(lam: Weight, depth: int, flip: bool = False) -> WeightModule:
    """``L(V(lam))`` (or ``L(Pi V(lam))``) on weights ``lam - k*alpha``, ``k <= depth``."""
    return simple_top(verma_super(clifford(lam, flip), depth))


def _odd_monomials():
    out = []
    for flags in itertools.product((0, 1), repeat=4):
        m = [0] * 8
        m[_BF], m[_BH1], m[_BH2], m[_BE] = flags
        out.append(tuple(m))
    out.sort(key=lambda m: (sum(m), [-m[g] for g in ODD_FIRST_ORDER]))
    return out


def _odd_label(m):
    names = [GENERATORS[g] for g in ODD_FIRST_ORDER[:4] if m[g]]
    return "*".join(names) if names else "1"


def induce(lmod: WeightModule) -> WeightModule:
    """``U(q) (x)_{U(gl2)} L`` with basis (odd exterior monomial) (x) (basis of L)."""
    if lmod.algebra != "gl2":
        raise ValueError("induce expects a gl2 module")
    eng = engine(ODD_FIRST_ORDER)
    monos = _odd_monomials()

    def mshift(m):
        return m[_BE] - m[_BF]

    kmin = lmod.kmin - 1 if lmod.closed_bottom else lmod.kmin + 1
    kmax = lmod.kmax + 1 if lmod.closed_top else lmod.kmax - 1
    bases, index, dims, labels = {}, {}, {}, {}
    for k in range(kmin, kmax + 1):
        items = []
        for m in monos:
            lk = k - mshift(m)
            for x in range(lmod.dim(lk)):
                items.append((m, x))
        items.sort(key=lambda t: sum(t[0]) % 2)
        bases[k] = items
        index[k] = {b: i for i, b in enumerate(items)}
        e = sum(1 for (m, x) in items if sum(m) % 2 == 0)
        dims[k] = (e, len(items) - e)
        labels[k] = [f"{_odd_label(m)}|x{x}" for (m, x) in items]
    actions = {}
    for g in ("E", "F", "H1", "H2", "bE", "bF", "bH1", "bH2"):
        gi = gen_index(g)
        for k in range(kmin, kmax + 1):
            t = k + SHIFT[g]
            if not (kmin <= t <= kmax):
                continue
            mat = linalg.zeros(len(bases[t]), len(bases[k]))
            ok = True
            for col, (m, x) in enumerate(bases[k]):
                lk = k - mshift(m)
                for mm, c in eng.left_mul(gi, m).items():
                    odd = [0] * 8
                    for h in (_BF, _BH1, _BH2, _BE):
                        odd[h] = mm[h]
                    odd = tuple(odd)
                    vec = [Fraction(0)] * lmod.dim(lk)
                    vec[x] = Fraction(1)
                    cur = lk
                    for h in (_E, _H2, _H1, _F):
                        for _ in range(mm[h]):
                            a = lmod.action(GENERATORS[h], cur)
                            if a is None:
                                ok = False
                                break
                            vec = linalg.matvec(a, vec) if a else []
                            cur += SHIFT[GENERATORS[h]]
                        if not ok:
                            break
                    if not ok:
                        break
                    for y, val in enumerate(vec):
                        if val:
                            row = index[t][(odd, y)]
                            mat[row][col] = mat[row][col] + c * val
                if not ok:
                    break
            actions[g, k] = mat if ok else None
    return WeightModule(
        algebra="q",
        base=lmod.base,
        kmin=kmin,
        kmax=kmax,
        dims=dims,
        actions=actions,
        closed_top=lmod.closed_top,
        closed_bottom=lmod.closed_bottom,
        ctx=lmod.ctx,
        labels=labels,
        provenance={"kind": "induced", "of": lmod.provenance.get("kind")},
    )


def restrict(n: WeightModule, mode: str = "evenPart") -> WeightModule:
    """Restriction to gl2: the even part (``evenPart``) or everything (``fullRes``)."""
    if mode not in ("evenPart", "fullRes"):
        raise ValueError("mode must be evenPart or fullRes")
    dims, actions, labels = {}, {}, {}
    for k in n.krange():
        e, o = n.dims[k]
        dims[k] = (e, 0) if mode == "evenPart" else (e + o, 0)
        if k in n.labels:
            labels[k] = n.labels[k][: dims[k][0]]
    for (g, k), a in n.actions.items():
        if g not in ("E", "F", "H1", "H2"):
            continue
        if a is None or mode == "fullRes":
            actions[g, k] = a
            continue
        t = k + SHIFT[g]
        et, ek = n.dims[t][0], n.dims[k][0]
        actions[g, k] = [row[:ek] for row in a[:et]]
    return WeightModule(
        algebra="gl2",
        base=n.base,
        kmin=n.kmin,
        kmax=n.kmax,
        dims=dims,
        actions=actions,
        closed_top=n.closed_top,
        closed_bottom=n.closed_bottom,
        ctx=n.ctx,
        labels=labels,
        provenance={"kind": "restriction", "mode": mode, "of": n.provenance.get("kind")},
    )


def annihilation_check(u: SuperElement, n: WeightModule, window=None, on: str = "all"):
    """``(annihilates, checked_weights)``; ``on`` restricts to even or odd source vectors."""
    ks = list(n.interior())
    if window is not None and len(ks) > window:
        ks = ks[-window:] if n.closed_top else ks[(len(ks) - window) // 2 :][:window]
    cache: dict = {}
    checked = 0
    for k in ks:
        mats = n.element_matrix(u, k, cache)
        if mats is None:
            continue
        checked += 1
        e = n.dims[k][0]
        cols = range(n.dim(k)) if on == "all" else (range(e) if on == "even" else range(e, n.dim(k)))
        for mat in mats.values():
            for row in mat:
                if any(row[j] for j in cols):
                    return False, checked
    return True, checked


def annihilates(u: SuperElement, n: WeightModule, window=None, on: str = "all") -> bool:
    ok, checked = annihilation_check(u, n, window, on)
    if checked == 0:
        raise Inconclusive("no weight of the window admits evaluation of the element")
    return ok


def singular_vectors(n: WeightModule, raising=("E", "bE")):
    """Per interior weight, vectors killed by all ``raising`` generators."""
    out = {}
    for k in n.interior():
        rows = []
        ok = True
        for g in raising:
            a = n.action(g, k)
            if a is None:
                ok = False
                break
            rows.extend(a)
        if not ok:
            continue
        out[k] = linalg.nullspace(rows, n.dim(k)) if rows else linalg.identity(n.dim(k))
    return out


def _operator_algebra(n: WeightModule, k: int, max_len: int = 4):
    """Span of weight-zero generator words of length <= ``max_len`` acting on the ``k`` space."""
    gens = list(n.generators)
    up = [g for g in gens if SHIFT[g] > 0]
    down = [g for g in gens if SHIFT[g] < 0]
    flat = [g for g in gens if SHIFT[g] == 0]
    words = [()]
    for length in range(1, max_len + 1):
        for w in itertools.product(gens, repeat=length):
            if sum(SHIFT[g] for g in w) == 0:
                words.append(w)
    del up, down, flat
    mats = []
    dim = n.dim(k)
    for w in words:
        cur = linalg.identity(dim)
        kk = k
        ok = True
        for g in reversed(w):
            a = n.action(g, kk)
            if a is None:
                ok = False
                break
            cur = linalg.matmul(a, cur, dim)
            kk += SHIFT[g]
        if ok:
            mats.append(cur)
    return mats


def is_simple_on_window(n: WeightModule, k0: int | None = None):
    """Window simplicity test for a supermodule whose E and F are injective.

    Returns ``(simple, witness)``.  Steps: injectivity of E and F on the
    interior (so any submodule meets the central weight space), Burnside
    test that even and odd parts of the central space are irreducible
    under weight-zero words, then closure of each parity part.
    """
    ks = list(n.interior())
    if k0 is None:
        k0 = ks[len(ks) // 2]
    for k in ks:
        for g in ("E", "F"):
            a = n.action(g, k)
            t = k + SHIFT[g]
            if a is None or t not in ks:
                continue
            if linalg.rank(a) < n.dim(k):
                return False, {"reason": f"{g} not injective", "weight": str(n.weight(k))}
    mats = _operator_algebra(n, k0)
    e, o = n.dims[k0]
    for lo, hi in ((0, e), (e, e + o)):
        size = hi - lo
        if size <= 1:
            continue
        blocks = [[row[lo:hi] for row in m[lo:hi]] for m in mats]
        flat = [[x for row in b for x in row] for b in blocks]
        if linalg.rank(flat) < size * size:
            raise Inconclusive("parity part of the central weight space is not visibly irreducible")
    for lo, hi in ((0, e), (e, e + o)):
        if hi == lo:
            continue
        vecs = [linalg.identity(n.dim(k0))[i] for i in range(lo, hi)]
        span = _closure(n, {k0: vecs}, ks)
        if len(span[k0]) < n.dim(k0):
            return False, {"reason": "proper submodule", "weight": str(n.weight(k0)), "dims": {str(n.weight(k)): len(v) for k, v in span.items()}}
    return True, {"weight": str(n.weight(k0)), "words": len(mats)}


def _closure(n: WeightModule, seed: dict, ks):
    """Smallest generator-closed family of subspaces containing ``seed`` inside ``ks``."""
    spans = {k: linalg.rref(v)[0] if v else [] for k, v in seed.items()}
    for k in ks:
        spans.setdefault(k, [])
    changed = True
    while changed:
        changed = False
        for k in ks:
            for g in n.generators:
                t = k + SHIFT[g]
                if t not in spans or not spans[k]:
                    continue
                a = n.action(g, k)
                if a is None:
                    continue
                imgs = [linalg.matvec(a, v) for v in spans[k]]
                new, _ = linalg.rref(spans[t] + imgs)
                if len(new) > len(spans[t]):
                    spans[t] = new
                    changed = True
    return spans
