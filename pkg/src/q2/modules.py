"""Weight (super)modules materialized on a finite window of weights.

All weights of a module lie on one line ``base + k*alpha``; the window is the
integer range ``kmin..kmax``.  A side of the window may be *closed*, meaning
every weight beyond it is known to have a zero space (highest weight modules
are closed at the top).  Open sides are truncations: actions leaving the
window are unknown and the outermost weight of an open side is frontier.

Basis vectors of each weight space are ordered even first.  Actions are
matrices ``dim(target) x dim(source)``; odd generators map even to odd and
back.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction

from . import kernels as _kernels
from . import linalg
from .scalars import ALPHA, Scalar, ScalarContext, Weight, format_scalar
from .superalg import (
    GENERATORS,
    CANONICAL_ORDER,
    SuperElement,
    bracket_table,
    mono_shift,
)

ALGEBRA_GENERATORS = {
    "gl2": ("E", "F", "H1", "H2"),
    "h": ("H1", "H2", "bH1", "bH2"),
    "q": ("E", "F", "H1", "H2", "bE", "bF", "bH1", "bH2"),
    # bH stands for bH1 - bH2
    "sq": ("E", "F", "H1", "H2", "bE", "bF", "bH"),
    # quotients by the central H1 + H2: same generators, H1 + H2 acts by 0
    "pq": ("E", "F", "H1", "H2", "bE", "bF", "bH1", "bH2"),
    "psq": ("E", "F", "H1", "H2", "bE", "bF", "bH"),
}
SHIFT = {"E": 1, "F": -1, "H1": 0, "H2": 0, "bE": 1, "bF": -1, "bH1": 0, "bH2": 0, "bH": 0}


def is_odd(g: str) -> bool:
    return g.startswith("b")


class FrontierError(LookupError):
    """An action needed leaves the materialized window."""


@dataclass
class WeightModule:
    algebra: str
    base: Weight
    kmin: int
    kmax: int
    dims: dict
    actions: dict
    closed_top: bool = False
    closed_bottom: bool = False
    ctx: ScalarContext | None = None
    labels: dict = field(default_factory=dict)
    provenance: dict = field(default_factory=dict)

    # -- geometry --------------------------------------------------------
    @property
    def generators(self):
        return ALGEBRA_GENERATORS[self.algebra]

    def weight(self, k: int) -> Weight:
        return self.base + ALPHA * k

    def index_of(self, w: Weight) -> int | None:
        d = w - self.base
        if d.l1 + d.l2 != 0 or d.l1.denominator != 1:
            return None
        return int(d.l1)

    def krange(self):
        return range(self.kmin, self.kmax + 1)

    def known(self, k: int) -> bool:
        if self.kmin <= k <= self.kmax:
            return True
        return (k > self.kmax and self.closed_top) or (k < self.kmin and self.closed_bottom)

    def sdims(self, k: int):
        """``(even, odd)`` dimensions at index ``k`` (zero outside a closed side)."""
        if self.kmin <= k <= self.kmax:
            return self.dims[k]
        if self.known(k):
            return (0, 0)
        raise FrontierError(k)

    def dim(self, k: int) -> int:
        e, o = self.sdims(k)
        return e + o

    def interior(self):
        lo = self.kmin if self.closed_bottom else self.kmin + 1
        hi = self.kmax if self.closed_top else self.kmax - 1
        return range(lo, hi + 1)

    def total_dim(self) -> int:
        return sum(self.dim(k) for k in self.krange())

    def parity_of(self, k: int, i: int) -> int:
        return 0 if i < self.dims[k][0] else 1

    # -- actions -----------------------------------------------------------
    def action(self, g: str, k: int):
        """Matrix of ``g`` on the ``k`` space, or ``None`` beyond the window."""
        t = k + SHIFT[g]
        if not (self.known(k) and self.known(t)):
            return None
        if self.kmin <= k <= self.kmax and self.kmin <= t <= self.kmax:
            return self.actions.get((g, k))
        return linalg.zeros(self.dim(t), self.dim(k))

    def _gen_action(self, gi: int, k: int):
        name = GENERATORS[gi]
        if name in self.generators:
            return self.action(name, k)
        if "bH" in self.generators and name in ("bH1", "bH2"):
            raise KeyError("bH1 and bH2 are not separately available on an sq-module")
        raise KeyError(f"generator {name} does not act on a {self.algebra}-module")

    def word_matrix(self, word, k: int, cache: dict | None = None):
        """Matrix of a generator word (applied right to left) on the ``k`` space."""
        word = tuple(word)
        if cache is not None and (word, k) in cache:
            return cache[word, k]
        if not word:
            m = linalg.identity(self.dim(k))
        else:
            inner = self.word_matrix(word[1:], k, cache)
            if inner is None:
                m = None
            else:
                kk = k + sum(SHIFT[GENERATORS[g]] for g in word[1:])
                a = self._gen_action(word[0], kk)
                m = None if a is None else linalg.matmul(a, inner, self.dim(k))
        if cache is not None:
            cache[word, k] = m
        return m

    def element_matrix(self, u: SuperElement, k: int, cache: dict | None = None):
        """Matrices of ``u`` on the ``k`` space, keyed by target index.

        Returns ``None`` if some monomial needs an action beyond the window.
        """
        if cache is None:
            cache = {}
        out: dict[int, list] = {}
        n = self.dim(k)
        for m, c in u.terms.items():
            word = []
            for g in CANONICAL_ORDER:
                word.extend([g] * m[g])
            t = k + mono_shift(m)
            if not self.known(t):
                return None
            mat = self.word_matrix(word, k, cache)
            if mat is None:
                return None
            acc = out.get(t)
            if acc is None:
                acc = out[t] = linalg.zeros(self.dim(t), n)
            for i, row in enumerate(mat):
                arow = acc[i]
                for j, x in enumerate(row):
                    if x:
                        arow[j] = arow[j] + c * x
        return out

    # -- checks -----------------------------------------------------------
    def relation_audit(self, ks=None):
        """Failures of ``[x,y]v = x(yv) - (-1)^{|x||y|} y(xv)`` on interior vectors."""
        failures = []
        gens = self.generators
        table = bracket_table()
        ks = self.interior() if ks is None else ks
        for a_i, x in enumerate(gens):
            for y in gens[a_i:]:
                bxy = self._bracket_element(x, y, table)
                for k in ks:
                    lhs = self._pair_matrix(x, y, k)
                    rhs = self._linear_matrix(bxy, k, SHIFT[x] + SHIFT[y])
                    if lhs is None or rhs is None:
                        continue
                    if not linalg.is_zero(linalg.sub(lhs, rhs)):
                        failures.append((x, y, k))
        return failures

    def _bracket_element(self, x, y, table):
        def vec(g):
            if g == "bH":
                return {GENERATORS.index("bH1"): 1, GENERATORS.index("bH2"): -1}
            return {GENERATORS.index(g): 1}

        out: dict[int, Fraction] = {}
        for a, ca in vec(x).items():
            for b, cb in vec(y).items():
                for h, c in table[a, b].items():
                    out[h] = out.get(h, 0) + ca * cb * c
        return {h: c for h, c in out.items() if c}

    def _linear_matrix(self, combo: dict, k: int, shift: int):
        if not self.known(k + shift):
            return None
        acc = linalg.zeros(self.dim(k + shift), self.dim(k))
        bh = "bH" in self.generators
        for h, c in combo.items():
            name = GENERATORS[h]
            if bh and name in ("bH1", "bH2"):
                # only bH1 - bH2 is available; the table entries come in that combination
                continue
            a = self.action(name, k)
            if a is None:
                return None
            acc = linalg.add(acc, linalg.scale(a, c))
        if bh:
            c1 = combo.get(GENERATORS.index("bH1"), 0)
            c2 = combo.get(GENERATORS.index("bH2"), 0)
            if c1 + c2:
                raise ValueError("bracket leaves the sq subalgebra")
            if c1:
                a = self.action("bH", k)
                if a is None:
                    return None
                acc = linalg.add(acc, linalg.scale(a, c1))
        return acc

    def _pair_matrix(self, x, y, k):
        sign = -1 if is_odd(x) and is_odd(y) else 1
        n = self.dim(k)
        s = SHIFT[x] + SHIFT[y]
        if not (self.known(k + SHIFT[y]) and self.known(k + SHIFT[x]) and self.known(k + s)):
            return None
        ay, ax = self.action(y, k), self.action(x, k)
        bx, by = self.action(x, k + SHIFT[y]), self.action(y, k + SHIFT[x])
        if any(m is None for m in (ay, ax, bx, by)):
            return None
        xy = linalg.matmul(bx, ay, n)
        yx = linalg.matmul(by, ax, n)
        return [[p - sign * q for p, q in zip(r1, r2)] for r1, r2 in zip(xy, yx)]

    # -- serialization ----------------------------------------------------
    def to_json(self) -> dict:
        def mat(m):
            return [[format_scalar(x) for x in row] for row in m]

        spaces = {}
        for k in self.krange():
            e, o = self.dims[k]
            labels = self.labels.get(k) or [f"v{k}_{i}" for i in range(e + o)]
            spaces[str(self.weight(k))] = {"even": labels[:e], "odd": labels[e:]}
        acts = {}
        for (g, k), m in sorted(self.actions.items(), key=lambda t: (t[0][0], t[0][1])):
            if m is None:
                continue
            acts.setdefault(g, {})[str(self.weight(k))] = mat(m)
        weights = sorted(spaces, key=lambda s: tuple(Fraction(x) for x in s.split(",")))
        return {
            "algebra": self.algebra,
            "base": str(self.base),
            "window": [self.kmin, self.kmax],
            "closed": {"top": self.closed_top, "bottom": self.closed_bottom},
            "scalars": self.ctx.describe() if self.ctx else None,
            "weights": weights,
            "spaces": {w: spaces[w] for w in weights},
            "actions": {g: {w: acts[g][w] for w in sorted(acts[g], key=lambda s: tuple(Fraction(x) for x in s.split(",")))} for g in sorted(acts)},
            "provenance": _jsonable(self.provenance),
        }

    def dumps(self) -> str:
        return json.dumps(self.to_json(), sort_keys=True, indent=1)

    def character(self):
        return {str(self.weight(k)): list(self.dims[k]) for k in self.krange()}

    def replace(self, **kw) -> "WeightModule":
        data = dict(self.__dict__)
        data.update(kw)
        return WeightModule(**data)


def _jsonable(x):
    if isinstance(x, dict):
        return {str(k): _jsonable(v) for k, v in x.items()}
    if isinstance(x, (list, tuple)):
        return [_jsonable(v) for v in x]
    if isinstance(x, (Fraction, Scalar, Weight)):
        return str(x)
    return x


# -- constructions on modules -------------------------------------------------


def parity_flip(m: WeightModule) -> WeightModule:
    """Swap even and odd parts; actions are relabeled by the basis permutation."""
    perms = {}
    dims = {}
    labels = {}
    for k in m.krange():
        e, o = m.dims[k]
        perms[k] = list(range(e, e + o)) + list(range(e))
        dims[k] = (o, e)
        if k in m.labels:
            labels[k] = [m.labels[k][i] for i in perms[k]]
    actions = {}
    for (g, k), a in m.actions.items():
        if a is None:
            actions[g, k] = None
            continue
        t = k + SHIFT[g]
        pt, ps = perms.get(t), perms[k]
        if pt is None:
            actions[g, k] = a
            continue
        actions[g, k] = [[a[i][j] for j in ps] for i in pt]
    prov = dict(m.provenance)
    prov["parity_flips"] = prov.get("parity_flips", 0) + 1
    if prov["parity_flips"] % 2 == 0:
        prov.pop("parity_flips")
    return m.replace(dims=dims, actions=actions, labels=labels, provenance=prov)


# M(A, B) -> M(-A^T, i B^T) is an automorphism of q (i^2 = -1 absorbs the
# sign of odd-odd brackets); each generator goes to a multiple of one generator
_TRANSPOSE = {
    "E": ("F", -1), "F": ("E", -1), "H1": ("H1", -1), "H2": ("H2", -1),
    "bE": ("bF", "i"), "bF": ("bE", "i"), "bH1": ("bH1", "i"), "bH2": ("bH2", "i"),
}


def transpose_twist(m: WeightModule) -> WeightModule:
    """The module with ``g`` acting as ``sigma(g)``, ``sigma(M(A, B)) = M(-A^T, i B^T)``.

    Weights are negated, so highest weight modules become lowest weight
    modules; simplicity is preserved.
    """
    if m.algebra not in ("gl2", "q", "pq"):
        raise ValueError("transpose_twist needs a gl2 or q module")
    i = m.ctx.i() if m.ctx is not None else None
    actions = {}
    for g in m.generators:
        src, c = _TRANSPOSE[g]
        if c == "i":
            if i is None:
                raise ValueError("odd generators need a scalar context containing i")
            c = i
        for k in range(m.kmin, m.kmax + 1):
            a = m.actions.get((src, -k))
            if (src, -k) in m.actions:
                actions[g, k] = None if a is None else [[c * x if x else x for x in row] for row in a]
    return m.replace(
        base=-m.base,
        kmin=-m.kmax,
        kmax=-m.kmin,
        dims={-k: v for k, v in m.dims.items()},
        actions=actions,
        closed_top=m.closed_bottom,
        closed_bottom=m.closed_top,
        labels={-k: v for k, v in m.labels.items()},
        provenance=dict(m.provenance, transposed=not m.provenance.get("transposed", False)),
    )


def restrict_generators(m: WeightModule, algebra: str, combine=None) -> WeightModule:
    """Keep only the actions of ``algebra``'s generators (``combine`` builds derived ones)."""
    actions = {}
    for g in ALGEBRA_GENERATORS[algebra]:
        for k in m.krange():
            if combine and g in combine:
                actions[g, k] = combine[g](m, k)
            else:
                actions[g, k] = m.actions.get((g, k))
    return m.replace(algebra=algebra, actions=actions)


def subspace_module(m: WeightModule, bases: dict, algebra: str | None = None, kmin=None, kmax=None) -> WeightModule:
    """Submodule spanned by homogeneous vectors ``bases[k]`` (an invariant subspace)."""
    kmin = m.kmin if kmin is None else kmin
    kmax = m.kmax if kmax is None else kmax
    algebra = algebra or m.algebra
    ech = {}
    dims = {}
    for k in range(kmin, kmax + 1):
        vecs = bases.get(k, [])
        rows, piv = linalg.rref(vecs) if vecs else ([], [])
        e = sum(1 for p in piv if p < m.dims[k][0])
        # even rows come first because pivots are sorted and even columns lead
        ech[k] = (rows, piv)
        dims[k] = (e, len(rows) - e)
    actions = {}
    for g in ALGEBRA_GENERATORS[algebra]:
        for k in range(kmin, kmax + 1):
            t = k + SHIFT[g]
            rows, _ = ech[k]
            if not (kmin <= t <= kmax):
                continue
            a = m.action(g, k)
            if a is None:
                actions[g, k] = None
                continue
            trows, tpiv = ech[t]
            cols = []
            for r in rows:
                img = linalg.matvec(a, r) if a else []
                coords = [img[p] for p in tpiv]
                cols.append(coords)
            actions[g, k] = linalg.transpose(cols, len(trows)) if rows else [[] for _ in trows]
    closed_top = m.closed_top and kmax == m.kmax
    closed_bottom = m.closed_bottom and kmin == m.kmin
    return WeightModule(
        algebra=algebra,
        base=m.base,
        kmin=kmin,
        kmax=kmax,
        dims=dims,
        actions=actions,
        closed_top=closed_top,
        closed_bottom=closed_bottom,
        ctx=m.ctx,
        provenance={"kind": "submodule", "of": m.provenance.get("kind")},
    )


def check_invariant(m: WeightModule, bases: dict) -> bool:
    """True if the span of ``bases`` is closed under all actions inside the window."""
    ech = {k: linalg.rref(v) if v else ([], []) for k, v in bases.items()}
    for g in m.generators:
        for k, (rows, _) in ech.items():
            t = k + SHIFT[g]
            a = m.action(g, k)
            if a is None or not a:
                continue
            trows, tpiv = ech.get(t, ([], []))
            if t not in ech and m.kmin <= t <= m.kmax:
                trows, tpiv = [], []
            if not (m.kmin <= t <= m.kmax):
                continue
            for r in rows:
                img = linalg.matvec(a, r)
                coords = [img[p] for p in tpiv]
                back = [sum((c * tr[j] for c, tr in zip(coords, trows)), Fraction(0)) for j in range(len(img))]
                if any(x != y for x, y in zip(img, back)):
                    return False
    return True


def quotient_module(m: WeightModule, bases: dict) -> WeightModule:
    """Quotient by the submodule spanned by homogeneous vectors ``bases[k]``."""
    proj = {}
    lift_cols = {}
    dims = {}
    labels = {}
    for k in m.krange():
        n = m.dim(k)
        vecs = bases.get(k, [])
        rows, piv = linalg.rref(vecs) if vecs else ([], [])
        pset = set(piv)
        keep = [j for j in range(n) if j not in pset]
        p = []
        for j in keep:
            row = [Fraction(0)] * n
            row[j] = Fraction(1)
            for r, pc in zip(rows, piv):
                row[pc] = -r[j]
            p.append(row)
        proj[k] = p
        lift_cols[k] = keep
        e = sum(1 for j in keep if j < m.dims[k][0])
        dims[k] = (e, len(keep) - e)
        if k in m.labels:
            labels[k] = [m.labels[k][j] for j in keep]
    actions = {}
    for (g, k), a in m.actions.items():
        t = k + SHIFT[g]
        if a is None:
            actions[g, k] = None
            continue
        if not (m.kmin <= t <= m.kmax):
            continue
        cols = lift_cols[k]
        sub = [[row[j] for j in cols] for row in a]
        if not proj[t]:
            actions[g, k] = []
        elif not sub or not cols:
            actions[g, k] = linalg.zeros(len(proj[t]), len(cols))
        else:
            actions[g, k] = linalg.matmul(proj[t], sub, len(cols))
    prov = {"kind": "quotient", "of": m.provenance.get("kind")}
    return m.replace(dims=dims, actions=actions, labels=labels, provenance=prov)


def restrict_window(m: WeightModule, kmin: int, kmax: int) -> WeightModule:
    kmin, kmax = max(kmin, m.kmin), min(kmax, m.kmax)
    dims = {k: m.dims[k] for k in range(kmin, kmax + 1)}
    actions = {}
    for (g, k), a in m.actions.items():
        if kmin <= k <= kmax:
            t = k + SHIFT[g]
            if kmin <= t <= kmax:
                actions[g, k] = a
    return m.replace(
        kmin=kmin,
        kmax=kmax,
        dims=dims,
        actions=actions,
        closed_top=m.closed_top and kmax == m.kmax,
        closed_bottom=m.closed_bottom and kmin == m.kmin,
        labels={k: v for k, v in m.labels.items() if kmin <= k <= kmax},
    )


# -- intertwiners ------------------------------------------------------------


@dataclass
class Intertwiner:
    """Degree-zero map given weight by weight (keys are weights)."""

    matrices: dict

    def rank(self) -> int:
        return sum(linalg.rank(m) for m in self.matrices.values() if m and m[0])

    def is_bijective(self) -> bool:
        for m in self.matrices.values():
            if len(m) != (len(m[0]) if m else 0) or (m and linalg.rank(m) != len(m)):
                return False
        return True

    def to_json(self):
        return {str(w): [[format_scalar(x) for x in r] for r in m] for w, m in sorted(self.matrices.items())}


def common_weights(m: WeightModule, n: WeightModule, window: int | None = None):
    ws = []
    for k in m.interior():
        w = m.weight(k)
        kn = n.index_of(w)
        if kn is not None and kn in n.interior():
            ws.append((w, k, kn))
    if window is not None and len(ws) > window:
        mid = len(ws) // 2
        lo = max(0, mid - window // 2)
        ws = ws[lo : lo + window]
    return ws


def intertwiners(m: WeightModule, n: WeightModule, window: int | None = None, generators=None):
    """Basis of parity-preserving maps ``m -> n`` commuting with all generators.

    Only weights interior to both windows are used; ``window`` limits the
    number of weights (centered).
    """
    ws = common_weights(m, n, window)
    if not ws:
        return []
    gens = generators or [g for g in m.generators if g in n.generators]
    index = {}
    nunk = 0
    for w, km, kn in ws:
        em, om = m.dims[km]
        en, on = n.dims[kn]
        for i in range(en + on):
            for j in range(em + om):
                if (i < en) == (j < em):
                    index[w, i, j] = nunk
                    nunk += 1
    if nunk == 0:
        return []
    pivots: dict = {}
    wset = {w: (km, kn) for w, km, kn in ws}
    for w, km, kn in ws:
        for g in gens:
            s = SHIFT[g]
            w2 = w + ALPHA * s
            if w2 not in wset:
                continue
            km2, kn2 = wset[w2]
            am = m.action(g, km)
            an = n.action(g, kn)
            if am is None or an is None:
                continue
            dm_src, dn_src = m.dim(km), n.dim(kn)
            dm_t, dn_t = m.dim(km2), n.dim(kn2)
            # Phi_{w2} am - an Phi_w = 0, entries (r, c) with r < dn_t, c < dm_src
            for r in range(dn_t):
                for c in range(dm_src):
                    row = {}
                    for t in range(dm_t):
                        x = am[t][c] if am else 0
                        if x:
                            idx = index.get((w2, r, t))
                            if idx is not None:
                                row[idx] = row.get(idx, 0) + x
                    for t in range(dn_src):
                        x = an[r][t] if an else 0
                        if x:
                            idx = index.get((w, t, c))
                            if idx is not None:
                                row[idx] = row.get(idx, 0) - x
                    row = {a: b for a, b in row.items() if b}
                    if row:
                        _kernels.sparse_insert(row, pivots)
            if len(pivots) == nunk:
                return []
    null = _kernels.sparse_nullspace(pivots, nunk)
    out = []
    for vec in null:
        mats = {}
        for w, km, kn in ws:
            dm, dn = m.dim(km), n.dim(kn)
            mat = linalg.zeros(dn, dm)
            for i in range(dn):
                for j in range(dm):
                    idx = index.get((w, i, j))
                    if idx is not None:
                        mat[i][j] = vec[idx]
            mats[w] = mat
        out.append(Intertwiner(mats))
    return out


def combine_intertwiners(maps, coeffs) -> Intertwiner:
    out = {}
    for phi, c in zip(maps, coeffs):
        for w, m in phi.matrices.items():
            acc = out.get(w)
            out[w] = linalg.scale(m, c) if acc is None else linalg.add(acc, linalg.scale(m, c))
    return Intertwiner(out)


def find_isomorphism(maps) -> Intertwiner | None:
    """A bijective member of the span of ``maps``, tried at a few generic points.

    If the span contains an isomorphism, the determinant is a nonzero
    polynomial in the coefficients, so a miss at every point tried is
    unlikely but possible; callers treat ``None`` as "none detected".
    """
    n = len(maps)
    if n == 0:
        return None
    trials = [[Fraction(1)] * n, [Fraction(j + 1) for j in range(n)], [Fraction(3) ** j for j in range(n)], [Fraction((-2) ** j + 7 * j) for j in range(n)]]
    trials += [[Fraction(int(i == j)) for j in range(n)] for i in range(n)]
    for coeffs in trials:
        phi = maps[0] if n == 1 else combine_intertwiners(maps, coeffs)
        if phi.is_bijective():
            return phi
    return None


def is_intertwiner(m: WeightModule, n: WeightModule, phi: dict, generators=None) -> bool:
    """Check a proposed family ``phi[weight]`` against all generator actions."""
    gens = generators or [g for g in m.generators if g in n.generators]
    for w, mat in phi.items():
        km, kn = m.index_of(w), n.index_of(w)
        for g in gens:
            w2 = w + ALPHA * SHIFT[g]
            if w2 not in phi:
                continue
            km2, kn2 = m.index_of(w2), n.index_of(w2)
            am, an = m.action(g, km), n.action(g, kn)
            if am is None or an is None:
                continue
            lhs = linalg.matmul(phi[w2], am, m.dim(km)) if am else linalg.zeros(n.dim(kn2), m.dim(km))
            rhs = linalg.matmul(an, mat, m.dim(km)) if an else linalg.zeros(n.dim(kn2), m.dim(km))
            if lhs and not linalg.is_zero(linalg.sub(lhs, rhs)):
                return False
    return True
