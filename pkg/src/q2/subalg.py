"""The subsuperalgebra sq(2) and the quotients pq(2), psq(2).

sq is spanned by gl2 together with bE, bF and bH = bH1 - bH2.  The quotients
by the central element H1 + H2 get no engine of their own: their modules are
the q- and sq-modules on which H1 + H2 acts by zero.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction

from . import linalg
from .gmod import gl2_verma
from .modules import (
    ALGEBRA_GENERATORS,
    SHIFT,
    WeightModule,
    find_isomorphism,
    intertwiners,
    parity_flip,
    restrict_generators,
)
from .qmod import restrict
from .superalg import bracket_table

__all__ = [
    "SubalgebraSpec",
    "SUBALGEBRAS",
    "NotAtypical",
    "sq_closure_defects",
    "restrict_sq",
    "as_quotient_view",
    "central_charge_zero",
    "submodule_search",
    "check_atypical_split",
    "cartan_top_simple",
]


class NotAtypical(ValueError):
    pass


@dataclass(frozen=True)
class SubalgebraSpec:
    name: str
    generators: tuple
    quotient_by_center: bool
    base: str

    def describe(self) -> str:
        gens = ", ".join(self.generators)
        tail = " modulo H1+H2" if self.quotient_by_center else ""
        return f"{self.name}: <{gens}>{tail}"


SUBALGEBRAS = {
    "q": SubalgebraSpec("q", ALGEBRA_GENERATORS["q"], False, "q"),
    "sq": SubalgebraSpec("sq", ALGEBRA_GENERATORS["sq"], False, "q"),
    "pq": SubalgebraSpec("pq", ALGEBRA_GENERATORS["pq"], True, "q"),
    "psq": SubalgebraSpec("psq", ALGEBRA_GENERATORS["psq"], True, "sq"),
}

# sq generators as vectors over the q basis
_SQ_VECTORS = {
    "E": {3: 1}, "F": {0: 1}, "H1": {1: 1}, "H2": {2: 1},
    "bE": {7: 1}, "bF": {4: 1}, "bH": {5: 1, 6: -1},
}


def sq_closure_defects():
    """Pairs of sq generators whose superbracket leaves the span of sq."""
    table = bracket_table()
    rows = [[Fraction(v.get(i, 0)) for i in range(8)] for v in _SQ_VECTORS.values()]
    r0 = linalg.rank(rows)
    bad = []
    names = list(_SQ_VECTORS)
    for a, b in itertools.combinations_with_replacement(names, 2):
        acc = [Fraction(0)] * 8
        for i, ci in _SQ_VECTORS[a].items():
            for j, cj in _SQ_VECTORS[b].items():
                for h, c in table[i, j].items():
                    acc[h] += ci * cj * c
        if linalg.rank(rows + [acc]) > r0:
            bad.append((a, b))
    return bad


def _bh(m: WeightModule, k: int):
    a1, a2 = m.action("bH1", k), m.action("bH2", k)
    if a1 is None or a2 is None:
        return None
    return linalg.sub(a1, a2)


def restrict_sq(n: WeightModule) -> WeightModule:
    """Same spaces; only the sq generators act (``bH`` is ``bH1 - bH2``)."""
    if n.algebra not in ("q", "pq"):
        raise ValueError("restrict_sq expects a q-supermodule")
    out = restrict_generators(n, "sq", combine={"bH": _bh})
    out.provenance = dict(n.provenance, restricted_to="sq")
    return out


def central_charge_zero(n: WeightModule) -> bool:
    """Whether ``H1 + H2`` acts by zero on every weight of the window."""
    for k in n.krange():
        a1, a2 = n.action("H1", k), n.action("H2", k)
        if a1 is None or a2 is None or not linalg.is_zero(linalg.add(a1, a2)):
            return False
    return True


def as_quotient_view(n: WeightModule, name: str) -> WeightModule:
    """View an atypical q- (or sq-) module as a pq- (or psq-) module."""
    spec = SUBALGEBRAS[name]
    if not spec.quotient_by_center:
        raise ValueError(f"{name} is not a quotient by the center")
    if not central_charge_zero(n):
        raise NotAtypical("H1 + H2 does not act by zero")
    src = n if n.algebra in ("sq", "psq") or spec.base == "q" else restrict_sq(n)
    if spec.base == "q" and src.algebra not in ("q", "pq"):
        raise ValueError("pq views need a q-supermodule")
    return src.replace(algebra=name)


def _closed(m: WeightModule, chosen: set, pieces) -> bool:
    for (k, p) in chosen:
        lo, hi = pieces[k, p]
        for g in m.generators:
            t = k + SHIFT[g]
            a = m.action(g, k)
            if a is None or not m.known(t) or m.dim(t) == 0:
                continue
            e_t = m.sdims(t)[0]
            for col in range(lo, hi):
                for row in range(m.dim(t)):
                    if a[row][col]:
                        q = 0 if row < e_t else 1
                        if (t, q) not in chosen:
                            return False
    return True


def submodule_search(m: WeightModule):
    """All subsupermodules of a module whose (weight, parity) pieces have dimension <= 1.

    With one-dimensional pieces every graded weight submodule is a union of
    pieces, so checking all subsets is exhaustive.  Returns the list of
    closed subsets (as sorted lists of ``(k, parity)``).
    """
    if not (m.closed_top and m.closed_bottom):
        raise ValueError("exhaustive search needs a finite-dimensional module")
    pieces = {}
    for k in m.krange():
        e, o = m.dims[k]
        if e > 1 or o > 1:
            raise ValueError("some weight-parity piece has dimension above 1")
        if e:
            pieces[k, 0] = (0, 1)
        if o:
            pieces[k, 1] = (e, e + 1)
    keys = sorted(pieces)
    found = []
    for r in range(len(keys) + 1):
        for subset in itertools.combinations(keys, r):
            if _closed(m, set(subset), pieces):
                found.append(list(subset))
    return found


def cartan_top_simple(m: WeightModule) -> bool:
    """The top weight space is simple over the Cartan part (H1, H2, bH)."""
    k = m.kmax
    e, o = m.dims[k]
    if (e, o) == (1, 0) or (e, o) == (0, 1):
        return True
    if (e, o) != (1, 1):
        return False
    a = m.action("bH", k)
    return a is not None and bool(a[1][0]) and bool(a[0][1])


def _parity_part(n: WeightModule, parity: int) -> WeightModule:
    src = n if parity == 0 else parity_flip(n)
    return restrict(src, "evenPart")


def check_atypical_split(n: WeightModule):
    """Find the parity part of an atypical module killed by the odd part of sq.

    Returns a dict with the parity of ``X``, whether ``U(sq)_1 X = 0``, the
    number of gl2 intertwiners ``X -> N/X`` (after forgetting parity, this is
    ``N/X = Pi X``) and ``X -> M(top weight)``.
    """
    if not central_charge_zero(n):
        raise NotAtypical("H1 + H2 does not act by zero")
    s = restrict_sq(n) if n.algebra in ("q", "pq") else n
    odd = [g for g in s.generators if g.startswith("b")]
    killed = {}
    for parity in (0, 1):
        ok = True
        for k in s.interior():
            e = s.dims[k][0]
            cols = range(e) if parity == 0 else range(e, s.dim(k))
            for g in odd:
                a = s.action(g, k)
                if a is None:
                    continue
                if any(a[r][c] for r in range(len(a)) for c in cols):
                    ok = False
        killed[parity] = ok
    parities = [p for p in (0, 1) if killed[p]]
    if not parities:
        return {"split": False, "killed_by_odd": killed}
    p = parities[0]
    x = _parity_part(n, p)
    rest = _parity_part(n, 1 - p)
    to_quotient = intertwiners(x, rest)
    out = {
        "split": True,
        "parity": "even" if p == 0 else "odd",
        "killed_by_odd": killed,
        "quotient_intertwiners": len(to_quotient),
        "quotient_iso": find_isomorphism(to_quotient) is not None,
    }
    if n.closed_top:
        top = n.weight(n.kmax)
        verma = gl2_verma(top, max(4, n.kmax - n.kmin))
        maps = intertwiners(x, verma)
        out["verma_intertwiners"] = len(maps)
        out["verma_iso"] = find_isomorphism(maps) is not None
        out["top"] = str(top)
    return out
