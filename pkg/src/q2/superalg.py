"""The queer Lie superalgebra q(2) and its enveloping algebra in PBW form.

Generators are realized as 4x4 block matrices ``M(A, B) = [[A, B], [B, A]]``.
The superbracket table is computed from these matrices once and memoized;
nothing about the algebra is entered by hand.

Monomials are tuples of eight exponents indexed by generator number
(``GENERATORS`` order).  A :class:`PBWEngine` straightens products with
respect to a chosen total order of the generators; the canonical order is
``F < H1 < H2 < E < bF < bH1 < bH2 < bE``.
"""

from __future__ import annotations

import itertools
from fractions import Fraction
from functools import lru_cache

from .scalars import Scalar, Weight, format_scalar, to_fraction
from . import linalg

__all__ = [
    "GENERATORS",
    "EVEN",
    "ODD",
    "PARITY",
    "ALPHA_SHIFT",
    "gen_index",
    "matrix_of",
    "matrix_supercommutator",
    "bracket_table",
    "PBWEngine",
    "CANONICAL_ORDER",
    "TRIANGULAR_ORDER",
    "ODD_FIRST_ORDER",
    "SuperElement",
    "generator",
    "bracket",
    "multiply",
    "casimir_element",
    "find_anticenter",
    "monomials_up_to_degree",
    "StepBudgetExceeded",
]

GENERATORS = ("F", "H1", "H2", "E", "bF", "bH1", "bH2", "bE")
DISPLAY = {"F": "F", "H1": "H₁", "H2": "H₂", "E": "E", "bF": "F̄", "bH1": "H̄₁", "bH2": "H̄₂", "bE": "Ē"}
PARITY = (0, 0, 0, 0, 1, 1, 1, 1)
# displacement of each generator in multiples of alpha = (1, -1)
ALPHA_SHIFT = (-1, 0, 0, 1, -1, 0, 0, 1)
EVEN = tuple(i for i in range(8) if not PARITY[i])
ODD = tuple(i for i in range(8) if PARITY[i])
_F, _H1, _H2, _E, _BF, _BH1, _BH2, _BE = range(8)

# (block, row, col) of the 2x2 matrix unit: block 0 = A, 1 = B
_UNITS = {
    "F": (0, 1, 0),
    "H1": (0, 0, 0),
    "H2": (0, 1, 1),
    "E": (0, 0, 1),
    "bF": (1, 1, 0),
    "bH1": (1, 0, 0),
    "bH2": (1, 1, 1),
    "bE": (1, 0, 1),
}


def gen_index(name: str) -> int:
    return GENERATORS.index(name)


def matrix_of(name: str) -> list[list[int]]:
    """The 4x4 matrix ``M(A, B)`` realizing a generator."""
    block, r, c = _UNITS[name]
    m = [[0] * 4 for _ in range(4)]
    if block == 0:
        m[r][c] = m[r + 2][c + 2] = 1
    else:
        m[r][c + 2] = m[r + 2][c] = 1
    return m


def _matmul4(a, b):
    return [[sum(a[i][k] * b[k][j] for k in range(4)) for j in range(4)] for i in range(4)]


def _decompose(m) -> dict[int, int]:
    """Write a matrix of the form ``M(A, B)`` in the generator basis."""
    out = {}
    for idx, name in enumerate(GENERATORS):
        block, r, c = _UNITS[name]
        v = m[r][c + 2 * block]
        if v:
            out[idx] = v
    # sanity: the matrix really is of block form M(A, B)
    for i in range(2):
        for j in range(2):
            if m[i][j] != m[i + 2][j + 2] or m[i][j + 2] != m[i + 2][j]:
                raise ValueError("matrix is not of the form M(A, B)")
    return out


def matrix_supercommutator(a: int, b: int) -> dict[int, int]:
    """``[x_a, x_b]`` computed from 4x4 matrices."""
    ma, mb = matrix_of(GENERATORS[a]), matrix_of(GENERATORS[b])
    sign = -1 if PARITY[a] and PARITY[b] else 1
    ab, ba = _matmul4(ma, mb), _matmul4(mb, ma)
    return _decompose([[ab[i][j] - sign * ba[i][j] for j in range(4)] for i in range(4)])


@lru_cache(maxsize=None)
def bracket_table() -> dict[tuple[int, int], dict[int, int]]:
    return {(a, b): matrix_supercommutator(a, b) for a in range(8) for b in range(8)}


class StepBudgetExceeded(RuntimeError):
    pass


CANONICAL_ORDER = (_F, _H1, _H2, _E, _BF, _BH1, _BH2, _BE)
# lowering part, Cartan part, raising part: used for highest weight modules
TRIANGULAR_ORDER = (_F, _BF, _H1, _H2, _BH1, _BH2, _E, _BE)
# odd block first: U(q) as a free right U(gl2)-module
ODD_FIRST_ORDER = (_BF, _BH1, _BH2, _BE, _F, _H1, _H2, _E)

_ZERO_MONO = (0,) * 8


def _add_into(acc: dict, key, value):
    s = acc.get(key, 0) + value
    if s:
        acc[key] = s
    else:
        acc.pop(key, None)


class PBWEngine:
    """PBW straightening with respect to a fixed order of the generators.

    Coefficients produced here are rationals; every rewrite either sorts an
    adjacent pair or lowers the filtration degree, and a global step budget
    guards against runaway loops.
    """

    def __init__(self, order=CANONICAL_ORDER, step_budget: int = 10**7):
        self.order = tuple(order)
        if sorted(self.order) != list(range(8)):
            raise ValueError("order must be a permutation of the 8 generators")
        self.pos = [0] * 8
        for p, g in enumerate(self.order):
            self.pos[g] = p
        self.table = bracket_table()
        self.step_budget = step_budget
        self.steps = 0
        self._left = {}
        self._mono = {}

    def first(self, mono) -> int | None:
        for g in self.order:
            if mono[g]:
                return g
        return None

    def word(self, mono) -> list[int]:
        """Generators of ``mono`` left to right."""
        out = []
        for g in self.order:
            out.extend([g] * mono[g])
        return out

    def left_mul(self, g: int, mono: tuple) -> dict:
        """Normal form of ``x_g * mono``."""
        key = (g, mono)
        hit = self._left.get(key)
        if hit is not None:
            return hit
        self.steps += 1
        if self.steps > self.step_budget:
            raise StepBudgetExceeded(f"straightening exceeded {self.step_budget} steps")
        y = self.first(mono)
        result: dict = {}
        if y is None or self.pos[g] < self.pos[y] or (g == y and not PARITY[g]):
            m = list(mono)
            m[g] += 1
            result[tuple(m)] = Fraction(1)
        else:
            rest = list(mono)
            rest[y] -= 1
            rest = tuple(rest)
            if g == y:
                # odd square: x^2 = [x, x] / 2
                for h, c in self.table[g, g].items():
                    for m2, c2 in self.left_mul(h, rest).items():
                        _add_into(result, m2, Fraction(c, 2) * c2)
            else:
                sign = -1 if PARITY[g] and PARITY[y] else 1
                for m1, c1 in self.left_mul(g, rest).items():
                    for m2, c2 in self.left_mul(y, m1).items():
                        _add_into(result, m2, sign * c1 * c2)
                for h, c in self.table[g, y].items():
                    for m2, c2 in self.left_mul(h, rest).items():
                        _add_into(result, m2, c * c2)
        self._left[key] = result
        return result

    def mono_mul(self, a: tuple, b: tuple) -> dict:
        key = (a, b)
        hit = self._mono.get(key)
        if hit is not None:
            return hit
        cur = {b: Fraction(1)}
        for g in reversed(self.word(a)):
            nxt: dict = {}
            for m, c in cur.items():
                for m2, c2 in self.left_mul(g, m).items():
                    _add_into(nxt, m2, c * c2)
            cur = nxt
        self._mono[key] = cur
        return cur

    def mul_terms(self, a: dict, b: dict) -> dict:
        out: dict = {}
        for m1, c1 in a.items():
            for m2, c2 in b.items():
                c12 = c1 * c2
                if not c12:
                    continue
                for m, c in self.mono_mul(m1, m2).items():
                    _add_into(out, m, c12 * c)
        return out

    def word_terms(self, word) -> dict:
        """Normal form of a product of generators given left to right."""
        cur = {_ZERO_MONO: Fraction(1)}
        for g in reversed(list(word)):
            nxt: dict = {}
            for m, c in cur.items():
                for m2, c2 in self.left_mul(g, m).items():
                    _add_into(nxt, m2, c * c2)
            cur = nxt
        return cur

    def convert(self, terms: dict, source: "PBWEngine") -> dict:
        """Re-express terms written in ``source`` order in this engine's order."""
        out: dict = {}
        for m, c in terms.items():
            for m2, c2 in self.word_terms(source.word(m)).items():
                _add_into(out, m2, c * c2)
        return out


_ENGINES: dict = {}


def engine(order=CANONICAL_ORDER) -> PBWEngine:
    order = tuple(order)
    e = _ENGINES.get(order)
    if e is None:
        e = _ENGINES[order] = PBWEngine(order)
    return e


def mono_parity(m) -> int:
    return (m[_BF] + m[_BH1] + m[_BH2] + m[_BE]) % 2


def mono_shift(m) -> int:
    """Weight of a monomial in multiples of alpha."""
    return sum(ALPHA_SHIFT[g] * m[g] for g in range(8))


def mono_degree(m) -> int:
    return sum(m)


def format_monomial(m, order=CANONICAL_ORDER) -> str:
    parts = []
    for g in order:
        e = m[g]
        if e == 1:
            parts.append(GENERATORS[g])
        elif e > 1:
            parts.append(f"{GENERATORS[g]}^{e}")
    return "*".join(parts) if parts else "1"


def _mono_sort_key(m):
    # degree first, then exponents in canonical order
    return (sum(m), tuple(m[g] for g in CANONICAL_ORDER))


class SuperElement:
    """A finite linear combination of canonical PBW monomials."""

    __slots__ = ("terms",)

    def __init__(self, terms: dict | None = None):
        clean = {}
        for m, c in (terms or {}).items():
            if c:
                clean[tuple(m)] = c
        self.terms = clean

    @classmethod
    def scalar(cls, c) -> "SuperElement":
        return cls({_ZERO_MONO: c})

    def __add__(self, other):
        other = _as_element(other)
        out = dict(self.terms)
        for m, c in other.terms.items():
            _add_into(out, m, c)
        return SuperElement(out)

    __radd__ = __add__

    def __neg__(self):
        return SuperElement({m: -c for m, c in self.terms.items()})

    def __sub__(self, other):
        return self + (-_as_element(other))

    def __rsub__(self, other):
        return _as_element(other) - self

    def __mul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return SuperElement({m: c * other for m, c in self.terms.items()})
        return multiply(self, other)

    def __rmul__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            return SuperElement({m: other * c for m, c in self.terms.items()})
        return multiply(_as_element(other), self)

    def __pow__(self, n: int):
        out = SuperElement.scalar(Fraction(1))
        for _ in range(n):
            out = out * self
        return out

    def __eq__(self, other):
        if isinstance(other, (int, Fraction, Scalar)):
            other = SuperElement.scalar(other)
        if not isinstance(other, SuperElement):
            return NotImplemented
        return self.terms == other.terms

    def __hash__(self):
        return hash(frozenset(self.terms.items()))

    def __bool__(self):
        return bool(self.terms)

    def is_zero(self) -> bool:
        return not self.terms

    def degree(self) -> int:
        return max((sum(m) for m in self.terms), default=-1)

    def weight_components(self) -> dict[int, "SuperElement"]:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(mono_shift(m), {})[m] = c
        return {k: SuperElement(v) for k, v in sorted(out.items())}

    def parity_components(self) -> dict[int, "SuperElement"]:
        out: dict[int, dict] = {}
        for m, c in self.terms.items():
            out.setdefault(mono_parity(m), {})[m] = c
        return {k: SuperElement(v) for k, v in sorted(out.items())}

    def parity(self) -> int | None:
        ps = {mono_parity(m) for m in self.terms}
        return ps.pop() if len(ps) == 1 else (0 if not ps else None)

    def weight(self) -> Weight | None:
        ws = {mono_shift(m) for m in self.terms}
        if not ws:
            return Weight(0, 0)
        if len(ws) > 1:
            return None
        k = ws.pop()
        return Weight(k, -k)

    def sorted_terms(self):
        return sorted(self.terms.items(), key=lambda t: _mono_sort_key(t[0]))

    def leading(self):
        """Highest-degree term, ties broken by PBW order."""
        return max(self.terms.items(), key=lambda t: _mono_sort_key(t[0]))

    def __str__(self):
        return format_element(self)

    def __repr__(self):
        return f"SuperElement({format_element(self)!r})"


def _needs_parens(c) -> bool:
    return isinstance(c, Scalar) and len(c.terms) > 1


def format_element(x: SuperElement) -> str:
    """Text form with monomials in PBW order, e.g. ``F*E + H1 - H2``."""
    if not x.terms:
        return "0"
    pieces = []
    for m, c in sorted(x.terms.items(), key=lambda t: (-sum(t[0]), tuple(-t[0][g] for g in CANONICAL_ORDER))):
        mono = format_monomial(m)
        neg = False
        if isinstance(c, Scalar):
            text = format_scalar(c)
            if len(c.terms) == 1:
                (cv,) = c.terms.values()
                if cv < 0:
                    neg = True
                    text = format_scalar(-c)
            if _needs_parens(c):
                text = f"({text})"
        else:
            c = to_fraction(c)
            neg = c < 0
            text = str(abs(c))
        if mono == "1":
            body = text
        elif text == "1":
            body = mono
        else:
            body = f"{text}*{mono}"
        pieces.append((neg, body))
    out = ("-" if pieces[0][0] else "") + pieces[0][1]
    for neg, body in pieces[1:]:
        out += (" - " if neg else " + ") + body
    return out


def _as_element(x) -> SuperElement:
    if isinstance(x, SuperElement):
        return x
    if isinstance(x, (int, Fraction, Scalar)):
        return SuperElement.scalar(x)
    raise TypeError(f"cannot use {x!r} as an element of U(q)")


def generator(name: str) -> SuperElement:
    m = [0] * 8
    m[gen_index(name)] = 1
    return SuperElement({tuple(m): Fraction(1)})


def multiply(a: SuperElement, b: SuperElement) -> SuperElement:
    a, b = _as_element(a), _as_element(b)
    return SuperElement(engine().mul_terms(a.terms, b.terms))


def bracket(x: SuperElement, y: SuperElement) -> SuperElement:
    """Superbracket, extended bilinearly over homogeneous components."""
    x, y = _as_element(x), _as_element(y)
    out = SuperElement()
    for px, xc in x.parity_components().items():
        for py, yc in y.parity_components().items():
            sign = -1 if px and py else 1
            out = out + multiply(xc, yc) - multiply(yc, xc) * sign
    return out


@lru_cache(maxsize=None)
def casimir_element() -> SuperElement:
    h = generator("H1") - generator("H2") + 1
    return h * h + 4 * generator("F") * generator("E")


def monomials_up_to_degree(d: int, parity: int | None = None, shift: int | None = None):
    """Canonical PBW monomials of filtration degree at most ``d``."""
    out = []
    for odd in itertools.product((0, 1), repeat=4):
        k = sum(odd)
        if k > d:
            continue
        for even in _compositions_upto(d - k, 4):
            m = (even[0], even[1], even[2], even[3]) + odd
            if parity is not None and mono_parity(m) != parity:
                continue
            if shift is not None and mono_shift(m) != shift:
                continue
            out.append(m)
    out.sort(key=_mono_sort_key)
    return out


def _compositions_upto(n: int, parts: int):
    if parts == 1:
        for i in range(n + 1):
            yield (i,)
        return
    for i in range(n + 1):
        for rest in _compositions_upto(n - i, parts - 1):
            yield (i,) + rest


def find_anticenter(max_degree: int) -> list[SuperElement]:
    """Even elements that commute with the even and anticommute with the odd generators.

    Solves degree by degree and returns a basis of the solution space at
    filtration degree ``max_degree`` (empty if none).  The candidate space is
    restricted to weight zero, which commuting with ``H1 - H2`` forces anyway.
    Basis elements are reduced echelon vectors in the PBW order, so the
    leading coefficient of each is 1.
    """
    if max_degree < 1:
        raise ValueError("max_degree must be at least 1")
    eng = engine()
    basis = monomials_up_to_degree(max_degree, parity=0, shift=0)
    gens = [generator(n).terms for n in GENERATORS]
    columns = []
    for m in basis:
        col = {}
        for g in range(8):
            gt = gens[g]
            tg = eng.mul_terms({m: 1}, gt)
            gtm = eng.mul_terms(gt, {m: 1})
            sign = 1 if PARITY[g] else -1
            for mm, c in tg.items():
                _add_into(col, (g, mm), c)
            for mm, c in gtm.items():
                _add_into(col, (g, mm), sign * c)
        columns.append(col)
    rows_index = sorted({k for col in columns for k in col})
    pos = {k: i for i, k in enumerate(rows_index)}
    matrix = [[Fraction(0)] * len(basis) for _ in rows_index]
    for j, col in enumerate(columns):
        for k, c in col.items():
            matrix[pos[k]][j] = Fraction(c)
    # order unknowns so that the highest PBW monomials come first: pivoting
    # then normalizes the leading coefficient of every basis vector to 1
    perm = list(range(len(basis)))[::-1]
    permuted = [[row[j] for j in perm] for row in matrix]
    null = linalg.nullspace(permuted)
    out = []
    for vec in null:
        terms = {basis[perm[j]]: vec[j] for j in range(len(perm)) if vec[j]}
        el = SuperElement(terms)
        lead = el.leading()[1]
        out.append(el * (1 / Fraction(lead)))
    out.sort(key=lambda e: _mono_sort_key(e.leading()[0]))
    return out
