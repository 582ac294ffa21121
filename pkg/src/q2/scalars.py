"""Exact scalars: rationals and the ring ``Q(i)[s1, s2]/(s1^2 - l1, s2^2 - l2)``.

A :class:`Scalar` is a sparse Q-linear combination of the eight basis
monomials ``1, i, s1, i*s1, s2, i*s2, s1*s2, i*s1*s2``.  Basis monomials are
encoded as 3-bit integers (bit 0 = ``i``, bit 1 = ``s1``, bit 2 = ``s2``), so the
product of two basis monomials is a rational multiple of their XOR.

Arithmetic that produces a purely rational value returns a plain
:class:`fractions.Fraction`; every rational is a scalar in every context.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from fractions import Fraction
from functools import cached_property
from typing import Union

__all__ = [
    "Weight",
    "ScalarContext",
    "Scalar",
    "ZeroDivisor",
    "ContextMismatch",
    "make_scalar_context",
    "scalar_div",
    "to_fraction",
    "is_rational",
    "parse_rational",
    "parse_weight",
    "rational_sqrt",
    "ALPHA",
]

BASIS_NAMES = ("1", "i", "s1", "i*s1", "s2", "i*s2", "s1*s2", "i*s1*s2")
_I, _S1, _S2 = 1, 2, 4


class ZeroDivisor(ArithmeticError):
    """Division by a nonzero element that is not a unit of the ring."""


class ContextMismatch(ValueError):
    pass


def to_fraction(x) -> Fraction:
    if isinstance(x, Fraction):
        return x
    if isinstance(x, int):
        return Fraction(x)
    if isinstance(x, str):
        return parse_rational(x)
    raise TypeError(f"not a rational: {x!r}")


def parse_rational(text: str) -> Fraction:
    text = text.strip()
    if not re.fullmatch(r"[+-]?\d+(/\d+)?", text):
        raise ValueError(f"bad rational literal {text!r}")
    return Fraction(text)


def rational_sqrt(q: Fraction) -> Fraction | None:
    """Nonnegative rational square root of ``q`` if it exists."""
    if q < 0:
        return None
    n, d = q.numerator, q.denominator
    rn, rd = _isqrt_exact(n), _isqrt_exact(d)
    if rn is None or rd is None:
        return None
    return Fraction(rn, rd)


def _isqrt_exact(n: int) -> int | None:
    import math

    r = math.isqrt(n)
    return r if r * r == n else None


@dataclass(frozen=True, order=True)
class Weight:
    """A weight ``(l1, l2)`` with rational coordinates."""

    l1: Fraction
    l2: Fraction

    def __init__(self, l1, l2):
        object.__setattr__(self, "l1", to_fraction(l1))
        object.__setattr__(self, "l2", to_fraction(l2))

    def __add__(self, other: "Weight") -> "Weight":
        return Weight(self.l1 + other.l1, self.l2 + other.l2)

    def __sub__(self, other: "Weight") -> "Weight":
        return Weight(self.l1 - other.l1, self.l2 - other.l2)

    def __neg__(self) -> "Weight":
        return Weight(-self.l1, -self.l2)

    def __mul__(self, k) -> "Weight":
        k = to_fraction(k)
        return Weight(self.l1 * k, self.l2 * k)

    __rmul__ = __mul__

    def __iter__(self):
        yield self.l1
        yield self.l2

    def __str__(self) -> str:
        return f"{self.l1},{self.l2}"

    def __repr__(self) -> str:
        return f"Weight({self.l1}, {self.l2})"

    @property
    def diff(self) -> Fraction:
        """``l1 - l2``, the eigenvalue of ``H1 - H2``."""
        return self.l1 - self.l2

    @property
    def charge(self) -> Fraction:
        """``l1 + l2``, the eigenvalue of the central element ``H1 + H2``."""
        return self.l1 + self.l2

    def is_zero(self) -> bool:
        return self.l1 == 0 and self.l2 == 0

    def is_integral(self) -> bool:
        return self.diff.denominator == 1

    def is_strongly_integral(self) -> bool:
        return self.l1.denominator == 1 and self.l2.denominator == 1

    def is_dominant(self) -> bool:
        return self.is_integral() and self.diff >= 1

    def is_regular(self) -> bool:
        return self.l1 != self.l2

    def is_typical(self) -> bool:
        return self.charge != 0

    def is_strongly_typical(self) -> bool:
        return self.is_typical() and self.l1 != 0 and self.l2 != 0

    def classify(self) -> dict:
        return {
            "integral": self.is_integral(),
            "dominant": self.is_dominant(),
            "regular": self.is_regular(),
            "typical": self.is_typical(),
            "strongly_typical": self.is_strongly_typical(),
        }


ALPHA = Weight(1, -1)


def parse_weight(text: str) -> Weight:
    """Parse ``"p/q,r/s"`` into a :class:`Weight`."""
    parts = text.replace("(", "").replace(")", "").split(",")
    if len(parts) != 2:
        raise ValueError(f"weight literal needs two coordinates: {text!r}")
    return Weight(parse_rational(parts[0]), parse_rational(parts[1]))


# A root is described by (kind, q, with_i):
#   ("sym", None, False)       the symbolic generator s_j
#   ("rat", q, with_i)         s_j := q or i*q
#   ("coupled", q, with_i)     s2 := q*s1 or i*q*s1 (only for j = 2)
def _classify_root(lam: Fraction):
    q = rational_sqrt(lam)
    if q is not None:
        return ("rat", q, False)
    q = rational_sqrt(-lam)
    if q is not None:
        return ("rat", q, True)
    return ("sym", None, False)


class ScalarContext:
    """Reduction rules for ``s1 = sqrt(l1)`` and ``s2 = sqrt(l2)``.

    ``couple_roots`` additionally fixes ``sqrt(l2)`` as a rational (or
    ``i``-rational) multiple of ``sqrt(l1)`` whenever ``l2/l1`` is plus or minus a
    rational square.  With it the ring is always a field.
    """

    def __init__(self, weight: Weight, couple_roots: bool = False):
        self.weight = weight
        self.l1, self.l2 = weight.l1, weight.l2
        self.couple_roots = couple_roots
        r1 = _classify_root(self.l1)
        r2 = _classify_root(self.l2)
        if couple_roots and r1[0] == "sym" and r2[0] == "sym":
            ratio = self.l2 / self.l1
            q = rational_sqrt(ratio)
            if q is not None:
                r2 = ("coupled", q, False)
            else:
                q = rational_sqrt(-ratio)
                if q is not None:
                    r2 = ("coupled", q, True)
        self.root1, self.root2 = r1, r2
        self.allowed = tuple(
            b
            for b in range(8)
            if not (b & _S1 and r1[0] != "sym") and not (b & _S2 and r2[0] != "sym")
        )
        self._table = {(a, b): self._reduce(a ^ b, self._raw_coef(a, b)) for a in self.allowed for b in self.allowed}

    @property
    def key(self):
        return (self.l1, self.l2, self.couple_roots)

    def __eq__(self, other):
        return isinstance(other, ScalarContext) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    def __repr__(self):
        return f"ScalarContext({self.weight!r}, couple_roots={self.couple_roots})"

    def _raw_coef(self, a: int, b: int) -> Fraction:
        c = Fraction(1)
        both = a & b
        if both & _I:
            c = -c
        if both & _S1:
            c *= self.l1
        if both & _S2:
            c *= self.l2
        return c

    @staticmethod
    def _times_i(idx: int, coef: Fraction):
        if idx & _I:
            return idx ^ _I, -coef
        return idx | _I, coef

    def _reduce(self, idx: int, coef: Fraction):
        """Rewrite ``coef * basis[idx]`` using the eliminated roots."""
        kind, q, with_i = self.root1
        if idx & _S1 and kind == "rat":
            idx ^= _S1
            coef *= q
            if with_i:
                idx, coef = self._times_i(idx, coef)
        kind, q, with_i = self.root2
        if idx & _S2 and kind != "sym":
            idx ^= _S2
            coef *= q
            if with_i:
                idx, coef = self._times_i(idx, coef)
            if kind == "coupled":
                if idx & _S1:
                    idx ^= _S1
                    coef *= self.l1
                else:
                    idx |= _S1
        return idx, coef

    @cached_property
    def is_field(self) -> bool:
        """False when the ring may contain zero divisors."""
        if self.root1[0] != "sym" or self.root2[0] != "sym":
            return True
        prod = self.l1 * self.l2
        return rational_sqrt(prod) is None and rational_sqrt(-prod) is None

    def sqrt1(self):
        """The fixed square root of ``l1`` as an element of this ring."""
        return self.embed_basis(_S1)

    def sqrt2(self):
        return self.embed_basis(_S2)

    def i(self):
        return self.embed_basis(_I)

    def embed_basis(self, idx: int, coef=1):
        idx, c = self._reduce(idx, to_fraction(coef))
        return Scalar._make(self, {idx: c} if c else {})

    def describe(self) -> dict:
        def root_text(r, j):
            kind, q, with_i = r
            if kind == "sym":
                return f"s{j}"
            if kind == "rat":
                base = f"{q}"
            else:
                base = "s1" if q == 1 else f"{q}*s1"
            return f"i*{base}" if with_i else base

        return {
            "lambda": str(self.weight),
            "sqrt_l1": root_text(self.root1, 1),
            "sqrt_l2": root_text(self.root2, 2),
            "field": self.is_field,
            "couple_roots": self.couple_roots,
        }


def make_scalar_context(weight: Weight, couple_roots: bool = False) -> ScalarContext:
    return _context_cache(weight, couple_roots)


_CONTEXTS: dict = {}


def _context_cache(weight: Weight, couple_roots: bool) -> ScalarContext:
    key = (weight, couple_roots)
    ctx = _CONTEXTS.get(key)
    if ctx is None:
        ctx = _CONTEXTS[key] = ScalarContext(weight, couple_roots)
    return ctx


Number = Union[int, Fraction, "Scalar"]


class Scalar:
    """Immutable element of a :class:`ScalarContext` ring."""

    __slots__ = ("ctx", "terms")

    def __init__(self, ctx: ScalarContext, coefficients: dict | None = None):
        terms: dict[int, Fraction] = {}
        for name_or_idx, c in (coefficients or {}).items():
            idx = BASIS_NAMES.index(name_or_idx) if isinstance(name_or_idx, str) else int(name_or_idx)
            ridx, rc = ctx._reduce(idx, to_fraction(c))
            if rc:
                terms[ridx] = terms.get(ridx, 0) + rc
                if not terms[ridx]:
                    del terms[ridx]
        self.ctx = ctx
        self.terms = terms

    @classmethod
    def _make(cls, ctx, terms):
        obj = object.__new__(cls)
        obj.ctx = ctx
        obj.terms = terms
        return obj

    # -- coercion helpers -------------------------------------------------
    def _coerce(self, other):
        if isinstance(other, Scalar):
            if other.ctx is not self.ctx and other.ctx != self.ctx:
                raise ContextMismatch(f"{self.ctx!r} vs {other.ctx!r}")
            return other.terms
        if isinstance(other, (int, Fraction)):
            return {0: Fraction(other)} if other else {}
        return None

    def _wrap(self, terms):
        if not terms:
            return Fraction(0)
        if len(terms) == 1 and 0 in terms:
            return terms[0]
        return Scalar._make(self.ctx, terms)

    # -- arithmetic -------------------------------------------------------
    def __add__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.items():
            s = out.get(k, 0) + v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._wrap(out)

    __radd__ = __add__

    def __neg__(self):
        return Scalar._make(self.ctx, {k: -v for k, v in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        out = dict(self.terms)
        for k, v in o.items():
            s = out.get(k, 0) - v
            if s:
                out[k] = s
            else:
                out.pop(k, None)
        return self._wrap(out)

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                return Fraction(0)
            return self._wrap({k: v * other for k, v in self.terms.items()})
        o = self._coerce(other)
        if o is None:
            return NotImplemented
        table = self.ctx._table
        out: dict[int, Fraction] = {}
        for a, ca in self.terms.items():
            for b, cb in o.items():
                idx, c = table[a, b]
                s = out.get(idx, 0) + c * ca * cb
                if s:
                    out[idx] = s
                else:
                    out.pop(idx, None)
        return self._wrap(out)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return (1 / self) ** (-n)
        result: Number = Fraction(1)
        base: Number = self
        while n:
            if n & 1:
                result = base * result
            base = base * base
            n >>= 1
        return result

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            if not other:
                raise ZeroDivisionError("division by zero")
            return self._wrap({k: v / other for k, v in self.terms.items()})
        if isinstance(other, Scalar):
            return self * other.inverse()
        return NotImplemented

    def __rtruediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.inverse() * other
        return NotImplemented

    def _map(self, flip_bits: int):
        """Apply the automorphism negating the basis letters in ``flip_bits``."""
        return Scalar._make(
            self.ctx,
            {k: (-v if bin(k & flip_bits).count("1") % 2 else v) for k, v in self.terms.items()},
        )

    def conjugate(self):
        return self._map(_I)

    def inverse(self):
        if not self.terms:
            raise ZeroDivisionError("division by zero")
        s1 = self._map(_S1)
        n1 = self * s1
        n1s2 = n1._map(_S2) if isinstance(n1, Scalar) else n1
        n2 = n1 * n1s2
        n2c = n2.conjugate() if isinstance(n2, Scalar) else n2
        n3 = n2 * n2c
        if isinstance(n3, Scalar) or not n3:
            raise ZeroDivisor(f"{self} is not invertible in {self.ctx!r}")
        return s1 * n1s2 * n2c / n3

    # -- comparisons --------------------------------------------------------
    def __bool__(self):
        return bool(self.terms)

    def __eq__(self, other):
        if isinstance(other, Scalar):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, (int, Fraction)):
            if not other:
                return not self.terms
            return self.terms == {0: other}
        return NotImplemented

    def __hash__(self):
        return hash((self.ctx.key, frozenset(self.terms.items())))

    def coefficient(self, name: str) -> Fraction:
        return self.terms.get(BASIS_NAMES.index(name), Fraction(0))

    def coefficients(self) -> dict[str, Fraction]:
        return {BASIS_NAMES[k]: v for k, v in sorted(self.terms.items())}

    def __repr__(self):
        return f"Scalar({self})"

    def __str__(self):
        return format_scalar(self)


def is_rational(x) -> bool:
    return isinstance(x, (int, Fraction))


def scalar_div(a: Number, b: Number) -> Number:
    """``a / b``; raises :class:`ZeroDivisor` for non-unit divisors."""
    if isinstance(b, Scalar):
        return a * b.inverse() if isinstance(a, Scalar) else b.inverse() * a
    b = to_fraction(b)
    if not b:
        raise ZeroDivisionError("division by zero")
    if isinstance(a, Scalar):
        return a / b
    return to_fraction(a) / b


def format_scalar(x) -> str:
    """Canonical text form, e.g. ``1/2 + 3*i*s1``."""
    if not isinstance(x, Scalar):
        return str(to_fraction(x))
    parts = []
    for idx, c in sorted(x.terms.items()):
        name = BASIS_NAMES[idx]
        if idx == 0:
            body = str(abs(c))
        elif abs(c) == 1:
            body = name
        else:
            body = f"{abs(c)}*{name}"
        sign = "-" if c < 0 else "+"
        parts.append((sign, body))
    if not parts:
        return "0"
    text = ("-" if parts[0][0] == "-" else "") + parts[0][1]
    for sign, body in parts[1:]:
        text += f" {sign} {body}"
    return text
