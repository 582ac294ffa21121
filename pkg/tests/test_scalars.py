from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from q2.scalars import (
    BASIS_NAMES,
    Weight,
    ZeroDivisor,
    format_scalar,
    make_scalar_context,
    parse_weight,
    scalar_div,
)

small_q = st.fractions(min_value=-5, max_value=5, max_denominator=4)
CONTEXTS = [Weight(Fraction(1, 3), Fraction(-1, 3)), Weight(2, 3), Weight(Fraction(5, 2), Fraction(1, 3)), Weight(1, 0)]


def scalar_from(ctx, coefs):
    out = Fraction(0)
    for idx, c in zip(range(8), coefs):
        if c:
            out = out + ctx.embed_basis(idx, c)
    return out


def to_sympy(x, lam: Weight):
    """Independent evaluation: i, s1, s2 become I, sqrt(l1), sqrt(l2)."""
    if not hasattr(x, "terms"):
        return sympy.Rational(x.numerator, x.denominator)
    sym = {"1": 1, "i": sympy.I, "s1": sympy.sqrt(sympy.Rational(str(lam.l1))), "s2": sympy.sqrt(sympy.Rational(str(lam.l2)))}
    total = 0
    for idx, c in x.terms.items():
        term = sympy.Rational(c.numerator, c.denominator)
        for part in BASIS_NAMES[idx].split("*"):
            term *= sym[part]
        total += term
    return total


scalars_st = st.tuples(st.sampled_from(range(len(CONTEXTS))), st.lists(small_q, min_size=8, max_size=8))


def test_context_rational_roots():
    ctx = make_scalar_context(Weight(1, 0))
    assert ctx.sqrt1() == 1
    assert ctx.sqrt2() == 0
    assert ctx.is_field


def test_context_symbolic_roots():
    ctx = make_scalar_context(Weight(Fraction(1, 3), Fraction(-1, 3)))
    d = ctx.describe()
    assert (d["sqrt_l1"], d["sqrt_l2"]) == ("s1", "s2")
    assert ctx.sqrt2() * ctx.sqrt2() == Fraction(-1, 3)


def test_context_equal_nonsquares_flags_zero_divisors():
    ctx = make_scalar_context(Weight(2, 2))
    s1, s2 = ctx.sqrt1(), ctx.sqrt2()
    assert s1 != s2
    assert (s1 - s2) * (s1 + s2) == 0
    assert not ctx.is_field


def test_div_examples():
    ctx = make_scalar_context(Weight(Fraction(1, 3), Fraction(-1, 3)))
    assert scalar_div(ctx.i() * ctx.sqrt1(), ctx.sqrt1()) == ctx.i()
    assert scalar_div(Fraction(5, 3), -2) == Fraction(-5, 6)
    ctx2 = make_scalar_context(Weight(2, 2))
    with pytest.raises(ZeroDivisor):
        scalar_div(Fraction(1), ctx2.sqrt1() - ctx2.sqrt2())
    with pytest.raises(ZeroDivisionError):
        scalar_div(Fraction(1), Fraction(0))


@settings(max_examples=500, deadline=None)
@given(st.sampled_from(range(len(CONTEXTS))), st.lists(small_q, min_size=24, max_size=24))
def test_ring_axioms(ci, coefs):
    ctx = make_scalar_context(CONTEXTS[ci])
    a, b, c = (scalar_from(ctx, coefs[8 * j : 8 * j + 8]) for j in range(3))
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c


@settings(max_examples=40, deadline=None)
@given(scalars_st, scalars_st)
def test_product_matches_sympy(x, y):
    ci = x[0]
    lam = CONTEXTS[ci]
    ctx = make_scalar_context(lam)
    a, b = scalar_from(ctx, x[1]), scalar_from(ctx, y[1])
    assert sympy.simplify(
        to_sympy(a * b, lam) - to_sympy(a, lam) * to_sympy(b, lam)
    ) == 0


@settings(max_examples=100, deadline=None)
@given(st.sampled_from(range(len(CONTEXTS))), st.lists(st.sampled_from(["i", "s1", "s2"]), min_size=1, max_size=4))
def test_reduction_idempotent(ci, word):
    ctx = make_scalar_context(CONTEXTS[ci])
    gens = {"i": ctx.i(), "s1": ctx.sqrt1(), "s2": ctx.sqrt2()}
    x = Fraction(1)
    for g in word:
        x = x * gens[g]
    if hasattr(x, "terms"):
        again = Fraction(0)
        for idx, c in x.terms.items():
            again = again + ctx.embed_basis(idx, c)
        assert again == x


@pytest.mark.parametrize("lam", CONTEXTS + [Weight(2, 2), Weight(-4, 7)])
def test_roots_square_to_lambda(lam):
    for couple in (False, True):
        ctx = make_scalar_context(lam, couple_roots=couple)
        assert ctx.sqrt1() * ctx.sqrt1() == lam.l1
        assert ctx.sqrt2() * ctx.sqrt2() == lam.l2


def test_coupled_roots_give_a_field():
    ctx = make_scalar_context(Weight(2, 2), couple_roots=True)
    assert ctx.is_field
    assert ctx.sqrt1() == ctx.sqrt2()


@settings(max_examples=100, deadline=None)
@given(scalars_st)
def test_inverse(x):
    ci, coefs = x
    ctx = make_scalar_context(CONTEXTS[ci])
    a = scalar_from(ctx, coefs)
    if not a:
        return
    assert a * scalar_div(Fraction(1), a) == 1


def test_weight_literals_and_vocabulary():
    w = parse_weight("1/3,-1/3")
    assert w == Weight(Fraction(1, 3), Fraction(-1, 3))
    assert str(w) == "1/3,-1/3"
    assert not w.is_typical() and not w.is_integral()
    assert Weight(2, 1).is_strongly_typical()
    assert Weight(1, 0).is_typical() and not Weight(1, 0).is_strongly_typical()
    assert Weight(3, 1).is_dominant() and not Weight(0, 1).is_dominant()
    with pytest.raises(ValueError):
        parse_weight("1/2")


def test_format():
    ctx = make_scalar_context(Weight(Fraction(1, 3), Fraction(-1, 3)))
    assert format_scalar(Fraction(1, 2) + 3 * ctx.i() * ctx.sqrt1()) == "1/2 + 3*i*s1"
