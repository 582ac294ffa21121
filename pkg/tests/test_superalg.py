import itertools
from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from q2.qmod import highest_weight_simple
from q2.scalars import Weight
from q2.superalg import (
    GENERATORS,
    ODD_FIRST_ORDER,
    TRIANGULAR_ORDER,
    SuperElement,
    bracket,
    casimir_element,
    engine,
    find_anticenter,
    format_element,
    generator,
    monomials_up_to_degree,
    multiply,
)

# independent matrix realization: M(A, B) = [[A, B], [B, A]], odd iff B-block
UNIT = {
    "H1": (0, 0, 0), "E": (0, 0, 1), "F": (0, 1, 0), "H2": (0, 1, 1),
    "bH1": (1, 0, 0), "bE": (1, 0, 1), "bF": (1, 1, 0), "bH2": (1, 1, 1),
}


def block(name):
    b, r, c = UNIT[name]
    a = sympy.zeros(2, 2)
    a[r, c] = 1
    z = sympy.zeros(2, 2)
    return sympy.BlockMatrix([[a, z], [z, a]]).as_explicit() if b == 0 else sympy.BlockMatrix([[z, a], [a, z]]).as_explicit()


def parity(name):
    return UNIT[name][0]


def from_matrix(m) -> SuperElement:
    out = SuperElement()
    for name, (b, r, c) in UNIT.items():
        coef = m[r, c + 2] if b else m[r, c]
        if coef:
            out = out + generator(name) * Fraction(int(coef))
    # the realization is faithful: rebuilding must reproduce m
    rebuilt = sum((block(n) * int((m[UNIT[n][1], UNIT[n][2] + 2] if UNIT[n][0] else m[UNIT[n][1], UNIT[n][2]])) for n in UNIT), sympy.zeros(4, 4))
    assert rebuilt == m
    return out


def matrix_bracket(x, y):
    sign = -1 if parity(x) and parity(y) else 1
    return block(x) * block(y) - sign * block(y) * block(x)


G = {n: generator(n) for n in GENERATORS}


@pytest.mark.parametrize("x,y", list(itertools.product(GENERATORS, repeat=2)))
def test_bracket_matches_matrices(x, y):
    assert bracket(G[x], G[y]) == from_matrix(matrix_bracket(x, y))


def test_super_jacobi_all_triples():
    for x, y, z in itertools.product(GENERATORS, repeat=3):
        sign = -1 if parity(x) and parity(y) else 1
        lhs = bracket(G[x], bracket(G[y], G[z]))
        rhs = bracket(bracket(G[x], G[y]), G[z]) + sign * bracket(G[y], bracket(G[x], G[z]))
        assert lhs == rhs, (x, y, z)


@pytest.mark.parametrize(
    "text,expected",
    [
        (("E", "F"), "H1 - H2"),
        (("bE", "bF"), "H1 + H2"),
        (("bE", "bE"), "0"),
        (("E", "bF"), "bH1 - bH2"),
    ],
)
def test_bracket_examples(text, expected):
    assert format_element(bracket(G[text[0]], G[text[1]])) == expected


def test_multiply_examples():
    assert format_element(G["E"] * G["F"]) == "F*E + H1 - H2"
    assert format_element(G["bE"] * G["bF"]) == "-bF*bE + H1 + H2"
    assert G["bH1"] * G["bH1"] == G["H1"]


def test_pbw_count():
    assert len(monomials_up_to_degree(2)) == 41
    t = sympy.Symbol("t")
    series = sympy.series((1 + t) ** 4 / (1 - t) ** 4, t, 0, 3).removeO()
    assert sum(series.coeff(t, j) for j in range(3)) == 41


def _element(draw_terms):
    out = SuperElement()
    for mono, c in draw_terms:
        out = out + SuperElement({mono: Fraction(c)})
    return out


monos = st.sampled_from(monomials_up_to_degree(3))
elements = st.lists(st.tuples(monos, st.integers(-3, 3).filter(bool)), min_size=1, max_size=3).map(_element)


@settings(max_examples=200, deadline=None)
@given(elements, elements, elements)
def test_associativity(a, b, c):
    assert (a * b) * c == a * (b * c)


homogeneous = st.lists(monos, min_size=1, max_size=1).map(lambda ms: SuperElement({ms[0]: Fraction(1)}))


@settings(max_examples=100, deadline=None)
@given(homogeneous, homogeneous)
def test_parity_and_weight_multiplicative(a, b):
    p = a * b
    if not p:
        return
    assert p.parity() == (a.parity() + b.parity()) % 2
    assert p.weight() == a.weight() + b.weight()


@settings(max_examples=50, deadline=None)
@given(elements, elements)
def test_other_orders_agree(a, b):
    canon = engine()
    for order in (TRIANGULAR_ORDER, ODD_FIRST_ORDER):
        eng = engine(order)
        pa, pb = eng.convert(a.terms, canon), eng.convert(b.terms, canon)
        assert canon.convert(eng.mul_terms(pa, pb), eng) == (a * b).terms


def test_casimir():
    c = casimir_element()
    h = G["H1"] - G["H2"] + 1
    assert c == h * h + 4 * G["F"] * G["E"]
    for g in ("E", "F", "H1", "H2"):
        assert bracket(c, G[g]) == 0
    assert bracket(c, G["bE"]) != 0


def test_casimir_on_highest_weight():
    # c v = ((H1 - H2 + 1)^2 + 4FE) v with E v = 0
    lam = Weight(3, 1)
    assert (lam.diff + 1) ** 2 == 9
    m = highest_weight_simple(lam, 2)
    mat = m.element_matrix(casimir_element(), m.kmax)[m.kmax]
    assert mat == [[9, 0], [0, 9]]


def test_anticenter():
    assert find_anticenter(1) == []
    basis = find_anticenter(4)
    assert len(basis) >= 1
    for t in basis:
        assert t.parity() == 0
        for g in GENERATORS:
            x = G[g]
            if parity(g):
                assert multiply(t, x) + multiply(x, t) == 0
            else:
                assert multiply(t, x) - multiply(x, t) == 0


def test_anticenter_on_strongly_typical_module():
    t = find_anticenter(4)[0]
    n = highest_weight_simple(Weight(2, 1), 10)
    taus = set()
    for k in n.interior():
        mat = n.element_matrix(t, k)[k]
        e = n.dims[k][0]
        tau = mat[0][0]
        for i in range(n.dim(k)):
            for j in range(n.dim(k)):
                expected = 0 if i != j else (tau if i < e else -tau)
                assert mat[i][j] == expected
        taus.add(tau)
    assert len(taus) == 1 and taus.pop() != 0
