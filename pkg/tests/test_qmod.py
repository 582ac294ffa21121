from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from q2 import linalg
from q2.gmod import composition_factors, gl2_dense, gl2_simple, gl2_verma
from q2.modules import find_isomorphism, intertwiners, parity_flip
from q2.qmod import (
    annihilates,
    clifford,
    highest_weight_simple,
    induce,
    radical,
    restrict,
    simple_top,
    singular_vectors,
    verma_super,
)
from q2.scalars import Weight
from q2.superalg import casimir_element, generator

H = Fraction(1, 3)
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=3)
weights = st.builds(Weight, rationals, rationals)


def same_data(a, b):
    return a.dims == b.dims and a.actions == b.actions and (a.kmin, a.kmax) == (b.kmin, b.kmax)


def test_clifford_examples():
    v = clifford(Weight(1, 0))
    assert v.dims == {0: (1, 1)}
    assert v.action("bH1", 0) == [[0, 1], [1, 0]]
    assert linalg.is_zero(v.action("bH2", 0))
    assert clifford(Weight(0, 0)).dims == {0: (1, 0)}


@pytest.mark.parametrize("lam,expected", [((1, 0), True), ((0, -2), True), ((1, 1), False), ((2, -2), False), ((0, 0), False)])
def test_clifford_parity_intertwiners(lam, expected):
    v = clifford(Weight(*lam))
    assert bool(intertwiners(v, parity_flip(v))) is expected


@settings(max_examples=15, deadline=None)
@given(weights.filter(lambda w: not w.is_zero()))
def test_verma_dims_and_relations(lam):
    m = verma_super(clifford(lam), 4)
    assert m.dims[0] == (1, 1)
    assert all(m.dims[k] == (2, 2) for k in range(-4, 0))
    assert m.relation_audit() == []


@pytest.mark.parametrize("lam", [Weight(Fraction(5, 2), H), Weight(3, 1), Weight(H, -H)])
def test_verma_even_character(lam):
    m = restrict(verma_super(clifford(lam), 10), "evenPart")
    a, b = gl2_verma(lam, 10), gl2_verma(lam - Weight(1, -1), 9)
    for k in m.krange():
        w = m.weight(k)
        expected = sum(1 for g in (a, b) if g.index_of(w) in set(g.krange()))
        assert m.dims[k][0] == expected


def test_trivial_verma_even_part():
    m = restrict(verma_super(clifford(Weight(0, 0)), 10), "evenPart")
    assert all(m.dims[k] == (1, 0) for k in m.krange())


def test_simple_examples():
    l31 = highest_weight_simple(Weight(3, 1), 10)
    assert sum(e for e, _ in l31.dims.values()) == 4
    assert sum(o for _, o in l31.dims.values()) == 4
    assert l31.closed_bottom
    at = highest_weight_simple(Weight(H, -H), 10)
    assert all(at.dims[k] == (1, 1) for k in at.krange())
    anti = verma_super(clifford(Weight(0, 1)), 10)
    assert all(v == [] for v in radical(anti).values())


@pytest.mark.parametrize("lam", [Weight(3, 1), Weight(2, 1), Weight(1, 0), Weight(H, -H), Weight(1, 1), Weight(0, 0)])
def test_simple_top_has_no_radical(lam):
    n = highest_weight_simple(lam, 8)
    assert all(v == [] for v in radical(n).values())
    assert n.relation_audit() == []


@pytest.mark.parametrize("lam", [Weight(3, 1), Weight(2, 1), Weight(1, 0), Weight(Fraction(5, 2), H)])
def test_typical_odd_square(lam):
    n = highest_weight_simple(lam, 6)
    u = generator("bH1") + generator("bH2")
    for k in n.interior():
        op = n.element_matrix(u, k)[k]
        sq = linalg.matmul(op, op)
        assert linalg.is_zero(linalg.shift_diag(sq, lam.charge))
        assert linalg.rank(op) == n.dim(k)


def test_parity_flip_involution():
    n = highest_weight_simple(Weight(2, 1), 6)
    assert same_data(parity_flip(parity_flip(n)), n)
    triv = clifford(Weight(0, 0))
    assert parity_flip(triv).dims == {0: (0, 1)}
    assert intertwiners(triv, parity_flip(triv)) == []


def test_flip_of_verma_is_verma_of_flip():
    v = clifford(Weight(2, 1))
    a = parity_flip(verma_super(v, 4))
    b = verma_super(clifford(Weight(2, 1), True), 4)
    assert find_isomorphism(intertwiners(a, b)) is not None


def test_restriction_of_dominant_simple():
    fs = composition_factors(restrict(highest_weight_simple(Weight(3, 1), 10), "evenPart"))
    tops = sorted(label["top"] for label, _ in fs)
    assert tops == ["2,2", "3,1"]


def test_atypical_even_and_odd_parts_agree():
    m = verma_super(clifford(Weight(H, -H)), 8)
    even = restrict(m, "evenPart")
    odd = restrict(parity_flip(m), "evenPart")
    assert find_isomorphism(intertwiners(even, odd)) is not None


def test_restriction_factors():
    fs = composition_factors(restrict(highest_weight_simple(Weight(H, -H), 10), "fullRes"))
    assert sum(c for _, c in fs) == 2
    assert {Fraction(label["casimir"]) for label, _ in fs} == {Fraction(25, 9)}
    assert len(composition_factors(gl2_dense(0, Fraction(16, 9), 0, 8))) == 1


def test_annihilation_examples():
    lam = Weight(2, 1)
    n = highest_weight_simple(lam, 8)
    c = casimir_element()
    d = lam.diff
    assert annihilates(generator("H1") + generator("H2") - lam.charge, n)
    assert annihilates((c - (d + 1) ** 2) * (c - (d - 1) ** 2), n)
    big = Weight(Fraction(5, 2), H)
    m = highest_weight_simple(big, 8)
    db = big.diff
    assert not annihilates(c - (db + 1) ** 2, m)


def test_odd_cartan_difference_on_even_part():
    n = highest_weight_simple(Weight(H, -H), 8)
    assert annihilates(generator("bH1") - generator("bH2"), n, on="even")
    assert not annihilates(generator("bH1") - generator("bH2"), n, on="odd")


def test_induced_modules():
    d = induce(gl2_dense(1, Fraction(16, 9), 0, 6))
    for k in d.interior():
        assert d.dims[k] == (8, 8)
    assert d.relation_audit() == []
    triv = induce(gl2_simple(Weight(0, 0), 3))
    assert singular_vectors(triv)[0]


def test_simple_top_requires_verma():
    with pytest.raises(ValueError):
        simple_top(highest_weight_simple(Weight(2, 1), 3))


@pytest.mark.parametrize("lam", [Weight(H, -H), Weight(3, 1), Weight(Fraction(5, 2), H)])
def test_transpose_twist_gives_lowest_weight(lam):
    from q2.modules import transpose_twist

    n = highest_weight_simple(lam, 6)
    low = transpose_twist(n)
    assert low.relation_audit() == []
    assert low.weight(low.kmin) == -lam
    assert low.closed_bottom and low.closed_top == n.closed_bottom
    lowering = singular_vectors(low, raising=("F", "bF"))
    assert [k for k, v in lowering.items() if v] == [low.kmin]
