from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from q2 import linalg
from q2.gmod import (
    EmptyProjection,
    NotDense,
    casimir_matrix,
    casimir_spectrum,
    composition_factors,
    factor_casimirs,
    gl2_dense,
    gl2_simple,
    gl2_verma,
    tensor_finite,
    translate,
)
from q2.modules import find_isomorphism, intertwiners
from q2.scalars import Weight

rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3)
weights = st.builds(Weight, rationals, rationals)


def test_verma_examples():
    m = gl2_verma(Weight(3, 1), 5)
    assert m.action("E", -2) == [[2]]
    assert gl2_verma(Weight(0, 0), 5).action("E", -1) == [[0]]
    assert [m.dims[k] for k in m.krange()] == [(1, 0)] * 6


def test_simple_examples():
    assert gl2_simple(Weight(3, 1), 10).total_dim() == 3
    lam = Weight(Fraction(1, 3), Fraction(-1, 3))
    s, v = gl2_simple(lam, 8), gl2_verma(lam, 8)
    assert s.actions == v.actions and s.dims == v.dims
    one = gl2_simple(Weight(2, 2), 10)
    assert one.total_dim() == 1
    # E and F land in zero-dimensional spaces
    assert one.action("E", 0) == [] and one.action("F", 0) == []


def test_dense_examples():
    m = gl2_dense(0, 2, 0, 6)
    assert m.action("F", 0) == [[Fraction(1, 4)]]
    with pytest.raises(NotDense):
        gl2_dense(0, 1, 0, 6)
    gl2_dense(0, 4, 0, 6)


@settings(max_examples=25, deadline=None)
@given(weights, st.integers(1, 8))
def test_verma_and_simple_relations(lam, depth):
    for m in (gl2_verma(lam, depth), gl2_simple(lam, depth)):
        assert m.relation_audit() == []


@settings(max_examples=25, deadline=None)
@given(rationals, st.fractions(min_value=0, max_value=9, max_denominator=9), st.fractions(min_value=0, max_value=1, max_denominator=5))
def test_dense_invariants(charge, casimir, coset):
    try:
        m = gl2_dense(charge, casimir, coset, 5)
    except NotDense:
        return
    assert m.relation_audit() == []
    for k in m.interior():
        assert casimir_matrix(m, k) == [[casimir]]
        if k + 1 <= m.kmax:
            assert m.action("E", k)[0][0] != 0
            assert m.action("F", k + 1)[0][0] != 0


def test_tensor_product():
    m = gl2_dense(0, Fraction(16, 9), 0, 8)
    t = tensor_finite(m, 3)
    assert all(t.dim(k) == 3 for k in t.interior())
    assert t.relation_audit() == []
    spec = casimir_spectrum(t)
    assert 1 <= len(spec) <= 3
    # (delta+1)^2 = 16/9 gives delta = 1/3; the 3-dimensional factor moves delta by -2, 0, 2
    assert spec == sorted([Fraction(4, 9), Fraction(16, 9), Fraction(100, 9)])


def test_translate_out_and_back():
    m = gl2_dense(0, Fraction(16, 9), 0, 10)
    out = translate(m, Fraction(4, 9))
    assert all(out.dim(k) == 1 for k in out.interior())
    back = translate(out, Fraction(16, 9))
    assert all(back.dim(k) == 1 for k in back.interior())
    assert casimir_spectrum(back) == [Fraction(16, 9)]
    assert find_isomorphism(intertwiners(back, m, window=5)) is not None
    with pytest.raises(EmptyProjection):
        translate(m, 7)


def test_composition_factors():
    assert len(composition_factors(gl2_dense(0, Fraction(16, 9), 0, 8))) == 1
    fs = composition_factors(gl2_verma(Weight(0, 0), 8))
    kinds = sorted(label["kind"] for label, _ in fs)
    assert kinds == ["finite", "highest"]
    assert factor_casimirs(fs) == [1, 1]


def test_charpoly_and_generalized_kernel():
    a = [[Fraction(2), Fraction(1)], [Fraction(0), Fraction(2)]]
    assert linalg.charpoly(a) == [4, -4, 1]
    assert len(linalg.generalized_kernel(a, 2)) == 2
