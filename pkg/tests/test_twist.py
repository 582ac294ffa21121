from fractions import Fraction

import pytest
import sympy
from hypothesis import given, settings, strategies as st

from q2.gmod import casimir_spectrum
from q2.modules import find_isomorphism, intertwiners, restrict_window
from q2.qmod import highest_weight_simple, restrict
from q2.scalars import Weight
from q2.subalg import central_charge_zero
from q2.superalg import GENERATORS, SuperElement, generator, monomials_up_to_degree
from q2.twist import (
    LocalizedElement,
    _ad_powers,
    binom,
    conjugate_by_f,
    dense_family_scan,
    localize,
    theta,
    twist_module,
)

H = Fraction(1, 3)
G = {n: generator(n) for n in GENERATORS}
rationals = st.fractions(min_value=-3, max_value=3, max_denominator=4)
L = LocalizedElement.from_element


def test_binom():
    assert binom(Fraction(1, 2), 2) == Fraction(-1, 8)
    assert binom(5, 2) == 10
    assert binom(-1, 3) == -1
    assert binom(3, 0) == 1


@pytest.mark.parametrize("z", [Fraction(1, 2), Fraction(3), Fraction(-2, 3)])
def test_theta_of_e(z):
    finv = LocalizedElement.f_power(-1)
    expected = L(G["E"]) - L(G["H1"] - G["H2"]) * finv * z - finv * (z * (z - 1))
    assert theta(z, G["E"]) == expected
    assert theta(z, G["F"]) == L(G["F"])
    assert theta(z, G["H1"]) == L(G["H1"] + z)


@pytest.mark.parametrize("u", ["E", "H1", "bE", "bH1"])
def test_theta_one_is_conjugation(u):
    assert theta(1, G[u]) == conjugate_by_f(1, G[u])


def _interpolated(u, z):
    """theta_z(u) from integer conjugations, interpolated in z."""
    d = len(_ad_powers(u)) - 1
    pts = list(range(-((d + 1) // 2), d // 2 + 1))
    values = {n: conjugate_by_f(n, u) for n in pts}
    keys = set().union(*(v.terms for v in values.values()))
    x = sympy.Symbol("x")
    out = {}
    for key in keys:
        data = [(n, sympy.Rational(str(values[n].terms.get(key, 0)))) for n in pts]
        poly = sympy.interpolate(data, x)
        val = sympy.Rational(str(poly.subs(x, sympy.Rational(z.numerator, z.denominator))))
        out[key] = Fraction(int(val.p), int(val.q))
    return LocalizedElement(out), pts


@settings(max_examples=25, deadline=None)
@given(st.sampled_from(monomials_up_to_degree(3)), rationals)
def test_polynomial_in_z(mono, z):
    u = SuperElement({mono: Fraction(1)})
    interp, pts = _interpolated(u, z)
    assert theta(z, u) == interp
    if len(pts) <= 5:
        assert set(pts) <= {0, 1, -1, 2, -2}


@settings(max_examples=20, deadline=None)
@given(rationals, rationals, st.sampled_from(GENERATORS))
def test_composition(z1, z2, g):
    assert theta(z1, theta(z2, G[g])) == theta(z1 + z2, G[g])


@settings(max_examples=20, deadline=None)
@given(rationals, st.sampled_from(GENERATORS), st.sampled_from(GENERATORS))
def test_multiplicative(z, a, b):
    assert theta(z, G[a] * G[b]) == theta(z, G[a]) * theta(z, G[b])


@pytest.fixture(scope="module")
def atypical_localized():
    return localize(highest_weight_simple(Weight(H, -H), 10), window=9)


def test_integer_twist_isomorphic(atypical_localized):
    base = restrict_window(atypical_localized, -6, 6)
    for m in (1, -2):
        t = restrict_window(twist_module(atypical_localized, m), -6, 6)
        assert find_isomorphism(intertwiners(base, t, window=5)) is not None


def test_twist_back(atypical_localized):
    z = Fraction(1, 2)
    back = twist_module(twist_module(atypical_localized, z), -z)
    a, b = restrict_window(atypical_localized, -6, 6), restrict_window(back, -6, 6)
    assert find_isomorphism(intertwiners(a, b, window=5)) is not None


def test_construction_twist(atypical_localized):
    t = restrict_window(twist_module(atypical_localized, Fraction(-10, 3)), -6, 6)
    assert t.relation_audit() == []
    assert central_charge_zero(t)
    assert casimir_spectrum(restrict(t, "fullRes")) == [Fraction(25, 9)]


def test_family_scan():
    res = dense_family_scan(highest_weight_simple(Weight(H, -H), 10), [0, 1, Fraction(1, 2)], window=6)
    by_z = {r["z"]: r for r in res["samples"]}
    assert by_z["1/2"]["simple"] is True
    pairs = {(p["z"], p["z'"]): p for p in res["pairs"]}
    assert pairs["0", "1"]["isomorphic"] is True
    assert pairs["0", "1/2"]["isomorphic"] is False
    assert pairs["0", "1/2"]["reason"] == "different weight supports"
    assert len(set(res["nonsimple_cosets"]) - {"0"}) <= 1
