from fractions import Fraction

import pytest

from q2.qmod import highest_weight_simple
from q2.scalars import Weight
from q2.subalg import (
    SUBALGEBRAS,
    NotAtypical,
    as_quotient_view,
    cartan_top_simple,
    central_charge_zero,
    check_atypical_split,
    restrict_sq,
    sq_closure_defects,
    submodule_search,
)

H = Fraction(1, 3)


def test_sq_is_closed():
    assert sq_closure_defects() == []


def test_descriptions():
    assert SUBALGEBRAS["psq"].describe() == "psq: <E, F, H1, H2, bE, bF, bH> modulo H1+H2"


def test_restricted_module_relations():
    s = restrict_sq(highest_weight_simple(Weight(2, 1), 6))
    assert s.algebra == "sq"
    assert "bH" in s.generators and "bH1" not in s.generators
    assert s.relation_audit() == []


def test_quotient_views():
    n = highest_weight_simple(Weight(H, -H), 6)
    for name in ("pq", "psq"):
        v = as_quotient_view(n, name)
        assert v.algebra == name
        assert central_charge_zero(v)
        assert v.relation_audit() == []
    with pytest.raises(NotAtypical):
        as_quotient_view(highest_weight_simple(Weight(1, 0), 4), "pq")


def test_typical_restriction_stays_simple():
    s = restrict_sq(highest_weight_simple(Weight(2, 1), 4))
    assert sum(s.dim(k) for k in s.krange()) == 4
    found = submodule_search(s)
    whole = sorted((k, p) for k in s.krange() for p in (0, 1) if s.dims[k][p])
    assert found == [[], whole]
    assert cartan_top_simple(s)


def test_atypical_split():
    res = check_atypical_split(highest_weight_simple(Weight(H, -H), 8))
    assert res["split"]
    assert res["quotient_iso"]
    assert res["verma_iso"]
    with pytest.raises(NotAtypical):
        check_atypical_split(highest_weight_simple(Weight(1, 0), 4))
