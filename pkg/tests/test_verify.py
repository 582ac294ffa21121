import json

import pytest

from q2.verify import IN_SCOPE, REGISTRY, TRACE, UnknownCheck, load_samples, run_check, run_suite


def test_traceability():
    assert set(TRACE) == set(IN_SCOPE)
    covered = {REGISTRY[name].anchor for name in REGISTRY}
    assert covered == set(IN_SCOPE)
    for anchor, names in TRACE.items():
        assert names and all(REGISTRY[n].anchor == anchor for n in names)


def test_samples_cover_every_weight_class():
    s = load_samples()
    assert set(s["weights"]) == {
        "zero", "dominant_typical", "difference_one", "atypical_nonintegral",
        "regular_nonintegral", "singular_typical", "antidominant",
    }
    assert s["depth"] == 10 and s["dense_window"] == 12


def test_determinism():
    a = run_check("lemma4.cases", {"weights": ["3,1"], "depth": 10})
    b = run_check("lemma4.cases", {"weights": ["3,1"], "depth": 10})
    assert a.verdict == "pass"
    row = a.witnesses["3,1"]
    assert row["total_dim"] == 8
    assert sum(e for e, _ in row["dims"].values()) == 4
    assert a.dumps(timing=False) == b.dumps(timing=False)


def test_report_schema():
    r = run_check("algebra.pbw")
    data = json.loads(r.dumps())
    assert set(data) == {"check", "params", "verdict", "witnesses", "elapsed_ms"}
    assert data["verdict"] in ("pass", "fail", "inconclusive")


def test_unknown_check_and_params():
    with pytest.raises(UnknownCheck):
        run_check("lemma999.nothing")
    with pytest.raises(ValueError):
        run_check("algebra.pbw", {"depth": 3})


def test_suite_pattern():
    reports = run_suite("lemma*")
    assert len(reports) >= 6
    assert [r.check for r in reports] == sorted(r.check for r in reports)


def test_parity_check_with_strongly_typical_sample():
    r = run_check("prop51.parity", {"strongly_typical": "2,1"})
    assert r.verdict == "pass"
    assert r.witnesses["tau"] != "0"
    assert r.witnesses["strongly_typical_iso"] is False


def test_twist_family_check():
    r = run_check("lemma52.family", {"weight": "1/3,-1/3", "z_samples": ["0", "1", "1/2"]})
    assert r.verdict == "pass"


def test_rough_structure_reports_homology():
    (r,) = run_suite("prop41*")
    assert r.verdict == "pass"
    assert "homology" in json.dumps(r.witnesses)
