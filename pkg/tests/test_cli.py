import json
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from q2.cli import ElementSyntaxError, UnknownIdentifier, main, parse_element
from q2.scalars import Weight, make_scalar_context
from q2.superalg import SuperElement, casimir_element, format_element, monomials_up_to_degree

LAM = "1/3,-1/3"
CTX = make_scalar_context(Weight(Fraction(1, 3), Fraction(-1, 3)), couple_roots=True)
coefs = st.fractions(min_value=-5, max_value=5, max_denominator=6).filter(bool)
scalar_coefs = st.tuples(coefs, coefs).map(lambda t: t[0] + t[1] * CTX.i() * CTX.sqrt1())


def element(terms):
    return SuperElement({m: c for m, c in terms})


elements = st.lists(st.tuples(st.sampled_from(monomials_up_to_degree(3)), coefs), max_size=4).map(element)
scalar_elements = st.lists(st.tuples(st.sampled_from(monomials_up_to_degree(2)), scalar_coefs), max_size=3).map(element)


@settings(max_examples=200, deadline=None)
@given(elements)
def test_round_trip(x):
    assert parse_element(format_element(x)) == x


@settings(max_examples=50, deadline=None)
@given(scalar_elements)
def test_round_trip_with_scalars(x):
    assert parse_element(format_element(x), LAM) == x


def test_parse_examples():
    assert format_element(parse_element("E*F")) == "F*E + H1 - H2"
    assert format_element(parse_element("[bE,bF]")) == "H1 + H2"
    assert parse_element("(H1-H2+1)*(H1-H2+1) + 4*F*E") == casimir_element()
    assert format_element(parse_element("F^2*H1*bF*bE")) == "F^2*H1*bF*bE"


@pytest.mark.parametrize("text,pos", [("E*", 2), ("E+*F", 2), ("(E", 2), ("[E F]", 3), ("E % F", 2), ("1/0", 2)])
def test_syntax_errors(text, pos):
    with pytest.raises(ElementSyntaxError) as info:
        parse_element(text)
    assert info.value.position == pos


def test_unknown_identifiers():
    with pytest.raises(UnknownIdentifier):
        parse_element("G*E")
    with pytest.raises(UnknownIdentifier):
        parse_element("i*E")
    assert parse_element("s1*s1", LAM) == SuperElement.scalar(Fraction(1, 3))


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def test_normal_form_command(capsys):
    code, out, _ = run(capsys, "normal-form", "E*F")
    assert code == 0 and out.strip() == "F*E + H1 - H2"
    code, out, _ = run(capsys, "normal-form", "[bE,bF]", "--json")
    assert json.loads(out) == {"input": "[bE,bF]", "normal_form": "H1 + H2"}


@pytest.mark.parametrize(
    "argv",
    [
        ["bracket-table"],
        ["casimir", "--lambda", "3,1"],
        ["anticenter", "--max-degree", "4"],
        ["build-module", "--kind", "simple", "--lambda", "2,1", "--depth", "4"],
        ["restrict", "--kind", "simple", "--lambda", "3,1", "--mode", "evenPart"],
        ["factors", "--kind", "simple", "--lambda", "2,1", "--depth", "6"],
        ["twist", "--lambda", LAM, "--z", "-10/3"],
        ["scan-family", "--lambda", LAM, "--zs", "0;1/2", "--window", "5"],
        ["build-module", "--kind", "dense", "--casimir", "16/9", "--window", "4"],
    ],
)
def test_commands_emit_json(capsys, argv):
    code, out, _ = run(capsys, *argv, "--json")
    assert code == 0
    json.loads(out)
    code, out, _ = run(capsys, *argv)
    assert code == 0 and out.strip()


def test_twist_command_values(capsys):
    code, out, _ = run(capsys, "twist", "--lambda", LAM, "--z", "-10/3", "--json")
    data = json.loads(out)
    assert data["central_charge_zero"] is True
    assert data["casimir_spectrum"] == ["25/9"]


def test_anticenter_command(capsys):
    code, out, _ = run(capsys, "anticenter", "--max-degree", "4", "--json")
    data = json.loads(out)
    assert data["basis"]
    assert data["tau"]["2,1"]["tau"] != "0"
    assert data["tau"]["2,1"]["parity_iso"] is False
    assert data["tau"]["1,0"]["parity_iso"] is True


def test_build_and_dump(capsys, tmp_path):
    path = tmp_path / "m.json"
    code, _, _ = run(capsys, "build-module", "--kind", "verma", "--lambda", "3,1", "--depth", "10", "--dump", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["algebra"] == "q" and data["window"] == [-10, 0]
    assert (len(data["spaces"]["3,1"]["even"]), len(data["spaces"]["3,1"]["odd"])) == (1, 1)
    code, out, _ = run(capsys, "dump", str(path), "--json")
    summary = json.loads(out)
    assert summary["character"]["3,1"] == [1, 1]
    assert summary["character"]["2,2"] == [2, 2]


def test_algebra_flag(capsys):
    code, out, _ = run(capsys, "build-module", "--lambda", LAM, "--depth", "4", "--algebra", "psq", "--json")
    assert code == 0 and json.loads(out)["algebra"] == "psq"
    code, _, err = run(capsys, "build-module", "--lambda", "1,0", "--depth", "4", "--algebra", "pq")
    assert code == 2 and "H1 + H2" in err


def test_verify_command(capsys):
    code, out, _ = run(capsys, "verify", "lemma4*", "--json")
    assert code == 0
    reports = json.loads(out)
    assert [r["check"] for r in reports] == ["lemma4.cases"]
    assert set(reports[0]) == {"check", "params", "verdict", "witnesses", "elapsed_ms"}


@pytest.mark.parametrize(
    "argv",
    [
        [],
        ["bogus"],
        ["normal-form", "E+"],
        ["normal-form", "i*E"],
        ["build-module", "--kind", "verma"],
        ["build-module", "--kind", "nonsense", "--lambda", "1,0"],
        ["verify", "no-such-check"],
        ["casimir", "--lambda", "1/2"],
    ],
)
def test_usage_errors(capsys, argv):
    code, _, err = run(capsys, *argv)
    assert code == 2
    assert err.startswith("q2: error:")


def test_check_failure_exit_code(capsys, monkeypatch):
    from q2 import verify

    monkeypatch.setattr(verify, "run_suite", lambda pattern: [verify.Report("x", {}, "fail", {}, 0)])
    code, out, _ = run(capsys, "verify", "x")
    assert code == 1 and out.startswith("fail")
