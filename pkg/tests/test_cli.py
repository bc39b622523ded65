import json
import random
from fractions import Fraction

import jsonschema
import pytest
from hypothesis import given, strategies as st

from twistq import jsonio
from twistq.cartan import MINIMAL_TOKENS, cartan_data
from twistq.cli import execute, main, render_pretty
from twistq.expr import NodeIndexError, ParseError, format_monomial, parse_lweight, parse_param
from twistq.lweight import KINDS, GenMonomial
from twistq.scalar import SpectralParam

A22 = cartan_data("A2-2")
qp = SpectralParam.q_power


def run_json(capsys, argv):
    code = main(list(argv) + ["--json"])
    out = capsys.readouterr()
    doc = json.loads(out.out) if out.out.strip() else None
    return code, doc, out.err


def validate(doc):
    jsonschema.validate(doc, jsonio.load_schema("envelope"))
    jsonschema.validate(doc["result"], jsonio.load_schema(doc["kind"]))


def test_parse_examples():
    m = parse_lweight("P[1,q^1]^2 * Y[1,q^3]^-1", A22)
    assert m.exponent("P", 1, qp(1)) == 2 and m.exponent("Y", 1, qp(3)) == -1
    m = parse_lweight("A[1,-q^2]", A22)
    ((_, _, a), e), = m.letters
    assert a.eps(2) == 1 and a.q2 == 4 and e == 1
    with pytest.raises(NodeIndexError) as err:
        parse_lweight("Y[7,q]", A22)
    assert isinstance(err.value, IndexError) and err.value.offset == 2


@pytest.mark.parametrize("src, offset", [("Y[1,q", 5), ("Y[1,q]*", 7), ("Q[1,q]", 0),
                                         ("Y[1,q^x]", 6), ("é*Y[1,q]", 0)])
def test_syntax_errors_carry_byte_offsets(src, offset):
    with pytest.raises(ParseError) as err:
        parse_lweight(src, A22)
    assert err.value.offset == offset


def test_param_syntax():
    cd = cartan_data("D4-3")
    assert parse_param("q^(3/2)", cd) == qp(Fraction(3, 2))
    assert parse_param("z3*q^-1", cd) == SpectralParam.make(Fraction(1, 3), -2)
    assert parse_param("u^1*q^2", cd) == SpectralParam.make(0, 4, 1)
    assert parse_param("-q^2", cd) == qp(2).neg()


def random_printable_monomial(rng: random.Random, token: str) -> GenMonomial:
    cd = cartan_data(token)
    letters = []
    for _ in range(rng.randint(0, 6)):
        a = SpectralParam.make(Fraction(rng.randrange(cd.L), cd.L), rng.randint(-9, 9),
                               rng.choice([0, 0, 0, 1, -2]),
                               rng.choice([1, 1, 1, 2, Fraction(1, 3)]))
        letters.append(((rng.choice(KINDS), rng.choice(cd.I0), a), rng.choice([-3, -1, 1, 2])))
    gamma = tuple(SpectralParam.make(Fraction(rng.randrange(cd.L), cd.L), rng.randint(-4, 4))
                  for _ in cd.I0)
    return GenMonomial(token, letters, gamma)


@given(st.integers(0, 2 ** 32 - 1), st.sampled_from(MINIMAL_TOKENS))
def test_round_trip(seed, token):
    m = random_printable_monomial(random.Random(seed), token)
    text = format_monomial(m)
    assert parse_lweight(text, cartan_data(token)) == m


def test_cartan_json(capsys):
    code, doc, _ = run_json(capsys, ["cartan", "A2-2"])
    assert code == 0
    validate(doc)
    r = doc["result"]
    assert r["Csigma"] == [[2, -1], [-4, 2]] and r["marks"] == [1, 2] and r["d"] == ["2", "1/2"]


def test_rmu_true(capsys):
    code, doc, _ = run_json(capsys, ["classify", "rmu", "P[1,q^1]", "--mu", "1", "--type", "A2-2"])
    assert code == 0 and doc["result"]["verdict"] is True
    validate(doc)


def test_qchar_simple_three_terms(capsys):
    code, doc, _ = run_json(capsys, ["qchar", "simple", "P[1,q^-2]*P[1,q^0]^-1", "--type", "A2-2"])
    assert code == 0
    validate(doc)
    r = doc["result"]
    assert r["exact"] and len(r["terms"]) == 3
    assert sorted(t["grade"] for t in r["terms"]) == [0, 1, 2]


COMMANDS = [
    ["eval", "Y[1,q]*P[1,q^3]^2", "--type", "A2-2"],
    ["degree", "P[2,q]*Y[1,z3*q^2]", "--type", "D4-3"],
    ["degree", "P[3,q]*Y[1,-q^2]", "--type", "A5-2"],
    ["classify", "lambda", "--mu", "0,0,1", "--type", "A5-2"],
    ["classify", "dominant", "Yt[1,q]*P[1,q^3]", "--type", "A2-2"],
    ["classify", "order", "q^0", "q^2", "--type", "A2-2"],
    ["classify", "a22", "P[1,q^4]*P[1,q^0]^-1*P[1,q^2]", "--type", "A2-2"],
    ["qchar", "fuse", "P[1,q^-2]*P[1,q^0]^-1", "P[1,q^2]", "--type", "A2-2", "--depth", "3"],
    ["qchar", "borel", "P[1,q]", "--mu", "1", "--type", "A2-2", "--depth", "4"],
    ["borel", "P[2,q]", "--mu", "0,3", "--type", "D4-3", "--depth", "4"],
    ["fuse", "P[1,q]", "Y[2,q^3]", "--type", "E6-2"],
    ["shift", "Y[1,q]", "--mu=-1,0", "--param", "q^2", "--type", "A4-2"],
    ["check", "--suite", "structural,g", "--type", "all"],
    ["cartan", "D4-3"],
]


@pytest.mark.parametrize("argv", COMMANDS, ids=lambda a: " ".join(a[:2]))
def test_json_validates_and_pretty_agrees(capsys, argv):
    code, doc, err = run_json(capsys, argv)
    assert code in (0, 1), err
    validate(doc)
    main(argv)
    pretty = capsys.readouterr().out
    assert pretty.rstrip("\n") == render_pretty(doc["result"])


def test_verdict_false_exit(capsys):
    code, doc, _ = run_json(capsys, ["classify", "dominant", "A[1,q]^-1", "--type", "A2-2"])
    assert code == 1 and doc["result"]["verdict"] is False


@pytest.mark.parametrize("argv, code_name", [
    (["eval", "Y[7,q]", "--type", "A2-2"], "expr.NodeIndexError"),
    (["eval", "Y[1,q", "--type", "A2-2"], "expr.ParseError"),
    (["eval", "Y[1,q]", "--type", "A3-2"], "cartan.InadmissibleType"),
    (["eval", "Y[1,q]"], "cli.InputError"),
    (["shift", "Y[1,q]", "--mu", "1,0", "--param", "q", "--type", "A4-2"], "lweight.ValueError"),
    (["qchar", "simple", "P[1,q]^-1", "--type", "D4-3"], "qchar.UnsupportedQCharacter"),
])
def test_input_errors(capsys, argv, code_name):
    code, doc, err = run_json(capsys, argv)
    assert code == 2
    assert err.startswith(f"error[{code_name}]")
    validate(doc)


def test_unknown_flag_rejected(capsys):
    assert main(["eval", "Y[1,q]", "--type", "A2-2", "--bogus"]) == 2
    assert execute(["cartan", "--nope"])[0] == 2


def test_batch_run(tmp_path, capsys):
    cfg = tmp_path / "batch.toml"
    cfg.write_text('type = "A2-2"\n'
                   '[[command]]\nargs = ["classify", "rmu", "P[1,q^1]", "--mu", "1"]\n'
                   '[[command]]\nline = "qchar simple \'P[1,q^-2]*P[1,q^0]^-1\'"\n'
                   '[[command]]\nargs = ["classify", "dominant", "A[1,q]^-1"]\n')
    code, doc, _ = run_json(capsys, ["run", str(cfg)])
    validate(doc)
    assert code == 1
    assert [c["exit"] for c in doc["result"]["commands"]] == [0, 0, 1]
    for c in doc["result"]["commands"]:
        jsonschema.validate(c["result"], jsonio.load_schema(c["kind"]))


def test_module_entry_point():
    import subprocess
    import sys
    out = subprocess.run([sys.executable, "-m", "twistq", "cartan", "A2-2", "--json"],
                         capture_output=True, text=True, check=True)
    assert json.loads(out.stdout)["result"]["type"] == "A2-2"
