import json
from fractions import Fraction

import pytest

from centext import serialize
from centext.abelian import AbelianGroup
from centext.catalog import commutator_power_cocycle, cyclic_carry
from centext.cli import run
from centext.cocycle import Cocycle, bilinear_basis, carry_cocycle, cohomologous
from centext.embedding import embed
from centext.errors import StructuralError
from centext.qz import QZVector
from centext.twisted import ExtensionGroup

from .helpers import naive_first_violation, table_fn


def roundtrip(to, frm, x):
    s1 = serialize.dumps(to(x))
    s2 = serialize.dumps(to(frm(serialize.loads(s1))))
    return s1, s2


@pytest.mark.parametrize("to,frm,x", [
    (serialize.group_to_json, serialize.group_from_json, AbelianGroup((2, 4))),
    (serialize.group_to_json, serialize.group_from_json, AbelianGroup(())),
    (serialize.cocycle_to_json, serialize.cocycle_from_json, commutator_power_cocycle(2)),
    (serialize.cocycle_to_json, serialize.cocycle_from_json, carry_cocycle(4, 2)),
    (serialize.bilinear_to_json, serialize.bilinear_from_json, bilinear_basis((2, 4), (4,))[1][2]),
    (serialize.qz_to_json, serialize.qz_from_json, QZVector([Fraction(1, 9), Fraction(1, 2)])),
    (serialize.embedding_to_json, serialize.embedding_from_json, embed(ExtensionGroup(cyclic_carry(3)))),
    (serialize.embedding_to_json, serialize.embedding_from_json, embed(ExtensionGroup(commutator_power_cocycle(2)))),
])
def test_round_trip_is_byte_identical(to, frm, x):
    s1, s2 = roundtrip(to, frm, x)
    assert s1 == s2


def test_cocycle_values_survive():
    g = commutator_power_cocycle(3)
    assert serialize.cocycle_from_json(serialize.loads(serialize.dumps(serialize.cocycle_to_json(g)))) == g


def test_group_parsing():
    assert serialize.parse_group("[2,4]").factors == (2, 4)
    assert serialize.parse_group('{"factors":[3]}').factors == (3,)
    assert serialize.parse_group("2,2").factors == (2, 2)
    for bad in ["[2,", "a,b", '{"x":1}', "[true]"]:
        with pytest.raises(StructuralError):
            serialize.parse_group(bad)


def test_malformed_cocycles():
    good = serialize.cocycle_to_json(cyclic_carry(2))
    for mutate in [lambda d: d.pop("table"), lambda d: d["table"].pop(),
                   lambda d: d["table"][0].append([0]), lambda d: d["table"][1][1].append(0),
                   lambda d: d["table"][1].__setitem__(1, ["1"])]:
        d = json.loads(json.dumps(good))
        mutate(d)
        with pytest.raises(StructuralError):
            serialize.cocycle_from_json(d)


# -- command line -------------------------------------------------------------


def write(tmp_path, name, obj):
    p = tmp_path / name
    p.write_text(serialize.dumps(obj))
    return str(p)


def run_json(capsys, argv):
    code = run(argv)
    out = capsys.readouterr().out
    return code, (json.loads(out) if out.strip() else None)


def test_cli_h2(capsys):
    code, rep = run_json(capsys, ["h2", "--a", "[3]", "--b", "[3]"])
    assert code == 0
    assert rep["h2"] == [3] and len(rep["representatives"]) == 1
    g = serialize.cocycle_from_json(rep["representatives"][0])
    assert cohomologous(g, cyclic_carry(3)) is not None or cohomologous(2 * g, cyclic_carry(3)) is not None


def test_cli_examples_2_22(capsys):
    code, rep = run_json(capsys, ["paper-examples", "--which", "2.22", "--p", "3"])
    assert code == 0
    r = rep["commutator-power"]
    assert r["f"] == {"x": "0/1", "y": "0/1", "z": "1/9"}
    assert r["group"]["order"] == 81 and r["image_of_f"] == [9]
    assert all(r["checks"].values())


def test_cli_examples_all(capsys):
    code, rep = run_json(capsys, ["examples"])
    assert code == 0
    assert rep["carry-embedding"]["phi_of_generator"] == [[1], "1/9"]
    assert rep["carry"]["bilinear"] is False and rep["carry"]["twisted_product_class"] is False


def test_cli_validate(tmp_path, capsys):
    ok = write(tmp_path, "ok.json", serialize.cocycle_to_json(cyclic_carry(3)))
    code, rep = run_json(capsys, ["validate", ok])
    assert code == 0 and rep["valid"] and rep["bilinear"] is False
    T = cyclic_carry(3).table.copy()
    T[1, 2, 0] = 0
    bad_g = Cocycle(AbelianGroup((3,)), AbelianGroup((3,)), T)
    bad = write(tmp_path, "bad.json", serialize.cocycle_to_json(bad_g))
    code, rep = run_json(capsys, ["validate", bad])
    assert code == 1 and not rep["valid"]
    axiom, triple = naive_first_violation(bad_g.group_a, bad_g.group_b, table_fn(bad_g))
    assert rep["axiom"] == axiom == "cocycle identity"
    assert rep["violation"] == [list(x) for x in triple]


def test_cli_cohomologous_and_embed(tmp_path, capsys):
    g1 = write(tmp_path, "g1.json", serialize.cocycle_to_json(cyclic_carry(2)))
    g0 = write(tmp_path, "g0.json", serialize.cocycle_to_json(Cocycle.zero((2,), (2,))))
    code, rep = run_json(capsys, ["cohomologous", g1, g0])
    assert code == 0 and rep == {"cohomologous": False}
    code, rep = run_json(capsys, ["cohomologous", g1, g1])
    assert code == 0 and rep["cohomologous"] and rep["witness"] == [[0], [0]]
    code, rep = run_json(capsys, ["embed", g1])
    assert code == 0 and rep["h"] == [["0/1"], ["1/4"]]
    bil = write(tmp_path, "b.json", serialize.bilinear_to_json(bilinear_basis((2, 2), (2,))[1][1]))
    code, rep = run_json(capsys, ["twist", bil])
    assert code == 0 and rep["twisted_product_class"] and rep["structure"]["order"] == 8


def test_cli_out_file(tmp_path, capsys):
    out = tmp_path / "r.json"
    assert run(["h2", "--a", "2", "--b", "2", "--out", str(out)]) == 0
    assert capsys.readouterr().out == ""
    assert json.loads(out.read_text())["h2"] == [2]


def test_cli_usage_errors(tmp_path, capsys):
    assert run(["h2", "--a", "[x]", "--b", "[2]"]) == 2
    assert run(["validate", str(tmp_path / "missing.json")]) == 2
    assert run(["h2", "--a", "[17]", "--b", "[2]"]) == 2
    junk = tmp_path / "junk.json"
    junk.write_text("{not json")
    assert run(["validate", str(junk)]) == 2
    with pytest.raises(SystemExit) as exc:
        run(["frobnicate"])
    assert exc.value.code == 2
    with pytest.raises(SystemExit) as exc:
        run(["paper-examples", "--which", "9.99"])
    assert exc.value.code == 2
    capsys.readouterr()


def test_cli_check_passes(capsys):
    code, rep = run_json(capsys, ["check"])
    assert code == 0 and rep["failed"] == 0 and rep["passed"] == 14
