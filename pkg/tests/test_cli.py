import json
from fractions import Fraction
from pathlib import Path

import pytest

from qsubgroups.cartan import build_root_system
from qsubgroups.cli import main, parse_machine, render_machine
from qsubgroups.datum import SubgroupDatum
from qsubgroups.errors import ValidationError
from qsubgroups.files import FileError, dump_datum, parse_datum, parse_module

SAMPLES = Path(__file__).resolve().parent.parent / "samples"

GOOD = """version = 1

[lie]
type = "A1"

[datum]
ell = 5
iplus = [1]
iminus = [1]
N_generators = []

[gamma]
kind = "abelian"
invariant_factors = [5]

[sigma]
images = [["1/5"]]
"""


def run(capsys, *argv):
    code = main([str(a) for a in argv])
    out, err = capsys.readouterr()
    return code, out, err


def machine(capsys, *argv):
    code, out, _ = run(capsys, *argv, "--format", "machine")
    data = parse_machine(out)
    assert data["exit_code"] == code
    return code, data


def test_parse_good_and_round_trip():
    d = parse_datum(GOOD)
    assert d.ell == 5 and d.gamma_factors == (5,)
    again = parse_datum(dump_datum(d))
    assert dump_datum(again) == dump_datum(d)


def test_matrix_datum_round_trip():
    text = (SAMPLES / "sl2_z3_conj.toml").read_text()
    d = parse_datum(text)
    assert parse_datum(dump_datum(d)).sigma_matrices == d.sigma_matrices


@pytest.mark.parametrize("edit,needle,line", [
    (lambda t: t.replace("ell = 5", "ell = 5\nbogus = 1"), "bogus", 8),
    (lambda t: t.replace("version = 1\n", ""), "version", None),
    (lambda t: t.replace("version = 1", "version = 2"), "version", 1),
    (lambda t: t.replace("[gamma]", "[gamma"), "", 12),
    (lambda t: t.replace('"1/5"', '"1/0"'), "", 17),
])
def test_parse_errors_carry_location(edit, needle, line):
    with pytest.raises(FileError) as e:
        parse_datum(edit(GOOD), "x.toml")
    err = e.value
    assert needle in str(err)
    if line is not None:
        assert err.line == line and err.column >= 1
        assert f"x.toml:{line}:" in str(err)


def test_semantic_errors_name_the_file():
    with pytest.raises(ValidationError) as e:
        parse_datum(GOOD.replace("ell = 5", "ell = 4"), "y.toml")
    assert any("y.toml" in m and "odd" in m for m in e.value.issues)


def test_module_file():
    kind, mod = parse_module((SAMPLES / "z2_inversion_z3.toml").read_text())
    assert kind == "finite" and mod.gamma.order == 2
    kind, (gamma, rank, _, _) = parse_module((SAMPLES / "z2_sign_torus.toml").read_text())
    assert kind == "torus" and rank == 1


def test_render_parse_machine():
    payload = {"b": [1, 2], "a": {"x": "1/3"}}
    text = render_machine(payload)
    assert parse_machine(text)["a"] == {"x": "1/3"}
    assert render_machine(parse_machine(text)) == text
    assert list(json.loads(text)) == sorted(json.loads(text))
    with pytest.raises(ValidationError):
        parse_machine('{"format_version": 99}')


def test_classify(capsys):
    code, data = machine(capsys, "classify", SAMPLES / "sl2_z5.toml")
    assert code == 0 and data["report"]["dim_A"] == 625
    code, data = machine(capsys, "classify", SAMPLES / "sl2_z3_conj.toml")
    assert data["report"]["dim_A"] == 375 and data["report"]["genuinely_new"]
    code, out, _ = run(capsys, "classify", SAMPLES / "sl2_z5.toml")
    assert code == 0 and "625" in out


def test_invariants(capsys):
    code, data = machine(capsys, "invariants", SAMPLES / "sl2_z5.toml")
    assert code == 0 and data["gamma_tilde"]["order"] == 5


def test_equiv_exit_codes(capsys):
    code, data = machine(capsys, "equiv", SAMPLES / "sl2_z3_conj.toml", SAMPLES / "sl2_z3_conj_t.toml")
    assert code == 0 and data["result"]["verdict"] == "EQUIVALENT"
    assert data["result"]["witness"]["slice_element"]["lambda"] == "1/4"
    code, data = machine(capsys, "equiv", SAMPLES / "sl2_z3_conj.toml", SAMPLES / "sl2_z3_diag.toml")
    assert code == 1 and data["result"]["certificate"]["digest"]


def test_h1(capsys):
    code, data = machine(capsys, "h1", SAMPLES / "z2_inversion_z3.toml")
    assert code == 0 and data["h1_order"] == 1
    code, out, _ = run(capsys, "h1", SAMPLES / "z2_sign_torus.toml")
    assert code == 0


def test_invalid_input_exit_2(tmp_path, capsys):
    bad = tmp_path / "bad.toml"
    bad.write_text(GOOD.replace("ell = 5", "ell = 5\nbogus = 1"))
    code, out, err = run(capsys, "classify", bad)
    assert code == 2 and "bad.toml:8:" in err
    code, _, err = run(capsys, "classify", tmp_path / "missing.toml")
    assert code == 2 and err.startswith("error:")
    code, data = machine(capsys, "classify", bad)
    assert code == 2 and data["error"] == "validation"
    code, _, _ = run(capsys, "census", "--type", "Q7")
    assert code == 2


def test_equiv_not_applicable_is_invalid(tmp_path, capsys):
    borel = tmp_path / "b.toml"
    borel.write_text(GOOD.replace("iminus = [1]", "iminus = []"))
    code, _, err = run(capsys, "equiv", borel, SAMPLES / "sl2_z5.toml")
    assert code == 2 and "error:" in err


def test_closure_cap_exit_3(capsys, tmp_path):
    f = tmp_path / "inf.toml"
    f.write_text(GOOD.replace('kind = "abelian"\ninvariant_factors = [5]', 'kind = "matrix"\nconductor = 1')
                 .replace('images = [["1/5"]]', 'images = [[["1", "1"], ["0", "1"]]]'))
    code, data = machine(capsys, "classify", f, "--cap-closure", "50")
    assert code == 3 and data["error"] == "cap"


def test_family(tmp_path, capsys):
    code, data = machine(capsys, "family", "--count", "3", "--seed", "2", "--out", tmp_path)
    assert code == 0 and data["count"] == 3 and len(data["conjugators"]) == 3
    files = sorted(tmp_path.glob("member_*.toml"))
    assert len(files) == 3
    for f in files:
        parse_datum(f.read_text(), str(f)).validate()
    code, data = machine(capsys, "family", "--count", "3", "--seed", "2", "--cap-budget", "2")
    assert code == 3


def test_census_is_deterministic(capsys):
    _, one = machine(capsys, "census", "--type", "A1", "--ell", "3", "--gamma-max", "4")
    _, two = machine(capsys, "census", "--type", "A1", "--ell", "3", "--gamma-max", "4", "--workers", "2")
    assert one["row_count"] == two["row_count"] == 38
    assert one["rows"] == two["rows"]
    assert all(r["consistent"] for r in one["rows"])


def test_census_check_invariants(capsys):
    code, data = machine(capsys, "census", "--type", "A1", "--ell", "3", "--gamma-max", "3", "--check-invariants")
    assert code == 0


def test_datum_objects_from_api_dump():
    A1 = build_root_system("A1")
    d = SubgroupDatum(A1, 7, {1}, (), (), "abelian", (7,), [(Fraction(3, 7),)])
    assert "3/7" in dump_datum(d)
