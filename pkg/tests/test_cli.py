import json

import pytest

from freelocus import jsonio
from freelocus.cli import main
from freelocus.linalg import Matrix
from freelocus.ncrat import Realization, parse, realize_minimal
from freelocus.pencil import MonicPencil
from freelocus.scalars import QQ, QQI, Scalar
from freelocus.words import NcPolynomial

E12 = Matrix.unit(2, 2, 0, 1)
E21 = Matrix.unit(2, 2, 1, 0)


def write_json(path, obj):
    path.write_text(json.dumps(obj))
    return str(path)


def run(capsys, argv):
    code = main(argv)
    out = capsys.readouterr().out
    return code, out


# -- json round trips ---------------------------------------------------------------


def test_matrix_tuple_round_trip():
    mats = (E12, Matrix.from_rows([[Scalar(1, 2), Scalar(0)], [Scalar(-1), Scalar(3)]]))
    blob = jsonio.tuple_to_json(mats)
    back = jsonio.tuple_from_json(blob)
    assert back == mats
    assert jsonio.tuple_to_json(back) == blob


def test_pencil_round_trip():
    p = MonicPencil((E12, E21))
    blob = jsonio.pencil_to_json(p)
    assert jsonio.pencil_from_json(blob) == p


def test_ncpoly_round_trip():
    poly = NcPolynomial([((1, 2), Scalar(1) / Scalar(2)), ((2,), Scalar(-3))])
    blob = jsonio.ncpoly_to_json(poly)
    assert jsonio.ncpoly_from_json(blob) == poly


def test_realization_round_trip():
    r = realize_minimal(parse("inv(1-x1)*x2"))
    blob = jsonio.realization_to_json(r)
    back = jsonio.realization_from_json(blob)
    assert back.c == r.c and back.b == r.b
    assert back.pencil == r.pencil


def test_field_check_rejects_imaginary_over_qq():
    from freelocus.errors import ParseError

    blob = jsonio.tuple_to_json((Matrix.from_rows([[Scalar(0, 1)]]),))
    with pytest.raises(ParseError):
        jsonio.tuple_from_json(blob, QQ)
    assert jsonio.tuple_from_json(blob, QQI)


# -- cli behaviour ------------------------------------------------------------------------


def pencil_file(tmp_path, name, *mats):
    return write_json(tmp_path / name, jsonio.pencil_to_json(MonicPencil(mats)))


def test_pencil_compare_scalar_pair(tmp_path, capsys):
    left = pencil_file(tmp_path, "a.json", Matrix.from_rows([[1]]))
    right = pencil_file(tmp_path, "b.json", Matrix.from_rows([[2]]))
    code, out = run(capsys, ["pencil", "compare", "--left", left, "--right", right,
                             "--seed", "7"])
    assert code == 0
    report = json.loads(out)
    assert report["result"]["relation"] == "incomparable"
    for side in ("left_in_right", "right_in_left"):
        verdict = report["result"][side]
        assert verdict["holds"] is False
        assert verdict["refutation"]
        assert verdict["separating_point"]["kernel_dim"] >= 1


def test_pencil_member_and_eval(tmp_path, capsys):
    pfile = pencil_file(tmp_path, "p.json", Matrix.from_rows([[1]]))
    xfile = write_json(tmp_path / "x.json",
                       jsonio.tuple_to_json((Matrix.from_rows([[1]]),)))
    code, out = run(capsys, ["pencil", "member", "--pencil", pfile, "--point", xfile])
    assert code == 0
    assert json.loads(out)["result"] == {"kernel_dim": 1, "member": True}
    code, out = run(capsys, ["pencil", "eval", "--pencil", pfile, "--point", xfile])
    assert code == 0
    assert json.loads(out)["result"]["det"] == "0"


def test_cli_determinism(tmp_path, capsys):
    left = pencil_file(tmp_path, "a.json", E12, E21)
    right = pencil_file(tmp_path, "b.json", E21, E12)
    argv = ["pencil", "compare", "--left", left, "--right", right]
    _, out1 = run(capsys, argv)
    _, out2 = run(capsys, argv)
    assert out1 == out2


def test_rat_compare_golden(capsys):
    r1 = "inv(1 - x1 - x2*inv(1-x1)*x2) * (1 + x1*inv(1 - x1 + x2))"
    r2 = "inv(1-x1-x2)*(1-x1)*inv(1-x1-x2) + inv(1-x1-x2)*x1*inv(1-x1+x2)"
    code, out = run(capsys, ["rat", "compare", "--expr1", r1, "--expr2", r2])
    assert code == 0
    assert json.loads(out)["result"]["relation"] == "="


def test_rat_minimize_and_poly(capsys):
    code, out = run(capsys, ["rat", "minimize", "--expr", "x1 + x1"])
    assert code == 0
    assert json.loads(out)["result"]["size"] == 2
    code, out = run(capsys, ["rat", "poly", "--expr", "x1*x1 + x2"])
    assert code == 0
    result = json.loads(out)["result"]
    assert result["polynomial"] == [
        {"word": [2], "coeff": "1"},
        {"word": [1, 1], "coeff": "1"},
    ]
    code, out = run(capsys, ["rat", "poly", "--expr", "inv(1-x1-x2)"])
    result = json.loads(out)["result"]
    assert result["polynomial"] is None
    assert result["witness_locus_point"]["kernel_dim"] >= 1


def test_orbit_commands(tmp_path, capsys):
    t1 = write_json(tmp_path / "t1.json", jsonio.tuple_to_json((E12, E21)))
    q = Matrix.from_rows([[0, 1], [1, 0]])
    t2 = write_json(tmp_path / "t2.json", jsonio.tuple_to_json((E21, E12)))
    code, out = run(capsys, ["orbit", "compare", "--left", t1, "--right", t2])
    assert code == 0
    assert json.loads(out)["result"]["same_orbit_closure"] is True
    code, out = run(capsys, ["orbit", "detcheck", "--left", t1, "--right", t2,
                             "--trials", "20"])
    assert code == 0
    assert json.loads(out)["result"]["agrees"] is True
    code, out = run(capsys, ["orbit", "fingerprint", "--tuple", t1])
    assert code == 0
    entries = json.loads(out)["result"]["entries"]
    assert {"word": [1, 2], "trace": "1"} in entries


def test_algebra_commands(tmp_path, capsys):
    t = write_json(tmp_path / "t.json", jsonio.tuple_to_json((E12, E21)))
    code, out = run(capsys, ["algebra", "basis", "--tuple", t])
    assert code == 0
    result = json.loads(out)["result"]
    assert result["dimension"] == 4
    assert result["contains_identity"] is True
    code, out = run(capsys, ["algebra", "radical", "--tuple", t])
    assert json.loads(out)["result"]["radical_dimension"] == 0
    code, out = run(capsys, ["algebra", "components", "--tuple", t])
    comps = json.loads(out)["result"]["components"]
    assert len(comps) == 1 and comps[0]["dimension"] == 4


def test_exit_code_parse_error(capsys):
    code, _ = run(capsys, ["rat", "parse", "--expr", "x0 + "])
    assert code == 2


def test_exit_code_bad_json(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    code, _ = run(capsys, ["pencil", "reduce", "--pencil", str(bad)])
    assert code == 2


def test_exit_code_precondition(capsys):
    code, _ = run(capsys, ["rat", "realize", "--expr", "inv(x1)"])
    assert code == 3


def test_exit_code_kippenhahn_precondition(tmp_path, capsys):
    pfile = pencil_file(tmp_path, "nil.json", E12)
    code, _ = run(capsys, ["pencil", "kippenhahn", "--pencil", pfile])
    assert code == 3


def test_certificate_output(tmp_path, capsys):
    left = pencil_file(tmp_path, "a.json", Matrix.from_rows([[1]]))
    right = pencil_file(tmp_path, "b.json", Matrix.from_rows([[1]]))
    cert = tmp_path / "cert.json"
    code, out = run(capsys, ["pencil", "compare", "--left", left, "--right", right,
                             "--certificate", str(cert)])
    assert code == 0
    saved = json.loads(cert.read_text())
    assert saved == json.loads(out)["result"]


def test_text_format(tmp_path, capsys):
    pfile = pencil_file(tmp_path, "p.json", Matrix.from_rows([[1]]))
    xfile = write_json(tmp_path / "x.json",
                       jsonio.tuple_to_json((Matrix.from_rows([[2]]),)))
    code, out = run(capsys, ["pencil", "member", "--pencil", pfile,
                             "--point", xfile, "--format", "text"])
    assert code == 0
    assert "member: False" in out


def test_round_trip_emitted_artifacts(tmp_path, capsys):
    # every emitted JSON artifact is accepted back by the matching reader
    code, out = run(capsys, ["rat", "minimize", "--expr", "inv(1-x1)*x2"])
    blob = json.loads(out)["result"]["realization"]
    r = jsonio.realization_from_json(blob)
    assert jsonio.realization_to_json(r) == blob
