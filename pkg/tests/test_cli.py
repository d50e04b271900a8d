import json
import subprocess
import sys

import pytest

from lechlab.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out, err = capsys.readouterr()
    return code, out, err


def test_compute_closure(capsys):
    code, out, _ = run(capsys, "compute", "--ideal", "x^3,y^4,z^5,x*y*z", "--closure")
    data = json.loads(out)
    assert code == 0 and data["schema"] == 1
    assert data["closure"]["mu"] == 11
    assert data["closure"]["colength"] == 23
    assert data["mixed"] == [47, 10, 3, 1]


def test_compute_json_golden(capsys):
    code, out, _ = run(capsys, "compute", "--ideal-json", '{"dim":2,"gens":[[1,0],[0,1]]}')
    assert code == 0
    assert json.loads(out) == {
        "schema": 1, "dim": 2, "gens": [[0, 1], [1, 0]], "isClosed": True, "colength": 1,
        "multiplicity": 1, "mu": 2, "ord": 1, "r": 1, "mixed": [1, 1, 1], "eOfMI": 4,
    }


@pytest.mark.parametrize("argv,code", [
    (["compute", "--ideal", "x^3,,y"], 64),
    (["compute", "--ideal", "x^3, x*y"], 65),
    (["compute", "--ideal", "m", "--dim", "5"], 65),
    (["compute", "--ideal-json", "{oops"], 64),
    (["compute"], 64),
    (["verify", "--ideal", "m", "--dim", "2", "--checks", "bogus"], 64),
    (["family", "--a", "2", "--b", "3", "--c", "4"], 65),
    (["family", "--grid", "3-8"], 64),
])
def test_error_codes(capsys, argv, code):
    assert run(capsys, *argv)[0] == code


def test_argparse_errors_exit_64(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["compute", "--no-such-flag"])
    assert exc.value.code == 64
    with pytest.raises(SystemExit) as exc:
        main(["frobnicate"])
    assert exc.value.code == 64


def test_verify_expected_failure(capsys):
    code, out, _ = run(capsys, "verify", "--ideal", "m", "--dim", "3", "--checks", "mi-conj")
    assert code == 1
    [v] = json.loads(out)["verdicts"]
    assert (v["outcome"], v["lhs"], v["rhs"]) == ("FAILS", 8, 6)
    code, out, _ = run(capsys, "verify", "--ideal", "m", "--dim", "3", "--checks", "mi-conj", "--expect-fail")
    assert code == 0 and json.loads(out)["verdicts"][0]["expectedFail"] is True


def test_verify_family_all_hold(capsys):
    code, out, _ = run(capsys, "verify", "--family", "3,4,5", "--checks", "all")
    assert code == 0
    assert {v["outcome"] for v in json.loads(out)["verdicts"]} == {"HOLDS_STRICT"}


def test_verify_main_theorem(capsys):
    code, out, _ = run(capsys, "verify", "--ideal", "m", "--dim", "4", "--checks", "mi-conj")
    v = json.loads(out)["verdicts"][0]
    assert code == 0 and (v["outcome"], v["lhs"], v["rhs"]) == ("HOLDS_STRICT", 16, 24)
    code, out, _ = run(capsys, "verify", "--ideal", "m^2", "--dim", "4", "--checks", "mi-conj")
    assert code == 0 and json.loads(out)["verdicts"][0]["outcome"] == "HOLDS_STRICT"


def test_verify_pretty_shows_sides(capsys):
    code, out, _ = run(capsys, "verify", "--ideal", "m^2", "--dim", "2", "--format", "pretty")
    assert code == 0
    assert "e(I) <= d! len(R/I)" in out and "lhs=4" in out and "rhs=6" in out


def test_verify_csv(capsys):
    code, out, _ = run(capsys, "verify", "--ideal", "m", "--dim", "2", "--checks", "lech", "--format", "csv")
    assert out.splitlines() == ["check,outcome,lhs,rhs", "lech,HOLDS_STRICT,1,2"]


def test_search_outputs(capsys, tmp_path):
    out, csv = tmp_path / "r.json", tmp_path / "r.csv"
    args = ["search", "--dim", "4", "--count", "20", "--seed", "7", "--checks", "mi-conj,length-conj"]
    assert run(capsys, *args, "--out", str(out), "--csv", str(csv))[0] == 0
    first = out.read_bytes()
    assert run(capsys, *args, "--out", str(out), "--jobs", "2")[0] == 0
    assert out.read_bytes() == first
    data = json.loads(first)
    assert data["schema"] == 1 and data["tallies"]["mi-conj"]["fails"] == 0
    assert csv.read_text().startswith("index,check,outcome")


def test_search_exhaustive_dim2(capsys):
    code, out, _ = run(capsys, "search", "--dim", "2", "--exhaustive", "--colength-max", "12",
                       "--checks", "dim2-sharp,dim2-equality")
    data = json.loads(out)
    assert code == 0 and data["ideals"] == 271
    assert data["tallies"]["dim2-sharp"]["fails"] == 0 and data["tallies"]["dim2-equality"]["fails"] == 0


def test_search_planted(capsys):
    code, _, _ = run(capsys, "search", "--dim", "2", "--count", "5", "--checks", "root-lech", "--plant", "root-lech:1/10")
    assert code == 1


def test_family(capsys):
    code, out, _ = run(capsys, "family", "--a", "3", "--b", "3", "--c", "3")
    assert code == 0 and "I = m^3" in out
    code, out, _ = run(capsys, "family", "--a", "6", "--b", "9", "--c", "9", "--format", "json")
    row = json.loads(out)["families"][0]
    assert code == 3 and row["diff"] == {"colength": {"engine": 88, "predicted": 90}}


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "lechlab", "family", "--grid", "3..4"],
                          capture_output=True, text=True)
    assert proc.returncode == 0
    assert proc.stdout.count(" ok") == 4
