import json

import pytest

from ectorsion import cli


def run(capsys, *argv):
    code = cli.main(list(argv))
    return code, capsys.readouterr()


@pytest.mark.parametrize("text,value", [("1000000", 10**6), ("1e6", 10**6), ("10^6", 10**6), ("2**12", 4096), ("3E2", 300)])
def test_parse_height(text, value):
    assert cli.parse_height(text) == value


@pytest.mark.parametrize("text", ["1.5e6", "-5", "abc", "0", "1e-3"])
def test_parse_height_rejects(text):
    with pytest.raises(Exception):
        cli.parse_height(text)


def test_jsonable_big_ints():
    out = cli.jsonable({"a": 2**53, "b": 2**53 - 1, "c": [-(2**60)], "d": 1.5})
    assert out == {"a": str(2**53), "b": 2**53 - 1, "c": [str(-(2**60))], "d": 1.5}


def test_census_rows(capsys):
    code, out = run(capsys, "census", "--max-height", "100")
    assert code == 0
    lines = out.out.splitlines()
    assert lines[0] == "X,group,exact_count,contains_count"
    assert len(lines) == 1 + 15 * 2  # checkpoints 10 and 100


def test_census_json_file(capsys, tmp_path):
    path = tmp_path / "c.json"
    code, _ = run(capsys, "census", "--max-height", "1e4", "--checkpoints", "10,1000,1e4", "--json", str(path))
    assert code == 0
    data = json.loads(path.read_text())
    assert data["checkpoints"] == [10, 1000, 10**4]
    assert all(isinstance(r["exact_count"], int) for r in data["rows"])


def test_census_rejects_checkpoint_above_height(capsys):
    with pytest.raises(SystemExit):
        cli.main(["census", "--max-height", "100", "--checkpoints", "1000"])


def test_regions_json(capsys):
    code, out = run(capsys, "regions", "--i", "2", "--max-height", "1000000", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert set(data) == {"lattice", "distinct", "sieved", "empirical_constant", "c_formula"}
    assert data["sieved"] == 3790


def test_regions_rejects_bad_i():
    with pytest.raises(SystemExit):
        cli.main(["regions", "--i", "4", "--max-height", "10"])


def test_constants_json(capsys):
    code, out = run(capsys, "constants", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert abs(data["c1"] - 3.9960) < 5e-5
    assert abs(data["I_plus"] - 0.33383) < 1e-4
    assert data["flags"]["c2"] == "formula/printed mismatch"
    assert data["z3_sign"]["winner"] == "-"


def test_families_command(capsys):
    code, out = run(capsys, "families", "--group", "Z/4", "--max-height", "10^6", "--json")
    assert code == 0
    data = json.loads(out.out)
    assert data["expected_exponent"] == 0.25
    assert data["count"] > 0 and data["fitted_exponent"] is not None


def test_families_unknown_group(capsys):
    code, out = run(capsys, "families", "--group", "Z/11", "--max-height", "100")
    assert code == 2


def test_verify_quick_mode(capsys, tmp_path):
    report = tmp_path / "r.json"
    code, out = run(capsys, "verify", "--max-height", "10^4", "--report", str(report))
    assert code == 0
    data = json.loads(report.read_text())
    ids = [c["criterion_id"] for c in data["criteria"]]
    assert ids == list(range(1, 11))
    assert {c["status"] for c in data["criteria"]} <= {"pass", "skipped"}


def test_verify_corrupted_family_file(capsys, tmp_path):
    bad = tmp_path / "bad.json"
    bad.write_text(json.dumps([{"group": "Z/5", "f": ["1", "2", "3", "4", "5"], "g": ["1", "0", "0", "0", "0", "0", "1"]}]))
    report = tmp_path / "r.json"
    code, out = run(capsys, "verify", "--max-height", "10^3", "--family-file", str(bad), "--report", str(report))
    assert code == 1
    crit9 = next(c for c in json.loads(report.read_text())["criteria"] if c["criterion_id"] == 9)
    assert crit9["status"] == "fail"
    assert crit9["witness"][0][0] == "Z/5"


def test_output_is_stable(capsys):
    _, a = run(capsys, "census", "--max-height", "1e3")
    _, b = run(capsys, "census", "--max-height", "1e3")
    assert a.out == b.out
