import json

from singfold.cli import main, verify_case


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_cases_list(capsys):
    code, out = run(capsys, "cases", "list")
    assert code == 0
    rows = json.loads(out)
    assert len(rows) == 6
    assert {r["case"] for r in rows} == {
        "A3B2D4", "A5B3D5", "D4C3D6", "D4G2E6", "D4G2E7", "E6F4E7"}


def test_cases_show(capsys):
    code, out = run(capsys, "cases", "show", "A3B2D4")
    assert code == 0
    doc = json.loads(out)
    assert doc["quotient_variables"] == ["X", "W", "Z"]
    assert "strata" in doc and len(doc["strata"]) == 4


def test_cases_show_needs_id(capsys):
    code, _ = run(capsys, "cases", "show")
    assert code == 2


def test_roots(capsys):
    code, out = run(capsys, "roots", "--type", "E6")
    assert code == 0
    doc = json.loads(out)
    assert len(doc["roots"]) == 72


def test_subsystems_table(capsys):
    code, out = run(capsys, "subsystems", "--case", "D4G2E6", "--table")
    assert code == 0
    assert out.strip().endswith("total: 8")
    assert len([ln for ln in out.splitlines() if ln.startswith("[")]) == 8


def test_classify_surface(capsys):
    code, out = run(capsys, "classify", "--surface", "X^5+Y^3+Z^2")
    assert code == 0
    doc = json.loads(out)
    assert doc["configuration"] == "E8"


def test_classify_case_point(capsys):
    code, out = run(capsys, "classify", "--case", "A3B2D4",
                    "--point", "t2=8,t4=8")
    assert code == 0
    assert json.loads(out)["configuration"] == "A1+A1+A1"


def test_classify_usage_errors(capsys):
    code, _ = run(capsys, "classify")
    assert code == 2
    code, _ = run(capsys, "classify", "--case", "A3B2D4", "--point", "t2=1")
    assert code == 2
    code, _ = run(capsys, "classify", "--surface", "x^2 +")
    assert code == 2


def test_unknown_flag_is_usage_error(capsys):
    assert main(["verify", "--bogus"]) == 2
    assert main(["subsystems", "--case", "NOPE"]) == 2


def test_verify_single_section(capsys):
    code, out = run(capsys, "verify", "--case", "A3B2D4",
                    "--sections", "equivariance,iso,realizations")
    assert code == 0
    doc = json.loads(out)
    assert doc["ok"] is True
    assert set(doc["sections"]) == {"equivariance", "iso", "realizations"}


def test_verify_bad_section(capsys):
    code, _ = run(capsys, "verify", "--case", "A3B2D4", "--sections", "bogus")
    assert code == 2


def test_verify_case_function_deterministic():
    a = verify_case("A3B2D4", seed=0, samples=2, theorem2_count=3)
    b = verify_case("A3B2D4", seed=0, samples=2, theorem2_count=3)
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)


def test_report_writes_files_and_is_deterministic(tmp_path, capsys):
    out_dir = tmp_path / "reports"
    sections = "equivariance,flat-relations,iso,theorem2"
    code, out = run(capsys, "--samples", "1", "report", "--out",
                    str(out_dir), "--theorem2-count", "2",
                    "--sections", sections)
    assert code == 0
    summary = json.loads((out_dir / "summary.json").read_text())
    assert summary["ok"] is True
    first = {p.name: p.read_bytes() for p in out_dir.iterdir()}
    code, _ = run(capsys, "--samples", "1", "report", "--out", str(out_dir),
                  "--theorem2-count", "2", "--sections", sections)
    assert code == 0
    second = {p.name: p.read_bytes() for p in out_dir.iterdir()}
    assert first == second
    assert set(first) == {f"{c}.json" for c in summary["cases"]} | {"summary.json"}


def test_report_rejects_bad_count(capsys):
    code, _ = run(capsys, "--samples", "0", "report")
    assert code == 2
