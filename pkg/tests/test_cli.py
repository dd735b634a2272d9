import json

from stringalg.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    out = capsys.readouterr().out
    return code, out


def test_validate_gp(capsys, fixture_dir):
    code, out = run(capsys, "validate", str(fixture_dir / "gp.sba"))
    assert code == 0
    assert "string: yes" in out


def test_validate_d4sub_fails(capsys, fixture_dir):
    code, out = run(capsys, "validate", str(fixture_dir / "d4sub.sba"))
    assert code == 1
    assert "in-degree 3" in out


def test_validate_a3(capsys, fixture_dir):
    code, _ = run(capsys, "validate", str(fixture_dir / "a3.sba"))
    assert code == 0


def test_validate_missing_file(capsys, fixture_dir):
    code = main(["validate", str(fixture_dir / "nope.sba")])
    assert code == 2


def test_words_command(capsys, fixture_dir):
    code, out = run(capsys, "words", str(fixture_dir / "a3.sba"), "--max-len", "2")
    assert code == 0
    assert "count: 5" in out


def test_classify_commands(capsys, fixture_dir):
    code, out = run(capsys, "classify", str(fixture_dir / "a3.sba"))
    assert code == 0 and "Finite" in out
    code, out = run(capsys, "classify", str(fixture_dir / "kronecker.sba"))
    assert code == 0 and "Domestic" in out and "bound" in out
    code, out = run(capsys, "classify", str(fixture_dir / "gp.sba"))
    assert code == 0 and "NonDomestic" in out


def test_modules_command(capsys, fixture_dir):
    code, out = run(capsys, "modules", str(fixture_dir / "a3.sba"), "--max-dim", "3")
    assert code == 0
    assert "count: 5" in out
    assert "projective" in out


def test_hom_and_ext_commands(capsys, fixture_dir):
    code, out = run(capsys, "hom", str(fixture_dir / "a3.sba"), "--from", "e(2)", "--to", "e(2)")
    assert code == 0 and "hom_dim: 1" in out
    code, out = run(capsys, "ext", str(fixture_dir / "a3.sba"), "--from", "e(1)", "--to", "e(2)")
    assert code == 0 and "ext1_dim: 1" in out


def test_middle_census_command(capsys, fixture_dir):
    code, out = run(
        capsys,
        "middle-census",
        str(fixture_dir / "d4sub.sba"),
        "--from", "@" + str(fixture_dir / "d4sub_m2111.mod"),
        "--to", "e(0)",
    )
    assert code == 0
    assert "histogram: 2:3 3:3" in out


def test_middle_census_field_cap(capsys, fixture_dir):
    code = main([
        "middle-census", str(fixture_dir / "a3.sba"), "--from", "e(1)", "--to", "e(2)",
    ])
    assert code == 2  # default field order 32003 exceeds the census cap


def test_ar_command(capsys, fixture_dir):
    code, out = run(capsys, "ar", str(fixture_dir / "a3.sba"), "--word", "e(1)")
    assert code == 0
    assert "tau: e(2)" in out
    assert "middle_summands: 1" in out
    assert "verified" in out


def test_degeneration_command(capsys, fixture_dir):
    code, out = run(capsys, "degeneration", str(fixture_dir / "a3.sba"), "--max-dim", "4")
    assert code == 0
    assert "verdict: PASS" in out
    assert "hom_leq=true" in out


def test_verify_main_theorem_a3(capsys, fixture_dir):
    code, out = run(
        capsys, "verify-main-theorem", str(fixture_dir / "a3.sba"), "--max-dim", "3"
    )
    assert code == 0
    assert "verdict: PASS" in out


def test_verify_main_theorem_d4sub_fails(capsys, fixture_dir):
    code, out = run(
        capsys,
        "--allow-non-string",
        "verify-main-theorem",
        str(fixture_dir / "d4sub.sba"),
        "--max-dim", "6",
        "--module", str(fixture_dir / "d4sub_m2111_indec.mod"),
    )
    assert code == 1
    assert "verdict: FAIL" in out
    assert "VIOLATION" in out and "3 summands" in out


def test_structured_output_deterministic(capsys, fixture_dir):
    args = ["--format", "structured", "validate", str(fixture_dir / "gp.sba")]
    code1 = main(args)
    out1 = capsys.readouterr().out
    code2 = main(args)
    out2 = capsys.readouterr().out
    assert code1 == code2 == 0
    assert out1 == out2
    assert out1.startswith("format=stringalg.v1")


def test_json_output(capsys, fixture_dir):
    code, out = run(capsys, "--format", "json", "classify", str(fixture_dir / "gp.sba"))
    assert code == 0
    doc = json.loads(out)
    assert doc["format"] == "stringalg.v1"
    assert doc["verdict"] == "NonDomestic"


def test_field_override(capsys, fixture_dir):
    code, out = run(
        capsys, "--field", "5", "ext", str(fixture_dir / "a3.sba"),
        "--from", "e(1)", "--to", "e(2)",
    )
    assert code == 0 and "ext1_dim: 1" in out
