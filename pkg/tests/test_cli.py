import json

from coxhodge.cli import main


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_roots_text(capsys):
    code, out, _ = run(capsys, "roots", "--type", "I2:5")
    assert code == 0
    assert "positive roots (5)" in out
    assert "conductor 10" in out


def test_roots_json(capsys):
    code, out, _ = run(capsys, "roots", "--type", "A1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert data["count"] == 1


def test_text_and_json_numeric_parity(capsys):
    code, text_out, _ = run(capsys, "check", "--type", "A1", "--word", "1",
                            "--lambda", "1")
    assert code == 0
    code, json_out, _ = run(capsys, "check", "--type", "A1", "--word", "1",
                            "--lambda", "1", "--format", "json")
    assert code == 0
    report = json.loads(json_out)["reports"][0]
    assert report["verdict"] == "pass"
    deg = report["degrees"][0]
    line = [l for l in text_out.splitlines() if l.strip().startswith("i=")][0]
    assert f"i={deg['i']}" in line
    assert f"rank={deg['rank']}" in line
    sig = ",".join(str(v) for v in deg["signature"])
    assert f"signature=({sig})" in line
    assert "verdict=pass" in text_out


def test_matrix_file_and_infinite_exit_code(tmp_path, capsys):
    path = tmp_path / "infinite.json"
    path.write_text('[[1, "inf"], ["inf", 1]]')
    code, _, err = run(capsys, "roots", "--matrix", str(path), "--bound", "50")
    assert code == 3
    assert "bound" in err


def test_invalid_input_exit_code(capsys):
    code, _, err = run(capsys, "decompose", "--type", "A2", "--word", "1,9")
    assert code == 2


def test_unknown_descriptor_exit_code(capsys):
    code, _, _ = run(capsys, "roots", "--type", "Q7")
    assert code == 2


def test_decompose_text(capsys):
    code, out, _ = run(capsys, "decompose", "--type", "A2", "--word", "1,2,1")
    assert code == 0
    assert "D_{121} ⊕ D_{1}(-2)" in out


def test_check_all_json(capsys):
    code, out, _ = run(capsys, "check", "--type", "I2:3", "--all",
                       "--lambda", "rho", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["reports"]) == 6
    assert all(r["verdict"] == "pass" for r in data["reports"])


def test_check_all_i2_7_rho(capsys):
    code, out, _ = run(capsys, "check", "--type", "I2:7", "--all",
                       "--lambda", "rho", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["reports"]) == 14
    assert all(r["verdict"] == "pass" for r in data["reports"])


def test_check_requires_word_or_all(capsys):
    code, _, err = run(capsys, "check", "--type", "A1")
    assert code == 2


def test_output_file(tmp_path, capsys):
    target = tmp_path / "out.json"
    code, out, _ = run(capsys, "schubert", "--type", "A1", "--format", "json",
                       "--output", str(target))
    assert code == 0
    assert out == ""
    data = json.loads(target.read_text())
    assert data["order"] == 2


def test_json_roundtrip(capsys):
    code, out, _ = run(capsys, "check", "--type", "A2", "--word", "1,2",
                       "--lambda", "1,1", "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert json.loads(json.dumps(data)) == data


def test_threads_env(monkeypatch, capsys):
    monkeypatch.setenv("COXHODGE_THREADS", "2")
    code, out, _ = run(capsys, "check", "--type", "I2:4", "--all",
                       "--format", "json")
    assert code == 0
    data = json.loads(out)
    assert len(data["reports"]) == 8
