"""Exit codes, JSON output shape, determinism, and verify round-trips."""

import json

import pytest

from seqlatin.cli import main


def run(capsys, argv):
    code = main(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_classify_exit_and_shape(capsys):
    code, out, err = run(capsys, ["classify", "21"])
    assert code == 0
    doc = json.loads(out)
    assert doc["schema"] == "1"
    assert doc["verdict"] == "OddNonabelianExists"
    assert doc["witness"]["pipeline"] == "cyclic"
    assert "21" in err


def test_classify_negative_orders(capsys):
    code, out, _ = run(capsys, ["classify", "15"])
    assert code == 0  # classification itself succeeded
    assert json.loads(out)["verdict"] == "OddOnlyAbelian"
    code, out, _ = run(capsys, ["classify", "2"])
    assert json.loads(out)["verdict"] == "Even"


def test_sequence_negative_order(capsys):
    code, out, _ = run(capsys, ["sequence", "--order", "15"])
    assert code == 1
    doc = json.loads(out)
    assert doc["sequenceable"] is False


def test_sequence_trivial(capsys):
    code, out, _ = run(capsys, ["sequence", "--order", "1"])
    assert code == 0
    assert json.loads(out)["trivial"] is True


def test_sequence_byte_deterministic(capsys):
    code1, out1, _ = run(capsys, ["sequence", "--q", "3", "--m", "9"])
    code2, out2, _ = run(capsys, ["sequence", "--q", "3", "--m", "9"])
    assert code1 == code2 == 0
    assert out1 == out2
    # keys come out sorted
    doc = json.loads(out1)
    assert out1 == json.dumps(doc, sort_keys=True, separators=(",", ":")) + "\n"


def test_sequence_seed_threads(capsys):
    code, out, _ = run(capsys, ["sequence", "--order", "75", "--seed", "2"])
    assert code == 0
    assert json.loads(out)["certificate"]["provenance"]["seed"] == 2


def test_sequence_explicit_product_flags(capsys):
    code, out, _ = run(capsys, ["sequence", "--p", "5", "--k", "2", "--q", "3"])
    assert code == 0
    assert json.loads(out)["certificate"]["provenance"]["pipeline"] == "non3"
    code, out, _ = run(capsys, ["sequence", "--p", "5", "--q", "3"])
    assert code == 0
    doc = json.loads(out)
    assert doc["certificate"]["provenance"]["pipeline"] == "theorem3"
    assert doc["certificate"]["provenance"]["nine"] is False


def test_sequence_b_flag(capsys):
    code, out, _ = run(capsys, ["sequence", "--p", "5", "--k", "2", "--q", "3", "--b", "7"])
    assert code == 0
    doc = json.loads(out)
    assert doc["certificate"]["provenance"]["b"] == [7]


def test_usage_errors(capsys):
    assert run(capsys, ["sequence"])[0] == 2
    assert run(capsys, ["no-such-command"])[0] == 2
    assert run(capsys, [])[0] == 2
    assert run(capsys, ["sequence", "--p", "5"])[0] == 2  # --p without --q
    assert run(capsys, ["sequence", "--order", "5001"])[0] == 2  # over desk cap


def test_negative_exit_for_missing_unit(capsys):
    code, _, err = run(capsys, ["sequence", "--q", "3", "--m", "5"])
    assert code == 1
    assert "no unit" in err


def test_verify_round_trip(tmp_path, capsys):
    for argv in (
        ["sequence", "--q", "3", "--m", "7"],
        ["sequence", "--order", "6"],
        ["sequence", "--order", "75"],
        ["sequence", "--p", "5", "--q", "3"],
    ):
        path = tmp_path / "cert.json"
        code, out, _ = run(capsys, argv + ["--out", str(path)])
        assert code == 0
        assert out == ""  # --out suppresses stdout
        code, out, _ = run(capsys, ["verify", str(path)])
        assert code == 0
        doc = json.loads(out)
        assert doc["valid"] is True
        assert doc["checks"]["complete_square"] is True


def test_verify_rejects_tampering(tmp_path, capsys):
    path = tmp_path / "cert.json"
    run(capsys, ["sequence", "--q", "3", "--m", "7", "--out", str(path)])
    doc = json.loads(path.read_text())
    t = doc["certificate"]["terrace"]
    t[1], t[2] = t[2], t[1]
    path.write_text(json.dumps(doc))
    code, out, _ = run(capsys, ["verify", str(path)])
    assert code == 1
    assert json.loads(out)["valid"] is False


def test_verify_bad_inputs(tmp_path, capsys):
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    assert run(capsys, ["verify", str(bad)])[0] == 2
    bad.write_text(json.dumps({"certificate": {"group": {"abelian": [6]}}}))
    assert run(capsys, ["verify", str(bad)])[0] == 2
    assert run(capsys, ["verify", str(tmp_path / "missing.json")])[0] == 2


def test_latin_csv_file(tmp_path, capsys):
    path = tmp_path / "s.csv"
    code, _, err = run(capsys, ["latin", "--order", "6", "--out", str(path)])
    assert code == 0
    rows = [line.split(",") for line in path.read_text().strip().splitlines()]
    assert len(rows) == 6 and all(len(r) == 6 for r in rows)
    assert str(path) in err


def test_latin_json_grid(capsys):
    code, out, _ = run(capsys, ["latin", "--q", "3", "--m", "7"])
    assert code == 0
    doc = json.loads(out)
    assert doc["n"] == 21
    assert len(doc["grid"]) == 21
    assert "semidirect" in doc["group"]


def test_latin_csv_stdout(capsys):
    code, out, _ = run(capsys, ["latin", "--order", "4", "--format", "csv"])
    assert code == 0
    assert out.splitlines()[0].count(",") == 3


def test_latin_negative_and_trivial(capsys):
    assert run(capsys, ["latin", "--order", "15"])[0] == 1
    code, out, _ = run(capsys, ["latin", "--order", "1"])
    assert code == 0
    assert json.loads(out)["grid"] == [[0]]


def test_graceful_commands(capsys):
    code, out, _ = run(capsys, ["graceful", "9"])
    assert code == 0
    doc = json.loads(out)
    assert doc["construction"] == "zigzag"
    assert sorted(doc["permutation"]) == list(range(1, 10))
    code, out, _ = run(capsys, ["graceful", "12", "5"])
    assert code == 0
    doc = json.loads(out)
    assert doc["permutation"][0] == 5
    assert doc["construction"] == "prescribed-first"


def test_graceful_over_cap(capsys):
    assert run(capsys, ["graceful", "50", "3"])[0] == 2


def test_search_exhaustive(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    gpath.write_text(json.dumps({"abelian": [8]}))
    code, out, _ = run(capsys, ["search", "--group", str(gpath), "--exhaustive"])
    assert code == 0
    doc = json.loads(out)
    assert doc["count"] == 24 and doc["exhausted"] is True
    code, out, _ = run(capsys, ["search", "--group", str(gpath)])
    assert code == 0
    assert json.loads(out)["count"] == 1  # default stops at the first hit


def test_search_zero_exit(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    gpath.write_text(json.dumps({"abelian": [3, 3]}))
    code, out, _ = run(capsys, ["search", "--group", str(gpath), "--exhaustive"])
    assert code == 1
    assert json.loads(out)["count"] == 0


def test_search_jobs_flag(tmp_path, capsys):
    gpath = tmp_path / "g.json"
    gpath.write_text(json.dumps({"abelian": [8]}))
    code1, out1, _ = run(capsys, ["search", "--group", str(gpath), "--exhaustive"])
    code2, out2, _ = run(
        capsys, ["search", "--group", str(gpath), "--exhaustive", "--jobs", "2"]
    )
    assert code1 == code2 == 0
    assert out1 == out2


def test_search_missing_file(capsys):
    assert run(capsys, ["search", "--group", "/nonexistent.json"])[0] == 2


def test_desk_limit_env(tmp_path, capsys, monkeypatch):
    monkeypatch.setenv("SEQLATIN_DESK_LIMIT", "6")
    assert run(capsys, ["sequence", "--order", "8"])[0] == 2
    monkeypatch.delenv("SEQLATIN_DESK_LIMIT")
    assert run(capsys, ["sequence", "--order", "8"])[0] == 0
