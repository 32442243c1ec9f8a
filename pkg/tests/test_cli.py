import csv
import io
import json
import subprocess
import sys

import pytest

from torus_pdo.cli import flatten, format_records, main


def run(argv, capsys):
    code = main(argv)
    out = capsys.readouterr()
    return code, out.out, out.err


def records(text):
    return [json.loads(line) for line in text.splitlines()]


def test_transform_forward(capsys):
    code, out, _ = run(["transform", "--N", "32"], capsys)
    rec = records(out)[0]
    assert code == 0 and rec["direction"] == "forward"
    assert rec["roundtrip_error"] < 1e-12 and abs(rec["l2_norm"] - rec["coeff_l2"]) < 1e-12


def test_transform_dump_then_inverse(tmp_path, capsys):
    spec = tmp_path / "c.bin"
    code, out, _ = run(["transform", "--N", "32", "--seed", "4", "--dump", str(spec)], capsys)
    l2 = records(out)[0]["l2_norm"]
    code, out, _ = run(["transform", "--inverse", "--input", str(spec)], capsys)
    assert code == 0 and abs(records(out)[0]["l2_norm"] - l2) < 1e-12


def test_inverse_without_input_is_usage_error(capsys):
    code, _, err = run(["transform", "--inverse"], capsys)
    assert code == 1 and "--inverse" in err


def test_apply_and_classify(capsys):
    code, out, _ = run(["apply", "--family", "bessel", "--m", "0", "--N", "32"], capsys)
    rec = records(out)[0]
    assert code == 0 and abs(rec["input_l2"] - rec["output_l2"]) < 1e-12
    code, out, _ = run(["classify-symbol", "--N", "128", "--m", "-0.5"], capsys)
    rec = records(out)[0]
    assert code == 0 and rec["claimed"]["m"] == -0.5 and "fit" in rec


def test_maximal_weights_norms(capsys):
    code, out, _ = run(["maximal", "--kind", "sharp", "--r", "1.5", "--N", "32"], capsys)
    assert code == 0 and records(out)[0]["kind"] == "sharp"
    code, out, _ = run(["weights", "--weight", "one", "--p", "1.5", "2", "--N", "16"], capsys)
    recs = records(out)
    assert code == 0 and [r["p"] for r in recs] == [1.5, 2.0]
    assert all(abs(r["A_p"] - 1) < 1e-14 for r in recs)
    code, out, _ = run(["norms", "--N", "64", "--s", "1"], capsys)
    rec = records(out)[0]
    assert code == 0 and rec["sobolev"] > rec["lp"]


def test_csv_has_dotted_columns(capsys):
    code, out, _ = run(["classify-symbol", "--N", "64", "--format", "csv"], capsys)
    rows = list(csv.DictReader(io.StringIO(out)))
    assert code == 0 and len(rows) == 1
    assert "claimed.rho" in rows[0] and "fit.m" in rows[0] and "symbol.family" in rows[0]


def test_flatten():
    assert flatten({"a": {"b": 1, "c": [2, 3]}, "d": []}) == {"a.b": 1, "a.c.0": 2, "a.c.1": 3, "d": ""}
    assert format_records([{"x": 1}], "jsonl") == '{"x": 1}\n'


def test_verify_pass_fail_and_out(tmp_path, capsys):
    base = ["verify", "sharp_maximal", "--set", "trials=2", "--set", "resolutions=[32, 64]"]
    out_path = tmp_path / "rep.jsonl"
    code, out, _ = run(base + ["--out", str(out_path)], capsys)
    rec = records(out_path.read_text())[0]
    assert code == 0 and out == "" and rec["verdict"] == "pass"
    code, out, _ = run(base + ["--set", 'tolerances={"trend": -1}'], capsys)
    assert code == 2 and records(out)[0]["verdict"] == "fail"


def test_verify_config_file_and_seed(tmp_path, capsys):
    cfg = tmp_path / "spec.json"
    cfg.write_text(json.dumps({"check": "weighted", "trials": 2, "resolutions": [32, 64]}))
    code, out, _ = run(["--seed", "5", "verify", "weighted", "--config", str(cfg)], capsys)
    rec = records(out)[0]
    assert code == 0 and rec["spec"]["seed"] == 5 and rec["spec"]["trials"] == 2


@pytest.mark.parametrize("argv", [
    ["verify", "weighted", "--set", "p=1.5"],                       # hypothesis violated
    ["verify", "weighted", "--set", "nonsense=1"],                  # unknown field
    ["verify", "weighted", "--set", "p"],                           # malformed override
    ["verify", "weighted", "--config", "/nonexistent/spec.json"],   # unreadable config
    ["transform", "--N", "12"],                                     # invalid grid
])
def test_usage_errors_exit_1(argv, capsys):
    code, _, err = run(argv, capsys)
    assert code == 1 and "error" in err


def test_argparse_errors_exit_1(capsys):
    with pytest.raises(SystemExit) as exc:
        main(["verify", "no_such_check"])
    assert exc.value.code == 1 and "invalid choice" in capsys.readouterr().err


def test_config_check_mismatch(tmp_path, capsys):
    cfg = tmp_path / "spec.json"
    cfg.write_text(json.dumps({"check": "lp_lq"}))
    code, _, err = run(["verify", "weighted", "--config", str(cfg)], capsys)
    assert code == 1 and "differs" in err


def test_module_entry_point():
    proc = subprocess.run([sys.executable, "-m", "torus_pdo", "weights", "--N", "16"],
                          capture_output=True, text=True, check=False)
    assert proc.returncode == 0 and json.loads(proc.stdout)["A_p"] >= 1
