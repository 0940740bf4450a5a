"""CLI subcommands and exit codes."""
import json

from continuum_sim.cli import main
from continuum_sim.telemetry import import_csv, import_jsonl


def test_validate_passes_with_defaults(capsys):
    code = main(["validate", "--samples", "150", "--jacobian-samples", "10"])
    out = capsys.readouterr().out
    assert code == 0
    assert "[PASS] kinematic round trip" in out
    assert "[FAIL]" not in out


def test_validate_bad_config_exits_2(tmp_path, capsys):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"geometry": {"inner": {
        "d": 0.0, "s_min": 38.0, "s_max": 162.0, "theta_max_deg": 75.0}}}))
    code = main(["validate", "--config", str(p)])
    assert code == 2
    assert "error" in capsys.readouterr().err


def test_run_exports_csv_and_jsonl(tmp_path, capsys):
    script = tmp_path / "short.scn"
    script.write_text(json.dumps({
        "duration": 0.5,
        "events": [{"t": 0.1, "kind": "velocity", "duration": 0.2,
                    "cdot": [0.001, 0, 0, 0, 0, 0, 0, 0, 0]}],
    }))
    csv_out = tmp_path / "run.csv"
    jsonl_out = tmp_path / "run.jsonl"
    code = main([
        "run", "--script", str(script),
        "--export", str(csv_out), "--export-jsonl", str(jsonl_out),
    ])
    assert code == 0
    assert len(import_csv(str(csv_out))) == 50
    assert len(import_jsonl(str(jsonl_out))) == 50
    out = capsys.readouterr().out
    assert "ticks: 50" in out


def test_run_missing_script_exits_2(capsys):
    code = main(["run", "--script", "/no/such.scn"])
    assert code == 2


def test_run_malformed_script_exits_2(tmp_path):
    script = tmp_path / "bad.scn"
    script.write_text("{\"duration\": 1, \"events\": [{\"t\": 0, \"kind\": \"nope\"}]}")
    assert main(["run", "--script", str(script)]) == 2


def test_export_converts_jsonl_to_csv(tmp_path):
    script = tmp_path / "short.scn"
    script.write_text(json.dumps({"duration": 0.2, "events": []}))
    jsonl_out = tmp_path / "run.jsonl"
    assert main(["run", "--script", str(script), "--export-jsonl", str(jsonl_out)]) == 0
    csv_out = tmp_path / "converted.csv"
    assert main(["export", "--input", str(jsonl_out), "--output", str(csv_out)]) == 0
    assert len(import_csv(str(csv_out))) == 20


def test_unknown_command_exits_2():
    assert main(["frobnicate"]) == 2


def test_bundled_script_by_name(tmp_path):
    out = tmp_path / "fig8.csv"
    code = main(["run", "--script", "fig8.scn", "--export", str(out)])
    assert code == 0
    assert out.exists()
