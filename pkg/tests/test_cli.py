import json
import os
from pathlib import Path

import pytest

from pvk.cli import dispatch, emit_report, load_problem, main
from pvk.errors import CrossRefError, ParseError, SchemaError

GOLDEN = Path(__file__).parent / "golden"
REGEN = os.environ.get("PVK_REGEN") == "1"

# (golden name, argv, expected exit code)
CASES = [
    ("check_mc_sl2_adjoint", ["check-mc", "sl2_adjoint.json"], 0),
    ("check_mc_so3", ["check-mc", "so3_standard.json"], 0),
    ("normalize_sl2_gauged", ["normalize", "sl2_standard_gauged.json"], 0),
    ("normalize_abelian_force", ["normalize", "abelian_obstructed.json", "--force"], 2),
    ("normalize_abelian_gate", ["normalize", "abelian_obstructed.json"], 1),
    ("char_class_so3_u2", ["char-class", "so3_standard.json", "--cocycle", "u2"], 0),
    ("modular_aff1", ["modular", "--algebra", "aff1"], 0),
    ("modular_sl2", ["modular", "--algebra", "sl2"], 0),
    ("isotropy_aff1", ["isotropy", "aff1_canonical.json"], 0),
    ("isotropy_custom", ["isotropy", "sl2_custom.json"], 0),
    ("ce_sl2_trivial", ["ce", "--algebra", "sl2", "--module", "trivial"], 0),
    ("ce_h3_trivial", ["ce", "--algebra", "h3", "--module", "trivial"], 0),
    ("pcoh_sl2", ["pcoh", "--algebra", "sl2", "--cap", "2"], 0),
    ("homotopy_sl2_gauged", ["homotopy", "sl2_standard_gauged.json", "--t", "t"], 0),
    ("homog_check_sl2", ["homog-check", "--algebra", "sl2", "--module", "standard", "--index", "0",
                         "--cocycle", "u2"], 0),
    ("product_h3", ["product", "h3_standard.json", "--m", "1"], 0),
    ("rank_mismatch", ["check-mc", "rank_mismatch.json"], 1),
    ("bad_rational", ["check-mc", "bad_rational.json"], 1),
]


def run(argv, capsysbinary):
    code = main(argv)
    return code, capsysbinary.readouterr().out


@pytest.mark.parametrize("name, argv, expected", CASES, ids=[c[0] for c in CASES])
def test_golden(name, argv, expected, capsysbinary):
    code, out = run(argv, capsysbinary)
    assert code == expected
    path = GOLDEN / f"{name}.json"
    if REGEN:
        path.write_bytes(out)
    assert out == path.read_bytes()


def test_deterministic(capsysbinary):
    first = run(["normalize", "sl2_standard_gauged.json"], capsysbinary)
    second = run(["normalize", "sl2_standard_gauged.json"], capsysbinary)
    assert first == second


def test_examples_prefix_resolves_to_fixture(capsysbinary):
    code, out = run(["check-mc", "examples/sl2_adjoint.json"], capsysbinary)
    report = json.loads(out)
    assert code == 0 and report["status"] == "ok" and report["payload"]["residual_zero"] is True


def test_modular_aff1_payload(capsysbinary):
    code, out = run(["modular", "--algebra", "aff1"], capsysbinary)
    payload = json.loads(out)["payload"]
    assert code == 0 and payload["class"] == ["1", "0"] and payload["nonexact"] is True


def test_obstruction_payload(capsysbinary):
    code, out = run(["normalize", "abelian_obstructed.json", "--force"], capsysbinary)
    report = json.loads(out)
    assert code == 2 and report["payload"]["obstruction"]["r"] == 1
    assert report["error"]["cocycle"] == [[[0], [[1, "1"]]]]


def test_load_errors():
    with pytest.raises(CrossRefError) as info:
        load_problem("rank_mismatch.json")
    assert info.value.pointer == "/bundle/xi"
    with pytest.raises(ParseError):
        load_problem("bad_rational.json")


def test_schema_error_pointer(tmp_path):
    p = tmp_path / "bad.json"
    p.write_text(json.dumps({"algebra": "sl2", "bundle": {"rank": "two"}}))
    with pytest.raises(SchemaError) as info:
        load_problem(str(p))
    assert info.value.pointer.startswith("/bundle")


def test_exit_codes(tmp_path, capsysbinary, monkeypatch):
    # validation failures exit 1
    code, _ = run(["check-mc", str(tmp_path / "missing.json")], capsysbinary)
    assert code == 1
    code, _ = run(["ce", "--algebra", "nope"], capsysbinary)
    assert code == 1
    # degree caps above the guard are rejected
    monkeypatch.setenv("PVK_MAX_CAP", "3")
    code, _ = run(["pcoh", "--algebra", "sl2", "--cap", "5"], capsysbinary)
    assert code == 1
    monkeypatch.delenv("PVK_MAX_CAP")
    # mathematical obstruction exits 2
    code, _ = run(["normalize", "abelian_obstructed.json", "--force"], capsysbinary)
    assert code == 2


def test_internal_error_exit_3(capsysbinary, monkeypatch):
    import pvk.cli as cli

    def boom(prob, flags):
        raise RuntimeError("boom")

    monkeypatch.setitem(cli.HANDLERS, "ce", boom)
    code, out = run(["ce", "--algebra", "sl2"], capsysbinary)
    assert code == 3 and json.loads(out)["status"] == "internal"


def test_emit_report_canonical():
    report = {"status": "ok", "command": "ce", "payload": {}}
    a = emit_report(report)
    assert a == emit_report(dict(reversed(list(report.items()))))
    assert a.endswith(b"\n") and json.loads(a)["payload"] == {}
    text = emit_report({"command": "ce", "status": "ok", "payload": {"dims": [1, 0]}}, "text")
    assert b"status: ok" in text


def test_timing_only_on_request():
    prob = load_problem("sl2_adjoint.json")
    report, _ = dispatch("check-mc", prob)
    assert "timing" not in report
    report, _ = dispatch("check-mc", prob, {"timing": True})
    assert report["timing"].endswith("s")


def test_output_file(tmp_path, capsysbinary):
    out = tmp_path / "r.json"
    code = main(["ce", "--algebra", "aff1", "--module", "trivial", "-o", str(out)])
    assert code == 0 and json.loads(out.read_text())["payload"]
