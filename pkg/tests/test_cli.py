import io as _io
import json
import subprocess
import sys
from pathlib import Path

import pytest

from gammacat.cli import EXIT_CAP, EXIT_FAIL, EXIT_MALFORMED, EXIT_OK, main

FIXTURES = Path(__file__).parent / "fixtures" / "cli"
MANIFEST = json.loads((FIXTURES / "manifest.json").read_text())


def run(args):
    buf = _io.StringIO()
    code = main(list(args), out=buf)
    return code, buf.getvalue()


@pytest.fixture(autouse=True)
def _in_fixture_dir(monkeypatch):
    monkeypatch.chdir(FIXTURES)


def test_exit_code_constants():
    assert (EXIT_OK, EXIT_FAIL, EXIT_MALFORMED, EXIT_CAP) == (0, 1, 2, 3)


def test_malformed_corpus_is_large_enough():
    assert len(MANIFEST["malformed"]) >= 20


@pytest.mark.parametrize("case", MANIFEST["valid"] + MANIFEST["malformed"], ids=lambda c: c["name"])
def test_manifest_exit_codes(case):
    code, out = run(case["args"])
    assert code == case["exit"]
    if code == EXIT_MALFORMED and case["args"] and "--output" not in case["args"]:
        # argparse failures print usage to stderr; everything else reports on stdout
        if out:
            assert json.loads(out)["error"]


@pytest.mark.parametrize("case", MANIFEST["valid"] + MANIFEST["malformed"], ids=lambda c: c["name"])
def test_output_is_deterministic(case):
    assert run(case["args"]) == run(case["args"])


def test_h3_reports_order_two():
    code, out = run(["h3", "module_z2.json", "--method", "enum"])
    assert code == 0 and json.loads(out)["order"] == 2


def test_h3_text_format():
    code, out = run(["h3", "module_222.json", "--output", "text"])
    assert "H3 order: 8" in out


def test_text_report_shows_missing_witness():
    code, out = run(["cocycle-check", "module_222.json", "cochain_zero_222.json", "--output", "text"])
    assert code == 0 and "witness: none" in out


def test_shape_diagnostic():
    code, out = run(["cocycle-check", "module_222.json", "bad_cochain_shape.json"])
    doc = json.loads(out)
    assert code == 2 and "ShapeError" in doc["message"]


def test_mismatched_order_witness():
    code, out = run(["cocycle-check", "module_z2_a3.json", "cochain_mismatched_order.json"])
    checks = {c["name"]: c for c in json.loads(out)["checks"]}
    assert code == 1 and checks["cocycle_pppp"]["witness"] == [1, 1, 1, 1]


def test_json_outputs_reparse_to_equal_values():
    from gammacat import io

    em = io.module_from_json(json.loads((FIXTURES / "module_222.json").read_text()))
    code, out = run(["factorset-build", "module_222.json", "cochain_tss_222.json"])
    fs = io.factor_set_from_json(em, json.loads(out))
    assert io.dumps(io.factor_set_to_json(fs)) == out
    code, out = run(["factorset-induce", "module_222.json", "factorset_tss_222.json"])
    h = io.cochain_from_json(em, json.loads(out))
    assert io.dumps(io.cochain_to_json(h)) == out
    assert out == (FIXTURES / "cochain_tss_222.json").read_text()


def test_strictify_output_is_enough_strict():
    from gammacat import io

    em = io.module_from_json(json.loads((FIXTURES / "module_222.json").read_text()))
    code, out = run(["factorset-strictify", "module_222.json", "factorset_nonstrict_222.json"])
    doc = json.loads(out)
    assert code == 0 and io.factor_set_from_json(em, doc["factor_set"]).enough_strict


def test_classify_json():
    code, out = run(["classify", "module_222.json"])
    doc = json.loads(out)
    assert code == 0 and doc["bijection_verified"] and doc["cohomology_class_count"] == 4


def test_console_entry_point():
    proc = subprocess.run(
        [sys.executable, "-m", "gammacat", "h3", "module_z3.json", "--output", "text"],
        capture_output=True,
        text=True,
        cwd=FIXTURES,
    )
    assert proc.returncode == 0 and "H3 order: 3" in proc.stdout
