import csv
import io
import json
import re
from fractions import Fraction
from pathlib import Path

import jsonschema
import pytest

from abeldyn.cli import (
    ConfigError,
    ExpressionError,
    SuiteParams,
    emit,
    exit_code,
    parse_config,
    parse_expression,
    run_suite,
    strip_timing,
    validate,
)
from abeldyn.cli.main import main
from abeldyn import multiplication_map
from abeldyn.correspondence import compose, delta, graph, transpose_graph
from abeldyn.errors import InputError

CONFIGS = Path(__file__).resolve().parent.parent / "configs"

MINIMAL = "version: 1\nfactors:\n  - {curve_id: E, multiplicity: 1, order: Z}\n"


def test_minimal_config():
    config = parse_config(MINIMAL)
    assert config.variety.n == 1
    assert len(config.digest) == 64


def test_gaussian_order_accepted():
    config = parse_config("version: 1\nfactors:\n  - {curve_id: E, order: {t: 0, d: 1}}\n")
    assert config.variety.order_of(0).multiply((0, 1), (0, 1)) == (-1, 0)


def test_real_quadratic_order_rejected_with_line():
    text = "version: 1\nfactors:\n  - curve_id: E\n    order: {t: 0, d: -1}\n"
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert info.value.errors[0][0] == 4
    assert "not imaginary quadratic" in str(info.value)


@pytest.mark.parametrize("text, line, fragment", [
    ("version: 1\nfactors:\n  - {curve_id: '1E'}\n", 3, "unknown curve_id"),
    ("version: 1\nfactors:\n  - {curve_id: E}\n  - {curve_id: E}\n", 4, "duplicate curve_id"),
    ("version: 1\nfactors:\n  - {curve_id: E, multiplicity: 2}\nendomorphisms:\n  f: [[1, 0]]\n", 5, "list of 2 rows"),
    ("version: 1\nfactors:\n  - {curve_id: E}\ncorrespondences:\n  c: graph(g)\n", 5, "unknown endomorphism"),
    ("version: 2\nfactors:\n  - {curve_id: E}\n", 1, "unsupported version"),
    ("version: 1\nfactors:\n  - {curve_id: E, colour: red}\n", 3, "unknown factor field"),
    ("version: 1\nfactors:\n  - {curve_id: E, multiplicity: x}\n", 3, "must be an integer"),
])
def test_config_errors_carry_lines(text, line, fragment):
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert any(ln == line and fragment in msg for ln, msg in info.value.errors), info.value.errors


def test_errors_are_collected():
    text = ("version: 1\nfactors:\n  - {curve_id: E, multiplicity: 2}\nendomorphisms:\n"
            "  f: [[1, 0]]\n  g: [[1, 0], [0]]\n")
    with pytest.raises(ConfigError) as info:
        parse_config(text)
    assert [ln for ln, _ in info.value.errors] == [5, 6]


def test_cross_curve_entry_rejected():
    text = ("version: 1\nfactors:\n  - {curve_id: E1}\n  - {curve_id: E2}\n"
            "endomorphisms:\n  f: [[1, 1], [0, 1]]\n")
    with pytest.raises(ConfigError, match="links different curves"):
        parse_config(text)


def test_expression_language():
    config = parse_config((CONFIGS / "e2.yaml").read_text())
    v = config.variety
    shear = config.endomorphisms["shear"]
    two = multiplication_map(2, v)
    assert config.correspondence("compose(graph(shear), transpose(2))") == compose(
        graph(shear), transpose_graph(two)
    )
    assert config.correspondence("graph(shear) + 3/5*delta") == graph(shear) + Fraction(3, 5) * delta(v)
    assert config.correspondence("power(unipotent, 2)") == graph(shear @ shear)
    assert config.correspondence("transpose(unipotent)") == transpose_graph(shear)
    assert config.correspondence("transpose(shear)") == transpose_graph(shear)


@pytest.mark.parametrize("text, fragment", [
    ("graph(shear", "syntax error"),
    ("shear", "write graph(shear)"),
    ("-1*graph(shear)", "nonnegative"),
    ("graph(shear)*(1/0)", "division by zero"),
    ("graph(1/2)", "endomorphism name or integer"),
    ("graph(shear) - delta", "only '+'"),
    ("power(delta, 1/2)", "nonnegative integer"),
    ("frobnicate(delta)", "unknown function"),
])
def test_expression_errors(text, fragment):
    config = parse_config((CONFIGS / "e2.yaml").read_text())
    with pytest.raises(ExpressionError, match=re.escape(fragment)):
        parse_expression(text, config.variety, config.endomorphisms, config.correspondences)


def test_unknown_suite_and_bad_params():
    config = parse_config(MINIMAL)
    with pytest.raises(InputError, match="unknown suite"):
        run_suite(config, "nope", 1)
    with pytest.raises(InputError, match="out of range"):
        SuiteParams(entry_bound=0)
    with pytest.raises(InputError, match="n = 1"):
        run_suite(parse_config((CONFIGS / "e2.yaml").read_text()), "castelnuovo_severi", 1)


def test_empty_suite_is_a_valid_report():
    report = run_suite(parse_config(MINIMAL), "ddc", 1, SuiteParams(samples=0))
    assert report["records"] == []
    validate(report)
    assert exit_code(report) == 0
    assert emit(report, "csv").decode().strip().count("\n") == 0


def test_ddc_record_shape_and_csv_rows():
    config = parse_config((CONFIGS / "e2.yaml").read_text())
    report = run_suite(config, "ddc", 42, SuiteParams(samples=4))
    validate(report)
    assert len(report["records"]) == 4 * 3
    rec = report["records"][0]
    for key in ("chi", "lambda_numerical", "lambda_growth"):
        lo, hi = rec["certified_values"][key]
        assert isinstance(lo, str) and float(lo) <= float(hi)
    rows = list(csv.DictReader(io.StringIO(emit(report, "csv").decode())))
    assert len(rows) == 4 * 3
    assert {(r["sample"], r["k"]) for r in rows} == {(str(s), str(k)) for s in range(4) for k in range(3)}


def test_reports_are_deterministic():
    config = parse_config((CONFIGS / "ecm2.yaml").read_text())
    params = SuiteParams(samples=3)
    a = strip_timing(run_suite(config, "dinh", 5, params))
    b = strip_timing(run_suite(config, "dinh", 5, params))
    assert json.dumps(a, sort_keys=True) == json.dumps(b, sort_keys=True)
    c = strip_timing(run_suite(config, "dinh", 6, params))
    assert a["records"] != c["records"]


def test_schema_rejects_bad_verdict():
    report = run_suite(parse_config(MINIMAL), "gr_identity", 1, SuiteParams(samples=1))
    report["records"][0]["verdict"] = "maybe"
    with pytest.raises(jsonschema.ValidationError):
        validate(report)


def test_semisimple_control_is_expected_fail():
    report = run_suite(parse_config((CONFIGS / "e2.yaml").read_text()), "semisimple", 3,
                       SuiteParams(samples=2))
    control = [r for r in report["records"] if r["sample"] == "control-unipotent"]
    assert [(r["k"], r["verdict"], r["expected"]) for r in control][1] == (1, "fail", "fail")
    assert exit_code(report) == 0


def test_cli_exit_codes(tmp_path, capsys):
    e2 = str(CONFIGS / "e2.yaml")
    assert main(["describe", e2]) == 0
    assert main(["degrees", e2, "mixed", "--k", "1"]) == 0
    assert main(["spectra", e2, "unipotent"]) == 0
    bad = tmp_path / "bad.yaml"
    bad.write_text("version: 1\nfactors:\n  - {curve_id: E, order: {t: 0, d: -1}}\n")
    assert main(["describe", str(bad)]) == 2
    assert main(["spectra", e2, "graph(shear)", "--tol", "1e-2000"]) == 3

    out = tmp_path / "r.json"
    assert main(["check", e2, "--suite", "gr_identity", "--seed", "1", "--samples", "2",
                 "--out", str(out)]) == 0
    report = json.loads(out.read_text())
    csv_out = tmp_path / "r.csv"
    assert main(["report", "--input", str(out), "--format", "csv", "--out", str(csv_out)]) == 0
    assert csv_out.read_text().count("\n") == len(report["records"]) + 1

    report["records"][0]["verdict"] = "fail"
    failing = tmp_path / "f.json"
    failing.write_text(json.dumps(report))
    assert main(["report", "--input", str(failing), "--format", "json", "--out", str(tmp_path / "g.json")]) == 1
    (tmp_path / "junk.json").write_text("{")
    assert main(["report", "--input", str(tmp_path / "junk.json"), "--format", "json"]) == 2
    capsys.readouterr()


def test_workers_do_not_change_results():
    config_text = (CONFIGS / "e1xe2.yaml").read_text()
    config = parse_config(config_text)
    serial = run_suite(config, "lieberman", 9, SuiteParams(samples=4))
    parallel = run_suite(config, "lieberman", 9, SuiteParams(samples=4, workers=2), config_text=config_text)
    assert strip_timing(serial) == strip_timing(parallel)
