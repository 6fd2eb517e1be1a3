"""Configuration parsing and the command-line surface."""

import json
import pathlib

import numpy as np
import pytest

from cxpt.cli import OPERATION_COVERAGE, run
from cxpt.config import Config, load_config
from cxpt.errors import ConfigParseError

SCHEMA_DIR = pathlib.Path(__file__).resolve().parent.parent / "docs" / "schemas"


def load_schema(name):
    schema = json.loads((SCHEMA_DIR / name).read_text())
    complex_schema = json.loads((SCHEMA_DIR / "complex.schema.json").read_text())

    def inline(node):
        if isinstance(node, dict):
            if node.get("$ref") == "complex.schema.json":
                return {k: v for k, v in complex_schema.items()
                        if not k.startswith("$")}
            return {k: inline(v) for k, v in node.items()}
        if isinstance(node, list):
            return [inline(v) for v in node]
        return node

    return inline(schema)


def write(tmp_path, text):
    path = tmp_path / "cxpt.conf"
    path.write_text(text)
    return str(path)


def test_empty_config_gives_defaults(tmp_path):
    cfg = load_config(write(tmp_path, ""))
    assert cfg == Config()


def test_config_overrides(tmp_path):
    cfg = load_config(write(tmp_path, "fd.step = 1e-5\nquadrature.circle.order = 96\n"))
    assert cfg.fd_step == 1e-5
    assert cfg.circle_order == 96
    assert cfg.interval_order == Config().interval_order


def test_config_comments_and_blanks(tmp_path):
    cfg = load_config(write(tmp_path, "# comment\n\nfd.order = 2\n"))
    assert cfg.fd_order == 2


def test_config_rejections(tmp_path):
    with pytest.raises(ConfigParseError, match="unknown key"):
        load_config(write(tmp_path, "quadrature.banana = 7\n"))
    with pytest.raises(ConfigParseError, match=":1:"):
        load_config(write(tmp_path, "not a key value line\n"))
    with pytest.raises(ConfigParseError):
        load_config(write(tmp_path, "quadrature.sphere.order = 3\n"))
    with pytest.raises(ConfigParseError):
        load_config(write(tmp_path, "fd.step = -1\n"))
    with pytest.raises(ConfigParseError):
        load_config(write(tmp_path, "output.format = yaml\n"))


def test_config_env(tmp_path, monkeypatch):
    path = write(tmp_path, "default.a = 2.5\n")
    monkeypatch.setenv("CXPT_CONFIG", path)
    from cxpt.config import config_from_env

    assert config_from_env().default_a == 2.5


def run_cli(capsys, argv):
    code = run(argv)
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_cli_gamma(capsys):
    code, out, _ = run_cli(capsys, ["gamma", "--n", "3", "--x", "2,0,0", "--y", "0,0,1"])
    assert code == 0
    payload = json.loads(out)
    assert payload["p"] == pytest.approx(np.sqrt(3.0))
    assert payload["q"] == 0.0
    assert payload["class"] == "Regular"


def test_cli_moments(capsys):
    code, out, _ = run_cli(capsys, ["moments", "--n", "3", "--y", "0,0,1"])
    assert code == 0
    payload = json.loads(out)
    assert payload["Q"]["re"] == pytest.approx(1.0, abs=1e-9)
    assert payload["P"][2]["im"] == pytest.approx(-1.0, abs=1e-9)


def test_cli_source_action_parts(capsys):
    code, out, _ = run_cli(capsys, ["source-action", "--n", "3", "--y", "0,0,1",
                                    "--field", "gaussian:1.0"])
    assert code == 0
    payload = json.loads(out)
    assert payload["value_re"] == pytest.approx(-0.07615901382553684, abs=1e-8)
    assert set(payload["parts"]) == {"rim", "single_layer", "double_layer"}
    total = sum(payload["parts"][k]["re"] for k in payload["parts"])
    assert total == pytest.approx(payload["value_re"], abs=1e-14)


def test_cli_regularized_action(capsys):
    code, out, _ = run_cli(capsys, ["source-action", "--n", "3", "--y", "0,0,1",
                                    "--field", "constant:1", "--eps", "0.01"])
    assert code == 0
    payload = json.loads(out)
    assert payload["value_re"] == pytest.approx(1.0, abs=1e-6)


def test_cli_wave_csv(capsys):
    code, out, _ = run_cli(capsys, ["wave", "--n", "3", "--v", "plane_wave:1,0,0",
                                    "--w", "constant:0", "--x", "0,0,0",
                                    "--t", "0.5", "--lattice-half", "0"])
    assert code == 0
    lines = out.strip().splitlines()
    assert lines[0] == "x1,x2,x3,t,re_u,im_u"
    row = lines[1].split(",")
    assert float(row[4]) == pytest.approx(np.cos(0.5), abs=1e-9)


def test_cli_wave_verify(capsys):
    code, out, _ = run_cli(capsys, ["wave-verify", "--n", "3",
                                    "--v", "plane_wave:1,0,0", "--w", "constant:0",
                                    "--x", "0.2,0,0.1", "--t", "0.4", "--half", "1"])
    assert code == 0
    assert json.loads(out)["residual"] <= 1e-3


def test_cli_descent(capsys):
    code, out, _ = run_cli(capsys, ["descent-check", "--y", "0,0,1",
                                    "--field", "gaussian:1.5"])
    assert code == 0
    assert json.loads(out)["abs_diff"] <= 1e-9


def test_cli_clifford_bp(capsys):
    code, out, _ = run_cli(capsys, ["clifford", "bp-check"])
    assert code == 0
    payload = json.loads(out)
    assert payload["interior_error"] <= 1e-6
    assert payload["exterior_leakage"] <= 1e-6


def test_cli_verify_subset(capsys):
    code, out, err = run_cli(capsys, ["verify", "--suite", "1,12"])
    assert code == 0
    lines = [json.loads(line) for line in out.strip().splitlines()]
    assert [entry["criterion"] for entry in lines] == [1, 12]
    assert all(entry["passed"] for entry in lines)
    assert "PASS" in err


def test_cli_validation_errors(capsys):
    code, _, err = run_cli(capsys, ["gamma", "--n", "3", "--x", "1,0", "--y", "0,0,1"])
    assert code == 1
    assert "error" in err
    code, _, _ = run_cli(capsys, ["unknown-subcommand"])
    assert code == 1
    code, _, err = run_cli(capsys, ["verify", "--suite", "99"])
    assert code == 1


def test_cli_config_flag(tmp_path, capsys):
    bad = tmp_path / "bad.conf"
    bad.write_text("quadrature.sphere.order = 3\n")
    code, _, err = run_cli(capsys, ["--config", str(bad), "gamma", "--n", "3",
                                    "--x", "2,0,0", "--y", "0,0,1"])
    assert code == 1
    assert "order must be >=" in err


def test_cli_deterministic_output(capsys):
    argv = ["source-action", "--n", "3", "--y", "0,0,1", "--field", "gaussian:1.0"]
    _, out1, _ = run_cli(capsys, argv)
    _, out2, _ = run_cli(capsys, argv)
    assert out1 == out2


def test_cli_default_axis_from_config(tmp_path, capsys):
    # --y omitted: the axis defaults to default.a * e_n
    path = write(tmp_path, "default.a = 0.5\n")
    code, out, _ = run_cli(capsys, ["--config", path, "moments", "--n", "3"])
    assert code == 0
    payload = json.loads(out)
    assert payload["P"][2]["im"] == pytest.approx(-0.5, abs=1e-9)
    code, out, _ = run_cli(capsys, ["gamma", "--n", "3", "--x", "2,0,0"])
    assert json.loads(out)["p"] == pytest.approx(np.sqrt(3.0))


def test_cli_outputs_match_schemas(capsys):
    import jsonschema

    cases = [
        (["gamma", "--n", "3", "--x", "2,0,0", "--y", "0,0,1"], "gamma.schema.json"),
        (["potential", "--n", "3", "--x", "0,0,1", "--y", "0,0,1"],
         "potential.schema.json"),
        (["source-action", "--n", "3", "--y", "0,0,1", "--field", "constant:1"],
         "source-action.schema.json"),
        (["moments", "--n", "4", "--y", "0,0,0,1"], "moments.schema.json"),
        (["descent-check", "--y", "0,0,1", "--field", "constant:1"],
         "descent-check.schema.json"),
        (["wave-verify", "--n", "3", "--v", "constant:0", "--w", "constant:1",
          "--x", "0,0,0", "--t", "0.3", "--half", "1"], "wave-verify.schema.json"),
        (["clifford", "bp-check"], "clifford.schema.json"),
        (["verify", "--suite", "12"], "verify.schema.json"),
    ]
    for argv, schema_name in cases:
        code, out, _ = run_cli(capsys, argv)
        assert code == 0, argv
        schema = load_schema(schema_name)
        for line in out.strip().splitlines():
            jsonschema.validate(json.loads(line), schema)


def test_cli_verify_numerical_failure_exit_code(capsys, monkeypatch):
    from cxpt import acceptance as acc
    from cxpt.acceptance import CriterionResult

    def failing():
        return CriterionResult(12, "forced failure", False, {})

    monkeypatch.setitem(acc.CRITERIA, 12, failing)
    code, _, err = run_cli(capsys, ["verify", "--suite", "12"])
    assert code == 2
    assert "FAILED" in err


def test_operation_coverage_table():
    # every operation appears exactly once, i.e. has a single owning subcommand
    assert len(set(OPERATION_COVERAGE)) == len(OPERATION_COVERAGE)
    subcommands = {"gamma", "potential", "source-action", "moments", "descent-check",
                   "wave", "wave-verify", "clifford", "verify"}
    assert set(OPERATION_COVERAGE.values()) <= subcommands
    import cxpt

    for op in OPERATION_COVERAGE:
        if op in ("run", "load_config"):
            continue
        assert hasattr(cxpt, op), f"operation {op} is not exported"
