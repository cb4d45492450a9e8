"""Command-line interface: outputs, configuration, exit codes and determinism."""

import csv
import io
import json
import math

import pytest

from qheat import cli, reproduce
from qheat.heat_traces import HeatTraceValue
from qheat.lattice_zeta import epstein_zeta


def run(capsys, *argv):
    code = cli.main(list(argv))
    out = capsys.readouterr()
    return code, out.out, out.err


def rows(text):
    return list(csv.DictReader(io.StringIO(text)))


def test_zeta_heisenberg_row(capsys):
    code, out, _ = run(capsys, "zeta", "--model", "heisenberg", "--N", "1", "--gauge", "radial", "--z", "-6")
    assert code == 0
    (row,) = rows(out)
    assert abs(float(row["value_re"]) - epstein_zeta(3, 6).value.real) < 1e-13
    assert row["near_pole"] == "false"


def test_zeta_separable_toeplitz_laplacian(capsys):
    code, out, _ = run(capsys, "zeta", "--model", "toeplitz", "--op", "laplacian", "--gauge", "separable", "--z", "0")
    assert code == 0
    assert abs(float(rows(out)[0]["value_re"]) - 1 / 72) < 1e-12


def test_zeta_empty_z_list(capsys):
    code, out, _ = run(capsys, "zeta", "--model", "toeplitz")
    assert code == 0
    assert rows(out) == [] and out.startswith("z_re,")


def test_zeta_near_pole_row_carries_laurent_data(capsys):
    code, out, _ = run(capsys, "zeta", "--model", "heisenberg", "--N", "1", "--op", "radial2", "--z", "-5.0002")
    assert code == 0
    (row,) = rows(out)
    assert row["near_pole"] == "true" and row["order"] == "1" and row["value_re"] == ""
    assert abs(float(row["residue_re"]) + 4 * math.pi) < 1e-6


@pytest.mark.parametrize(
    "argv,expected",
    [
        (["--model", "suq2", "--r", "1", "--t", "1"], 0.4982122),
        (["--model", "nctorus", "--N", "2", "--Tf", "1", "--t", "1"], -3.1422434),
        (["--model", "torus", "--N", "0", "--t", "7"], 1.0),
    ],
)
def test_heat_examples(capsys, argv, expected):
    code, out, _ = run(capsys, "heat", *argv)
    assert code == 0
    assert abs(float(rows(out)[0]["value"]) - expected) < 1e-6


def test_heat_rejects_nonpositive_t(capsys):
    with pytest.raises(SystemExit) as info:
        cli.main(["heat", "--model", "toeplitz", "--t", "0"])
    assert info.value.code == 2


def test_heat_t_grid_is_log_spaced(capsys):
    code, out, _ = run(capsys, "heat", "--model", "toeplitz", "--t-grid", "0.01:1:3")
    ts = [float(r["t"]) for r in rows(out)]
    assert code == 0 and len(ts) == 3 and abs(ts[1] - 0.1) < 1e-15


@pytest.mark.parametrize(
    "argv,p,A0,tol",
    [
        (["--model", "toeplitz"], 1.0, -2 * math.pi, 1e-4),
        (["--model", "suq2", "--r", "1"], 1.5, -2 * math.pi**2, 1e-3),
        (["--model", "heisenberg", "--N", "1"], 1.0, -4 * math.pi**2, 1e-4),
    ],
)
def test_asym_examples(capsys, argv, p, A0, tol):
    code, out, _ = run(capsys, "asym", *argv)
    assert code == 0
    (row,) = rows(out)
    assert abs(float(row["pole_order"]) - p) < 0.01
    assert abs(float(row["leading_coefficient"]) - A0) < tol
    assert row["confident"] == "true"


def test_oracle_command(capsys):
    code, out, _ = run(capsys, "oracle", "--model", "toeplitz")
    assert code == 0
    rs = rows(out)
    assert len(rs) == 9 and all(r["agree"] == "true" for r in rs)
    code, out, _ = run(capsys, "oracle", "--model", "suq2", "--z", "-2", "--t", "0.7")
    assert code == 0 and rows(out)[0]["agree"] == "true"


def test_oracle_unsupported_model(capsys):
    code, _, err = run(capsys, "oracle", "--model", "heisenberg")
    assert code == 2 and "oracle" in err


def test_json_schema_and_round_trip(capsys):
    code, out, _ = run(capsys, "heat", "--model", "toeplitz", "--t", "1", "--t", "0.3", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["schema"] == "qheat/1" and doc["ok"] is True
    values = [r["value"] for r in doc["rows"]]
    code, out, _ = run(capsys, "heat", "--model", "toeplitz", "--t", "1", "--t", "0.3")
    assert [float(r["value"]) for r in rows(out)] == values  # 17 digits round-trip exactly


@pytest.mark.parametrize("fmt", ["csv", "json"])
def test_output_is_deterministic(capsys, fmt):
    argv = ["zeta", "--model", "suq2", "--op", "radial2", "--z", "-1.3", "--z", "0.2", "--format", fmt]
    _, first, _ = run(capsys, *argv)
    _, second, _ = run(capsys, *argv)
    assert first == second


def test_config_file_and_flag_override(tmp_path, capsys):
    cfg = tmp_path / "run.cfg"
    cfg.write_text("# SU_q(2) run\nmodel = suq2\nr = 2   # scale\nt = 0.5, 1\nformat = csv\n", encoding="utf-8")
    code, out, _ = run(capsys, "heat", "--config", str(cfg))
    vals_r2 = [float(r["value"]) for r in rows(out)]
    code2, out2, _ = run(capsys, "heat", "--config", str(cfg), "--r", "1")
    vals_r1 = [float(r["value"]) for r in rows(out2)]
    assert code == code2 == 0
    assert abs(vals_r2[0] - vals_r1[1]) < 1e-15  # r=2, t=0.5 equals r=1, t=1


def test_config_unknown_key(tmp_path, capsys):
    cfg = tmp_path / "bad.cfg"
    cfg.write_text("colour = blue\n", encoding="utf-8")
    code, _, err = run(capsys, "heat", "--config", str(cfg))
    assert code == 2 and "colour" in err


def test_out_path(tmp_path, capsys):
    target = tmp_path / "heat.csv"
    code, out, _ = run(capsys, "heat", "--model", "suq2", "--t", "1", "--out", str(target))
    assert code == 0 and out == ""
    assert rows(target.read_text(encoding="utf-8"))[0]["t"] == "1"


def test_model_needs_positive_N(capsys):
    code, _, _ = run(capsys, "heat", "--model", "heisenberg", "--N", "0", "--t", "1")
    assert code == 2


def test_reproduce_subset(capsys):
    code, out, err = run(capsys, "reproduce", "--only", "toeplitz-trace")
    assert code == 0
    assert [r["id"] for r in rows(out)] == ["1", "2", "3"]
    assert err.count("[PASS]") == 3


def test_reproduce_unknown_filter(capsys):
    code, _, _ = run(capsys, "reproduce", "--only", "no-such-check")
    assert code == 2


def test_reproduce_forced_failure_path(capsys, monkeypatch):
    def tampered(t, prec=None):
        return HeatTraceValue(t, 0.4814372 + 1e-3, 0.0, "toeplitz")

    monkeypatch.setattr(reproduce, "toeplitz_heat_trace", tampered)
    code, out, _ = run(capsys, "reproduce", "--only", "2", "--format", "json")
    doc = json.loads(out)
    assert code == 1 and doc["ok"] is False and doc["rows"][0]["passed"] is False


def test_precision_environment_override(capsys, monkeypatch):
    monkeypatch.setenv("QHEAT_PRECISION_BITS", "106")
    code, out, _ = run(capsys, "heat", "--model", "suq2", "--t", "1", "--format", "json")
    doc = json.loads(out)
    assert code == 0 and doc["config"]["precision_bits"] == 106
    assert abs(doc["rows"][0]["value"] - 0.4982121818601949) < 1e-15
