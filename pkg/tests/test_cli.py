import csv
import io
import json
import math

import pytest

from envlab.cli import main, resolve_density, verify_discrete
from envlab.tables import CSV_COLUMNS


def run(capsys, *argv):
    code = main(list(argv))
    captured = capsys.readouterr()
    return code, captured.out, captured.err


def test_eval_uniform_example(capsys):
    code, out, _ = run(capsys, "eval", "--density", "uniform01",
                       "--process", "halve-or-double", "--y", "0.3")
    assert code == 0
    assert "expected_benefit: 0.15" in out
    assert "decision:         switch" in out


def test_eval_power_law_indifferent(capsys):
    code, out, _ = run(capsys, "eval", "--density", "power_law", "--param", "n=2",
                       "--process", "double-only", "--y", "5", "--json")
    assert code == 0
    payload = json.loads(out)
    assert payload["report"]["expected_benefit"] == 0.0
    assert payload["report"]["decision"] == "indifferent"


def test_eval_off_support_exits_two(capsys):
    code, out, _ = run(capsys, "eval", "--density", "broome_discrete",
                       "--process", "double-only", "--y", "3")
    assert code == 2
    assert "unattainable" in out


def test_eval_with_bounds(capsys):
    code, out, _ = run(capsys, "eval", "--density", "uniform01",
                       "--process", "halve-or-double", "--y", "0.8",
                       "--x-l", "0", "--x-u", "1")
    assert code == 0
    assert "bounded decision: stay" in out


def test_eval_malformed_density_exits_one(capsys):
    code, _, err = run(capsys, "eval", "--density", "nope",
                       "--process", "double-only", "--y", "1")
    assert code == 1
    assert "error:" in err


def test_eval_inline_json_spec(capsys):
    spec = json.dumps({"name": "piecewise", "kind": "continuous",
                       "breakpoints": [0.0, 1.0, 2.0], "values": [0.25, 0.75]})
    code, out, _ = run(capsys, "eval", "--density", spec,
                       "--process", "double-only", "--y", "1.2", "--json")
    assert code == 0
    assert json.loads(out)["report"]["attainable"] is True


def test_eval_spec_file(tmp_path, capsys):
    path = tmp_path / "density.json"
    path.write_text(json.dumps({"name": "uniform01", "kind": "continuous"}))
    code, out, _ = run(capsys, "eval", "--density", str(path),
                       "--process", "halve-or-double", "--y", "0.3", "--json")
    assert code == 0
    assert json.loads(out)["report"]["expected_benefit"] == pytest.approx(0.15)


def test_bad_usage_exits_one(capsys):
    assert main(["eval", "--density", "uniform01"]) == 1  # missing flags
    capsys.readouterr()
    assert main(["no-such-command"]) == 1
    capsys.readouterr()


def test_table_csv_header_and_flip(capsys):
    code, out, _ = run(capsys, "table", "--density", "rayleigh_half",
                       "--process", "double-only",
                       "--start", "0.80", "--stop", "0.86", "--count", "13")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))
    assert tuple(rows[0]) == CSV_COLUMNS
    data = rows[1:]
    decisions = [row[6] for row in data]
    flip = decisions.index("stay")
    assert decisions[flip - 1] == "switch"
    root = math.sqrt(math.log(2))
    assert float(data[flip][2]) > root > float(data[flip - 1][2])


def test_table_halve_or_double_flip_near_0686(capsys):
    code, out, _ = run(capsys, "table", "--density", "rayleigh_half",
                       "--process", "halve-or-double",
                       "--start", "0.67", "--stop", "0.70", "--count", "31")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))[1:]
    flips = [i for i in range(1, len(rows)) if rows[i][6] != rows[i - 1][6]]
    assert len(flips) == 1
    assert abs(float(rows[flips[0]][2]) - 0.686511) < 0.002


def test_table_extreme_band_constant_ratio(capsys):
    code, out, _ = run(capsys, "table", "--density", "extreme_values",
                       "--process", "halve-only",
                       "--start", "20", "--stop", "49", "--count", "10")
    assert code == 0
    rows = list(csv.reader(io.StringIO(out)))[1:]
    for row in rows:
        y, e = float(row[2]), float(row[5])
        assert e / y == pytest.approx(0.5, abs=1e-12)


def test_table_empty_grid_exits_one(capsys):
    code, _, err = run(capsys, "table", "--density", "uniform01",
                       "--process", "double-only",
                       "--start", "0.1", "--stop", "0.5", "--count", "0")
    assert code == 1
    assert "error:" in err


def test_table_log_scale_and_out_file(tmp_path, capsys):
    out_file = tmp_path / "sweep.csv"
    code, _, _ = run(capsys, "table", "--density", "broome_continuous",
                     "--process", "double-only",
                     "--start", "0.1", "--stop", "10", "--count", "5",
                     "--scale", "log", "--out", str(out_file))
    assert code == 0
    rows = list(csv.reader(out_file.open()))
    ys = [float(r[2]) for r in rows[1:]]
    ratios = [ys[i + 1] / ys[i] for i in range(len(ys) - 1)]
    assert all(r == pytest.approx(ratios[0], rel=1e-9) for r in ratios)


def test_roots_weibull(capsys):
    code, out, _ = run(capsys, "roots", "--density", "rayleigh_half",
                       "--process", "double-only", "--lo", "0.1", "--hi", "2")
    assert code == 0
    assert "0.832555" in out.replace("0.8325546", "0.832555")
    code, out, _ = run(capsys, "roots", "--density", "rayleigh_half",
                       "--process", "double-only", "--lo", "0.1", "--hi", "2", "--json")
    root = json.loads(out)
    assert abs(root["y"] - math.sqrt(math.log(2))) < 1e-6


def test_roots_none_found(capsys):
    code, out, _ = run(capsys, "roots", "--density", "uniform01",
                       "--process", "halve-or-double",
                       "--lo", "0.01", "--hi", "0.49")
    assert code == 0
    assert "no roots" in out


def test_catalog_lists_eight(capsys):
    code, out, _ = run(capsys, "catalog")
    assert code == 0
    assert len(out.strip().splitlines()) == 8
    code, out, _ = run(capsys, "catalog", "--json")
    entries = [json.loads(line) for line in out.strip().splitlines()]
    assert len(entries) == 8
    assert {e["name"] for e in entries} >= {"uniform01", "broome_discrete", "power_law"}


def test_simulate_unconditioned(capsys):
    code, out, _ = run(capsys, "simulate", "--density", "uniform01",
                       "--process", "halve-or-double", "--n", "50000", "--seed", "4")
    assert code == 0
    payload = json.loads(out)
    assert payload["n"] == 50000
    assert abs(payload["mean_benefit"]) < 5 * payload["std_error"] + 1e-9


def test_simulate_conditioned(capsys):
    code, out, _ = run(capsys, "simulate", "--density", "uniform01",
                       "--process", "double-only", "--y", "0.4",
                       "--n", "400000", "--seed", "9")
    assert code == 0
    payload = json.loads(out)
    assert payload["n_conditioned"] > 0
    assert abs(payload["mean_benefit"] - 0.2) < 4 * payload["std_error"] + 2 * payload["epsilon"]


def test_simulate_seed_env_var(capsys, monkeypatch):
    monkeypatch.setenv("ENVLAB_SEED", "777")
    code, out, _ = run(capsys, "simulate", "--density", "uniform01",
                       "--process", "double-only", "--n", "1000")
    assert code == 0
    assert json.loads(out)["seed"] == 777
    monkeypatch.setenv("ENVLAB_SEED", "not-a-number")
    code, _, err = run(capsys, "simulate", "--density", "uniform01",
                       "--process", "double-only", "--n", "1000")
    assert code == 1
    assert "ENVLAB_SEED" in err


def test_verify_discrete_suite(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "discrete", "--trials", "6")
    assert code == 0
    assert "[ok] discrete suite" in out


def test_verify_mc_suite_small(capsys):
    code, out, _ = run(capsys, "verify", "--suite", "mc", "--plays", "120000")
    assert code == 0
    assert "[ok] mc suite" in out


def test_verify_discrete_reports_failures():
    # a broken check must drive the suite (and exit code) red; feed the
    # emitter a sink so nothing prints
    lines = []
    assert verify_discrete(0, 2, emit=lines.append) is True
    assert any("[ok]" in line for line in lines)


def test_resolve_density_param_passthrough():
    d = resolve_density("power_law", {"n": 3})
    assert d.name == "power_law"
    with pytest.raises(ValueError):
        resolve_density('{"name": "uniform01", "kind": "continuous"}', {"n": 3})
