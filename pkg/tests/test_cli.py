import csv
import io
import json

import numpy as np
import pytest

from finestructure.algebra import Paravector, pv_pow
from finestructure.battery import REGISTRY, BatteryConfig, ConfigError, run_battery, select_checks
from finestructure.cli import EXIT_CONFIG, EXIT_FAIL, EXIT_PASS, main


def write(tmp_path, name, data):
    p = tmp_path / name
    p.write_text(json.dumps(data) if not isinstance(data, str) else data)
    return str(p)


def test_every_check_has_a_description_and_class():
    assert len(REGISTRY) > 40
    for cid, check in REGISTRY.items():
        assert check.description and cid.split(".")[0] in {"algebra", "kernel", "identity", "diff", "series",
                                                           "calc", "monogenic"}


def test_selection_globs_and_unknown_names():
    ids = [c.id for c in select_checks(["identity.*"])]
    assert ids and all(i.startswith("identity.") for i in ids)
    with pytest.raises(ConfigError):
        select_checks(["identity.*", "no_such_check"])


def test_identity_selection_runs_only_the_combinatorial_suite():
    results, status = run_battery(BatteryConfig(checks=["identity.*"]))
    assert status == 0
    assert {r.check_id.split(".")[0] for r in results} == {"identity"}


def test_cliffordian_regime_is_skipped_at_three_and_run_at_five():
    res3, _ = run_battery(BatteryConfig(n=[3], checks=["diff.cliffordian_kernel"]))
    res5, status = run_battery(BatteryConfig(n=[5], checks=["diff.cliffordian_kernel"]))
    assert [r.status for r in res3] == ["skip"]
    assert status == 0 and all(r.status == "pass" for r in res5)


def test_skips_only_for_empty_regimes():
    results, _ = run_battery(BatteryConfig(checks=["diff.*", "series.*", "algebra.*"]))
    skipped = {r.check_id for r in results if r.status == "skip"}
    assert skipped == {"diff.cliffordian_kernel", "diff.regularity_K", "series.kernel.K_alpha",
                       "series.resolvent.K_L", "series.resolvent.K_R"}


def test_tiny_tolerance_forces_failures(tmp_path, capsys):
    code = main(["--checks", "algebra.*", "--tol-scale", "1e-30", "--out", str(tmp_path / "r.json")])
    assert code == EXIT_FAIL
    doc = json.loads((tmp_path / "r.json").read_text())
    assert doc["summary"]["fail"] > 0


def test_json_report_is_reproducible(tmp_path):
    outs = []
    for k in range(2):
        path = tmp_path / f"r{k}.json"
        assert main(["--checks", "calc.resolvent_equations", "--checks", "kernel.*", "--seed", "7",
                     "--out", str(path)]) == EXIT_PASS
        doc = json.loads(path.read_text())
        assert doc["schema"] == 1
        doc.pop("timing")
        outs.append(json.dumps(doc, sort_keys=True))
    assert outs[0] == outs[1]


def test_seed_changes_the_samples(tmp_path):
    docs = []
    for seed in ("1", "2"):
        path = tmp_path / f"s{seed}.json"
        main(["--checks", "kernel.forms", "--seed", seed, "--out", str(path)])
        docs.append(json.loads(path.read_text())["results"][0]["defect"])
    assert docs[0] != docs[1]


def test_csv_output(capsys):
    assert main(["--checks", "identity.constant_pairs", "--format", "csv"]) == EXIT_PASS
    rows = list(csv.DictReader(io.StringIO(capsys.readouterr().out)))
    assert rows[0]["check"] == "identity.constant_pairs" and rows[0]["status"] == "pass"


def test_list_checks(capsys):
    assert main(["--list-checks"]) == EXIT_PASS
    assert "calc.product_rule" in capsys.readouterr().out


@pytest.mark.parametrize(
    "argv",
    [["--checks", "bogus.*"], ["--n", "4"], ["--nodes", "7"], ["--tol-scale", "0"]],
)
def test_config_errors_exit_two(argv, capsys):
    assert main(argv) == EXIT_CONFIG
    assert "error:" in capsys.readouterr().err


def test_config_file_diagnostics(tmp_path, capsys):
    bad = write(tmp_path, "bad.json", '{"n": 3,\n "seed": 1\n "nodes": 64}')
    assert main(["--config", bad]) == EXIT_CONFIG
    assert "line 3" in capsys.readouterr().err
    unknown = write(tmp_path, "unknown.json", {"n": 3, "colour": "red"})
    assert main(["--config", unknown]) == EXIT_CONFIG
    assert "colour" in capsys.readouterr().err
    badtol = write(tmp_path, "tol.json", {"tolerances": {"calc": -1}})
    assert main(["--config", badtol]) == EXIT_CONFIG
    assert "tolerances.calc" in capsys.readouterr().err


def test_config_file_tolerance_applies(tmp_path):
    cfg = write(tmp_path, "cfg.json", {"checks": ["algebra.associativity"], "tolerances": {"algebra": 1e-30}})
    assert main(["--config", cfg, "--out", str(tmp_path / "o.json")]) == EXIT_FAIL


def test_apply_s_calculus_matches_slice_power(tmp_path, capsys):
    op = write(tmp_path, "op.json", {"n": 3, "d": 1, "components": [[1], [1], [0], [0]]})
    poly = write(tmp_path, "f.json", {"n": 3, "side": "left", "coefficients": [0, 0, 1]})
    assert main(["apply", "--calc", "S", "--operator", op, "--poly", poly]) == EXIT_PASS
    dump = json.loads(capsys.readouterr().out)
    expected = pv_pow(Paravector(1.0, [1.0, 0.0, 0.0]), 2).to_multivector().coeffs
    assert np.allclose(dump["result"][0][0], expected, atol=1e-12)
    assert dump["invariance_delta"] <= 1e-9


def test_apply_f_calculus_desk_case(tmp_path, capsys):
    zero = [[0, 0, 0, 0]] * 4
    op = write(tmp_path, "op.json", {"n": 3, "d": 2, "components": zero})
    poly = write(tmp_path, "f.json", {"n": 3, "coefficients": [0, 0, 1]})
    contour = write(tmp_path, "c.json", {"center": 0, "radius": 1, "slice_unit": [0, 1, 0], "nodes": 128})
    assert main(["apply", "--calc", "F", "--operator", op, "--poly", poly, "--contour", contour]) == EXIT_PASS
    dump = json.loads(capsys.readouterr().out)
    res = np.array(dump["result"])
    assert np.allclose(res[:, :, 0], -4 * np.eye(2), atol=1e-12)
    assert np.allclose(res[:, :, 1:], 0, atol=1e-12)


@pytest.mark.parametrize(
    "calc, components, message",
    [
        ("S", [[1, 0, 0, 2], [0, 1, 1, 0], [0, 0, 0, 0], [1, 0, 0, 0]], "components do not commute"),
        ("polyanalytic", [[0, 0, 0, 0], [0, 0, 0, 0], [0, 0, 0, 0], [1, 0, 0, 1]], "T_3"),
    ],
)
def test_apply_reports_violated_hypothesis(tmp_path, capsys, calc, components, message):
    op = write(tmp_path, "op.json", {"n": 3, "d": 2, "components": components})
    poly = write(tmp_path, "f.json", {"n": 3, "coefficients": [0, 1]})
    assert main(["apply", "--calc", calc, "--param", "0", "--operator", op, "--poly", poly]) == EXIT_CONFIG
    assert message in capsys.readouterr().err


def test_apply_enclosure_failure(tmp_path, capsys):
    op = write(tmp_path, "op.json", {"n": 3, "d": 1, "components": [[0], [2], [0], [0]]})
    poly = write(tmp_path, "f.json", {"n": 3, "coefficients": [1]})
    contour = write(tmp_path, "c.json", {"center": 0, "radius": 1})
    assert main(["apply", "--calc", "S", "--operator", op, "--poly", poly, "--contour", contour]) == EXIT_CONFIG
    assert "S-spectrum" in capsys.readouterr().err


def test_default_battery_passes_at_three(tmp_path):
    path = tmp_path / "full.json"
    assert main(["--n", "3", "--out", str(path)]) == EXIT_PASS
    summary = json.loads(path.read_text())["summary"]
    assert summary["fail"] == 0 and summary["pass"] > 100


def test_module_entry_point():
    import subprocess
    import sys

    out = subprocess.run([sys.executable, "-m", "finestructure", "--list-checks"], capture_output=True, text=True)
    assert out.returncode == 0 and "monogenic.fueter" in out.stdout
