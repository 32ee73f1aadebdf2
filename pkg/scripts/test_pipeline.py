#!/usr/bin/env python3
"""Test end-to-end della pipeline degli scenari e della riga di comando"""

import json
import math
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))
sys.path.insert(0, str(Path(__file__).parent))

import pandas as pd
import pytest

from main import main
from run_pipeline import ScenarioPipeline, run

LINEAR_VERIFY = {
    "kind": "verify",
    "name": "lineare",
    "grid": {"origin": [0.5, 0.5], "extent": [1.0, 1.0], "h": 0.03125},
    "boundary": {"name": "linear", "params": {"a": 1.0, "b": 2.0, "c": 0.5}},
    "epsilons": [0.01],
    "alphas": [1.0],
    "inequalities": ["caccioppoli", "apriori", "flatness"],
}


def _write_config(tmp_path: Path, data: dict) -> Path:
    path = tmp_path / "scenario.json"
    path.write_text(json.dumps(data, indent=2), encoding="utf-8")
    return path


def test_verify_linear_data(tmp_path):
    out = tmp_path / "out"
    status = run(_write_config(tmp_path, LINEAR_VERIFY), out, deterministic=True)
    assert status == 0

    manifest = json.loads((out / "manifest.json").read_text(encoding="utf-8"))
    assert manifest["pass"] is True
    assert manifest["config"]["kind"] == "verify"
    assert "reports.csv" in manifest["artifacts"]
    for name in manifest["artifacts"]:
        assert (out / name).exists()

    reports = pd.read_csv(out / "reports.csv")
    assert reports["pass"].all()
    assert {"max_principle", "alg2x2", "key_II", "caccioppoli", "apriori", "flatness"} <= set(reports["name"])
    assert (out / "field_u_eps0.01_h0.03125.csv").exists()

    stored = pd.read_parquet(out / "reports.parquet")
    assert len(stored) == len(reports)


def test_unknown_boundary_fails(tmp_path):
    data = dict(LINEAR_VERIFY, boundary={"name": "missing"})
    out = tmp_path / "out"
    assert run(_write_config(tmp_path, data), out) != 0
    assert not (out / "manifest.json").exists()


def test_deterministic_rerun_is_identical(tmp_path):
    config_path = _write_config(tmp_path, LINEAR_VERIFY)
    first, second = tmp_path / "a", tmp_path / "b"
    assert run(config_path, first, deterministic=True) == 0
    assert run(config_path, second, deterministic=True) == 0

    names = sorted(p.name for p in first.iterdir() if p.suffix in (".csv", ".json") and p.name != "manifest.json")
    assert names
    for name in names:
        assert (first / name).read_bytes() == (second / name).read_bytes(), name


def test_sharpness_targets(tmp_path):
    data = {"kind": "sharpness", "name": "soglie", "alphas": [0.5, 1.0, 3.0], "modes": ["origin"]}
    pipeline = ScenarioPipeline.from_file(_write_config(tmp_path, data), tmp_path / "out", deterministic=True)
    pipeline.run_pipeline()

    table = pipeline.result.tables["exponents"].set_index("alpha")
    assert table.loc[0.5, "target_p"] == pytest.approx(2.4)
    assert table.loc[1.0, "target_p"] == pytest.approx(3.0)
    assert math.isinf(table.loc[3.0, "target_p"])
    assert table["combined_target_p"].tolist() == pytest.approx([2.4, 3.0, 3.0])
    assert (tmp_path / "out" / "exponents.csv").exists()


def test_verify_key_identity_order(tmp_path):
    data = {"kind": "verify", "name": "aronsson", "grid": {"origin": [0.5, 0.5], "extent": [1.0, 1.0], "h": 0.03125},
            "h_list": [0.03125, 0.015625], "epsilons": [0.1], "alphas": [1.0], "inequalities": []}
    pipeline = ScenarioPipeline.from_file(_write_config(tmp_path, data), tmp_path / "out", deterministic=True)
    pipeline.run_pipeline()

    orders = [r for r in pipeline.result.reports if r.name == "key_II_order"]
    assert len(orders) == 1
    print(f"Ordine key_II: {orders[0].lhs:.3f}")
    assert orders[0].passed and orders[0].lhs >= 0.9
    assert len(orders[0].extras["orders"]) == 1


def test_cli_commands(capsys):
    assert main(["version"]) == 0
    assert capsys.readouterr().out.startswith("inflab ")

    assert main(["list-references"]) == 0
    listed = capsys.readouterr().out
    assert "aronsson" in listed and "linear" in listed


def test_cli_missing_config(tmp_path):
    assert main(["run", "--config", str(tmp_path / "assente.json")]) == 2


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
