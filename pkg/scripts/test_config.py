#!/usr/bin/env python3
"""Test della configurazione degli scenari"""

import json
import sys
from pathlib import Path

sys.path.insert(0, str(Path(__file__).parent.parent))

import pytest

from config.errors import ConfigError
from config.scenario_config import ScenarioConfig
from config.settings import config


def _text(**overrides) -> str:
    data = {"kind": "verify", "name": "prova", "grid": {"origin": [0.5, 0.5], "extent": [1.0, 1.0], "h": 0.03125}}
    data.update(overrides)
    return json.dumps(data, indent=2)


def test_defaults():
    cfg = ScenarioConfig.from_json_text(_text())
    assert cfg.kind == "verify"
    assert cfg.boundary == {"name": "aronsson"}
    assert cfg.output_path == config.OUTPUT_PATH / "prova"
    assert "source_text" not in cfg.echo()


def test_syntax_error_reports_line():
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_json_text('{\n  "kind": "verify",\n  "name": \n}')
    assert info.value.line == 4


def test_unknown_key_reports_field_and_line():
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_json_text(_text(colour="red"))
    assert info.value.field == "colour"
    assert info.value.line is not None


def test_unknown_boundary_name():
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_json_text(_text(boundary={"name": "missing"}))
    assert info.value.field == "boundary.name"


@pytest.mark.parametrize("overrides,field", [
    ({"epsilons": [0.0]}, "epsilons[0]"),
    ({"p_values": [1.0]}, "p_values[0]"),
    ({"kind": "sweep", "epsilons": [], "h_list": [0.1]}, "epsilons"),
    ({"kind": "capacity", "p_values": []}, "p_values"),
    ({"regions": {"V": {"kind": "disk", "radius": 0.1, "colour": 1}}}, "regions.V.colour"),
    ({"kind": "sharpness", "alphas": []}, "alphas"),
    ({"modes": ["diagonal"]}, "modes[0]"),
    ({"levels": 3}, "levels"),
    ({"kind": "nonsense"}, "kind"),
    ({"levels": "x"}, "levels"),
    ({"epsilons": ["0.1"]}, "epsilons[0]"),
    ({"alphas": 1.0}, "alphas"),
    ({"grid": {"origin": [0.5, 0.5], "extent": [1.0, 1.0], "h": "fine"}}, "grid.h"),
    ({"boundary": {"name": "linear", "params": {"slope": 2.0}}}, "boundary.params"),
    ({"deterministic": "yes"}, "deterministic"),
])
def test_validation_errors(overrides, field):
    with pytest.raises(ConfigError) as info:
        ScenarioConfig.from_json_text(_text(**overrides))
    assert info.value.field == field


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        ScenarioConfig.from_file(tmp_path / "assente.json")


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-v"]))
