import json

import pytest

from dunkl_analyzer.errors import ConfigError
from dunkl_analyzer.suite.config import DEFAULT_REGISTRY, SuiteConfig, parse_exponent


def write_config(tmp_path, document):
    path = tmp_path / "suite.json"
    path.write_text(document if isinstance(document, str) else json.dumps(document))
    return str(path)


def test_defaults():
    """No file means the defaults"""
    config = SuiteConfig()
    assert config.get_lambdas() == [0.0, 0.5, 1.0, 2.5]
    assert config.get_sweep("p")[-1] == float("inf")
    assert config.t_max(1.0) == 16.0
    assert config.get_checks() == ["all"]


def test_file_merges_with_defaults(tmp_path):
    path = write_config(tmp_path, {"lambdas": [0.5], "grid": {"panels": 24}, "checks": "young"})
    config = SuiteConfig(path)
    assert config.get_lambdas() == [0.5]
    assert config.get_grid()["panels"] == 24
    assert config.get_grid()["order"] == 16
    assert config.get_checks() == ["young"]


def test_overrides_win(tmp_path):
    path = write_config(tmp_path, {"lambdas": [0.5]})
    config = SuiteConfig(path, overrides={"lambdas": [1.0], "sweeps": {"t": [1, 2]}})
    assert config.get_lambdas() == [1.0]
    assert config.get_sweep("t") == [1.0, 2.0]


def test_invalid_json_reports_location(tmp_path):
    path = write_config(tmp_path, '{\n  "lambdas": [0.5,\n}')
    with pytest.raises(ConfigError) as info:
        SuiteConfig(path)
    assert info.value.line == 3
    assert info.value.column is not None
    assert "line 3" in str(info.value)


@pytest.mark.parametrize("document,field", [
    ({"lambdas": [-1.0]}, "lambdas[0]"),
    ({"lambdas": []}, "lambdas"),
    ({"grid": {"order": 80}}, "grid.order"),
    ({"grid": {"panels": 0}}, "grid.panels"),
    ({"grid": {"width": 3}}, "grid.width"),
    ({"sweeps": {"p": [2, "two"]}}, "sweeps.p[1]"),
    ({"tolerances": {"band": -0.1}}, "tolerances.band"),
    ({"seed": -1}, "seed"),
    ({"expensive": "yes"}, "expensive"),
    ({"colour": "blue"}, "colour"),
])
def test_validation_names_the_field(tmp_path, document, field):
    with pytest.raises(ConfigError) as info:
        SuiteConfig(write_config(tmp_path, document))
    assert info.value.field == field
    assert f"field '{field}'" in str(info.value)


def test_missing_file(tmp_path):
    with pytest.raises(ConfigError):
        SuiteConfig(str(tmp_path / "missing.json"))


def test_top_level_must_be_object(tmp_path):
    with pytest.raises(ConfigError):
        SuiteConfig(write_config(tmp_path, "[1, 2]"))


@pytest.mark.parametrize("raw,value", [(2, 2.0), (1.5, 1.5), ("inf", float("inf")), ("Infinity", float("inf"))])
def test_parse_exponent(raw, value):
    assert parse_exponent(raw) == value


@pytest.mark.parametrize("raw", ["two", True, None])
def test_parse_exponent_rejects(raw):
    with pytest.raises(ValueError):
        parse_exponent(raw)


def test_unknown_sweep():
    with pytest.raises(ConfigError):
        SuiteConfig().get_sweep("omega")


def test_workers_from_environment(monkeypatch):
    monkeypatch.setenv("DUNKL_ANALYZER_WORKERS", "3")
    assert SuiteConfig().get_workers() == 3
    monkeypatch.setenv("DUNKL_ANALYZER_WORKERS", "zero")
    with pytest.raises(ConfigError):
        SuiteConfig().get_workers()
    monkeypatch.setenv("DUNKL_ANALYZER_WORKERS", "0")
    with pytest.raises(ConfigError):
        SuiteConfig().get_workers()
    monkeypatch.delenv("DUNKL_ANALYZER_WORKERS")
    assert SuiteConfig().get_workers() >= 1


def test_registry_resolution(tmp_path, monkeypatch):
    monkeypatch.delenv("DUNKL_ANALYZER_REGISTRY", raising=False)
    assert SuiteConfig().get_registry() == DEFAULT_REGISTRY
    monkeypatch.setenv("DUNKL_ANALYZER_REGISTRY", "env.db")
    assert SuiteConfig().get_registry() == "env.db"
    path = write_config(tmp_path, {"registry": "file.db"})
    assert SuiteConfig(path).get_registry() == "file.db"


def test_save_config(tmp_path):
    config = SuiteConfig(overrides={"lambdas": [2.0]})
    target = tmp_path / "saved.json"
    config.save_config(str(target))
    assert SuiteConfig(str(target)).get_lambdas() == [2.0]
    with pytest.raises(ValueError):
        config.save_config()


if __name__ == "__main__":
    pytest.main([__file__])
