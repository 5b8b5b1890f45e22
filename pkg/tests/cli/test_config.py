"""
Unit tests for experiment configuration files.
"""
import pytest

from src.cli import dump_config, load_config, parse_config
from src.core.errors import ConfigInvalid

VALID = """
experiment:
  kind: cover
  name: small
  seed: 3
graph:
  kind: torus
  d: 2
  n: 4
cover:
  replicas: 20
"""


def test_parse_valid():
    config = parse_config(VALID)
    assert config.experiment.kind == "cover"
    assert config.experiment.seed == 3
    assert config.graph.label() == "Torus(d=2,n=4)"
    assert config.cover.replicas == 20
    assert config.late.replicas == 500


def test_bad_value_reports_field_and_line():
    text = VALID.replace("seed: 3", "seed: -1")
    with pytest.raises(ConfigInvalid) as exc_info:
        parse_config(text)
    assert exc_info.value.field == "experiment.seed"
    assert exc_info.value.line == 5


def test_unknown_key_rejected():
    with pytest.raises(ConfigInvalid) as exc_info:
        parse_config(VALID + "  bogus: 1\n")
    assert exc_info.value.field == "cover.bogus"


def test_missing_section():
    with pytest.raises(ConfigInvalid) as exc_info:
        parse_config("graph:\n  kind: complete\n  n: 3\n")
    assert exc_info.value.field == "experiment"


def test_nested_section_rejected():
    with pytest.raises(ConfigInvalid) as exc_info:
        parse_config(VALID + "  nested:\n    a: 1\n")
    assert exc_info.value.field == "cover.nested"


def test_lamplighter_base_may_nest():
    text = """
experiment:
  kind: gen
graph:
  kind: lamplighter
  base:
    kind: complete
    n: 3
"""
    config = parse_config(text)
    assert config.graph.kind == "lamplighter"


def test_malformed_yaml():
    with pytest.raises(ConfigInvalid) as exc_info:
        parse_config("experiment: [unclosed\n")
    assert exc_info.value.field == "<yaml>"


def test_root_must_be_mapping():
    with pytest.raises(ConfigInvalid):
        parse_config("- cover\n- late\n")


def test_dump_then_parse(tmp_path):
    config = parse_config(VALID)
    path = tmp_path / "dumped.yaml"
    dump_config(config, path)
    assert load_config(path) == config


def test_missing_file(tmp_path):
    with pytest.raises(ConfigInvalid):
        load_config(tmp_path / "absent.yaml")
