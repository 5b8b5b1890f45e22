"""
Loading and dumping experiment configuration files.

Files are YAML with one level of sections. Validation errors are reported
with the dotted field path and the line of the offending node.
"""
import logging
from pathlib import Path
from typing import Any, Optional, Sequence, Union

import yaml
from pydantic import ValidationError

from src.core.errors import ConfigInvalid
from src.schemas.experiment import ExperimentConfig

logger = logging.getLogger(__name__)


def _node_line(root: Optional[yaml.Node], loc: Sequence[Any]) -> int:
    """1-based line of the deepest node reachable along a validation location."""
    node = root
    if node is None:
        return 0
    for key in loc:
        if isinstance(node, yaml.MappingNode):
            match = next((value for k, value in node.value if k.value == str(key)), None)
            if match is None:
                continue
            node = match
        elif isinstance(node, yaml.SequenceNode) and isinstance(key, int) and key < len(node.value):
            node = node.value[key]
    return node.start_mark.line + 1


def parse_config(text: str) -> ExperimentConfig:
    """
    Validate YAML text into an ExperimentConfig.

    Raises:
        ConfigInvalid: On YAML syntax errors, missing sections or bad values
    """
    try:
        root = yaml.compose(text)
        data = yaml.safe_load(text)
    except yaml.YAMLError as e:
        mark = getattr(e, "problem_mark", None)
        raise ConfigInvalid(f"malformed YAML: {e}", field="<yaml>", line=mark.line + 1 if mark else 0)
    if not isinstance(data, dict):
        raise ConfigInvalid("configuration must be a mapping of sections", field="<root>", line=1)
    for section, body in data.items():
        if not isinstance(body, dict):
            raise ConfigInvalid(
                "sections hold key-value pairs only", field=str(section), line=_node_line(root, [section])
            )
        # a lamplighter family names its base family inline
        nested = [
            key for key, value in body.items()
            if isinstance(value, dict) and not (section == "graph" and key == "base")
        ]
        if nested:
            raise ConfigInvalid(
                "sections cannot nest", field=f"{section}.{nested[0]}", line=_node_line(root, [section, nested[0]])
            )

    try:
        return ExperimentConfig.model_validate(data)
    except ValidationError as e:
        error = e.errors()[0]
        loc = [part for part in error["loc"] if part is not None]
        field = ".".join(str(part) for part in loc)
        raise ConfigInvalid(error["msg"], field=field, line=_node_line(root, loc)) from e


def load_config(path: Union[str, Path]) -> ExperimentConfig:
    path = Path(path)
    if not path.exists():
        raise ConfigInvalid(f"config file {path} not found", field="<file>")
    config = parse_config(path.read_text(encoding="utf-8"))
    logger.info(f"Loaded {config.experiment.kind} experiment '{config.experiment.name}' from {path}")
    return config


def dump_config(config: ExperimentConfig, path: Optional[Union[str, Path]] = None) -> str:
    """Serialize to YAML text, writing it to path when given; parse_config inverts it."""
    text = yaml.safe_dump(config.snapshot(), sort_keys=False)
    if path is not None:
        path = Path(path)
        path.parent.mkdir(parents=True, exist_ok=True)
        path.write_text(text, encoding="utf-8")
    return text
