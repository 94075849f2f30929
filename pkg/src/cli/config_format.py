#!/usr/bin/env python3
"""
Configuration Text
Flat key-value trees: '#' comments, 'key = value' lines, dotted keys or
'[section]' headers for nesting, and the same value syntax for inline
specs such as 'kind=disk,r=0.25'
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Union

from src.discrepancy.models import LambdaRange
from src.errors import ConfigError
from src.experiments.models import ExperimentConfig
from src.geometry.spec import BodySpec
from src.pointsets.pointset import GeneratorSpec


def parse_value(text: str) -> Any:
    """true/false, none, int, float, list (',' or ';' separated) or bare string"""
    text = text.strip()
    if len(text) >= 2 and text[0] == text[-1] and text[0] in "'\"":
        return text[1:-1]
    for separator in (";", ","):
        if separator in text:
            return [parse_value(item) for item in text.split(separator) if item.strip()]
    lowered = text.lower()
    if lowered in ("true", "false"):
        return lowered == "true"
    if lowered in ("none", "null", ""):
        return None
    for cast in (int, float):
        try:
            return cast(text)
        except ValueError:
            pass
    return text


def _assign(tree: Dict[str, Any], key: str, value: Any, where: str) -> None:
    parts = [part.strip() for part in key.split(".")]
    if not all(parts):
        raise ConfigError(f"{where}: empty key component in {key!r}")
    node = tree
    for part in parts[:-1]:
        child = node.setdefault(part, {})
        if not isinstance(child, dict):
            raise ConfigError(f"{where}: {part!r} is both a value and a section")
        node = child
    if parts[-1] in node:
        raise ConfigError(f"{where}: duplicate key {key!r}")
    node[parts[-1]] = value


def _split_items(text: str) -> List[str]:
    """Split at commas outside double quotes"""
    items, current, quoted = [], [], False
    for char in text:
        if char == '"':
            quoted = not quoted
        if char == "," and not quoted:
            items.append("".join(current))
            current = []
        else:
            current.append(char)
    items.append("".join(current))
    return [item for item in items if item.strip()]


def _assign_line(tree: Dict[str, Any], prefix: str, line: str, where: str) -> None:
    key, sep, value = line.partition("=")
    if not sep or not key.strip():
        raise ConfigError(f"{where}: expected 'key = value', got {line!r}")
    full = f"{prefix}.{key.strip()}" if prefix else key.strip()
    _assign(tree, full, parse_value(value), where)


def parse_config(text: str) -> Dict[str, Any]:
    tree: Dict[str, Any] = {}
    section = ""
    block: Optional[str] = None
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        where = f"line {number}"
        if block is not None:
            if line == "}":
                block = None
                continue
            for item in _split_items(line):
                _assign_line(tree, block, item.strip(), where)
            continue
        if line.startswith("[") and line.endswith("]"):
            section = line[1:-1].strip()
            if not section:
                raise ConfigError(f"{where}: empty section header")
            continue
        name, brace, rest = line.partition("{")
        if brace and "=" not in name:
            name = name.strip()
            if not name:
                raise ConfigError(f"{where}: block without a name")
            prefix = f"{section}.{name}" if section else name
            if rest.strip() == "":
                block = prefix
                continue
            if not rest.rstrip().endswith("}"):
                raise ConfigError(f"{where}: unterminated block {name!r}")
            for item in _split_items(rest.rstrip()[:-1]):
                _assign_line(tree, prefix, item.strip(), where)
            continue
        _assign_line(tree, section, line, where)
    if block is not None:
        raise ConfigError(f"block {block!r} is never closed")
    return tree


def load_config(path: Union[str, Path]) -> Dict[str, Any]:
    try:
        text = Path(path).read_text(encoding="utf-8")
    except OSError as e:
        raise ConfigError(f"cannot read config {path}: {e}") from e
    return parse_config(text)


def parse_inline(text: str) -> Dict[str, Any]:
    """'kind=disk,r=0.25' into a dict; lists inside inline specs use ';'"""
    out: Dict[str, Any] = {}
    for item in text.split(","):
        if not item.strip():
            continue
        key, sep, value = item.partition("=")
        if not sep or not key.strip():
            raise ConfigError(f"inline spec item {item!r} is not key=value")
        _assign(out, key.strip(), parse_value(value), "inline spec")
    if "center" in out and isinstance(out["center"], list):
        out["center"] = tuple(out["center"])
    return out


def body_spec_from(text: str) -> BodySpec:
    return BodySpec(**parse_inline(text))


def _block_value(value: Any) -> str:
    if isinstance(value, str):
        return f'"{value}"'
    if isinstance(value, bool):
        return "true" if value else "false"
    if isinstance(value, (list, tuple)):
        return "; ".join(_block_value(item) for item in value)
    return repr(value)


def format_block(name: str, values: Dict[str, Any]) -> str:
    """'name { key = value, ... }', readable back by parse_config"""
    items = ", ".join(f"{key} = {_block_value(value)}" for key, value in values.items() if value is not None)
    return f"{name} {{ {items} }}"


def body_snippet(spec: BodySpec) -> str:
    values = spec.model_dump(mode="json")
    if tuple(values.get("center") or (0.0, 0.0)) == (0.0, 0.0):
        values.pop("center", None)
    return format_block("body", values)


def body_spec_from_snippet(text: str) -> BodySpec:
    """BodySpec from a 'body { ... }' block (or a [body] section)"""
    tree = parse_config(text)
    if not isinstance(tree.get("body"), dict):
        raise ConfigError("expected a 'body { ... }' block")
    return BodySpec(**tree["body"])


def generator_spec_from(text: str) -> GeneratorSpec:
    return GeneratorSpec(**parse_inline(text))


def _as_list(value: Any) -> list:
    return value if isinstance(value, list) else [value]


def experiment_config_from(tree: Dict[str, Any]) -> ExperimentConfig:
    data = dict(tree)
    if isinstance(data.get("lam"), str):
        data["lam"] = LambdaRange.parse(data["lam"])
    for key in ("sizes", "generators"):
        if key in data:
            data[key] = _as_list(data[key])
    if isinstance(data.get("body"), dict) and isinstance(data["body"].get("center"), list):
        data["body"]["center"] = tuple(data["body"]["center"])
    if isinstance(data.get("body"), (str, list)):
        # 'body = kind=disk,r=0.25' arrives split at its commas
        text = ",".join(str(item) for item in _as_list(data["body"]))
        data["body"] = body_spec_from(text)
    return ExperimentConfig(**data)


def load_experiment_config(path: Union[str, Path], defaults: Optional[Dict[str, Any]] = None) -> ExperimentConfig:
    """Keys missing from the file fall back to defaults, then to the model defaults"""
    return experiment_config_from({**(defaults or {}), **load_config(path)})
