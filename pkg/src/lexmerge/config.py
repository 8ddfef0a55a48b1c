"""Pipeline configuration: a small TOML file with strict validation.

Relative paths in the file resolve against the file's own directory, so a
config travels with its fixtures.
"""

from __future__ import annotations

import sys
from dataclasses import dataclass, field
from pathlib import Path

from .errors import ConfigError

if sys.version_info >= (3, 11):
    import tomllib
else:
    import tomli as tomllib


@dataclass(frozen=True)
class DefinitionMatchConfig:
    floor: float = 0.4


@dataclass(frozen=True)
class HierarchyMatchConfig:
    left_relation: str | None = None
    right_relation: str | None = None
    seed_confidence: float = 1.0
    unambiguous_confidence: float = 1.0
    local_confidence: float = 0.9
    ancestor_confidence: float = 0.8


@dataclass(frozen=True)
class BilingualMatchConfig:
    dictionary: Path | None = None
    penalty: float = 0.8
    max_links: int = 4
    field_code_threshold: int = 6
    single_translation_confidence: float = 0.95
    field_code_confidence: float = 0.9


@dataclass(frozen=True)
class MergeConfig:
    left: Path
    right: Path
    seeds: Path | None = None
    definition_match: DefinitionMatchConfig = field(
        default_factory=DefinitionMatchConfig)
    hierarchy_match: HierarchyMatchConfig = field(
        default_factory=HierarchyMatchConfig)
    bilingual_match: BilingualMatchConfig = field(
        default_factory=BilingualMatchConfig)


_SECTIONS = {"resources", "definition_match", "hierarchy_match", "bilingual_match"}


def _check_keys(section: str, table: dict, allowed: set[str]) -> None:
    unknown = set(table) - allowed
    if unknown:
        raise ConfigError(
            f"unknown key(s) in [{section}]: {', '.join(sorted(unknown))}")


def _number(section: str, table: dict, key: str, default: float) -> float:
    value = table.get(key, default)
    if isinstance(value, bool) or not isinstance(value, (int, float)):
        raise ConfigError(f"[{section}] {key} must be a number")
    return float(value)


def _integer(section: str, table: dict, key: str, default: int) -> int:
    value = table.get(key, default)
    if isinstance(value, bool) or not isinstance(value, int):
        raise ConfigError(f"[{section}] {key} must be an integer")
    return value


def _optional_str(section: str, table: dict, key: str) -> str | None:
    value = table.get(key)
    if value is not None and not isinstance(value, str):
        raise ConfigError(f"[{section}] {key} must be a string")
    return value


def load_config(path: str | Path) -> MergeConfig:
    path = Path(path)
    try:
        with path.open("rb") as handle:
            raw = tomllib.load(handle)
    except OSError as exc:
        raise ConfigError(f"cannot read config {path}: {exc}") from exc
    except tomllib.TOMLDecodeError as exc:
        raise ConfigError(f"invalid TOML in {path}: {exc}") from exc

    unknown = set(raw) - _SECTIONS
    if unknown:
        raise ConfigError(f"unknown section(s): {', '.join(sorted(unknown))}")
    base = path.parent

    resources = raw.get("resources")
    if not isinstance(resources, dict):
        raise ConfigError("config needs a [resources] section")
    _check_keys("resources", resources, {"left", "right", "seeds"})
    for key in ("left", "right"):
        if not isinstance(resources.get(key), str):
            raise ConfigError(f"[resources] {key} is required and must be a path")
    seeds = _optional_str("resources", resources, "seeds")

    dm_raw = raw.get("definition_match", {})
    _check_keys("definition_match", dm_raw, {"floor"})
    definition_match = DefinitionMatchConfig(
        floor=_number("definition_match", dm_raw, "floor", 0.4))

    hm_raw = raw.get("hierarchy_match", {})
    _check_keys("hierarchy_match", hm_raw, {
        "left_relation", "right_relation", "seed_confidence",
        "unambiguous_confidence", "local_confidence", "ancestor_confidence"})
    hierarchy_match = HierarchyMatchConfig(
        left_relation=_optional_str("hierarchy_match", hm_raw, "left_relation"),
        right_relation=_optional_str("hierarchy_match", hm_raw, "right_relation"),
        seed_confidence=_number("hierarchy_match", hm_raw, "seed_confidence", 1.0),
        unambiguous_confidence=_number(
            "hierarchy_match", hm_raw, "unambiguous_confidence", 1.0),
        local_confidence=_number("hierarchy_match", hm_raw, "local_confidence", 0.9),
        ancestor_confidence=_number(
            "hierarchy_match", hm_raw, "ancestor_confidence", 0.8),
    )

    bm_raw = raw.get("bilingual_match", {})
    _check_keys("bilingual_match", bm_raw, {
        "dictionary", "penalty", "max_links", "field_code_threshold",
        "single_translation_confidence", "field_code_confidence"})
    dictionary = _optional_str("bilingual_match", bm_raw, "dictionary")
    bilingual_match = BilingualMatchConfig(
        dictionary=(base / dictionary) if dictionary else None,
        penalty=_number("bilingual_match", bm_raw, "penalty", 0.8),
        max_links=_integer("bilingual_match", bm_raw, "max_links", 4),
        field_code_threshold=_integer(
            "bilingual_match", bm_raw, "field_code_threshold", 6),
        single_translation_confidence=_number(
            "bilingual_match", bm_raw, "single_translation_confidence", 0.95),
        field_code_confidence=_number(
            "bilingual_match", bm_raw, "field_code_confidence", 0.9),
    )

    return MergeConfig(
        left=base / resources["left"],
        right=base / resources["right"],
        seeds=(base / seeds) if seeds else None,
        definition_match=definition_match,
        hierarchy_match=hierarchy_match,
        bilingual_match=bilingual_match,
    )
