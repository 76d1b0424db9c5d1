"""
Registry of catalog specifications, keyed by name.
"""
from __future__ import annotations

from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any, NamedTuple

from .. import logger
from ..exceptions import ConfigError
from ..explorer import ActionProperty
from ..kernel import RefinementMapping, SpecDef
from ..utils.config_utils import ModelConfig

SpecBuilder = Callable[[ModelConfig], SpecDef]
Predicate = Callable[[ModelConfig], Callable[[Any], Any]]


@dataclass(frozen=True)
class MappingEntry:
    """A refinement mapping from the entry's spec to the catalog spec ``target``."""
    target: str
    build: Callable[[ModelConfig], RefinementMapping]
    description: str = ""
    # a failing check is the documented outcome
    expect_fail: bool = False


class ProphecyCheck(NamedTuple):
    base: SpecDef
    shape: Any
    table: Mapping[str, Any]


class StutterCheck(NamedTuple):
    base: SpecDef
    table: Mapping[str, Any]


@dataclass(frozen=True)
class ExampleEntry:
    name: str
    build: SpecBuilder
    description: str = ""
    required_params: tuple[str, ...] = ()
    default_config: ModelConfig = field(default_factory=ModelConfig)
    mappings: Mapping[str, MappingEntry] = field(default_factory=dict)
    invariants: Mapping[str, Predicate] = field(default_factory=dict)
    targets: Mapping[str, Predicate] = field(default_factory=dict)
    action_properties: Mapping[str, Callable[[ModelConfig], ActionProperty]] = field(default_factory=dict)
    # how the entry's auxiliary variable was added, for the condition checks
    prophecy: Callable[[ModelConfig], ProphecyCheck] | None = None
    stuttering: Callable[[ModelConfig], StutterCheck] | None = None
    history_base: SpecBuilder | None = None

    def config(self, user: ModelConfig | None = None) -> ModelConfig:
        """The default config with ``user`` merged over it; required names must be present."""
        cfg = self.default_config if user is None else self.default_config.merged(user)
        known = set(cfg.substitutions) | set(cfg.parameters) | set(cfg.constraint)
        missing = [name for name in self.required_params if name not in known]
        if missing:
            raise ConfigError(f"{self.name} needs model parameter(s): {', '.join(missing)}")
        return cfg


_REGISTRY: dict[str, ExampleEntry] = {}


def register(entry: ExampleEntry) -> ExampleEntry:
    if entry.name in _REGISTRY:
        raise ConfigError(f"Catalog entry {entry.name!r} is registered twice")
    _REGISTRY[entry.name] = entry
    return entry


def names() -> list[str]:
    return sorted(_REGISTRY)


def entries() -> list[ExampleEntry]:
    return [_REGISTRY[name] for name in names()]


def get_entry(name: str) -> ExampleEntry:
    try:
        return _REGISTRY[name]
    except KeyError:
        raise ConfigError(f"Unknown catalog spec {name!r}; known specs: {', '.join(names())}") from None


def build(name: str, cfg: ModelConfig | None = None) -> SpecDef:
    """Build the catalog spec ``name`` under its default config merged with ``cfg``."""
    entry = get_entry(name)
    spec = entry.build(entry.config(cfg))
    logger.debug(f"Built catalog spec {name} with variables {spec.variables}")
    return spec


def get_mapping(name: str, mapping_name: str) -> MappingEntry:
    entry = get_entry(name)
    try:
        return entry.mappings[mapping_name]
    except KeyError:
        known = ", ".join(sorted(entry.mappings)) or "none"
        raise ConfigError(f"{name} has no mapping {mapping_name!r}; known mappings: {known}") from None


def _named(kind: str, name: str, table: Mapping[str, Any], key: str) -> Any:
    try:
        return table[key]
    except KeyError:
        known = ", ".join(sorted(table)) or "none"
        raise ConfigError(f"{name} has no {kind} {key!r}; known: {known}") from None


def get_invariant(name: str, inv: str) -> Predicate:
    entry = get_entry(name)
    return _named("invariant", name, entry.invariants, inv)


def get_target(name: str, target: str) -> Predicate:
    entry = get_entry(name)
    return _named("target", name, entry.targets, target)


def get_action_property(name: str, prop: str) -> Callable[[ModelConfig], ActionProperty]:
    entry = get_entry(name)
    return _named("action property", name, entry.action_properties, prop)
