import json
import os
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from typing import Any, TypedDict

from dotenv import load_dotenv
from pyrsistent import pmap

from .. import logger
from ..constants import (DEFAULT_STATE_CAP, DEFAULT_WORKERS, ENV_STATE_CAP,
                         ENV_WORKERS)
from ..exceptions import ConfigError, DomainError
from ..values import decode_value, encode_value


class ConfigDocument(TypedDict, total=False):  # every section is optional
    constants: dict[str, Any]
    parameters: dict[str, Any]
    substitutions: dict[str, list[Any]]
    constraint: dict[str, Any]


_MISSING: Any = object()


@dataclass(frozen=True)
class ModelConfig:
    """
    Finite model for a specification: substitutions of finite sets for
    symbolic sets such as ``Int`` or ``Data``, named parameters, and the
    parameters of the state constraint bounding exploration.
    """
    substitutions: Mapping[str, frozenset[Any]] = field(default_factory=dict)
    parameters: Mapping[str, Any] = field(default_factory=dict)
    constraint: Mapping[str, Any] = field(default_factory=dict)

    def __post_init__(self):
        for name, values in self.substitutions.items():
            if not isinstance(values, frozenset):
                raise ConfigError(f"Substitution for {name!r} must be a finite set, got {values!r}")
        object.__setattr__(self, "substitutions", pmap(self.substitutions))
        object.__setattr__(self, "parameters", pmap(self.parameters))
        object.__setattr__(self, "constraint", pmap(self.constraint))

    def substitution(self, name: str) -> frozenset[Any]:
        try:
            return self.substitutions[name]
        except KeyError:
            raise ConfigError(f"No substitution given for symbolic set {name!r}") from None

    def parameter(self, name: str, default: Any = _MISSING) -> Any:
        if name in self.parameters:
            return self.parameters[name]
        if default is _MISSING:
            raise ConfigError(f"Missing model parameter {name!r}")
        return default

    def bound(self, name: str, default: Any = _MISSING) -> Any:
        """A constraint parameter, falling back to an ordinary parameter."""
        if name in self.constraint:
            return self.constraint[name]
        return self.parameter(name, default)

    def require(self, symbols: Iterable[str]) -> None:
        missing = sorted(set(symbols) - set(self.substitutions))
        if missing:
            raise ConfigError(f"No substitution given for symbolic set(s): {', '.join(missing)}")

    def merged(self, other: "ModelConfig") -> "ModelConfig":
        """This config with every entry of ``other`` taking precedence."""
        return ModelConfig(
            substitutions={**self.substitutions, **other.substitutions},
            parameters={**self.parameters, **other.parameters},
            constraint={**self.constraint, **other.constraint},
        )

    @classmethod
    def from_document(cls, doc: ConfigDocument) -> "ModelConfig":
        if not isinstance(doc, dict):
            raise ConfigError("Model config must be a JSON object.")
        unknown = set(doc) - set(ConfigDocument.__annotations__)
        if unknown:
            raise ConfigError(f"Unknown config section(s): {', '.join(sorted(unknown))}")
        try:
            substitutions = {k: decode_value(v) for k, v in doc.get("substitutions", {}).items()}
            parameters = {k: decode_value(v) for k, v in doc.get("constants", {}).items()}
            parameters.update({k: decode_value(v) for k, v in doc.get("parameters", {}).items()})
            constraint = {k: decode_value(v) for k, v in doc.get("constraint", {}).items()}
        except (DomainError, AttributeError) as e:
            raise ConfigError(f"Malformed model config: {e}") from e
        return cls(substitutions=substitutions, parameters=parameters, constraint=constraint)

    def to_document(self) -> ConfigDocument:
        return ConfigDocument(
            substitutions={k: encode_value(v) for k, v in sorted(self.substitutions.items())},
            parameters={k: encode_value(v) for k, v in sorted(self.parameters.items())},
            constraint={k: encode_value(v) for k, v in sorted(self.constraint.items())},
        )


def load_config(file_path: str | os.PathLike[str]) -> ModelConfig:
    """
    Read a JSON model config written in the canonical value encoding.
    """
    try:
        with open(file_path, "r") as file:
            doc = json.load(file)
    except OSError as e:
        raise ConfigError(f"Cannot read config {file_path}: {e}") from e
    except json.JSONDecodeError as e:
        raise ConfigError(f"Config {file_path} is not valid JSON: {e}") from e
    logger.debug(f"Loaded model config from {file_path}")
    return ModelConfig.from_document(doc)


def _positive_from_env(var: str, default: int) -> int:
    load_dotenv()
    raw = os.environ.get(var)
    if raw is None or raw == "":
        return default
    try:
        value = int(raw)
    except ValueError:
        raise ConfigError(f"{var} must be an integer, got {raw!r}") from None
    if value < 1:
        raise ConfigError(f"{var} must be positive, got {value}")
    logger.info(f"Using {var}={value} from the environment")
    return value


def resolve_state_cap(flag: int | None = None) -> int:
    """State cap from the CLI flag, else the environment, else the default."""
    if flag is not None:
        if flag < 1:
            raise ConfigError(f"State cap must be positive, got {flag}")
        return flag
    return _positive_from_env(ENV_STATE_CAP, DEFAULT_STATE_CAP)


def resolve_workers(flag: int | None = None) -> int:
    if flag is not None:
        if flag < 1:
            raise ConfigError(f"Worker count must be positive, got {flag}")
        return flag
    return _positive_from_env(ENV_WORKERS, DEFAULT_WORKERS)
