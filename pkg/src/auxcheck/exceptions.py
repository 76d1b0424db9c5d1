"""
Error hierarchy for auxcheck.

Every error the library raises derives from AuxCheckError and from the
builtin exception a caller would expect for the same problem.
"""


class AuxCheckError(Exception):
    """Base class of all auxcheck errors."""


class DomainError(AuxCheckError, ValueError):
    """A value operation was applied outside its domain."""


class ConfigError(AuxCheckError, ValueError):
    """Model configuration or mapping is incomplete or malformed."""


class ConstructionError(AuxCheckError, ValueError):
    """A specification or transformation is ill-formed."""


class EvaluationError(AuxCheckError, TypeError):
    """An expression failed to evaluate; the message names the expression."""


class ResourceError(AuxCheckError, RuntimeError):
    """An exploration or enumeration budget was exceeded."""
