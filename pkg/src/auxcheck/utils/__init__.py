"""Helpers shared by the checker: logging, configuration, work splitting."""
from .. import logger

__all__ = ["logger"]
