"""Catalog of example specifications; importing it registers every family."""
from . import afek, clock, minmax, sendint, sendseq, sendset, snapshot  # noqa: F401
from .registry import (ExampleEntry, MappingEntry, ProphecyCheck, StutterCheck,
                       build, entries, get_action_property, get_entry,
                       get_invariant, get_mapping, get_target, names)

__all__ = [
    "ExampleEntry", "MappingEntry", "ProphecyCheck", "StutterCheck",
    "build", "entries", "get_action_property", "get_entry", "get_invariant",
    "get_mapping", "get_target", "names",
]
