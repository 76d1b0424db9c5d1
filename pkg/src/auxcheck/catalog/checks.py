"""
Checks over catalog entries, addressed by name.

Each function builds the entry under its default config merged with the
caller's, runs the corresponding explorer or auxiliary-variable check and
returns its Verdict.
"""
from __future__ import annotations

from .. import logger
from ..exceptions import ConfigError, ConstructionError
from ..explorer import (Verdict, check_action_property, check_invariant,
                        check_refinement, explore, find_trace)
from ..history import check_history_projection
from ..kernel import SpecDef
from ..prophecy import check_proph_conditions
from ..stuttering import (check_stutter_runtime_conditions,
                          stutter_constant_condition)
from ..utils.config_utils import ModelConfig
from ..values import format_value
from .registry import (ExampleEntry, get_action_property, get_entry,
                       get_invariant, get_mapping, get_target)


def _built(name: str, cfg: ModelConfig | None) -> tuple[ExampleEntry, ModelConfig, SpecDef]:
    entry = get_entry(name)
    full = entry.config(cfg)
    return entry, full, entry.build(full)


def _target(name: str, cfg: ModelConfig) -> SpecDef:
    entry = get_entry(name)
    return entry.build(entry.config(cfg))


def refinement(spec: str, mapping_name: str, cfg: ModelConfig | None = None, workers: int = 1,
               state_cap: int | None = None) -> Verdict:
    """``spec`` implements the target of its mapping ``mapping_name``."""
    _, full, low = _built(spec, cfg)
    entry = get_mapping(spec, mapping_name)
    return check_refinement(low, full, entry.build(full), _target(entry.target, full), workers, state_cap)


def equivalence(spec: str, mapping_name: str, back: str, cfg: ModelConfig | None = None, workers: int = 1,
                state_cap: int | None = None) -> Verdict:
    """``spec`` and the target of ``mapping_name`` refine each other; ``back`` maps the target to ``spec``."""
    forward = get_mapping(spec, mapping_name)
    backward = get_mapping(forward.target, back)
    if backward.target != spec:
        raise ConfigError(f"Mapping {back!r} of {forward.target} targets {backward.target}, not {spec}")
    first = refinement(spec, mapping_name, cfg, workers, state_cap)
    if not first.passed:
        return first
    second = refinement(forward.target, back, cfg, workers, state_cap)
    if not second.passed:
        return second
    return Verdict.ok(f"{spec} and {forward.target} are equivalent")


def invariant(spec: str, inv: str, cfg: ModelConfig | None = None, workers: int = 1,
              state_cap: int | None = None) -> Verdict:
    _, full, built = _built(spec, cfg)
    return check_invariant(built, full, get_invariant(spec, inv)(full), workers, state_cap, label=inv)


def action_property(spec: str, prop: str, cfg: ModelConfig | None = None, workers: int = 1,
                    state_cap: int | None = None) -> Verdict:
    _, full, built = _built(spec, cfg)
    return check_action_property(built, full, get_action_property(spec, prop)(full), workers, state_cap)


def trace_search(spec: str, target: str, cfg: ModelConfig | None = None, workers: int = 1,
                 state_cap: int | None = None) -> Verdict:
    _, full, built = _built(spec, cfg)
    return find_trace(built, full, get_target(spec, target)(full), workers, state_cap, label=target)


def proph_conditions(spec: str, cfg: ModelConfig | None = None, workers: int = 1,
                     state_cap: int | None = None) -> Verdict:
    """The prophecy conditions of the table ``spec``'s prophecy variable was added with."""
    entry = get_entry(spec)
    if entry.prophecy is None:
        raise ConfigError(f"{spec} has no prophecy variable")
    full = entry.config(cfg)
    base, shape, table = entry.prophecy(full)
    return check_proph_conditions(base, full, shape, table, workers, state_cap)


def stutter_conditions(spec: str, cfg: ModelConfig | None = None, workers: int = 1,
                       state_cap: int | None = None) -> Verdict:
    """
    The constant condition of every stuttering order, then the runtime
    conditions on the spec the stuttering variable was added to.
    """
    entry = get_entry(spec)
    if entry.stuttering is None:
        raise ConfigError(f"{spec} has no stuttering variable")
    full = entry.config(cfg)
    base, table = entry.stuttering(full)
    for wrap in table.values():
        order = wrap.order
        if not stutter_constant_condition(order.sigma, order.bot, order.decr):
            raise ConstructionError(
                f"{wrap.action_id}: not every element of sigma reaches {format_value(order.bot)} by decr")
    logger.info(f"Stutter constant conditions of {spec} hold")
    return check_stutter_runtime_conditions(base, full, table, workers, state_cap)


def history_projection(spec: str, cfg: ModelConfig | None = None, workers: int = 1,
                       state_cap: int | None = None) -> Verdict:
    """Erasing ``spec``'s history variable gives exactly the spec it was added to."""
    entry, full, built = _built(spec, cfg)
    if entry.history_base is None:
        raise ConfigError(f"{spec} has no history variable")
    return check_history_projection(entry.history_base(full), built, full, workers, state_cap)


def same_reachable_graph(a: str, b: str, cfg: ModelConfig | None = None, workers: int = 1,
                         state_cap: int | None = None) -> Verdict:
    """
    ``a`` and ``b`` have the same reachable states and the same state
    pairs as steps, whatever subactions produce them.
    """
    _, full_a, spec_a = _built(a, cfg)
    _, full_b, spec_b = _built(b, cfg)
    if spec_a.variable_set != spec_b.variable_set:
        raise ConfigError(f"{a} and {b} have different variables")
    graph_a = explore(spec_a, full_a, workers, state_cap)
    graph_b = explore(spec_b, full_b, workers, state_cap)
    differing = graph_a.states ^ graph_b.states
    if not differing:
        differing = frozenset(src for src, _ in graph_a.edges() ^ graph_b.edges())
    if not differing:
        return Verdict.ok(f"{a} and {b} have the same reachable graph ({len(graph_a.states)} states)")
    witness = min(differing, key=repr)
    spec, full = (spec_a, full_a) if witness in graph_a.states else (spec_b, full_b)
    found = find_trace(spec, full, lambda s: s == witness, label="differing state")
    assert found.trace is not None
    return Verdict.fail(found.trace, f"{a} and {b} differ at a state reached by {spec.name}")
