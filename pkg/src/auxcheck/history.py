"""
History variables.

``attach_history`` conjoins ``h = exp_Init`` to the initial predicate and
``h' = exp_A`` to every subaction of the spec's disjunctive representation.
The expressions may not mention ``h'``, and ``exp_Init`` may read only the
spec's unprimed variables; both restrictions are checked from the
expressions' declared reads, and enforced again when they are evaluated.
"""
from __future__ import annotations

import dataclasses
from collections.abc import Mapping
from dataclasses import dataclass

from . import logger
from .constants import HISTORY_VAR
from .exceptions import ConstructionError
from .explorer import Verdict, check_erasure, check_projection
from .kernel import Env, Expr, SpecDef, State, Subaction, map_leaves
from .utils.config_utils import ModelConfig


@dataclass(frozen=True)
class HistorySpec:
    """``h_init`` and, per subaction id, the expression for ``h'``."""
    h_init: Expr
    per_subaction: Mapping[str, Expr]
    h_name: str = HISTORY_VAR


def _check_reads(label: str, expr: Expr, allowed: frozenset[str], primed_allowed: frozenset[str]) -> None:
    if expr.reads is None or expr.primed is None:
        raise ConstructionError(f"{label}: history expressions must declare the variables they read")
    if not expr.reads <= allowed:
        raise ConstructionError(f"{label} reads {sorted(expr.reads - allowed)}, which it may not use")
    if not expr.primed <= primed_allowed:
        raise ConstructionError(f"{label} reads primed {sorted(expr.primed - primed_allowed)}, which it may not use")


def validate_history(spec: SpecDef, hs: HistorySpec) -> None:
    h = hs.h_name
    if h in spec.variable_set:
        raise ConstructionError(f"{spec.name} already has a variable named {h!r}")
    _check_reads(f"{h} initial expression", hs.h_init, spec.variable_set, frozenset())

    ids = {leaf.id for leaf in spec.subactions}
    missing = sorted(ids - set(hs.per_subaction))
    if missing:
        raise ConstructionError(f"No history expression for subaction(s) {missing} of {spec.name}")
    unknown = sorted(set(hs.per_subaction) - ids)
    if unknown:
        raise ConstructionError(f"History expressions given for unknown subaction(s) {unknown}")
    for action_id, expr in hs.per_subaction.items():
        _check_reads(f"{h}' for {action_id}", expr, spec.variable_set | {h}, spec.variable_set)


def attach_history(spec: SpecDef, hs: HistorySpec, name: str | None = None) -> SpecDef:
    """The spec with history variable ``hs.h_name`` added."""
    validate_history(spec, hs)
    h = hs.h_name

    def init():
        for s in spec.init():
            yield s.set(h, hs.h_init(s))

    def lift(leaf: Subaction) -> Subaction:
        exp = hs.per_subaction[leaf.id]

        def post(s: State, env: Env) -> list[State]:
            return [t.set(h, exp(s, t, env)) for t in leaf.post(s, env)]

        return Subaction(leaf.id, post, leaf.guard)

    spec_h = dataclasses.replace(
        spec,
        name=name or f"{spec.name}H",
        variables=spec.variables + (h,),
        init=init,
        next=map_leaves(spec.next, lift),
    )
    logger.debug(f"Attached history variable {h} to {spec.name} as {spec_h.name}")
    return spec_h


def check_history_projection(spec: SpecDef, spec_h: SpecDef, cfg: ModelConfig, workers: int = 1,
                             state_cap: int | None = None) -> Verdict:
    """
    Pass iff erasing the history variable from ``spec_h``'s reachable graph
    gives exactly ``spec``'s reachable graph, and ``spec_h`` implements
    ``spec`` under the erasing mapping.
    """
    projection = check_projection(spec, spec_h, cfg, allow_stuttering=False, workers=workers, state_cap=state_cap)
    if not projection.passed:
        return projection
    erasure = check_erasure(spec, spec_h, cfg, workers, state_cap)
    if not erasure.passed:
        return erasure
    return Verdict.ok(projection.detail)
