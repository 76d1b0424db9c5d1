"""
Prophecy variables.

A prophecy variable ``p`` is a function in ``[Dom -> Pi]`` whose values
predict future choices. Each subaction ``A`` becomes

    A /\\ Pred_A(p) /\\ p' \\in new_pset(p, DomInj_A, PredDom_A, Dom', Pi)

and the addition is sound when every step of the original spec satisfies
``ExistsGoodProphecy``, ``IsDomInj`` and ``IsPredDom``
(``check_proph_conditions``).
"""
from __future__ import annotations

import dataclasses
import itertools
from collections.abc import Callable, Mapping
from dataclasses import dataclass, field
from typing import Any

from . import logger
from .constants import (PROPHECY_ENUMERATION_CAP, PROPHECY_VAR,
                        SINGLE_PREDICTION_KEY)
from .exceptions import (ConstructionError, DomainError, EvaluationError,
                         ResourceError)
from .explorer import ActionProperty, Verdict, check_action_property
from .kernel import (Env, Expr, SpecDef, State, Step, Subaction, check_bool,
                     map_leaves)
from .utils.config_utils import ModelConfig
from .values import (Fcn, fcn_space, format_value, id_fcn,
                     is_partial_injection, ordered)

KEEP = "keep"
REFRESH = "refresh"

Pred = Callable[[Fcn, State, State, Env], Any]
StepFn = Callable[[State, State, Env], Any]


@dataclass(frozen=True)
class ProphecyShape:
    """``p \\in [Dom -> Pi]``; ``dom`` is a state expression, evaluated at the post-state for ``Dom'``."""
    pi: frozenset[Any]
    dom: Expr
    p_name: str = PROPHECY_VAR

    def __post_init__(self):
        if not self.pi:
            raise ConstructionError("The prediction set Pi must be nonempty")

    def domain_at(self, s: State) -> frozenset[Any]:
        dom = self.dom(s)
        if not isinstance(dom, frozenset):
            raise EvaluationError(f"{self.dom.label}: the prophecy domain is not a set: {dom!r}")
        return dom


@dataclass(frozen=True)
class SubactionProphecy:
    """
    ``Pred_A``, ``DomInj_A`` and ``PredDom_A`` for one subaction.

    ``pred`` is called as ``pred(p, s, t, env)`` and defaults to TRUE.
    ``dom_inj`` defaults to the identity on ``Dom \\cap Dom'``. ``pred_dom``
    is a set or a function of the step.
    """
    pred: Pred | None = None
    dom_inj: StepFn | None = None
    pred_dom: frozenset[Any] | StepFn = field(default_factory=frozenset)

    def holds(self, q: Fcn, s: State, t: State, env: Env) -> bool:
        return self.pred is None or check_bool(self.pred(q, s, t, env), "Pred")

    def injection(self, s: State, t: State, env: Env, dom: frozenset[Any], dom_prime: frozenset[Any]) -> Fcn:
        if self.dom_inj is None:
            return id_fcn(dom & dom_prime)
        return self.dom_inj(s, t, env)

    def predicted(self, s: State, t: State, env: Env) -> frozenset[Any]:
        if callable(self.pred_dom):
            return frozenset(self.pred_dom(s, t, env))
        return self.pred_dom


def _new_pset(p: Fcn, dom_inj: Fcn, pred_dom: frozenset[Any], dom_prime: frozenset[Any],
              pi: frozenset[Any]) -> list[Fcn]:
    fixed: dict[Any, Any] = {}
    for d in dom_inj.domain - pred_dom:
        target = dom_inj[d]
        if target not in dom_prime:
            continue
        if d not in p:
            raise DomainError(f"new_pset: {format_value(d)} is mapped by DomInj but not in the domain of p")
        if p[d] not in pi:
            return []
        fixed[target] = p[d]
    free = ordered(dom_prime - set(fixed))
    return [
        Fcn({**fixed, **dict(zip(free, images))})
        for images in itertools.product(ordered(pi), repeat=len(free))
    ]


def new_pset(p: Fcn, dom_inj: Fcn, pred_dom: frozenset[Any], dom_prime: frozenset[Any],
             pi: frozenset[Any]) -> frozenset[Fcn]:
    """Every ``q \\in [dom_prime -> pi]`` agreeing with ``p`` through ``dom_inj`` outside ``pred_dom``."""
    return frozenset(_new_pset(p, dom_inj, pred_dom, dom_prime, pi))


def _check_table(spec: SpecDef, table: Mapping[str, Any], what: str) -> None:
    ids = {leaf.id for leaf in spec.subactions}
    missing = sorted(ids - set(table))
    if missing:
        raise ConstructionError(f"No {what} entry for subaction(s) {missing} of {spec.name}")
    unknown = sorted(set(table) - ids)
    if unknown:
        raise ConstructionError(f"{what} entries given for unknown subaction(s) {unknown}")


def attach_prophecy(spec: SpecDef, shape: ProphecyShape, table: Mapping[str, SubactionProphecy],
                    name: str | None = None) -> SpecDef:
    """The spec with prophecy variable ``shape.p_name`` added."""
    _check_table(spec, table, "prophecy")
    p_name = shape.p_name
    if p_name in spec.variable_set:
        raise ConstructionError(f"{spec.name} already has a variable named {p_name!r}")

    def init():
        for s in spec.init():
            for q in fcn_space(shape.domain_at(s), shape.pi):
                yield s.set(p_name, q)

    def lift(leaf: Subaction) -> Subaction:
        entry = table[leaf.id]

        def post(s: State, env: Env) -> list[State]:
            p = s[p_name]
            dom = shape.domain_at(s)
            result = []
            for t in leaf.post(s, env):
                if not entry.holds(p, s, t, env):
                    continue
                dom_prime = shape.domain_at(t)
                inj = entry.injection(s, t, env, dom, dom_prime)
                for q in _new_pset(p, inj, entry.predicted(s, t, env), dom_prime, shape.pi):
                    result.append(t.set(p_name, q))
            return result

        return Subaction(leaf.id, post, leaf.guard)

    spec_p = dataclasses.replace(
        spec,
        name=name or f"{spec.name}P",
        variables=spec.variables + (p_name,),
        init=init,
        next=map_leaves(spec.next, lift),
    )
    logger.debug(f"Attached prophecy variable {p_name} to {spec.name} as {spec_p.name}")
    return spec_p


@dataclass(frozen=True)
class SinglePrediction:
    """
    One-prediction entry: ``pred(i, s, t, env)`` tests the predicted value
    ``i``; ``setp`` either keeps the prediction or draws a fresh one.
    """
    pred: Callable[[Any, State, State, Env], Any] | None = None
    setp: str = REFRESH


def single_prediction_table(spec: SpecDef, table: Mapping[str, SinglePrediction]) -> dict[str, SubactionProphecy]:
    _check_table(spec, table, "prediction")
    entries = {}
    for action_id, entry in table.items():
        if entry.setp not in (KEEP, REFRESH):
            raise ConstructionError(f"{action_id}: unknown prediction update {entry.setp!r}")
        if entry.setp == KEEP and entry.pred is not None:
            raise ConstructionError(f"{action_id}: a kept prediction needs the predicate TRUE")
        pred = None
        if entry.pred is not None:
            pred = (lambda q, s, t, env, fn=entry.pred: fn(q[SINGLE_PREDICTION_KEY], s, t, env))
        pred_dom = frozenset({SINGLE_PREDICTION_KEY}) if entry.setp == REFRESH else frozenset()
        entries[action_id] = SubactionProphecy(pred=pred, pred_dom=pred_dom)
    return entries


def single_prediction_shape(pi: frozenset[Any], p_name: str = PROPHECY_VAR) -> ProphecyShape:
    on = frozenset({SINGLE_PREDICTION_KEY})
    return ProphecyShape(pi, Expr.state(lambda s: on, reads=(), label="Dom"), p_name)


def single_prediction(spec: SpecDef, pi: frozenset[Any], table: Mapping[str, SinglePrediction],
                      p_name: str = PROPHECY_VAR, name: str | None = None) -> SpecDef:
    """
    A prophecy predicting one value from ``pi``, stored as ``p["on"]``.
    """
    return attach_prophecy(spec, single_prediction_shape(pi, p_name), single_prediction_table(spec, table), name)


def prophecy_condition(spec: SpecDef, shape: ProphecyShape, table: Mapping[str, SubactionProphecy]) -> ActionProperty:
    """The conjunction of ``ProphCondition`` over all subactions, as an action property of ``spec``."""
    _check_table(spec, table, "prophecy")

    def functions(dom: frozenset[Any]) -> list[Fcn]:
        if len(shape.pi) ** len(dom) > PROPHECY_ENUMERATION_CAP:
            raise ResourceError(
                f"Checking prophecy conditions needs |Pi|^|Dom| = {len(shape.pi)}^{len(dom)} functions, "
                f"more than {PROPHECY_ENUMERATION_CAP}")
        return fcn_space(dom, shape.pi)

    def exists_good_prophecy(s: State, step: Step) -> bool:
        entry = table[step.action]
        if entry.pred is None:
            return True
        return any(entry.holds(q, s, step.state, step.env) for q in functions(shape.domain_at(s)))

    def is_dom_inj(s: State, step: Step) -> bool:
        dom, dom_prime = shape.domain_at(s), shape.domain_at(step.state)
        inj = table[step.action].injection(s, step.state, step.env, dom, dom_prime)
        return is_partial_injection(inj, dom, dom_prime)

    def is_pred_dom(s: State, step: Step) -> bool:
        entry = table[step.action]
        dom = shape.domain_at(s)
        pred_dom = entry.predicted(s, step.state, step.env)
        if not pred_dom <= dom:
            return False
        if entry.pred is None:
            return True
        outcomes: dict[Fcn, bool] = {}
        for q in functions(dom):
            key = q.restrict(pred_dom)
            value = entry.holds(q, s, step.state, step.env)
            if outcomes.setdefault(key, value) != value:
                return False
        return True

    return ActionProperty.conjunction("ProphCondition", [
        ActionProperty("ExistsGoodProphecy", exists_good_prophecy),
        ActionProperty("IsDomInj", is_dom_inj),
        ActionProperty("IsPredDom", is_pred_dom),
    ])


def check_proph_conditions(spec: SpecDef, cfg: ModelConfig, shape: ProphecyShape,
                           table: Mapping[str, SubactionProphecy], workers: int = 1,
                           state_cap: int | None = None) -> Verdict:
    """Pass iff every non-stuttering step of ``spec`` satisfies ``ProphCondition`` for its subaction."""
    return check_action_property(spec, cfg, prophecy_condition(spec, shape, table), workers, state_cap)
