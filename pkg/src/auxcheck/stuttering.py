"""
Stuttering variables.

A stuttering variable ``s`` is ``TOP`` when no stuttering is under way and
otherwise a record ``[id |-> actionId, ctxt |-> context, val |-> v]``
counting down through a well-founded order ``(sigma, bot, decr)``. The
wrappers add the countdown steps before or after a subaction; every step
with ``s # TOP`` leaves the original variables unchanged.
"""
from __future__ import annotations

import dataclasses
from collections.abc import Callable, Mapping
from dataclasses import dataclass
from typing import Any

from . import logger
from .constants import STUTTER_CTXT, STUTTER_ID, STUTTER_VAL, STUTTER_VAR
from .exceptions import ConstructionError
from .explorer import StateSpaceSearch, Verdict
from .kernel import (Env, SpecDef, State, Step, Subaction, check_bool,
                     is_enabled, map_leaves)
from .utils.config_utils import ModelConfig
from .values import Fcn, format_value, record

TOP = record(top="top")

POST = "post"
PRE = "pre"
MAY_POST = "may_post"
MAY_PRE = "may_pre"
_KINDS = (POST, PRE, MAY_POST, MAY_PRE)

Context = Callable[[Env], Any]
Enabled = Callable[[State, Env], Any]


def no_context(env: Env) -> Any:
    return ""


def binder(name: str) -> Context:
    """The context value of a subaction quantified over ``name``."""
    return lambda env: env[name]


@dataclass(frozen=True)
class StutterOrder:
    """
    ``sigma`` with smallest element ``bot`` and ``decr``; ``init_val(s, t, env)``
    gives the first counter value (``t`` is None before the step is taken).
    """
    sigma: frozenset[Any]
    bot: Any
    decr: Callable[[Any], Any]
    init_val: Callable[[State, State | None, Env], Any]

    def __post_init__(self):
        if self.bot not in self.sigma:
            raise ConstructionError(f"bot {format_value(self.bot)} is not in sigma")


def stutter_record(action_id: str, context: Any, val: Any) -> Fcn:
    return Fcn({STUTTER_ID: action_id, STUTTER_CTXT: context, STUTTER_VAL: val})


def _a_steps(action: Subaction, s: State, env: Env) -> list[State]:
    return action.successors(s, env)


def _counting(st: Any, action_id: str) -> bool:
    return st != TOP and st[STUTTER_ID] == action_id


def no_stutter(action: Subaction, s_name: str = STUTTER_VAR) -> Subaction:
    """``(s = top) /\\ A /\\ (s' = s)``"""
    def post(s: State, env: Env) -> list[State]:
        if s[s_name] != TOP:
            return []
        return [t.set(s_name, TOP) for t in _a_steps(action, s, env)]

    return Subaction(action.id, post)


def post_stutter(action: Subaction, action_id: str, context: Context, order: StutterOrder,
                 s_name: str = STUTTER_VAR) -> Subaction:
    """An ``A`` step followed by stuttering steps counting down to ``bot``."""
    def post(s: State, env: Env) -> list[State]:
        st = s[s_name]
        if st == TOP:
            return [t.set(s_name, stutter_record(action_id, context(env), order.init_val(s, t, env)))
                    for t in _a_steps(action, s, env)]
        if not _counting(st, action_id):
            return []
        val = st[STUTTER_VAL]
        return [s.set(s_name, TOP if val == order.bot else st.set(STUTTER_VAL, order.decr(val)))]

    return Subaction(action.id, post)


def pre_stutter(action: Subaction, enabled: Enabled, action_id: str, context: Context, order: StutterOrder,
                s_name: str = STUTTER_VAR) -> Subaction:
    """Stuttering steps counting down to ``bot``, then an ``A`` step with the same context."""
    def post(s: State, env: Env) -> list[State]:
        st = s[s_name]
        if st == TOP:
            if not check_bool(enabled(s, env), f"{action_id} enabled"):
                return []
            return [s.set(s_name, stutter_record(action_id, context(env), order.init_val(s, None, env)))]
        if not _counting(st, action_id):
            return []
        val = st[STUTTER_VAL]
        if val == order.bot:
            if st[STUTTER_CTXT] != context(env):
                return []
            return [t.set(s_name, TOP) for t in _a_steps(action, s, env)]
        return [s.set(s_name, st.set(STUTTER_VAL, order.decr(val)))]

    return Subaction(action.id, post)


def may_post_stutter(action: Subaction, action_id: str, context: Context, order: StutterOrder,
                     s_name: str = STUTTER_VAR) -> Subaction:
    """Like ``post_stutter``, with no stuttering when ``init_val`` is ``bot``."""
    def post(s: State, env: Env) -> list[State]:
        st = s[s_name]
        if st == TOP:
            result = []
            for t in _a_steps(action, s, env):
                val = order.init_val(s, t, env)
                result.append(t.set(s_name, TOP if val == order.bot else
                                    stutter_record(action_id, context(env), val)))
            return result
        if not _counting(st, action_id):
            return []
        val = order.decr(st[STUTTER_VAL])
        return [s.set(s_name, TOP if val == order.bot else st.set(STUTTER_VAL, val))]

    return Subaction(action.id, post)


def may_pre_stutter(action: Subaction, enabled: Enabled, action_id: str, context: Context, order: StutterOrder,
                    s_name: str = STUTTER_VAR) -> Subaction:
    """Like ``pre_stutter``, with no stuttering when ``init_val`` is ``bot``."""
    def post(s: State, env: Env) -> list[State]:
        st = s[s_name]
        if st == TOP:
            if not check_bool(enabled(s, env), f"{action_id} enabled"):
                return []
            val = order.init_val(s, None, env)
            if val == order.bot:
                return [t.set(s_name, TOP) for t in _a_steps(action, s, env)]
            return [s.set(s_name, stutter_record(action_id, context(env), order.decr(val)))]
        if not _counting(st, action_id):
            return []
        val = st[STUTTER_VAL]
        if val == order.bot:
            if st[STUTTER_CTXT] != context(env):
                return []
            return [t.set(s_name, TOP) for t in _a_steps(action, s, env)]
        return [s.set(s_name, st.set(STUTTER_VAL, order.decr(val)))]

    return Subaction(action.id, post)


@dataclass(frozen=True)
class StutterWrap:
    """How one subaction is wrapped; ``enabled`` is required for the pre-stuttering kinds."""
    kind: str
    action_id: str
    order: StutterOrder
    context: Context = no_context
    enabled: Enabled | None = None

    def __post_init__(self):
        if self.kind not in _KINDS:
            raise ConstructionError(f"Unknown stuttering kind {self.kind!r}")
        if self.kind in (PRE, MAY_PRE) and self.enabled is None:
            raise ConstructionError(f"{self.action_id}: pre-stuttering needs an enabling predicate")

    @property
    def before(self) -> bool:
        return self.kind in (PRE, MAY_PRE)

    def wrap(self, action: Subaction, s_name: str) -> Subaction:
        if self.kind == POST:
            return post_stutter(action, self.action_id, self.context, self.order, s_name)
        if self.kind == MAY_POST:
            return may_post_stutter(action, self.action_id, self.context, self.order, s_name)
        assert self.enabled is not None
        if self.kind == PRE:
            return pre_stutter(action, self.enabled, self.action_id, self.context, self.order, s_name)
        return may_pre_stutter(action, self.enabled, self.action_id, self.context, self.order, s_name)

    def initial_value(self, s: State, step: Step) -> Any:
        return self.order.init_val(s, None if self.before else step.state, step.env)


def _check_table(spec: SpecDef, table: Mapping[str, StutterWrap]) -> None:
    unknown = sorted(set(table) - {leaf.id for leaf in spec.subactions})
    if unknown:
        raise ConstructionError(f"Stuttering given for unknown subaction(s) {unknown} of {spec.name}")
    action_ids = [w.action_id for w in table.values()]
    duplicates = sorted({a for a in action_ids if action_ids.count(a) > 1})
    if duplicates:
        raise ConstructionError(f"Duplicate stuttering action ids {duplicates}")


def attach_stuttering(spec: SpecDef, table: Mapping[str, StutterWrap], s_name: str = STUTTER_VAR,
                      name: str | None = None) -> SpecDef:
    """
    The spec with stuttering variable ``s_name``: subactions listed in
    ``table`` are wrapped accordingly, all others with ``no_stutter``.
    """
    _check_table(spec, table)
    if s_name in spec.variable_set:
        raise ConstructionError(f"{spec.name} already has a variable named {s_name!r}")

    def init():
        for s in spec.init():
            yield s.set(s_name, TOP)

    def lift(leaf: Subaction) -> Subaction:
        wrap = table.get(leaf.id)
        return wrap.wrap(leaf, s_name) if wrap else no_stutter(leaf, s_name)

    spec_s = dataclasses.replace(
        spec,
        name=name or f"{spec.name}S",
        variables=spec.variables + (s_name,),
        init=init,
        next=map_leaves(spec.next, lift),
    )
    logger.debug(f"Attached stuttering variable {s_name} to {spec.name} as {spec_s.name}")
    return spec_s


def stutter_constant_condition(sigma: frozenset[Any], bot: Any, decr: Callable[[Any], Any]) -> bool:
    """True iff every element of ``sigma`` reaches ``bot`` by iterating ``decr`` inside ``sigma``."""
    if bot not in sigma:
        return False
    reached = {bot}
    while True:
        inverse = {sig for sig in sigma - reached if decr(sig) in reached}
        if not inverse:
            break
        reached |= inverse
    return reached == sigma


def stutter_invariant(table: Mapping[str, StutterWrap], s_name: str = STUTTER_VAR) -> Callable[[State], bool]:
    """``s = top`` or ``s`` counts for a declared action inside that action's sigma."""
    sigmas = {w.action_id: w.order.sigma for w in table.values()}

    def holds(s: State) -> bool:
        st = s[s_name]
        if st == TOP:
            return True
        return st[STUTTER_ID] in sigmas and st[STUTTER_VAL] in sigmas[st[STUTTER_ID]]

    return holds


def check_stutter_runtime_conditions(spec: SpecDef, cfg: ModelConfig, table: Mapping[str, StutterWrap],
                                     workers: int = 1, state_cap: int | None = None) -> Verdict:
    """
    On the spec before stuttering is added: every wrapped step's ``init_val``
    lies in its sigma, and every pre-stuttering ``enabled`` predicate equals
    ``ENABLED A`` in every reachable state.
    """
    _check_table(spec, table)
    pre_wrapped = [(spec.subaction(action), wrap) for action, wrap in table.items() if wrap.before]

    def on_state(s: State) -> str | None:
        for leaf, wrap in pre_wrapped:
            assert wrap.enabled is not None
            for env in leaf.envs(s):
                claimed = check_bool(wrap.enabled(s, env), f"{wrap.action_id} enabled")
                actual = is_enabled(leaf, s, env)
                if claimed != actual:
                    return f"enabled predicate of {wrap.action_id} is {claimed} but ENABLED {leaf.id} is {actual}"
        return None

    def on_step(s: State, step: Step) -> str | None:
        wrap = table.get(step.action)
        if wrap is None or step.state == s:
            return None
        val = wrap.initial_value(s, step)
        if val in wrap.order.sigma:
            return None
        return f"init_val {format_value(val)} of {wrap.action_id} is not in sigma"

    verdict = StateSpaceSearch(spec, cfg, workers, state_cap).run(on_state=on_state, on_step=on_step).verdict
    logger.info(f"check_stutter_runtime_conditions {spec.name}: {verdict.status}")
    return verdict
