"""
Breadth-first exploration of a specification's reachable states, and the
checks built on it: invariants, action properties, refinement under a
mapping, equivalence and trace search.
"""
from __future__ import annotations

import dataclasses
import json
from collections.abc import Callable, Iterable, Sequence
from concurrent.futures import ThreadPoolExecutor, as_completed
from dataclasses import dataclass
from typing import Any, NamedTuple

from cachetools import LRUCache

from . import logger
from .constants import (HIGH_SUCCESSOR_CACHE_SIZE, INIT_ACTION,
                        MAPPED_STATE_CACHE_SIZE, MIN_PARALLEL_FRONTIER)
from .exceptions import ResourceError
from .kernel import (EMPTY_ENV, Env, Expr, RefinementMapping, SpecDef, State,
                     Step, Successors, as_state_expr, check_bool,
                     enumerate_init, enumerate_successors, identity_mapping)
from .utils.config_utils import ModelConfig, resolve_state_cap
from .utils.explorer_utils import optimal_worker_stats, split_frontier
from .values import Fcn, decode_value, encode_value

PASS = "pass"
FAIL = "fail"

StateCheck = Callable[[State], str | None]
StepCheck = Callable[[State, Step], str | None]


class TraceStep(NamedTuple):
    state: State
    action: str
    env: Env = EMPTY_ENV


@dataclass(frozen=True)
class Verdict:
    """Outcome of a check; a failing verdict carries a trace from an initial state."""
    status: str
    trace: tuple[TraceStep, ...] | None = None
    detail: str = ""

    def __post_init__(self):
        if self.status not in (PASS, FAIL):
            raise ValueError(f"Unknown verdict status {self.status!r}")
        if self.status == FAIL and not self.trace:
            raise ValueError("A failing verdict needs a trace.")

    @property
    def passed(self) -> bool:
        return self.status == PASS

    @classmethod
    def ok(cls, detail: str = "") -> Verdict:
        return cls(PASS, None, detail)

    @classmethod
    def fail(cls, trace: Sequence[TraceStep], detail: str) -> Verdict:
        return cls(FAIL, tuple(trace), detail)

    def to_dict(self) -> dict[str, Any]:
        trace = None
        if self.trace is not None:
            trace = [
                {
                    "state": {k: encode_value(v) for k, v in step.state.sorted_items()},
                    "action": step.action,
                    "binders": {k: encode_value(v) for k, v in step.env.sorted_items()},
                }
                for step in self.trace
            ]
        return {"status": self.status, "detail": self.detail, "trace": trace}

    def to_json(self, indent: int | None = 2) -> str:
        return json.dumps(self.to_dict(), sort_keys=True, indent=indent)

    @classmethod
    def from_dict(cls, data: dict[str, Any]) -> Verdict:
        trace = None
        if data.get("trace") is not None:
            trace = tuple(
                TraceStep(
                    State({k: decode_value(v) for k, v in item["state"].items()}),
                    item["action"],
                    Fcn({k: decode_value(v) for k, v in item.get("binders", {}).items()}),
                )
                for item in data["trace"]
            )
        return cls(data["status"], trace, data.get("detail", ""))

    @classmethod
    def from_json(cls, text: str) -> Verdict:
        return cls.from_dict(json.loads(text))


class Transition(NamedTuple):
    source: State
    action: str
    env: Env
    target: State


@dataclass(frozen=True)
class StateGraph:
    states: frozenset[State]
    inits: frozenset[State]
    transitions: frozenset[Transition]

    def edges(self, include_stuttering: bool = True) -> frozenset[tuple[State, State]]:
        """Transitions as state pairs, forgetting actions and binders."""
        return frozenset(
            (tr.source, tr.target) for tr in self.transitions
            if include_stuttering or tr.source != tr.target
        )

    def project(self, names: Iterable[str]) -> StateGraph:
        names = tuple(names)
        return StateGraph(
            frozenset(s.project(names) for s in self.states),
            frozenset(s.project(names) for s in self.inits),
            frozenset(
                Transition(tr.source.project(names), tr.action, tr.env, tr.target.project(names))
                for tr in self.transitions
            ),
        )


class SearchOutcome(NamedTuple):
    verdict: Verdict
    graph: StateGraph | None
    states_seen: int


class StateSpaceSearch:
    """
    Level-synchronous breadth-first search over a spec's reachable states.

    Each level's frontier is expanded in chunks on a thread pool; results
    are merged in frontier order, so the search visits states, reports
    violations and builds graphs identically for every worker count.
    """

    def __init__(self, spec: SpecDef, cfg: ModelConfig, workers: int = 1, state_cap: int | None = None):
        self._spec = spec
        self._cfg = cfg
        self._workers = max(1, workers)
        self._state_cap = resolve_state_cap(state_cap)
        # state -> (parent, action, binders); parent is None for initial states
        self._parents: dict[State, tuple[State | None, str, Env]] = {}

    @property
    def spec(self) -> SpecDef:
        return self._spec

    def trace_to(self, state: State) -> list[TraceStep]:
        trace = []
        current: State | None = state
        while current is not None:
            parent, action, env = self._parents[current]
            trace.append(TraceStep(current, action, env))
            current = parent
        trace.reverse()
        return trace

    def _admit(self, state: State, parent: State | None, action: str, env: Env) -> bool:
        if state in self._parents:
            return False
        if len(self._parents) >= self._state_cap:
            raise ResourceError(
                f"{self._spec.name}: more than {self._state_cap} reachable states; "
                f"raise the state cap or tighten the model")
        self._parents[state] = (parent, action, env)
        return True

    def _expand_chunk(self, chunk: list[State]) -> list[Successors]:
        return [enumerate_successors(self._spec, s) for s in chunk]

    def _expand(self, frontier: list[State], executor: ThreadPoolExecutor | None) -> list[Successors]:
        if executor is None or len(frontier) < MIN_PARALLEL_FRONTIER:
            return self._expand_chunk(frontier)

        _, chunk_size = optimal_worker_stats(len(frontier), self._workers)
        chunks = list(split_frontier(frontier, chunk_size))
        results: list[list[Successors]] = [[] for _ in chunks]
        futures = {executor.submit(self._expand_chunk, chunk): idx for idx, chunk in enumerate(chunks)}
        for future in as_completed(futures):
            try:
                results[futures[future]] = future.result()
            except Exception as e:
                logger.error(f"Error expanding chunk {futures[future]} of {self._spec.name}: {e}")
                raise
        return [succ for part in results for succ in part]

    def run(self, on_state: StateCheck | None = None, on_step: StepCheck | None = None,
            record: bool = False) -> SearchOutcome:
        """
        Explore until the frontier is empty or a check reports a violation.

        ``on_state`` sees every distinct reachable state once, ``on_step``
        every step from every reachable state; either returns a message to
        stop the search with a failing verdict.
        """
        self._parents.clear()
        transitions: list[Transition] = []
        inits = enumerate_init(self._spec, self._cfg)
        frontier: list[State] = []
        for s in inits:
            if self._admit(s, None, INIT_ACTION, EMPTY_ENV):
                frontier.append(s)
                message = on_state(s) if on_state else None
                if message:
                    return SearchOutcome(Verdict.fail(self.trace_to(s), message), None, len(self._parents))

        executor = ThreadPoolExecutor(max_workers=self._workers) if self._workers > 1 else None
        try:
            depth = 0
            while frontier:
                logger.debug(f"{self._spec.name}: level {depth}, frontier {len(frontier)}, "
                             f"{len(self._parents)} states")
                expansions = self._expand(frontier, executor)
                next_frontier: list[State] = []
                for s, successors in zip(frontier, expansions):
                    for step in successors.steps:
                        if on_step:
                            message = on_step(s, step)
                            if message:
                                trace = self.trace_to(s) + [TraceStep(step.state, step.action, step.env)]
                                return SearchOutcome(Verdict.fail(trace, message), None, len(self._parents))
                        if record:
                            transitions.append(Transition(s, step.action, step.env, step.state))
                        if self._admit(step.state, s, step.action, step.env):
                            next_frontier.append(step.state)
                            message = on_state(step.state) if on_state else None
                            if message:
                                return SearchOutcome(Verdict.fail(self.trace_to(step.state), message), None,
                                                     len(self._parents))
                frontier = next_frontier
                depth += 1
        finally:
            if executor is not None:
                executor.shutdown(wait=True, cancel_futures=True)

        logger.info(f"{self._spec.name}: explored {len(self._parents)} states in {depth} levels")
        graph = None
        if record:
            graph = StateGraph(frozenset(self._parents), frozenset(inits), frozenset(transitions))
        return SearchOutcome(Verdict.ok(), graph, len(self._parents))


def explore(spec: SpecDef, cfg: ModelConfig, workers: int = 1, state_cap: int | None = None) -> StateGraph:
    """Every state reachable within the constraint, with all transitions between them."""
    outcome = StateSpaceSearch(spec, cfg, workers, state_cap).run(record=True)
    assert outcome.graph is not None
    return outcome.graph


def check_invariant(spec: SpecDef, cfg: ModelConfig, inv: Expr | Callable[[Any], Any],
                    workers: int = 1, state_cap: int | None = None, label: str | None = None) -> Verdict:
    """Pass iff ``inv`` holds in every reachable state; a failure carries a shortest trace."""
    inv = as_state_expr(inv)
    label = label or inv.label

    def on_state(s: State) -> str | None:
        if check_bool(inv(s), label):
            return None
        return f"Invariant {label} is violated"

    verdict = StateSpaceSearch(spec, cfg, workers, state_cap).run(on_state=on_state).verdict
    logger.info(f"check_invariant {spec.name} {label}: {verdict.status}")
    return verdict


@dataclass(frozen=True)
class ActionProperty:
    """
    ``[][P]_vars`` for a predicate over a step: ``holds(s, step)`` sees the
    pre-state and the generating subaction, its binders and the post-state.

    ``explain``, when given, names the part of the property a failing step
    violates.
    """
    label: str
    holds: Callable[[State, Step], Any]
    explain: Callable[[State, Step], str] | None = None

    def violation(self, s: State, step: Step) -> str | None:
        if check_bool(self.holds(s, step), self.label):
            return None
        reason = self.explain(s, step) if self.explain else self.label
        return f"Action property {reason} fails on a {step.action} step"

    @classmethod
    def for_subaction(cls, action_id: str, pred: Callable[[State, State, Env], Any],
                      label: str | None = None) -> ActionProperty:
        """``\\A <<k; K>> : A => P`` for the subaction ``action_id``."""
        def holds(s: State, step: Step) -> bool:
            return step.action != action_id or check_bool(pred(s, step.state, step.env), label or action_id)

        return cls(label or f"{action_id} => P", holds)

    @classmethod
    def conjunction(cls, label: str, props: Iterable[ActionProperty]) -> ActionProperty:
        props = tuple(props)

        def explain(s: State, step: Step) -> str:
            for p in props:
                if not check_bool(p.holds(s, step), p.label):
                    return f"{label}/{p.explain(s, step) if p.explain else p.label}"
            return label

        return cls(label, lambda s, step: all(check_bool(p.holds(s, step), p.label) for p in props), explain)


def check_action_property(spec: SpecDef, cfg: ModelConfig, prop: ActionProperty,
                          workers: int = 1, state_cap: int | None = None) -> Verdict:
    """Pass iff ``prop`` holds on every explored non-stuttering step."""
    def on_step(s: State, step: Step) -> str | None:
        if step.state == s:
            return None
        return prop.violation(s, step)

    verdict = StateSpaceSearch(spec, cfg, workers, state_cap).run(on_step=on_step).verdict
    logger.info(f"check_action_property {spec.name} {prop.label}: {verdict.status}")
    return verdict


class _RefinementCheck:
    """Step-simulation of a low spec by a high spec through a mapping."""

    def __init__(self, low: SpecDef, high: SpecDef, cfg: ModelConfig, refinement: RefinementMapping):
        refinement.validate(low, high)
        self._low = low
        # The high spec's exploration bound plays no part in acceptance
        self._high = dataclasses.replace(high, constraint=None)
        self._mapping = refinement
        self._low_inits = frozenset(enumerate_init(low, cfg))
        self._high_inits = frozenset(enumerate_init(self._high, cfg))
        self._mapped: LRUCache[State, State] = LRUCache(maxsize=MAPPED_STATE_CACHE_SIZE)
        self._accepted: LRUCache[State, frozenset[State]] = LRUCache(maxsize=HIGH_SUCCESSOR_CACHE_SIZE)

    def bar(self, s: State) -> State:
        mapped = self._mapped.get(s)
        if mapped is None:
            mapped = self._mapping.apply(s)
            self._mapped[s] = mapped
        return mapped

    def high_successors(self, s: State) -> frozenset[State]:
        succ = self._accepted.get(s)
        if succ is None:
            succ = frozenset(step.state for step in enumerate_successors(self._high, s).steps)
            self._accepted[s] = succ
        return succ

    def on_state(self, s: State) -> str | None:
        if s in self._low_inits and self.bar(s) not in self._high_inits:
            return f"Initial state maps to {self.bar(s)}, which is not an initial state of {self._high.name}"
        return None

    def on_step(self, s: State, step: Step) -> str | None:
        sb, tb = self.bar(s), self.bar(step.state)
        if sb == tb or tb in self.high_successors(sb):
            return None
        return (f"{step.action} step maps to {sb} -> {tb}, "
                f"which no subaction of {self._high.name} allows")


def check_refinement(low: SpecDef, cfg: ModelConfig, refinement: RefinementMapping, high: SpecDef,
                     workers: int = 1, state_cap: int | None = None) -> Verdict:
    """Pass iff ``low`` implements ``high`` under the mapping, as a step-simulation."""
    check = _RefinementCheck(low, high, cfg, refinement)
    verdict = StateSpaceSearch(low, cfg, workers, state_cap).run(on_state=check.on_state,
                                                                 on_step=check.on_step).verdict
    logger.info(f"check_refinement {low.name} => {high.name}: {verdict.status}")
    return verdict


def check_equivalence(a: SpecDef, map_ab: RefinementMapping, b: SpecDef, map_ba: RefinementMapping,
                      cfg: ModelConfig, workers: int = 1, state_cap: int | None = None) -> Verdict:
    """Mutual refinement."""
    forward = check_refinement(a, cfg, map_ab, b, workers, state_cap)
    if not forward.passed:
        return dataclasses.replace(forward, detail=f"{a.name} => {b.name}: {forward.detail}")
    backward = check_refinement(b, cfg, map_ba, a, workers, state_cap)
    if not backward.passed:
        return dataclasses.replace(backward, detail=f"{b.name} => {a.name}: {backward.detail}")
    return Verdict.ok(f"{a.name} and {b.name} are equivalent")


def find_trace(spec: SpecDef, cfg: ModelConfig, target: Expr | Callable[[Any], Any],
               workers: int = 1, state_cap: int | None = None, label: str | None = None) -> Verdict:
    """A shortest trace to a state satisfying ``target`` (a failing verdict), or pass if unreachable."""
    target = as_state_expr(target)
    label = label or target.label

    def on_state(s: State) -> str | None:
        return f"Reached target {label}" if check_bool(target(s), label) else None

    verdict = StateSpaceSearch(spec, cfg, workers, state_cap).run(on_state=on_state).verdict
    if verdict.passed:
        verdict = Verdict.ok(f"Target {label} is unreachable")
    logger.info(f"find_trace {spec.name} {label}: {'found' if not verdict.passed else 'unreachable'}")
    return verdict


def replay_trace(spec: SpecDef, cfg: ModelConfig, trace: Sequence[TraceStep]) -> bool:
    """True iff the trace starts in an initial state and each step is a step of ``spec``."""
    if not trace or trace[0].state not in enumerate_init(spec, cfg):
        return False
    for prev, step in zip(trace, trace[1:]):
        if Step(step.action, step.env, step.state) not in enumerate_successors(spec, prev.state).steps:
            return False
    return True


def _witness(spec: SpecDef, cfg: ModelConfig, state_cap: int | None,
             on_state: StateCheck | None = None, on_step: StepCheck | None = None) -> list[TraceStep]:
    verdict = StateSpaceSearch(spec, cfg, 1, state_cap).run(on_state=on_state, on_step=on_step).verdict
    assert verdict.trace is not None
    return list(verdict.trace)


def check_projection(base: SpecDef, augmented: SpecDef, cfg: ModelConfig, allow_stuttering: bool = False,
                     workers: int = 1, state_cap: int | None = None) -> Verdict:
    """
    Pass iff projecting ``augmented``'s reachable graph onto ``base``'s
    variables gives exactly ``base``'s reachable graph.

    With ``allow_stuttering`` the comparison ignores steps that leave the
    base variables unchanged.
    """
    names = base.variables
    graph = explore(base, cfg, workers, state_cap)
    projected = explore(augmented, cfg, workers, state_cap).project(names)

    missing = graph.states - projected.states
    if missing:
        lost = min(missing, key=repr)
        return Verdict.fail(_witness(base, cfg, state_cap, on_state=lambda s: "found" if s == lost else None),
                            f"{len(missing)} reachable state(s) of {base.name} have no lift in {augmented.name}")
    extra = projected.states - graph.states
    if extra:
        bad = min(extra, key=repr)
        return Verdict.fail(_witness(augmented, cfg, state_cap,
                                     on_state=lambda s: "found" if s.project(names) == bad else None),
                            f"{len(extra)} state(s) of {augmented.name} project outside {base.name}")

    def relevant(transitions: frozenset[Transition]) -> frozenset[Transition]:
        if not allow_stuttering:
            return transitions
        return frozenset(tr for tr in transitions if tr.source != tr.target)

    base_steps, aug_steps = relevant(graph.transitions), relevant(projected.transitions)
    for differing, spec, what in ((base_steps - aug_steps, base, "have no lift in"),
                                  (aug_steps - base_steps, augmented, "do not project onto steps of")):
        if differing:
            tr = min(differing, key=repr)

            def matches(s: State, step: Step, tr: Transition = tr) -> str | None:
                if (step.action, step.env) == (tr.action, tr.env) and s.project(names) == tr.source \
                        and step.state.project(names) == tr.target:
                    return "found"
                return None

            other = augmented.name if spec is base else base.name
            return Verdict.fail(_witness(spec, cfg, state_cap, on_step=matches),
                                f"{len(differing)} step(s) of {spec.name} {what} {other}, "
                                f"e.g. {tr.action} to {tr.target!r}")
    return Verdict.ok(f"{augmented.name} projects exactly onto {base.name} "
                      f"({len(graph.states)} states, {len(graph.transitions)} transitions)")


def check_erasure(base: SpecDef, augmented: SpecDef, cfg: ModelConfig, workers: int = 1,
                  state_cap: int | None = None) -> Verdict:
    """``augmented`` implements ``base`` under the mapping that erases auxiliary variables."""
    return check_refinement(augmented, cfg, identity_mapping(base.variables, base.name), base, workers, state_cap)
