"""
Linearizable data objects.

A data object is given by its processes, the commands and outputs of each
process, an initial state and ``apply(i, cmd, obj)``, which returns a
record with ``newState`` and ``output`` fields. ``linearizability`` builds
the safety spec in which every command takes effect in a single internal
``DoOp`` step between its visible ``BeginOp`` and ``EndOp`` steps.
"""
from __future__ import annotations

from collections.abc import Callable
from dataclasses import dataclass
from typing import Any

from .. import logger
from ..constants import OBJ_VALUES_MAX_DEPTH
from ..kernel import Env, SpecDef, State, Subaction, disj, exists
from ..values import Fcn, ordered

NEW_STATE = "newState"
OUTPUT = "output"

BEGIN_OP = "BeginOp"
DO_OP = "DoOp"
END_OP = "EndOp"


@dataclass(frozen=True)
class DataObject:
    procs: frozenset[Any]
    commands: Callable[[Any], frozenset[Any]]
    outputs: Callable[[Any], frozenset[Any]]
    init_output: Callable[[Any], Any]
    init_obj: Any
    apply: Callable[[Any, Any, Any], Fcn]


def linearizability(name: str, obj: DataObject, object_var: str = "object",
                    constraint: Callable[[State], Any] | None = None,
                    symbols: frozenset[str] = frozenset()) -> SpecDef:
    """The linearizable spec of ``obj`` with variables ``object_var``, ``interface`` and ``istate``."""
    def init():
        outputs = Fcn({i: obj.init_output(i) for i in obj.procs})
        yield State({object_var: obj.init_obj, "interface": outputs, "istate": outputs})

    def begin_op(s: State, env: Env) -> list[State]:
        i, cmd = env["i"], env["cmd"]
        return [s.update(interface=s["interface"].set(i, cmd), istate=s["istate"].set(i, cmd))]

    def do_op(s: State, env: Env) -> list[State]:
        i = env["i"]
        result = obj.apply(i, s["interface"][i], s[object_var])
        return [s.update(**{object_var: result[NEW_STATE]}, istate=s["istate"].set(i, result[OUTPUT]))]

    def end_op(s: State, env: Env) -> list[State]:
        i = env["i"]
        return [s.update(interface=s["interface"].set(i, s["istate"][i]))]

    def idle(s: State, env: Env) -> bool:
        return s["interface"][env["i"]] in obj.outputs(env["i"])

    def issued(s: State, env: Env) -> bool:
        return s["interface"][env["i"]] in obj.commands(env["i"])

    next_action = exists("i", lambda s, env: obj.procs, disj(
        exists("cmd", lambda s, env: obj.commands(env["i"]), Subaction(BEGIN_OP, begin_op, guard=idle)),
        Subaction(DO_OP, do_op, guard=lambda s, env: issued(s, env) and s["istate"][env["i"]] == s["interface"][env["i"]]),
        Subaction(END_OP, end_op, guard=lambda s, env: issued(s, env) and s["istate"][env["i"]] in obj.outputs(env["i"])),
    ))
    return SpecDef(name, (object_var, "interface", "istate"), init, next_action,
                   constraint=constraint, symbols=symbols)


def obj_values(obj: DataObject, max_depth: int = OBJ_VALUES_MAX_DEPTH) -> frozenset[Any]:
    """Object states reachable from ``init_obj`` by applying commands, cut off at ``max_depth`` rounds."""
    reached = {obj.init_obj}
    frontier = [obj.init_obj]
    for depth in range(max_depth):
        fresh = []
        for st in frontier:
            for i in ordered(obj.procs):
                for cmd in ordered(obj.commands(i)):
                    new = obj.apply(i, cmd, st)[NEW_STATE]
                    if new not in reached:
                        reached.add(new)
                        fresh.append(new)
        if not fresh:
            logger.debug(f"Object state closure reached a fixpoint after {depth + 1} round(s)")
            return frozenset(reached)
        frontier = fresh
    logger.warning(f"Object state closure cut off after {max_depth} rounds with {len(reached)} states")
    return frozenset(reached)


def linear_assumptions_hold(obj: DataObject, values: frozenset[Any]) -> list[str]:
    """The violated assumptions of a linearizable object; empty when all hold."""
    violated = []
    if obj.init_obj not in values:
        violated.append("InitObj is not an object value")
    for i in ordered(obj.procs):
        outputs, commands = obj.outputs(i), obj.commands(i)
        if obj.init_output(i) not in outputs:
            violated.append(f"InitOutput({i}) is not an output of {i}")
        if outputs & commands:
            violated.append(f"Outputs({i}) and Commands({i}) overlap")
        for st in ordered(values):
            for cmd in ordered(commands):
                result = obj.apply(i, cmd, st)
                if result[OUTPUT] not in outputs:
                    violated.append(f"Apply({i}, {cmd}, ...) produces an output outside Outputs({i})")
                if result[NEW_STATE] not in values:
                    violated.append(f"Apply({i}, {cmd}, ...) leaves the object values")
    return violated
