"""
SendSet: values chosen into a set ``y`` are sent one at a time through
``x``. SendSetUndo may also drop values from ``y``; a prophecy array
predicts, per element, whether it will be sent or undone.
"""
from __future__ import annotations

from ..kernel import (Env, Expr, SpecDef, State, Subaction, disj, exists,
                      mapping)
from ..prophecy import ProphecyShape, SubactionProphecy, attach_prophecy
from ..utils.config_utils import ModelConfig
from ..values import NON_DATA, ordered, subset_of
from .registry import ExampleEntry, MappingEntry, ProphecyCheck, register

SEND = "send"
UNDO = "undo"
PI = frozenset({SEND, UNDO})


def _next(data: frozenset) -> tuple[Subaction, Subaction, Subaction]:
    def choose(s: State, env: Env) -> list[State]:
        return [s.update(y=s["y"] | {d}) for d in ordered(data - s["y"])]

    def send(s: State, env: Env) -> list[State]:
        return [s.update(x=d, y=s["y"] - {d}) for d in ordered(s["y"])]

    def rcv(s: State, env: Env) -> list[State]:
        return [s.update(x=NON_DATA)]

    return (
        Subaction("Choose", choose),
        Subaction("Send", send, guard=lambda s, env: s["x"] == NON_DATA),
        Subaction("Rcv", rcv, guard=lambda s, env: s["x"] in data),
    )


def _init():
    yield State(x=NON_DATA, y=frozenset())


def sendset(cfg: ModelConfig) -> SpecDef:
    data = cfg.substitution("Data")
    return SpecDef("SendSet", ("x", "y"), _init, disj(*_next(data)), symbols=frozenset({"Data"}))


def undo(s: State, env: Env) -> list[State]:
    return [s.update(y=s["y"] - env["S"])]


def sendset_undo(cfg: ModelConfig) -> SpecDef:
    data = cfg.substitution("Data")
    return SpecDef(
        "SendSetUndo", ("x", "y"), _init,
        disj(*_next(data), exists("S", lambda s, env: subset_of(s["y"]), Subaction("Undo", undo))),
        symbols=frozenset({"Data"}),
    )


def prophecy_shape() -> ProphecyShape:
    return ProphecyShape(PI, Expr.state(lambda s: s["y"], reads="y", label="Dom"))


PROPHECY_TABLE = {
    "Choose": SubactionProphecy(),
    "Send": SubactionProphecy(pred=lambda p, s, t, env: p[t["x"]] == SEND,
                              pred_dom=lambda s, t, env: {t["x"]}),
    "Rcv": SubactionProphecy(),
    "Undo": SubactionProphecy(pred=lambda p, s, t, env: all(p[d] == UNDO for d in env["S"]),
                              pred_dom=lambda s, t, env: env["S"]),
}


def sendset_undo_p(cfg: ModelConfig) -> SpecDef:
    return attach_prophecy(sendset_undo(cfg), prophecy_shape(), PROPHECY_TABLE)


def to_sendset(cfg: ModelConfig):
    return mapping(
        "SendSet", "to-SendSet",
        x=Expr.state(lambda s: s["x"], reads="x"),
        y=Expr.state(lambda s: frozenset(d for d in s["y"] if s["p"][d] == SEND), reads="y p", label="yBar"),
    )


def p_typed(cfg: ModelConfig):
    """``p \\in [y -> Pi]``"""
    return lambda s: s["p"].domain == s["y"] and set(s["p"].values()) <= PI


DEFAULT_CONFIG = ModelConfig(substitutions={"Data": frozenset({"d1", "d2"})})

register(ExampleEntry(
    "SendSet", sendset, "Sends the elements of a chosen set one at a time.",
    required_params=("Data",), default_config=DEFAULT_CONFIG,
    invariants={"y-typed": lambda cfg: lambda s: s["y"] <= cfg.substitution("Data")},
))

register(ExampleEntry(
    "SendSetUndo", sendset_undo, "SendSet with an Undo that removes elements of y.",
    required_params=("Data",), default_config=DEFAULT_CONFIG,
    targets={"all-chosen": lambda cfg: lambda s: s["y"] == cfg.substitution("Data")},
))

register(ExampleEntry(
    "SendSetUndoP", sendset_undo_p, "SendSetUndo with a prophecy array p over y.",
    required_params=("Data",), default_config=DEFAULT_CONFIG,
    mappings={"to-SendSet": MappingEntry("SendSet", to_sendset, "y <- {d \\in y : p[d] = \"send\"}")},
    invariants={"p-typed": p_typed},
    prophecy=lambda cfg: ProphecyCheck(sendset_undo(cfg), prophecy_shape(), PROPHECY_TABLE),
))
