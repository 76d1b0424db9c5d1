"""
SendInt: a sender repeatedly sends an integer through ``x`` and a receiver
resets it. SendInt2 decides the next integer at receive time, SendInt1 at
send time; a one-prediction prophecy variable reconciles the two.
"""
from __future__ import annotations

from ..constants import SINGLE_PREDICTION_KEY
from ..explorer import ActionProperty
from ..kernel import Env, Expr, SpecDef, State, Subaction, disj, mapping
from ..prophecy import (KEEP, REFRESH, ProphecyShape, SinglePrediction,
                        SubactionProphecy, attach_prophecy, single_prediction,
                        single_prediction_shape, single_prediction_table)
from ..utils.config_utils import ModelConfig
from ..values import NOT_INT, int_range, is_int, ordered
from .registry import ExampleEntry, MappingEntry, ProphecyCheck, register

ON = frozenset({SINGLE_PREDICTION_KEY})


def sendint1(cfg: ModelConfig) -> SpecDef:
    ints = cfg.substitution("Int")

    def init():
        yield State(x=NOT_INT)

    def send(s: State, env: Env) -> list[State]:
        return [s.update(x=i) for i in ordered(ints)]

    def rcv(s: State, env: Env) -> list[State]:
        return [s.update(x=NOT_INT)]

    return SpecDef(
        "SendInt1", ("x",), init,
        disj(Subaction("Send", send, guard=lambda s, env: s["x"] == NOT_INT),
             Subaction("Rcv", rcv, guard=lambda s, env: is_int(s["x"]))),
        symbols=frozenset({"Int"}),
    )


def sendint2(cfg: ModelConfig) -> SpecDef:
    ints = cfg.substitution("Int")

    def init():
        for i in ordered(ints):
            yield State(x=NOT_INT, z=i)

    def send(s: State, env: Env) -> list[State]:
        return [s.update(x=s["z"], z=NOT_INT)]

    def rcv(s: State, env: Env) -> list[State]:
        return [s.update(x=NOT_INT, z=i) for i in ordered(ints)]

    return SpecDef(
        "SendInt2", ("x", "z"), init,
        disj(Subaction("Send", send, guard=lambda s, env: s["x"] == NOT_INT),
             Subaction("Rcv", rcv, guard=lambda s, env: is_int(s["x"]))),
        symbols=frozenset({"Int"}),
    )


def pred_send(i, s, t, env) -> bool:
    """The Send step sends the predicted integer."""
    return t["x"] == i


PREDICTIONS = {"Send": SinglePrediction(pred_send, REFRESH), "Rcv": SinglePrediction(setp=KEEP)}


def sendint1p(cfg: ModelConfig) -> SpecDef:
    return single_prediction(sendint1(cfg), cfg.substitution("Int"), PREDICTIONS)


def _deferred(cfg: ModelConfig) -> tuple[ProphecyShape, dict[str, SubactionProphecy]]:
    shape = ProphecyShape(
        cfg.substitution("Int"),
        Expr.state(lambda s: ON if s["x"] == NOT_INT else frozenset(), reads="x", label="Dom"),
    )
    table = {
        "Send": SubactionProphecy(pred=lambda p, s, t, env: t["x"] == p[SINGLE_PREDICTION_KEY], pred_dom=ON),
        "Rcv": SubactionProphecy(),
    }
    return shape, table


def sendint1p_deferred(cfg: ModelConfig) -> SpecDef:
    shape, table = _deferred(cfg)
    return attach_prophecy(sendint1(cfg), shape, table, name="SendInt1PDeferred")


def _z_bar(s) -> object:
    return s["p"][SINGLE_PREDICTION_KEY] if s["x"] == NOT_INT else NOT_INT


def to_sendint2(cfg: ModelConfig):
    return mapping(
        "SendInt2", "to-SendInt2",
        x=Expr.state(lambda s: s["x"], reads="x"),
        z=Expr.state(_z_bar, reads="x p", label="zBar"),
    )


def send_predictable(cfg: ModelConfig) -> ActionProperty:
    """Every Send step is allowed by some prediction."""
    ints = cfg.substitution("Int")
    return ActionProperty.for_subaction(
        "Send", lambda s, t, env: any(pred_send(i, s, t, env) for i in ordered(ints)), "ExistsPredSend")


def _single_check(cfg: ModelConfig) -> ProphecyCheck:
    base = sendint1(cfg)
    return ProphecyCheck(base, single_prediction_shape(cfg.substitution("Int")),
                         single_prediction_table(base, PREDICTIONS))


def _deferred_check(cfg: ModelConfig) -> ProphecyCheck:
    shape, table = _deferred(cfg)
    return ProphecyCheck(sendint1(cfg), shape, table)


DEFAULT_CONFIG = ModelConfig(substitutions={"Int": int_range(0, 1)})

register(ExampleEntry(
    "SendInt1", sendint1, "Chooses the integer when it is sent.",
    required_params=("Int",), default_config=DEFAULT_CONFIG,
    invariants={"x-typed": lambda cfg: lambda s: s["x"] == NOT_INT or s["x"] in cfg.substitution("Int")},
    action_properties={"send-predictable": send_predictable},
))

register(ExampleEntry(
    "SendInt2", sendint2, "Chooses the next integer when the previous one is received.",
    required_params=("Int",), default_config=DEFAULT_CONFIG,
    invariants={"one-of-x-z": lambda cfg: lambda s: (s["x"] == NOT_INT) != (s["z"] == NOT_INT)},
))

register(ExampleEntry(
    "SendInt1P", sendint1p, "SendInt1 with a one-prediction prophecy variable p.",
    required_params=("Int",), default_config=DEFAULT_CONFIG,
    mappings={"to-SendInt2": MappingEntry("SendInt2", to_sendint2, "z <- IF x = NotInt THEN p ELSE NotInt")},
    prophecy=_single_check,
))

register(ExampleEntry(
    "SendInt1PDeferred", sendint1p_deferred,
    "SendInt1 with a prediction that exists only while nothing is in transit.",
    required_params=("Int",), default_config=DEFAULT_CONFIG,
    mappings={"to-SendInt2": MappingEntry("SendInt2", to_sendint2, "z <- IF x = NotInt THEN p ELSE NotInt")},
    invariants={"dom-follows-x": lambda cfg: lambda s: (s["x"] == NOT_INT) == (SINGLE_PREDICTION_KEY in s["p"])},
    prophecy=_deferred_check,
))
