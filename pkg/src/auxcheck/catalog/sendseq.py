"""
SendSeq: values appended to a queue ``y`` are sent from its head.
SendSeqUndo may remove any element; a prophecy variable over the queue's
positions predicts which elements will be sent.
"""
from __future__ import annotations

from ..kernel import (Env, Expr, SpecDef, State, Subaction, disj, exists,
                      mapping)
from ..prophecy import ProphecyShape, SubactionProphecy, attach_prophecy
from ..utils.config_utils import ModelConfig
from ..values import (NON_DATA, Fcn, append, head, int_range, ordered,
                      remove_elt_from, seq, seq_items, seq_len, tail)
from .registry import ExampleEntry, MappingEntry, ProphecyCheck, register

SEND = "send"
UNDO = "undo"
PI = frozenset({SEND, UNDO})


def _init():
    yield State(x=NON_DATA, y=seq())


def _next(data: frozenset) -> tuple[Subaction, Subaction, Subaction]:
    def choose(s: State, env: Env) -> list[State]:
        return [s.update(y=append(s["y"], d)) for d in ordered(data)]

    def send(s: State, env: Env) -> list[State]:
        return [s.update(x=head(s["y"]), y=tail(s["y"]))]

    def rcv(s: State, env: Env) -> list[State]:
        return [s.update(x=NON_DATA)]

    return (
        Subaction("Choose", choose),
        Subaction("Send", send, guard=lambda s, env: s["x"] == NON_DATA and seq_len(s["y"]) > 0),
        Subaction("Rcv", rcv, guard=lambda s, env: s["x"] in data),
    )


def _bounded(cfg: ModelConfig):
    max_len = cfg.bound("MaxLen")
    return lambda s: seq_len(s["y"]) <= max_len


def sendseq(cfg: ModelConfig) -> SpecDef:
    return SpecDef("SendSeq", ("x", "y"), _init, disj(*_next(cfg.substitution("Data"))),
                   constraint=_bounded(cfg), symbols=frozenset({"Data"}))


def undo(s: State, env: Env) -> list[State]:
    return [s.update(y=remove_elt_from(env["i"], s["y"]))]


def positions(s: State, env: Env) -> frozenset[int]:
    return int_range(1, seq_len(s["y"]))


def sendseq_undo(cfg: ModelConfig) -> SpecDef:
    return SpecDef(
        "SendSeqUndo", ("x", "y"), _init,
        disj(*_next(cfg.substitution("Data")), exists("i", positions, Subaction("Undo", undo))),
        constraint=_bounded(cfg), symbols=frozenset({"Data"}),
    )


def prophecy_shape() -> ProphecyShape:
    return ProphecyShape(PI, Expr.state(lambda s: int_range(1, seq_len(s["y"])), reads="y", label="Dom"))


def _dom_inj_send(s, t, env) -> Fcn:
    return Fcn({i: i - 1 for i in range(2, seq_len(s["y"]) + 1)})


def _dom_inj_undo(s, t, env) -> Fcn:
    i = env["i"]
    return Fcn({j: j if j < i else j - 1 for j in range(1, seq_len(s["y"]) + 1) if j != i})


PROPHECY_TABLE = {
    "Choose": SubactionProphecy(),
    "Send": SubactionProphecy(pred=lambda p, s, t, env: p[1] == SEND, dom_inj=_dom_inj_send,
                              pred_dom=frozenset({1})),
    "Rcv": SubactionProphecy(),
    "Undo": SubactionProphecy(pred=lambda p, s, t, env: p[env["i"]] == UNDO, dom_inj=_dom_inj_undo,
                              pred_dom=lambda s, t, env: {env["i"]}),
}


def sendseq_undo_p(cfg: ModelConfig) -> SpecDef:
    return attach_prophecy(sendseq_undo(cfg), prophecy_shape(), PROPHECY_TABLE)


def y_bar(s) -> Fcn:
    """The subsequence of ``y`` whose positions ``p`` predicts will be sent."""
    p = s["p"]
    return seq(*(d for i, d in enumerate(seq_items(s["y"]), start=1) if p[i] == SEND))


def to_sendseq(cfg: ModelConfig):
    return mapping(
        "SendSeq", "to-SendSeq",
        x=Expr.state(lambda s: s["x"], reads="x"),
        y=Expr.state(y_bar, reads="y p", label="yBar"),
    )


DEFAULT_CONFIG = ModelConfig(substitutions={"Data": frozenset({"d1", "d2"})}, constraint={"MaxLen": 3})

register(ExampleEntry(
    "SendSeq", sendseq, "Sends the elements of a queue in order.",
    required_params=("Data", "MaxLen"), default_config=DEFAULT_CONFIG,
    invariants={"y-is-seq": lambda cfg: lambda s: seq_len(s["y"]) >= 0},
))

register(ExampleEntry(
    "SendSeqUndo", sendseq_undo, "SendSeq with an Undo removing any element of y.",
    required_params=("Data", "MaxLen"), default_config=DEFAULT_CONFIG,
    targets={"full-queue": lambda cfg: lambda s: seq_len(s["y"]) == cfg.bound("MaxLen")},
))

register(ExampleEntry(
    "SendSeqUndoP", sendseq_undo_p, "SendSeqUndo with a prophecy over queue positions.",
    required_params=("Data", "MaxLen"), default_config=DEFAULT_CONFIG,
    mappings={"to-SendSeq": MappingEntry("SendSeq", to_sendseq, "y <- yBar")},
    invariants={"p-typed": lambda cfg: lambda s: s["p"].domain == s["y"].domain and set(s["p"].values()) <= PI},
    prophecy=lambda cfg: ProphecyCheck(sendseq_undo(cfg), prophecy_shape(), PROPHECY_TABLE),
))
