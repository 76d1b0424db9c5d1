"""
MinMax: a user inputs integers and is told whether each one is the
smallest or largest seen so far. MinMax1 remembers every input, MinMax2
only the running minimum and maximum.
"""
from __future__ import annotations

from ..history import HistorySpec, attach_history
from ..kernel import (Env, Expr, SpecDef, State, Subaction, coarsen, disj,
                      identity_mapping, mapping)
from ..utils.config_utils import ModelConfig
from ..values import (INFINITY, MINUS_INFINITY, int_range, is_geq, is_leq,
                      ordered, sentinel, set_max, set_min)
from .registry import ExampleEntry, MappingEntry, register

LO = sentinel("Lo")
HI = sentinel("Hi")
BOTH = sentinel("Both")
NONE = sentinel("None")

INPUT = "input"
OUTPUT = "output"


def classify(is_max: bool, is_min: bool) -> str:
    if is_max:
        return BOTH if is_min else HI
    return LO if is_min else NONE


def _input_num(ints: frozenset[int]) -> Subaction:
    def post(s: State, env: Env) -> list[State]:
        return [s.update(turn=OUTPUT, x=i) for i in ordered(ints)]

    return Subaction("InputNum", post, guard=lambda s, env: s["turn"] == INPUT)


def minmax1(cfg: ModelConfig) -> SpecDef:
    ints = cfg.substitution("Int")

    def init():
        yield State(x=NONE, turn=INPUT, y=frozenset())

    def respond(s: State, env: Env) -> list[State]:
        x = s["x"]
        y = s["y"] | {x}
        return [s.update(turn=INPUT, y=y, x=classify(x == set_max(y), x == set_min(y)))]

    return SpecDef(
        "MinMax1", ("x", "turn", "y"), init,
        disj(_input_num(ints), Subaction("Respond", respond, guard=lambda s, env: s["turn"] == OUTPUT)),
        symbols=frozenset({"Int"}),
    )


def minmax2(cfg: ModelConfig) -> SpecDef:
    ints = cfg.substitution("Int")

    def init():
        yield State(x=NONE, turn=INPUT, min=INFINITY, max=MINUS_INFINITY)

    def respond(s: State, env: Env) -> list[State]:
        x = s["x"]
        lo = x if is_leq(x, s["min"]) else s["min"]
        hi = x if is_geq(x, s["max"]) else s["max"]
        return [s.update(turn=INPUT, min=lo, max=hi, x=classify(x == hi, x == lo))]

    return SpecDef(
        "MinMax2", ("x", "turn", "min", "max"), init,
        disj(_input_num(ints), Subaction("Respond", respond, guard=lambda s, env: s["turn"] == OUTPUT)),
        symbols=frozenset({"Int"}),
    )


def minmax_history() -> HistorySpec:
    """``h`` accumulates every integer responded to."""
    return HistorySpec(
        h_init=Expr.state(lambda s: frozenset(), reads=(), label="h init"),
        per_subaction={
            "InputNum": Expr.action(lambda s, t, env: s["h"], reads="h", primed=(), label="h' InputNum"),
            "Respond": Expr.action(lambda s, t, env: s["h"] | {s["x"]}, reads="h x", primed=(), label="h' Respond"),
        },
    )


def minmax2h(cfg: ModelConfig) -> SpecDef:
    return attach_history(minmax2(cfg), minmax_history())


def minmax2h_coarse(cfg: ModelConfig) -> SpecDef:
    """History added to the one-subaction representation of MinMax2's Next."""
    def h_next(s, t, env):
        return s["h"] if s["turn"] == INPUT else s["h"] | {s["x"]}

    hs = HistorySpec(
        h_init=Expr.state(lambda s: frozenset(), reads=(), label="h init"),
        per_subaction={"Next": Expr.action(h_next, reads="h turn x", primed=(), label="h' Next")},
    )
    return attach_history(coarsen(minmax2(cfg)), hs, name="MinMax2HCoarse")


def to_minmax2(cfg: ModelConfig):
    return mapping(
        "MinMax2", "to-MinMax2",
        x=Expr.state(lambda s: s["x"], reads="x"),
        turn=Expr.state(lambda s: s["turn"], reads="turn"),
        min=Expr.state(lambda s: INFINITY if not s["y"] else set_min(s["y"]), reads="y", label="minBar"),
        max=Expr.state(lambda s: MINUS_INFINITY if not s["y"] else set_max(s["y"]), reads="y", label="maxBar"),
    )


def h_to_minmax1(cfg: ModelConfig):
    return mapping(
        "MinMax1", "to-MinMax1",
        x=Expr.state(lambda s: s["x"], reads="x"),
        turn=Expr.state(lambda s: s["turn"], reads="turn"),
        y=Expr.state(lambda s: s["h"], reads="h"),
    )


def _respond_invariant(cfg: ModelConfig):
    """Between a Respond and the next input, ``x`` is one of the four answers."""
    return lambda s: s["turn"] == OUTPUT or s["x"] in (LO, HI, BOTH, NONE)


DEFAULT_CONFIG = ModelConfig(substitutions={"Int": int_range(-1, 1)})
_H_VARIABLES = ("x", "turn", "min", "max", "h")

register(ExampleEntry(
    "MinMax1", minmax1, "Remembers every input in y.",
    required_params=("Int",), default_config=DEFAULT_CONFIG,
    mappings={"to-MinMax2": MappingEntry("MinMax2", to_minmax2, "min/max computed from y")},
    invariants={
        "answer-typed": _respond_invariant,
        "y-subset-of-Int": lambda cfg: lambda s: s["y"] <= cfg.substitution("Int"),
    },
    targets={"responded-twice": lambda cfg: lambda s: len(s["y"]) >= 2},
))

register(ExampleEntry(
    "MinMax2", minmax2, "Keeps only the running min and max.",
    required_params=("Int",), default_config=DEFAULT_CONFIG,
    invariants={"answer-typed": _respond_invariant},
))

register(ExampleEntry(
    "MinMax2H", minmax2h, "MinMax2 with a history variable h recording past inputs.",
    required_params=("Int",), default_config=DEFAULT_CONFIG,
    mappings={
        "to-MinMax1": MappingEntry("MinMax1", h_to_minmax1, "y <- h"),
        "to-MinMax2HCoarse": MappingEntry(
            "MinMax2HCoarse", lambda cfg: identity_mapping(_H_VARIABLES, "MinMax2HCoarse", "to-MinMax2HCoarse")),
    },
    invariants={"h-bounds": lambda cfg: lambda s: not s["h"] or (s["min"] == set_min(s["h"])
                                                                 and s["max"] == set_max(s["h"]))},
    history_base=minmax2,
))

register(ExampleEntry(
    "MinMax2HCoarse", minmax2h_coarse, "MinMax2H built from a one-subaction Next.",
    required_params=("Int",), default_config=DEFAULT_CONFIG,
    mappings={
        "to-MinMax2H": MappingEntry("MinMax2H", lambda cfg: identity_mapping(_H_VARIABLES, "MinMax2H", "to-MinMax2H")),
        "to-MinMax1": MappingEntry("MinMax1", h_to_minmax1, "y <- h"),
    },
    history_base=lambda cfg: coarsen(minmax2(cfg)),
))
