"""
Clocks: an hour clock, an hour-minute clock, and the hour clock with a
stuttering variable that makes it implement the hour-minute clock.
"""
from __future__ import annotations

from ..constants import STUTTER_VAL
from ..kernel import Env, Expr, SpecDef, State, Subaction, mapping
from ..stuttering import PRE, TOP, StutterOrder, StutterWrap, attach_stuttering, stutter_invariant
from ..utils.config_utils import ModelConfig
from ..values import int_range
from .registry import ExampleEntry, MappingEntry, StutterCheck, register

HOURS = 24
MINUTES = 60


def hour(cfg: ModelConfig) -> SpecDef:
    def init():
        yield State(h=0)

    def tick(s: State, env: Env) -> list[State]:
        return [s.update(h=(s["h"] + 1) % HOURS)]

    return SpecDef("Hour", ("h",), init, Subaction("Next", tick))


def hour_min(cfg: ModelConfig) -> SpecDef:
    def init():
        yield State(h=0, m=0)

    def tick(s: State, env: Env) -> list[State]:
        m = (s["m"] + 1) % MINUTES
        h = (s["h"] + 1) % HOURS if m == 0 else s["h"]
        return [s.update(h=h, m=m)]

    return SpecDef("HourMin", ("h", "m"), init, Subaction("Next", tick))


# 59 stuttering steps before each hour tick, counting the minutes up
MINUTE_ORDER = StutterOrder(
    sigma=int_range(1, MINUTES - 1),
    bot=MINUTES - 1,
    decr=lambda j: j + 1,
    init_val=lambda s, t, env: 1,
)

STUTTER_TABLE = {"Next": StutterWrap(PRE, "Next", MINUTE_ORDER, enabled=lambda s, env: True)}


def hour_s(cfg: ModelConfig) -> SpecDef:
    return attach_stuttering(hour(cfg), STUTTER_TABLE)


def _m_bar(s) -> int:
    st = s["s"]
    return 0 if st == TOP else st[STUTTER_VAL]


def to_hour_min(cfg: ModelConfig):
    return mapping(
        "HourMin", "to-HourMin",
        h=Expr.state(lambda s: s["h"], reads="h"),
        m=Expr.state(_m_bar, reads="s", label="mBar"),
    )


register(ExampleEntry(
    "Hour", hour, "A clock displaying the hour.",
    invariants={"h-in-range": lambda cfg: lambda s: 0 <= s["h"] < HOURS},
    targets={"h=23": lambda cfg: lambda s: s["h"] == HOURS - 1},
))

register(ExampleEntry(
    "HourMin", hour_min, "A clock displaying hours and minutes.",
    invariants={"m-in-range": lambda cfg: lambda s: 0 <= s["m"] < MINUTES},
))

register(ExampleEntry(
    "HourS", hour_s, "Hour with 59 stuttering steps before every tick.",
    mappings={"to-HourMin": MappingEntry("HourMin", to_hour_min, "m <- IF s = top THEN 0 ELSE s.val")},
    invariants={
        "h-in-range": lambda cfg: lambda s: 0 <= s["h"] < HOURS,
        "stutter-typed": lambda cfg: stutter_invariant(STUTTER_TABLE),
    },
    stuttering=lambda cfg: StutterCheck(hour(cfg), STUTTER_TABLE),
))
