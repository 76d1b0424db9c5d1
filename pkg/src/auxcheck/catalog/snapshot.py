"""
Snapshot objects.

``LinearSnapshot`` is the linearizable snapshot memory. ``NewLinearSnapshot``
lets a reader wait as long as possible before choosing its output: ``rstate``
remembers every memory value seen during the read and ``EndRd`` picks one.
Adding a prophecy (which element will be picked) and then stuttering steps
(when the pick is fixed) gives ``NewLinearSnapshotPS``, which implements
``LinearSnapshot`` under ``istate_bar``.
"""
from __future__ import annotations

from typing import Any, NamedTuple

from ..constants import STUTTER_CTXT, STUTTER_ID, STUTTER_VAL
from ..exceptions import ConfigError
from ..kernel import (Env, Expr, SpecDef, State, Subaction, disj, exists,
                      identity_mapping, mapping)
from ..prophecy import ProphecyShape, SubactionProphecy, attach_prophecy
from ..stuttering import (MAY_POST, TOP, StutterOrder, StutterWrap,
                          attach_stuttering, binder, stutter_invariant)
from ..utils.config_utils import ModelConfig
from ..values import (NOT_MEM_VAL, NOT_REG_VAL, Fcn, append, const_fcn,
                      fcn_space, int_range, ordered, record, seq,
                      seq_len, subset_of)
from .linearizability import DataObject, linearizability
from .registry import (ExampleEntry, MappingEntry, ProphecyCheck,
                       StutterCheck, register)

SYMBOLS = frozenset({"Readers", "Writers", "RegVals"})
REQUIRED = ("Readers", "Writers", "RegVals", "InitRegVal")


class SnapshotConstants(NamedTuple):
    readers: frozenset[Any]
    writers: frozenset[Any]
    reg_vals: frozenset[Any]
    init_reg_val: Any
    mem_vals: frozenset[Fcn]
    init_mem: Fcn

    @property
    def procs(self) -> frozenset[Any]:
        return self.readers | self.writers

    def init_interface(self) -> Fcn:
        return Fcn({i: self.init_mem if i in self.readers else NOT_REG_VAL for i in self.procs})


def snapshot_constants(cfg: ModelConfig) -> SnapshotConstants:
    readers = cfg.substitution("Readers")
    writers = cfg.substitution("Writers")
    reg_vals = cfg.substitution("RegVals")
    init_reg_val = cfg.parameter("InitRegVal")
    if readers & writers:
        raise ConfigError(f"Readers and Writers must be disjoint, both contain {ordered(readers & writers)}")
    if init_reg_val not in reg_vals:
        raise ConfigError(f"InitRegVal {init_reg_val!r} is not in RegVals")
    return SnapshotConstants(readers, writers, reg_vals, init_reg_val,
                             frozenset(fcn_space(writers, reg_vals)), const_fcn(writers, init_reg_val))


def snapshot_object(k: SnapshotConstants) -> DataObject:
    def apply(i, cmd, obj):
        if i in k.readers:
            return record(newState=obj, output=obj)
        return record(newState=obj.set(i, cmd), output=NOT_REG_VAL)

    return DataObject(
        procs=k.procs,
        commands=lambda i: frozenset({NOT_MEM_VAL}) if i in k.readers else k.reg_vals,
        outputs=lambda i: k.mem_vals if i in k.readers else frozenset({NOT_REG_VAL}),
        init_output=lambda i: k.init_mem if i in k.readers else NOT_REG_VAL,
        init_obj=k.init_mem,
        apply=apply,
    )


def linear_snapshot(cfg: ModelConfig) -> SpecDef:
    return linearizability("LinearSnapshot", snapshot_object(snapshot_constants(cfg)), object_var="mem",
                           symbols=SYMBOLS)


"""
NewLinearSnapshot
"""


def _rstate_bounded(cfg: ModelConfig):
    max_len = cfg.bound("MaxRStateLen")
    return lambda s: all(seq_len(r) <= max_len for r in s["rstate"].values())


def _nls_actions(k: SnapshotConstants) -> dict[str, Subaction]:
    def begin_rd(s: State, env: Env) -> list[State]:
        i = env["i"]
        return [s.update(interface=s["interface"].set(i, NOT_MEM_VAL), rstate=s["rstate"].set(i, seq(s["mem"])))]

    def begin_wr(s: State, env: Env) -> list[State]:
        i, cmd = env["i"], env["cmd"]
        return [s.update(interface=s["interface"].set(i, cmd), wstate=s["wstate"].set(i, cmd))]

    def do_wr(s: State, env: Env) -> list[State]:
        i = env["i"]
        mem = s["mem"].set(i, s["interface"][i])
        rstate = Fcn({j: r if seq_len(r) == 0 else append(r, mem) for j, r in s["rstate"].items()})
        return [s.update(mem=mem, wstate=s["wstate"].set(i, NOT_REG_VAL), rstate=rstate)]

    def end_rd(s: State, env: Env) -> list[State]:
        i = env["i"]
        r = s["rstate"][i]
        return [s.update(interface=s["interface"].set(i, r[j]), rstate=s["rstate"].set(i, seq()))
                for j in range(1, seq_len(r) + 1)]

    def end_wr(s: State, env: Env) -> list[State]:
        i = env["i"]
        return [s.update(interface=s["interface"].set(i, s["wstate"][i]))]

    def writing(s: State, env: Env) -> bool:
        return s["interface"][env["i"]] in k.reg_vals

    return {
        "BeginRd": Subaction("BeginRd", begin_rd, guard=lambda s, env: s["interface"][env["i"]] in k.mem_vals),
        "BeginWr": Subaction("BeginWr", begin_wr, guard=lambda s, env: s["interface"][env["i"]] == NOT_REG_VAL),
        "DoWr": Subaction("DoWr", do_wr,
                          guard=lambda s, env: writing(s, env) and s["wstate"][env["i"]] == s["interface"][env["i"]]),
        "EndRd": Subaction("EndRd", end_rd, guard=lambda s, env: s["interface"][env["i"]] == NOT_MEM_VAL),
        "EndWr": Subaction("EndWr", end_wr,
                           guard=lambda s, env: writing(s, env) and s["wstate"][env["i"]] == NOT_REG_VAL),
    }


def i_end_rd(s: State, env: Env) -> list[State]:
    """``EndRd(i)`` outputting the ``j``-th element of ``rstate[i]``."""
    i, j = env["i"], env["j"]
    return [s.update(interface=s["interface"].set(i, s["rstate"][i][j]), rstate=s["rstate"].set(i, seq()))]


def _read_positions(s: State, env: Env) -> frozenset[int]:
    return int_range(1, seq_len(s["rstate"][env["i"]]))


def _new_linear_snapshot(cfg: ModelConfig, name: str, split_end_rd: bool) -> SpecDef:
    k = snapshot_constants(cfg)
    actions = _nls_actions(k)

    def init():
        yield State(mem=k.init_mem, interface=k.init_interface(),
                    rstate=const_fcn(k.readers, seq()), wstate=const_fcn(k.writers, NOT_REG_VAL))

    end_rd = actions["EndRd"]
    if split_end_rd:
        end_rd = exists("j", _read_positions, Subaction("IEndRd", i_end_rd, guard=end_rd.guard))
    next_action = disj(
        exists("i", lambda s, env: k.readers, disj(actions["BeginRd"], end_rd)),
        exists("i", lambda s, env: k.writers, disj(
            exists("cmd", lambda s, env: k.reg_vals, actions["BeginWr"]), actions["DoWr"], actions["EndWr"])),
    )
    return SpecDef(name, ("mem", "interface", "rstate", "wstate"), init, next_action,
                   constraint=_rstate_bounded(cfg), symbols=SYMBOLS)


def new_linear_snapshot(cfg: ModelConfig) -> SpecDef:
    return _new_linear_snapshot(cfg, "NewLinearSnapshot", split_end_rd=False)


def new_linear_snapshot_nxt(cfg: ModelConfig) -> SpecDef:
    """NewLinearSnapshot with ``EndRd(i)`` split into ``\\E j : IEndRd(i, j)``."""
    return _new_linear_snapshot(cfg, "NewLinearSnapshotNxt", split_end_rd=True)


"""
Prophecy: p[i] predicts which element of rstate[i] reader i will output
"""


def prophecy_shape(cfg: ModelConfig) -> ProphecyShape:
    readers = cfg.substitution("Readers")
    return ProphecyShape(
        int_range(1, cfg.bound("MaxRStateLen")),
        Expr.state(lambda s: frozenset(r for r in readers if seq_len(s["rstate"][r]) > 0), reads="rstate", label="Dom"),
    )


PROPHECY_TABLE = {
    "BeginRd": SubactionProphecy(),
    "IEndRd": SubactionProphecy(pred=lambda p, s, t, env: env["j"] == p[env["i"]],
                                pred_dom=lambda s, t, env: {env["i"]}),
    "BeginWr": SubactionProphecy(),
    "DoWr": SubactionProphecy(),
    "EndWr": SubactionProphecy(),
}


def new_linear_snapshot_p(cfg: ModelConfig) -> SpecDef:
    return attach_prophecy(new_linear_snapshot_nxt(cfg), prophecy_shape(cfg), PROPHECY_TABLE,
                           name="NewLinearSnapshotP")


"""
Stuttering: one step after a BeginRd that will return the current memory,
one step per reader whose output a DoWr has just fixed
"""


def _remove_chosen(readers: frozenset[Any]) -> frozenset[Any]:
    return readers - {ordered(readers)[0]}


def _fixed_by_write(s: State, t: State, env: Env) -> frozenset[Any]:
    return frozenset(j for j, r in s["rstate"].items()
                     if seq_len(r) > 0 and s["p"][j] == seq_len(t["rstate"][j]))


def begin_rd_order() -> StutterOrder:
    return StutterOrder(int_range(0, 1), 0, lambda j: j - 1,
                        init_val=lambda s, t, env: 1 if t["p"][env["i"]] == 1 else 0)


def do_wr_order(readers: frozenset[Any]) -> StutterOrder:
    return StutterOrder(subset_of(readers), frozenset(), _remove_chosen, init_val=_fixed_by_write)


def stutter_table(cfg: ModelConfig) -> dict[str, StutterWrap]:
    readers = cfg.substitution("Readers")
    return {
        "BeginRd": StutterWrap(MAY_POST, "BeginRd", begin_rd_order(), context=binder("i")),
        "DoWr": StutterWrap(MAY_POST, "DoWr", do_wr_order(readers), context=binder("i")),
    }


def new_linear_snapshot_ps(cfg: ModelConfig) -> SpecDef:
    return attach_stuttering(new_linear_snapshot_p(cfg), stutter_table(cfg), name="NewLinearSnapshotPS")


def istate_bar(s) -> Fcn:
    """The ``istate`` of LinearSnapshot simulated by NewLinearSnapshotPS."""
    st = s["s"]
    result = dict(s["wstate"].items())
    for i, r in s["rstate"].items():
        if seq_len(r) == 0:
            result[i] = s["interface"][i]
            continue
        pick = s["p"][i]
        if pick == 1:
            waiting = st != TOP and st[STUTTER_ID] == "BeginRd" and st[STUTTER_CTXT] == i
            result[i] = NOT_MEM_VAL if waiting else r[1]
        elif pick > seq_len(r) or (st != TOP and st[STUTTER_ID] == "DoWr" and i in st[STUTTER_VAL]):
            result[i] = NOT_MEM_VAL
        else:
            result[i] = r[pick]
    return Fcn(result)


def to_linear_snapshot(cfg: ModelConfig):
    return mapping(
        "LinearSnapshot", "to-LinearSnapshot",
        mem=Expr.state(lambda s: s["mem"], reads="mem"),
        interface=Expr.state(lambda s: s["interface"], reads="interface"),
        istate=Expr.state(istate_bar, reads="interface rstate wstate p s", label="istateBar"),
    )


DEFAULT_CONFIG = ModelConfig(
    substitutions={"Readers": frozenset({"r1"}), "Writers": frozenset({"w1"}), "RegVals": int_range(0, 1)},
    parameters={"InitRegVal": 0},
    constraint={"MaxRStateLen": 2},
)
_NLS_VARIABLES = ("mem", "interface", "rstate", "wstate")


def _reading_consistent(cfg: ModelConfig):
    """A reader is reading exactly when its interface holds NotMemVal."""
    return lambda s: all((s["interface"][i] == NOT_MEM_VAL) == (seq_len(r) > 0) for i, r in s["rstate"].items())


register(ExampleEntry(
    "LinearSnapshot", linear_snapshot, "The linearizable snapshot memory.",
    required_params=REQUIRED, default_config=DEFAULT_CONFIG,
    invariants={"mem-typed": lambda cfg: lambda s: s["mem"] in snapshot_constants(cfg).mem_vals},
))

register(ExampleEntry(
    "NewLinearSnapshot", new_linear_snapshot, "Snapshot whose reads choose their output as late as possible.",
    required_params=REQUIRED + ("MaxRStateLen",), default_config=DEFAULT_CONFIG,
    mappings={"to-NewLinearSnapshotNxt": MappingEntry(
        "NewLinearSnapshotNxt",
        lambda cfg: identity_mapping(_NLS_VARIABLES, "NewLinearSnapshotNxt", "to-NewLinearSnapshotNxt"))},
    invariants={"reading-consistent": _reading_consistent},
    targets={"read-saw-write": lambda cfg: lambda s: any(seq_len(r) >= 2 for r in s["rstate"].values())},
))

register(ExampleEntry(
    "NewLinearSnapshotNxt", new_linear_snapshot_nxt, "NewLinearSnapshot with EndRd split by output position.",
    required_params=REQUIRED + ("MaxRStateLen",), default_config=DEFAULT_CONFIG,
    mappings={"to-NewLinearSnapshot": MappingEntry(
        "NewLinearSnapshot",
        lambda cfg: identity_mapping(_NLS_VARIABLES, "NewLinearSnapshot", "to-NewLinearSnapshot"))},
))

register(ExampleEntry(
    "NewLinearSnapshotP", new_linear_snapshot_p, "NewLinearSnapshot with a prophecy of each read's output.",
    required_params=REQUIRED + ("MaxRStateLen",), default_config=DEFAULT_CONFIG,
    invariants={"p-domain": lambda cfg: lambda s: s["p"].domain == prophecy_shape(cfg).domain_at(s)},
    prophecy=lambda cfg: ProphecyCheck(new_linear_snapshot_nxt(cfg), prophecy_shape(cfg), PROPHECY_TABLE),
))

register(ExampleEntry(
    "NewLinearSnapshotPS", new_linear_snapshot_ps, "NewLinearSnapshotP with stuttering steps for the reads.",
    required_params=REQUIRED + ("MaxRStateLen",), default_config=DEFAULT_CONFIG,
    mappings={"to-LinearSnapshot": MappingEntry("LinearSnapshot", to_linear_snapshot, "istate <- istateBar")},
    invariants={"stutter-typed": lambda cfg: stutter_invariant(stutter_table(cfg))},
    prophecy=lambda cfg: ProphecyCheck(new_linear_snapshot_nxt(cfg), prophecy_shape(cfg), PROPHECY_TABLE),
    stuttering=lambda cfg: StutterCheck(new_linear_snapshot_p(cfg), stutter_table(cfg)),
))

