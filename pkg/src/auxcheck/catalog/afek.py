"""
The simplified snapshot algorithm of Afek et al.

Each register ``imem[w]`` holds a pair of its value and the number of
times it was written. A reader scans every register twice and outputs the
values read once both scans agree; otherwise it starts over. A history
variable ``h`` recording the memory values seen during a read lets the
algorithm implement NewLinearSnapshot.
"""
from __future__ import annotations

from ..history import HistorySpec, attach_history
from ..kernel import (Env, Expr, SpecDef, State, Subaction, disj, exists,
                      mapping)
from ..utils.config_utils import ModelConfig
from ..values import (EMPTY_FCN, NOT_MEM_VAL, NOT_REG_VAL, Fcn, append,
                      const_fcn, ordered, seq, seq_len)
from .registry import ExampleEntry, MappingEntry, register
from .snapshot import DEFAULT_CONFIG, REQUIRED, SYMBOLS, snapshot_constants

VALUE = 1
COUNT = 2

VARIABLES = ("imem", "interface", "wrNum", "rdVal1", "rdVal2")


def mem_bar(s) -> Fcn:
    """The register values of ``imem``."""
    return Fcn({w: pair[VALUE] for w, pair in s["imem"].items()})


def afek_simplified(cfg: ModelConfig) -> SpecDef:
    k = snapshot_constants(cfg)
    max_writes = cfg.bound("MaxWrites")

    def init():
        yield State(
            imem=const_fcn(k.writers, seq(k.init_reg_val, 0)),
            interface=k.init_interface(),
            wrNum=const_fcn(k.writers, 0),
            rdVal1=const_fcn(k.readers, EMPTY_FCN),
            rdVal2=const_fcn(k.readers, EMPTY_FCN),
        )

    def begin_wr(s: State, env: Env) -> list[State]:
        i, cmd = env["i"], env["cmd"]
        return [s.update(wrNum=s["wrNum"].set(i, s["wrNum"][i] + 1), interface=s["interface"].set(i, cmd))]

    def do_wr(s: State, env: Env) -> list[State]:
        i = env["i"]
        return [s.update(imem=s["imem"].set(i, seq(s["interface"][i], s["wrNum"][i])))]

    def end_wr(s: State, env: Env) -> list[State]:
        return [s.update(interface=s["interface"].set(env["i"], NOT_REG_VAL))]

    def begin_rd(s: State, env: Env) -> list[State]:
        return [s.update(interface=s["interface"].set(env["i"], NOT_MEM_VAL))]

    def read(var: str):
        def post(s: State, env: Env) -> list[State]:
            i = env["i"]
            scan = s[var][i]
            return [s.set(var, s[var].set(i, scan.set(j, s["imem"][j]))) for j in ordered(k.writers - scan.domain)]
        return post

    def try_end_rd(s: State, env: Env) -> list[State]:
        i = env["i"]
        first, second = s["rdVal1"][i], s["rdVal2"][i]
        interface = s["interface"]
        if first == second:
            interface = interface.set(i, Fcn({j: pair[VALUE] for j, pair in first.items()}))
        return [s.update(interface=interface, rdVal1=s["rdVal1"].set(i, EMPTY_FCN),
                         rdVal2=s["rdVal2"].set(i, EMPTY_FCN))]

    def writing(s: State, env: Env) -> bool:
        return s["interface"][env["i"]] in k.reg_vals

    def written(s: State, env: Env) -> bool:
        return s["imem"][env["i"]][COUNT] == s["wrNum"][env["i"]]

    def reading(s: State, env: Env) -> bool:
        return s["interface"][env["i"]] == NOT_MEM_VAL

    def scanned(var: str):
        return lambda s, env: s[var][env["i"]].domain == k.writers

    readers = disj(
        Subaction("BeginRd", begin_rd, guard=lambda s, env: s["interface"][env["i"]] in k.mem_vals),
        Subaction("Rd1", read("rdVal1"), guard=reading),
        Subaction("Rd2", read("rdVal2"), guard=lambda s, env: reading(s, env) and scanned("rdVal1")(s, env)),
        Subaction("TryEndRd", try_end_rd, guard=lambda s, env: (reading(s, env) and scanned("rdVal1")(s, env)
                                                                and scanned("rdVal2")(s, env))),
    )
    writers = disj(
        exists("cmd", lambda s, env: k.reg_vals,
               Subaction("BeginWr", begin_wr, guard=lambda s, env: s["interface"][env["i"]] == NOT_REG_VAL)),
        Subaction("DoWr", do_wr, guard=lambda s, env: writing(s, env) and not written(s, env)),
        Subaction("EndWr", end_wr, guard=lambda s, env: writing(s, env) and written(s, env)),
    )
    return SpecDef(
        "AfekSimplified", VARIABLES, init,
        disj(exists("i", lambda s, env: k.readers, readers), exists("i", lambda s, env: k.writers, writers)),
        constraint=lambda s: all(n <= max_writes for n in s["wrNum"].values()),
        symbols=SYMBOLS,
    )


"""
History
"""


def _unchanged(action_id: str) -> Expr:
    return Expr.action(lambda s, t, env: s["h"], reads="h", primed=(), label=f"h' {action_id}")


def _h_do_wr(s, t, env) -> Fcn:
    mem = mem_bar(t)
    return Fcn({j: r if seq_len(r) == 0 else append(r, mem) for j, r in s["h"].items()})


def _h_try_end_rd(s, t, env) -> Fcn:
    i = env["i"]
    return s["h"].set(i, seq()) if s["rdVal1"][i] == s["rdVal2"][i] else s["h"]


def afek_history() -> HistorySpec:
    """``h[i]`` changes the way NewLinearSnapshot's ``rstate[i]`` does, with ``mem_bar`` for ``mem``."""
    return HistorySpec(
        h_init=Expr.state(lambda s: Fcn({r: seq() for r in s["rdVal1"]}), reads="rdVal1", label="h init"),
        per_subaction={
            "BeginRd": Expr.action(lambda s, t, env: s["h"].set(env["i"], seq(mem_bar(s))),
                                   reads="h imem", primed=(), label="h' BeginRd"),
            "Rd1": _unchanged("Rd1"),
            "Rd2": _unchanged("Rd2"),
            "TryEndRd": Expr.action(_h_try_end_rd, reads="h rdVal1 rdVal2", primed=(), label="h' TryEndRd"),
            "BeginWr": _unchanged("BeginWr"),
            "DoWr": Expr.action(_h_do_wr, reads="h", primed="imem", label="h' DoWr"),
            "EndWr": _unchanged("EndWr"),
        },
    )


def afek_simplified_h(cfg: ModelConfig) -> SpecDef:
    return attach_history(afek_simplified(cfg), afek_history())


def wstate_bar(s) -> Fcn:
    """NotRegVal except between a BeginWr and its DoWr, when it is the value being written."""
    return Fcn({
        w: NOT_REG_VAL if s["interface"][w] == NOT_REG_VAL or n == s["imem"][w][COUNT] else s["interface"][w]
        for w, n in s["wrNum"].items()
    })


def to_new_linear_snapshot(cfg: ModelConfig):
    return mapping(
        "NewLinearSnapshot", "to-NewLinearSnapshot",
        mem=Expr.state(mem_bar, reads="imem", label="memBar"),
        interface=Expr.state(lambda s: s["interface"], reads="interface"),
        rstate=Expr.state(lambda s: s["h"], reads="h"),
        wstate=Expr.state(wstate_bar, reads="interface wrNum imem", label="wstateBar"),
    )


def naive_istate(s) -> Fcn:
    """
    Guesses ``istate`` from the current state alone: a reader's output is
    fixed once its two scans agree.
    """
    result = dict(wstate_bar(s).items())
    for i, first in s["rdVal1"].items():
        second = s["rdVal2"][i]
        if s["interface"][i] != NOT_MEM_VAL:
            result[i] = s["interface"][i]
        elif first.domain == s["imem"].domain and first == second:
            result[i] = Fcn({j: pair[VALUE] for j, pair in first.items()})
        else:
            result[i] = NOT_MEM_VAL
    return Fcn(result)


def naive_to_linear_snapshot(cfg: ModelConfig):
    return mapping(
        "LinearSnapshot", "naive-to-LinearSnapshot",
        mem=Expr.state(mem_bar, reads="imem", label="memBar"),
        interface=Expr.state(lambda s: s["interface"], reads="interface"),
        istate=Expr.state(naive_istate, reads="interface wrNum imem rdVal1 rdVal2", label="naive istate"),
    )


"""
Write witness
"""


def _done_begin_rd(s, t, env) -> Fcn:
    return s["wrDone"].set(env["i"], frozenset())


def _done_end_wr(s, t, env) -> Fcn:
    w = env["i"]
    return Fcn({r: done | {w} if s["interface"][r] == NOT_MEM_VAL else done for r, done in s["wrDone"].items()})


def write_witness() -> HistorySpec:
    """``wrDone[i]`` is the set of writers that finished a write during reader ``i``'s latest read."""
    def unchanged(action_id: str) -> Expr:
        return Expr.action(lambda s, t, env: s["wrDone"], reads="wrDone", primed=(), label=f"wrDone' {action_id}")

    return HistorySpec(
        h_init=Expr.state(lambda s: Fcn({r: frozenset() for r in s["rdVal1"]}), reads="rdVal1",
                          label="wrDone init"),
        per_subaction={
            "BeginRd": Expr.action(_done_begin_rd, reads="wrDone", primed=(), label="wrDone' BeginRd"),
            "Rd1": unchanged("Rd1"),
            "Rd2": unchanged("Rd2"),
            "TryEndRd": unchanged("TryEndRd"),
            "BeginWr": unchanged("BeginWr"),
            "DoWr": unchanged("DoWr"),
            "EndWr": Expr.action(_done_end_wr, reads="wrDone interface", primed=(), label="wrDone' EndWr"),
        },
        h_name="wrDone",
    )


def afek_simplified_hw(cfg: ModelConfig) -> SpecDef:
    return attach_history(afek_simplified_h(cfg), write_witness(), name="AfekSimplifiedHW")


def read_missed_write(cfg: ModelConfig):
    """
    A reader has returned a snapshot that differs from the memory at a
    writer whose write finished while the read was in progress.
    """
    def holds(s) -> bool:
        mem = mem_bar(s)
        for i, done in s["wrDone"].items():
            out = s["interface"][i]
            if out != NOT_MEM_VAL and any(out[j] != mem[j] for j in done):
                return True
        return False
    return holds


AFEK_CONFIG = DEFAULT_CONFIG.merged(ModelConfig(constraint={"MaxWrites": 2}))

register(ExampleEntry(
    "AfekSimplified", afek_simplified, "The snapshot algorithm that rescans until two scans agree.",
    required_params=REQUIRED + ("MaxWrites",), default_config=AFEK_CONFIG,
    mappings={"naive-to-LinearSnapshot": MappingEntry(
        "LinearSnapshot", naive_to_linear_snapshot,
        "istate fixed when the scans agree; fails once a write lands mid-scan (needs two writers)",
        expect_fail=True)},
    invariants={"counts-bounded": lambda cfg: lambda s: all(pair[COUNT] <= s["wrNum"][w]
                                                            for w, pair in s["imem"].items())},
))

register(ExampleEntry(
    "AfekSimplifiedH", afek_simplified_h, "AfekSimplified with a history of the memory seen by each read.",
    required_params=REQUIRED + ("MaxWrites",), default_config=AFEK_CONFIG,
    mappings={"to-NewLinearSnapshot": MappingEntry(
        "NewLinearSnapshot", to_new_linear_snapshot, "mem <- memBar, rstate <- h, wstate <- wstateBar")},
    history_base=afek_simplified,
))

register(ExampleEntry(
    "AfekSimplifiedHW", afek_simplified_hw,
    "AfekSimplifiedH also recording which writes finished during each read.",
    required_params=REQUIRED + ("MaxWrites",), default_config=AFEK_CONFIG,
    mappings={"to-NewLinearSnapshot": MappingEntry(
        "NewLinearSnapshot", to_new_linear_snapshot, "as for AfekSimplifiedH; wrDone is dropped")},
    targets={"read-missed-write": read_missed_write},
    history_base=afek_simplified_h,
))
