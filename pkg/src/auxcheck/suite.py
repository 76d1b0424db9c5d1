"""
The acceptance table: every theorem of the catalog as a named check with
its expected outcome.
"""
from __future__ import annotations

from collections.abc import Callable, Iterable
from typing import NamedTuple

from . import logger
from .catalog import checks
from .explorer import FAIL, PASS, Verdict
from .utils.config_utils import ModelConfig
from .values import int_range

Runner = Callable[[int, int | None], Verdict]


class SuiteCase(NamedTuple):
    name: str
    run: Runner
    expected: str = PASS
    long: bool = False


class SuiteResult(NamedTuple):
    case: SuiteCase
    verdict: Verdict

    @property
    def as_expected(self) -> bool:
        return self.verdict.status == self.case.expected


def _snapshot(readers: int, writers: int, **constraint: int) -> ModelConfig:
    return ModelConfig(
        substitutions={
            "Readers": frozenset(f"r{n}" for n in range(1, readers + 1)),
            "Writers": frozenset(f"w{n}" for n in range(1, writers + 1)),
            "RegVals": int_range(0, 1),
        },
        parameters={"InitRegVal": 0},
        constraint=constraint,
    )


MINMAX = ModelConfig(substitutions={"Int": int_range(-2, 2)})
SENDINT = ModelConfig(substitutions={"Int": int_range(0, 2)})
SENDSET = ModelConfig(substitutions={"Data": frozenset({"d1", "d2", "d3"})})
SENDSEQ = ModelConfig(substitutions={"Data": frozenset({"d1", "d2"})}, constraint={"MaxLen": 3})
SNAPSHOT = _snapshot(1, 2, MaxRStateLen=3, MaxWrites=2)
AFEK = _snapshot(1, 2, MaxWrites=2, MaxRStateLen=3)
AFEK_SMALL = _snapshot(1, 1, MaxWrites=2, MaxRStateLen=3)
AFEK_LONG = _snapshot(2, 2, MaxWrites=3, MaxRStateLen=4)


def _case(name: str, check: Callable[..., Verdict], *args: str, cfg: ModelConfig | None = None,
          expected: str = PASS, long: bool = False) -> SuiteCase:
    def run(workers: int, state_cap: int | None) -> Verdict:
        return check(*args, cfg=cfg, workers=workers, state_cap=state_cap)
    return SuiteCase(name, run, expected, long)


CASES: tuple[SuiteCase, ...] = (
    _case("MinMax1 => MinMax2", checks.refinement, "MinMax1", "to-MinMax2", cfg=MINMAX),
    _case("MinMax2H => MinMax1", checks.refinement, "MinMax2H", "to-MinMax1", cfg=MINMAX),
    _case("MinMax2H projects onto MinMax2", checks.history_projection, "MinMax2H", cfg=MINMAX),
    _case("MinMax2H coarse graph", checks.same_reachable_graph, "MinMax2H", "MinMax2HCoarse", cfg=MINMAX),
    _case("MinMax2H <=> MinMax2HCoarse", checks.equivalence, "MinMax2H", "to-MinMax2HCoarse", "to-MinMax2H",
          cfg=MINMAX),
    _case("SendInt1 predictable", checks.action_property, "SendInt1", "send-predictable", cfg=SENDINT),
    _case("SendInt1P conditions", checks.proph_conditions, "SendInt1P", cfg=SENDINT),
    _case("SendInt1P => SendInt2", checks.refinement, "SendInt1P", "to-SendInt2", cfg=SENDINT),
    _case("SendInt1PDeferred => SendInt2", checks.refinement, "SendInt1PDeferred", "to-SendInt2", cfg=SENDINT),
    _case("SendSetUndoP conditions", checks.proph_conditions, "SendSetUndoP", cfg=SENDSET),
    _case("SendSetUndoP p typed", checks.invariant, "SendSetUndoP", "p-typed", cfg=SENDSET),
    _case("SendSetUndoP => SendSet", checks.refinement, "SendSetUndoP", "to-SendSet", cfg=SENDSET),
    _case("SendSeqUndoP conditions", checks.proph_conditions, "SendSeqUndoP", cfg=SENDSEQ),
    _case("SendSeqUndoP => SendSeq", checks.refinement, "SendSeqUndoP", "to-SendSeq", cfg=SENDSEQ),
    _case("HourS stutter conditions", checks.stutter_conditions, "HourS"),
    _case("HourS => HourMin", checks.refinement, "HourS", "to-HourMin"),
    _case("NewLinearSnapshot <=> Nxt", checks.equivalence, "NewLinearSnapshot", "to-NewLinearSnapshotNxt",
          "to-NewLinearSnapshot", cfg=SNAPSHOT),
    _case("NewLinearSnapshotPS prophecy conditions", checks.proph_conditions, "NewLinearSnapshotPS", cfg=SNAPSHOT),
    _case("NewLinearSnapshotPS stutter conditions", checks.stutter_conditions, "NewLinearSnapshotPS", cfg=SNAPSHOT),
    _case("NewLinearSnapshotPS => LinearSnapshot", checks.refinement, "NewLinearSnapshotPS", "to-LinearSnapshot",
          cfg=SNAPSHOT),
    _case("AfekSimplifiedH projects onto AfekSimplified", checks.history_projection, "AfekSimplifiedH",
          cfg=AFEK_SMALL),
    _case("AfekSimplifiedH => NewLinearSnapshot", checks.refinement, "AfekSimplifiedH", "to-NewLinearSnapshot",
          cfg=AFEK),
    _case("AfekSimplified naive mapping", checks.refinement, "AfekSimplified", "naive-to-LinearSnapshot",
          cfg=_snapshot(1, 2, MaxWrites=1, MaxRStateLen=3), expected=FAIL),
    _case("Read misses a completed write", checks.trace_search, "AfekSimplifiedHW", "read-missed-write",
          cfg=AFEK_SMALL, expected=FAIL),
    _case("AfekSimplifiedH => NewLinearSnapshot, two readers", checks.refinement, "AfekSimplifiedH",
          "to-NewLinearSnapshot", cfg=AFEK_LONG, long=True),
)


def select(long: bool = False, names: Iterable[str] | None = None) -> list[SuiteCase]:
    wanted = set(names) if names is not None else None
    return [c for c in CASES if (long or not c.long) and (wanted is None or c.name in wanted)]


def run_suite(long: bool = False, workers: int = 1, state_cap: int | None = None,
              names: Iterable[str] | None = None) -> list[SuiteResult]:
    results = []
    for case in select(long, names):
        logger.info(f"Suite case {case.name}: expecting {case.expected}")
        result = SuiteResult(case, case.run(workers, state_cap))
        if not result.as_expected:
            logger.error(f"Suite case {case.name}: expected {case.expected}, got {result.verdict.status}")
        results.append(result)
    return results
