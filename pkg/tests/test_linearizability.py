import logging

import pytest

from auxcheck.catalog.linearizability import (BEGIN_OP, DO_OP, END_OP,
                                              DataObject, linear_assumptions_hold,
                                              linearizability, obj_values)
from auxcheck.explorer import check_invariant, explore, find_trace
from auxcheck.utils.config_utils import ModelConfig
from auxcheck.values import int_range, record

CFG = ModelConfig()
PROCS = frozenset({"p1", "p2"})
INC = "inc"


def saturating_counter(top: int = 3, output_offset: int = 0) -> DataObject:
    def apply(i, cmd, obj):
        new = min(obj + 1, top)
        return record(newState=new, output=new + output_offset)

    return DataObject(
        procs=PROCS,
        commands=lambda i: frozenset({INC}),
        outputs=lambda i: int_range(0, top),
        init_output=lambda i: 0,
        init_obj=0,
        apply=apply,
    )


@pytest.fixture
def counter_obj():
    yield saturating_counter()


def test_obj_values_reaches_fixpoint(counter_obj):
    assert obj_values(counter_obj) == int_range(0, 3)
    assert linear_assumptions_hold(counter_obj, obj_values(counter_obj)) == []


def test_obj_values_cut_off_warns(caplog):
    unbounded = DataObject(PROCS, lambda i: frozenset({INC}), lambda i: frozenset({"ok"}), lambda i: "ok", 0,
                           lambda i, cmd, obj: record(newState=obj + 1, output="ok"))
    with caplog.at_level(logging.WARNING, logger="auxcheck"):
        values = obj_values(unbounded, max_depth=5)
    assert values == int_range(0, 5)
    assert "cut off" in caplog.text


def test_violated_assumptions_are_named():
    bad = saturating_counter(output_offset=10)
    violated = linear_assumptions_hold(bad, obj_values(bad))
    assert violated, "outputs outside Outputs(i) must be reported"
    assert all("Outputs" in v for v in violated)


def test_overlapping_commands_and_outputs_are_reported():
    obj = DataObject(PROCS, lambda i: frozenset({0}), lambda i: frozenset({0}), lambda i: 0, 0,
                     lambda i, cmd, st: record(newState=st, output=0))
    assert any("overlap" in v for v in linear_assumptions_hold(obj, obj_values(obj)))


def test_linearizability_spec_shape(counter_obj):
    spec = linearizability("LinearCounter", counter_obj, object_var="count")
    assert spec.variables == ("count", "interface", "istate")
    assert [leaf.id for leaf in spec.subactions] == [BEGIN_OP, DO_OP, END_OP]
    assert [leaf.binder_names for leaf in spec.subactions] == [("i", "cmd"), ("i",), ("i",)]


def test_every_operation_takes_effect_once(counter_obj):
    spec = linearizability("LinearCounter", counter_obj, object_var="count")
    graph = explore(spec, CFG)
    for tr in graph.transitions:
        changed = tr.source["count"] != tr.target["count"]
        assert not changed or tr.action == DO_OP, f"{tr.action} changed the object"

    def consistent(s):
        return all(s["istate"][i] == s["interface"][i] or s["istate"][i] in int_range(0, 3) for i in PROCS)

    assert check_invariant(spec, CFG, consistent).passed


def test_concurrent_operations_are_reachable(counter_obj):
    spec = linearizability("LinearCounter", counter_obj)
    both_pending = find_trace(spec, CFG, lambda s: all(s["interface"][i] == INC for i in PROCS))
    assert not both_pending.passed
    assert [step.action for step in both_pending.trace] == ["Init", BEGIN_OP, BEGIN_OP]
