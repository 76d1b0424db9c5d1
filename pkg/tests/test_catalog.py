import pytest

from auxcheck.catalog import (ExampleEntry, build, entries, get_entry,
                              get_mapping, names)
from auxcheck.catalog import checks
from auxcheck.catalog.afek import naive_istate, read_missed_write
from auxcheck.catalog.snapshot import snapshot_constants
from auxcheck.exceptions import ConfigError, ConstructionError
from auxcheck.kernel import enumerate_init
from auxcheck.utils.config_utils import ModelConfig
from auxcheck.values import NOT_MEM_VAL, NOT_REG_VAL, Fcn, int_range, seq

from . import logger

INVARIANTS = [(e.name, inv) for e in entries() for inv in e.invariants]
MAPPINGS = [(e.name, m) for e in entries() for m, entry in e.mappings.items() if not entry.expect_fail]
PROPHECIES = [e.name for e in entries() if e.prophecy is not None]
HISTORIES = [e.name for e in entries() if e.history_base is not None]


def test_catalog_names():
    assert set(names()) >= {
        "MinMax1", "MinMax2", "MinMax2H", "MinMax2HCoarse",
        "SendInt1", "SendInt2", "SendInt1P", "SendInt1PDeferred",
        "SendSet", "SendSetUndo", "SendSetUndoP", "SendSeq", "SendSeqUndo", "SendSeqUndoP",
        "Hour", "HourMin", "HourS",
        "LinearSnapshot", "NewLinearSnapshot", "NewLinearSnapshotNxt", "NewLinearSnapshotP",
        "NewLinearSnapshotPS", "AfekSimplified", "AfekSimplifiedH", "AfekSimplifiedHW",
    }
    assert names() == sorted(names())


@pytest.mark.parametrize("name", names())
def test_every_entry_builds_under_its_default_config(name):
    spec = build(name)
    assert spec.name == name, f"{name} builds a spec called {spec.name}"
    assert enumerate_init(spec, get_entry(name).config())


@pytest.mark.parametrize("name, inv", INVARIANTS)
def test_catalog_invariants_hold(name, inv):
    verdict = checks.invariant(name, inv)
    assert verdict.passed, f"{name} {inv}: {verdict.detail}"


@pytest.mark.parametrize("name, mapping_name", MAPPINGS)
def test_catalog_refinements_hold(name, mapping_name):
    verdict = checks.refinement(name, mapping_name)
    logger.info(f"{name} under {mapping_name}: {verdict.status}")
    assert verdict.passed, f"{name} under {mapping_name}: {verdict.detail}"


@pytest.mark.parametrize("name", PROPHECIES)
def test_catalog_prophecy_conditions_hold(name):
    verdict = checks.proph_conditions(name)
    assert verdict.passed, verdict.detail


@pytest.mark.parametrize("name", HISTORIES)
def test_catalog_history_projections_hold(name):
    verdict = checks.history_projection(name)
    assert verdict.passed, verdict.detail


@pytest.mark.parametrize("name", ["HourS", "NewLinearSnapshotPS"])
def test_catalog_stutter_conditions_hold(name):
    assert checks.stutter_conditions(name).passed


def test_send_predictable():
    assert checks.action_property("SendInt1", "send-predictable").passed


def test_coarse_graph_is_the_same():
    verdict = checks.same_reachable_graph("MinMax2H", "MinMax2HCoarse")
    assert verdict.passed, verdict.detail


def test_graphs_of_different_variables_are_not_compared():
    with pytest.raises(ConfigError, match="different variables"):
        checks.same_reachable_graph("MinMax2", "MinMax2H")


def test_equivalences():
    assert checks.equivalence("NewLinearSnapshot", "to-NewLinearSnapshotNxt", "to-NewLinearSnapshot").passed
    assert checks.equivalence("MinMax2H", "to-MinMax2HCoarse", "to-MinMax2H").passed
    with pytest.raises(ConfigError, match="targets"):
        checks.equivalence("MinMax2H", "to-MinMax2HCoarse", "to-MinMax1")


@pytest.mark.parametrize("name, target, length", [
    ("Hour", "h=23", 24),
    ("MinMax1", "responded-twice", 5),
    ("NewLinearSnapshot", "read-saw-write", 4),
    ("SendSetUndo", "all-chosen", 3),
    ("SendSeqUndo", "full-queue", 4),
    ("AfekSimplifiedHW", "read-missed-write", 8),
])
def test_targets_are_reachable(name, target, length):
    verdict = checks.trace_search(name, target)
    assert not verdict.passed, f"{target} should be reachable in {name}"
    assert len(verdict.trace) == length


def test_read_missed_write_trace():
    verdict = checks.trace_search("AfekSimplifiedHW", "read-missed-write")
    assert len(verdict.trace) <= 15
    actions = [step.action for step in verdict.trace]
    assert actions[0] == "Init"
    assert actions[-1] == "TryEndRd", f"the read returns last: {actions}"
    assert actions.index("Rd2") < actions.index("DoWr"), "both scans finish before the write lands"
    assert actions.index("EndWr") < actions.index("TryEndRd")
    begin_wr = next(step for step in verdict.trace if step.action == "BeginWr")
    assert begin_wr.env["cmd"] == 1
    before, last = verdict.trace[-2].state, verdict.trace[-1].state
    assert before["interface"]["r1"] == NOT_MEM_VAL
    assert last["interface"]["r1"] == Fcn({"w1": 0}), "the read returned the value from before the write"
    assert last["imem"]["w1"][1] == 1
    assert last["wrDone"]["r1"] == frozenset({"w1"})


def test_write_after_a_read_is_not_missed():
    spec = build("AfekSimplifiedHW")
    s0, = enumerate_init(spec, get_entry("AfekSimplifiedHW").config())
    target = read_missed_write(get_entry("AfekSimplifiedHW").config())
    returned = s0.update(interface=s0["interface"].set("r1", Fcn({"w1": 0})),
                         imem=s0["imem"].set("w1", seq(1, 1)), wrNum=s0["wrNum"].set("w1", 1))
    assert not target(returned), "the write was not recorded during the read"
    assert target(returned.set("wrDone", Fcn({"r1": frozenset({"w1"})})))
    assert not target(returned.update(interface=returned["interface"].set("r1", NOT_MEM_VAL),
                                      wrDone=Fcn({"r1": frozenset({"w1"})}))), "the read has not returned"


def test_naive_mapping_fails_with_two_writers():
    assert get_mapping("AfekSimplified", "naive-to-LinearSnapshot").expect_fail
    two_writers = ModelConfig(substitutions={"Writers": frozenset({"w1", "w2"})}, constraint={"MaxWrites": 1})
    verdict = checks.refinement("AfekSimplified", "naive-to-LinearSnapshot", two_writers)
    assert not verdict.passed
    assert len(verdict.trace) > 1, "the initial state maps correctly"
    assert naive_istate(verdict.trace[0].state)["r1"] != NOT_MEM_VAL


def test_missing_condition_tables_are_config_errors():
    with pytest.raises(ConfigError, match="no prophecy"):
        checks.proph_conditions("SendSet")
    with pytest.raises(ConfigError, match="no stuttering"):
        checks.stutter_conditions("Hour")
    with pytest.raises(ConfigError, match="no history"):
        checks.history_projection("MinMax2")


def test_unknown_names_are_config_errors():
    with pytest.raises(ConfigError, match="known specs"):
        get_entry("MinMax3")
    with pytest.raises(ConfigError, match="known mappings"):
        checks.refinement("MinMax1", "to-nowhere")
    with pytest.raises(ConfigError, match="invariant"):
        checks.invariant("MinMax1", "nope")
    with pytest.raises(ConfigError, match="target"):
        checks.trace_search("Hour", "h=25")


def test_required_parameters_are_checked():
    entry = ExampleEntry("NeedsBound", build=lambda cfg: None, required_params=("Bound",))
    with pytest.raises(ConfigError, match="Bound"):
        entry.config()
    assert entry.config(ModelConfig(constraint={"Bound": 1})).bound("Bound") == 1


def test_snapshot_constants_are_validated(snapshot_cfg):
    k = snapshot_constants(snapshot_cfg)
    assert len(k.mem_vals) == 2
    assert k.init_interface()["r1"] == k.init_mem
    assert k.init_interface()["w1"] == NOT_REG_VAL
    overlapping = snapshot_cfg.merged(ModelConfig(substitutions={"Writers": frozenset({"r1"})}))
    with pytest.raises(ConfigError, match="disjoint"):
        snapshot_constants(overlapping)
    bad_init = snapshot_cfg.merged(ModelConfig(parameters={"InitRegVal": 7}))
    with pytest.raises(ConfigError, match="InitRegVal"):
        snapshot_constants(bad_init)


def test_user_config_overrides_defaults():
    cfg = get_entry("SendInt1").config(ModelConfig(substitutions={"Int": int_range(0, 4)}))
    assert cfg.substitution("Int") == int_range(0, 4)
    assert len(enumerate_init(build("SendInt2", cfg), cfg)) == 5


def test_failing_stutter_constant_condition_is_a_construction_error(monkeypatch):
    monkeypatch.setattr("auxcheck.catalog.checks.stutter_constant_condition", lambda sigma, bot, decr: False)
    with pytest.raises(ConstructionError, match="sigma"):
        checks.stutter_conditions("HourS")
