import pytest

from auxcheck.exceptions import ResourceError
from auxcheck.explorer import (FAIL, PASS, ActionProperty, TraceStep,
                               Verdict, check_action_property,
                               check_equivalence, check_invariant,
                               check_projection, check_refinement, explore,
                               find_trace, replay_trace)
from auxcheck.kernel import (Expr, SpecDef, State, Subaction, disj, exists,
                             identity_mapping, mapping)
from auxcheck.utils.config_utils import ModelConfig
from auxcheck.values import Fcn

from . import logger

CFG = ModelConfig()


def counters(names=("a", "b"), limit: int = 2) -> SpecDef:
    zero = Fcn({n: 0 for n in names})

    def inc(s, env):
        return [s.update(c=s["c"].set(env["i"], s["c"][env["i"]] + 1))]

    return SpecDef(
        "Counters", ("c",), lambda: [State(c=zero)],
        disj(exists("i", lambda s, env: frozenset(names),
                    Subaction("Inc", inc, guard=lambda s, env: s["c"][env["i"]] < limit)),
             Subaction("Reset", lambda s, env: [s.update(c=zero)])),
    )


def total(top: int = 4) -> SpecDef:
    return SpecDef(
        "Total", ("t",), lambda: [State(t=0)],
        disj(Subaction("Inc", lambda s, env: [s.update(t=s["t"] + 1)], guard=lambda s, env: s["t"] < top),
             Subaction("Reset", lambda s, env: [s.update(t=0)])),
    )


SUM = mapping("Total", "sum", t=Expr.state(lambda s: sum(s["c"].values()), reads="c", label="sum"))


@pytest.fixture
def big_counters():
    """3125 states; the widest BFS levels are large enough for the thread pool."""
    yield counters(("a", "b", "c", "d", "e"), limit=4)


def test_explore_finds_every_state():
    graph = explore(counters(), CFG)
    assert len(graph.states) == 9, f"expected 3x3 states, got {len(graph.states)}"
    assert len(graph.inits) == 1
    # Reset from the initial state is a stuttering step
    assert len(graph.edges()) - len(graph.edges(include_stuttering=False)) == 1


def test_invariant_pass_and_shortest_counterexample():
    assert check_invariant(counters(), CFG, lambda s: s["c"]["a"] <= 2).passed
    verdict = check_invariant(counters(), CFG, lambda s: s["c"]["a"] < 2, label="a-small")
    assert verdict.status == FAIL
    assert "a-small" in verdict.detail
    assert [step.action for step in verdict.trace] == ["Init", "Inc", "Inc"]
    assert replay_trace(counters(), CFG, verdict.trace), "counterexample must be a behavior of the spec"


def test_search_is_deterministic_across_worker_counts(big_counters):
    sequential = explore(big_counters, CFG, workers=1)
    parallel = explore(big_counters, CFG, workers=4)
    assert len(sequential.states) == 3125
    assert sequential == parallel

    inv = lambda s: sum(s["c"].values()) < 20  # noqa: E731
    assert check_invariant(big_counters, CFG, inv, workers=1) == check_invariant(big_counters, CFG, inv, workers=4)


def test_state_cap_aborts_search():
    with pytest.raises(ResourceError, match="state cap"):
        explore(counters(), CFG, state_cap=5)


def test_action_property_ignores_stuttering_steps():
    never_same = ActionProperty("moves", lambda s, step: step.state != s)
    assert check_action_property(counters(), CFG, never_same).passed

    small_steps = ActionProperty.for_subaction("Inc", lambda s, t, env: t["c"][env["i"]] <= 1, "inc-small")
    verdict = check_action_property(counters(), CFG, small_steps)
    assert not verdict.passed
    assert verdict.trace[-1].action == "Inc"
    assert verdict.trace[-1].state["c"][verdict.trace[-1].env["i"]] == 2


def test_conjunction_names_the_failing_part():
    prop = ActionProperty.conjunction("both", [
        ActionProperty("always", lambda s, step: True),
        ActionProperty("never-reset", lambda s, step: step.action != "Reset"),
    ])
    verdict = check_action_property(counters(), CFG, prop)
    assert "both/never-reset" in verdict.detail


def test_refinement_under_sum_mapping():
    verdict = check_refinement(counters(), CFG, SUM, total())
    logger.info(f"Refinement verdict: {verdict.detail}")
    assert verdict.passed


def test_refinement_failure_ends_in_the_bad_step():
    doubled = mapping("Total", t=Expr.state(lambda s: 2 * s["c"]["a"] + s["c"]["b"], reads="c"))
    verdict = check_refinement(counters(), CFG, doubled, total())
    assert verdict.status == FAIL
    assert verdict.trace[-1].action == "Inc"
    assert verdict.trace[-1].env["i"] == "a"


def test_refinement_rejects_bad_initial_state():
    shifted = mapping("Total", t=Expr.state(lambda s: 1 + sum(s["c"].values()), reads="c"))
    verdict = check_refinement(counters(), CFG, shifted, total(top=5))
    assert not verdict.passed
    assert len(verdict.trace) == 1
    assert "initial state" in verdict.detail


def test_equivalence_with_itself():
    spec = counters()
    same = identity_mapping(("c",), "Counters")
    assert check_equivalence(spec, same, spec, same, CFG).passed


def test_find_trace():
    found = find_trace(counters(), CFG, lambda s: sum(s["c"].values()) == 3, label="three")
    assert found.status == FAIL, "a found target is reported as a failing verdict with its trace"
    assert len(found.trace) == 4
    missing = find_trace(counters(), CFG, lambda s: sum(s["c"].values()) == 5, label="five")
    assert missing.passed and "unreachable" in missing.detail


def test_projection_detects_lost_states():
    limited = counters(limit=1)
    assert check_projection(limited, limited, CFG).passed
    verdict = check_projection(counters(), limited, CFG)
    assert not verdict.passed
    assert "no lift" in verdict.detail


def test_verdict_json_round_trip():
    verdict = check_invariant(counters(), CFG, lambda s: s["c"]["b"] < 1)
    again = Verdict.from_json(verdict.to_json())
    assert again == verdict
    assert Verdict.from_json(Verdict.ok("fine").to_json()) == Verdict.ok("fine")


def test_failing_verdict_needs_a_trace():
    with pytest.raises(ValueError):
        Verdict(FAIL, None, "no trace")
    with pytest.raises(ValueError):
        Verdict("maybe")
    assert Verdict(PASS).passed
    assert not Verdict.fail([TraceStep(State(x=1), "Init")], "bad").passed
