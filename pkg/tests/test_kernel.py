import pytest

from auxcheck.exceptions import (ConfigError, ConstructionError,
                                 EvaluationError)
from auxcheck.history import HistorySpec, attach_history
from auxcheck.kernel import (EMPTY_ENV, Expr, SpecDef, State, Step,
                             Subaction, coarsen, compose_mappings, disj,
                             enumerate_init, enumerate_successors, exists,
                             identity_mapping, is_enabled, leaves, mapping)
from auxcheck.utils.config_utils import ModelConfig
from auxcheck.values import Fcn, int_range

CFG = ModelConfig()


def counter(limit: int = 2) -> SpecDef:
    """Two counters, each bumped by ``Inc`` under a binder ``i``; ``Reset`` zeroes both."""
    def init():
        yield State(c=Fcn({"a": 0, "b": 0}))

    def inc(s, env):
        return [s.update(c=s["c"].set(env["i"], s["c"][env["i"]] + 1))]

    def reset(s, env):
        return [s.update(c=Fcn({"a": 0, "b": 0}))]

    return SpecDef(
        "Counter", ("c",), init,
        disj(exists("i", lambda s, env: frozenset({"b", "a"}),
                    Subaction("Inc", inc, guard=lambda s, env: s["c"][env["i"]] < limit)),
             Subaction("Reset", reset)),
    )


def test_state_updates_are_persistent():
    s = State(x=1, y=2)
    t = s.update(x=3)
    assert s["x"] == 1 and t["x"] == 3
    assert t.project(["x"]) == State(x=3)
    assert s.variables == frozenset({"x", "y"})
    assert hash(State(x=1, y=2)) == hash(s)


def test_expr_enforces_declared_reads():
    expr = Expr.state(lambda s: s["x"] + s["y"], reads="x", label="sum")
    with pytest.raises(EvaluationError, match="undeclared variable 'y'"):
        expr(State(x=1, y=2))
    assert Expr.state(lambda s: s["x"] + s["y"], reads="x y")(State(x=1, y=2)) == 3


def test_expr_wraps_evaluation_errors_with_label():
    expr = Expr.state(lambda s: s["x"][5], reads="x", label="fifth")
    with pytest.raises(EvaluationError, match="fifth"):
        expr(State(x=Fcn()))


def test_action_expr_sees_primed_variables():
    expr = Expr.action(lambda s, t, env: t["x"] - s["x"] + env["k"], reads="x", primed="x")
    assert expr(State(x=1), State(x=4), Fcn({"k": 10})) == 13


def test_leaves_carry_quantifier_context():
    spec = counter()
    inc, reset = spec.subactions
    assert inc.binder_names == ("i",)
    assert reset.binder_names == ()
    # binders are enumerated in canonical order, not declaration order
    assert [env["i"] for env in inc.envs(State(c=Fcn()))] == ["a", "b"]


def test_duplicate_context_identifiers_are_rejected():
    body = exists("i", lambda s, env: frozenset({1}), Subaction("A", lambda s, env: [s]))
    with pytest.raises(ConstructionError, match="duplicate context"):
        leaves(exists("i", lambda s, env: frozenset({1}), body))


def test_duplicate_subaction_ids_are_rejected():
    with pytest.raises(ConstructionError):
        SpecDef("Bad", ("x",), lambda: [State(x=0)],
                disj(Subaction("A", lambda s, env: [s]), Subaction("A", lambda s, env: [s])))


def test_unbounded_quantifier_is_rejected():
    with pytest.raises(ConstructionError, match="bounded"):
        exists("i", None, Subaction("A", lambda s, env: [s]))


def test_enumerate_successors_is_ordered_and_labelled():
    spec = counter()
    s0, = enumerate_init(spec, CFG)
    steps = enumerate_successors(spec, s0).steps
    assert [(step.action, step.env.get("i")) for step in steps] == [("Inc", "a"), ("Inc", "b"), ("Reset", None)]
    assert steps[0].state["c"] == Fcn({"a": 1, "b": 0})


def test_constraint_cuts_successors():
    spec = counter()
    bounded = SpecDef(spec.name, spec.variables, spec.init, spec.next,
                      constraint=lambda s: sum(s["c"].values()) <= 0)
    s0, = enumerate_init(bounded, CFG)
    result = enumerate_successors(bounded, s0)
    assert [step.action for step in result.steps] == ["Reset"]
    assert len(result.cut) == 2


def test_partial_post_state_is_an_error():
    spec = SpecDef("Partial", ("x", "y"), lambda: [State(x=0, y=0)],
                   Subaction("Drop", lambda s, env: [State(x=1)]))
    s0, = enumerate_init(spec, CFG)
    with pytest.raises(EvaluationError, match="expected"):
        enumerate_successors(spec, s0)


def test_missing_substitution_is_a_config_error():
    spec = SpecDef("NeedsInt", ("x",), lambda: [State(x=0)], Subaction("A", lambda s, env: [s]),
                   symbols=frozenset({"Int"}))
    with pytest.raises(ConfigError, match="Int"):
        enumerate_init(spec, CFG)


def test_guard_must_be_boolean():
    spec = SpecDef("BadGuard", ("x",), lambda: [State(x=0)],
                   Subaction("A", lambda s, env: [s], guard=lambda s, env: 1))
    s0, = enumerate_init(spec, CFG)
    with pytest.raises(EvaluationError, match="boolean"):
        enumerate_successors(spec, s0)


def test_is_enabled_follows_guard():
    spec = counter(limit=1)
    inc = spec.subaction("Inc")
    s = State(c=Fcn({"a": 1, "b": 0}))
    assert not is_enabled(inc, s, Fcn({"i": "a"}))
    assert is_enabled(inc, s, Fcn({"i": "b"}))
    with pytest.raises(ConfigError):
        spec.subaction("Missing")


def test_coarsen_keeps_post_states():
    spec = counter()
    coarse = coarsen(spec)
    assert coarse.name == "CounterCoarse"
    assert [leaf.id for leaf in coarse.subactions] == ["Next"]
    s0, = enumerate_init(spec, CFG)
    fine = {step.state for step in enumerate_successors(spec, s0).steps}
    assert {step.state for step in enumerate_successors(coarse, s0).steps} == fine
    assert all(step.env == EMPTY_ENV for step in enumerate_successors(coarse, s0).steps)


def test_coarse_spec_takes_added_variables():
    steps_seen = HistorySpec(
        h_init=Expr.state(lambda s: 0, reads=()),
        per_subaction={"Next": Expr.action(lambda s, t, env: s["h"] + 1, reads="h", primed=())},
    )
    spec_h = attach_history(coarsen(counter()), steps_seen)
    s0, = enumerate_init(spec_h, CFG)
    successors = enumerate_successors(spec_h, s0).steps
    assert {step.state["c"] for step in successors} == {Fcn({"a": 1, "b": 0}), Fcn({"a": 0, "b": 1}),
                                                        Fcn({"a": 0, "b": 0})}
    assert {step.state["h"] for step in successors} == {1}


def test_mapping_validation():
    low = SpecDef("Low", ("x", "y"), lambda: [State(x=0, y=0)], Subaction("A", lambda s, env: [s]))
    high = SpecDef("High", ("z",), lambda: [State(z=0)], Subaction("B", lambda s, env: [s]))
    mapping("High", z=Expr.state(lambda s: s["x"], reads="x")).validate(low, high)
    with pytest.raises(ConfigError, match="does not define"):
        mapping("High", w=lambda s: 0).validate(low, high)
    with pytest.raises(ConfigError, match="not variables"):
        mapping("High", z=Expr.state(lambda s: s["q"], reads="q")).validate(low, high)


def test_identity_and_composed_mappings():
    s = State(x=1, y=2, h=frozenset())
    erase = identity_mapping(("x", "y"), "Base")
    assert erase.apply(s) == State(x=1, y=2)
    double = mapping("Top", z=Expr.state(lambda t: t["x"] + t["y"], reads="x y"))
    assert compose_mappings(erase, double).apply(s) == State(z=3)


def test_steps_are_values():
    assert Step("A", EMPTY_ENV, State(x=1)) == Step("A", Fcn(), State(x=1))
    assert int_range(1, 0) == frozenset()
