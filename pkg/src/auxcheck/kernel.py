"""
Specifications as data: states, expressions, subactions with quantifier
contexts, disjunctive representations of the next-state action, and
refinement mappings.
"""
from __future__ import annotations

import dataclasses
from collections.abc import Callable, Iterable, Iterator, Mapping
from dataclasses import dataclass, field
from functools import cached_property
from typing import Any, NamedTuple, Union

from pyrsistent import PMap, pmap

from .exceptions import (ConfigError, ConstructionError, DomainError,
                         EvaluationError)
from .utils.config_utils import ModelConfig
from .values import EMPTY_FCN, Bool, Fcn, format_value, ordered

Env = Fcn
EMPTY_ENV: Env = EMPTY_FCN


class State(Mapping[str, Any]):
    """A total assignment of values to a specification's variables."""
    __slots__ = ("_vals", "_hash")

    def __init__(self, values: Mapping[str, Any] | Iterable[tuple[str, Any]] = (), **assignments: Any):
        vals = values if isinstance(values, PMap) else pmap(dict(values))
        if assignments:
            vals = vals.update(assignments)
        self._vals = vals
        self._hash: int | None = None

    def __getitem__(self, name: str) -> Any:
        return self._vals[name]

    def __iter__(self) -> Iterator[str]:
        return iter(self._vals)

    def __len__(self) -> int:
        return len(self._vals)

    def __contains__(self, name: object) -> bool:
        return name in self._vals

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((State, frozenset(self._vals.items())))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, State):
            return NotImplemented
        if self is other:
            return True
        return hash(self) == hash(other) and self._vals == other._vals

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self) -> str:
        body = ", ".join(f"{k}={format_value(v)}" for k, v in self.sorted_items())
        return f"State({body})"

    @property
    def variables(self) -> frozenset[str]:
        return frozenset(self._vals.keys())

    def update(self, **changes: Any) -> State:
        return State(self._vals.update(changes))

    def set(self, name: str, value: Any) -> State:
        return State(self._vals.set(name, value))

    def project(self, names: Iterable[str]) -> State:
        return State({n: self._vals[n] for n in names})

    def sorted_items(self) -> list[tuple[str, Any]]:
        return sorted(self._vals.items())


class StateView(Mapping[str, Any]):
    """Read-only view of a state exposing only declared variables."""
    __slots__ = ("_state", "_allowed", "_label")

    def __init__(self, state: Mapping[str, Any], allowed: frozenset[str], label: str):
        self._state = state
        self._allowed = allowed
        self._label = label

    def __getitem__(self, name: str) -> Any:
        if name not in self._allowed:
            raise EvaluationError(f"{self._label}: reads undeclared variable {name!r}")
        return self._state[name]

    def __iter__(self) -> Iterator[str]:
        return (n for n in self._state if n in self._allowed)

    def __len__(self) -> int:
        return sum(1 for _ in self)


def _names(names: Iterable[str] | str | None) -> frozenset[str] | None:
    if names is None:
        return None
    if isinstance(names, str):
        return frozenset(names.split())
    return frozenset(names)


def _evaluate(label: str, fn: Callable[..., Any], *args: Any) -> Any:
    try:
        return fn(*args)
    except (EvaluationError, ConfigError, ConstructionError):
        raise
    except (DomainError, KeyError, TypeError, IndexError, AttributeError, ValueError) as e:
        raise EvaluationError(f"{label}: {type(e).__name__}: {e}") from e


@dataclass(frozen=True)
class Expr:
    """
    An expression over a pre-state, an optional post-state and a binder
    environment, called as ``expr(s, t, env)``.

    ``reads`` and ``primed`` declare the unprimed and primed variables the
    expression may use. When declared, evaluation sees only those variables,
    so the declaration is a checked property of the expression. ``None``
    leaves access unrestricted.
    """
    fn: Callable[[Any, Any, Env], Any]
    label: str = "<expr>"
    reads: frozenset[str] | None = None
    primed: frozenset[str] | None = None

    def __call__(self, s: Mapping[str, Any], t: Mapping[str, Any] | None = None, env: Env = EMPTY_ENV) -> Any:
        pre = s if self.reads is None else StateView(s, self.reads, self.label)
        post = t if t is None or self.primed is None else StateView(t, self.primed, f"{self.label}'")
        return _evaluate(self.label, self.fn, pre, post, env)

    @classmethod
    def state(cls, fn: Callable[[Any], Any], reads: Iterable[str] | str | None = None, label: str | None = None) -> Expr:
        """A state expression ``fn(s)``; it reads no primed variables."""
        return cls(lambda s, t, env: fn(s), label or getattr(fn, "__name__", "<expr>"),
                   _names(reads), frozenset())

    @classmethod
    def action(cls, fn: Callable[[Any, Any, Env], Any], reads: Iterable[str] | str | None = None,
               primed: Iterable[str] | str | None = None, label: str | None = None) -> Expr:
        return cls(fn, label or getattr(fn, "__name__", "<expr>"), _names(reads), _names(primed))


def state_expr(reads: Iterable[str] | str | None = None, label: str | None = None) -> Callable[[Callable[[Any], Any]], Expr]:
    """Decorator form of ``Expr.state``."""
    def wrap(fn: Callable[[Any], Any]) -> Expr:
        return Expr.state(fn, reads, label)
    return wrap


def action_expr(reads: Iterable[str] | str | None = None, primed: Iterable[str] | str | None = None,
                label: str | None = None) -> Callable[[Callable[[Any, Any, Env], Any]], Expr]:
    """Decorator form of ``Expr.action``."""
    def wrap(fn: Callable[[Any, Any, Env], Any]) -> Expr:
        return Expr.action(fn, reads, primed, label)
    return wrap


def as_state_expr(obj: Expr | Callable[[Any], Any], label: str = "<expr>") -> Expr:
    return obj if isinstance(obj, Expr) else Expr.state(obj, label=label)


def check_bool(value: Any, label: str) -> bool:
    if isinstance(value, bool):
        return value
    if isinstance(value, Bool):
        return value.value
    raise EvaluationError(f"{label}: expected a boolean, got {format_value(value)}")


"""
Subactions and disjunctive representations
"""


@dataclass(frozen=True)
class Binder:
    """One bounded existential ``\\E name \\in domain``; the domain reads the pre-state only."""
    name: str
    domain: Callable[[State, Env], frozenset[Any]]


@dataclass(frozen=True, eq=False)
class Subaction:
    """
    A guarded transition relation under a context of binders.

    ``post(s, env)`` enumerates post-states; ``guard(s, env)``, when given,
    must hold for the subaction to be enabled.
    """
    id: str
    post: Callable[[State, Env], Iterable[State]]
    guard: Callable[[State, Env], Any] | None = None
    context: tuple[Binder, ...] = ()

    def envs(self, s: State) -> Iterator[Env]:
        """Binder environments drawn from the context domains at ``s``, in canonical order."""
        return _envs(self.id, self.context, s, EMPTY_ENV)

    def successors(self, s: State, env: Env) -> list[State]:
        if self.guard is not None and not check_bool(_evaluate(f"{self.id} guard", self.guard, s, env), f"{self.id} guard"):
            return []
        return _evaluate(self.id, lambda: list(self.post(s, env)))

    @property
    def binder_names(self) -> tuple[str, ...]:
        return tuple(b.name for b in self.context)


def _envs(label: str, binders: tuple[Binder, ...], s: State, env: Env) -> Iterator[Env]:
    if not binders:
        yield env
        return
    binder, rest = binders[0], binders[1:]
    domain = _evaluate(f"{label} context {binder.name}", binder.domain, s, env)
    if not isinstance(domain, frozenset):
        raise EvaluationError(f"{label}: context domain of {binder.name!r} is not a set: {domain!r}")
    for value in ordered(domain):
        yield from _envs(label, rest, s, env.set(binder.name, value))


@dataclass(frozen=True, eq=False)
class Disj:
    children: tuple[DisjRep, ...]


@dataclass(frozen=True, eq=False)
class Exists:
    binder: Binder
    body: DisjRep


DisjRep = Union[Subaction, Disj, Exists]


def disj(*children: DisjRep) -> Disj:
    if not children:
        raise ConstructionError("A disjunction needs at least one disjunct.")
    return Disj(tuple(children))


def exists(name: str, domain: Callable[[State, Env], frozenset[Any]] | None, body: DisjRep) -> Exists:
    if domain is None or not callable(domain):
        raise ConstructionError(f"Quantifier over {name!r} must be bounded by a finite domain.")
    return Exists(Binder(name, domain), body)


def leaves(rep: DisjRep, outer: tuple[Binder, ...] = ()) -> tuple[Subaction, ...]:
    """The subactions of ``rep``, each carrying the binders of its enclosing existentials."""
    if isinstance(rep, Subaction):
        names = [b.name for b in outer]
        if len(names) != len(set(names)):
            raise ConstructionError(f"Subaction {rep.id!r} has duplicate context identifiers {names}")
        return (dataclasses.replace(rep, context=outer),)
    if isinstance(rep, Disj):
        return tuple(leaf for child in rep.children for leaf in leaves(child, outer))
    if isinstance(rep, Exists):
        return leaves(rep.body, outer + (rep.binder,))
    raise ConstructionError(f"Not a disjunctive representation: {rep!r}")


def map_leaves(rep: DisjRep, fn: Callable[[Subaction], Subaction], outer: tuple[Binder, ...] = ()) -> DisjRep:
    """Rebuild ``rep`` with every leaf replaced by ``fn(leaf)``; ``fn`` sees the leaf's context."""
    if isinstance(rep, Subaction):
        return fn(dataclasses.replace(rep, context=outer))
    if isinstance(rep, Disj):
        return Disj(tuple(map_leaves(child, fn, outer) for child in rep.children))
    if isinstance(rep, Exists):
        return Exists(rep.binder, map_leaves(rep.body, fn, outer + (rep.binder,)))
    raise ConstructionError(f"Not a disjunctive representation: {rep!r}")


"""
Specifications
"""


@dataclass(frozen=True, eq=False)
class SpecDef:
    """
    ``Init /\\ [][Next]_vars`` over finitely many states.

    ``init`` enumerates the initial states, ``next`` is the disjunctive
    representation of Next, ``constraint`` bounds exploration and
    ``symbols`` names the symbolic sets a model config must substitute.
    """
    name: str
    variables: tuple[str, ...]
    init: Callable[[], Iterable[State]]
    next: DisjRep
    constraint: Callable[[State], Any] | None = None
    constants: Mapping[str, Any] = field(default_factory=dict)
    symbols: frozenset[str] = frozenset()

    def __post_init__(self):
        if len(set(self.variables)) != len(self.variables):
            raise ConstructionError(f"{self.name}: duplicate variable names {self.variables}")
        object.__setattr__(self, "constants", pmap(self.constants))
        ids = [leaf.id for leaf in self.subactions]
        duplicates = sorted({i for i in ids if ids.count(i) > 1})
        if duplicates:
            raise ConstructionError(f"{self.name}: duplicate subaction ids {duplicates}")

    @cached_property
    def subactions(self) -> tuple[Subaction, ...]:
        return leaves(self.next)

    @cached_property
    def variable_set(self) -> frozenset[str]:
        return frozenset(self.variables)

    def subaction(self, action_id: str) -> Subaction:
        for leaf in self.subactions:
            if leaf.id == action_id:
                return leaf
        raise ConfigError(f"{self.name} has no subaction {action_id!r}")

    def in_constraint(self, s: State) -> bool:
        if self.constraint is None:
            return True
        return check_bool(_evaluate(f"{self.name} constraint", self.constraint, s), f"{self.name} constraint")


class Step(NamedTuple):
    action: str
    env: Env
    state: State


class Successors(NamedTuple):
    steps: tuple[Step, ...]
    # successors dropped because they violate the state constraint
    cut: tuple[Step, ...] = ()


def _check_total(spec: SpecDef, s: State, where: str) -> None:
    if s.variables != spec.variable_set:
        raise EvaluationError(
            f"{spec.name}: {where} produced a state over {sorted(s.variables)}, "
            f"expected {sorted(spec.variables)}")


def enumerate_init(spec: SpecDef, cfg: ModelConfig) -> tuple[State, ...]:
    """Initial states satisfying the constraint, without duplicates, in generation order."""
    cfg.require(spec.symbols)
    states = dict.fromkeys(_evaluate(f"{spec.name} Init", lambda: list(spec.init())))
    for s in states:
        if not isinstance(s, State):
            raise EvaluationError(f"{spec.name}: Init produced {s!r}, not a State")
        _check_total(spec, s, "Init")
    return tuple(s for s in states if spec.in_constraint(s))


def enumerate_successors(spec: SpecDef, s: State) -> Successors:
    """
    Every ``(subaction id, binders, post-state)`` step from ``s``.

    Order follows the disjunctive representation, then canonical binder
    order, then the subaction's own enumeration order.
    """
    steps: dict[Step, None] = {}
    cut: dict[Step, None] = {}
    for leaf in spec.subactions:
        for env in leaf.envs(s):
            for t in leaf.successors(s, env):
                _check_total(spec, t, leaf.id)
                step = Step(leaf.id, env, t)
                if spec.in_constraint(t):
                    steps[step] = None
                else:
                    cut[step] = None
    return Successors(tuple(steps), tuple(cut))


def is_enabled(action: Subaction, s: State, env: Env = EMPTY_ENV) -> bool:
    """``ENABLED A`` at ``s`` under the given binders."""
    return bool(action.successors(s, env))


def eval_state_expr(expr: Expr | Callable[[Any], Any], s: State) -> Any:
    return as_state_expr(expr)(s)


def eval_action_pred(pred: Expr, s: State, t: State, env: Env = EMPTY_ENV) -> bool:
    return check_bool(pred(s, t, env), pred.label)


def coarsen(spec: SpecDef, action_id: str = "Next") -> SpecDef:
    """
    The same spec with Next represented as a single subaction.

    The post-states come straight from the leaves, so ``s`` may carry
    variables added to the coarse spec later; the constraint is left to
    whichever spec explores it.
    """
    fine = spec.subactions

    def post(s: State, env: Env) -> list[State]:
        return list(dict.fromkeys(
            t for leaf in fine for leaf_env in leaf.envs(s) for t in leaf.successors(s, leaf_env)))

    return dataclasses.replace(spec, name=f"{spec.name}Coarse", next=Subaction(action_id, post))


"""
Refinement mappings
"""


@dataclass(frozen=True)
class RefinementMapping:
    """Per-variable state expressions of a high spec, evaluated over low states."""
    target: str
    exprs: Mapping[str, Expr]
    name: str = ""

    def __post_init__(self):
        exprs = {v: as_state_expr(e, label=f"{self.name or self.target}.{v}") for v, e in self.exprs.items()}
        object.__setattr__(self, "exprs", pmap(exprs))

    def validate(self, low: SpecDef, high: SpecDef) -> None:
        missing = sorted(set(high.variables) - set(self.exprs))
        if missing:
            raise ConfigError(f"Mapping to {high.name} does not define high variable(s): {', '.join(missing)}")
        extra = sorted(set(self.exprs) - set(high.variables))
        if extra:
            raise ConfigError(f"Mapping to {high.name} defines unknown variable(s): {', '.join(extra)}")
        for var, expr in self.exprs.items():
            if expr.reads is not None and not expr.reads <= low.variable_set:
                raise ConfigError(
                    f"Mapping for {var} reads {sorted(expr.reads - low.variable_set)}, "
                    f"which are not variables of {low.name}")

    def apply(self, s: State) -> State:
        return State({var: expr(s) for var, expr in self.exprs.items()})


def mapping(target: str, name: str = "", **exprs: Expr | Callable[[Any], Any]) -> RefinementMapping:
    return RefinementMapping(target, exprs, name)


def identity_mapping(variables: Iterable[str], target: str, name: str = "") -> RefinementMapping:
    """Maps each variable to itself; erases any other low variable."""
    return RefinementMapping(
        target,
        {v: Expr.state(lambda s, v=v: s[v], reads=(v,), label=f"{target}.{v}") for v in variables},
        name or f"erase-to-{target}",
    )


def compose_mappings(inner: RefinementMapping, outer: RefinementMapping) -> RefinementMapping:
    """``outer`` after ``inner``: low states are mapped by ``inner`` first."""
    reads: frozenset[str] | None = frozenset()
    for expr in inner.exprs.values():
        reads = None if reads is None or expr.reads is None else reads | expr.reads
    return RefinementMapping(
        outer.target,
        {v: Expr.state(lambda s, e=e: e(inner.apply(s)), reads=reads, label=e.label) for v, e in outer.exprs.items()},
        f"{outer.name or outer.target} . {inner.name or inner.target}",
    )
