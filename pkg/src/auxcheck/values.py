"""
Immutable first-order value algebra.

A Value is one of:

* ``int``        -- integers (never a Python ``bool``)
* ``Bool``       -- the booleans ``TRUE`` and ``FALSE``
* ``str``        -- atoms such as ``"input"``; sentinels are registered atoms
* ``frozenset``  -- finite sets of Values
* ``Fcn``        -- finite functions; sequences and records are functions

All values are hashable and compare structurally, so they can be shared
freely between explorer workers.
"""
from __future__ import annotations

import itertools
import threading
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from typing import Any, TypeAlias, Union

from cachetools import LRUCache, cached
from pyrsistent import PMap, pmap

from .constants import VALUE_KEY_CACHE_SIZE
from .exceptions import DomainError


@dataclass(frozen=True, slots=True)
class Bool:
    """Boolean value, kept apart from ``int`` so that TRUE never equals 1."""
    value: bool

    def __bool__(self) -> bool:
        return self.value

    def __repr__(self) -> str:
        return "TRUE" if self.value else "FALSE"


TRUE = Bool(True)
FALSE = Bool(False)


def as_bool(flag: bool) -> Bool:
    return TRUE if flag else FALSE


class Fcn(Mapping[Any, Any]):
    """
    A finite function from Values to Values.

    Backed by a persistent map so that point updates share structure with
    the original. The hash is computed once and cached.
    """
    __slots__ = ("_map", "_hash")

    def __init__(self, entries: Mapping[Any, Any] | Iterable[tuple[Any, Any]] = ()):
        if isinstance(entries, PMap):
            self._map = entries
        else:
            self._map = pmap(dict(entries))
        self._hash: int | None = None

    def __getitem__(self, key: Any) -> Any:
        return self._map[key]

    def __iter__(self) -> Iterator[Any]:
        return iter(self._map)

    def __len__(self) -> int:
        return len(self._map)

    def __contains__(self, key: object) -> bool:
        return key in self._map

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((Fcn, frozenset(self._map.items())))
        return self._hash

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, Fcn):
            return NotImplemented
        if self is other:
            return True
        return hash(self) == hash(other) and self._map == other._map

    def __ne__(self, other: object) -> bool:
        result = self.__eq__(other)
        return result if result is NotImplemented else not result

    def __repr__(self) -> str:
        return format_value(self)

    @property
    def domain(self) -> frozenset[Any]:
        return frozenset(self._map.keys())

    def set(self, key: Any, value: Any) -> Fcn:
        """``[f EXCEPT ![key] = value]``, extending the domain if needed."""
        return Fcn(self._map.set(key, value))

    def restrict(self, keys: Iterable[Any]) -> Fcn:
        keys = frozenset(keys)
        return Fcn({k: v for k, v in self._map.items() if k in keys})

    def sorted_items(self) -> list[tuple[Any, Any]]:
        return [(k, self._map[k]) for k in ordered(self._map.keys())]


Value: TypeAlias = Union[int, str, Bool, frozenset[Any], Fcn]

EMPTY_FCN = Fcn()
EMPTY_SET: frozenset[Any] = frozenset()


"""
Sentinels: reserved atoms standing for values chosen outside a given set
"""
_SENTINELS: dict[str, str] = {}


def sentinel(name: str) -> str:
    """Register ``name`` as a reserved atom and return it."""
    if not name:
        raise DomainError("Sentinel names must be non-empty.")
    return _SENTINELS.setdefault(name, name)


def is_sentinel(value: object) -> bool:
    return isinstance(value, str) and value in _SENTINELS


def sentinels() -> frozenset[str]:
    return frozenset(_SENTINELS)


NOT_INT = sentinel("NotInt")
INFINITY = sentinel("Infinity")
MINUS_INFINITY = sentinel("MinusInfinity")
NOT_MEM_VAL = sentinel("NotMemVal")
NOT_REG_VAL = sentinel("NotRegVal")
NON_DATA = sentinel("NonData")


def is_int(value: object) -> bool:
    return type(value) is int


"""
Canonical order: Int < Bool < Atom < SetV < Fcn
"""


@cached(cache=LRUCache(maxsize=VALUE_KEY_CACHE_SIZE), lock=threading.RLock())
def value_key(value: Any) -> tuple[Any, ...]:
    """Sort key realising the canonical total order on Values."""
    if type(value) is int:
        return (0, value)
    if isinstance(value, Bool):
        return (1, value.value)
    if isinstance(value, str):
        return (2, value)
    if isinstance(value, frozenset):
        return (3, tuple(sorted(value_key(v) for v in value)))
    if isinstance(value, Fcn):
        return (4, tuple(sorted((value_key(k), value_key(v)) for k, v in value.items())))
    raise DomainError(f"Not a value: {value!r}")


def ordered(values: Iterable[Any]) -> list[Any]:
    """Members of ``values`` in canonical order."""
    return sorted(values, key=value_key)


"""
Integer sets
"""


def _check_int_set(values: frozenset[Any], op: str) -> None:
    if not values:
        raise DomainError(f"{op} of the empty set")
    if not all(type(v) is int for v in values):
        raise DomainError(f"{op} of a set with non-integer members: {format_value(values)}")


def set_max(values: frozenset[Any]) -> int:
    _check_int_set(values, "set_max")
    return max(values)


def set_min(values: frozenset[Any]) -> int:
    _check_int_set(values, "set_min")
    return min(values)


def int_range(lo: int, hi: int) -> frozenset[int]:
    """``lo..hi``"""
    return frozenset(range(lo, hi + 1))


def is_leq(i: Any, j: Any) -> bool:
    """``(j = Infinity) \\/ (i =< j)``; Infinity is never compared as an integer."""
    if j == INFINITY:
        return True
    return is_int(i) and is_int(j) and i <= j


def is_geq(i: Any, j: Any) -> bool:
    """``(j = MinusInfinity) \\/ (i >= j)``"""
    if j == MINUS_INFINITY:
        return True
    return is_int(i) and is_int(j) and i >= j


def subset_of(values: frozenset[Any]) -> frozenset[frozenset[Any]]:
    """The powerset of ``values``."""
    members = ordered(values)
    return frozenset(
        frozenset(combo)
        for size in range(len(members) + 1)
        for combo in itertools.combinations(members, size)
    )


def ordered_subsets(values: frozenset[Any]) -> list[frozenset[Any]]:
    return ordered(subset_of(values))


"""
Functions
"""


def empty_fcn() -> Fcn:
    return EMPTY_FCN


def id_fcn(values: Iterable[Any]) -> Fcn:
    return Fcn({v: v for v in values})


def record(**fields: Any) -> Fcn:
    return Fcn(fields)


def add_to_fcn(f: Fcn, key: Any, value: Any) -> Fcn:
    """``f @@ (key :> value)`` with the new value winning on overlap."""
    return f.set(key, value)


def const_fcn(keys: Iterable[Any], value: Any) -> Fcn:
    """``[k \\in keys |-> value]``"""
    return Fcn({k: value for k in keys})


def fcn_space(dom: Iterable[Any], rng: Iterable[Any]) -> list[Fcn]:
    """All functions in ``[dom -> rng]``, in canonical order of the domain."""
    keys = ordered(dom)
    targets = ordered(rng)
    return [Fcn(zip(keys, images)) for images in itertools.product(targets, repeat=len(keys))]


def partial_injections(dom: frozenset[Any], rng: frozenset[Any]) -> frozenset[Fcn]:
    """Injective functions whose domain is a subset of ``dom`` and range a subset of ``rng``."""
    keys = ordered(dom)
    targets = ordered(rng)
    result = set()
    for size in range(min(len(keys), len(targets)) + 1):
        for subdomain in itertools.combinations(keys, size):
            for images in itertools.permutations(targets, size):
                result.add(Fcn(zip(subdomain, images)))
    return frozenset(result)


def is_partial_injection(f: Any, dom: frozenset[Any], rng: frozenset[Any]) -> bool:
    if not isinstance(f, Fcn):
        return False
    images = list(f.values())
    return f.domain <= dom and set(images) <= rng and len(set(images)) == len(images)


"""
Sequences: functions with domain 1..n
"""


def seq(*items: Any) -> Fcn:
    return Fcn({i: v for i, v in enumerate(items, start=1)})


def is_seq(value: Any) -> bool:
    return isinstance(value, Fcn) and value.domain == int_range(1, len(value))


def seq_items(s: Fcn) -> list[Any]:
    if not is_seq(s):
        raise DomainError(f"Not a sequence: {format_value(s)}")
    return [s[i] for i in range(1, len(s) + 1)]


def seq_len(s: Fcn) -> int:
    if not is_seq(s):
        raise DomainError(f"Not a sequence: {format_value(s)}")
    return len(s)


def append(s: Fcn, value: Any) -> Fcn:
    return s.set(seq_len(s) + 1, value)


def head(s: Fcn) -> Any:
    if seq_len(s) == 0:
        raise DomainError("head of the empty sequence")
    return s[1]


def tail(s: Fcn) -> Fcn:
    if seq_len(s) == 0:
        raise DomainError("tail of the empty sequence")
    return seq(*seq_items(s)[1:])


def concat(s: Fcn, t: Fcn) -> Fcn:
    return seq(*seq_items(s), *seq_items(t))


def remove_elt_from(i: int, s: Fcn) -> Fcn:
    """The sequence ``s`` with its ``i``-th element deleted."""
    items = seq_items(s)
    if not is_int(i) or not 1 <= i <= len(items):
        raise DomainError(f"remove_elt_from: index {i!r} outside 1..{len(items)}")
    return seq(*items[: i - 1], *items[i:])


"""
Conversion and canonical encoding
"""


def to_value(obj: Any) -> Any:
    """Convert plain Python data into a Value.

    Lists and tuples become sequences, sets become SetV, dicts become
    functions and ``bool`` becomes ``Bool``.
    """
    if isinstance(obj, bool):
        return as_bool(obj)
    if isinstance(obj, (int, str, Bool, Fcn)):
        return obj
    if isinstance(obj, (set, frozenset)):
        return frozenset(to_value(v) for v in obj)
    if isinstance(obj, (list, tuple)):
        return seq(*(to_value(v) for v in obj))
    if isinstance(obj, Mapping):
        return Fcn({to_value(k): to_value(v) for k, v in obj.items()})
    raise DomainError(f"Cannot convert {obj!r} to a value")


def encode_value(value: Any) -> Any:
    """JSON-ready canonical encoding of a Value."""
    if isinstance(value, Bool):
        return value.value
    if type(value) is int or isinstance(value, str):
        return value
    if isinstance(value, frozenset):
        return [encode_value(v) for v in ordered(value)]
    if isinstance(value, Fcn):
        return {"fcn": [[encode_value(k), encode_value(v)] for k, v in value.sorted_items()]}
    raise DomainError(f"Cannot encode {value!r}")


def decode_value(obj: Any) -> Any:
    """Inverse of ``encode_value``."""
    if isinstance(obj, bool):
        return as_bool(obj)
    if isinstance(obj, (int, str)):
        return obj
    if isinstance(obj, list):
        return frozenset(decode_value(v) for v in obj)
    if isinstance(obj, dict) and set(obj) == {"fcn"}:
        pairs = obj["fcn"]
        if not all(isinstance(p, list) and len(p) == 2 for p in pairs):
            raise DomainError(f"Malformed function encoding: {obj!r}")
        return Fcn({decode_value(k): decode_value(v) for k, v in pairs})
    raise DomainError(f"Cannot decode {obj!r}")


def format_value(value: Any) -> str:
    """Readable rendering used in reports and error messages."""
    if isinstance(value, str):
        return value if is_sentinel(value) else f'"{value}"'
    if isinstance(value, frozenset):
        return "{" + ", ".join(format_value(v) for v in ordered(value)) + "}"
    if isinstance(value, Fcn):
        if len(value) and is_seq(value):
            return "<<" + ", ".join(format_value(v) for v in seq_items(value)) + ">>"
        if len(value) == 0:
            return "<<>>"
        if all(isinstance(k, str) and not is_sentinel(k) for k in value):
            return "[" + ", ".join(f"{k} |-> {format_value(v)}" for k, v in value.sorted_items()) + "]"
        return "(" + " @@ ".join(f"{format_value(k)} :> {format_value(v)}" for k, v in value.sorted_items()) + ")"
    return repr(value)
