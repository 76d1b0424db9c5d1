import itertools

import pytest
from hypothesis import given
from hypothesis import strategies as st

from auxcheck.exceptions import DomainError
from auxcheck.values import (EMPTY_FCN, FALSE, INFINITY, MINUS_INFINITY,
                             NOT_INT, TRUE, Fcn, append, as_bool, concat,
                             const_fcn, decode_value, encode_value,
                             fcn_space, format_value, head, id_fcn, int_range,
                             is_geq, is_leq, is_partial_injection, is_seq,
                             ordered, partial_injections, remove_elt_from,
                             seq, seq_items, seq_len, set_max, set_min,
                             subset_of, tail, to_value)

from . import logger

values = st.recursive(
    st.integers(-3, 3) | st.sampled_from(["a", "b", NOT_INT]) | st.sampled_from([TRUE, FALSE]),
    lambda children: (st.frozensets(children, max_size=3)
                      | st.dictionaries(st.integers(0, 3) | st.sampled_from(["x", "y"]), children, max_size=3)
                      .map(Fcn)),
    max_leaves=8,
)


def test_bool_is_not_an_integer():
    assert TRUE != 1, "TRUE must stay apart from 1"
    assert FALSE != 0
    assert as_bool(True) is TRUE
    assert len({TRUE, 1, FALSE, 0}) == 4


def test_fcn_update_leaves_original_unchanged():
    f = Fcn({1: "a", 2: "b"})
    g = f.set(2, "c")
    assert f[2] == "b", "set must not mutate the original function"
    assert g[2] == "c"
    assert g.set(2, "b") == f
    assert hash(g.set(2, "b")) == hash(f)
    assert f.set(3, "d").domain == frozenset({1, 2, 3})
    assert f.restrict({1}) == Fcn({1: "a"})


def test_integer_set_operations():
    assert set_max(int_range(-2, 2)) == 2
    assert set_min(frozenset({3, -1})) == -1
    with pytest.raises(DomainError):
        set_max(frozenset())
    with pytest.raises(DomainError):
        set_min(frozenset({1, "a"}))


def test_infinities_compare_only_as_bounds():
    assert is_leq(5, INFINITY)
    assert not is_leq(INFINITY, 5)
    assert is_geq(-5, MINUS_INFINITY)
    assert not is_geq(MINUS_INFINITY, -5)
    assert is_leq(1, 1) and not is_leq(2, 1)


def test_canonical_order_ranks_kinds():
    mixed = [EMPTY_FCN, "a", frozenset(), TRUE, 1, -4]
    assert ordered(mixed) == [-4, 1, TRUE, "a", frozenset(), EMPTY_FCN]


@given(st.lists(values, max_size=6))
def test_ordered_is_a_total_order(items):
    once = ordered(items)
    assert ordered(reversed(once)) == once, "ordering must not depend on input order"


def test_sequences():
    s = seq("a", "b", "c")
    assert is_seq(s) and seq_len(s) == 3
    assert head(s) == "a"
    assert tail(s) == seq("b", "c")
    assert append(s, "d") == seq("a", "b", "c", "d")
    assert concat(s, seq("x")) == seq("a", "b", "c", "x")
    assert remove_elt_from(2, s) == seq("a", "c")
    assert seq_items(remove_elt_from(1, seq("z"))) == []
    assert not is_seq(Fcn({2: "a"}))


@pytest.mark.parametrize("op", [head, tail])
def test_empty_sequence_has_no_head_or_tail(op):
    with pytest.raises(DomainError):
        op(seq())


def test_remove_elt_from_checks_index():
    with pytest.raises(DomainError):
        remove_elt_from(0, seq(1))
    with pytest.raises(DomainError):
        remove_elt_from(2, seq(1))


def test_remove_then_reinsert_gives_back_every_short_sequence():
    for n in range(5):
        for items in itertools.product("ab", repeat=n):
            s = seq(*items)
            for i in range(1, n + 1):
                rest = seq_items(remove_elt_from(i, s))
                assert len(rest) == n - 1
                assert seq(*rest[: i - 1], s[i], *rest[i - 1:]) == s, f"removing {i} from {items}"


def test_function_spaces():
    assert len(fcn_space({1, 2}, {"a", "b", "c"})) == 9
    assert fcn_space(set(), {"a"}) == [EMPTY_FCN]
    assert len(subset_of(frozenset({1, 2, 3}))) == 8
    assert const_fcn({1, 2}, 0) == Fcn({1: 0, 2: 0})
    assert id_fcn({1, 2})[2] == 2


def test_partial_injections():
    injections = partial_injections(frozenset({1, 2}), frozenset({"a", "b"}))
    # empty, four singletons, two bijections
    assert len(injections) == 7
    assert all(is_partial_injection(f, frozenset({1, 2}), frozenset({"a", "b"})) for f in injections)
    assert not is_partial_injection(Fcn({1: "a", 2: "a"}), frozenset({1, 2}), frozenset({"a"}))
    assert not is_partial_injection(Fcn({3: "a"}), frozenset({1, 2}), frozenset({"a"}))


def test_partial_injections_match_brute_force():
    for dom_size in range(4):
        for rng_size in range(4):
            dom, rng = frozenset(range(dom_size)), frozenset("abc"[:rng_size])
            expected = frozenset(
                f for sub in subset_of(dom) for f in fcn_space(sub, rng) if len(set(f.values())) == len(f)
            )
            assert partial_injections(dom, rng) == expected, f"|U|={dom_size}, |V|={rng_size}"


def test_to_value_converts_python_data():
    assert to_value([1, 2]) == seq(1, 2)
    assert to_value({"x": {1, 2}}) == Fcn({"x": frozenset({1, 2})})
    assert to_value(True) is TRUE
    with pytest.raises(DomainError):
        to_value(1.5)


@given(values)
def test_canonical_encoding_decodes_back(value):
    assert decode_value(encode_value(value)) == value


def test_decode_rejects_malformed_functions():
    with pytest.raises(DomainError):
        decode_value({"fcn": [[1]]})
    with pytest.raises(DomainError):
        decode_value({"other": 1})


def test_format_value():
    logger.info(f"Formatting {format_value(seq(1, 2))}")
    assert format_value(seq(1, 2)) == "<<1, 2>>"
    assert format_value(frozenset({2, 1})) == "{1, 2}"
    assert format_value(Fcn({"top": "top"})) == '[top |-> "top"]'
    assert format_value(NOT_INT) == "NotInt"
