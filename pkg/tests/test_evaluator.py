import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from recurrify import fuzz
from recurrify import source as S
from recurrify.evaluator import (
    Complete, Incomplete, StuckError, cost_monotone_check, evaluate, fuel_needed,
    value_self_eval_check,
)
from recurrify.parser import parse_expr
from recurrify.typecheck import elaborate, synth


def run(defs, text, fuel=10 ** 6):
    term, _ = elaborate(parse_expr(text, defs))
    return evaluate(term, fuel)


def as_ints(value):
    return [item.value for item in S.list_items(value)]


def test_tick_of_unit():
    assert evaluate(S.Tick(S.UNIT_VAL), 2) == Complete(S.UNIT_VAL, 1)


def test_function_values_are_free():
    fn = S.Fun("f", "x", S.Var("x"), None)
    assert evaluate(fn, 1) == Complete(fn, 0)


def test_omega_is_incomplete_at_zero_cost(defs):
    assert run(defs, "omega ()", fuel=1000) == Incomplete(0)


def test_ticking_loop_cost_grows_with_fuel(defs):
    small, large = run(defs, "ticking_loop ()", 100), run(defs, "ticking_loop ()", 1000)
    assert isinstance(small, Incomplete) and 0 < small.cost < large.cost


def test_merge_examples(defs):
    out = run(defs, "merge ([1, 3], [2])")
    assert as_ints(out.value) == [1, 2, 3] and out.cost == 2
    out = run(defs, "merge ([1, 3], [2, 4])")
    assert as_ints(out.value) == [1, 2, 3, 4] and out.cost == 3


def test_msort_of_three_one_two(defs):
    values, expected_cost = oracles.msort_counting([3, 1, 2])
    out = run(defs, "msort [3, 1, 2]")
    assert as_ints(out.value) == values == [1, 2, 3]
    assert out.cost == expected_cost == 2


@pytest.mark.parametrize("name,sorter", [("msort", oracles.msort_counting),
                                         ("qsort", oracles.qsort_counting)])
def test_sorts_match_counting_oracle(defs, name, sorter):
    for length in range(6):
        for perm in itertools.permutations(range(1, length + 1)):
            out = evaluate(S.App(defs[name], S.int_list(perm)), 10 ** 6)
            values, cost = sorter(list(perm))
            assert as_ints(out.value) == values and out.cost == cost


def test_split_and_part(defs):
    out = run(defs, "split [1, 2, 3, 4, 5]")
    assert [as_ints(out.value.first), as_ints(out.value.second)] == [[1, 3, 5], [2, 4]]
    out = run(defs, "part (3, [5, 1, 3, 2])")
    assert [as_ints(out.value.first), as_ints(out.value.second)] == [[1, 2], [5, 3]]
    assert out.cost == 4


def test_values_evaluate_to_themselves():
    closure = S.Fun("f", "x", S.Var("x"), None)
    for value in (S.UNIT_VAL, S.int_list([5]), S.Pair(S.UNIT_VAL, closure)):
        assert value_self_eval_check(value)


def test_incomplete_costs_form_a_staircase(defs):
    twice = S.Tick(S.Tick(S.UNIT_VAL))
    assert [evaluate(twice, fuel).cost for fuel in (1, 2, 3, 4)] == [0, 1, 2, 2]
    assert cost_monotone_check(twice, range(6))
    msort_pair, _ = elaborate(parse_expr("msort [2, 1]", defs))
    assert cost_monotone_check(msort_pair, range(0, 200, 3))
    assert evaluate(msort_pair, 10 ** 5).cost == 1


def test_fuel_needed_is_the_exact_threshold():
    expr = S.Tick(S.Tick(S.UNIT_VAL))
    need = fuel_needed(expr, 100)
    assert isinstance(evaluate(expr, need), Complete)
    assert isinstance(evaluate(expr, need - 1), Incomplete)


def test_negative_fuel_rejected():
    with pytest.raises(ValueError):
        evaluate(S.UNIT_VAL, -1)


def test_ill_typed_terms_get_stuck():
    with pytest.raises(StuckError):
        evaluate(S.App(S.UNIT_VAL, S.UNIT_VAL), 10)


def test_deep_derivations_do_not_overflow(defs):
    out = evaluate(S.App(defs["qsort"], S.int_list(range(64))), 10 ** 8)
    assert out.cost == 64 * 63 // 2


@settings(max_examples=120, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 9), st.sampled_from(fuzz.SOURCE_RESULT_TYPES))
def test_preservation_determinism_and_tick_erasure(seed, ty):
    expr = fuzz.fuzz_program(seed, 5, ty)
    first, second = evaluate(expr, 10 ** 4), evaluate(expr, 10 ** 4)
    assert first == second
    if isinstance(first, Complete):
        assert synth({}, first.value) == ty
        erased = evaluate(S.strip_ticks(expr), 10 ** 5)
        assert isinstance(erased, Complete) and erased.cost == 0
        assert erased.value == S.strip_ticks(first.value)
        assert cost_monotone_check(expr, range(0, 300, 7))
