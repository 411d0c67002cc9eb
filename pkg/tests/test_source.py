import pytest
from hypothesis import given, settings, strategies as st

from recurrify import corpus, fuzz
from recurrify import source as S
from recurrify.parser import ParseError, parse_expr, parse_program, parse_type
from recurrify.typecheck import SourceTypeError, elaborate, synth, typecheck
from recurrify.types import (
    BOOL, INT, UNIT, TArrow, TProd, TRec, TSum, TVar, is_polynomial_functor, list_of,
    subst_type, unroll,
)


def test_nil_is_fold_of_left_injection():
    expr = parse_expr("nil[int]")
    assert isinstance(expr, S.Fold) and expr.ty == list_of(INT)
    assert expr.body == S.Inj(0, S.UNIT_VAL, unroll(list_of(INT)))


def test_unit_literal():
    assert parse_expr("()") == S.UNIT_VAL


def test_caselist_desugars_to_case_over_unfold():
    expr, ty = elaborate(parse_expr("caselist nil[int] of nil => () | cons(x, xs) => ()"))
    assert ty == UNIT
    assert isinstance(expr, S.Case) and isinstance(expr.scrutinee, S.Unfold)
    assert expr.left_var == "_"
    cell = expr.right_var
    assert expr.right == S.LetPair("x", "xs", S.Var(cell), S.UNIT_VAL)


def test_if_desugars_to_case_on_bool():
    expr, ty = elaborate(parse_expr("if leq(1, 2) then () else ()"))
    assert isinstance(expr, S.Case) and ty == UNIT


def test_list_literal_sugar():
    expr, ty = elaborate(parse_expr("[1, 2]"))
    assert ty == list_of(INT)
    assert [item.value for item in S.list_items(expr)] == [1, 2]


def test_parse_error_reports_position():
    with pytest.raises(ParseError) as err:
        parse_program("def a = (;")
    assert (err.value.line, err.value.col) == (1, 10)


def test_unknown_identifier_is_a_parse_error():
    with pytest.raises(ParseError, match="unknown identifier"):
        parse_expr("y")


def test_type_mismatch_reports_rule():
    with pytest.raises(SourceTypeError) as err:
        elaborate(parse_expr("(fun f (x : unit) : unit => x) 3"))
    assert err.value.rule == "app"


def test_tick_preserves_type():
    assert typecheck({}, S.Tick(S.UNIT_VAL)) == UNIT


def test_fold_rule():
    nil_unit = S.Fold(list_of(UNIT), S.Inj(0, S.UNIT_VAL, unroll(list_of(UNIT))))
    assert typecheck({}, nil_unit) == list_of(UNIT)


def test_recursive_function_typing():
    fn = S.Fun("f", "x", S.App(S.Var("f"), S.Var("x")), TArrow(UNIT, UNIT))
    assert typecheck({}, fn) == TArrow(UNIT, UNIT)


def test_subst_type_examples():
    body = TSum(UNIT, TProd(UNIT, TVar("a")))
    rec = TRec("a", body)
    assert subst_type(body, rec, "a") == TSum(UNIT, TProd(UNIT, rec))
    assert subst_type(TVar("a"), INT, "a") == INT
    assert subst_type(UNIT, INT, "a") == UNIT


def test_polynomial_functors():
    assert is_polynomial_functor(TSum(UNIT, TProd(INT, TVar("a"))), "a")
    assert not is_polynomial_functor(TArrow(TVar("a"), TVar("a")), "a")
    assert is_polynomial_functor(TProd(INT, TProd(TVar("a"), TVar("a"))), "a")


def test_types_parse():
    assert parse_type("list int") == list_of(INT)
    assert parse_type("bool") == BOOL
    assert parse_type("mu a . unit + a * a") == TRec("a", TSum(UNIT, TProd(TVar("a"), TVar("a"))))


def test_corpus_typechecks(defs):
    expected = {"split": "list int -> list int * list int", "msort": "list int -> list int",
                "part": "int * list int -> list int * list int", "omega": "unit -> unit"}
    for name, text in expected.items():
        assert synth({}, defs[name]) == parse_type(text)
    for term in defs.values():
        synth({}, term)


def test_corpus_main_expressions():
    for name in corpus.PROGRAM_FILES:
        program = corpus.load(name)
        assert program.main is not None
        synth({}, program.main)


def test_corpus_round_trips(defs):
    for term in defs.values():
        assert parse_expr(S.show_expr(term)) == term


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 9), st.sampled_from(fuzz.SOURCE_RESULT_TYPES))
def test_print_parse_round_trip(seed, ty):
    expr = fuzz.fuzz_program(seed, 4, ty)
    assert parse_expr(S.show_expr(expr)) == expr


@settings(max_examples=150, deadline=None)
@given(st.integers(min_value=0, max_value=10 ** 9), st.sampled_from(fuzz.SOURCE_RESULT_TYPES))
def test_fuzzed_programs_are_closed_and_typed(seed, ty):
    expr = fuzz.fuzz_program(seed, 5, ty)
    assert not S.free_vars(expr)
    assert synth({}, expr) == ty


def test_fuzzer_is_deterministic():
    assert fuzz.fuzz_program(0) == fuzz.fuzz_program(0)
    assert synth({}, fuzz.fuzz_program(0)) == UNIT


def test_shadowing_innermost_wins():
    expr, ty = elaborate(parse_expr("let (x, y) = ((), 1) in let (x, z) = (2, ()) in x"))
    assert ty == INT
