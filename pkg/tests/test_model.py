import itertools

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from recurrify import reclang as R
from recurrify.extract import extract_expr
from recurrify.model import (
    CARTESIAN, INF, INT_TOP, POWERSET, STAR, Model, ModelConfig, PairSet, SumSet, Tup,
    UnsupportedFunctor, bottom, csize, join, leq, render, sem_equal, succ, to_json, top,
    unfold_symbolic,
)
from recurrify.model.domains import (
    Cx, fold_size, make_pairs, make_sum, probes, value_join, value_leq,
)
from recurrify.types import (
    BOOL, COST, INT, UNIT, TArrow, TCmplx, TProd, TRec, TSum, TVar, list_of,
)

LIST = list_of(INT)
TREE = TRec("a", TSum(UNIT, TProd(TVar("a"), TVar("a"))))
LIST_FUNCTOR = TSum(UNIT, TProd(INT, TVar("a")))


def semantic(defs, name, mode=CARTESIAN, **config):
    model = Model(ModelConfig(product_mode=mode, **config))
    return model, model.denote(R.PotProj(extract_expr(defs[name])))


def pair(mode, first, second):
    return make_pairs([(first, second)]) if mode == POWERSET else Tup(first, second)


# -- order, join, top -------------------------------------------------------------------

def test_size_order_on_naturals():
    assert leq(COST, 3, INF) and not leq(COST, INF, 3)
    assert join(COST, 2, 5) == 5


def test_sets_compare_by_domination():
    small, large = make_sum([(0, STAR)]), make_sum([(0, STAR), (1, 5)])
    assert leq(None, small, large) and not leq(None, large, small)
    assert join(None, make_sum([(1, 3)]), make_sum([(1, 5)])) == make_sum([(1, 5)])


def test_powerset_pairs_keep_incomparable_generators():
    joined = join(None, make_pairs([(1, 0)]), make_pairs([(0, 1)]), POWERSET)
    assert isinstance(joined, PairSet) and len(joined.items) == 2


def test_top_elements():
    assert top(COST) == INF and top(LIST) == INF
    assert top(BOOL) == make_sum([(0, STAR), (1, STAR)])
    assert top(TCmplx(UNIT)) == Cx(INF, STAR)
    assert top(TProd(COST, UNIT), POWERSET) == make_pairs([(INF, STAR)])
    assert top(TArrow(UNIT, COST)).apply(STAR) == INF


def test_bottom_elements():
    assert bottom(COST) == 0
    assert bottom(TSum(COST, COST)) == make_sum([])
    assert bottom(TProd(COST, COST), POWERSET) == make_pairs([])


def test_succ_and_csize():
    assert (succ(None), succ(4), succ(INF)) == (0, 5, INF)
    assert csize(TVar("a"), "a", 7) == 7
    assert csize(UNIT, "a", STAR) is None
    assert csize(LIST_FUNCTOR, "a", make_sum([(0, STAR)])) is None
    assert fold_size(LIST, make_sum([(0, STAR)])) == 0
    assert fold_size(LIST, make_sum([(1, Tup(INT_TOP, 4))])) == 5


def test_csize_of_products_adds_and_ignores_bottom():
    functor = TProd(TVar("a"), TVar("a"))
    assert csize(functor, "a", Tup(2, 3)) == 5
    assert csize(TProd(INT, TVar("a")), "a", Tup(INT_TOP, 3)) == 3
    assert csize(functor, "a", make_pairs([(2, 3), (6, 0)]), POWERSET) == 6


# -- unfold -------------------------------------------------------------------------------

def test_list_unfold():
    assert unfold_symbolic(LIST, 0) == make_sum([(0, STAR)])
    assert unfold_symbolic(LIST, 3) == make_sum([(0, STAR), (1, Tup(INT_TOP, 2))])
    assert unfold_symbolic(LIST, INF) == make_sum([(0, STAR), (1, Tup(INT_TOP, INF))])


def test_list_unfold_zero_in_powerset_mode_has_an_empty_cons_part():
    out = unfold_symbolic(LIST, 0, POWERSET)
    assert out == make_sum([(0, STAR), (1, make_pairs([]))])
    # in1 of the empty pair set is kept as its own point: larger than {in0 *}, still sound
    assert value_leq(make_sum([(0, STAR)]), out, POWERSET)


@pytest.mark.parametrize("size", range(0, 9))
def test_tree_unfold_matches_enumeration(size):
    best = oracles.tree_unfold_maximal_sum(size)
    for mode in (CARTESIAN, POWERSET):
        out = unfold_symbolic(TREE, size, mode)
        nodes = [value for tag, value in out.items if tag == 1]
        sums = set()
        for node in nodes:
            generators = node.items if isinstance(node, PairSet) else [(node.first, node.second)]
            sums |= {left + right for left, right in generators}
        assert sums == (set() if best is None else {best})


def test_tree_unfold_five():
    out = unfold_symbolic(TREE, 5)
    splits = [(1, Tup(left_size, 4 - left_size)) for left_size in range(5)]
    expected = make_sum([(0, STAR)] + splits)
    assert out == expected


def test_three_recursive_positions_are_rejected():
    functor = TRec("a", TSum(UNIT, TProd(TVar("a"), TProd(TVar("a"), TVar("a")))))
    with pytest.raises(UnsupportedFunctor):
        unfold_symbolic(functor, 3)


# -- lattice laws on small finite sub-domains ----------------------------------------------

SIZES = st.sampled_from([0, 1, 2, 3, INF])


def sum_values(mode):
    leaf = st.one_of(SIZES.map(lambda size: (1, size)), st.just((0, STAR)))
    return st.lists(leaf, max_size=3).map(make_sum)


def pair_values(mode):
    return st.lists(st.tuples(SIZES, SIZES), min_size=1, max_size=3).map(
        lambda items: make_pairs(items) if mode == POWERSET else Tup(*items[0]))


@pytest.mark.parametrize("mode", [CARTESIAN, POWERSET])
@pytest.mark.parametrize("kind", ["sizes", "sums", "pairs"])
def test_lattice_laws(mode, kind):
    strategy = {"sizes": SIZES, "sums": sum_values(mode), "pairs": pair_values(mode)}[kind]

    @settings(max_examples=150, deadline=None)
    @given(strategy, strategy, strategy)
    def laws(first, second, third):
        le = lambda lower, upper: value_leq(lower, upper, mode)  # noqa: E731
        assert le(first, first)
        if le(first, second) and le(second, third):
            assert le(first, third)
        if le(first, second) and le(second, first):
            assert sem_equal(first, second, mode)
        ab = value_join(first, second)
        assert sem_equal(ab, value_join(second, first), mode)
        assert sem_equal(value_join(ab, third), value_join(first, value_join(second, third)), mode)
        assert sem_equal(value_join(first, first), first, mode)
        assert le(first, ab) and le(second, ab)
        if le(first, third) and le(second, third):
            assert le(ab, third)

    laws()


@settings(max_examples=150, deadline=None)
@given(st.lists(st.tuples(SIZES, SIZES), min_size=1, max_size=4), st.tuples(SIZES, SIZES))
def test_adding_a_dominated_generator_changes_nothing(items, extra):
    base = make_pairs(items)
    dominated = (min(extra[0], items[0][0]), min(extra[1], items[0][1]))
    grown = make_pairs(items + [dominated])
    assert grown == base
    other = make_pairs([(1, 1)])
    assert value_leq(grown, other, POWERSET) == value_leq(base, other, POWERSET)


def test_rendering_and_json():
    assert render(make_sum([(0, STAR), (1, Tup(INT_TOP, INF))])) == "{in0 *, in1 (⊤int, ∞)}"
    assert to_json(Cx(3, Tup(1, INF))) == {"cost": 3, "pot": [1, "inf"]}


def test_function_probes_cover_finite_and_infinite_sizes():
    assert probes(COST) == (0, 1, 2, 3, INF)


# -- term denotation -----------------------------------------------------------------------

def test_cons_adds_one_to_the_tail():
    lst = list_of(UNIT)
    cons = R.Fold(lst, R.Inj(1, R.Pair(R.UNIT_VAL, R.Var("s")), None))
    assert Model().denote(cons, {"s": 4}) == 5


def test_unfold_of_zero():
    assert Model().denote(R.Unfold(LIST, R.Size(0))) == make_sum([(0, STAR)])


def test_caselist_joins_both_branches():
    # caselist n of nil => (0, 0) | cons(h, t) => (1, t)
    branch = R.Val(R.Pair(R.ONE, R.Var("t")))
    term = R.Case(R.Unfold(LIST, R.Var("n")), R.WILDCARD, R.Val(R.Pair(R.ZERO, R.ZERO)), "z",
                  R.LetPair("h", "t", R.Var("z"), branch, None), TCmplx(TProd(COST, LIST)))
    assert Model().denote(term, {"n": 0}) == Cx(0, Tup(0, 0))
    assert Model().denote(term, {"n": 4}) == Cx(0, Tup(1, 3))
    assert Model(ModelConfig(product_mode=POWERSET)).denote(term, {"n": 4}) == \
        Cx(0, make_pairs([(1, 3)]))


def test_comparison_of_int_tops_joins_both_branches():
    term = R.if_(R.Leq(R.IntLit(1), R.IntLit(2)), R.Val(R.ONE), R.Incr(R.Val(R.ZERO)),
                 TCmplx(COST))
    assert Model().denote(term) == Cx(1, 1)


def test_empty_case_is_bottom():
    term = R.Case(R.Var("s"), "x", R.Val(R.ONE), "y", R.Val(R.ONE), TCmplx(COST))
    assert Model().denote(term, {"s": make_sum([])}) == Cx(0, 0)


def test_bind_adds_source_costs():
    term = R.Bind(("p", "q"), (R.Incr(R.Val(R.ONE)), R.Incr(R.Incr(R.Val(R.ONE)))),
                  R.Incr(R.Val(R.Plus(R.Var("p"), R.Var("q")))))
    assert Model().denote(term) == Cx(4, 2)


# -- fixpoints: the corpus functions ----------------------------------------------------------

def test_split(defs, deep):
    def body():
        model, split = semantic(defs, "split")
        assert split.apply(6) == Cx(0, Tup(3, 3))
        assert split.apply(7) == Cx(0, Tup(4, 3))
        # at ∞ the self-call reads its own starting point, which is already a fixpoint
        assert split.apply(INF) == Cx(INF, Tup(INF, INF))
        assert not model.widened
    deep(body)


def test_merge_matches_oracles(defs, deep):
    def body():
        _, merge = semantic(defs, "merge")
        for left_size, right_size in itertools.product(range(9), repeat=2):
            out = merge.apply(Tup(left_size, right_size))
            assert out.pot == left_size + right_size
            assert out.cost == oracles.merge_cost_model(left_size, right_size)
        for left_size, right_size in itertools.product(range(5), repeat=2):
            want = oracles.merge_worst_case(left_size, right_size)
            assert merge.apply(Tup(left_size, right_size)).cost == want
        assert merge.apply(Tup(4, 3)).cost == 6
    deep(body)


def test_msort_matches_oracle(defs, deep):
    def body():
        model, msort = semantic(defs, "msort")
        for size in range(41):
            out = msort.apply(size)
            assert out.cost == oracles.msort_cost_model(size) and out.pot == size
        for size in range(8):
            assert msort.apply(size).cost == oracles.worst_case(oracles.msort_counting, size)
        assert not model.widened
    deep(body)


def test_qsort_both_modes(defs, deep):
    def body():
        _, cartesian = semantic(defs, "qsort")
        _, powerset = semantic(defs, "qsort", POWERSET)
        for size in range(11):
            assert cartesian.apply(size).cost == oracles.qsort_cartesian(size)
        for size in range(13):
            assert powerset.apply(size) == Cx(oracles.qsort_powerset(size), size)
        for size in range(7):
            assert powerset.apply(size).cost == oracles.worst_case(oracles.qsort_counting, size)
    deep(body)


def test_part_in_powerset_mode(defs, deep):
    def body():
        model = Model(ModelConfig(product_mode=POWERSET))
        part = model.denote(R.PotProj(extract_expr(defs["part"])))
        out = part.apply(make_pairs([(INT_TOP, 3)]))
        assert out == Cx(3, make_pairs([(left_size, 3 - left_size) for left_size in range(4)]))
    deep(body)


def test_memoization_does_not_change_answers(defs, deep):
    def body():
        _, cached = semantic(defs, "msort")
        _, fresh = semantic(defs, "msort", memo_enabled=False)
        sizes = range(12)
        assert [cached.apply(size) for size in sizes] == [fresh.apply(size) for size in sizes]
    deep(body)


def test_deep_dependency_chains(defs, deep):
    def body():
        model, length = semantic(defs, "length")
        assert length.apply(3000) == Cx(3000, 3000)
        assert not model.widened
    deep(body)


def test_low_fuel_widens_to_top(defs, deep):
    def body():
        model, msort = semantic(defs, "msort", fix_fuel=1)
        out = msort.apply(8)
        assert model.widened and out.cost >= oracles.msort_cost_model(8)
    deep(body)


def test_widening_is_reported_on_reuse(defs, deep):
    def body():
        model, msort = semantic(defs, "msort", fix_fuel=1)
        msort.apply(8)
        model.reset_widened()
        msort.apply(8)
        assert model.widened
    deep(body)


def test_runaway_recursion_widens(defs, deep):
    def body():
        model, spin = semantic(defs, "spin", max_points=500)
        assert spin.apply(0) == Cx(INF, INF)
        assert model.widened
    deep(body)


def test_omega_has_infinite_cost(defs, deep):
    def body():
        _, omega = semantic(defs, "omega")
        assert omega.apply(STAR).cost == INF
        _, loop = semantic(defs, "ticking_loop")
        assert loop.apply(STAR).cost == INF
    deep(body)


def test_invalid_configuration():
    with pytest.raises(ValueError):
        ModelConfig(fix_fuel=0)
    with pytest.raises(ValueError):
        ModelConfig(product_mode="tensor")


def test_monotone_in_environment(deep):
    term = R.Bind(("p",), (R.Incr(R.Val(R.Var("x"))),), R.Val(R.Plus(R.Var("p"), R.ONE)))
    values = [Model().denote(term, {"x": size}) for size in (0, 1, 5, INF)]
    assert all(value_leq(lower, upper) for lower, upper in zip(values, values[1:]))
