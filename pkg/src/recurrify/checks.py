"""Empirical checking suites: soundness, adequacy, model axioms and lemmas.

Every suite returns a :class:`CheckReport`.  A report is ``ok`` when no
violation was found; ``notes`` counts informational events such as widened
answers or fuel exhaustion.
"""

from __future__ import annotations

import itertools
import math
import random
from collections import Counter
from dataclasses import dataclass, field
from typing import Iterable, Iterator

from . import corpus, fuzz
from . import reclang as R
from . import source as S
from .evaluator import Complete, Incomplete, evaluate
from .extract import extract_expr, extract_type, extract_value
from .model import Model, ModelConfig, run_deep
from .model.domains import (
    CARTESIAN, INF, POWERSET, bottom, render, sem_equal, value_join, value_leq,
)
from .simplify import model_simplify, simplify
from .typecheck import synth
from .types import BOOL, INT, TArrow, TCmplx, TCost, TProd, TRec, TSum, UNIT, list_of, unroll

MODES = (CARTESIAN, POWERSET)
DEFAULT_FUEL = 10 ** 4
# fuzz terms get a small point budget: widening is sound and keeps trials fast
FUZZ_MAX_POINTS = 5000


@dataclass
class Violation:
    check: str
    subject: str
    detail: str

    def as_dict(self) -> dict:
        return {"check": self.check, "subject": self.subject, "detail": self.detail}


@dataclass
class CheckReport:
    name: str
    cases: int = 0
    violations: list[Violation] = field(default_factory=list)
    notes: Counter = field(default_factory=Counter)

    @property
    def ok(self) -> bool:
        return not self.violations

    def fail(self, check: str, subject: str, detail: str) -> None:
        self.violations.append(Violation(check, subject, detail))

    def merge(self, other: "CheckReport") -> None:
        self.cases += other.cases
        self.violations.extend(other.violations)
        self.notes.update(other.notes)

    def as_dict(self) -> dict:
        return {"check": self.name, "ok": self.ok, "cases": self.cases,
                "violations": [violation.as_dict() for violation in self.violations],
                "notes": dict(sorted(self.notes.items()))}


# -- corpus cases ---------------------------------------------------------------

@dataclass(frozen=True)
class CorpusCase:
    """A corpus function applied to one input, or a closed corpus term."""

    name: str
    argument: S.Expr | None = None

    def program(self) -> S.Expr:
        term = corpus.definition(self.name)
        return term if self.argument is None else S.App(term, self.argument)

    def describe(self) -> str:
        if self.argument is None:
            return self.name
        return f"{self.name} {S.show_value(self.argument)}"


def _tree_type():
    return corpus.definition("left_spine").ty.dom


def _trees(depth: int) -> list[S.Expr]:
    ty = _tree_type()
    body = unroll(ty)
    leaf = S.Fold(ty, S.Inj(0, S.UNIT_VAL, body))
    if depth == 0:
        return [leaf]
    smaller = _trees(depth - 1)
    nodes = [S.Fold(ty, S.Inj(1, S.Pair(left, right), body))
             for left in smaller for right in smaller]
    return [leaf] + nodes


def corpus_cases(max_length: int = 6) -> Iterator[CorpusCase]:
    """Corpus programs on enumerated small inputs."""
    for length in range(max_length + 1):
        for perm in itertools.permutations(range(1, length + 1)):
            yield CorpusCase("msort", S.int_list(perm))
            yield CorpusCase("qsort", S.int_list(perm))
    short = min(max_length, 4)
    for length in range(max_length + 1):
        yield CorpusCase("split", S.int_list(range(length)))
        yield CorpusCase("length", S.int_list(range(length)))
        yield CorpusCase("rev_acc", S.Pair(S.int_list(range(length)), S.int_list([9])))
    for total in range(2 * short + 1):
        for left in range(total + 1):
            if left > short or total - left > short:
                continue
            for chosen in itertools.combinations(range(total), left):
                rest = [number for number in range(total) if number not in chosen]
                pair = S.Pair(S.int_list(chosen), S.int_list(rest))
                yield CorpusCase("merge", pair)
                yield CorpusCase("app", pair)
    for length in range(short + 1):
        for perm in itertools.permutations(range(1, length + 1)):
            for pivot in range(length + 2):
                yield CorpusCase("part", S.Pair(S.IntLit(pivot), S.int_list(perm)))
    for tree in _trees(2):
        yield CorpusCase("left_spine", tree)
    yield CorpusCase("omega", S.UNIT_VAL)
    yield CorpusCase("ticking_loop", S.UNIT_VAL)
    yield CorpusCase("spin", S.int_list([]))
    for name in ("tiny", "twice", "nil_list", "pair_of_units"):
        yield CorpusCase(name)


class _CorpusSemantics:
    """Denotes corpus cases, sharing one model (and its memo tables) per mode."""

    # enough for every enumerated input; diverging searches hit it quickly
    MAX_POINTS = 20_000

    def __init__(self, mode: str, fix_fuel: int = 256):
        self.model = Model(ModelConfig(product_mode=mode, fix_fuel=fix_fuel,
                                       max_points=self.MAX_POINTS))
        self.mode = mode
        self._functions: dict[str, object] = {}

    def function(self, name: str):
        if name not in self._functions:
            rec = extract_expr(corpus.definition(name))
            self._functions[name] = self.model.denote(R.PotProj(rec))
        return self._functions[name]

    def denote(self, case: CorpusCase):
        """The complexity denoted by the recurrence of the case's program.

        For an application ``f v`` the recurrence binds the potentials of
        ``f`` and ``v`` at zero cost, so its denotation is ``⟦f⟧ ⟦⟨v⟩⟧``.
        """
        if case.argument is None:
            return self.model.denote(extract_expr(case.program()))
        argument = self.model.denote(extract_value(case.argument))
        return self.model.apply(self.function(case.name), argument)

    def potential(self, value: S.Expr):
        return self.model.denote(extract_value(value))


def _bound_check(report: CheckReport, subject: str, outcome, cx, potential_of, mode: str) -> None:
    if outcome.cost > cx.cost:
        report.fail("cost", subject,
                    f"{mode}: actual cost {outcome.cost} exceeds semantic cost {render(cx.cost)}")
    if isinstance(outcome, Complete):
        actual = potential_of(outcome.value)
        if not value_leq(actual, cx.pot, mode):
            report.fail("potential", subject,
                        f"{mode}: value potential {render(actual)} not below {render(cx.pot)}")


# -- soundness ------------------------------------------------------------------

def fuzz_case(seed: int, budget: int = 5) -> tuple[S.Expr, object]:
    """The fuzz program for ``seed`` together with its (seed-chosen) type."""
    ty = random.Random(seed).choice(fuzz.SOURCE_RESULT_TYPES)
    return fuzz.fuzz_program(seed, budget, ty), ty


def check_soundness(trials: int = 1000, seed: int = 0, fuel: int = DEFAULT_FUEL,
                    max_length: int = 6, modes: Iterable[str] = MODES) -> CheckReport:
    """Actual cost and value are bounded by the semantic recurrence."""
    return run_deep(_soundness, trials, seed, fuel, max_length, tuple(modes))


def _soundness(trials, seed, fuel, max_length, modes) -> CheckReport:
    report = CheckReport("soundness")
    corpus_fuel = max(fuel, 10 ** 6)
    semantics = {mode: _CorpusSemantics(mode) for mode in modes}
    for case in corpus_cases(max_length):
        outcome = evaluate(case.program(), corpus_fuel)
        report.cases += 1
        report.notes[type(outcome).__name__.lower()] += 1
        for mode in modes:
            cx = semantics[mode].denote(case)
            _bound_check(report, case.describe(), outcome, cx, semantics[mode].potential, mode)
    for mode in modes:
        if semantics[mode].model.widened:
            report.notes[f"widened corpus {mode}"] += 1
    for trial_seed in range(seed, seed + trials):
        program, ty = fuzz_case(trial_seed)
        synth({}, program)
        outcome = evaluate(program, fuel)
        rec = extract_expr(program)
        report.cases += 1
        report.notes[f"fuzz {type(outcome).__name__.lower()}"] += 1
        for mode in modes:
            model = Model(ModelConfig(product_mode=mode, max_points=FUZZ_MAX_POINTS))
            cx = model.denote(rec)
            potential_model = Model(ModelConfig(product_mode=mode))
            _bound_check(report, f"fuzz seed {trial_seed}", outcome, cx,
                         lambda value: potential_model.denote(extract_value(value)), mode)
            if model.widened:
                report.notes["fuzz widened"] += 1
    return report


# -- adequacy -------------------------------------------------------------------

def check_adequacy(fuel: int = DEFAULT_FUEL, max_length: int = 6, retries: int = 3,
                   modes: Iterable[str] = MODES) -> CheckReport:
    """A finite semantic cost means the program terminates within that cost.

    Corpus programs are assumed to be sensibly ticked (every recursive call
    path passes a tick); this assumption is not checked.
    """
    return run_deep(_adequacy, fuel, max_length, retries, tuple(modes))


def _adequacy(fuel, max_length, retries, modes) -> CheckReport:
    report = CheckReport("adequacy")
    semantics = {mode: _CorpusSemantics(mode) for mode in modes}
    for case in corpus_cases(max_length):
        bounds = [semantics[mode].denote(case).cost for mode in modes]
        finite = [candidate for candidate in bounds if candidate != INF]
        report.cases += 1
        if not finite:
            report.notes["infinite semantic cost"] += 1
            continue
        bound = min(finite)
        budget = fuel
        outcome = evaluate(case.program(), budget)
        for _ in range(retries):
            if isinstance(outcome, Complete):
                break
            report.notes["fuel retry"] += 1
            budget *= 10
            outcome = evaluate(case.program(), budget)
        if isinstance(outcome, Incomplete):
            report.fail("termination", case.describe(),
                        f"finite semantic cost {bound} but no result within fuel {budget} "
                        f"(cost so far {outcome.cost})")
        elif outcome.cost > bound:
            report.fail("cost", case.describe(),
                        f"terminated at cost {outcome.cost} above semantic cost {bound}")
        else:
            report.notes["terminated within bound"] += 1
    return report


# -- model axioms ---------------------------------------------------------------

AXIOMS = ("beta-plus", "beta-times", "beta-to", "beta-fix", "beta-fold", "zero", "mon")


def _axiom_instance(kind: str, gen: fuzz.RecFuzzer):
    """A pair ``(smaller, larger)`` of closed terms the axiom relates."""
    rng = gen.rng
    ty = gen.random_type()
    if kind == "beta-plus":
        sum_ty = rng.choice((BOOL, TSum(TCost(), fuzz.REC_LIST)))
        index = rng.randrange(2)
        left, right = gen.fresh("x"), gen.fresh("x")
        arg = gen.gen(sum_ty.left if index == 0 else sum_ty.right)
        left_branch = gen.gen(ty, {left: sum_ty.left})
        right_branch = gen.gen(ty, {right: sum_ty.right})
        redex = R.Case(R.Inj(index, arg, sum_ty), left, left_branch, right, right_branch, ty)
        chosen, var = (left_branch, left) if index == 0 else (right_branch, right)
        return R.subst(chosen, {var: arg}), redex
    if kind == "beta-times":
        prod = rng.choice((TProd(TCost(), TCost()), TProd(fuzz.REC_LIST, UNIT)))
        first, second = gen.fresh("a"), gen.fresh("b")
        one, two = gen.gen(prod.left), gen.gen(prod.right)
        body = gen.gen(ty, {first: prod.left, second: prod.right})
        redex = R.LetPair(first, second, R.Pair(one, two), body, ty)
        return R.subst(body, {first: one, second: two}), redex
    if kind == "beta-to":
        dom = rng.choice((TCost(), UNIT, fuzz.REC_LIST, TCmplx(TCost())))
        param = gen.fresh("x")
        body = gen.gen(ty, {param: dom})
        arg = gen.gen(dom)
        return R.subst(body, {param: arg}), R.App(R.Lam(param, dom, body), arg)
    if kind == "beta-fix":
        fun_ty = rng.choice((TArrow(fuzz.REC_LIST, TCmplx(TCost())),
                             TArrow(fuzz.REC_LIST, TCmplx(fuzz.REC_LIST))))
        fix = gen.recursive_function(fun_ty, {}, gen.budget)
        return R.subst(fix.body, {fix.name: fix}), fix
    if kind == "beta-fold":
        body_ty = unroll(fuzz.REC_LIST)
        inner = gen.gen(body_ty)
        return inner, R.Unfold(fuzz.REC_LIST, R.Fold(fuzz.REC_LIST, inner))
    raise ValueError(kind)


def check_model_axioms(trials: int = 500, seed: int = 0,
                       modes: Iterable[str] = MODES) -> CheckReport:
    """The size-order axioms hold in the model.

    The beta rules for sums, products, functions and fixpoints hold as
    equalities, the fold rule as an inequality.  The zero rule and
    monotonicity in a free variable are sampled as well.
    """
    return run_deep(_model_axioms, trials, seed, tuple(modes))


def _model_axioms(trials, seed, modes) -> CheckReport:
    report = CheckReport("model-axioms")
    for trial in range(trials):
        for kind in AXIOMS:
            gen = fuzz.RecFuzzer(seed * 7919 + trial * len(AXIOMS) + AXIOMS.index(kind))
            for mode in modes:
                _check_axiom(report, kind, gen, mode, trial)
            report.cases += 1
    return report


def _model(mode: str) -> Model:
    return Model(ModelConfig(product_mode=mode, max_points=FUZZ_MAX_POINTS))


def _check_axiom(report: CheckReport, kind: str, gen: fuzz.RecFuzzer, mode: str, trial: int):
    subject = f"{kind} #{trial}"
    state = gen.rng.getstate()
    if kind == "zero":
        term = gen.gen(gen.rng.choice((TCost(), TCmplx(TCost()), TCmplx(fuzz.REC_LIST))))
        R.typecheck_rec({}, term)
        value = _model(mode).denote(term)
        cost = value.cost if hasattr(value, "cost") else value
        if not 0 <= cost:
            report.fail(kind, subject, f"{mode}: negative cost {render(cost)}")
        gen.rng.setstate(state)
        return
    if kind == "mon":
        _check_monotone(report, gen, mode, subject)
        gen.rng.setstate(state)
        return
    smaller, larger = _axiom_instance(kind, gen)
    gen.rng.setstate(state)
    ty = R.typecheck_rec({}, larger)
    if R.typecheck_rec({}, smaller) != ty:
        report.fail(kind, subject, "instance sides have different types")
        return
    model = _model(mode)
    left, right = model.denote(smaller), model.denote(larger)
    if model.widened:
        report.notes[f"widened {kind}"] += 1
    if kind == "beta-fold":
        holds = value_leq(left, right, mode)
        relation = "≤"
    else:
        holds = sem_equal(left, right, mode)
        relation = "="
    if not holds:
        report.fail(kind, subject, f"{mode}: {render(left)} {relation} {render(right)} fails for "
                                   f"{R.pretty_print_rec(smaller)} vs {R.pretty_print_rec(larger)}")


_MONOTONE_TYPES = (TCost(), fuzz.REC_LIST, TProd(TCost(), TCost()), TSum(TCost(), fuzz.REC_LIST),
                   BOOL, TCmplx(TCost()))


def _check_monotone(report: CheckReport, gen: fuzz.RecFuzzer, mode: str, subject: str) -> None:
    rng = gen.rng
    var_ty = rng.choice(_MONOTONE_TYPES)
    ty = gen.random_type()
    var = gen.fresh("v")
    context = gen.gen(ty, {var: var_ty})
    model = _model(mode)
    low = model.denote(gen.gen(var_ty))
    high = value_join(low, model.denote(gen.gen(var_ty)))
    below = model.denote(context, {var: low})
    above = model.denote(context, {var: high})
    if not value_leq(below, above, mode):
        report.fail("mon", subject, f"{mode}: {render(below)} ≰ {render(above)} in "
                                    f"{R.pretty_print_rec(context)}")


# -- lemmas ---------------------------------------------------------------------

LEMMAS = ("value-extraction", "substitution", "pairing", "simplify-sound")


def _random_value(rng: random.Random, ty, budget: int = 3) -> S.Expr:
    """A closed source value of ``ty``, found by running a fuzz program."""
    for attempt in range(20):
        program = fuzz.SourceFuzzer(rng.randrange(1 << 30), budget).program(ty)
        outcome = evaluate(program, DEFAULT_FUEL)
        if isinstance(outcome, Complete):
            return outcome.value
    return fuzz.SourceFuzzer(rng.randrange(1 << 30), budget).canonical(ty, fuzz._Scope())


def check_lemmas(trials: int = 500, seed: int = 0, modes: Iterable[str] = MODES) -> CheckReport:
    """Value extraction, substitution, complexity pairing and simplifier soundness."""
    return run_deep(_lemmas, trials, seed, tuple(modes))


def _lemmas(trials, seed, modes) -> CheckReport:
    report = CheckReport("lemmas")
    for trial in range(trials):
        rng = random.Random(seed * 104729 + trial)
        report.cases += 1
        ty = rng.choice(fuzz.SOURCE_TYPES)
        value = _random_value(rng, ty)
        # extracting a value is returning its potential
        lhs, rhs = simplify(extract_expr(value)), simplify(R.Val(extract_value(value)))
        if not R.alpha_equal(lhs, rhs):
            report.fail("value-extraction", f"#{trial}",
                        f"{R.pretty_print_rec(lhs)} vs {R.pretty_print_rec(rhs)}")
        _check_substitution(report, rng, trial)
        gen = fuzz.RecFuzzer(rng.randrange(1 << 30))
        term = gen.gen(TCmplx(rng.choice((TCost(), fuzz.REC_LIST, UNIT,
                                           TArrow(UNIT, TCmplx(TCost()))))))
        program, _ = fuzz_case(rng.randrange(1 << 30), 4)
        for mode in modes:
            _check_pairing(report, term, mode, trial)
            _check_simplify(report, term, mode, trial)
            _check_simplify(report, extract_expr(program), mode, trial)
    return report


def _check_substitution(report: CheckReport, rng: random.Random, trial: int) -> None:
    var_ty = rng.choice(fuzz.SOURCE_TYPES)
    ty = rng.choice(fuzz.SOURCE_RESULT_TYPES)
    var = "free_var"
    gen = fuzz.SourceFuzzer(rng.randrange(1 << 30), 4)
    open_term = gen.gen(ty, fuzz._Scope({var: var_ty}), gen.budget)
    value = _random_value(rng, var_ty)
    closed = S.subst_closed(open_term, {var: value})
    lhs = simplify(extract_expr(closed))
    rhs = simplify(R.subst(extract_expr(open_term, {var: var_ty}), {var: extract_value(value)}))
    if not R.alpha_equal(lhs, rhs):
        report.fail("substitution", f"#{trial}",
                    f"{R.pretty_print_rec(lhs)} vs {R.pretty_print_rec(rhs)}")


def _check_pairing(report: CheckReport, term: R.RExpr, mode: str, trial: int) -> None:
    model = _model(mode)
    whole = model.denote(term)
    cost, pot = model.denote(R.CostProj(term)), model.denote(R.PotProj(term))
    if whole.cost != cost or not sem_equal(whole.pot, pot, mode):
        report.fail("pairing", f"#{trial}",
                    f"{mode}: {render(whole)} vs ({render(cost)}, {render(pot)})")


def _check_simplify(report: CheckReport, term: R.RExpr, mode: str, trial: int) -> None:
    model = _model(mode)
    original = model.denote(term)
    for rewrite in (simplify, model_simplify):
        rewritten = model.denote(rewrite(term))
        if not sem_equal(original, rewritten, mode):
            report.fail("simplify-sound", f"#{trial}",
                        f"{mode} {rewrite.__name__}: {render(original)} vs {render(rewritten)} "
                        f"for {R.pretty_print_rec(term)}")
