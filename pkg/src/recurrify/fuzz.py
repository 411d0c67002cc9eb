"""Seeded, type-directed generators for source programs and recurrence terms."""

from __future__ import annotations

import random
from dataclasses import dataclass, field

from . import reclang as R
from . import source as S
from .types import (
    BOOL, COST, INT, UNIT, TArrow, TCmplx, TCost, TInt, TProd, TRec, TSum, TUnit, Type,
    list_element, list_of, unroll,
)

LIST_INT = list_of(INT)
LIST_UNIT = list_of(UNIT)

SOURCE_TYPES = (UNIT, BOOL, INT, LIST_INT, LIST_UNIT, TProd(UNIT, BOOL), TSum(UNIT, INT),
                TArrow(UNIT, UNIT), TArrow(LIST_INT, INT), TArrow(LIST_UNIT, LIST_UNIT))
SOURCE_RESULT_TYPES = (UNIT, BOOL, INT, LIST_INT, LIST_UNIT, TProd(INT, LIST_UNIT),
                       TSum(UNIT, LIST_INT), TArrow(UNIT, UNIT), TArrow(LIST_INT, LIST_INT))


@dataclass
class _Scope:
    vars: dict = field(default_factory=dict)
    # recursive calls allowed as leaves: (function name, guarded argument, result type)
    calls: list = field(default_factory=list)
    # functions that may be called on arbitrary arguments
    unguarded: list = field(default_factory=list)

    def bind(self, **entries: Type) -> "_Scope":
        return _Scope({**self.vars, **entries}, self.calls, self.unguarded)


class SourceFuzzer:
    """Random closed, fully annotated source terms.

    Recursive functions over lists follow a structural template: the
    recursive call is made on the tail.  With probability
    ``unguarded_probability`` a function may instead call itself on any
    argument, which can diverge.
    """

    def __init__(self, seed: int, budget: int = 5, unguarded_probability: float = 0.1,
                 tick_probability: float = 0.3):
        self.rng = random.Random(seed)
        self.budget = budget
        self.unguarded_probability = unguarded_probability
        self.tick_probability = tick_probability
        self.counter = 0

    def fresh(self, base: str) -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def program(self, ty: Type = UNIT) -> S.Expr:
        return self.gen(ty, _Scope(), self.budget)

    def gen(self, ty: Type, scope: _Scope, depth: int) -> S.Expr:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.15:
            return self.leaf(ty, scope, depth)
        choice = rng.random()
        if choice < self.tick_probability * 0.5:
            return S.Tick(self.gen(ty, scope, depth - 1))
        if choice < 0.55:
            return self.intro(ty, scope, depth)
        return self.elim(ty, scope, depth)

    def leaf(self, ty: Type, scope: _Scope, depth: int) -> S.Expr:
        rng = self.rng
        options = [S.Var(name) for name, var_ty in scope.vars.items() if var_ty == ty]
        for fname, arg, cod in scope.calls:
            if cod == ty:
                call = S.App(S.Var(fname), S.Var(arg))
                options.append(S.Tick(call) if rng.random() < 0.7 else call)
        if options and rng.random() < 0.8:
            return rng.choice(options)
        return self.canonical(ty, scope)

    def canonical(self, ty: Type, scope: _Scope) -> S.Expr:
        """A small closed value of ``ty`` (any free-variable use is optional)."""
        rng = self.rng
        if isinstance(ty, TUnit):
            return S.UNIT_VAL
        if isinstance(ty, TInt):
            return S.IntLit(rng.randrange(10))
        elem = list_element(ty)
        if elem is not None:
            items = [self.canonical(elem, scope) for _ in range(rng.randrange(3))]
            return S.list_literal(items, elem)
        if isinstance(ty, TSum):
            index = rng.randrange(2)
            return S.Inj(index, self.canonical(ty.left if index == 0 else ty.right, scope), ty)
        if isinstance(ty, TProd):
            return S.Pair(self.canonical(ty.left, scope), self.canonical(ty.right, scope))
        if isinstance(ty, TArrow):
            return self.function(ty, scope, 1)
        raise ValueError(f"cannot generate values of {ty}")

    def intro(self, ty: Type, scope: _Scope, depth: int) -> S.Expr:
        rng = self.rng
        elem = list_element(ty)
        if elem is not None:
            if rng.random() < 0.35:
                return S.nil(elem)
            return S.cons(self.gen(elem, scope, depth - 1), self.gen(ty, scope, depth - 1), elem)
        if isinstance(ty, TSum):
            if ty == BOOL and rng.random() < 0.4:
                return S.Leq(self.gen(INT, scope, depth - 1), self.gen(INT, scope, depth - 1))
            index = rng.randrange(2)
            return S.Inj(index, self.gen(ty.left if index == 0 else ty.right, scope, depth - 1), ty)
        if isinstance(ty, TProd):
            return S.Pair(self.gen(ty.left, scope, depth - 1), self.gen(ty.right, scope, depth - 1))
        if isinstance(ty, TArrow):
            return self.function(ty, scope, depth - 1)
        return self.leaf(ty, scope, depth)

    def function(self, ty: TArrow, scope: _Scope, depth: int) -> S.Expr:
        rng = self.rng
        fname, param = self.fresh("f"), self.fresh("x")
        elem = list_element(ty.dom)
        unguarded = rng.random() < self.unguarded_probability
        inner = scope.bind(**{param: ty.dom})
        inner = _Scope(inner.vars, list(scope.calls),
                       list(scope.unguarded) + ([(fname, ty)] if unguarded else []))
        if elem is not None and rng.random() < 0.7:
            head, tail = self.fresh("h"), self.fresh("t")
            nil_branch = self.gen(ty.cod, inner, depth - 1)
            cons_scope = inner.bind(**{head: elem, tail: ty.dom})
            cons_scope = _Scope(cons_scope.vars, cons_scope.calls + [(fname, tail, ty.cod)],
                                cons_scope.unguarded)
            cons_branch = self.gen(ty.cod, cons_scope, depth - 1)
            body = S.caselist(S.Var(param), nil_branch, head, tail, cons_branch, ty.dom)
        elif unguarded and rng.random() < 0.6:
            # a self-call on an arbitrary argument, possibly diverging
            call = S.App(S.Var(fname), self.gen(ty.dom, inner, depth - 1))
            body = S.Tick(call) if rng.random() < 0.5 else call
        else:
            body = self.gen(ty.cod, inner, depth - 1)
        return S.Fun(fname, param, body, ty)

    def elim(self, ty: Type, scope: _Scope, depth: int) -> S.Expr:
        rng = self.rng
        kind = rng.choice(("app", "case", "caselist", "let", "if", "tick"))
        if kind == "tick":
            return S.Tick(self.gen(ty, scope, depth - 1))
        if kind == "app":
            matching = [(fn_name, fn_ty) for fn_name, fn_ty in scope.unguarded if fn_ty.cod == ty]
            if matching and rng.random() < 0.5:
                fname, fty = rng.choice(matching)
                return S.App(S.Var(fname), self.gen(fty.dom, scope, depth - 1))
            dom = rng.choice(SOURCE_TYPES[:6])
            fn = self.gen(TArrow(dom, ty), scope, depth - 1)
            return S.App(fn, self.gen(dom, scope, depth - 1))
        if kind == "case":
            sum_ty = rng.choice((BOOL, TSum(UNIT, INT), TSum(LIST_INT, UNIT)))
            left, right = self.fresh("y"), self.fresh("y")
            return S.Case(self.gen(sum_ty, scope, depth - 1),
                          left, self.gen(ty, scope.bind(**{left: sum_ty.left}), depth - 1),
                          right, self.gen(ty, scope.bind(**{right: sum_ty.right}), depth - 1))
        if kind == "caselist":
            list_ty = rng.choice((LIST_INT, LIST_UNIT))
            elem = list_element(list_ty)
            head, tail = self.fresh("h"), self.fresh("t")
            return S.caselist(self.gen(list_ty, scope, depth - 1), self.gen(ty, scope, depth - 1),
                              head, tail,
                              self.gen(ty, scope.bind(**{head: elem, tail: list_ty}), depth - 1),
                              list_ty)
        if kind == "let":
            prod = rng.choice((TProd(UNIT, INT), TProd(LIST_INT, BOOL), TProd(INT, INT)))
            first, second = self.fresh("a"), self.fresh("b")
            return S.LetPair(first, second, self.gen(prod, scope, depth - 1),
                             self.gen(ty, scope.bind(**{first: prod.left, second: prod.right}),
                                      depth - 1))
        return S.Case(self.gen(BOOL, scope, depth - 1), S.WILDCARD, self.gen(ty, scope, depth - 1),
                      S.WILDCARD, self.gen(ty, scope, depth - 1))


def fuzz_program(seed: int, budget: int = 5, ty: Type = UNIT,
                 unguarded_probability: float = 0.1) -> S.Expr:
    """A closed well-typed source term of type ``ty``, determined by ``seed``."""
    return SourceFuzzer(seed, budget, unguarded_probability).program(ty)


# -- recurrence terms ------------------------------------------------------------

REC_LIST = list_of(UNIT)
REC_TYPES = (COST, UNIT, BOOL, REC_LIST, TProd(COST, COST), TCmplx(COST), TCmplx(REC_LIST),
             TArrow(UNIT, TCmplx(COST)), TArrow(REC_LIST, TCmplx(COST)), TArrow(COST, COST),
             TSum(COST, REC_LIST))


class RecFuzzer:
    """Random well-typed recurrence terms over a small set of types."""

    def __init__(self, seed: int, budget: int = 4):
        self.rng = random.Random(seed)
        self.budget = budget
        self.counter = 0

    def fresh(self, base: str) -> str:
        self.counter += 1
        return f"{base}{self.counter}"

    def random_type(self) -> Type:
        return self.rng.choice(REC_TYPES)

    def gen(self, ty: Type, ctx: dict | None = None, depth: int | None = None) -> R.RExpr:
        ctx = dict(ctx or {})
        return self._gen(ty, ctx, self.budget if depth is None else depth)

    def _gen(self, ty: Type, ctx: dict, depth: int) -> R.RExpr:
        rng = self.rng
        if depth <= 0 or rng.random() < 0.15:
            return self.leaf(ty, ctx)
        if rng.random() < 0.6:
            return self.intro(ty, ctx, depth)
        return self.elim(ty, ctx, depth)

    def leaf(self, ty: Type, ctx: dict) -> R.RExpr:
        rng = self.rng
        options = [R.Var(name) for name, var_ty in ctx.items() if var_ty == ty]
        if options and rng.random() < 0.7:
            return rng.choice(options)
        if isinstance(ty, TCost):
            return rng.choice((R.ZERO, R.ONE, R.plus(R.ONE, R.ONE)))
        if isinstance(ty, TUnit):
            return R.UNIT_VAL
        if isinstance(ty, TInt):
            return R.IntLit(rng.randrange(5))
        if list_element(ty) is not None:
            out = R.Fold(ty, R.Inj(0, R.UNIT_VAL, unroll(ty)))
            for _ in range(rng.randrange(3)):
                head = self.leaf(list_element(ty), ctx)
                out = R.Fold(ty, R.Inj(1, R.Pair(head, out), unroll(ty)))
            return out
        if isinstance(ty, TSum):
            index = rng.randrange(2)
            return R.Inj(index, self.leaf(ty.left if index == 0 else ty.right, ctx), ty)
        if isinstance(ty, TProd):
            return R.Pair(self.leaf(ty.left, ctx), self.leaf(ty.right, ctx))
        if isinstance(ty, TArrow):
            name = self.fresh("x")
            return R.Lam(name, ty.dom, self.leaf(ty.cod, {**ctx, name: ty.dom}))
        if isinstance(ty, TCmplx):
            return R.Val(self.leaf(ty.inner, ctx))
        raise ValueError(f"cannot generate terms of {ty}")

    def intro(self, ty: Type, ctx: dict, depth: int) -> R.RExpr:
        rng = self.rng
        gen = self._gen
        if isinstance(ty, TCost):
            pick = rng.random()
            if pick < 0.5:
                return R.Plus(gen(COST, ctx, depth - 1), gen(COST, ctx, depth - 1))
            inner = rng.choice((COST, UNIT, REC_LIST))
            return R.CostProj(gen(TCmplx(inner), ctx, depth - 1))
        elem = list_element(ty)
        if elem is not None:
            if rng.random() < 0.3:
                return R.Fold(ty, R.Inj(0, R.UNIT_VAL, unroll(ty)))
            if rng.random() < 0.3:
                return R.Size(rng.randrange(4), ty)
            cell = R.Pair(gen(elem, ctx, depth - 1), gen(ty, ctx, depth - 1))
            return R.Fold(ty, R.Inj(1, cell, unroll(ty)))
        if isinstance(ty, TSum):
            index = rng.randrange(2)
            return R.Inj(index, gen(ty.left if index == 0 else ty.right, ctx, depth - 1), ty)
        if isinstance(ty, TProd):
            return R.Pair(gen(ty.left, ctx, depth - 1), gen(ty.right, ctx, depth - 1))
        if isinstance(ty, TArrow):
            if list_element(ty.dom) is not None and rng.random() < 0.5:
                return self.recursive_function(ty, ctx, depth - 1)
            param = self.fresh("x")
            return R.Lam(param, ty.dom, gen(ty.cod, {**ctx, param: ty.dom}, depth - 1))
        if isinstance(ty, TCmplx):
            pick = rng.random()
            if pick < 0.3:
                return R.Val(gen(ty.inner, ctx, depth - 1))
            if pick < 0.5:
                return R.Incr(gen(ty, ctx, depth - 1))
            if pick < 0.6:
                return R.PlusC(gen(COST, ctx, depth - 1), gen(ty, ctx, depth - 1))
            if pick < 0.7:
                return R.WithCost(gen(ty.inner, ctx, depth - 1), gen(COST, ctx, depth - 1))
            names = tuple(self.fresh("p") for _ in range(rng.randrange(1, 3)))
            source_types = [rng.choice((COST, UNIT, REC_LIST)) for _ in names]
            sources = tuple(gen(TCmplx(source_ty), ctx, depth - 1) for source_ty in source_types)
            inner = {**ctx, **dict(zip(names, source_types))}
            return R.Bind(names, sources, gen(ty, inner, depth - 1))
        return self.leaf(ty, ctx)

    def recursive_function(self, ty: TArrow, ctx: dict, depth: int) -> R.RExpr:
        """``fix f. λn. case unfold n of nil => a | cons(h, t) => b`` with f on t."""
        fname, size_var, cell, head, tail = (self.fresh(base) for base in ("f", "n", "z", "h", "t"))
        elem = list_element(ty.dom)
        body_ctx = {**ctx, size_var: ty.dom}
        nil_branch = self._gen(ty.cod, body_ctx, depth - 1)
        cons_ctx = {**body_ctx, head: elem, tail: ty.dom}
        recursive = R.App(R.Var(fname), R.Var(tail))
        cons_branch = self._gen(ty.cod, cons_ctx, depth - 1)
        if isinstance(ty.cod, TCmplx) and ty.cod.inner == COST:
            result = self.fresh("r")
            cons_branch = R.Bind((result,), (recursive,), R.Incr(R.Val(
                R.plus(R.Var(result), self._gen(COST, cons_ctx, depth - 1)))))
        body = R.Case(R.Unfold(ty.dom, R.Var(size_var)), R.WILDCARD, nil_branch, cell,
                      R.LetPair(head, tail, R.Var(cell), cons_branch, ty.cod), ty.cod)
        return R.Fix(fname, ty, R.Lam(size_var, ty.dom, body))

    def elim(self, ty: Type, ctx: dict, depth: int) -> R.RExpr:
        rng = self.rng
        gen = self._gen
        kind = rng.choice(("app", "case", "let", "pot", "unfold"))
        if kind == "app":
            dom = rng.choice((UNIT, COST, REC_LIST))
            return R.App(gen(TArrow(dom, ty), ctx, depth - 1), gen(dom, ctx, depth - 1))
        if kind == "case":
            sum_ty = rng.choice((BOOL, TSum(COST, REC_LIST)))
            left, right = self.fresh("y"), self.fresh("y")
            return R.Case(gen(sum_ty, ctx, depth - 1),
                          left, gen(ty, {**ctx, left: sum_ty.left}, depth - 1),
                          right, gen(ty, {**ctx, right: sum_ty.right}, depth - 1), ty)
        if kind == "let":
            prod = rng.choice((TProd(COST, COST), TProd(REC_LIST, UNIT)))
            first, second = self.fresh("a"), self.fresh("b")
            return R.LetPair(first, second, gen(prod, ctx, depth - 1),
                             gen(ty, {**ctx, first: prod.left, second: prod.right}, depth - 1), ty)
        if kind == "pot" and not isinstance(ty, TCmplx) and not isinstance(ty, TArrow):
            return R.PotProj(gen(TCmplx(ty), ctx, depth - 1))
        # case over an unfolded list
        cell, head, tail = self.fresh("z"), self.fresh("h"), self.fresh("t")
        scrut = R.Unfold(REC_LIST, gen(REC_LIST, ctx, depth - 1))
        cons_ctx = {**ctx, head: UNIT, tail: REC_LIST}
        return R.Case(scrut, R.WILDCARD, gen(ty, ctx, depth - 1), cell,
                      R.LetPair(head, tail, R.Var(cell), gen(ty, cons_ctx, depth - 1), ty), ty)
