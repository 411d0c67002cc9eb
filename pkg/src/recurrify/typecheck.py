"""Type inference and elaboration for the source language.

Typing follows the usual rules for sums, products, recursive functions and
iso-recursive types.  Unannotated binders and injections get their types by
first-order unification; ``elaborate`` then writes every inferred annotation
back into the tree so later stages never have to infer anything.
Metavariables left unconstrained default to ``unit``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Mapping

from . import source as S
from .types import (BOOL, INT, UNIT, TArrow, TCmplx, TCost, TInt, TProd, TRec, TSum, TUnit,
                    TVar, Type, free_type_vars, list_of, subst_type, unroll)


class SourceTypeError(Exception):
    def __init__(self, rule: str, subterm: S.Expr | None, detail: str):
        where = f" in `{_clip(S.show_expr(subterm))}`" if subterm is not None else ""
        super().__init__(f"[{rule}] {detail}{where}")
        self.rule = rule
        self.subterm = subterm
        self.detail = detail


def _clip(text: str, limit: int = 80) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


@dataclass(frozen=True, eq=False)
class TMeta(Type):
    ident: int


class _Unifier:
    def __init__(self) -> None:
        self.solution: dict[int, Type] = {}
        self.counter = itertools.count()
        self.rigid = itertools.count()

    def fresh(self) -> TMeta:
        return TMeta(next(self.counter))

    def resolve(self, ty: Type) -> Type:
        while isinstance(ty, TMeta) and ty.ident in self.solution:
            ty = self.solution[ty.ident]
        return ty

    def zonk(self, ty: Type, default: Type | None = UNIT) -> Type:
        ty = self.resolve(ty)
        if isinstance(ty, TMeta):
            if default is None:
                return ty
            self.solution[ty.ident] = default
            return default
        if isinstance(ty, TSum):
            return TSum(self.zonk(ty.left, default), self.zonk(ty.right, default))
        if isinstance(ty, TProd):
            return TProd(self.zonk(ty.left, default), self.zonk(ty.right, default))
        if isinstance(ty, TArrow):
            return TArrow(self.zonk(ty.dom, default), self.zonk(ty.cod, default))
        if isinstance(ty, TRec):
            return TRec(ty.var, self.zonk(ty.body, default))
        if isinstance(ty, TCmplx):
            return TCmplx(self.zonk(ty.inner, default))
        return ty

    def occurs(self, ident: int, ty: Type) -> bool:
        ty = self.resolve(ty)
        if isinstance(ty, TMeta):
            return ty.ident == ident
        if isinstance(ty, (TSum, TProd)):
            return self.occurs(ident, ty.left) or self.occurs(ident, ty.right)
        if isinstance(ty, TArrow):
            return self.occurs(ident, ty.dom) or self.occurs(ident, ty.cod)
        if isinstance(ty, TRec):
            return self.occurs(ident, ty.body)
        return False

    def unify(self, left: Type, right: Type, rule: str, term: S.Expr) -> None:
        left, right = self.resolve(left), self.resolve(right)
        if isinstance(left, TMeta) and isinstance(right, TMeta) and left.ident == right.ident:
            return
        if isinstance(left, TMeta):
            self._bind(left, right, rule, term)
            return
        if isinstance(right, TMeta):
            self._bind(right, left, rule, term)
            return
        if type(left) is not type(right):
            self._mismatch(left, right, rule, term)
        if isinstance(left, (TSum, TProd)):
            self.unify(left.left, right.left, rule, term)
            self.unify(left.right, right.right, rule, term)
        elif isinstance(left, TArrow):
            self.unify(left.dom, right.dom, rule, term)
            self.unify(left.cod, right.cod, rule, term)
        elif isinstance(left, TRec):
            rigid = TVar(f"?r{next(self.rigid)}")
            self.unify(subst_type(left.body, rigid, left.var),
                       subst_type(right.body, rigid, right.var), rule, term)
        elif isinstance(left, TVar):
            if left.name != right.name:
                self._mismatch(left, right, rule, term)
        elif isinstance(left, (TUnit, TInt, TCost)):
            return
        else:
            self._mismatch(left, right, rule, term)

    def _bind(self, meta: TMeta, ty: Type, rule: str, term: S.Expr) -> None:
        if self.occurs(meta.ident, ty):
            raise SourceTypeError(rule, term, "infinite type (use an explicit mu type)")
        self.solution[meta.ident] = ty

    def _mismatch(self, left: Type, right: Type, rule: str, term: S.Expr):
        raise SourceTypeError(rule, term, f"cannot match {self.show(left)} with {self.show(right)}")

    def show(self, ty: Type) -> str:
        ty = self.zonk(ty, default=None)
        return _show_partial(ty)


def _show_partial(ty: Type) -> str:
    if isinstance(ty, TMeta):
        return f"?{ty.ident}"
    if isinstance(ty, TSum):
        return f"({_show_partial(ty.left)} + {_show_partial(ty.right)})"
    if isinstance(ty, TProd):
        return f"({_show_partial(ty.left)} * {_show_partial(ty.right)})"
    if isinstance(ty, TArrow):
        return f"({_show_partial(ty.dom)} -> {_show_partial(ty.cod)})"
    if isinstance(ty, TRec):
        return f"(mu {ty.var} . {_show_partial(ty.body)})"
    return str(ty)


def _check_closed(ty: Type, rule: str, term: S.Expr) -> None:
    if free_type_vars(ty):
        names = ", ".join(sorted(free_type_vars(ty)))
        raise SourceTypeError(rule, term, f"free type variable(s) {names} in annotation")


class _Inferencer:
    """Infers a type for every node and rebuilds the tree with annotations."""

    def __init__(self) -> None:
        self.u = _Unifier()

    def infer(self, ctx: Mapping[str, Type], expr: S.Expr) -> tuple[S.Expr, Type]:
        unifier = self.u
        if isinstance(expr, S.Var):
            if expr.name not in ctx:
                raise SourceTypeError("var", expr, f"unbound variable {expr.name!r}")
            return expr, ctx[expr.name]
        if isinstance(expr, S.UnitVal):
            return expr, UNIT
        if isinstance(expr, S.IntLit):
            return expr, INT
        if isinstance(expr, S.Leq):
            left, lt = self.infer(ctx, expr.left)
            right, rt = self.infer(ctx, expr.right)
            unifier.unify(lt, INT, "leq", expr)
            unifier.unify(rt, INT, "leq", expr)
            return S.Leq(left, right), BOOL
        if isinstance(expr, S.Inj):
            ty = expr.ty
            if ty is None:
                ty = TSum(unifier.fresh(), unifier.fresh())
            else:
                _check_closed(ty, "inj", expr)
                if not isinstance(ty, TSum):
                    raise SourceTypeError("inj", expr, f"injection annotated with non-sum {ty}")
            body, bt = self.infer(ctx, expr.body)
            unifier.unify(bt, ty.left if expr.index == 0 else ty.right, f"inj{expr.index}", expr)
            return S.Inj(expr.index, body, ty), ty
        if isinstance(expr, S.Case):
            scrut, st = self.infer(ctx, expr.scrutinee)
            lt, rt = unifier.fresh(), unifier.fresh()
            unifier.unify(st, TSum(lt, rt), "case", expr)
            left, t0 = self.infer({**ctx, expr.left_var: lt}, expr.left)
            right, t1 = self.infer({**ctx, expr.right_var: rt}, expr.right)
            unifier.unify(t0, t1, "case", expr)
            return S.Case(scrut, expr.left_var, left, expr.right_var, right), t0
        if isinstance(expr, S.Pair):
            first, at = self.infer(ctx, expr.first)
            second, bt = self.infer(ctx, expr.second)
            return S.Pair(first, second), TProd(at, bt)
        if isinstance(expr, S.LetPair):
            bound, bt = self.infer(ctx, expr.bound)
            t0, t1 = unifier.fresh(), unifier.fresh()
            unifier.unify(bt, TProd(t0, t1), "let", expr)
            body, rt = self.infer({**ctx, expr.first_var: t0, expr.second_var: t1}, expr.body)
            return S.LetPair(expr.first_var, expr.second_var, bound, body), rt
        if isinstance(expr, S.Fun):
            if expr.ty is not None:
                _check_closed(expr.ty, "fun", expr)
                dom, cod = expr.ty.dom, expr.ty.cod
            else:
                dom, cod = unifier.fresh(), unifier.fresh()
            arrow = TArrow(dom, cod)
            inner = {**ctx, expr.fname: arrow}
            inner[expr.param] = dom
            body, bt = self.infer(inner, expr.body)
            unifier.unify(bt, cod, "fun", expr)
            return S.Fun(expr.fname, expr.param, body, arrow), arrow
        if isinstance(expr, S.App):
            fn, ft = self.infer(ctx, expr.fn)
            arg, at = self.infer(ctx, expr.arg)
            res = unifier.fresh()
            unifier.unify(ft, TArrow(at, res), "app", expr)
            return S.App(fn, arg), res
        if isinstance(expr, (S.Fold, S.Unfold)):
            rule = "fold" if isinstance(expr, S.Fold) else "unfold"
            ty = expr.ty
            body, bt = self.infer(ctx, expr.body)
            if ty is None:
                ty = self._guess_rec(bt, isinstance(expr, S.Fold), expr)
            else:
                _check_closed(ty, rule, expr)
                if not isinstance(ty, TRec):
                    raise SourceTypeError(rule, expr, f"{rule} annotated with non-recursive {ty}")
            unrolled = self._unroll(ty)
            if isinstance(expr, S.Fold):
                unifier.unify(bt, unrolled, rule, expr)
                return S.Fold(ty, body), ty
            unifier.unify(bt, ty, rule, expr)
            return S.Unfold(ty, body), unrolled
        if isinstance(expr, S.Tick):
            body, bt = self.infer(ctx, expr.body)
            return S.Tick(body), bt
        raise TypeError(f"not an expression: {expr!r}")

    def _unroll(self, ty: Type) -> Type:
        """One-step unfolding that tolerates metavariables inside the body."""
        assert isinstance(ty, TRec)
        return subst_type(ty.body, ty, ty.var)

    def _guess_rec(self, body_type: Type, folding: bool, term: S.Expr) -> Type:
        """Sugar-generated folds and unfolds are list operations."""
        elem = self.u.fresh()
        ty = list_of(elem)
        if not folding:
            self.u.unify(body_type, ty, "unfold", term)
        return ty

    def finish(self, expr: S.Expr) -> S.Expr:
        """Replace every metavariable in annotations by its solution."""
        zonk = self.u.zonk
        if isinstance(expr, (S.Var, S.UnitVal, S.IntLit)):
            return expr
        if isinstance(expr, S.Inj):
            ty = zonk(expr.ty) if expr.ty is not None else None
            return S.Inj(expr.index, self.finish(expr.body), ty)
        if isinstance(expr, S.Fold):
            return S.Fold(zonk(expr.ty), self.finish(expr.body))
        if isinstance(expr, S.Unfold):
            return S.Unfold(zonk(expr.ty), self.finish(expr.body))
        if isinstance(expr, S.Tick):
            return S.Tick(self.finish(expr.body))
        if isinstance(expr, S.Pair):
            return S.Pair(self.finish(expr.first), self.finish(expr.second))
        if isinstance(expr, S.App):
            return S.App(self.finish(expr.fn), self.finish(expr.arg))
        if isinstance(expr, S.Leq):
            return S.Leq(self.finish(expr.left), self.finish(expr.right))
        if isinstance(expr, S.Case):
            return S.Case(self.finish(expr.scrutinee), expr.left_var, self.finish(expr.left),
                          expr.right_var, self.finish(expr.right))
        if isinstance(expr, S.LetPair):
            return S.LetPair(expr.first_var, expr.second_var, self.finish(expr.bound),
                             self.finish(expr.body))
        if isinstance(expr, S.Fun):
            ty = zonk(expr.ty)
            assert isinstance(ty, TArrow)
            return S.Fun(expr.fname, expr.param, self.finish(expr.body), ty)
        raise TypeError(f"not an expression: {expr!r}")


def elaborate(expr: S.Expr, ctx: Mapping[str, Type] | None = None) -> tuple[S.Expr, Type]:
    """Infer the type of ``expr`` and return it with every annotation filled in."""
    inf = _Inferencer()
    out, ty = inf.infer(dict(ctx or {}), expr)
    out = inf.finish(out)
    return out, inf.u.zonk(ty)


def typecheck(ctx: Mapping[str, Type], expr: S.Expr) -> Type:
    return elaborate(expr, ctx)[1]


def elaborate_program(prog):
    from .parser import Program

    out = Program()
    for name, body in prog.defs.items():
        out.defs[name] = elaborate(body)[0]
    if prog.main is not None:
        out.main = elaborate(prog.main)[0]
    return out


# -- checking fully annotated trees -------------------------------------------

def synth(ctx: Mapping[str, Type], expr: S.Expr) -> Type:
    """Type of an elaborated expression, without unification.

    Raises ``SourceTypeError`` on any mismatch; meant for trees produced by
    ``elaborate`` or by the generators, where every annotation is present.
    """
    if isinstance(expr, S.Var):
        if expr.name not in ctx:
            raise SourceTypeError("var", expr, f"unbound variable {expr.name!r}")
        return ctx[expr.name]
    if isinstance(expr, S.UnitVal):
        return UNIT
    if isinstance(expr, S.IntLit):
        return INT
    if isinstance(expr, S.Leq):
        _expect(synth(ctx, expr.left), INT, "leq", expr)
        _expect(synth(ctx, expr.right), INT, "leq", expr)
        return BOOL
    if isinstance(expr, S.Inj):
        if not isinstance(expr.ty, TSum):
            raise SourceTypeError("inj", expr, "missing sum annotation")
        branch = expr.ty.left if expr.index == 0 else expr.ty.right
        _expect(synth(ctx, expr.body), branch, "inj", expr)
        return expr.ty
    if isinstance(expr, S.Case):
        st = synth(ctx, expr.scrutinee)
        if not isinstance(st, TSum):
            raise SourceTypeError("case", expr, f"scrutinee has non-sum type {st}")
        t0 = synth({**ctx, expr.left_var: st.left}, expr.left)
        t1 = synth({**ctx, expr.right_var: st.right}, expr.right)
        _expect(t1, t0, "case", expr)
        return t0
    if isinstance(expr, S.Pair):
        return TProd(synth(ctx, expr.first), synth(ctx, expr.second))
    if isinstance(expr, S.LetPair):
        bt = synth(ctx, expr.bound)
        if not isinstance(bt, TProd):
            raise SourceTypeError("let", expr, f"pattern-bound expression has type {bt}")
        return synth({**ctx, expr.first_var: bt.left, expr.second_var: bt.right}, expr.body)
    if isinstance(expr, S.Fun):
        if expr.ty is None:
            raise SourceTypeError("fun", expr, "missing function annotation")
        inner = {**ctx, expr.fname: expr.ty}
        inner[expr.param] = expr.ty.dom
        _expect(synth(inner, expr.body), expr.ty.cod, "fun", expr)
        return expr.ty
    if isinstance(expr, S.App):
        ft = synth(ctx, expr.fn)
        if not isinstance(ft, TArrow):
            raise SourceTypeError("app", expr, f"applying non-function of type {ft}")
        _expect(synth(ctx, expr.arg), ft.dom, "app", expr)
        return ft.cod
    if isinstance(expr, S.Fold):
        if not isinstance(expr.ty, TRec):
            raise SourceTypeError("fold", expr, "missing recursive type annotation")
        _expect(synth(ctx, expr.body), unroll(expr.ty), "fold", expr)
        return expr.ty
    if isinstance(expr, S.Unfold):
        if not isinstance(expr.ty, TRec):
            raise SourceTypeError("unfold", expr, "missing recursive type annotation")
        _expect(synth(ctx, expr.body), expr.ty, "unfold", expr)
        return unroll(expr.ty)
    if isinstance(expr, S.Tick):
        return synth(ctx, expr.body)
    raise TypeError(f"not an expression: {expr!r}")


def _expect(actual: Type, expected: Type, rule: str, expr: S.Expr) -> None:
    if actual != expected:
        raise SourceTypeError(rule, expr, f"expected {expected}, got {actual}")

