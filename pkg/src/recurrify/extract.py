"""Recurrence extraction from source programs.

``extract_expr`` translates a source expression into a complexity-typed
recurrence expression, ``extract_value`` translates a value into its
potential, and the two type functions do the same for types.  Extraction
runs alongside a type synthesis pass so that every case and let in the
output carries its result type.
"""

from __future__ import annotations

from typing import Mapping

from . import reclang as R
from . import source as S
from .typecheck import SourceTypeError
from .types import (
    TArrow, TCmplx, TCost, TInt, TProd, TRec, TSum, TUnit, TVar, Type, unroll,
)


def extract_potential_type(ty: Type) -> Type:
    """The potential type of a source type."""
    if isinstance(ty, (TUnit, TInt, TVar)):
        return ty
    if isinstance(ty, TSum):
        return TSum(extract_potential_type(ty.left), extract_potential_type(ty.right))
    if isinstance(ty, TProd):
        return TProd(extract_potential_type(ty.left), extract_potential_type(ty.right))
    if isinstance(ty, TArrow):
        return TArrow(extract_potential_type(ty.dom), extract_type(ty.cod))
    if isinstance(ty, TRec):
        return TRec(ty.var, extract_potential_type(ty.body))
    if isinstance(ty, (TCost, TCmplx)):
        raise ValueError(f"{ty} is not a source type")
    raise TypeError(f"not a type: {ty!r}")


def extract_type(ty: Type) -> Type:
    """The complexity type of a source type."""
    return TCmplx(extract_potential_type(ty))


def extract_expr(expr: S.Expr, ctx: Mapping[str, Type] | None = None) -> R.RExpr:
    """Recurrence of an elaborated source expression typed under ``ctx``."""
    return _Extractor(expr, ctx).expr(dict(ctx or {}), expr)[0]


def extract_value(value: S.Expr, ctx: Mapping[str, Type] | None = None) -> R.RExpr:
    """Potential of a source value."""
    if not S.is_value(value):
        raise ValueError(f"not a value: {S.show_expr(value)}")
    return _Extractor(value, ctx).value(dict(ctx or {}), value)[0]


def extract_with_type(expr: S.Expr, ctx: Mapping[str, Type] | None = None) -> tuple[R.RExpr, Type]:
    """The recurrence together with the source type of ``expr``."""
    return _Extractor(expr, ctx).expr(dict(ctx or {}), expr)


class _Extractor:
    def __init__(self, root: S.Expr, ctx: Mapping[str, Type] | None):
        self.names = R.NameSupply(S.all_names(root) | set(ctx or ()))

    def bind(self, sources: list[tuple[R.RExpr, Type]], make_body) -> R.RExpr:
        names = tuple(self.names.fresh("p") for _ in sources)
        body = make_body(*[R.Var(name) for name in names])
        return R.Bind(names, tuple(src for src, _ in sources), body)

    def expr(self, ctx: dict, expr: S.Expr) -> tuple[R.RExpr, Type]:
        if isinstance(expr, (S.Var, S.UnitVal, S.IntLit)):
            pot, ty = self.value(ctx, expr)
            return R.Val(pot), ty
        if isinstance(expr, S.Fun):
            pot, ty = self.value(ctx, expr)
            return R.Val(pot), ty
        if isinstance(expr, S.Inj):
            if not isinstance(expr.ty, TSum):
                raise SourceTypeError("inj", expr, "missing sum annotation")
            inner = self.expr(ctx, expr.body)
            pot_ty = extract_potential_type(expr.ty)
            out = self.bind([inner], lambda bound_pot: R.Val(R.Inj(expr.index, bound_pot, pot_ty)))
            return out, expr.ty
        if isinstance(expr, S.Pair):
            first, second = self.expr(ctx, expr.first), self.expr(ctx, expr.second)
            out = self.bind([first, second],
                            lambda first_pot, second_pot: R.Val(R.Pair(first_pot, second_pot)))
            return out, TProd(first[1], second[1])
        if isinstance(expr, S.Leq):
            left, right = self.expr(ctx, expr.left), self.expr(ctx, expr.right)
            out = self.bind([left, right],
                            lambda first_pot, second_pot: R.Val(R.Leq(first_pot, second_pot)))
            return out, TSum(TUnit(), TUnit())
        if isinstance(expr, S.Fold):
            if not isinstance(expr.ty, TRec):
                raise SourceTypeError("fold", expr, "missing recursive type annotation")
            inner = self.expr(ctx, expr.body)
            pot_ty = extract_potential_type(expr.ty)
            return self.bind([inner], lambda bound_pot: R.Val(R.Fold(pot_ty, bound_pot))), expr.ty
        if isinstance(expr, S.Unfold):
            if not isinstance(expr.ty, TRec):
                raise SourceTypeError("unfold", expr, "missing recursive type annotation")
            inner = self.expr(ctx, expr.body)
            pot_ty = extract_potential_type(expr.ty)
            out = self.bind([inner], lambda bound_pot: R.Val(R.Unfold(pot_ty, bound_pot)))
            return out, unroll(expr.ty)
        if isinstance(expr, S.Tick):
            inner, ty = self.expr(ctx, expr.body)
            return R.Incr(inner), ty
        if isinstance(expr, S.App):
            fn, arg = self.expr(ctx, expr.fn), self.expr(ctx, expr.arg)
            fn_ty = fn[1]
            if not isinstance(fn_ty, TArrow):
                raise SourceTypeError("app", expr, f"applying non-function of type {fn_ty}")
            return self.bind([fn, arg], lambda fn_pot, arg_pot: R.App(fn_pot, arg_pot)), fn_ty.cod
        if isinstance(expr, S.Case):
            scrut = self.expr(ctx, expr.scrutinee)
            sum_ty = scrut[1]
            if not isinstance(sum_ty, TSum):
                raise SourceTypeError("case", expr, f"scrutinee has non-sum type {sum_ty}")
            left, left_ty = self.expr({**ctx, expr.left_var: sum_ty.left}, expr.left)
            right, _ = self.expr({**ctx, expr.right_var: sum_ty.right}, expr.right)
            result = extract_type(left_ty)
            out = self.bind([scrut], lambda bound_pot: R.Case(
                bound_pot, expr.left_var, left, expr.right_var, right, result))
            return out, left_ty
        if isinstance(expr, S.LetPair):
            bound = self.expr(ctx, expr.bound)
            prod_ty = bound[1]
            if not isinstance(prod_ty, TProd):
                raise SourceTypeError("let", expr, f"pattern-bound expression has type {prod_ty}")
            inner = {**ctx, expr.first_var: prod_ty.left}
            inner[expr.second_var] = prod_ty.right
            body, body_ty = self.expr(inner, expr.body)
            result = extract_type(body_ty)
            out = self.bind([bound], lambda bound_pot: R.LetPair(
                expr.first_var, expr.second_var, bound_pot, body, result))
            return out, body_ty
        raise TypeError(f"not an expression: {expr!r}")

    def value(self, ctx: dict, value: S.Expr) -> tuple[R.RExpr, Type]:
        if isinstance(value, S.Var):
            if value.name not in ctx:
                raise SourceTypeError("var", value, f"unbound variable {value.name!r}")
            return R.Var(value.name), ctx[value.name]
        if isinstance(value, S.UnitVal):
            return R.UNIT_VAL, TUnit()
        if isinstance(value, S.IntLit):
            return R.IntLit(value.value), TInt()
        if isinstance(value, S.Inj):
            pot, _ = self.value(ctx, value.body)
            return R.Inj(value.index, pot, extract_potential_type(value.ty)), value.ty
        if isinstance(value, S.Pair):
            first, first_ty = self.value(ctx, value.first)
            second, second_ty = self.value(ctx, value.second)
            return R.Pair(first, second), TProd(first_ty, second_ty)
        if isinstance(value, S.Fold):
            pot, _ = self.value(ctx, value.body)
            return R.Fold(extract_potential_type(value.ty), pot), value.ty
        if isinstance(value, S.Fun):
            if value.ty is None:
                raise SourceTypeError("fun", value, "missing function annotation")
            inner = {**ctx, value.fname: value.ty}
            inner[value.param] = value.ty.dom
            body, _ = self.expr(inner, value.body)
            pot_ty = extract_potential_type(value.ty)
            lam = R.Lam(value.param, extract_potential_type(value.ty.dom), body)
            return R.Fix(value.fname, pot_ty, lam), value.ty
        raise ValueError(f"not a value: {S.show_expr(value)}")


def potential_context(ctx: Mapping[str, Type]) -> dict[str, Type]:
    return {name: extract_potential_type(ty) for name, ty in ctx.items()}
