"""Abstract syntax of the source language, with substitution and printing."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .types import BOOL, INT, TArrow, TRec, Type, list_element, list_of, show_type, unroll


class Expr:
    __slots__ = ()

    def __str__(self) -> str:
        return show_expr(self)


@dataclass(frozen=True)
class Var(Expr):
    name: str


@dataclass(frozen=True)
class UnitVal(Expr):
    pass


@dataclass(frozen=True)
class IntLit(Expr):
    value: int


@dataclass(frozen=True)
class Inj(Expr):
    index: int
    body: Expr
    ty: Type | None = None  # the whole sum type, filled in by elaboration


@dataclass(frozen=True)
class Case(Expr):
    scrutinee: Expr
    left_var: str
    left: Expr
    right_var: str
    right: Expr


@dataclass(frozen=True)
class Pair(Expr):
    first: Expr
    second: Expr


@dataclass(frozen=True)
class LetPair(Expr):
    first_var: str
    second_var: str
    bound: Expr
    body: Expr


@dataclass(frozen=True)
class Fun(Expr):
    """``fun fname param => body``; both names scope over the body."""

    fname: str
    param: str
    body: Expr
    ty: TArrow | None = None


@dataclass(frozen=True)
class App(Expr):
    fn: Expr
    arg: Expr


@dataclass(frozen=True)
class Fold(Expr):
    ty: Type | None
    body: Expr


@dataclass(frozen=True)
class Unfold(Expr):
    ty: Type | None
    body: Expr


@dataclass(frozen=True)
class Tick(Expr):
    body: Expr


@dataclass(frozen=True)
class Leq(Expr):
    left: Expr
    right: Expr


UNIT_VAL = UnitVal()
WILDCARD = "_"


# -- sugar -------------------------------------------------------------------

def true_() -> Expr:
    return Inj(0, UNIT_VAL, BOOL)


def false_() -> Expr:
    return Inj(1, UNIT_VAL, BOOL)


def nil(elem: Type | None = None) -> Expr:
    ty = list_of(elem) if elem is not None else None
    return Fold(ty, Inj(0, UNIT_VAL, unroll(ty) if ty is not None else None))


def cons(head: Expr, tail: Expr, elem: Type | None = None) -> Expr:
    ty = list_of(elem) if elem is not None else None
    return Fold(ty, Inj(1, Pair(head, tail), unroll(ty) if ty is not None else None))


def list_literal(items: Iterable[Expr], elem: Type | None = None) -> Expr:
    items = list(items)
    out = nil(elem)
    for item in reversed(items):
        out = cons(item, out, elem)
    return out


def int_list(values: Iterable[int]) -> Expr:
    return list_literal((IntLit(number) for number in values), INT)


def caselist(scrutinee: Expr, nil_branch: Expr, head: str, tail: str, cons_branch: Expr,
             ty: Type | None = None) -> Expr:
    avoid = free_vars(cons_branch) | {head, tail}
    cell = fresh_name("z", avoid)
    return Case(Unfold(ty, scrutinee), WILDCARD, nil_branch, cell,
                LetPair(head, tail, Var(cell), cons_branch))


def if_(cond: Expr, then: Expr, orelse: Expr) -> Expr:
    return Case(cond, WILDCARD, then, WILDCARD, orelse)


# -- values ------------------------------------------------------------------

def is_value(expr: Expr) -> bool:
    if isinstance(expr, (UnitVal, IntLit, Fun)):
        return True
    if isinstance(expr, Inj):
        return is_value(expr.body)
    if isinstance(expr, Pair):
        return is_value(expr.first) and is_value(expr.second)
    if isinstance(expr, Fold):
        return is_value(expr.body)
    return False


def list_items(value: Expr) -> list[Expr] | None:
    """The elements of a list value, or None if ``value`` is not one."""
    out = []
    while isinstance(value, Fold) and isinstance(value.body, Inj):
        if value.body.index == 0:
            return out
        cell = value.body.body
        if not isinstance(cell, Pair):
            return None
        out.append(cell.first)
        value = cell.second
    return None


def show_value(value: Expr) -> str:
    """Compact rendering of a value: lists in brackets, booleans by name."""
    if isinstance(value, Fold) and value.ty is not None and list_element(value.ty) is not None:
        items = list_items(value)
        if items is not None:
            return "[" + ", ".join(show_value(item) for item in items) + "]"
    if isinstance(value, Pair):
        return f"({show_value(value.first)}, {show_value(value.second)})"
    if isinstance(value, Inj) and value.ty == BOOL and isinstance(value.body, UnitVal):
        return "true" if value.index == 0 else "false"
    if isinstance(value, Inj):
        return f"inj{value.index} {_parenthesize(value.body)}"
    if isinstance(value, Fold):
        return f"fold {_parenthesize(value.body)}"
    if isinstance(value, Fun):
        return f"<fun {value.fname}>"
    return show_expr(value)


def _parenthesize(value: Expr) -> str:
    text = show_value(value)
    return f"({text})" if isinstance(value, (Inj, Fold)) and not text.startswith("[") else text


# -- variables and substitution ----------------------------------------------

def free_vars(expr: Expr) -> frozenset[str]:
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    if isinstance(expr, (UnitVal, IntLit)):
        return frozenset()
    if isinstance(expr, (Inj, Fold, Unfold, Tick)):
        return free_vars(expr.body)
    if isinstance(expr, Case):
        return (free_vars(expr.scrutinee) | (free_vars(expr.left) - {expr.left_var})
                | (free_vars(expr.right) - {expr.right_var}))
    if isinstance(expr, Pair):
        return free_vars(expr.first) | free_vars(expr.second)
    if isinstance(expr, LetPair):
        return free_vars(expr.bound) | (free_vars(expr.body) - {expr.first_var, expr.second_var})
    if isinstance(expr, Fun):
        return free_vars(expr.body) - {expr.fname, expr.param}
    if isinstance(expr, App):
        return free_vars(expr.fn) | free_vars(expr.arg)
    if isinstance(expr, Leq):
        return free_vars(expr.left) | free_vars(expr.right)
    raise TypeError(f"not an expression: {expr!r}")


def all_names(expr: Expr) -> set[str]:
    """Every variable name occurring in ``expr``, bound or free."""
    out: set[str] = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.name)
        elif isinstance(node, Case):
            out.update((node.left_var, node.right_var))
            stack.extend((node.scrutinee, node.left, node.right))
        elif isinstance(node, LetPair):
            out.update((node.first_var, node.second_var))
            stack.extend((node.bound, node.body))
        elif isinstance(node, Fun):
            out.update((node.fname, node.param))
            stack.append(node.body)
        elif isinstance(node, (Inj, Fold, Unfold, Tick)):
            stack.append(node.body)
        elif isinstance(node, (Pair, App, Leq)):
            stack.extend(_pair_children(node))
    return out


def _pair_children(node: Expr) -> tuple[Expr, Expr]:
    if isinstance(node, Pair):
        return node.first, node.second
    if isinstance(node, App):
        return node.fn, node.arg
    return node.left, node.right  # type: ignore[attr-defined]


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    index = 1
    while f"{base}{index}" in avoid:
        index += 1
    return f"{base}{index}"


def subst(expr: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Capture-avoiding simultaneous substitution."""
    if not mapping:
        return expr
    incoming: frozenset[str] = frozenset().union(
        *(free_vars(replacement) for replacement in mapping.values()))
    return _subst(expr, dict(mapping), incoming)


def _binder(name: str, body: Expr, mapping: dict, incoming: frozenset[str],
            extra_avoid: frozenset[str] = frozenset()) -> tuple[str, dict]:
    """Prepare a binder: drop it from the mapping and rename it if it would capture."""
    inner = {var: replacement for var, replacement in mapping.items() if var != name}
    if name in incoming and name != WILDCARD and inner:
        avoid = incoming | all_names(body) | set(inner) | extra_avoid
        new = fresh_name(name, avoid)
        inner[name] = Var(new)
        return new, inner
    return name, inner


def _subst(expr: Expr, mapping: dict, incoming: frozenset[str]) -> Expr:
    if not mapping:
        return expr
    if isinstance(expr, Var):
        return mapping.get(expr.name, expr)
    if isinstance(expr, (UnitVal, IntLit)):
        return expr
    if isinstance(expr, Inj):
        return Inj(expr.index, _subst(expr.body, mapping, incoming), expr.ty)
    if isinstance(expr, Fold):
        return Fold(expr.ty, _subst(expr.body, mapping, incoming))
    if isinstance(expr, Unfold):
        return Unfold(expr.ty, _subst(expr.body, mapping, incoming))
    if isinstance(expr, Tick):
        return Tick(_subst(expr.body, mapping, incoming))
    if isinstance(expr, Pair):
        return Pair(_subst(expr.first, mapping, incoming), _subst(expr.second, mapping, incoming))
    if isinstance(expr, App):
        return App(_subst(expr.fn, mapping, incoming), _subst(expr.arg, mapping, incoming))
    if isinstance(expr, Leq):
        return Leq(_subst(expr.left, mapping, incoming), _subst(expr.right, mapping, incoming))
    if isinstance(expr, Case):
        lv, lmap = _binder(expr.left_var, expr.left, mapping, incoming)
        rv, rmap = _binder(expr.right_var, expr.right, mapping, incoming)
        return Case(_subst(expr.scrutinee, mapping, incoming),
                    lv, _subst(expr.left, lmap, incoming),
                    rv, _subst(expr.right, rmap, incoming))
    if isinstance(expr, LetPair):
        first, amap = _binder(expr.first_var, expr.body, mapping, incoming,
                              frozenset((expr.second_var,)))
        second, bmap = _binder(expr.second_var, expr.body, amap, incoming, frozenset((first,)))
        return LetPair(first, second, _subst(expr.bound, mapping, incoming),
                       _subst(expr.body, bmap, incoming))
    if isinstance(expr, Fun):
        fname, fmap = _binder(expr.fname, expr.body, mapping, incoming, frozenset((expr.param,)))
        param, xmap = _binder(expr.param, expr.body, fmap, incoming, frozenset((fname,)))
        return Fun(fname, param, _subst(expr.body, xmap, incoming), expr.ty)
    raise TypeError(f"not an expression: {expr!r}")


def strip_ticks(expr: Expr) -> Expr:
    if isinstance(expr, Tick):
        return strip_ticks(expr.body)
    if isinstance(expr, (Var, UnitVal, IntLit)):
        return expr
    if isinstance(expr, Inj):
        return Inj(expr.index, strip_ticks(expr.body), expr.ty)
    if isinstance(expr, Fold):
        return Fold(expr.ty, strip_ticks(expr.body))
    if isinstance(expr, Unfold):
        return Unfold(expr.ty, strip_ticks(expr.body))
    if isinstance(expr, Pair):
        return Pair(strip_ticks(expr.first), strip_ticks(expr.second))
    if isinstance(expr, App):
        return App(strip_ticks(expr.fn), strip_ticks(expr.arg))
    if isinstance(expr, Leq):
        return Leq(strip_ticks(expr.left), strip_ticks(expr.right))
    if isinstance(expr, Case):
        return Case(strip_ticks(expr.scrutinee), expr.left_var, strip_ticks(expr.left),
                    expr.right_var, strip_ticks(expr.right))
    if isinstance(expr, LetPair):
        return LetPair(expr.first_var, expr.second_var, strip_ticks(expr.bound),
                       strip_ticks(expr.body))
    if isinstance(expr, Fun):
        return Fun(expr.fname, expr.param, strip_ticks(expr.body), expr.ty)
    raise TypeError(f"not an expression: {expr!r}")


def size(expr: Expr) -> int:
    count = 0
    stack = [expr]
    while stack:
        node = stack.pop()
        count += 1
        if isinstance(node, (Inj, Fold, Unfold, Tick, Fun)):
            stack.append(node.body)
        elif isinstance(node, Case):
            stack.extend((node.scrutinee, node.left, node.right))
        elif isinstance(node, LetPair):
            stack.extend((node.bound, node.body))
        elif isinstance(node, (Pair, App, Leq)):
            stack.extend(_pair_children(node))
    return count


# -- printing ------------------------------------------------------------------
#
# The printer emits core syntax only (no list sugar), so that parsing the output
# reproduces the tree exactly.  ``show_value`` is the friendlier rendering used
# for program results.

_TOP, _APP, _ATOM = 0, 1, 2


def show_expr(expr: Expr) -> str:
    return _show(expr, _TOP)


def _ann(ty: Type | None) -> str:
    return f"[{show_type(ty)}]" if ty is not None else ""


def _show(expr: Expr, ctx: int) -> str:
    if isinstance(expr, Var):
        return expr.name
    if isinstance(expr, UnitVal):
        return "()"
    if isinstance(expr, IntLit):
        return str(expr.value)
    if isinstance(expr, Pair):
        return f"({_show(expr.first, _TOP)}, {_show(expr.second, _TOP)})"
    if isinstance(expr, Leq):
        return f"leq({_show(expr.left, _TOP)}, {_show(expr.right, _TOP)})"
    if isinstance(expr, App):
        text, prec = f"{_show(expr.fn, _APP)} {_show(expr.arg, _ATOM)}", _APP
    elif isinstance(expr, Inj):
        text, prec = f"inj{expr.index}{_ann(expr.ty)} {_show(expr.body, _ATOM)}", _APP
    elif isinstance(expr, Fold):
        text, prec = f"fold{_ann(expr.ty)} {_show(expr.body, _ATOM)}", _APP
    elif isinstance(expr, Unfold):
        text, prec = f"unfold{_ann(expr.ty)} {_show(expr.body, _ATOM)}", _APP
    elif isinstance(expr, Tick):
        text, prec = f"tick {_show(expr.body, _ATOM)}", _APP
    elif isinstance(expr, Case):
        text = (f"case {_show(expr.scrutinee, _TOP)} of "
                f"inj0 {expr.left_var} => {_show(expr.left, _APP)}"
                f" | inj1 {expr.right_var} => {_show(expr.right, _TOP)}")
        prec = _TOP
    elif isinstance(expr, LetPair):
        text = (f"let ({expr.first_var}, {expr.second_var}) = {_show(expr.bound, _TOP)} in "
                f"{_show(expr.body, _TOP)}")
        prec = _TOP
    elif isinstance(expr, Fun):
        if expr.ty is not None:
            signature = f"({expr.param} : {show_type(expr.ty.dom)}) : {show_type(expr.ty.cod)}"
            head = f"fun {expr.fname} {signature}"
        else:
            head = f"fun {expr.fname} {expr.param}"
        text, prec = f"{head} => {_show(expr.body, _TOP)}", _TOP
    else:
        raise TypeError(f"not an expression: {expr!r}")
    return f"({text})" if prec < ctx else text


def subst_closed(expr: Expr, mapping: Mapping[str, Expr]) -> Expr:
    """Substitution of closed expressions; no renaming is ever needed."""
    if not mapping:
        return expr
    if isinstance(expr, Var):
        return mapping.get(expr.name, expr)
    if isinstance(expr, (UnitVal, IntLit)):
        return expr
    if isinstance(expr, Inj):
        return Inj(expr.index, subst_closed(expr.body, mapping), expr.ty)
    if isinstance(expr, Fold):
        return Fold(expr.ty, subst_closed(expr.body, mapping))
    if isinstance(expr, Unfold):
        return Unfold(expr.ty, subst_closed(expr.body, mapping))
    if isinstance(expr, Tick):
        return Tick(subst_closed(expr.body, mapping))
    if isinstance(expr, Pair):
        return Pair(subst_closed(expr.first, mapping), subst_closed(expr.second, mapping))
    if isinstance(expr, App):
        return App(subst_closed(expr.fn, mapping), subst_closed(expr.arg, mapping))
    if isinstance(expr, Leq):
        return Leq(subst_closed(expr.left, mapping), subst_closed(expr.right, mapping))
    if isinstance(expr, Case):
        return Case(subst_closed(expr.scrutinee, mapping),
                    expr.left_var, subst_closed(expr.left, _without(mapping, expr.left_var)),
                    expr.right_var, subst_closed(expr.right, _without(mapping, expr.right_var)))
    if isinstance(expr, LetPair):
        return LetPair(expr.first_var, expr.second_var, subst_closed(expr.bound, mapping),
                       subst_closed(expr.body, _without(mapping, expr.first_var, expr.second_var)))
    if isinstance(expr, Fun):
        return Fun(expr.fname, expr.param,
                   subst_closed(expr.body, _without(mapping, expr.fname, expr.param)), expr.ty)
    raise TypeError(f"not an expression: {expr!r}")


def _without(mapping: Mapping[str, Expr], *names: str) -> Mapping[str, Expr]:
    if not any(candidate in mapping for candidate in names):
        return mapping
    return {var: replacement for var, replacement in mapping.items() if var not in names}
