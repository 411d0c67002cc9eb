"""Cost-counting evaluation with fuel.

The machine walks the big-step rules with an explicit continuation stack, so
the host call stack stays flat however deep the derivation gets.  Every rule
application consumes one unit of fuel.  When fuel runs out the evaluator
reports the ticks it has accumulated so far, which is exactly the cost of the
largest incomplete derivation that the fuel admits.

A ``tick e`` node counts only if there is fuel left to start ``e``: an
incomplete derivation may end at a tick whose premise was never entered, and
that derivation carries the cost of the premise only.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Union

from . import source as S
from .types import BOOL


class StuckError(Exception):
    """Evaluation reached a term no rule applies to (ill-typed input)."""


@dataclass(frozen=True)
class Complete:
    value: S.Expr
    cost: int


@dataclass(frozen=True)
class Incomplete:
    cost: int


Outcome = Union[Complete, Incomplete]

_TRUE = S.Inj(0, S.UNIT_VAL, BOOL)
_FALSE = S.Inj(1, S.UNIT_VAL, BOOL)

# continuation frame tags
_INJ, _PAIR_L, _PAIR_R, _FOLD, _UNFOLD, _CASE, _LET = range(7)
_APP_FN, _APP_ARG, _LEQ_L, _LEQ_R = range(7, 11)


def evaluate(term: S.Expr, fuel: int) -> Outcome:
    """Evaluate closed ``term`` using at most ``fuel`` rule applications."""
    if fuel < 0:
        raise ValueError("fuel must be non-negative")
    cost = 0
    stack: list[tuple] = []
    expr: S.Expr = term
    value: S.Expr | None = None
    evaluating = True
    while True:
        if evaluating:
            if fuel == 0:
                return Incomplete(cost)
            fuel -= 1
            node = expr
            if isinstance(node, (S.UnitVal, S.IntLit, S.Fun)):
                value, evaluating = node, False
            elif isinstance(node, S.Inj):
                stack.append((_INJ, node))
                expr = node.body
            elif isinstance(node, S.Pair):
                stack.append((_PAIR_L, node))
                expr = node.first
            elif isinstance(node, S.Fold):
                stack.append((_FOLD, node))
                expr = node.body
            elif isinstance(node, S.Unfold):
                stack.append((_UNFOLD, node))
                expr = node.body
            elif isinstance(node, S.Tick):
                if fuel == 0:
                    return Incomplete(cost)
                cost += 1
                expr = node.body
            elif isinstance(node, S.Case):
                stack.append((_CASE, node))
                expr = node.scrutinee
            elif isinstance(node, S.LetPair):
                stack.append((_LET, node))
                expr = node.bound
            elif isinstance(node, S.App):
                stack.append((_APP_FN, node))
                expr = node.fn
            elif isinstance(node, S.Leq):
                stack.append((_LEQ_L, node))
                expr = node.left
            elif isinstance(node, S.Var):
                raise StuckError(f"free variable {node.name!r}")
            else:
                raise StuckError(f"not an expression: {node!r}")
            continue

        if not stack:
            return Complete(value, cost)
        tag, node, *saved = stack.pop()
        if tag == _INJ:
            value = S.Inj(node.index, value, node.ty)
        elif tag == _PAIR_L:
            stack.append((_PAIR_R, node, value))
            expr, evaluating = node.second, True
        elif tag == _PAIR_R:
            value = S.Pair(saved[0], value)
        elif tag == _FOLD:
            value = S.Fold(node.ty, value)
        elif tag == _UNFOLD:
            if not isinstance(value, S.Fold):
                raise StuckError(f"unfold of a non-fold value {S.show_expr(value)}")
            value = value.body
        elif tag == _CASE:
            if not isinstance(value, S.Inj):
                raise StuckError(f"case on a non-injection {S.show_expr(value)}")
            if value.index == 0:
                expr = S.subst_closed(node.left, {node.left_var: value.body})
            else:
                expr = S.subst_closed(node.right, {node.right_var: value.body})
            evaluating = True
        elif tag == _LET:
            if not isinstance(value, S.Pair):
                raise StuckError(f"let on a non-pair {S.show_expr(value)}")
            mapping = {node.first_var: value.first}
            mapping[node.second_var] = value.second
            expr, evaluating = S.subst_closed(node.body, mapping), True
        elif tag == _APP_FN:
            stack.append((_APP_ARG, node, value))
            expr, evaluating = node.arg, True
        elif tag == _APP_ARG:
            fn = saved[0]
            if not isinstance(fn, S.Fun):
                raise StuckError(f"applying a non-function {S.show_expr(fn)}")
            mapping = {fn.fname: fn}
            mapping[fn.param] = value
            expr, evaluating = S.subst_closed(fn.body, mapping), True
        elif tag == _LEQ_L:
            stack.append((_LEQ_R, node, value))
            expr, evaluating = node.right, True
        elif tag == _LEQ_R:
            left, right = saved[0], value
            if not isinstance(left, S.IntLit) or not isinstance(right, S.IntLit):
                raise StuckError("leq on non-integers")
            value = _TRUE if left.value <= right.value else _FALSE


def value_self_eval_check(value: S.Expr, fuel: int | None = None) -> bool:
    """A closed value evaluates to itself at cost zero."""
    if not S.is_value(value):
        return False
    budget = fuel if fuel is not None else S.size(value) + 1
    out = evaluate(value, budget)
    return isinstance(out, Complete) and out.value == value and out.cost == 0


def cost_monotone_check(expr: S.Expr, fuels: Iterable[int], final_fuel: int = 10**6) -> bool:
    """Incomplete costs never decrease with fuel and stay below the complete cost."""
    full = evaluate(expr, final_fuel)
    if not isinstance(full, Complete):
        raise ValueError("expression does not complete within the final fuel")
    previous = 0
    for fuel in sorted(fuels):
        out = evaluate(expr, fuel)
        if out.cost < previous or out.cost > full.cost:
            return False
        if isinstance(out, Complete) and out != full:
            return False
        previous = out.cost
    return True


def fuel_needed(expr: S.Expr, limit: int) -> int | None:
    """Smallest fuel for which ``expr`` completes, or None if over ``limit``."""
    out = evaluate(expr, limit)
    if not isinstance(out, Complete):
        return None
    lo, hi = 1, limit
    while lo < hi:
        mid = (lo + hi) // 2
        if isinstance(evaluate(expr, mid), Complete):
            hi = mid
        else:
            lo = mid + 1
    return lo
