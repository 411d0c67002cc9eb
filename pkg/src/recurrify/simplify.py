"""Rewriting simplifiers for recurrence expressions.

``simplify`` applies only the equational monad laws, oriented left to
right: bind-val, val-cost, val-pot, bind-cost, bind-pot, incr-cost, incr-pot
and the unit/associativity laws for ``+``.  Every step is an equality of the
size order, so the result is equal to the input in any model.

``model_simplify`` goes further with equations valid in the
constructor-counting model: a bind whose sources are split into cost and
potential becomes ``c +c body``, and list constructors become size
arithmetic.  It is what produces the readable recurrences for the corpus.
"""

from __future__ import annotations

from .reclang import (
    ONE, ZERO, App, Bind, Case, CostProj, Fix, Fold, Incr, Inj, IntLit, Lam, Leq,
    LetPair, One, Pair, Plus, PlusC, PotProj, RExpr, Size, SizeSucc, UnitVal, Unfold,
    Val, Var, WithCost, Zero, all_names, free_vars, fresh_name, plus, subst,
)
from .types import list_element


def _map_children(expr: RExpr, fn) -> RExpr:
    """Rebuild ``expr`` with ``fn`` applied to each immediate subterm."""
    if isinstance(expr, (Var, Zero, One, UnitVal, IntLit, Size)):
        return expr
    if isinstance(expr, Plus):
        return Plus(fn(expr.left), fn(expr.right))
    if isinstance(expr, Leq):
        return Leq(fn(expr.left), fn(expr.right))
    if isinstance(expr, Pair):
        return Pair(fn(expr.first), fn(expr.second))
    if isinstance(expr, App):
        return App(fn(expr.fn), fn(expr.arg))
    if isinstance(expr, Inj):
        return Inj(expr.index, fn(expr.body), expr.ty)
    if isinstance(expr, Fold):
        return Fold(expr.ty, fn(expr.body))
    if isinstance(expr, Unfold):
        return Unfold(expr.ty, fn(expr.body))
    if isinstance(expr, (Val, Incr, CostProj, PotProj, SizeSucc)):
        return type(expr)(fn(expr.body))
    if isinstance(expr, Case):
        return Case(fn(expr.scrutinee), expr.left_var, fn(expr.left), expr.right_var,
                    fn(expr.right), expr.ty)
    if isinstance(expr, LetPair):
        return LetPair(expr.first_var, expr.second_var, fn(expr.bound), fn(expr.body), expr.ty)
    if isinstance(expr, Lam):
        return Lam(expr.param, expr.ty, fn(expr.body))
    if isinstance(expr, Fix):
        return Fix(expr.name, expr.ty, fn(expr.body))
    if isinstance(expr, Bind):
        return Bind(expr.names, tuple(fn(source) for source in expr.sources), fn(expr.body))
    if isinstance(expr, WithCost):
        return WithCost(fn(expr.pot), fn(expr.cost))
    if isinstance(expr, PlusC):
        return PlusC(fn(expr.cost), fn(expr.body))
    raise TypeError(f"not a recurrence expression: {expr!r}")


# -- monad laws --------------------------------------------------------------

def simplify(expr: RExpr) -> RExpr:
    """Normal form under the oriented monad-law rewrites."""
    return _simp(expr)


def _simp(expr: RExpr) -> RExpr:
    return _head(_map_children(expr, _simp))


def _head(expr: RExpr) -> RExpr:
    """Rewrite at the root of ``expr``, whose children are already normal."""
    if isinstance(expr, Plus):
        return plus(expr)
    if isinstance(expr, Bind):
        return _bind_val(expr)
    if isinstance(expr, CostProj):
        inner = expr.body
        if isinstance(inner, Val):
            return ZERO
        if isinstance(inner, Incr):
            return plus(_head(CostProj(inner.body)), ONE)
        if isinstance(inner, Bind):
            pots = {name: _head(PotProj(source))
                    for name, source in zip(inner.names, inner.sources)}
            costs = [_head(CostProj(source)) for source in inner.sources]
            return plus(*costs, _simp(CostProj(subst(inner.body, pots))))
        return expr
    if isinstance(expr, PotProj):
        inner = expr.body
        if isinstance(inner, Val):
            return inner.body
        if isinstance(inner, Incr):
            return _head(PotProj(inner.body))
        if isinstance(inner, Bind):
            pots = {name: _head(PotProj(source))
                    for name, source in zip(inner.names, inner.sources)}
            return _simp(PotProj(subst(inner.body, pots)))
        return expr
    return expr


def _bind_val(expr: Bind) -> RExpr:
    """Substitute every ``val`` source away; keep the remaining ones."""
    mapping = {}
    kept = []
    for name, src in zip(expr.names, expr.sources):
        if isinstance(src, Val):
            mapping[name] = src.body
        else:
            kept.append((name, src))
    if not mapping:
        return expr
    incoming = set().union(*(free_vars(value) for value in mapping.values()))
    avoid = incoming | all_names(expr.body) | set(expr.names)
    names, sources = [], []
    for name, src in kept:
        # a kept binder must not capture a free variable of a substituted value
        if name in incoming:
            new = fresh_name(name, avoid)
            avoid.add(new)
            mapping[name] = Var(new)
            name = new
        names.append(name)
        sources.append(src)
    body = _simp(subst(expr.body, mapping))
    if not names:
        return body
    return Bind(tuple(names), tuple(sources), body)


# -- model-level equations -----------------------------------------------------

def model_simplify(expr: RExpr) -> RExpr:
    """``simplify`` followed by the constructor-model equations."""
    return _ms(simplify(expr))


def _ms(expr: RExpr) -> RExpr:
    return _ms_head(_map_children(expr, _ms))


def _split(src: RExpr) -> tuple[RExpr, RExpr]:
    """Cost and potential of a complexity-typed term, as separate terms."""
    if isinstance(src, Val):
        return ZERO, src.body
    if isinstance(src, WithCost):
        return src.cost, src.pot
    if isinstance(src, PlusC):
        cost, pot = _split(src.body)
        return plus(src.cost, cost), pot
    if isinstance(src, Incr):
        cost, pot = _split(src.body)
        return plus(cost, ONE), pot
    return CostProj(src), PotProj(src)


def _ms_head(expr: RExpr) -> RExpr:
    if isinstance(expr, Plus):
        return plus(expr)
    if isinstance(expr, Bind):
        costs, pots = [], {}
        for name, src in zip(expr.names, expr.sources):
            cost, pot = _split(src)
            costs.append(cost)
            pots[name] = pot
        return _ms_head(PlusC(plus(*costs), _ms(subst(expr.body, pots))))
    if isinstance(expr, PlusC):
        cost, body = plus(expr.cost), expr.body
        if isinstance(cost, Zero):
            return body
        if isinstance(body, Val):
            return WithCost(body.body, cost)
        if isinstance(body, WithCost):
            return WithCost(body.pot, plus(cost, body.cost))
        if isinstance(body, PlusC):
            return _ms_head(PlusC(plus(cost, body.cost), body.body))
        return PlusC(cost, body)
    if isinstance(expr, CostProj):
        inner = expr.body
        if isinstance(inner, WithCost):
            return inner.cost
        if isinstance(inner, PlusC):
            return plus(inner.cost, _ms_head(CostProj(inner.body)))
        return _head(expr)
    if isinstance(expr, PotProj):
        inner = expr.body
        if isinstance(inner, WithCost):
            return inner.pot
        if isinstance(inner, PlusC):
            return _ms_head(PotProj(inner.body))
        return _head(expr)
    if isinstance(expr, Fold) and expr.ty is not None and list_element(expr.ty) is not None:
        body = expr.body
        if isinstance(body, Inj) and body.index == 0:
            return Size(0, expr.ty)
        if isinstance(body, Inj) and isinstance(body.body, Pair):
            return _ms_head(SizeSucc(body.body.second))
        return expr
    if isinstance(expr, SizeSucc) and isinstance(expr.body, Size):
        return Size(expr.body.value + 1, expr.body.ty)
    return expr
