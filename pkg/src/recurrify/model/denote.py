"""Denotation of recurrence expressions in the constructor-counting model."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Mapping

from .. import reclang as R
from ..types import TArrow, TRec, Type
from .domains import (
    CARTESIAN, INT_TOP, POWERSET, PRODUCT_MODES, STAR, Cx, DomainMismatch, FuncVal, PairSet,
    SumSet, Tup, bottom, fold_size, is_size, join_all, make_pairs, make_sum, top,
    unfold_symbolic,
)
from .solver import DEFAULT_MAX_POINTS, TopDownSolver


@dataclass(frozen=True)
class ModelConfig:
    product_mode: str = CARTESIAN
    fix_fuel: int = 256
    memo_enabled: bool = True
    max_points: int = DEFAULT_MAX_POINTS

    def __post_init__(self):
        if self.product_mode not in PRODUCT_MODES:
            raise ValueError(f"unknown product mode {self.product_mode!r}")
        if self.fix_fuel < 1:
            raise ValueError("fix_fuel must be at least 1")


class Closure(FuncVal):
    """``λx. body`` with its captured environment (free variables only)."""

    __slots__ = ("lam", "env_key", "model", "_hash")

    def __init__(self, lam: R.Lam, env_key: tuple, model: "Model"):
        self.lam, self.env_key, self.model = lam, env_key, model
        self._hash = hash((id(lam), env_key))

    @property
    def dom(self) -> Type:
        return self.lam.ty

    def __eq__(self, other):
        return isinstance(other, Closure) and self.lam is other.lam and \
            self.model is other.model and self.env_key == other.env_key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"Closure({R.pretty_print_rec(self.lam)[:40]})"

    def apply(self, arg):
        env = dict(self.env_key)
        env[self.lam.param] = arg
        return self.model.eval(self.lam.body, env)


class FixFunc(FuncVal):
    """A recursive function value; its points are solved on demand."""

    __slots__ = ("fix", "env_key", "model", "_hash")

    def __init__(self, fix: R.Fix, env_key: tuple, model: "Model"):
        self.fix, self.env_key, self.model = fix, env_key, model
        self._hash = hash(("fix", id(fix), env_key))

    @property
    def dom(self) -> Type:
        return self.fix.ty.dom

    def __eq__(self, other):
        return isinstance(other, FixFunc) and self.fix is other.fix and \
            self.model is other.model and self.env_key == other.env_key

    def __hash__(self):
        return self._hash

    def __repr__(self):
        return f"FixFunc({self.fix.name})"

    def apply(self, arg):
        model = self.model
        solver = model.solver
        if not model.config.memo_enabled and not solver.called:
            solver.reset()
        return solver.query((self, arg), lambda: self.unroll(arg),
                            lambda: top(self.fix.ty.cod, model.mode))

    def unroll(self, arg):
        """The functional applied once, with self-calls answered by the solver."""
        env = dict(self.env_key)
        env[self.fix.name] = self
        return self.model.apply(self.model.eval(self.fix.body, env), arg)


class Model:
    """Denotes recurrence expressions under one configuration.

    A model instance keeps its fixpoint tables between queries, so it
    should be confined to one thread.
    """

    def __init__(self, config: ModelConfig | None = None):
        self.config = config or ModelConfig()
        self.mode = self.config.product_mode
        self.solver = TopDownSolver(self.config.fix_fuel, self.config.max_points)
        self._fix_cache: dict = {}
        self._free: dict = {}
        self._value_fix_widened = False

    @property
    def widened(self) -> bool:
        return self.solver.widened or self._value_fix_widened

    def reset_widened(self) -> None:
        self.solver.widened = False
        self._value_fix_widened = False

    def denote(self, expr: R.RExpr, env: Mapping | None = None):
        return self.eval(expr, dict(env or {}))

    def apply(self, fn, arg):
        if not isinstance(fn, FuncVal):
            raise DomainMismatch(f"applying a non-function {fn!r}")
        return fn.apply(arg)

    def _free_vars(self, node: R.RExpr) -> tuple[str, ...]:
        hit = self._free.get(id(node))
        if hit is None or hit[0] is not node:
            hit = (node, tuple(sorted(R.free_vars(node))))
            self._free[id(node)] = hit
        return hit[1]

    def _env_key(self, node: R.RExpr, env: dict) -> tuple:
        try:
            return tuple((name, env[name]) for name in self._free_vars(node))
        except KeyError as missing:
            raise DomainMismatch(f"unbound variable {missing.args[0]!r}") from None

    def eval(self, expr: R.RExpr, env: dict):
        try:
            handler = _HANDLERS[type(expr)]
        except KeyError:
            raise TypeError(f"not a recurrence expression: {expr!r}") from None
        return handler(self, expr, env)

    def _var(self, expr: R.Var, env: dict):
        try:
            return env[expr.name]
        except KeyError:
            raise DomainMismatch(f"unbound variable {expr.name!r}") from None

    def _plus(self, expr: R.Plus, env: dict):
        return _size(self.eval(expr.left, env)) + _size(self.eval(expr.right, env))

    def _size_succ(self, expr: R.SizeSucc, env: dict):
        return _size(self.eval(expr.body, env)) + 1

    def _inj(self, expr: R.Inj, env: dict):
        return make_sum([(expr.index, self.eval(expr.body, env))])

    def _pair(self, expr: R.Pair, env: dict):
        first, second = self.eval(expr.first, env), self.eval(expr.second, env)
        if self.mode == POWERSET:
            return make_pairs([(first, second)])
        return Tup(first, second)

    def _case(self, expr: R.Case, env: dict):
        scrut = self.eval(expr.scrutinee, env)
        if not isinstance(scrut, SumSet):
            raise DomainMismatch("case on a non-sum value")
        results = []
        for tag, payload in scrut:
            if tag == 0:
                results.append(self.eval(expr.left, {**env, expr.left_var: payload}))
            else:
                results.append(self.eval(expr.right, {**env, expr.right_var: payload}))
        return self._join(results, expr.ty, expr)

    def _let_pair(self, expr: R.LetPair, env: dict):
        bound = self.eval(expr.bound, env)
        if isinstance(bound, Tup):
            inner = {**env, expr.first_var: bound.first}
            inner[expr.second_var] = bound.second
            return self.eval(expr.body, inner)
        if not isinstance(bound, PairSet):
            raise DomainMismatch("let on a non-product value")
        results = []
        for first, second in bound:
            inner = {**env, expr.first_var: first}
            inner[expr.second_var] = second
            results.append(self.eval(expr.body, inner))
        return self._join(results, expr.ty, expr)

    def _lam(self, expr: R.Lam, env: dict):
        return Closure(expr, self._env_key(expr, env), self)

    def _app(self, expr: R.App, env: dict):
        return self.apply(self.eval(expr.fn, env), self.eval(expr.arg, env))

    def _fold(self, expr: R.Fold, env: dict):
        if not isinstance(expr.ty, TRec):
            raise DomainMismatch("fold without a recursive type annotation")
        return fold_size(expr.ty, self.eval(expr.body, env), self.mode)

    def _unfold(self, expr: R.Unfold, env: dict):
        if not isinstance(expr.ty, TRec):
            raise DomainMismatch("unfold without a recursive type annotation")
        return unfold_symbolic(expr.ty, self.eval(expr.body, env), self.mode)

    def _val(self, expr: R.Val, env: dict):
        return Cx(0, self.eval(expr.body, env))

    def _bind(self, expr: R.Bind, env: dict):
        cost = 0
        inner = dict(env)
        for name, src in zip(expr.names, expr.sources):
            value = _cmplx(self.eval(src, env))
            cost += value.cost
            inner[name] = value.pot
        body = _cmplx(self.eval(expr.body, inner))
        return Cx(cost + body.cost, body.pot)

    def _incr(self, expr: R.Incr, env: dict):
        value = _cmplx(self.eval(expr.body, env))
        return Cx(value.cost + 1, value.pot)

    def _cost(self, expr: R.CostProj, env: dict):
        return _cmplx(self.eval(expr.body, env)).cost

    def _pot(self, expr: R.PotProj, env: dict):
        return _cmplx(self.eval(expr.body, env)).pot

    def _with_cost(self, expr: R.WithCost, env: dict):
        return Cx(_size(self.eval(expr.cost, env)), self.eval(expr.pot, env))

    def _plus_cost(self, expr: R.PlusC, env: dict):
        cost = _size(self.eval(expr.cost, env))
        value = _cmplx(self.eval(expr.body, env))
        return Cx(cost + value.cost, value.pot)

    def _join(self, results: list, ty: Type | None, node: R.RExpr):
        if results:
            return join_all(results, None)
        if ty is None:
            raise DomainMismatch(f"empty join needs a result type annotation on {node}")
        return bottom(ty, self.mode)

    def fix(self, expr: R.Fix, env: dict):
        if expr.ty is None:
            raise DomainMismatch("fix without a type annotation")
        env_key = self._env_key(expr, env)
        if isinstance(expr.ty, TArrow):
            key = (id(expr), env_key)
            hit = self._fix_cache.get(key)
            if hit is None or hit.fix is not expr:
                hit = FixFunc(expr, env_key, self)
                self._fix_cache[key] = hit
            return hit
        # a recursive value that is not a function: plain descending iteration
        current = top(expr.ty, self.mode)
        inner = dict(env_key)
        for _ in range(self.config.fix_fuel):
            inner[expr.name] = current
            new = self.eval(expr.body, inner)
            if new == current:
                return current
            current = new
        self._value_fix_widened = True
        self.solver.taint()
        return top(expr.ty, self.mode)


def _size(value):
    if not is_size(value):
        raise DomainMismatch(f"expected a size, got {value!r}")
    return value


def _cmplx(value) -> Cx:
    if not isinstance(value, Cx):
        raise DomainMismatch(f"expected a complexity, got {value!r}")
    return value


def denote(expr: R.RExpr, env: Mapping | None = None, config: ModelConfig | None = None):
    """One-shot denotation with a fresh model."""
    return Model(config).denote(expr, env)


_BOOL_TOP = SumSet(frozenset({(0, STAR), (1, STAR)}))

_HANDLERS = {
    R.Var: Model._var,
    R.Zero: lambda self, expr, env: 0,
    R.One: lambda self, expr, env: 1,
    R.Plus: Model._plus,
    R.UnitVal: lambda self, expr, env: STAR,
    R.IntLit: lambda self, expr, env: INT_TOP,
    R.Leq: lambda self, expr, env: _BOOL_TOP,
    R.Size: lambda self, expr, env: expr.value,
    R.SizeSucc: Model._size_succ,
    R.Inj: Model._inj,
    R.Pair: Model._pair,
    R.Case: Model._case,
    R.LetPair: Model._let_pair,
    R.Lam: Model._lam,
    R.App: Model._app,
    R.Fix: Model.fix,
    R.Fold: Model._fold,
    R.Unfold: Model._unfold,
    R.Val: Model._val,
    R.Bind: Model._bind,
    R.Incr: Model._incr,
    R.CostProj: Model._cost,
    R.PotProj: Model._pot,
    R.WithCost: Model._with_cost,
    R.PlusC: Model._plus_cost,
}
