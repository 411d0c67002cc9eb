"""The recurrence language: syntax, substitution, typing and printing.

Besides the core grammar, four notation forms are included.  They are only
produced by the model-level simplifier and all have direct denotations:

* ``WithCost(pot, cost)``: a complexity with the given cost and potential;
* ``PlusC(cost, e)``: ``e`` with ``cost`` added to its cost;
* ``Size(n, ty)``: the size literal ``n`` at a list type;
* ``SizeSucc(e)``: one more constructor than ``e``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Iterable, Mapping

from .types import (
    BOOL, COST, INT, UNIT, TArrow, TCmplx, TCost, TProd, TRec, TSum, Type,
    contains_cmplx, list_element, show_type, unroll,
)


class RExpr:
    __slots__ = ()

    def __str__(self) -> str:
        return pretty_print_rec(self)


@dataclass(frozen=True)
class Var(RExpr):
    name: str


@dataclass(frozen=True)
class Zero(RExpr):
    pass


@dataclass(frozen=True)
class One(RExpr):
    pass


@dataclass(frozen=True)
class Plus(RExpr):
    left: RExpr
    right: RExpr


@dataclass(frozen=True)
class UnitVal(RExpr):
    pass


@dataclass(frozen=True)
class IntLit(RExpr):
    value: int


@dataclass(frozen=True)
class Inj(RExpr):
    index: int
    body: RExpr
    ty: Type | None = None  # the sum type


@dataclass(frozen=True)
class Case(RExpr):
    scrutinee: RExpr
    left_var: str
    left: RExpr
    right_var: str
    right: RExpr
    ty: Type | None = None  # result type


@dataclass(frozen=True)
class Pair(RExpr):
    first: RExpr
    second: RExpr


@dataclass(frozen=True)
class LetPair(RExpr):
    first_var: str
    second_var: str
    bound: RExpr
    body: RExpr
    ty: Type | None = None  # result type


@dataclass(frozen=True)
class Lam(RExpr):
    param: str
    ty: Type | None  # parameter type
    body: RExpr


@dataclass(frozen=True)
class App(RExpr):
    fn: RExpr
    arg: RExpr


@dataclass(frozen=True)
class Fix(RExpr):
    name: str
    ty: Type | None
    body: RExpr


@dataclass(frozen=True)
class Fold(RExpr):
    ty: Type | None
    body: RExpr


@dataclass(frozen=True)
class Unfold(RExpr):
    ty: Type | None
    body: RExpr


@dataclass(frozen=True)
class Leq(RExpr):
    left: RExpr
    right: RExpr


@dataclass(frozen=True)
class Val(RExpr):
    body: RExpr


@dataclass(frozen=True)
class Bind(RExpr):
    """``(x0, .., xn-1) <- (e0, .., en-1); body``."""

    names: tuple[str, ...]
    sources: tuple[RExpr, ...]
    body: RExpr

    def __post_init__(self):
        if len(self.names) != len(self.sources) or not self.names:
            raise ValueError("bind needs as many names as sources, and at least one")
        if len(set(self.names)) != len(self.names):
            raise ValueError("bind names must be distinct")


@dataclass(frozen=True)
class Incr(RExpr):
    body: RExpr


@dataclass(frozen=True)
class CostProj(RExpr):
    body: RExpr


@dataclass(frozen=True)
class PotProj(RExpr):
    body: RExpr


@dataclass(frozen=True)
class WithCost(RExpr):
    pot: RExpr
    cost: RExpr


@dataclass(frozen=True)
class PlusC(RExpr):
    cost: RExpr
    body: RExpr


@dataclass(frozen=True)
class Size(RExpr):
    value: int
    ty: Type | None = None


@dataclass(frozen=True)
class SizeSucc(RExpr):
    body: RExpr


ZERO = Zero()
ONE = One()
UNIT_VAL = UnitVal()
WILDCARD = "_"

_UNARY = (Inj, Val, Incr, CostProj, PotProj, Fold, Unfold, SizeSucc)


def plus(*terms: RExpr) -> RExpr:
    """Right-nested sum with zeros dropped (``0`` if nothing is left)."""
    flat: list[RExpr] = []
    for term in terms:
        _flatten_plus(term, flat)
    if not flat:
        return ZERO
    out = flat[-1]
    for term in reversed(flat[:-1]):
        out = Plus(term, out)
    return out


def _flatten_plus(term: RExpr, out: list[RExpr]) -> None:
    while isinstance(term, Plus):
        _flatten_plus(term.left, out)
        term = term.right
    if not isinstance(term, Zero):
        out.append(term)


def cost_literal(amount: int) -> RExpr:
    return plus(*([ONE] * amount))


def if_(cond: RExpr, then: RExpr, orelse: RExpr, ty: Type | None = None) -> RExpr:
    return Case(cond, WILDCARD, then, WILDCARD, orelse, ty)


# -- variables ---------------------------------------------------------------

def children(expr: RExpr) -> tuple[RExpr, ...]:
    if isinstance(expr, _UNARY):
        return (expr.body,)
    if isinstance(expr, (Plus, Leq)):
        return (expr.left, expr.right)
    if isinstance(expr, Pair):
        return (expr.first, expr.second)
    if isinstance(expr, App):
        return (expr.fn, expr.arg)
    if isinstance(expr, Case):
        return (expr.scrutinee, expr.left, expr.right)
    if isinstance(expr, LetPair):
        return (expr.bound, expr.body)
    if isinstance(expr, (Lam, Fix)):
        return (expr.body,)
    if isinstance(expr, Bind):
        return expr.sources + (expr.body,)
    if isinstance(expr, WithCost):
        return (expr.pot, expr.cost)
    if isinstance(expr, PlusC):
        return (expr.cost, expr.body)
    return ()


def free_vars(expr: RExpr) -> frozenset[str]:
    if isinstance(expr, Var):
        return frozenset((expr.name,))
    if isinstance(expr, Case):
        return (free_vars(expr.scrutinee) | (free_vars(expr.left) - {expr.left_var})
                | (free_vars(expr.right) - {expr.right_var}))
    if isinstance(expr, LetPair):
        return free_vars(expr.bound) | (free_vars(expr.body) - {expr.first_var, expr.second_var})
    if isinstance(expr, Lam):
        return free_vars(expr.body) - {expr.param}
    if isinstance(expr, Fix):
        return free_vars(expr.body) - {expr.name}
    if isinstance(expr, Bind):
        out = free_vars(expr.body) - set(expr.names)
        for source in expr.sources:
            out |= free_vars(source)
        return out
    out = frozenset()
    for child in children(expr):
        out |= free_vars(child)
    return out


def all_names(expr: RExpr) -> set[str]:
    out: set[str] = set()
    stack = [expr]
    while stack:
        node = stack.pop()
        if isinstance(node, Var):
            out.add(node.name)
        elif isinstance(node, Case):
            out.update((node.left_var, node.right_var))
        elif isinstance(node, LetPair):
            out.update((node.first_var, node.second_var))
        elif isinstance(node, Lam):
            out.add(node.param)
        elif isinstance(node, Fix):
            out.add(node.name)
        elif isinstance(node, Bind):
            out.update(node.names)
        stack.extend(children(node))
    return out


def fresh_name(base: str, avoid: Iterable[str]) -> str:
    avoid = set(avoid)
    if base not in avoid:
        return base
    index = 1
    while f"{base}{index}" in avoid:
        index += 1
    return f"{base}{index}"


class NameSupply:
    """Deterministic fresh names ``p``, ``p1``, ``p2``, ... avoiding a set."""

    def __init__(self, avoid: Iterable[str] = ()):
        self.used = set(avoid)

    def fresh(self, base: str) -> str:
        name = fresh_name(base, self.used)
        self.used.add(name)
        return name


def subst(expr: RExpr, mapping: Mapping[str, RExpr]) -> RExpr:
    """Capture-avoiding simultaneous substitution."""
    mapping = {name: replacement for name, replacement in mapping.items()
               if not (isinstance(replacement, Var) and replacement.name == name)}
    if not mapping:
        return expr
    incoming = frozenset().union(*(free_vars(replacement) for replacement in mapping.values()))
    return _Subst(incoming).go(expr, mapping)


class _Subst:
    def __init__(self, incoming: frozenset[str]):
        self.incoming = incoming

    def binders(self, names: tuple[str, ...], bodies: tuple[RExpr, ...],
                mapping: dict) -> tuple[tuple[str, ...], dict]:
        inner = {var: replacement for var, replacement in mapping.items() if var not in names}
        if not inner:
            return names, inner
        out = []
        avoid = set(self.incoming) | set(inner) | set(names)
        for body in bodies:
            avoid |= all_names(body)
        for name in names:
            if name in self.incoming and name != WILDCARD:
                new = fresh_name(name, avoid)
                avoid.add(new)
                inner[name] = Var(new)
                out.append(new)
            else:
                out.append(name)
        return tuple(out), inner

    def go(self, expr: RExpr, mapping: dict) -> RExpr:
        if not mapping:
            return expr
        go = self.go
        if isinstance(expr, Var):
            return mapping.get(expr.name, expr)
        if isinstance(expr, (Zero, One, UnitVal, IntLit, Size)):
            return expr
        if isinstance(expr, Plus):
            return Plus(go(expr.left, mapping), go(expr.right, mapping))
        if isinstance(expr, Leq):
            return Leq(go(expr.left, mapping), go(expr.right, mapping))
        if isinstance(expr, Pair):
            return Pair(go(expr.first, mapping), go(expr.second, mapping))
        if isinstance(expr, App):
            return App(go(expr.fn, mapping), go(expr.arg, mapping))
        if isinstance(expr, Inj):
            return Inj(expr.index, go(expr.body, mapping), expr.ty)
        if isinstance(expr, Fold):
            return Fold(expr.ty, go(expr.body, mapping))
        if isinstance(expr, Unfold):
            return Unfold(expr.ty, go(expr.body, mapping))
        if isinstance(expr, (Val, Incr, CostProj, PotProj, SizeSucc)):
            return type(expr)(go(expr.body, mapping))
        if isinstance(expr, WithCost):
            return WithCost(go(expr.pot, mapping), go(expr.cost, mapping))
        if isinstance(expr, PlusC):
            return PlusC(go(expr.cost, mapping), go(expr.body, mapping))
        if isinstance(expr, Case):
            (x0,), m0 = self.binders((expr.left_var,), (expr.left,), mapping)
            (x1,), m1 = self.binders((expr.right_var,), (expr.right,), mapping)
            return Case(go(expr.scrutinee, mapping), x0, go(expr.left, m0), x1, go(expr.right, m1),
                        expr.ty)
        if isinstance(expr, LetPair):
            (first, second), inner = self.binders((expr.first_var, expr.second_var), (expr.body,),
                                                  mapping)
            return LetPair(first, second, go(expr.bound, mapping), go(expr.body, inner), expr.ty)
        if isinstance(expr, Lam):
            (name,), inner = self.binders((expr.param,), (expr.body,), mapping)
            return Lam(name, expr.ty, go(expr.body, inner))
        if isinstance(expr, Fix):
            (name,), inner = self.binders((expr.name,), (expr.body,), mapping)
            return Fix(name, expr.ty, go(expr.body, inner))
        if isinstance(expr, Bind):
            names, inner = self.binders(expr.names, (expr.body,), mapping)
            sources = tuple(go(source, mapping) for source in expr.sources)
            return Bind(names, sources, go(expr.body, inner))
        raise TypeError(f"not a recurrence expression: {expr!r}")


# -- alpha equivalence ---------------------------------------------------------

def alpha_key(expr: RExpr, types: bool = True) -> tuple:
    """A key equal for exactly the alpha-equivalent terms.

    With ``types=False`` the type annotations are ignored.
    """
    return _key(expr, (), types)


def alpha_equal(left: RExpr, right: RExpr, types: bool = True) -> bool:
    return alpha_key(left, types) == alpha_key(right, types)


def _key(expr: RExpr, bound: tuple[str, ...], types: bool) -> tuple:
    def ann(ty):
        return ty if types else None

    if isinstance(expr, Var):
        for depth, name in enumerate(reversed(bound)):
            if name == expr.name:
                return ("bv", depth)
        return ("fv", expr.name)
    if isinstance(expr, Case):
        return ("case", _key(expr.scrutinee, bound, types),
                _key(expr.left, bound + (expr.left_var,), types),
                _key(expr.right, bound + (expr.right_var,), types), ann(expr.ty))
    if isinstance(expr, LetPair):
        return ("let", _key(expr.bound, bound, types),
                _key(expr.body, bound + (expr.first_var, expr.second_var), types), ann(expr.ty))
    if isinstance(expr, Lam):
        return ("lam", ann(expr.ty), _key(expr.body, bound + (expr.param,), types))
    if isinstance(expr, Fix):
        return ("fix", ann(expr.ty), _key(expr.body, bound + (expr.name,), types))
    if isinstance(expr, Bind):
        return ("bind", tuple(_key(source, bound, types) for source in expr.sources),
                _key(expr.body, bound + expr.names, types))
    if isinstance(expr, IntLit):
        return ("int", expr.value)
    if isinstance(expr, Size):
        return ("size", expr.value, ann(expr.ty))
    if isinstance(expr, Inj):
        return ("inj", expr.index, ann(expr.ty), _key(expr.body, bound, types))
    if isinstance(expr, (Fold, Unfold)):
        return (type(expr).__name__, ann(expr.ty), _key(expr.body, bound, types))
    return (type(expr).__name__,) + tuple(_key(child, bound, types) for child in children(expr))


def size(expr: RExpr) -> int:
    count, stack = 0, [expr]
    while stack:
        node = stack.pop()
        count += 1
        stack.extend(children(node))
    return count


# -- typing ------------------------------------------------------------------

class RecTypeError(Exception):
    def __init__(self, rule: str, subterm: RExpr | None, detail: str):
        shown = "" if subterm is None else f" in {_clip(pretty_print_rec(subterm))}"
        super().__init__(f"[{rule}] {detail}{shown}")
        self.rule = rule
        self.subterm = subterm
        self.detail = detail


def _clip(text: str, limit: int = 80) -> str:
    return text if len(text) <= limit else text[: limit - 3] + "..."


def _expect(actual: Type, expected: Type, rule: str, expr: RExpr) -> None:
    if actual != expected:
        raise RecTypeError(rule, expr, f"expected {expected}, got {actual}")


def _cmplx(ty: Type, rule: str, expr: RExpr) -> Type:
    if not isinstance(ty, TCmplx):
        raise RecTypeError(rule, expr, f"expected a complexity type, got {ty}")
    return ty.inner


def typecheck_rec(ctx: Mapping[str, Type], expr: RExpr) -> Type:
    """The unique type of ``expr`` under ``ctx``; annotations must be present."""
    if isinstance(expr, Var):
        if expr.name not in ctx:
            raise RecTypeError("var", expr, f"unbound variable {expr.name!r}")
        return ctx[expr.name]
    if isinstance(expr, (Zero, One)):
        return COST
    if isinstance(expr, Plus):
        _expect(typecheck_rec(ctx, expr.left), COST, "plus", expr)
        _expect(typecheck_rec(ctx, expr.right), COST, "plus", expr)
        return COST
    if isinstance(expr, UnitVal):
        return UNIT
    if isinstance(expr, IntLit):
        return INT
    if isinstance(expr, Leq):
        _expect(typecheck_rec(ctx, expr.left), INT, "leq", expr)
        _expect(typecheck_rec(ctx, expr.right), INT, "leq", expr)
        return BOOL
    if isinstance(expr, Inj):
        if not isinstance(expr.ty, TSum):
            raise RecTypeError("inj", expr, "missing sum annotation")
        want = expr.ty.left if expr.index == 0 else expr.ty.right
        _expect(typecheck_rec(ctx, expr.body), want, "inj", expr)
        return expr.ty
    if isinstance(expr, Case):
        st = typecheck_rec(ctx, expr.scrutinee)
        if not isinstance(st, TSum):
            raise RecTypeError("case", expr, f"scrutinee has non-sum type {st}")
        t0 = typecheck_rec({**ctx, expr.left_var: st.left}, expr.left)
        t1 = typecheck_rec({**ctx, expr.right_var: st.right}, expr.right)
        _expect(t1, t0, "case", expr)
        if expr.ty is not None:
            _expect(t0, expr.ty, "case", expr)
        return t0
    if isinstance(expr, Pair):
        return TProd(typecheck_rec(ctx, expr.first), typecheck_rec(ctx, expr.second))
    if isinstance(expr, LetPair):
        bt = typecheck_rec(ctx, expr.bound)
        if not isinstance(bt, TProd):
            raise RecTypeError("let", expr, f"bound expression has non-product type {bt}")
        inner = {**ctx, expr.first_var: bt.left}
        inner[expr.second_var] = bt.right
        body_ty = typecheck_rec(inner, expr.body)
        if expr.ty is not None:
            _expect(body_ty, expr.ty, "let", expr)
        return body_ty
    if isinstance(expr, Lam):
        if expr.ty is None:
            raise RecTypeError("lam", expr, "missing parameter annotation")
        return TArrow(expr.ty, typecheck_rec({**ctx, expr.param: expr.ty}, expr.body))
    if isinstance(expr, App):
        ft = typecheck_rec(ctx, expr.fn)
        if not isinstance(ft, TArrow):
            raise RecTypeError("app", expr, f"applying non-function of type {ft}")
        _expect(typecheck_rec(ctx, expr.arg), ft.dom, "app", expr)
        return ft.cod
    if isinstance(expr, Fix):
        if expr.ty is None:
            raise RecTypeError("fix", expr, "missing annotation")
        _expect(typecheck_rec({**ctx, expr.name: expr.ty}, expr.body), expr.ty, "fix", expr)
        return expr.ty
    if isinstance(expr, Fold):
        if not isinstance(expr.ty, TRec):
            raise RecTypeError("fold", expr, "missing recursive type annotation")
        _expect(typecheck_rec(ctx, expr.body), unroll(expr.ty), "fold", expr)
        return expr.ty
    if isinstance(expr, Unfold):
        if not isinstance(expr.ty, TRec):
            raise RecTypeError("unfold", expr, "missing recursive type annotation")
        _expect(typecheck_rec(ctx, expr.body), expr.ty, "unfold", expr)
        return unroll(expr.ty)
    if isinstance(expr, Val):
        return TCmplx(typecheck_rec(ctx, expr.body))
    if isinstance(expr, Bind):
        inner = dict(ctx)
        for name, src in zip(expr.names, expr.sources):
            inner[name] = _cmplx(typecheck_rec(ctx, src), "bind", expr)
        body_t = typecheck_rec(inner, expr.body)
        _cmplx(body_t, "bind", expr)
        return body_t
    if isinstance(expr, Incr):
        body_ty = typecheck_rec(ctx, expr.body)
        _cmplx(body_ty, "incr", expr)
        return body_ty
    if isinstance(expr, CostProj):
        _cmplx(typecheck_rec(ctx, expr.body), "cost", expr)
        return COST
    if isinstance(expr, PotProj):
        return _cmplx(typecheck_rec(ctx, expr.body), "pot", expr)
    if isinstance(expr, WithCost):
        _expect(typecheck_rec(ctx, expr.cost), COST, "with-cost", expr)
        return TCmplx(typecheck_rec(ctx, expr.pot))
    if isinstance(expr, PlusC):
        _expect(typecheck_rec(ctx, expr.cost), COST, "plus-cost", expr)
        body_ty = typecheck_rec(ctx, expr.body)
        _cmplx(body_ty, "plus-cost", expr)
        return body_ty
    if isinstance(expr, Size):
        if not isinstance(expr.ty, TRec) or list_element(expr.ty) is None:
            raise RecTypeError("size", expr, "size literals need a list type annotation")
        if expr.value < 0:
            raise RecTypeError("size", expr, "negative size")
        return expr.ty
    if isinstance(expr, SizeSucc):
        body_ty = typecheck_rec(ctx, expr.body)
        if list_element(body_ty) is None:
            raise RecTypeError("size", expr, f"succ of non-list type {body_ty}")
        return body_ty
    raise TypeError(f"not a recurrence expression: {expr!r}")


def is_potential_type(ty: Type) -> bool:
    """Potential types have no complexity constructor outside arrow codomains."""
    if isinstance(ty, TCmplx):
        return False
    if isinstance(ty, TArrow):
        return is_potential_type(ty.dom) and isinstance(ty.cod, TCmplx) and \
            is_potential_type(ty.cod.inner)
    if isinstance(ty, (TSum, TProd)):
        return is_potential_type(ty.left) and is_potential_type(ty.right)
    if isinstance(ty, TRec):
        return not contains_cmplx(ty.body)
    return True


def no_nested_cmplx(ty: Type) -> bool:
    """No ``C(C(..))`` anywhere in ``ty``."""
    if isinstance(ty, TCmplx):
        return not isinstance(ty.inner, TCmplx) and no_nested_cmplx(ty.inner)
    if isinstance(ty, (TSum, TProd)):
        return no_nested_cmplx(ty.left) and no_nested_cmplx(ty.right)
    if isinstance(ty, TArrow):
        return no_nested_cmplx(ty.dom) and no_nested_cmplx(ty.cod)
    if isinstance(ty, TRec):
        return no_nested_cmplx(ty.body)
    return True


# -- printing ------------------------------------------------------------------

_LOW, _SUM, _APP, _ATOM = 0, 1, 2, 3


def pretty_print_rec(expr: RExpr, names: Mapping[tuple, str] | None = None,
                     show_types: bool = False) -> str:
    """Render ``expr`` in the usual notation.

    ``names`` maps ``alpha_key(term, types=False)`` of closed subterms to a
    short name printed in their place (used to abbreviate inlined fixes).
    """
    return _Printer(names or {}, show_types).show(expr, _LOW)


class _Printer:
    def __init__(self, names: Mapping[tuple, str], show_types: bool):
        self.names = names
        self.show_types = show_types

    def ann(self, ty: Type | None) -> str:
        return f"[{show_type(ty)}]" if self.show_types and ty is not None else ""

    def show(self, expr: RExpr, ctx: int) -> str:
        if self.names and isinstance(expr, Fix):
            short = self.names.get(alpha_key(expr, types=False))
            if short is not None:
                return short
        text, prec = self.render(expr)
        return f"({text})" if prec < ctx else text

    def render(self, expr: RExpr) -> tuple[str, int]:
        show = self.show
        if isinstance(expr, Var):
            return expr.name, _ATOM
        if isinstance(expr, Zero):
            return "0", _ATOM
        if isinstance(expr, One):
            return "1", _ATOM
        if isinstance(expr, UnitVal):
            return "()", _ATOM
        if isinstance(expr, IntLit):
            return str(expr.value), _ATOM
        if isinstance(expr, Size):
            return str(expr.value), _ATOM
        if isinstance(expr, Plus):
            return f"{show(expr.left, _APP)} + {show(expr.right, _SUM)}", _SUM
        if isinstance(expr, Pair):
            return f"({show(expr.first, _LOW)}, {show(expr.second, _LOW)})", _ATOM
        if isinstance(expr, Leq):
            return f"{show(expr.left, _APP)} ≤ {show(expr.right, _APP)}", _SUM
        if isinstance(expr, CostProj):
            return f"{show(expr.body, _ATOM)}_c", _ATOM
        if isinstance(expr, PotProj):
            return f"{show(expr.body, _ATOM)}_p", _ATOM
        if isinstance(expr, App):
            return f"{show(expr.fn, _APP)} {show(expr.arg, _ATOM)}", _APP
        if isinstance(expr, Inj):
            return f"in{expr.index}{self.ann(expr.ty)} {show(expr.body, _ATOM)}", _APP
        if isinstance(expr, Fold):
            if list_element(expr.ty) is not None and isinstance(expr.body, Inj):
                if expr.body.index == 0 and isinstance(expr.body.body, UnitVal):
                    return "nil", _ATOM
                if expr.body.index == 1 and isinstance(expr.body.body, Pair):
                    cell = expr.body.body
                    return f"cons({show(cell.first, _LOW)}, {show(cell.second, _LOW)})", _ATOM
            return f"fold{self.ann(expr.ty)} {show(expr.body, _ATOM)}", _APP
        if isinstance(expr, Unfold):
            return f"unfold{self.ann(expr.ty)} {show(expr.body, _ATOM)}", _APP
        if isinstance(expr, Val):
            return f"val {show(expr.body, _ATOM)}", _APP
        if isinstance(expr, Incr):
            return f"incr {show(expr.body, _ATOM)}", _APP
        if isinstance(expr, SizeSucc):
            return f"succ {show(expr.body, _ATOM)}", _APP
        if isinstance(expr, WithCost):
            return f"⟨{show(expr.pot, _LOW)} with cost {show(expr.cost, _LOW)}⟩", _ATOM
        if isinstance(expr, PlusC):
            return f"{show(expr.cost, _APP)} +c {show(expr.body, _SUM)}", _SUM
        if isinstance(expr, Case):
            return self.case(expr), _LOW
        if isinstance(expr, LetPair):
            return (f"let ({expr.first_var}, {expr.second_var}) = {show(expr.bound, _LOW)} in "
                    f"{show(expr.body, _LOW)}"), _LOW
        if isinstance(expr, Lam):
            typed = self.show_types and expr.ty
            param = f"({expr.param} : {show_type(expr.ty)})" if typed else expr.param
            return f"λ{param}. {show(expr.body, _LOW)}", _LOW
        if isinstance(expr, Fix):
            typed = self.show_types and expr.ty
            head = f"{expr.name} : {show_type(expr.ty)}" if typed else expr.name
            return f"fix {head}. {show(expr.body, _LOW)}", _LOW
        if isinstance(expr, Bind):
            if len(expr.names) == 1:
                pattern, sources = expr.names[0], show(expr.sources[0], _SUM)
            else:
                pattern = "(" + ", ".join(expr.names) + ")"
                sources = "(" + ", ".join(show(source, _LOW) for source in expr.sources) + ")"
            return f"{pattern} ← {sources}; {show(expr.body, _LOW)}", _LOW
        raise TypeError(f"not a recurrence expression: {expr!r}")

    def case(self, expr: Case) -> str:
        show = self.show
        if expr.left_var == WILDCARD and expr.right_var == WILDCARD and \
                (expr.ty is None or True) and isinstance(expr.scrutinee, Leq):
            return (f"if {show(expr.scrutinee, _LOW)} then {show(expr.left, _SUM)} "
                    f"else {show(expr.right, _LOW)}")
        cons = _caselist_parts(expr)
        if cons is not None:
            scrut, head, tail, body = cons
            return (f"caselist {show(scrut, _LOW)} of nil => {show(expr.left, _SUM)} | "
                    f"cons({head}, {tail}) => {show(body, _LOW)}")
        return (f"case {show(expr.scrutinee, _LOW)} of "
                f"in0 {expr.left_var} => {show(expr.left, _SUM)}"
                f" | in1 {expr.right_var} => {show(expr.right, _LOW)}")


def _caselist_parts(expr: Case):
    """Recognize ``case unfold xs of _ => a | z => let (h, t) = z in b``."""
    if not isinstance(expr.scrutinee, Unfold) or expr.left_var != WILDCARD:
        return None
    body = expr.right
    if not (isinstance(body, LetPair) and isinstance(body.bound, Var)
            and body.bound.name == expr.right_var
            and expr.right_var not in free_vars(body.body)):
        return None
    if expr.scrutinee.ty is not None and list_element(expr.scrutinee.ty) is None:
        return None
    return expr.scrutinee.body, body.first_var, body.second_var, body.body


def is_cost_type(ty: Type) -> bool:
    return isinstance(ty, TCost)
