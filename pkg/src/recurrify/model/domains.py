"""Semantic domains of the constructor-counting model.

Representation of each domain:

* cost and recursive types: ``int`` or ``INF`` (the natural numbers with
  infinity); type variables inside functors are interpreted the same way;
* ``unit``: ``STAR``; ``int``: the single point ``INT_TOP``;
* sums: ``SumSet``, a downward-closed set given by its maximal generators;
* products: ``Tup`` in cartesian mode, ``PairSet`` in powerset mode;
* arrows: a ``FuncVal`` (monotone map);
* complexities ``C(s)``: ``Cx(cost, pot)``.

The order is the size order.  Values are compared by shape, so ``leq``
and ``join`` accept the type only as documentation.  Functions compare
pointwise over a finite probe set, which makes function comparison an
approximation; everything else is exact.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Any, Iterable

from ..types import (
    TArrow, TCmplx, TCost, TInt, TProd, TRec, TSum, TUnit, TVar, Type, free_type_vars,
    show_type,
)

INF = math.inf
CARTESIAN = "cartesian"
POWERSET = "powerset"
PRODUCT_MODES = (CARTESIAN, POWERSET)


class UnsupportedFunctor(Exception):
    """The symbolic unfold does not handle this recursive type."""


class DomainMismatch(TypeError):
    pass


@dataclass(frozen=True)
class _Point:
    label: str

    def __repr__(self) -> str:
        return self.label


STAR = _Point("*")
INT_TOP = _Point("⊤int")


@dataclass(frozen=True)
class SumSet:
    items: frozenset  # of (tag, value)

    def __iter__(self):
        return iter(self.items)


@dataclass(frozen=True)
class Tup:
    first: Any
    second: Any


@dataclass(frozen=True)
class PairSet:
    items: frozenset  # of (first, second)

    def __iter__(self):
        return iter(self.items)


@dataclass(frozen=True)
class Cx:
    cost: Any
    pot: Any


class FuncVal:
    """A monotone function value; subclasses define ``apply`` and ``dom``."""

    dom: Type
    kind = "other"

    def apply(self, arg):  # pragma: no cover - abstract
        raise NotImplementedError


@dataclass(frozen=True)
class ConstFunc(FuncVal):
    dom: Type
    value: Any
    kind: str = "other"  # "top" and "bottom" mark the extreme functions

    def apply(self, arg):
        return self.value


@dataclass(frozen=True)
class JoinFunc(FuncVal):
    parts: frozenset

    @property
    def dom(self) -> Type:
        return next(iter(self.parts)).dom

    def apply(self, arg):
        result = None
        for part in self.parts:
            out = part.apply(arg)
            result = out if result is None else value_join(result, out)
        return result


# -- ℕ∞ and csize helpers -----------------------------------------------------

def is_size(value) -> bool:
    return isinstance(value, int) and not isinstance(value, bool) or value == INF


def add(left, right):
    """Addition on ℕ∞ extended with the ⊥ marker ``None`` as a unit."""
    if left is None:
        return right
    if right is None:
        return left
    return left + right


def size_join(left, right):
    if left is None:
        return right
    if right is None:
        return left
    return max(left, right)


def succ(elem):
    """``succ(⊥) = 0`` and ``succ(n) = n + 1``; infinity is fixed."""
    if elem is None:
        return 0
    return elem + 1


def predecessor_budget(size):
    """Largest csize allowed under ``succ(csize) <= n``; None means only ⊥."""
    if size == INF:
        return INF
    if size <= 0:
        return None
    return size - 1


# -- order and join -------------------------------------------------------------

def leq(ty: Type | None, left, right, mode: str = CARTESIAN) -> bool:
    """The size order ``a <= b`` (``ty`` is not needed to decide it)."""
    return value_leq(left, right, mode)


def join(ty: Type | None, left, right, mode: str = CARTESIAN):
    return value_join(left, right)


def value_leq(left, right, mode: str = CARTESIAN, exact: bool = True) -> bool:
    if left is right or left == right:
        return True
    if is_size(left) and is_size(right):
        return left <= right
    if isinstance(left, _Point) and isinstance(right, _Point):
        return left == right
    if isinstance(left, SumSet) and isinstance(right, SumSet):
        return all(any(tag == tag2 and value_leq(elem, other, mode, exact) for tag2, other in right)
                   for tag, elem in left)
    if isinstance(left, Tup) and isinstance(right, Tup):
        return value_leq(left.first, right.first, mode, exact) and \
            value_leq(left.second, right.second, mode, exact)
    if isinstance(left, PairSet) and isinstance(right, PairSet):
        return all(any(value_leq(x0, y0, mode, exact) and value_leq(x1, y1, mode, exact)
                       for y0, y1 in right) for x0, x1 in left)
    if isinstance(left, Cx) and isinstance(right, Cx):
        return (value_leq(left.cost, right.cost, mode, exact)
                and value_leq(left.pot, right.pot, mode, exact))
    if isinstance(left, FuncVal) and isinstance(right, FuncVal):
        if _definitely_func_leq(left, right):
            return True
        if not exact:
            return False
        return all(value_leq(left.apply(probe), right.apply(probe), mode, exact)
                   for probe in probes(left.dom, mode))
    raise DomainMismatch(f"cannot compare {render(left)} with {render(right)}")


def _definitely_func_leq(left: FuncVal, right: FuncVal) -> bool:
    if left == right or left.kind == "bottom" or right.kind == "top":
        return True
    if isinstance(left, JoinFunc):
        return all(_definitely_func_leq(part, right) for part in left.parts)
    if isinstance(right, JoinFunc):
        return any(_definitely_func_leq(left, part) for part in right.parts)
    return False


def definitely_leq(left, right) -> bool:
    """A sound under-approximation of ``<=`` that never probes functions."""
    return value_leq(left, right, exact=False)


def sem_equal(left, right, mode: str = CARTESIAN) -> bool:
    """Equality in the model (functions compared on probes)."""
    return left == right or (value_leq(left, right, mode) and value_leq(right, left, mode))


def normalize(items: Iterable) -> frozenset:
    """Drop pair generators dominated componentwise by another generator."""
    pool = list(dict.fromkeys(items))
    keep = []
    for index, (x0, x1) in enumerate(pool):
        dominated = False
        for other_index, (y0, y1) in enumerate(pool):
            if index == other_index or not (definitely_leq(x0, y0) and definitely_leq(x1, y1)):
                continue
            # of two equivalent generators keep the first
            if not (definitely_leq(y0, x0) and definitely_leq(y1, x1) and other_index > index):
                dominated = True
                break
        if not dominated:
            keep.append((x0, x1))
    return frozenset(keep)


def make_sum(items: Iterable) -> SumSet:
    items = list(items)
    return SumSet(_normalize_tagged(items))


def _normalize_tagged(items: list) -> frozenset:
    pool = list(dict.fromkeys(items))
    keep = []
    for index, (tag, elem) in enumerate(pool):
        dominated = False
        for other_index, (tag2, other) in enumerate(pool):
            if index == other_index or tag != tag2:
                continue
            dominated = definitely_leq(elem, other)
            if dominated and not (definitely_leq(other, elem) and other_index > index):
                dominated = True
                break
        if not dominated:
            keep.append((tag, elem))
    return frozenset(keep)


def make_pairs(items: Iterable) -> PairSet:
    return PairSet(normalize(items))


def value_join(left, right):
    if left == right:
        return left
    if is_size(left) and is_size(right):
        return max(left, right)
    if isinstance(left, _Point) and isinstance(right, _Point):
        if left != right:
            raise DomainMismatch(f"cannot join {left!r} with {right!r}")
        return left
    if isinstance(left, SumSet) and isinstance(right, SumSet):
        return make_sum(itertools.chain(left.items, right.items))
    if isinstance(left, Tup) and isinstance(right, Tup):
        return Tup(value_join(left.first, right.first), value_join(left.second, right.second))
    if isinstance(left, PairSet) and isinstance(right, PairSet):
        return make_pairs(itertools.chain(left.items, right.items))
    if isinstance(left, Cx) and isinstance(right, Cx):
        return Cx(value_join(left.cost, right.cost), value_join(left.pot, right.pot))
    if isinstance(left, FuncVal) and isinstance(right, FuncVal):
        if _definitely_func_leq(left, right):
            return right
        if _definitely_func_leq(right, left):
            return left
        parts = set()
        for fn in (left, right):
            parts.update(fn.parts if isinstance(fn, JoinFunc) else (fn,))
        return JoinFunc(frozenset(parts))
    raise DomainMismatch(f"cannot join {render(left)} with {render(right)}")


def join_all(values: Iterable, bottom_value):
    out = None
    for value in values:
        out = value if out is None else value_join(out, value)
    return bottom_value if out is None else out


# -- extreme elements ------------------------------------------------------------

def top(ty: Type, mode: str = CARTESIAN):
    """The size-greatest element of the domain of ``ty``."""
    if isinstance(ty, (TCost, TRec, TVar)):
        return INF
    if isinstance(ty, TUnit):
        return STAR
    if isinstance(ty, TInt):
        return INT_TOP
    if isinstance(ty, TSum):
        return SumSet(frozenset({(0, top(ty.left, mode)), (1, top(ty.right, mode))}))
    if isinstance(ty, TProd):
        if mode == POWERSET:
            return PairSet(frozenset({(top(ty.left, mode), top(ty.right, mode))}))
        return Tup(top(ty.left, mode), top(ty.right, mode))
    if isinstance(ty, TArrow):
        return ConstFunc(ty.dom, top(ty.cod, mode), "top")
    if isinstance(ty, TCmplx):
        return Cx(INF, top(ty.inner, mode))
    raise TypeError(f"not a type: {ty!r}")


def bottom(ty: Type, mode: str = CARTESIAN):
    """The size-least element of the domain of ``ty`` (the empty join)."""
    if isinstance(ty, (TCost, TRec, TVar)):
        return 0
    if isinstance(ty, TUnit):
        return STAR
    if isinstance(ty, TInt):
        return INT_TOP
    if isinstance(ty, TSum):
        return SumSet(frozenset())
    if isinstance(ty, TProd):
        if mode == POWERSET:
            return PairSet(frozenset())
        return Tup(bottom(ty.left, mode), bottom(ty.right, mode))
    if isinstance(ty, TArrow):
        return ConstFunc(ty.dom, bottom(ty.cod, mode), "bottom")
    if isinstance(ty, TCmplx):
        return Cx(0, bottom(ty.inner, mode))
    raise TypeError(f"not a type: {ty!r}")


# -- constructor counting ----------------------------------------------------------

@lru_cache(maxsize=4096)
def _mentions(functor: Type, var: str) -> bool:
    return var in free_type_vars(functor)


def csize(functor: Type, var: str, value, mode: str = CARTESIAN):
    """Count of recursive positions in ``value``; None stands for ⊥."""
    if isinstance(functor, TVar) and functor.name == var:
        return value
    if not _mentions(functor, var):
        return None
    if isinstance(functor, TSum):
        out = None
        for tag, first in value:
            branch = functor.left if tag == 0 else functor.right
            out = size_join(out, csize(branch, var, first, mode))
        return out
    if isinstance(functor, TProd):
        if isinstance(value, Tup):
            return add(csize(functor.left, var, value.first, mode),
                       csize(functor.right, var, value.second, mode))
        out = None
        for first, second in value:
            out = size_join(out, add(csize(functor.left, var, first, mode),
                                     csize(functor.right, var, second, mode)))
        return out
    raise UnsupportedFunctor(f"{show_type(functor)} is not a polynomial functor in {var}")


def fold_size(ty: TRec, value, mode: str = CARTESIAN):
    """Denotation of ``fold`` at ``ty``: ``succ`` of the constructor size."""
    return succ(csize(ty.body, ty.var, value, mode))


def _product_alpha_count(functor: Type, var: str) -> int:
    """Recursive positions in a product chain; a nested sum counts once."""
    if functor == TVar(var):
        return 1
    if isinstance(functor, TProd):
        return _product_alpha_count(functor.left, var) + _product_alpha_count(functor.right, var)
    return 1 if var in free_type_vars(functor) else 0


def check_functor(functor: Type, var: str) -> None:
    """Raise ``UnsupportedFunctor`` unless the symbolic unfold handles ``functor``."""
    if var not in free_type_vars(functor) or functor == TVar(var):
        return
    if isinstance(functor, TSum):
        check_functor(functor.left, var)
        check_functor(functor.right, var)
        return
    if isinstance(functor, TProd):
        if _product_alpha_count(functor, var) > 2:
            raise UnsupportedFunctor(
                "products with more than two recursive positions are not supported: "
                f"{show_type(functor)}")
        check_functor(functor.left, var)
        check_functor(functor.right, var)
        return
    raise UnsupportedFunctor(f"{show_type(functor)} is not a polynomial functor in {var}")


def maxels(functor: Type, var: str, budget, mode: str = CARTESIAN) -> list:
    """Maximal elements whose csize is at most ``budget`` (⊥ is always allowed).

    ``budget`` None admits only elements whose csize is ⊥.
    """
    if functor == TVar(var):
        return [] if budget is None else [budget]
    if var not in free_type_vars(functor):
        return [top(functor, mode)]
    if isinstance(functor, TSum):
        gens = [(0, gen_left) for gen_left in maxels(functor.left, var, budget, mode)]
        gens += [(1, gen_left) for gen_left in maxels(functor.right, var, budget, mode)]
        return [make_sum(gens)]
    if isinstance(functor, TProd):
        pairs = list(_product_maxels(functor, var, budget, mode))
        if mode == POWERSET:
            return [make_pairs(pairs)]
        unique = normalize(pairs)
        return sorted((Tup(first, second) for first, second in unique), key=repr)
    raise UnsupportedFunctor(f"{show_type(functor)} is not a polynomial functor in {var}")


def _product_maxels(functor: TProd, var: str, budget, mode: str):
    left, right = functor.left, functor.right
    left_open = var in free_type_vars(left)
    right_open = var in free_type_vars(right)
    if budget is None or budget == INF or not (left_open and right_open):
        splits = [(budget, budget)]
    else:
        splits = [(left_budget, budget - left_budget) for left_budget in range(budget + 1)]
    for b0, b1 in splits:
        for first in maxels(left, var, b0, mode):
            for second in maxels(right, var, b1, mode):
                yield (first, second)


@lru_cache(maxsize=4096)
def _unfold_cached(ty: TRec, size, mode: str):
    check_functor(ty.body, ty.var)
    budget = predecessor_budget(size)
    return join_all(maxels(ty.body, ty.var, budget, mode), bottom(ty.body, mode))


def unfold_symbolic(ty: TRec, size, mode: str = CARTESIAN):
    """Join of every element with ``succ(csize element) <= size``."""
    if not is_size(size):
        raise DomainMismatch(f"unfold of non-size value {render(size)}")
    return _unfold_cached(ty, size, mode)


# -- probes ------------------------------------------------------------------------

PROBE_SIZES = (0, 1, 2, 3, INF)
_PROBE_LIMIT = 24


@lru_cache(maxsize=1024)
def _probes(ty: Type, mode: str) -> tuple:
    if isinstance(ty, (TCost, TRec, TVar)):
        return PROBE_SIZES
    if isinstance(ty, TUnit):
        return (STAR,)
    if isinstance(ty, TInt):
        return (INT_TOP,)
    if isinstance(ty, TSum):
        out = [bottom(ty, mode), top(ty, mode)]
        out += [make_sum([(0, left)]) for left in _probes(ty.left, mode)]
        out += [make_sum([(1, right)]) for right in _probes(ty.right, mode)]
        return tuple(dict.fromkeys(out))[:_PROBE_LIMIT]
    if isinstance(ty, TProd):
        combos = list(itertools.product(_probes(ty.left, mode), _probes(ty.right, mode)))
        if mode == POWERSET:
            out = [bottom(ty, mode)] + [make_pairs([combo]) for combo in combos]
        else:
            out = [Tup(first, second) for first, second in combos]
        out.append(top(ty, mode))
        return tuple(dict.fromkeys(out))[:_PROBE_LIMIT]
    if isinstance(ty, TArrow):
        return (bottom(ty, mode), top(ty, mode))
    if isinstance(ty, TCmplx):
        out = [Cx(cost, probe) for cost in (0, INF) for probe in _probes(ty.inner, mode)]
        return tuple(out[:_PROBE_LIMIT])
    raise TypeError(f"not a type: {ty!r}")


def probes(ty: Type, mode: str = CARTESIAN) -> tuple:
    """Finite sample of the domain of ``ty`` used to compare functions."""
    return _probes(ty, mode)


# -- rendering --------------------------------------------------------------------

def render(value) -> str:
    if value is None:
        return "⊥"
    if value == INF and not isinstance(value, _Point):
        return "∞"
    if isinstance(value, bool):
        return str(value)
    if isinstance(value, int):
        return str(value)
    if isinstance(value, _Point):
        return value.label
    if isinstance(value, SumSet):
        gens = sorted(f"in{tag} {render(first)}" for tag, first in value)
        return "{" + ", ".join(gens) + "}"
    if isinstance(value, Tup):
        return f"({render(value.first)}, {render(value.second)})"
    if isinstance(value, PairSet):
        gens = sorted(f"({render(first)}, {render(second)})" for first, second in value)
        return "{" + ", ".join(gens) + "}"
    if isinstance(value, Cx):
        return f"⟨cost {render(value.cost)}, pot {render(value.pot)}⟩"
    if isinstance(value, FuncVal):
        return "<function>"
    return repr(value)


def to_json(value):
    """Plain JSON-compatible rendering of a semantic value."""
    if value is None:
        return None
    if value == INF and not isinstance(value, _Point):
        return "inf"
    if isinstance(value, int):
        return value
    if isinstance(value, _Point):
        return value.label
    if isinstance(value, SumSet):
        return {"sum": sorted(([tag, to_json(first)] for tag, first in value), key=repr)}
    if isinstance(value, Tup):
        return [to_json(value.first), to_json(value.second)]
    if isinstance(value, PairSet):
        pairs = ([to_json(first), to_json(second)] for first, second in value)
        return {"pairs": sorted(pairs, key=repr)}
    if isinstance(value, Cx):
        return {"cost": to_json(value.cost), "pot": to_json(value.pot)}
    return render(value)
