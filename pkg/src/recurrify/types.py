"""Type syntax shared by the source and recurrence languages.

The source language uses the constructors without ``TCost`` and ``TCmplx``.
Recursive types compare up to renaming of their bound variable.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterator


class Type:
    """Base class; equality and hashing go through a nameless key."""

    __slots__ = ()

    @cached_property
    def key(self) -> tuple:
        return _canon(self, ())

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Type) and self.key == other.key

    def __hash__(self) -> int:
        return hash(self.key)

    def __str__(self) -> str:
        return show_type(self)

    def __repr__(self) -> str:
        return f"<type {show_type(self)}>"


@dataclass(frozen=True, eq=False)
class TVar(Type):
    name: str


@dataclass(frozen=True, eq=False)
class TUnit(Type):
    pass


@dataclass(frozen=True, eq=False)
class TInt(Type):
    pass


@dataclass(frozen=True, eq=False)
class TCost(Type):
    """The cost type of the recurrence language."""


@dataclass(frozen=True, eq=False)
class TSum(Type):
    left: Type
    right: Type


@dataclass(frozen=True, eq=False)
class TProd(Type):
    left: Type
    right: Type


@dataclass(frozen=True, eq=False)
class TArrow(Type):
    dom: Type
    cod: Type


@dataclass(frozen=True, eq=False)
class TRec(Type):
    var: str
    body: Type


@dataclass(frozen=True, eq=False)
class TCmplx(Type):
    """Complexity type: a cost paired with a potential of the inner type."""

    inner: Type


UNIT = TUnit()
INT = TInt()
COST = TCost()
BOOL = TSum(UNIT, UNIT)


def _canon(ty: Type, bound: tuple[str, ...]) -> tuple:
    if isinstance(ty, TVar):
        for depth, name in enumerate(reversed(bound)):
            if name == ty.name:
                return ("bv", depth)
        return ("fv", ty.name)
    if isinstance(ty, TRec):
        return ("mu", _canon(ty.body, bound + (ty.var,)))
    if isinstance(ty, (TSum, TProd)):
        return (type(ty).__name__, _canon(ty.left, bound), _canon(ty.right, bound))
    if isinstance(ty, TArrow):
        return ("arrow", _canon(ty.dom, bound), _canon(ty.cod, bound))
    if isinstance(ty, TCmplx):
        return ("C", _canon(ty.inner, bound))
    return (type(ty).__name__, getattr(ty, "ident", None))


def list_of(elem: Type) -> TRec:
    var = fresh_type_var("a", free_type_vars(elem))
    return TRec(var, TSum(UNIT, TProd(elem, TVar(var))))


def list_element(ty: Type) -> Type | None:
    """Element type if ``ty`` is a list type, else None."""
    if not isinstance(ty, TRec):
        return None
    body = ty.body
    if (
        isinstance(body, TSum)
        and isinstance(body.left, TUnit)
        and isinstance(body.right, TProd)
        and body.right.right == TVar(ty.var)
        and ty.var not in free_type_vars(body.right.left)
    ):
        return body.right.left
    return None


def free_type_vars(ty: Type) -> frozenset[str]:
    if isinstance(ty, TVar):
        return frozenset((ty.name,))
    if isinstance(ty, TRec):
        return free_type_vars(ty.body) - {ty.var}
    return frozenset().union(*(free_type_vars(child) for child in children(ty)))


def children(ty: Type) -> Iterator[Type]:
    if isinstance(ty, (TSum, TProd)):
        yield ty.left
        yield ty.right
    elif isinstance(ty, TArrow):
        yield ty.dom
        yield ty.cod
    elif isinstance(ty, TRec):
        yield ty.body
    elif isinstance(ty, TCmplx):
        yield ty.inner


def fresh_type_var(base: str, avoid: frozenset[str] | set[str]) -> str:
    if base not in avoid:
        return base
    index = 1
    while f"{base}{index}" in avoid:
        index += 1
    return f"{base}{index}"


def subst_type(body: Type, target: Type, var: str) -> Type:
    """Capture-avoiding ``body[target/var]``."""
    if isinstance(body, TVar):
        return target if body.name == var else body
    if isinstance(body, TRec):
        if body.var == var:
            return body
        target_fv = free_type_vars(target)
        if body.var in target_fv:
            renamed = fresh_type_var(body.var, target_fv | free_type_vars(body.body) | {var})
            inner = subst_type(body.body, TVar(renamed), body.var)
            return TRec(renamed, subst_type(inner, target, var))
        return TRec(body.var, subst_type(body.body, target, var))
    if isinstance(body, TSum):
        return TSum(subst_type(body.left, target, var), subst_type(body.right, target, var))
    if isinstance(body, TProd):
        return TProd(subst_type(body.left, target, var), subst_type(body.right, target, var))
    if isinstance(body, TArrow):
        return TArrow(subst_type(body.dom, target, var), subst_type(body.cod, target, var))
    if isinstance(body, TCmplx):
        return TCmplx(subst_type(body.inner, target, var))
    return body


def unroll(ty: TRec) -> Type:
    """One-step unfolding ``F[mu a. F / a]``."""
    return subst_type(ty.body, ty, ty.var)


def is_polynomial_functor(body: Type, var: str) -> bool:
    if isinstance(body, TVar) and body.name == var:
        return True
    if not free_type_vars(body):
        return True
    if isinstance(body, (TSum, TProd)):
        return is_polynomial_functor(body.left, var) and is_polynomial_functor(body.right, var)
    return False


def contains_cmplx(ty: Type) -> bool:
    return isinstance(ty, TCmplx) or any(contains_cmplx(child) for child in children(ty))


def is_source_type(ty: Type) -> bool:
    if isinstance(ty, (TCost, TCmplx)):
        return False
    return all(is_source_type(child) for child in children(ty))


# -- printing ---------------------------------------------------------------

_ARROW, _SUM, _PROD, _ATOM = 0, 1, 2, 3


def show_type(ty: Type) -> str:
    return _show(ty, _ARROW)


def _show(ty: Type, ctx: int) -> str:
    if isinstance(ty, TUnit):
        return "unit"
    if isinstance(ty, TInt):
        return "int"
    if isinstance(ty, TCost):
        return "ℂ"
    if isinstance(ty, TVar):
        return ty.name
    if isinstance(ty, TCmplx):
        return f"C({_show(ty.inner, _ARROW)})"
    if ty == BOOL:
        return "bool"
    elem = list_element(ty)
    if elem is not None:
        text, prec = f"list {_show(elem, _ATOM)}", _ATOM
    elif isinstance(ty, TRec):
        text, prec = f"mu {ty.var} . {_show(ty.body, _ARROW)}", _ARROW
    elif isinstance(ty, TArrow):
        text, prec = f"{_show(ty.dom, _SUM)} -> {_show(ty.cod, _ARROW)}", _ARROW
    elif isinstance(ty, TSum):
        text, prec = f"{_show(ty.left, _PROD)} + {_show(ty.right, _SUM)}", _SUM
    elif isinstance(ty, TProd):
        text, prec = f"{_show(ty.left, _ATOM)} * {_show(ty.right, _PROD)}", _PROD
    else:
        raise TypeError(f"not a type: {ty!r}")
    return f"({text})" if prec < ctx else text
