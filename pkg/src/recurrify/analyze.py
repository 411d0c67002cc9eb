"""Semantic recurrence tables over ranges of input sizes.

A function whose argument contains one list is analysed at each size ``n``;
one with two list components is analysed on the grid of size pairs.  Other
argument components are abstracted to their top element (``int``) or the
unit point.  Optionally each row is cross-checked against the interpreter on
concrete inputs of that size.
"""

from __future__ import annotations

import itertools
import math
import random
from dataclasses import dataclass
from typing import Iterator, Sequence

from . import reclang as R
from . import source as S
from .evaluator import evaluate
from .extract import extract_expr
from .model import INT_TOP, STAR, Model, ModelConfig, run_deep
from .model.domains import CARTESIAN, POWERSET, Tup, make_pairs, render
from .types import TArrow, TInt, TProd, TUnit, Type, list_element, show_type

ENUMERATION_LIMIT = 6
SAMPLES = 12
CROSS_CHECK_FUEL = 10 ** 7


class UnsupportedArgument(ValueError):
    """The function's argument type has no size-indexed analysis."""


@dataclass
class AnalysisRow:
    size: int | tuple[int, ...]
    semantic_cost: float | int
    semantic_potential: str
    actual_max_cost: int | None = None
    widened: bool = False

    @property
    def violation(self) -> bool:
        return self.actual_max_cost is not None and self.actual_max_cost > self.semantic_cost

    def as_dict(self) -> dict:
        cost = self.semantic_cost
        return {
            "size": list(self.size) if isinstance(self.size, tuple) else self.size,
            "semantic_cost": "inf" if cost == math.inf else cost,
            "semantic_potential": self.semantic_potential,
            "actual_max_cost": self.actual_max_cost,
            "widened": self.widened,
        }


def list_positions(ty: Type) -> int:
    """Number of list components of an analysable argument type."""
    if list_element(ty) is not None:
        return 1
    if isinstance(ty, (TInt, TUnit)):
        return 0
    if isinstance(ty, TProd):
        return list_positions(ty.left) + list_positions(ty.right)
    raise UnsupportedArgument(f"cannot analyse arguments of type {show_type(ty)}")


def semantic_argument(ty: Type, sizes: Sequence[int], mode: str):
    """The model element standing for all arguments with the given list lengths."""
    value, rest = _semantic(ty, list(sizes), mode)
    if rest:
        raise ValueError("too many sizes for the argument type")
    return value


def _semantic(ty: Type, sizes: list, mode: str):
    if list_element(ty) is not None:
        return sizes[0], sizes[1:]
    if isinstance(ty, TInt):
        return INT_TOP, sizes
    if isinstance(ty, TUnit):
        return STAR, sizes
    if isinstance(ty, TProd):
        left, sizes = _semantic(ty.left, sizes, mode)
        right, sizes = _semantic(ty.right, sizes, mode)
        return (make_pairs([(left, right)]) if mode == POWERSET else Tup(left, right)), sizes
    raise UnsupportedArgument(f"cannot analyse arguments of type {show_type(ty)}")


def size_points(positions: int, low: int, high: int) -> list:
    if positions == 1:
        return list(range(low, high + 1))
    if positions == 2:
        return list(itertools.product(range(low, high + 1), repeat=2))
    raise UnsupportedArgument(f"expected one or two list components, found {positions}")


# -- concrete inputs ------------------------------------------------------------

def concrete_inputs(ty: Type, sizes: Sequence[int], rng: random.Random) -> Iterator[S.Expr]:
    """Concrete arguments with the given list lengths.

    A single int list is enumerated over all permutations up to length
    ``ENUMERATION_LIMIT`` and sampled (plus sorted and reversed) beyond.  Two
    int lists are sorted runs that partition ``1..k+l``, enumerated when few
    and sampled otherwise.  Integer components range over values around the
    list contents.
    """
    lists = _list_choices(ty, list(sizes), rng)
    ints = _int_choices(ty, sum(sizes), rng)
    for list_values, int_values in itertools.product(lists, ints):
        yield _build(ty, list(list_values), list(int_values))


def _int_count(ty: Type) -> int:
    if isinstance(ty, TInt):
        return 1
    if isinstance(ty, TProd):
        return _int_count(ty.left) + _int_count(ty.right)
    return 0


def _int_choices(ty: Type, total: int, rng: random.Random) -> list[tuple[int, ...]]:
    count = _int_count(ty)
    if count == 0:
        return [()]
    if total <= ENUMERATION_LIMIT - 2:
        return list(itertools.product(range(total + 2), repeat=count))
    return [tuple(rng.randrange(total + 2) for _ in range(count)) for _ in range(3)]


def _list_choices(ty: Type, sizes: list, rng: random.Random) -> list[tuple]:
    if not sizes:
        return [()]
    if len(sizes) == 1:
        return [(perm,) for perm in _permutations(sizes[0], rng)]
    left, right = sizes
    total = left + right
    if math.comb(total, left) <= 200:
        splits = list(itertools.combinations(range(1, total + 1), left))
    else:
        splits = {tuple(sorted(rng.sample(range(1, total + 1), left))) for _ in range(SAMPLES)}
        splits.add(tuple(range(1, left + 1)))
        # interleaved runs keep both lists non-empty for as long as possible
        alternating = list(range(1, total + 1, 2)) + list(range(2, total + 1, 2))
        splits.add(tuple(sorted(alternating[:left])))
        splits = sorted(splits)
    out = []
    for chosen in splits:
        rest = tuple(number for number in range(1, total + 1) if number not in set(chosen))
        out.append((chosen, rest))
    return out


def _permutations(length: int, rng: random.Random) -> list[tuple[int, ...]]:
    if length <= ENUMERATION_LIMIT:
        return list(itertools.permutations(range(1, length + 1)))
    base = list(range(1, length + 1))
    picks = {tuple(base), tuple(reversed(base))}
    for _ in range(SAMPLES):
        shuffled = base[:]
        rng.shuffle(shuffled)
        picks.add(tuple(shuffled))
    return sorted(picks)


def _build(ty: Type, lists: list, ints: list) -> S.Expr:
    elem = list_element(ty)
    if elem is not None:
        values = lists.pop(0)
        if isinstance(elem, TInt):
            return S.int_list(values)
        return S.list_literal([_filler(elem)] * len(values), elem)
    if isinstance(ty, TInt):
        return S.IntLit(ints.pop(0))
    if isinstance(ty, TUnit):
        return S.UNIT_VAL
    if isinstance(ty, TProd):
        left = _build(ty.left, lists, ints)
        return S.Pair(left, _build(ty.right, lists, ints))
    raise UnsupportedArgument(show_type(ty))


def _filler(ty: Type) -> S.Expr:
    if isinstance(ty, TUnit):
        return S.UNIT_VAL
    if isinstance(ty, TInt):
        return S.IntLit(0)
    if isinstance(ty, TProd):
        return S.Pair(_filler(ty.left), _filler(ty.right))
    raise UnsupportedArgument(show_type(ty))


# -- analysis -------------------------------------------------------------------

def analyze(function: S.Expr, low: int, high: int, product_mode: str = CARTESIAN,
            fix_fuel: int = 256, cross_check: bool = False, seed: int = 0,
            model: Model | None = None) -> list[AnalysisRow]:
    """One row per size (or size pair) in ``low..high``."""
    return run_deep(_analyze, function, low, high, product_mode, fix_fuel, cross_check, seed,
                    model)


def _analyze(function, low, high, product_mode, fix_fuel, cross_check, seed, model):
    ty = function.ty if isinstance(function, S.Fun) else None
    if not isinstance(ty, TArrow):
        raise UnsupportedArgument("only annotated functions can be analysed")
    if low < 0 or high < low:
        raise ValueError(f"bad size range {low}..{high}")
    positions = list_positions(ty.dom)
    model = model or Model(ModelConfig(product_mode=product_mode, fix_fuel=fix_fuel))
    semantic_fn = model.denote(R.PotProj(extract_expr(function)))
    rng = random.Random(seed)
    rows = []
    for point in size_points(positions, low, high):
        sizes = (point,) if positions == 1 else point
        model.reset_widened()
        cx = model.apply(semantic_fn, semantic_argument(ty.dom, sizes, product_mode))
        row = AnalysisRow(point, cx.cost, render(cx.pot), widened=model.widened)
        if cross_check:
            row.actual_max_cost = max(
                evaluate(S.App(function, arg), CROSS_CHECK_FUEL).cost
                for arg in concrete_inputs(ty.dom, sizes, rng))
        rows.append(row)
    return rows


def parse_sizes(text: str) -> tuple[int, int]:
    """``"A..B"`` or a single ``"N"``."""
    low, sep, high = text.partition("..")
    try:
        bounds = (int(low), int(high)) if sep else (int(low), int(low))
    except ValueError:
        raise ValueError(f"sizes must look like A..B, got {text!r}") from None
    if bounds[0] < 0 or bounds[1] < bounds[0]:
        raise ValueError(f"bad size range {text!r}")
    return bounds
