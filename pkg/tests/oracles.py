"""Brute-force reference computations, independent of the package.

Nothing here imports recurrify: each oracle either counts comparisons of a
plain Python sorting routine or unrolls a recurrence by direct enumeration.
"""

from __future__ import annotations

import itertools
from functools import lru_cache


# -- sorting routines that count comparisons -------------------------------------

def split_list(items: list) -> tuple[list, list]:
    """Alternate elements into two lists, first element to the left."""
    return items[0::2], items[1::2]


def merge_counting(left: list, right: list) -> tuple[list, int]:
    out, comparisons = [], 0
    left_index = right_index = 0
    while left_index < len(left) and right_index < len(right):
        comparisons += 1
        if left[left_index] <= right[right_index]:
            out.append(left[left_index])
            left_index += 1
        else:
            out.append(right[right_index])
            right_index += 1
    return out + left[left_index:] + right[right_index:], comparisons


def msort_counting(items: list) -> tuple[list, int]:
    if len(items) < 2:
        return list(items), 0
    left, right = split_list(items)
    sorted_left, cost_left = msort_counting(left)
    sorted_right, cost_right = msort_counting(right)
    merged, cost = merge_counting(sorted_left, sorted_right)
    return merged, cost_left + cost_right + cost


def qsort_counting(items: list) -> tuple[list, int]:
    if not items:
        return [], 0
    pivot, rest = items[0], items[1:]
    smaller = [item for item in rest if not pivot <= item]
    larger = [item for item in rest if pivot <= item]
    sorted_small, cost_small = qsort_counting(smaller)
    sorted_large, cost_large = qsort_counting(larger)
    return sorted_small + [pivot] + sorted_large, len(rest) + cost_small + cost_large


def worst_case(sorter, size: int) -> int:
    return max(sorter(list(perm))[1] for perm in itertools.permutations(range(1, size + 1)))


def merge_worst_case(left_size: int, right_size: int) -> int:
    """Most comparisons merging sorted runs of lengths k and m."""
    total = left_size + right_size
    best = 0
    for chosen in itertools.combinations(range(total), left_size):
        rest = [number for number in range(total) if number not in chosen]
        best = max(best, merge_counting(list(chosen), rest)[1])
    return best


# -- recurrences unrolled directly ------------------------------------------------

@lru_cache(maxsize=None)
def msort_stated(size: int) -> int:
    """n + msort(⌈n/2⌉) + msort(⌊n/2⌋) with msort(0) = msort(1) = 0."""
    if size < 2:
        return 0
    return size + msort_stated((size + 1) // 2) + msort_stated(size // 2)


@lru_cache(maxsize=None)
def merge_cost_model(left_size: int, right_size: int) -> int:
    """Worst-case comparisons of merge: the recursion ends when either run empties."""
    if left_size == 0 or right_size == 0:
        return 0
    return 1 + max(merge_cost_model(left_size - 1, right_size),
                   merge_cost_model(left_size, right_size - 1))


@lru_cache(maxsize=None)
def msort_cost_model(size: int) -> int:
    """msort recurrence with the merge cost above and split's (⌈n/2⌉, ⌊n/2⌋)."""
    if size < 2:
        return 0
    high, low = (size + 1) // 2, size // 2
    return merge_cost_model(high, low) + msort_cost_model(high) + msort_cost_model(low)


@lru_cache(maxsize=None)
def qsort_powerset(size: int) -> int:
    """(n−1) + max over k+l = n−1 of qsort(k) + qsort(l)."""
    if size == 0:
        return 0
    return (size - 1) + max(qsort_powerset(left_size) + qsort_powerset(size - 1 - left_size)
                            for left_size in range(size))


@lru_cache(maxsize=None)
def qsort_cartesian(size: int) -> int:
    """part cost (n−1) plus two recursive calls that each see n−1 elements."""
    if size == 0:
        return 0
    return (size - 1) + 2 * qsort_cartesian(size - 1)


def ceil_log2(size: int) -> int:
    return (size - 1).bit_length()


# -- constructor counting on binary trees -------------------------------------

def tree_unfold_maximal_sum(size: int) -> int | None:
    """Largest k+l over child sizes with succ(k + l) ≤ n, by enumeration.

    A node with children of sizes k and l has constructor count k + l + 1;
    a leaf has count 0.  Returns None when no node fits.
    """
    best = None
    for left_size in range(size + 1):
        for right_size in range(size + 1):
            if left_size + right_size + 1 <= size:
                best = left_size + right_size if best is None else max(best, left_size + right_size)
    return best
