"""Demand-driven fixpoint solver for recursive function values.

Each recursive function ``fix f. e`` gives one unknown per argument it is
queried at.  Unknowns start at the size-top element (the least element of
the information order) and are re-evaluated until their value no longer
changes, in the style of a top-down solver: evaluating an unknown records
which unknowns it read, and a change to an unknown destabilizes every
unknown that read it.

Long dependency chains would make the host stack as deep as the chain.
When a new unknown is met more than ``MAX_NESTING`` levels down, the current
evaluation is abandoned, the deep unknown is solved on its own first, and
the abandoned query is retried; the retry finds the deep unknown already
solved.

Two limits keep the search finite.  An unknown evaluated more than
``fix_fuel`` times is frozen at top, and once ``max_points`` unknowns exist,
queries for new ones are answered with top.  Either event sets ``widened``,
as does any later read of an unknown whose value depended on such an answer.
Top is an upper bound of every point, so the answers stay sound.
"""

from __future__ import annotations

from collections import defaultdict
from typing import Callable, Hashable

MAX_NESTING = 160
DEFAULT_MAX_POINTS = 250_000


class _Defer(Exception):
    def __init__(self, key, rhs, initial):
        super().__init__()
        self.key, self.rhs, self.initial = key, rhs, initial


class TopDownSolver:
    def __init__(self, fix_fuel: int, max_points: int = DEFAULT_MAX_POINTS,
                 max_nesting: int = MAX_NESTING):
        if fix_fuel < 1:
            raise ValueError("fix_fuel must be at least 1")
        self.fix_fuel = fix_fuel
        self.max_points = max_points
        self.max_nesting = max_nesting
        self.sigma: dict[Hashable, object] = {}
        self.tops: dict[Hashable, object] = {}
        self.stable: set = set()
        self.called: list = []
        self.called_set: set = set()
        self.infl: dict = defaultdict(set)
        self.evaluations: dict = defaultdict(int)
        self.frozen: set = set()
        # unknowns whose value depends on a widened answer
        self.tainted: set = set()
        self.widened = False

    def reset(self) -> None:
        self.__init__(self.fix_fuel, self.max_points, self.max_nesting)

    def query(self, key: Hashable, rhs: Callable[[], object], initial: Callable[[], object]):
        """Current best value of ``key``, solving it first when needed."""
        if not self.called:
            return self._top_level(key, rhs, initial)
        if key not in self.sigma:
            if len(self.sigma) >= self.max_points:
                self.taint()
                return initial()
            if len(self.called) >= self.max_nesting:
                raise _Defer(key, rhs, initial)
            self._create(key, initial)
        self.infl[key].add(self.called[-1])
        self._solve(key, rhs)
        if key in self.tainted:
            self.taint()
        return self.sigma[key]

    def taint(self) -> None:
        """Record that the value being computed depends on a widened answer."""
        self.widened = True
        if self.called:
            self.tainted.add(self.called[-1])

    def _top_level(self, key, rhs, initial):
        pending = [(key, rhs, initial)]
        while pending:
            pending_key, pending_rhs, pending_initial = pending[-1]
            if pending_key not in self.sigma:
                self._create(pending_key, pending_initial)
            try:
                self._solve(pending_key, pending_rhs)
            except _Defer as deferred:
                pending.append((deferred.key, deferred.rhs, deferred.initial))
                continue
            pending.pop()
        if key in self.tainted:
            self.widened = True
        return self.sigma[key]

    def _create(self, key, initial) -> None:
        value = initial()
        self.sigma[key] = value
        self.tops[key] = value

    def _solve(self, key, rhs) -> None:
        if key in self.stable or key in self.called_set:
            return
        self.called.append(key)
        self.called_set.add(key)
        try:
            while key not in self.stable:
                self.stable.add(key)
                if key in self.frozen:
                    break
                self.evaluations[key] += 1
                if self.evaluations[key] > self.fix_fuel:
                    new = self.tops[key]
                    self.frozen.add(key)
                    self.tainted.add(key)
                    self.widened = True
                else:
                    try:
                        new = rhs()
                    except _Defer:
                        # the evaluation was abandoned, so it does not count
                        self.stable.discard(key)
                        self.evaluations[key] -= 1
                        raise
                if new != self.sigma[key]:
                    self.sigma[key] = new
                    self._destabilize(key)
        finally:
            self.called.pop()
            self.called_set.discard(key)

    def _destabilize(self, key) -> None:
        pending = [key]
        while pending:
            node = pending.pop()
            for reader in self.infl.pop(node, set()):
                if reader in self.stable:
                    self.stable.discard(reader)
                    pending.append(reader)
