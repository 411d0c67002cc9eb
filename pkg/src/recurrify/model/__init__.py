"""The constructor-counting model: domains, denotation and fixpoints."""

from .denote import Closure, FixFunc, Model, ModelConfig, denote
from .domains import (
    CARTESIAN, INF, INT_TOP, POWERSET, STAR, ConstFunc, Cx, JoinFunc, PairSet, SumSet, Tup,
    UnsupportedFunctor, bottom, csize, join, leq, render, sem_equal, succ, to_json, top,
    unfold_symbolic,
)
from .runner import run_deep
