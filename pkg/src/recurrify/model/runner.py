"""Run deeply recursive work on a thread with a large stack."""

from __future__ import annotations

import gc
import sys
import threading
from typing import Any, Callable

DEFAULT_STACK_MB = 512
DEFAULT_RECURSION_LIMIT = 1_000_000

_lock = threading.Lock()


def run_deep(fn: Callable[..., Any], *args, stack_mb: int = DEFAULT_STACK_MB, **kwargs) -> Any:
    """Call ``fn`` on a fresh thread whose stack is ``stack_mb`` megabytes.

    The model and the simplifier recurse over terms and over nested fixpoint
    queries; their depth grows with the analysed input size.
    """
    if getattr(_local, "inside", False):
        return fn(*args, **kwargs)
    outcome: dict = {}

    def target():
        _local.inside = True
        # the fixpoint tables grow large; frequent full collections dominate otherwise
        thresholds = gc.get_threshold()
        gc.set_threshold(max(thresholds[0], 100_000), 50, 1000)
        try:
            outcome["value"] = fn(*args, **kwargs)
        except BaseException as exc:  # re-raised on the calling thread
            outcome["error"] = exc
        finally:
            gc.set_threshold(*thresholds)

    with _lock:
        previous = threading.stack_size()
        threading.stack_size(stack_mb * 1024 * 1024)
        try:
            worker = threading.Thread(target=target, name="recurrify-deep")
            worker.start()
        finally:
            threading.stack_size(previous)
    if sys.getrecursionlimit() < DEFAULT_RECURSION_LIMIT:
        sys.setrecursionlimit(DEFAULT_RECURSION_LIMIT)
    worker.join()
    if "error" in outcome:
        raise outcome["error"]
    return outcome.get("value")


_local = threading.local()
