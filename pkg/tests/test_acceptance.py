"""Acceptance criteria 1 to 9, one PASS/FAIL line each.

Run under pytest (the lines are repeated in the terminal summary) or directly
with ``python3 tests/test_acceptance.py``.  Expected values come from the
brute-force oracles in ``oracles.py``; criteria whose stated values disagree
with those oracles fail here rather than being adjusted.
"""

from __future__ import annotations

import math
import sys
import time
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).resolve().parent))

import oracles  # noqa: E402
from recurrify import checks, corpus  # noqa: E402
from recurrify import reclang as R  # noqa: E402
from recurrify.extract import extract_expr  # noqa: E402
from recurrify.model import CARTESIAN, POWERSET, Cx, Model, ModelConfig, Tup, run_deep  # noqa: E402
from recurrify.simplify import model_simplify  # noqa: E402

RESULTS: list[str] = []


def record(number: int, title: str, budget: float, started: float, failures: list[str],
           detail: str) -> None:
    elapsed = time.perf_counter() - started
    if elapsed > budget:
        failures.append(f"took {elapsed:.1f} s, budget {budget:g} s")
    status = "FAIL" if failures else "PASS"
    line = f"{status} criterion {number}: {title} ({elapsed:.1f} s of {budget:g} s)"
    line += " - " + ("; ".join(failures) if failures else detail)
    RESULTS.append(line)
    print(line)
    assert not failures, line


def semantic(name: str, mode: str = CARTESIAN):
    model = Model(ModelConfig(product_mode=mode))
    return model, model.denote(R.PotProj(extract_expr(corpus.definition(name))))


def first_mismatches(pairs, limit=3) -> str:
    shown = ", ".join(f"{point}: got {got}, expected {want}" for point, got, want in pairs[:limit])
    return f"{len(pairs)} mismatches, e.g. {shown}"


def test_criterion_1_golden_extraction():
    from test_extract import GOLDEN

    started = time.perf_counter()
    failures = [name for name, golden in GOLDEN.items()
                if not R.alpha_equal(model_simplify(R.PotProj(extract_expr(
                    corpus.definition(name)))), golden, types=False)]
    failures = [f"{name} differs from its golden form" for name in failures]
    record(1, "golden recurrences", 1.0, started, failures,
           f"{', '.join(sorted(GOLDEN))} match up to renaming")


def test_criterion_2_split():
    def body():
        started = time.perf_counter()
        _, split = semantic("split")
        bad = []
        for size in range(65):
            want = Cx(0, Tup(math.ceil(size / 2), size // 2))
            got = split.apply(size)
            if got != want:
                bad.append((size, got, want))
        record(2, "split cost 0, potential (ceil n/2, floor n/2) for n in 0..64", 5.0, started,
               [first_mismatches(bad)] if bad else [], "all 65 sizes exact")
    run_deep(body)


def test_criterion_3_merge():
    def body():
        started = time.perf_counter()
        _, merge = semantic("merge")
        bad_pot, bad_cost, model_agrees = [], [], True
        for left_size in range(33):
            for right_size in range(33):
                out = merge.apply(Tup(left_size, right_size))
                if out.pot != left_size + right_size:
                    bad_pot.append(((left_size, right_size), out.pot, left_size + right_size))
                if out.cost != left_size + right_size:
                    bad_cost.append(((left_size, right_size), out.cost, left_size + right_size))
                model_agrees &= out.cost == oracles.merge_cost_model(left_size, right_size)
        failures = []
        if bad_pot:
            failures.append("potential " + first_mismatches(bad_pot))
        if bad_cost:
            failures.append("cost k+l: " + first_mismatches(bad_cost) + " (brute-force merge "
                            "makes at most k+l-1 comparisons, and the semantic cost "
                            + ("matches that oracle everywhere" if model_agrees else
                               "also differs from that oracle") + ")")
        record(3, "merge cost and potential k+l on 0..32 x 0..32", 30.0, started, failures,
               "all 1089 pairs exact")
    run_deep(body)


def test_criterion_4_msort():
    def body():
        started = time.perf_counter()
        _, msort = semantic("msort")
        costs = [msort.apply(size).cost for size in range(257)]
        bad = [(size, costs[size], oracles.msort_stated(size)) for size in range(129)
               if costs[size] != oracles.msort_stated(size)]
        over = [size for size in range(2, 257) if costs[size] > size * oracles.ceil_log2(size)]
        failures = []
        if bad:
            agrees = all(costs[size] == oracles.msort_cost_model(size) for size in range(129))
            failures.append(
                "stated recurrence: " + first_mismatches(bad) + " (the semantic cost "
                + ("equals the recurrence built from merge's k+l-1 cost" if agrees
                   else "differs from every oracle") + ")")
        if over:
            failures.append(f"exceeds n*ceil(lg n) at {over[:5]}")
        record(4, "msort equals the stated recurrence on 0..128, at most n*ceil(lg n)", 30.0,
               started, failures, "exact on 0..128, bound holds on 2..256")
    run_deep(body)


def test_msort_bound_part_of_criterion_4():
    """The inequality half of criterion 4 on its own."""
    def body():
        _, msort = semantic("msort")
        for size in range(2, 257):
            assert msort.apply(size).cost <= size * oracles.ceil_log2(size)
    run_deep(body)


def test_criterion_5_qsort_separation():
    def body():
        started = time.perf_counter()
        _, cartesian = semantic("qsort")
        costs = [cartesian.apply(size).cost for size in range(17)]
        failures = [f"cartesian cost({size}) = {costs[size]} < 2 * {costs[size - 1]}"
                    for size in range(3, 17) if costs[size] < 2 * costs[size - 1]]
        _, powerset = semantic("qsort", POWERSET)
        bad = []
        for size in range(21):
            got = powerset.apply(size).cost
            if got != size * (size - 1) // 2 or got != oracles.qsort_powerset(size):
                bad.append((size, got, size * (size - 1) // 2))
        if bad:
            failures.append("powerset " + first_mismatches(bad))
        record(5, "qsort doubles in cartesian mode, n(n-1)/2 in powerset mode", 60.0, started,
               failures, f"cartesian cost(16) = {costs[16]}, powerset exact on 0..20")
    run_deep(body)


def suite_criterion(number, title, budget, run):
    started = time.perf_counter()
    report = run()
    failures = [f"{violation.check} {violation.subject}: {violation.detail}"
                for violation in report.violations[:3]]
    if len(report.violations) > 3:
        failures.append(f"{len(report.violations)} violations in total")
    record(number, title, budget, started, failures,
           f"{report.cases} cases, no violations")


def test_criterion_6_soundness():
    suite_criterion(6, "soundness on sorting permutations and 1000 fuzz programs", 300.0,
                    lambda: checks.check_soundness(trials=1000, seed=0, fuel=10 ** 4))


def test_criterion_7_model_axioms():
    suite_criterion(7, "model axioms on 500 instances each", 120.0,
                    lambda: checks.check_model_axioms(trials=500, seed=0))


def test_criterion_8_lemmas():
    suite_criterion(8, "extraction lemmas and pairing on 500 samples", 60.0,
                    lambda: checks.check_lemmas(trials=500, seed=0))


def test_criterion_9_adequacy():
    suite_criterion(9, "finite semantic cost bounds terminating runs", 300.0,
                    lambda: checks.check_adequacy())


if __name__ == "__main__":
    sys.exit(pytest.main([__file__, "-q", "-s"]))
