"""Small runs of each checking suite, plus deliberately broken models they must catch."""

import importlib

import pytest

from recurrify import checks
from recurrify import reclang as R
from recurrify.evaluator import Complete, evaluate
from recurrify.model.domains import Cx

denote_module = importlib.import_module("recurrify.model.denote")


def test_corpus_cases_cover_sorting_inputs():
    names = [case.name for case in checks.corpus_cases(3)]
    for expected in ("msort", "qsort", "merge", "split", "omega", "spin"):
        assert expected in names
    assert names.count("msort") == 1 + 1 + 2 + 6


def test_corpus_cases_run():
    for case in checks.corpus_cases(2):
        outcome = evaluate(case.program(), 10 ** 4)
        if case.name not in ("omega", "ticking_loop", "spin"):
            assert isinstance(outcome, Complete), case.describe()


def test_fuzz_case_is_deterministic():
    assert checks.fuzz_case(17) == checks.fuzz_case(17)


def test_soundness_small():
    report = checks.check_soundness(trials=60, max_length=3)
    assert report.ok, report.violations
    assert report.cases > 60 and report.notes["fuzz complete"] > 0


def test_adequacy_small():
    report = checks.check_adequacy(max_length=3)
    assert report.ok, report.violations
    assert report.notes["infinite semantic cost"] >= 3


def test_model_axioms_small():
    report = checks.check_model_axioms(trials=40, seed=3)
    assert report.ok, report.violations
    assert report.cases == 40 * len(checks.AXIOMS)


def test_lemmas_small():
    report = checks.check_lemmas(trials=40, seed=5)
    assert report.ok, report.violations


def test_report_serialises():
    report = checks.CheckReport("demo")
    report.fail("cost", "subject", "detail")
    data = report.as_dict()
    assert data["ok"] is False and data["violations"][0]["check"] == "cost"


# -- mutations ------------------------------------------------------------------

@pytest.fixture
def free_ticks(monkeypatch):
    """A model in which ``incr`` forgets to add its unit of cost."""
    def incr(self, expr, env):
        value = denote_module._cmplx(self.eval(expr.body, env))
        return Cx(value.cost, value.pot)
    monkeypatch.setitem(denote_module._HANDLERS, R.Incr, incr)


@pytest.fixture
def shrinking_cons(monkeypatch):
    """A model whose fold forgets to count the new constructor."""
    def fold(self, expr, env):
        return self.eval(expr.body, env) and 0
    monkeypatch.setitem(denote_module._HANDLERS, R.Fold, fold)


def test_soundness_catches_free_ticks(free_ticks):
    report = checks.check_soundness(trials=30, max_length=3)
    assert not report.ok
    assert any(violation.check == "cost" for violation in report.violations)


def test_free_ticks_are_exposed_by_sorting_inputs(free_ticks):
    report = checks.check_soundness(trials=0, max_length=4)
    subjects = {violation.subject.split(" ")[0] for violation in report.violations}
    assert subjects >= {"msort", "qsort"}


def test_soundness_catches_uncounted_constructors(shrinking_cons):
    report = checks.check_soundness(trials=30, max_length=3)
    assert not report.ok
