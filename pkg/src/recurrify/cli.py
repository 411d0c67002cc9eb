"""Command-line interface.

Exit status is 0 on success, 1 when a check finds a violation and 2 for
usage or input errors.  ``--json`` prints one JSON object per line.
"""

from __future__ import annotations

import json
import math
import os
import sys
from pathlib import Path

import click

from . import corpus
from . import reclang as R
from . import source as S
from .analyze import analyze, parse_sizes
from .checks import (
    DEFAULT_FUEL, check_adequacy, check_lemmas, check_model_axioms, check_soundness,
)
from .evaluator import Complete, StuckError, evaluate
from .extract import extract_expr
from .model.domains import CARTESIAN, POWERSET, UnsupportedFunctor
from .parser import ParseError, Program, parse_expr, parse_program
from .simplify import model_simplify, simplify
from .typecheck import SourceTypeError, elaborate
from .types import TArrow, children as type_children

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2
SEED_VARIABLE = "RECURRIFY_SEED"


class InputError(click.ClickException):
    exit_code = EXIT_USAGE


def _emit(ctx: click.Context, record: dict, text: str) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(record, ensure_ascii=False, sort_keys=True))
    else:
        click.echo(text)


def _seed(seed: int) -> int:
    override = os.environ.get(SEED_VARIABLE)
    if override is None:
        return seed
    try:
        return int(override)
    except ValueError:
        raise InputError(f"{SEED_VARIABLE} must be an integer, got {override!r}") from None


def _load(path: str) -> Program:
    """A program file, or the name of a bundled corpus file."""
    file = Path(path)
    try:
        if file.is_file():
            text = file.read_text(encoding="utf-8")
        elif file.stem in corpus.PROGRAM_FILES and not file.parent.name:
            text = corpus.program_text(file.stem)
        else:
            raise InputError(f"no such file: {path} (bundled programs: "
                             f"{', '.join(corpus.PROGRAM_FILES)})")
        return parse_program(text)
    except ParseError as err:
        raise InputError(f"{path}: parse error: {err}") from None
    except SourceTypeError as err:
        raise InputError(f"{path}: type error: {err}") from None
    except UnicodeDecodeError as err:
        raise InputError(f"{path}: not UTF-8: {err}") from None


def _definition(program: Program, name: str) -> S.Expr:
    try:
        return program.get(name)
    except KeyError:
        known = ", ".join(program.defs) or "none"
        raise InputError(f"unknown definition {name!r} (defined: {known})") from None


@click.group()
@click.option("--json", "as_json", is_flag=True, help="One JSON object per output line.")
@click.pass_context
def main(ctx: click.Context, as_json: bool) -> None:
    """Extract and analyse cost recurrences of functional programs."""
    ctx.ensure_object(dict)
    ctx.obj["json"] = as_json


@main.command()
@click.argument("file")
@click.option("--main", "main_text", help="Expression to run instead of the file's main.")
@click.option("--fuel", default=10 ** 6, show_default=True, type=click.IntRange(min=0))
@click.pass_context
def run(ctx: click.Context, file: str, main_text: str | None, fuel: int) -> None:
    """Evaluate a program, counting ticks."""
    program = _load(file)
    if main_text is not None:
        try:
            term, _ = elaborate(parse_expr(main_text, program.defs))
        except ParseError as err:
            raise InputError(f"--main: parse error: {err}") from None
        except SourceTypeError as err:
            raise InputError(f"--main: type error: {err}") from None
    elif program.main is not None:
        term = program.main
    else:
        raise InputError(f"{file} has no main expression; pass --main")
    try:
        outcome = evaluate(term, fuel)
    except StuckError as err:
        raise InputError(f"evaluation stuck: {err}") from None
    if isinstance(outcome, Complete):
        value = S.show_value(outcome.value)
        _emit(ctx, {"complete": True, "value": value, "cost": outcome.cost},
              f"value: {value}\ncost: {outcome.cost}\ncomplete: yes")
    else:
        _emit(ctx, {"complete": False, "value": None, "cost": outcome.cost},
              f"incomplete after fuel {fuel}\ncost: {outcome.cost}\ncomplete: no")


def _recurrence_names(program: Program, name: str) -> dict:
    """Short names for the recurrences of definitions preceding ``name``."""
    names = {}
    for other, term in program.defs.items():
        if other == name:
            break
        if isinstance(term, S.Fun):
            form = model_simplify(R.PotProj(extract_expr(term)))
            names[R.alpha_key(form, types=False)] = other
    return names


@main.command()
@click.argument("file")
@click.argument("name")
@click.option("--simplify", "simplified", is_flag=True,
              help="Normalize with the monad laws (bind of val, cost and potential projections).")
@click.option("--recurrence", is_flag=True,
              help="Print the potential projection in model form: costs and sizes made explicit, "
                   "earlier definitions referred to by name.")
@click.option("--types", "show_types", is_flag=True, help="Show type annotations.")
@click.pass_context
def extract(ctx: click.Context, file: str, name: str, simplified: bool, recurrence: bool,
            show_types: bool) -> None:
    """Print the extracted recurrence of a definition."""
    program = _load(file)
    term = extract_expr(_definition(program, name))
    names = None
    if recurrence:
        names = _recurrence_names(program, name)
        term = model_simplify(R.PotProj(term))
    elif simplified:
        term = simplify(term)
    text = R.pretty_print_rec(term, names, show_types=show_types)
    _emit(ctx, {"name": name, "recurrence": text}, text)


def _cost_text(cost) -> str:
    return "∞" if cost == math.inf else str(cost)


@main.command(name="analyze")
@click.argument("file")
@click.argument("name")
@click.option("--sizes", required=True, help="Size range A..B (lists denote their length).")
@click.option("--product-mode", type=click.Choice([CARTESIAN, POWERSET]), default=CARTESIAN,
              show_default=True)
@click.option("--fix-fuel", default=256, show_default=True, type=click.IntRange(min=1))
@click.option("--cross-check", is_flag=True,
              help="Also run the interpreter on concrete inputs of each size.")
@click.option("--seed", default=0, show_default=True, type=int,
              help=f"Sampling seed for cross-checks (overridden by {SEED_VARIABLE}).")
@click.pass_context
def analyze_command(ctx: click.Context, file: str, name: str, sizes: str, product_mode: str,
                    fix_fuel: int, cross_check: bool, seed: int) -> None:
    """Tabulate the semantic cost and potential over input sizes."""
    program = _load(file)
    function = _definition(program, name)
    try:
        low, high = parse_sizes(sizes)
        rows = analyze(function, low, high, product_mode, fix_fuel, cross_check, _seed(seed))
    except (ValueError, UnsupportedFunctor) as err:
        raise InputError(str(err)) from None
    violations = [row for row in rows if row.violation]
    if ctx.obj["json"]:
        for row in rows:
            click.echo(json.dumps(row.as_dict(), ensure_ascii=False, sort_keys=True))
    else:
        header = ("size", "semantic_cost", "semantic_potential", "actual_max_cost", "widened")
        table = [header] + [
            (str(row.size), _cost_text(row.semantic_cost), row.semantic_potential,
             "-" if row.actual_max_cost is None else str(row.actual_max_cost),
             ("yes" if row.widened else "no") + ("  VIOLATION" if row.violation else ""))
            for row in rows]
        widths = [max(len(line[column]) for line in table) for column in range(len(header))]
        for line in table:
            click.echo("  ".join(cell.ljust(width) for cell, width in zip(line, widths)).rstrip())
        if isinstance(function.ty, TArrow) and _has_function(function.ty.cod):
            click.echo("note: function-valued potentials are compared on probe arguments only")
    if violations:
        ctx.exit(EXIT_VIOLATION)


def _has_function(ty) -> bool:
    if isinstance(ty, TArrow):
        return True
    return any(_has_function(child) for child in type_children(ty))


@main.group()
def check() -> None:
    """Run a checking suite."""


def _report(ctx: click.Context, report) -> None:
    if ctx.obj["json"]:
        click.echo(json.dumps(report.as_dict(), ensure_ascii=False, sort_keys=True))
    else:
        status = "ok" if report.ok else f"{len(report.violations)} violation(s)"
        click.echo(f"{report.name}: {status} over {report.cases} cases")
        for key, count in sorted(report.notes.items()):
            click.echo(f"  {key}: {count}")
        for violation in report.violations:
            click.echo(f"  VIOLATION [{violation.check}] {violation.subject}: {violation.detail}")
    if not report.ok:
        ctx.exit(EXIT_VIOLATION)


_SEED_HELP = f"First seed (overridden by {SEED_VARIABLE})."


@check.command()
@click.option("--trials", default=1000, show_default=True, type=click.IntRange(min=0))
@click.option("--seed", default=0, show_default=True, type=int, help=_SEED_HELP)
@click.option("--fuel", default=DEFAULT_FUEL, show_default=True, type=click.IntRange(min=0))
@click.option("--max-length", default=6, show_default=True, type=click.IntRange(min=0),
              help="Longest enumerated corpus input.")
@click.pass_context
def soundness(ctx, trials: int, seed: int, fuel: int, max_length: int) -> None:
    """Actual costs and values never exceed the semantic recurrence."""
    _report(ctx, check_soundness(trials, _seed(seed), fuel, max_length))


@check.command()
@click.option("--fuel", default=DEFAULT_FUEL, show_default=True, type=click.IntRange(min=1))
@click.option("--corpus", "max_length", default=6, show_default=True,
              type=click.IntRange(min=0), help="Longest enumerated corpus input.")
@click.pass_context
def adequacy(ctx, fuel: int, max_length: int) -> None:
    """Finite semantic costs bound terminating runs.

    Assumes the corpus is sensibly ticked; that property is not checked.
    """
    _report(ctx, check_adequacy(fuel, max_length))


@check.command(name="model-axioms")
@click.option("--trials", default=500, show_default=True, type=click.IntRange(min=0))
@click.option("--seed", default=0, show_default=True, type=int, help=_SEED_HELP)
@click.pass_context
def model_axioms(ctx, trials: int, seed: int) -> None:
    """The size-order axioms hold in the model."""
    _report(ctx, check_model_axioms(trials, _seed(seed)))


@check.command()
@click.option("--trials", default=500, show_default=True, type=click.IntRange(min=0))
@click.option("--seed", default=0, show_default=True, type=int, help=_SEED_HELP)
@click.pass_context
def lemmas(ctx, trials: int, seed: int) -> None:
    """Extraction and simplification lemmas."""
    _report(ctx, check_lemmas(trials, _seed(seed)))


if __name__ == "__main__":
    sys.exit(main())
