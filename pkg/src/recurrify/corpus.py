"""The bundled example programs."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

from .parser import Program, parse_program

PROGRAM_FILES = ("mergesort", "quicksort", "misc")


def program_text(name: str) -> str:
    programs = resources.files(__package__).joinpath("programs")
    return programs.joinpath(f"{name}.src").read_text("utf-8")


@lru_cache(maxsize=None)
def load(name: str) -> Program:
    """Parse and elaborate a bundled program by file stem."""
    return parse_program(program_text(name))


def definition(name: str):
    """Look a definition up across all bundled programs."""
    for stem in PROGRAM_FILES:
        prog = load(stem)
        if name in prog.defs:
            return prog.defs[name]
    raise KeyError(name)


def all_definitions() -> dict:
    out = {}
    for stem in PROGRAM_FILES:
        out.update(load(stem).defs)
    return out
