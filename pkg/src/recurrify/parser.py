"""Concrete syntax for source programs.

A program is a sequence of ``def name = expr ;`` items followed by an
optional ``main = expr ;``.  References to earlier definitions are inlined,
so every definition is a closed expression.  Sugar (lists, booleans, ``if``,
``caselist``) is expanded while parsing.
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field

from . import source as S
from .types import BOOL, INT, UNIT, TArrow, TProd, TRec, TSum, TVar, Type, list_of


class ParseError(Exception):
    def __init__(self, message: str, line: int, col: int):
        super().__init__(f"{line}:{col}: {message}")
        self.message = message
        self.line = line
        self.col = col


@dataclass(frozen=True)
class Token:
    kind: str  # "name", "int", "sym", "kw", "eof"
    text: str
    line: int
    col: int


KEYWORDS = {
    "def", "main", "fun", "let", "in", "case", "of", "inj0", "inj1", "caselist", "nil",
    "cons", "if", "then", "else", "fold", "unfold", "tick", "leq", "true", "false",
    "unit", "int", "bool", "list", "mu",
}

_TOKEN_RE = re.compile(r"""
    (?P<ws>[ \t\r]+)
  | (?P<nl>\n)
  | (?P<comment>(?:--|\#)[^\n]*)
  | (?P<int>\d+)
  | (?P<name>[A-Za-z_][A-Za-z0-9_']*)
  | (?P<sym>=>|->|⇒|→|[()\[\],;=|:+*.])
""", re.VERBOSE)

_CANON_SYM = {"⇒": "=>", "→": "->"}


def tokenize(text: str) -> list[Token]:
    tokens: list[Token] = []
    pos, line, line_start = 0, 1, 0
    while pos < len(text):
        match = _TOKEN_RE.match(text, pos)
        col = pos - line_start + 1
        if match is None:
            raise ParseError(f"unexpected character {text[pos]!r}", line, col)
        kind = match.lastgroup
        value = match.group()
        if kind == "nl":
            line += 1
            line_start = match.end()
        elif kind == "name":
            tokens.append(Token("kw" if value in KEYWORDS else "name", value, line, col))
        elif kind == "int":
            tokens.append(Token("int", value, line, col))
        elif kind == "sym":
            tokens.append(Token("sym", _CANON_SYM.get(value, value), line, col))
        pos = match.end()
    tokens.append(Token("eof", "", line, pos - line_start + 1))
    return tokens


@dataclass
class Program:
    """Parsed program: definitions in order, plus the optional main expression."""

    defs: dict[str, S.Expr] = field(default_factory=dict)
    main: S.Expr | None = None

    def get(self, name: str) -> S.Expr:
        if name not in self.defs:
            raise KeyError(name)
        return self.defs[name]


class _Parser:
    def __init__(self, text: str, defs: dict[str, S.Expr] | None = None):
        self.tokens = tokenize(text)
        self.pos = 0
        self.defs: dict[str, S.Expr] = dict(defs or {})

    # token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.pos]

    def peek(self, offset: int = 1) -> Token:
        return self.tokens[min(self.pos + offset, len(self.tokens) - 1)]

    def at(self, text: str) -> bool:
        token = self.tok
        return token.kind in ("sym", "kw") and token.text == text

    def advance(self) -> Token:
        token = self.tok
        self.pos += 1
        return token

    def expect(self, text: str) -> Token:
        if not self.at(text):
            self.fail(f"expected {text!r}")
        return self.advance()

    def fail(self, message: str):
        token = self.tok
        found = token.text if token.kind != "eof" else "end of input"
        raise ParseError(f"{message}, found {found!r}", token.line, token.col)

    def name(self) -> str:
        token = self.tok
        if token.kind != "name":
            self.fail("expected an identifier")
        self.advance()
        return token.text

    # programs
    def program(self) -> Program:
        prog = Program()
        while self.at("def"):
            self.advance()
            name = self.name()
            self.expect("=")
            body = self.expr(())
            self.expect(";")
            self.defs[name] = body
            prog.defs[name] = body
        if self.at("main"):
            self.advance()
            self.expect("=")
            prog.main = self.expr(())
            self.expect(";")
        if self.tok.kind != "eof":
            self.fail("expected 'def', 'main' or end of input")
        return prog

    # expressions; ``scope`` is the tuple of locally bound names
    def expr(self, scope: tuple[str, ...]) -> S.Expr:
        if self.at("fun"):
            return self.fun(scope)
        if self.at("let"):
            self.advance()
            self.expect("(")
            first_name = self.name()
            self.expect(",")
            second_name = self.name()
            self.expect(")")
            self.expect("=")
            bound = self.expr(scope)
            self.expect("in")
            body = self.expr(scope + (first_name, second_name))
            return S.LetPair(first_name, second_name, bound, body)
        if self.at("case"):
            self.advance()
            scrut = self.expr(scope)
            self.expect("of")
            self.expect("inj0")
            x0 = self.name()
            self.expect("=>")
            e0 = self.expr(scope + (x0,))
            self.expect("|")
            self.expect("inj1")
            x1 = self.name()
            self.expect("=>")
            e1 = self.expr(scope + (x1,))
            return S.Case(scrut, x0, e0, x1, e1)
        if self.at("caselist"):
            self.advance()
            scrut = self.expr(scope)
            self.expect("of")
            self.expect("nil")
            self.expect("=>")
            on_nil = self.expr(scope)
            self.expect("|")
            self.expect("cons")
            self.expect("(")
            head = self.name()
            self.expect(",")
            tail = self.name()
            self.expect(")")
            self.expect("=>")
            on_cons = self.expr(scope + (head, tail))
            return S.caselist(scrut, on_nil, head, tail, on_cons)
        if self.at("if"):
            self.advance()
            cond = self.expr(scope)
            self.expect("then")
            then = self.expr(scope)
            self.expect("else")
            orelse = self.expr(scope)
            return S.if_(cond, then, orelse)
        return self.application(scope)

    def fun(self, scope: tuple[str, ...]) -> S.Expr:
        self.expect("fun")
        fname = self.name()
        ty = None
        if self.at("("):
            self.advance()
            param = self.name()
            self.expect(":")
            dom = self.type(())
            self.expect(")")
            self.expect(":")
            cod = self.type(())
            ty = TArrow(dom, cod)
        else:
            param = self.name()
        self.expect("=>")
        body = self.expr(scope + (fname, param))
        return S.Fun(fname, param, body, ty)

    _ATOM_START = {"(", "[", "nil", "cons", "leq", "true", "false"}
    _PREFIX = {"tick", "inj0", "inj1", "fold", "unfold"}

    def starts_atom(self) -> bool:
        token = self.tok
        if token.kind in ("name", "int"):
            return True
        return token.kind in ("sym", "kw") and token.text in self._ATOM_START

    def application(self, scope: tuple[str, ...]) -> S.Expr:
        expr = self.operand(scope)
        while self.starts_atom():
            expr = S.App(expr, self.atom(scope))
        return expr

    def operand(self, scope: tuple[str, ...]) -> S.Expr:
        token = self.tok
        if token.kind == "kw" and token.text in self._PREFIX:
            self.advance()
            if token.text == "tick":
                return S.Tick(self.operand(scope))
            if token.text in ("inj0", "inj1"):
                ann = self.annotation(required=False)
                return S.Inj(int(token.text[-1]), self.operand(scope), ann)
            ann = self.annotation(required=True)
            if not isinstance(ann, TRec):
                raise ParseError(f"{token.text} needs a recursive type annotation",
                                 token.line, token.col)
            body = self.operand(scope)
            return S.Fold(ann, body) if token.text == "fold" else S.Unfold(ann, body)
        if not self.starts_atom():
            self.fail("expected an expression")
        return self.atom(scope)

    def annotation(self, required: bool) -> Type | None:
        if not self.at("["):
            if required:
                self.fail("expected a type annotation '[T]'")
            return None
        self.advance()
        ty = self.type(())
        self.expect("]")
        return ty

    def atom(self, scope: tuple[str, ...]) -> S.Expr:
        token = self.tok
        if token.kind == "name":
            self.advance()
            if token.text == S.WILDCARD:
                raise ParseError("'_' cannot be used as a value", token.line, token.col)
            if token.text in scope:
                return S.Var(token.text)
            if token.text in self.defs:
                return self.defs[token.text]
            raise ParseError(f"unknown identifier {token.text!r}", token.line, token.col)
        if token.kind == "int":
            self.advance()
            return S.IntLit(int(token.text))
        if self.at("true"):
            self.advance()
            return S.true_()
        if self.at("false"):
            self.advance()
            return S.false_()
        if self.at("nil"):
            self.advance()
            elem = self.annotation(required=False)
            return S.nil(elem)
        if self.at("cons"):
            self.advance()
            self.expect("(")
            head = self.expr(scope)
            self.expect(",")
            tail = self.expr(scope)
            self.expect(")")
            return S.cons(head, tail)
        if self.at("leq"):
            self.advance()
            self.expect("(")
            first_expr = self.expr(scope)
            self.expect(",")
            second_expr = self.expr(scope)
            self.expect(")")
            return S.Leq(first_expr, second_expr)
        if self.at("["):
            self.advance()
            items = []
            if not self.at("]"):
                items.append(self.expr(scope))
                while self.at(","):
                    self.advance()
                    items.append(self.expr(scope))
            self.expect("]")
            return S.list_literal(items)
        if self.at("("):
            self.advance()
            if self.at(")"):
                self.advance()
                return S.UNIT_VAL
            first = self.expr(scope)
            if self.at(","):
                self.advance()
                second = self.expr(scope)
                self.expect(")")
                return S.Pair(first, second)
            self.expect(")")
            return first
        self.fail("expected an expression")

    # types; ``tvars`` are the mu-bound type variables in scope
    def type(self, tvars: tuple[str, ...]) -> Type:
        left = self.sum_type(tvars)
        if self.at("->"):
            self.advance()
            return TArrow(left, self.type(tvars))
        return left

    def sum_type(self, tvars: tuple[str, ...]) -> Type:
        left = self.prod_type(tvars)
        if self.at("+"):
            self.advance()
            return TSum(left, self.sum_type(tvars))
        return left

    def prod_type(self, tvars: tuple[str, ...]) -> Type:
        left = self.atom_type(tvars)
        if self.at("*"):
            self.advance()
            return TProd(left, self.prod_type(tvars))
        return left

    def atom_type(self, tvars: tuple[str, ...]) -> Type:
        token = self.tok
        if self.at("unit"):
            self.advance()
            return UNIT
        if self.at("int"):
            self.advance()
            return INT
        if self.at("bool"):
            self.advance()
            return BOOL
        if self.at("list"):
            self.advance()
            return list_of(self.atom_type(tvars))
        if self.at("mu"):
            self.advance()
            var = self.name()
            self.expect(".")
            return TRec(var, self.type(tvars + (var,)))
        if self.at("("):
            self.advance()
            ty = self.type(tvars)
            self.expect(")")
            return ty
        if token.kind == "name":
            self.advance()
            if token.text not in tvars:
                raise ParseError(f"free type variable {token.text!r}", token.line, token.col)
            return TVar(token.text)
        self.fail("expected a type")


def parse_program(text: str, elaborate: bool = True) -> Program:
    """Parse a program; by default also infer and fill in all type annotations."""
    prog = _Parser(text).program()
    if elaborate:
        from .typecheck import elaborate_program

        prog = elaborate_program(prog)
    return prog


def parse_expr(text: str, defs: dict[str, S.Expr] | None = None,
               scope: tuple[str, ...] = ()) -> S.Expr:
    """Parse one expression (no elaboration), resolving names against ``defs``."""
    parser = _Parser(text, defs)
    expr = parser.expr(scope)
    if parser.tok.kind != "eof":
        parser.fail("unexpected trailing input")
    return expr


def parse_type(text: str) -> Type:
    parser = _Parser(text)
    ty = parser.type(())
    if parser.tok.kind != "eof":
        parser.fail("unexpected trailing input")
    return ty
