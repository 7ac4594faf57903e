"""Lexer and recursive-descent parser for the quasiset DSL.

Statements end with ``;`` or a newline (newlines inside brackets are ignored).
``\\`` and ``&`` bind tighter than ``|``; all three are left-associative.
"""

from __future__ import annotations

import re
from dataclasses import dataclass

from qsetk.dsl.nodes import (
    KEYWORDS,
    QUERY_OPS,
    Check,
    Diff,
    Elem,
    Ident,
    Intersect,
    KindDecl,
    Let,
    Literal,
    MAtomDecl,
    Pow,
    Query,
    SingletonOf,
    Union_,
)
from qsetk.errors import QsetError


class DslSyntaxError(QsetError):
    def __init__(self, line: int, col: int, expected, found: str):
        self.line, self.col = line, col
        self.expected = frozenset(expected)
        self.found = found
        exp = " or ".join(sorted(self.expected))
        super().__init__(f"{line}:{col}: expected {exp}, found {found}")


@dataclass(frozen=True)
class Tok:
    kind: str  # IDENT, NAT, FLAG, NEWLINE, EOF, KW, or the symbol itself
    text: str
    line: int
    col: int

    def describe(self) -> str:
        if self.kind == "EOF":
            return "end of input"
        if self.kind == "NEWLINE":
            return "newline"
        return repr(self.text)


_TOKEN_RE = re.compile(
    r"""
    (?P<ws>[ \t\r]+)
  | (?P<comment>\#[^\n]*)
  | (?P<newline>\n)
  | (?P<flag>--[A-Za-z][A-Za-z0-9-]*)
  | (?P<nat>[0-9]+)
  | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
  | (?P<sym>[{}(),*|&\\=;])
    """,
    re.VERBOSE,
)

_OPEN, _CLOSE = "{(", "})"


def tokenize(text: str) -> list[Tok]:
    toks = []
    line, col, pos, depth = 1, 1, 0, 0
    while pos < len(text):
        m = _TOKEN_RE.match(text, pos)
        if m is None:
            raise DslSyntaxError(line, col, {"a token"}, repr(text[pos]))
        kind = m.lastgroup
        s = m.group()
        if kind == "newline":
            if depth == 0:
                toks.append(Tok("NEWLINE", s, line, col))
            line, col = line + 1, 1
        else:
            if kind == "sym":
                depth += s in _OPEN
                depth -= s in _CLOSE and depth > 0
                toks.append(Tok(s, s, line, col))
            elif kind == "ident":
                toks.append(Tok("KW" if s in KEYWORDS else "IDENT", s, line, col))
            elif kind == "nat":
                toks.append(Tok("NAT", s, line, col))
            elif kind == "flag":
                toks.append(Tok("FLAG", s[2:], line, col))
            col += len(s)
        pos = m.end()
    toks.append(Tok("EOF", "", line, col))
    return toks


class _Parser:
    def __init__(self, text: str):
        self.toks = tokenize(text)
        self.i = 0

    @property
    def cur(self) -> Tok:
        return self.toks[self.i]

    def fail(self, expected):
        t = self.cur
        raise DslSyntaxError(t.line, t.col, expected, t.describe())

    def at(self, kind: str, text: str | None = None) -> bool:
        t = self.cur
        return t.kind == kind and (text is None or t.text == text)

    def expect(self, kind: str, text: str | None = None) -> Tok:
        if not self.at(kind, text):
            self.fail({repr(text) if text else kind if kind.isalpha() else repr(kind)})
        t = self.cur
        self.i += 1
        return t

    def skip_newlines(self):
        while self.at("NEWLINE") or self.at(";"):
            self.i += 1

    def end_stmt(self):
        if self.at(";") or self.at("NEWLINE"):
            self.i += 1
        elif not self.at("EOF"):
            self.fail({"';'", "newline"})

    # -- statements ----------------------------------------------------

    def program(self):
        stmts = []
        self.skip_newlines()
        while not self.at("EOF"):
            stmts.append(self.stmt())
            self.skip_newlines()
        return tuple(stmts)

    def stmt(self):
        t = self.cur
        if t.kind != "KW" or t.text in ("pow", "one"):
            self.fail({"'kind'", "'matom'", "'let'", "'check'"} | {repr(q) for q in QUERY_OPS})
        self.i += 1
        if t.text == "kind":
            name = self.expect("IDENT").text
            size = int(self.expect("NAT").text)
            node = KindDecl(name, size)
        elif t.text == "matom":
            node = MAtomDecl(self.expect("IDENT").text)
        elif t.text == "let":
            name = self.expect("IDENT").text
            self.expect("=")
            node = Let(name, self.expr())
        elif t.text == "check":
            name = self.expect("IDENT").text
            flags = []
            while self.at("FLAG"):
                flag = self.cur.text
                self.i += 1
                value = int(self.expect("NAT").text) if self.at("NAT") else None
                flags.append((flag, value))
            node = Check(name, tuple(flags))
        else:
            node = Query(t.text, self.expr())
        self.end_stmt()
        return node

    # -- expressions ---------------------------------------------------

    def expr(self):
        left = self.term()
        while self.at("|"):
            self.i += 1
            left = Union_(left, self.term())
        return left

    def term(self):
        left = self.atom()
        while self.at("&") or self.at("\\"):
            op = self.cur.kind
            self.i += 1
            right = self.atom()
            left = Intersect(left, right) if op == "&" else Diff(left, right)
        return left

    def atom(self):
        t = self.cur
        if t.kind == "{":
            self.i += 1
            if self.at("}"):
                self.i += 1
                return Literal()
            elems = [self.elem()]
            while self.at(","):
                self.i += 1
                elems.append(self.elem())
            if not self.at("}"):
                self.fail({"','", "'}'"})
            self.i += 1
            return Literal(tuple(elems))
        if t.kind == "IDENT":
            self.i += 1
            return Ident(t.text)
        if t.kind == "(":
            self.i += 1
            e = self.expr()
            if not self.at(")"):
                self.fail({"')'", "'|'", "'&'", "'\\'"})
            self.i += 1
            return e
        if t.kind == "KW" and t.text == "pow":
            self.i += 1
            self.expect("(")
            e = self.expr()
            self.expect(")")
            return Pow(e)
        if t.kind == "KW" and t.text == "one":
            self.i += 1
            self.expect("(")
            e = self.expr()
            self.expect(",")
            kind = self.expect("IDENT").text
            self.expect(")")
            return SingletonOf(e, kind)
        self.fail({"'{'", "'('", "IDENT", "'pow'", "'one'"})

    def elem(self):
        name = self.expect("IDENT").text
        if self.at("*"):
            self.i += 1
            return Elem(name, int(self.expect("NAT").text))
        return Elem(name)


def parse(text: str):
    """Parse a program into a tuple of statements."""
    return _Parser(text).program()


def parse_expr(text: str):
    """Parse a single expression, optionally followed by ``;``."""
    p = _Parser(text)
    p.skip_newlines()
    e = p.expr()
    p.skip_newlines()
    if not p.at("EOF"):
        p.fail({"end of input"})
    return e
