"""AST for the quasiset DSL, and its pretty-printer."""

from __future__ import annotations

from dataclasses import dataclass
from typing import Optional, Union

KEYWORDS = frozenset({"kind", "matom", "let", "qcard", "chains", "fin", "print", "check", "pow", "one"})
QUERY_OPS = ("qcard", "chains", "fin", "print")


@dataclass(frozen=True)
class Elem:
    name: str
    mult: Optional[int] = None


@dataclass(frozen=True)
class Literal:
    elems: tuple[Elem, ...] = ()


@dataclass(frozen=True)
class Ident:
    name: str


@dataclass(frozen=True)
class Union_:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Intersect:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Diff:
    left: "Expr"
    right: "Expr"


@dataclass(frozen=True)
class Pow:
    arg: "Expr"


@dataclass(frozen=True)
class SingletonOf:
    arg: "Expr"
    kind: str


Expr = Union[Literal, Ident, Union_, Intersect, Diff, Pow, SingletonOf]


@dataclass(frozen=True)
class KindDecl:
    name: str
    size: int


@dataclass(frozen=True)
class MAtomDecl:
    name: str


@dataclass(frozen=True)
class Let:
    name: str
    expr: Expr


@dataclass(frozen=True)
class Query:
    op: str
    expr: Expr


@dataclass(frozen=True)
class Check:
    theorem: str
    flags: tuple[tuple[str, Optional[int]], ...] = ()


Stmt = Union[KindDecl, MAtomDecl, Let, Query, Check]


def _level(e: Expr) -> int:
    if isinstance(e, Union_):
        return 0
    if isinstance(e, (Intersect, Diff)):
        return 1
    return 2


def pretty_expr(e: Expr, min_level: int = 0) -> str:
    if isinstance(e, Literal):
        if not e.elems:
            return "{}"
        return "{" + ", ".join(x.name if x.mult is None else f"{x.name}*{x.mult}" for x in e.elems) + "}"
    if isinstance(e, Ident):
        s = e.name
    elif isinstance(e, Pow):
        s = f"pow({pretty_expr(e.arg)})"
    elif isinstance(e, SingletonOf):
        s = f"one({pretty_expr(e.arg)}, {e.kind})"
    elif isinstance(e, Union_):
        s = f"{pretty_expr(e.left, 0)} | {pretty_expr(e.right, 1)}"
    elif isinstance(e, (Intersect, Diff)):
        op = "&" if isinstance(e, Intersect) else "\\"
        s = f"{pretty_expr(e.left, 1)} {op} {pretty_expr(e.right, 2)}"
    else:
        raise TypeError(f"not an expression: {e!r}")
    return f"({s})" if _level(e) < min_level else s


def pretty_stmt(s: Stmt) -> str:
    if isinstance(s, KindDecl):
        return f"kind {s.name} {s.size};"
    if isinstance(s, MAtomDecl):
        return f"matom {s.name};"
    if isinstance(s, Let):
        return f"let {s.name} = {pretty_expr(s.expr)};"
    if isinstance(s, Query):
        return f"{s.op} {pretty_expr(s.expr)};"
    if isinstance(s, Check):
        flags = "".join(f" --{k}" if v is None else f" --{k} {v}" for k, v in s.flags)
        return f"check {s.theorem}{flags};"
    raise TypeError(f"not a statement: {s!r}")


def pretty_print(program) -> str:
    return "\n".join(pretty_stmt(s) for s in program)
