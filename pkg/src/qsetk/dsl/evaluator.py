"""Evaluation of DSL programs against a session environment."""

from __future__ import annotations

import json
import random
from collections import Counter
from dataclasses import dataclass, field

from qsetk import checker, core, counting
from qsetk.core import MAtom, Qset, Universe
from qsetk.dsl.nodes import (
    Check,
    Diff,
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
from qsetk.errors import DuplicateKind, QsetError, UnboundIdent, UnknownKind

_FLAG_FIELDS = {
    "max-kinds": "max_kinds",
    "max-atoms": "max_total_matoms",
    "max-classical": "max_classical",
    "max-nesting": "max_nesting",
    "pow-cap": "powerset_card_cap",
}


@dataclass
class Env:
    universe: Universe = field(default_factory=core.make_universe)
    bindings: dict[str, Qset] = field(default_factory=dict)
    seed: int = 0
    chain_cap: int = counting.DEFAULT_CHAIN_CAP
    rng: random.Random = field(init=False)

    def __post_init__(self):
        self.rng = random.Random(self.seed)

    def reseed(self, seed: int) -> None:
        self.seed = seed
        self.rng = random.Random(seed)


@dataclass
class Output:
    """Result of one statement: display text (may be empty) and a JSON record."""

    text: str
    record: dict

    def json(self) -> str:
        return json.dumps(self.record, sort_keys=True, ensure_ascii=False)


def eval_expr(e, env: Env) -> Qset:
    if isinstance(e, Literal):
        return _literal(e, env)
    if isinstance(e, Ident):
        try:
            return env.bindings[e.name]
        except KeyError:
            raise UnboundIdent(f"unbound identifier {e.name!r}") from None
    if isinstance(e, Union_):
        return core.union(eval_expr(e.left, env), eval_expr(e.right, env))
    if isinstance(e, Intersect):
        return core.intersection(eval_expr(e.left, env), eval_expr(e.right, env))
    if isinstance(e, Diff):
        return core.difference(eval_expr(e.left, env), eval_expr(e.right, env))
    if isinstance(e, Pow):
        return core.powerset(eval_expr(e.arg, env))
    if isinstance(e, SingletonOf):
        X = eval_expr(e.arg, env)
        env.universe.kind(e.kind)
        candidates = [t for t in X.matoms() if t.kind.id == e.kind]
        if not candidates:
            raise UnknownKind(f"{X} has no m-atom of kind {e.kind!r}")
        return counting.singleton(X, env.rng.choice(candidates))
    raise TypeError(f"not an expression: {e!r}")


def _literal(e: Literal, env: Env) -> Qset:
    u = env.universe
    counts: Counter[str] = Counter()
    classical = []
    for el in e.elems:
        if u.has_kind(el.name):
            counts[el.name] += 1 if el.mult is None else el.mult
        elif MAtom(el.name) in u.classical:
            if el.mult not in (None, 1):
                raise QsetError(f"M-atom {el.name!r} cannot have multiplicity {el.mult}")
            classical.append(MAtom(el.name))
        else:
            raise UnknownKind(f"{el.name!r} is neither a declared kind nor an M-atom")
    return core.make_qset(u, dict(counts), classical=classical, rng=env.rng)


def bounds_from_flags(flags) -> tuple[checker.Bounds, bool]:
    values = {}
    symmetry = True
    for name, value in flags:
        if name == "no-symmetry" and value is None:
            symmetry = False
        elif name in _FLAG_FIELDS and value is not None:
            values[_FLAG_FIELDS[name]] = value
        else:
            raise QsetError(f"bad check flag --{name}")
    return checker.Bounds(**values), symmetry


def execute(stmt, env: Env) -> Output:
    if isinstance(stmt, KindDecl):
        if MAtom(stmt.name) in env.universe.classical:
            raise DuplicateKind(f"{stmt.name!r} is already an M-atom")
        env.universe = env.universe.extend([(stmt.name, stmt.size)])
        return Output("", {"stmt": "kind", "name": stmt.name, "pool": stmt.size})
    if isinstance(stmt, MAtomDecl):
        if env.universe.has_kind(stmt.name):
            raise DuplicateKind(f"{stmt.name!r} is already a kind")
        env.universe = env.universe.extend(classical_elems=[MAtom(stmt.name)])
        return Output("", {"stmt": "matom", "name": stmt.name})
    if isinstance(stmt, Let):
        X = eval_expr(stmt.expr, env)
        env.bindings[stmt.name] = X
        return Output("", {"stmt": "let", "name": stmt.name, "value": X.canon()})
    if isinstance(stmt, Query):
        return _query(stmt.op, eval_expr(stmt.expr, env), env)
    if isinstance(stmt, Check):
        b, symmetry = bounds_from_flags(stmt.flags)
        ids = checker.ALL_IDS if stmt.theorem == "ALL" else (stmt.theorem,)
        report = checker.run_suite(b, symmetry=symmetry, theorems=ids)
        verdicts = [v.to_dict() for v in report.verdicts]
        text = "\n".join(json.dumps(v, sort_keys=True, ensure_ascii=False) for v in verdicts)
        return Output(text, {"stmt": "check", "bounds": report.to_dict(timing=False)["bounds"],
                             "verdicts": verdicts})
    raise TypeError(f"not a statement: {stmt!r}")


def _query(op: str, X: Qset, env: Env) -> Output:
    if op == "qcard":
        r = counting.qcard(X)
        if isinstance(r, counting.Defined):
            return Output(str(r.n), {"stmt": "qcard", "value": r.n})
        return Output(f"undefined ({r.reason})", {"stmt": "qcard", "value": None, "reason": r.reason})
    if op == "fin":
        f = counting.is_finite(X)
        return Output("true" if f else "false", {"stmt": "fin", "value": f})
    if op == "print":
        return Output(X.canon(), {"stmt": "print", "value": X.canon()})
    if op == "chains":
        classes = counting.chain_classes(counting.descendant_chains(X, env.chain_cap))
        lines = [f"{c.canon()}  [{n} token-level]" for c, n in classes]
        record = {"stmt": "chains",
                  "classes": [{"members": [m.canon() for m in c.members], "count": n} for c, n in classes]}
        return Output("\n".join(lines), record)
    raise ValueError(f"unknown query {op!r}")


def listing(X: Qset) -> str:
    """Canonical form, followed by one line per nested element if there are any."""
    lines = [X.canon()]
    lines += [f"  {q.canon()}" for q in X.nested()]
    return "\n".join(lines)
