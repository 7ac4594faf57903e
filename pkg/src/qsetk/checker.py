"""Bounded exhaustive model checking of the quasicardinality axioms and theorems.

Every universe shape within :class:`Bounds` is built, every flat quasiset of
it (every subset of its m-atoms and classical elements) is generated, and each
axiom or theorem is checked on all of them, or on all pairs for the binary
results. The checker is allowed to look at token identity; :mod:`qsetk.counting`
is not.
"""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field
from math import comb
from typing import Callable, Iterator

from qsetk import core, counting
from qsetk.core import CSet, MAtom, Qset, Universe, make_universe
from qsetk.counting import Defined
from qsetk.errors import BoundExceeded, UnknownTheorem
from qsetk.oracle import oracle_card

AXIOMS = ("H1", "H2")
THEOREMS = ("NONZERO", "SUBCARD", "MONO", "ADD", "POW", "SING1", "GEN")
ALL_IDS = AXIOMS + THEOREMS

KIND_LABELS = "efghijklmnopqrstuvwxyz"
ATOM_LABELS = "abcd" + "".join(f"a{i}" for i in range(4, 32))


@dataclass(frozen=True)
class Bounds:
    max_kinds: int = 2
    max_total_matoms: int = 4
    max_classical: int = 2
    max_nesting: int = 1
    powerset_card_cap: int = 4

    def __post_init__(self):
        for name, value in asdict(self).items():
            if value < 0:
                raise ValueError(f"{name} must be >= 0")


DESK_BOUNDS = Bounds()
ZERO_BOUNDS = Bounds(0, 0, 0, 0, 0)


@dataclass(frozen=True)
class UniverseShape:
    """Pool sizes per kind plus how many classical atoms and depth-1 sets."""

    pools: tuple[int, ...]
    atoms: int = 0
    sets: int = 0

    def classical(self) -> list:
        atoms = [MAtom(ATOM_LABELS[i]) for i in range(self.atoms)]
        # j-th set holds j fresh inner atoms, so the sets are pairwise distinct
        sets = [CSet(frozenset(MAtom(f"u{k}") for k in range(j))) for j in range(self.sets)]
        return atoms + sets

    def build(self) -> Universe:
        kinds = [(KIND_LABELS[i], n) for i, n in enumerate(self.pools)]
        return make_universe(kinds, self.classical())

    def to_dict(self) -> dict:
        return {"pools": list(self.pools), "atoms": self.atoms, "sets": self.sets}

    @classmethod
    def from_dict(cls, d: dict) -> "UniverseShape":
        return cls(tuple(d["pools"]), d["atoms"], d["sets"])


@dataclass
class Verdict:
    theorem_id: str
    universes_checked: int = 0
    instances_checked: int = 0
    holds: bool = True
    counterexample: dict | None = None
    notes: list[str] = field(default_factory=list)

    def to_dict(self) -> dict:
        return {
            "id": self.theorem_id,
            "holds": self.holds,
            "universes_checked": self.universes_checked,
            "instances_checked": self.instances_checked,
            "counterexample": self.counterexample,
            "notes": self.notes,
        }


@dataclass
class Report:
    bounds: Bounds
    verdicts: list[Verdict]
    elapsed_ms: float = 0.0
    symmetry: bool = True

    @property
    def holds(self) -> bool:
        return all(v.holds for v in self.verdicts)

    def verdict(self, theorem_id: str) -> Verdict:
        for v in self.verdicts:
            if v.theorem_id == theorem_id:
                return v
        raise KeyError(theorem_id)

    def to_dict(self, timing: bool = True) -> dict:
        d = {
            "bounds": asdict(self.bounds),
            "symmetry": self.symmetry,
            "verdicts": [v.to_dict() for v in self.verdicts],
        }
        if timing:
            d["elapsed_ms"] = round(self.elapsed_ms, 3)
        return d

    def to_json(self, timing: bool = True) -> str:
        return json.dumps(self.to_dict(timing), sort_keys=True, ensure_ascii=False)


# -- enumeration ----------------------------------------------------------


def enumerate_shapes(b: Bounds, symmetry: bool = True) -> list[UniverseShape]:
    pools = [
        p for p in itertools.product(range(b.max_total_matoms + 1), repeat=b.max_kinds)
        if sum(p) <= b.max_total_matoms and (not symmetry or list(p) == sorted(p, reverse=True))
    ]
    pools.sort(key=lambda p: (sum(p), max(p, default=0), p[::-1]))
    max_sets = b.max_classical if b.max_nesting >= 1 else 0
    classical = [(c - s, s) for c in range(b.max_classical + 1) for s in range(min(c, max_sets) + 1)]
    return [UniverseShape(p, a, s) for p in pools for a, s in classical]


def enumerate_universes(b: Bounds, symmetry: bool = True) -> Iterator[Universe]:
    """Every universe shape within ``b`` exactly once, in canonical order.

    With ``symmetry`` on, pool tuples that differ only by relabelling kinds are
    generated once (non-increasing pool sizes).
    """
    for shape in enumerate_shapes(b, symmetry):
        yield shape.build()


def all_qsets(u: Universe) -> list[Qset]:
    """Every flat quasiset of u, ordered by bit mask over ``u.elements()``."""
    elems = u.elements()
    return [_mask_qset(u, elems, m) for m in range(1 << len(elems))]


def _mask_qset(u, elems, mask) -> Qset:
    return core._from_elements(u, [e for i, e in enumerate(elems) if mask >> i & 1])


def _indices(u: Universe, X: Qset) -> list[int]:
    return [i for i, e in enumerate(u.elements()) if e in X]


def universe_spec(u: Universe) -> dict:
    return {
        "pools": u.pool_sizes(),
        "classical": [_classical_to_json(c) for c in sorted(u.classical, key=lambda c: c.canon())],
    }


def _classical_to_json(c):
    if isinstance(c, MAtom):
        return c.name
    return sorted((_classical_to_json(m) for m in c.members), key=json.dumps)


def _classical_from_json(j):
    if isinstance(j, str):
        return MAtom(j)
    return CSet(frozenset(_classical_from_json(m) for m in j))


def universe_from_spec(spec: dict) -> Universe:
    return make_universe(list(spec["pools"].items()), [_classical_from_json(c) for c in spec["classical"]])


def qset_from_indices(u: Universe, indices) -> Qset:
    elems = u.elements()
    return core._from_elements(u, [elems[i] for i in indices])


# -- checking -------------------------------------------------------------


class _Ctx:
    """Per-universe state: the quasisets and memoised derived values."""

    def __init__(self, u: Universe, b: Bounds, qcard: Callable, union: Callable):
        self.u = u
        self.b = b
        self.elems = u.elements()
        self.qsets = all_qsets(u)
        self._qcard = qcard
        self.union = union
        self._memo: dict[Qset, object] = {}
        self._finite: dict[Qset, bool] = {}

    def qcard(self, X: Qset):
        r = self._memo.get(X)
        if r is None:
            r = self._memo[X] = self._qcard(X)
        return r

    def finite(self, X: Qset) -> bool:
        r = self._finite.get(X)
        if r is None:
            r = self._finite[X] = counting.is_finite(X)
        return r

    def cx(self, details: str, **qsets: Qset) -> dict:
        return {
            "universe": universe_spec(self.u),
            "qsets": {k: {"canon": q.canon(), "indices": _indices(self.u, q)} for k, q in qsets.items()},
            "details": details,
        }


def greedy_chain(X: Qset) -> counting.Chain:
    """One descendant chain of X, always taking the first direct descendant."""
    members = [X]
    while not members[-1].is_empty():
        members.append(counting.direct_descendants(members[-1])[0])
    return counting.Chain(tuple(members))


def _check_h1(ctx: _Ctx, v: Verdict):
    for X in ctx.qsets:
        if X.is_empty():
            continue
        v.instances_checked += 1
        chain = greedy_chain(X)
        if not counting.is_chain(X, chain):
            return ctx.cx("no descendant chain found", X=X)


def _check_h2(ctx: _Ctx, v: Verdict):
    canon = {X: X.canon() for X in ctx.qsets}
    for X in ctx.qsets:
        for Y in ctx.qsets:
            v.instances_checked += 1
            if canon[X] != canon[Y] or not (ctx.finite(X) and ctx.finite(Y)):
                continue
            if (core.subqset(X, Y) or core.subqset(Y, X)) and not core.ext_eq(X, Y):
                return ctx.cx("indistinguishable, nested, yet not extensionally equal", X=X, Y=Y)


def _check_nonzero(ctx: _Ctx, v: Verdict):
    for X in ctx.qsets:
        if X.is_empty():
            continue
        v.instances_checked += 1
        r = ctx.qcard(X)
        if not isinstance(r, Defined) or r.n == 0:
            return ctx.cx(f"qcard(X) = {r}", X=X)


def _check_subcard(ctx: _Ctx, v: Verdict):
    for X in ctx.qsets:
        r = ctx.qcard(X)
        if not isinstance(r, Defined):
            v.instances_checked += 1
            return ctx.cx(f"qcard(X) = {r}", X=X)
        F = counting.build_qfunction(greedy_chain(X))
        for beta in range(r.n + 1):
            v.instances_checked += 1
            Y = F(beta) if beta <= F.top_index else None
            if Y is None or not core.subqset(Y, X) or ctx.qcard(Y) != Defined(beta):
                return ctx.cx(f"no subquasiset with qcard {beta}", X=X)


def _check_mono(ctx: _Ctx, v: Verdict):
    # Y is generated by adding a nonempty part of X's complement to X.
    full = (1 << len(ctx.elems)) - 1
    for xm, X in enumerate(ctx.qsets):
        comp = full & ~xm
        sub = comp
        while sub:
            Y = ctx.qsets[xm | sub]
            sub = (sub - 1) & comp
            v.instances_checked += 1
            if not ctx.finite(X):
                continue
            qx, qy = ctx.qcard(X), ctx.qcard(Y)
            if not (isinstance(qx, Defined) and isinstance(qy, Defined) and qx.n < qy.n):
                return ctx.cx(f"qcard(X) = {qx}, qcard(Y) = {qy}", X=X, Y=Y)


def _check_add(ctx: _Ctx, v: Verdict):
    n = len(ctx.elems)
    for assign in itertools.product((0, 1, 2), repeat=n):
        xm = sum(1 << i for i, a in enumerate(assign) if a == 1)
        ym = sum(1 << i for i, a in enumerate(assign) if a == 2)
        X, Y = ctx.qsets[xm], ctx.qsets[ym]
        v.instances_checked += 1
        if not core.intersection(X, Y).is_empty():
            return ctx.cx("generated pair is not disjoint", X=X, Y=Y)
        Z = ctx.union(X, Y)
        qx, qy, qz = ctx.qcard(X), ctx.qcard(Y), ctx.qcard(Z)
        if not all(isinstance(q, Defined) for q in (qx, qy, qz)) or qz.n != qx.n + qy.n:
            return ctx.cx(f"qcard(X ∪ Y) = {qz}, qcard(X) = {qx}, qcard(Y) = {qy}", X=X, Y=Y, Z=Z)


def _check_pow(ctx: _Ctx, v: Verdict):
    skipped = 0
    for X in ctx.qsets:
        if oracle_card(X) > ctx.b.powerset_card_cap:
            skipped += 1
            continue
        v.instances_checked += 1
        qx = ctx.qcard(X)
        try:
            qp = ctx.qcard(core.powerset(X, bound=ctx.b.powerset_card_cap))
        except BoundExceeded as exc:
            v.notes.append(f"BoundExceeded: {exc}")
            continue
        if not (isinstance(qx, Defined) and qp == Defined(2 ** qx.n)):
            return ctx.cx(f"qcard(℘(X)) = {qp}, qcard(X) = {qx}", X=X)
    if skipped:
        v.notes.append(f"{skipped} quasisets above powerset cap {ctx.b.powerset_card_cap} not checked")


def _check_sing1(ctx: _Ctx, v: Verdict):
    for X in ctx.qsets:
        for x in X.elements():
            v.instances_checked += 1
            s = counting.singleton(X, x)
            r = ctx.qcard(s)
            if r != Defined(1):
                return ctx.cx(f"qcard(⟨z⟩) = {r}", X=X, S=s)


def _check_gen(ctx: _Ctx, v: Verdict):
    u = ctx.u
    for kind in u.kinds:
        remaining = u.pool(kind.id)
        Z = core.empty(u)
        j = 0
        v.instances_checked += 1
        if ctx.qcard(Z) != Defined(0):
            return ctx.cx("qcard(∅) is not 0", Z=Z)
        while not remaining.is_empty():
            s = counting.singleton(remaining, remaining.pick(kind.id))
            if not core.intersection(Z, s).is_empty():
                return ctx.cx("extracted singleton overlaps the accumulated quasiset", Z=Z, S=s)
            Z = ctx.union(Z, s)
            remaining = core.difference(remaining, s)
            j += 1
            v.instances_checked += 1
            if not Z.is_pure() or ctx.qcard(Z) != Defined(j):
                return ctx.cx(f"generated quasiset has qcard {ctx.qcard(Z)}, wanted {j}", Z=Z)


_CHECKS = {
    "H1": _check_h1,
    "H2": _check_h2,
    "NONZERO": _check_nonzero,
    "SUBCARD": _check_subcard,
    "MONO": _check_mono,
    "ADD": _check_add,
    "POW": _check_pow,
    "SING1": _check_sing1,
    "GEN": _check_gen,
}


def _run(ids, u: Universe, b: Bounds, qcard, union) -> list[Verdict]:
    ctx = _Ctx(u, b, qcard, union)
    out = []
    for tid in ids:
        if tid not in _CHECKS:
            raise UnknownTheorem(tid)
        v = Verdict(tid, universes_checked=1)
        cx = _CHECKS[tid](ctx, v)
        if cx is not None:
            v.holds = False
            v.counterexample = cx
        out.append(v)
    return out


def check_axioms(u: Universe, b: Bounds = DESK_BOUNDS) -> list[Verdict]:
    return _run(AXIOMS, u, b, counting.qcard, core.union)


def check_theorem(theorem_id: str, u: Universe, b: Bounds = DESK_BOUNDS, *,
                  qcard: Callable = counting.qcard, union: Callable = core.union) -> Verdict:
    """Verify one theorem over every quasiset (or pair) of ``u``.

    ``qcard`` and ``union`` are injectable so the checker itself can be
    mutation-tested.
    """
    if theorem_id not in THEOREMS:
        raise UnknownTheorem(theorem_id)
    return _run((theorem_id,), u, b, qcard, union)[0]


def _check_shape(args) -> list[Verdict]:
    shape, b, ids = args
    return _run(ids, shape.build(), b, counting.qcard, core.union)


def run_suite(b: Bounds = DESK_BOUNDS, *, symmetry: bool = True, theorems=ALL_IDS, jobs: int = 1,
              qcard: Callable = counting.qcard, union: Callable = core.union) -> Report:
    """Run the axioms and theorems over every universe within ``b``.

    Results are merged in canonical universe order, so the report does not
    depend on ``jobs``.
    """
    for tid in theorems:
        if tid not in _CHECKS:
            raise UnknownTheorem(tid)
    start = time.perf_counter()
    shapes = enumerate_shapes(b, symmetry)
    if jobs > 1:
        with ProcessPoolExecutor(jobs) as pool:
            per_shape = list(pool.map(_check_shape, [(s, b, tuple(theorems)) for s in shapes]))
    else:
        per_shape = [_run(theorems, s.build(), b, qcard, union) for s in shapes]
    merged = {tid: Verdict(tid) for tid in theorems}
    for verdicts in per_shape:
        for v in verdicts:
            m = merged[v.theorem_id]
            m.universes_checked += v.universes_checked
            m.instances_checked += v.instances_checked
            m.notes.extend(v.notes)
            if not v.holds and m.holds:
                m.holds = False
                m.counterexample = v.counterexample
    report = Report(b, [merged[t] for t in theorems], symmetry=symmetry)
    report.elapsed_ms = (time.perf_counter() - start) * 1000
    return report


# -- replay and coverage --------------------------------------------------


def replay(theorem_id: str, counterexample: dict) -> bool:
    """Re-check a counterexample through :mod:`qsetk.counting` directly.

    Returns True when the violation is reproduced.
    """
    u = universe_from_spec(counterexample["universe"])
    qs = {k: qset_from_indices(u, v["indices"]) for k, v in counterexample["qsets"].items()}

    def n(X):
        r = counting.qcard(X)
        return r.n if isinstance(r, Defined) else None

    if theorem_id == "H1":
        X = qs["X"]
        return not counting.is_chain(X, greedy_chain(X))
    if theorem_id == "H2":
        X, Y = qs["X"], qs["Y"]
        nested = core.subqset(X, Y) or core.subqset(Y, X)
        return core.indist(X, Y) and bool(nested) and not core.ext_eq(X, Y)
    if theorem_id == "NONZERO":
        return n(qs["X"]) in (None, 0)
    if theorem_id == "SUBCARD":
        X = qs["X"]
        if n(X) is None:
            return True
        found = {n(Y) for Y in all_qsets(u) if core.subqset(Y, X)}
        return not set(range(n(X) + 1)) <= found
    if theorem_id == "MONO":
        nx, ny = n(qs["X"]), n(qs["Y"])
        return nx is None or ny is None or nx >= ny
    if theorem_id == "ADD":
        nx, ny, nz = n(qs["X"]), n(qs["Y"]), n(qs["Z"])
        return None in (nx, ny, nz) or nz != nx + ny
    if theorem_id == "POW":
        X = qs["X"]
        return n(X) is None or n(core.powerset(X)) != 2 ** n(X)
    if theorem_id == "SING1":
        return n(qs["S"]) != 1
    if theorem_id == "GEN":
        Z = qs["Z"]
        return not Z.is_pure() or n(Z) is None
    raise UnknownTheorem(theorem_id)


def expected_instances(theorem_id: str, u: Universe, b: Bounds) -> int:
    """Closed-form instance count for one universe, for coverage accounting."""
    t = len(u.elements())
    if theorem_id in ("H1", "NONZERO"):
        return 2 ** t - 1
    if theorem_id == "H2":
        return 4 ** t
    if theorem_id == "SUBCARD":
        return 2 ** t + t * 2 ** (t - 1) if t else 1
    if theorem_id == "MONO":
        return 3 ** t - 2 ** t
    if theorem_id == "ADD":
        return 3 ** t
    if theorem_id == "POW":
        return sum(comb(t, k) for k in range(min(t, b.powerset_card_cap) + 1))
    if theorem_id == "SING1":
        return t * 2 ** (t - 1) if t else 0
    if theorem_id == "GEN":
        return sum(u.pool_sizes().values()) + len(u.kinds)
    raise UnknownTheorem(theorem_id)
