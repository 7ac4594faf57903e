"""Universes, quasisets and the relations between them.

m-atoms are carried by :class:`Token` objects. Tokens have a hidden serial so
that a computer can tell them apart, but nothing on the public surface lets a
caller ask whether two tokens are the same one: ``==`` between two tokens
raises :class:`IllFormedFormula`. The only relation defined on m-atoms is
:func:`indist`, which compares kinds.

Quasisets (:class:`Qset`) are immutable. All algebra returns fresh values.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from enum import Enum
from typing import Iterable, Mapping, Union

from qsetk.errors import (
    BoundExceeded,
    DepthExceeded,
    DuplicateKind,
    IllFormedFormula,
    KindViolation,
    PoolExhausted,
    UniverseMismatch,
    UnknownKind,
)

DEFAULT_DEPTH_BOUND = 2
DEFAULT_POWERSET_BOUND = 12


@dataclass(frozen=True)
class Kind:
    id: str
    description: str = ""


class Token:
    """An m-atom. Only its kind is observable."""

    __slots__ = ("kind", "_serial")

    def __init__(self, kind: Kind, serial: int):
        self.kind = kind
        self._serial = serial

    def __eq__(self, other):
        if isinstance(other, Token):
            raise IllFormedFormula("x = y is not a well-formed formula for m-atoms")
        return NotImplemented

    __hash__ = object.__hash__

    def __repr__(self):
        return f"<m-atom {self.kind.id}>"


@dataclass(frozen=True)
class MAtom:
    """A classical urelement with ordinary identity."""

    name: str

    def depth(self) -> int:
        return 0

    def canon(self) -> str:
        return self.name


@dataclass(frozen=True)
class CSet:
    """A hereditarily finite classical set."""

    members: frozenset = frozenset()

    @classmethod
    def of(cls, *members: "ClassicalElem") -> "CSet":
        return cls(frozenset(members))

    def depth(self) -> int:
        return 1 + max((m.depth() for m in self.members), default=0)

    def canon(self) -> str:
        return "{" + ",".join(sorted(m.canon() for m in self.members)) + "}"


ClassicalElem = Union[MAtom, CSet]
Element = Union[Token, MAtom, CSet, "Qset"]


class Inclusion(Enum):
    NOT_SUB = "not-sub"
    SUB = "sub"
    PROPER_SUB = "proper-sub"

    def __bool__(self):
        return self is not Inclusion.NOT_SUB


class Universe:
    """Registry of kinds with their token pools, plus classical elements.

    Treat as immutable. :meth:`extend` returns a new universe sharing every
    existing token, so quasisets built over the old one stay valid.
    """

    _lineages = itertools.count()

    def __init__(self, kinds, pools, classical, depth_bound, lineage, generation, next_serial):
        self._kinds: dict[str, Kind] = kinds
        self._pools: dict[str, tuple[Token, ...]] = pools
        self.classical: tuple[ClassicalElem, ...] = classical
        self.depth_bound = depth_bound
        self._lineage = lineage
        self._generation = generation
        self._next_serial = next_serial
        self._tokens = frozenset(t for pool in pools.values() for t in pool)
        self._classical_set = frozenset(classical)

    @property
    def kinds(self) -> tuple[Kind, ...]:
        return tuple(self._kinds[k] for k in sorted(self._kinds))

    def kind(self, label: str) -> Kind:
        try:
            return self._kinds[label]
        except KeyError:
            raise UnknownKind(f"unknown kind {label!r}") from None

    def has_kind(self, label: str) -> bool:
        return label in self._kinds

    def pool_size(self, label: str) -> int:
        self.kind(label)
        return len(self._pools[label])

    def pool_sizes(self) -> dict[str, int]:
        return {k: len(self._pools[k]) for k in sorted(self._kinds)}

    def pool(self, label: str) -> "Qset":
        """The quasiset of every m-atom of one kind."""
        self.kind(label)
        return Qset(self, self._pools[label])

    def elements(self) -> tuple:
        """All m-atoms and classical elements in a fixed canonical order."""
        toks = tuple(t for k in sorted(self._kinds) for t in self._pools[k])
        return toks + tuple(sorted(self.classical, key=lambda c: c.canon()))

    def owns(self, token: Token) -> bool:
        return token in self._tokens

    def registers(self, elem: ClassicalElem) -> bool:
        return elem in self._classical_set

    def compatible(self, other: "Universe") -> bool:
        return self._lineage == other._lineage

    def extend(self, kind_specs=(), classical_elems=()) -> "Universe":
        kinds = dict(self._kinds)
        pools = dict(self._pools)
        serial = self._next_serial
        for spec in kind_specs:
            label, size, *rest = spec
            if label in kinds:
                raise DuplicateKind(f"kind {label!r} already declared")
            if size < 0:
                raise ValueError(f"pool size must be >= 0, got {size}")
            kind = Kind(label, rest[0] if rest else "")
            kinds[label] = kind
            pools[label] = tuple(Token(kind, serial + i) for i in range(size))
            serial += size
        classical = list(self.classical)
        for elem in classical_elems:
            if elem.depth() > self.depth_bound:
                raise DepthExceeded(f"{elem.canon()} nests deeper than {self.depth_bound}")
            if elem not in classical:
                classical.append(elem)
        return Universe(kinds, pools, tuple(classical), self.depth_bound,
                        self._lineage, self._generation + 1, serial)

    def __repr__(self):
        pools = ", ".join(f"{k}:{n}" for k, n in self.pool_sizes().items())
        cls = ", ".join(sorted(c.canon() for c in self.classical))
        return f"Universe(pools=[{pools}], classical=[{cls}])"


def make_universe(kind_specs=(), classical_elems=(), depth_bound: int = DEFAULT_DEPTH_BOUND) -> Universe:
    """Build a universe from ``(label, pool_size)`` pairs and classical elements."""
    empty = Universe({}, {}, (), depth_bound, next(Universe._lineages), 0, 0)
    return empty.extend(kind_specs, classical_elems)


def _merge(a: Universe, b: Universe) -> Universe:
    if not a.compatible(b):
        raise UniverseMismatch("quasisets live in different universes")
    return a if a._generation >= b._generation else b


def _elem_key(e) -> tuple:
    # Internal total order; never exposed.
    if isinstance(e, Token):
        return (0, e.kind.id, e._serial)
    if isinstance(e, Qset):
        return (2, e._key())
    return (1, e.canon())


class Qset:
    """A finite quasiset: m-atoms, classical elements and nested quasisets."""

    __slots__ = ("universe", "_m", "_c", "_nested", "_hash", "_sortkey")

    def __init__(self, universe: Universe, m: Iterable[Token] = (), c: Iterable[ClassicalElem] = (),
                 nested: Iterable["Qset"] = ()):
        self.universe = universe
        self._m = frozenset(m)
        self._c = frozenset(c)
        self._nested = frozenset(nested)
        for t in self._m:
            if not universe.owns(t):
                raise UniverseMismatch(f"{t!r} is not in this universe")
        for e in self._c:
            if not universe.registers(e):
                raise UnknownKind(f"classical element {e.canon()} is not registered")
        for q in self._nested:
            if not universe.compatible(q.universe):
                raise UniverseMismatch("nested quasiset from a different universe")
        self._hash = None
        self._sortkey = None

    def _with(self, universe, m, c, nested) -> "Qset":
        q = object.__new__(Qset)
        q.universe, q._m, q._c, q._nested = universe, m, c, nested
        q._hash = None
        q._sortkey = None
        return q

    # -- observation -----------------------------------------------------

    def is_empty(self) -> bool:
        return not (self._m or self._c or self._nested)

    def is_pure(self) -> bool:
        return not (self._c or self._nested)

    def profile(self) -> dict[str, int]:
        counts = Counter(t.kind.id for t in self._m)
        return {k: counts[k] for k in sorted(counts)}

    def matoms(self) -> tuple[Token, ...]:
        return tuple(sorted(self._m, key=_elem_key))

    def classical(self) -> tuple[ClassicalElem, ...]:
        return tuple(sorted(self._c, key=_elem_key))

    def nested(self) -> tuple["Qset", ...]:
        return tuple(sorted(self._nested, key=_elem_key))

    def elements(self) -> tuple:
        return self.matoms() + self.classical() + self.nested()

    def pick(self, kind: str) -> Token:
        """Some m-atom of ``kind`` in this quasiset. Which one is unspecified."""
        for t in self.matoms():
            if t.kind.id == kind:
                return t
        raise UnknownKind(f"no m-atom of kind {kind!r} in {self}")

    def __contains__(self, x) -> bool:
        if isinstance(x, Token):
            return x in self._m
        if isinstance(x, Qset):
            return x in self._nested
        return x in self._c

    def canon(self) -> str:
        if self.is_empty():
            return "∅"
        parts = [
            ", ".join(f"{k}×{n}" for k, n in self.profile().items()),
            ", ".join(sorted(e.canon() for e in self._c)),
            ", ".join(sorted(q.canon() for q in self._nested)),
        ]
        while parts and not parts[-1]:
            parts.pop()
        return "⟨" + "; ".join(parts) + "⟩"

    def _key(self) -> tuple:
        if self._sortkey is None:
            self._sortkey = (self.canon(), tuple(_elem_key(e) for e in self.elements()))
        return self._sortkey

    # -- equality is =_E -------------------------------------------------

    def __eq__(self, other):
        if isinstance(other, Qset):
            return self._m == other._m and self._c == other._c and self._nested == other._nested
        return NotImplemented

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self._m, self._c, self._nested))
        return self._hash

    def __or__(self, other):
        return union(self, other)

    def __and__(self, other):
        return intersection(self, other)

    def __sub__(self, other):
        return difference(self, other)

    def __str__(self):
        return self.canon()

    def __repr__(self):
        return f"Qset({self.canon()})"


def empty(u: Universe) -> Qset:
    return Qset(u)


def make_qset(u: Universe, matoms: Mapping[str, int] | None = None, classical: Iterable[ClassicalElem] = (),
              nested: Iterable[Qset] = (), rng=None) -> Qset:
    """Draw ``matoms[kind]`` tokens of each kind from the universe's pools.

    Without ``rng`` the draw is deterministic; with a ``random.Random`` it is a
    uniform sample. Either way the drawn tokens are not observable.
    """
    toks = []
    for label, mult in (matoms or {}).items():
        u.kind(label)
        pool = u._pools[label]
        if mult < 0:
            raise ValueError(f"negative multiplicity for {label!r}")
        if mult > len(pool):
            raise PoolExhausted(f"asked for {mult} of {label!r}, pool has {len(pool)}")
        toks.extend(rng.sample(pool, mult) if rng is not None else pool[:mult])
    return Qset(u, toks, classical, nested)


def _qsets(X: Qset, Y: Qset) -> Universe:
    if not isinstance(X, Qset) or not isinstance(Y, Qset):
        raise TypeError("expected quasisets")
    return _merge(X.universe, Y.universe)


def union(X: Qset, Y: Qset) -> Qset:
    u = _qsets(X, Y)
    return X._with(u, X._m | Y._m, X._c | Y._c, X._nested | Y._nested)


def intersection(X: Qset, Y: Qset) -> Qset:
    u = _qsets(X, Y)
    return X._with(u, X._m & Y._m, X._c & Y._c, X._nested & Y._nested)


def difference(X: Qset, Y: Qset) -> Qset:
    u = _qsets(X, Y)
    return X._with(u, X._m - Y._m, X._c - Y._c, X._nested - Y._nested)


def subqset(X: Qset, Y: Qset) -> Inclusion:
    _qsets(X, Y)
    if X._m <= Y._m and X._c <= Y._c and X._nested <= Y._nested:
        return Inclusion.SUB if X == Y else Inclusion.PROPER_SUB
    return Inclusion.NOT_SUB


def ext_eq(a, b) -> bool:
    """Extensional equality. Undefined (raises) when either side is an m-atom."""
    if isinstance(a, Token) or isinstance(b, Token):
        raise IllFormedFormula("extensional equality is not defined for m-atoms")
    if isinstance(a, Qset) and isinstance(b, Qset):
        return a == b
    if isinstance(a, Qset) or isinstance(b, Qset):
        q, s = (a, b) if isinstance(a, Qset) else (b, a)
        # a quasiset with only classical content is a classical set
        return isinstance(s, CSet) and not q._m and not q._nested and q._c == s.members
    return a == b


def indist(a, b) -> bool:
    """Indistinguishability. Quasisets are indistinguishable when they have the
    same kind profile, the same classical part, and pairwise indistinguishable
    nested parts (which is exactly equality of canonical forms)."""
    if isinstance(a, Token) or isinstance(b, Token):
        return isinstance(a, Token) and isinstance(b, Token) and a.kind == b.kind
    if isinstance(a, Qset) and isinstance(b, Qset):
        _qsets(a, b)
        return a.canon() == b.canon()
    return ext_eq(a, b)


def powerset(X: Qset, bound: int = DEFAULT_POWERSET_BOUND) -> Qset:
    """All token-level subquasisets of X, as the nested content of a new quasiset."""
    elems = X.elements()
    if len(elems) > bound:
        raise BoundExceeded(f"powerset of {len(elems)} elements exceeds bound {bound}")
    subsets = []
    for r in range(len(elems) + 1):
        for combo in itertools.combinations(elems, r):
            subsets.append(_from_elements(X.universe, combo))
    return Qset(X.universe, nested=subsets)


def _from_elements(u: Universe, elems) -> Qset:
    m, c, n = [], [], []
    for e in elems:
        (m if isinstance(e, Token) else n if isinstance(e, Qset) else c).append(e)
    return Qset(u, m, c, n)


def permute(X: Qset, pi: Mapping[Token, Token]) -> Qset:
    """Rename X's m-atoms by a kind-preserving permutation of the pools."""
    if len(set(pi.values())) != len(pi):
        raise KindViolation("permutation is not injective")
    for a, b in pi.items():
        if a.kind != b.kind:
            raise KindViolation(f"{a!r} mapped to {b!r}")
        if not X.universe.owns(b):
            raise KindViolation("permutation leaves the universe")
    if set(pi.values()) != set(pi.keys()):
        raise KindViolation("permutation does not map the pools onto themselves")
    return _permute(X, pi)


def _permute(X: Qset, pi) -> Qset:
    return X._with(
        X.universe,
        frozenset(pi.get(t, t) for t in X._m),
        X._c,
        frozenset(_permute(q, pi) for q in X._nested),
    )
