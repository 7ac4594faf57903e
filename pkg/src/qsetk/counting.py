"""Derived quasicardinality.

Counting here never asks a quasiset how many elements it has. The pipeline is
relative singleton -> direct descendant -> descendant chain -> indexing
quasifunction -> quasicardinal, and ``qcard(X)`` is the common top index of
every chain of X, or ``Undefined`` if the chains disagree.
"""

from __future__ import annotations

import itertools
import json
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from qsetk.core import Qset, Token, _from_elements, difference, intersection, subqset
from qsetk.errors import CapExceeded, InvalidChain, NonTerminatingChain, NotMember

DEFAULT_CHAIN_CAP = 10_000
# The lattice walk keeps one flag per subquasiset of X.
WALK_LIMIT = 22
_PY_WALK_MAX = 10


@dataclass(frozen=True)
class Chain:
    """A descendant chain, listed from X down to the empty quasiset."""

    members: tuple[Qset, ...]

    @property
    def top(self) -> Qset:
        return self.members[0]

    def canon(self) -> str:
        return " ⊃ ".join(m.canon() for m in self.members)

    def to_json(self) -> str:
        return json.dumps([m.canon() for m in self.members], ensure_ascii=False)

    def __iter__(self):
        return iter(self.members)


@dataclass(frozen=True)
class QFunction:
    """Indexing of a chain by 0..n; ``values[j]`` is F(j)."""

    values: tuple[Qset, ...]

    @property
    def top_index(self) -> int:
        return len(self.values) - 1

    def __call__(self, j: int) -> Qset:
        return self.values[j]

    def pairs(self) -> list[tuple[int, Qset]]:
        return list(enumerate(self.values))


@dataclass(frozen=True)
class Defined:
    n: int


@dataclass(frozen=True)
class Undefined:
    reason: str


QcardResult = Union[Defined, Undefined]


def _is(e, x) -> bool:
    # m-atoms admit no identity formula, so compare carriers by reference
    if isinstance(e, Token) or isinstance(x, Token):
        return e is x
    return type(e) is type(x) and e == x


def _require_member(X: Qset, x) -> None:
    if X.is_empty() or x not in X:
        raise NotMember(f"{x!r} is not an element of {X}")


def family_Ax(X: Qset, x) -> list[Qset]:
    """Every subquasiset of X that contains x."""
    _require_member(X, x)
    rest = [e for e in X.elements() if not _is(e, x)]
    return [
        _from_elements(X.universe, (x,) + combo)
        for r in range(len(rest) + 1)
        for combo in itertools.combinations(rest, r)
    ]


def singleton(X: Qset, x) -> Qset:
    """The singleton of x relative to X: the intersection of ``family_Ax(X, x)``.

    The family is closed under intersection and its co-atoms (X without one
    other element) already lie in it, so folding over X and its co-atoms gives
    the same intersection without building all subsets.
    """
    _require_member(X, x)
    elems = X.elements()
    out = X
    for y in elems:
        if not _is(y, x):
            out = intersection(out, _from_elements(X.universe, [e for e in elems if not _is(e, y)]))
    return out


def direct_descendants(X: Qset) -> list[Qset]:
    """Every X minus a relative singleton, deduplicated under extensional equality."""
    seen = {}
    for z in X.elements():
        d = difference(X, singleton(X, z))
        seen.setdefault(d, d)
    return list(seen)


def is_direct_descendant(Z: Qset, Y: Qset) -> bool:
    return any(Y == d for d in direct_descendants(Z))


def descendant_chains(X: Qset, cap: int = DEFAULT_CHAIN_CAP) -> list[Chain]:
    """All token-level descendant chains of X, in canonical order.

    The empty quasiset gets the degenerate family ``[(∅,)]``.
    """
    out: list[Chain] = []

    def walk(prefix):
        z = prefix[-1]
        if z.is_empty():
            out.append(Chain(tuple(prefix)))
            if len(out) > cap:
                raise CapExceeded(f"more than {cap} chains", partial=_sorted_chains(out[:cap]))
            return
        for d in direct_descendants(z):
            walk(prefix + [d])

    walk([X])
    return _sorted_chains(out)


def _sorted_chains(chains: list[Chain]) -> list[Chain]:
    return sorted(chains, key=lambda c: (c.canon(), tuple(m._key() for m in c.members)))


def chain_classes(chains: Iterable[Chain]) -> list[tuple[Chain, int]]:
    """Group chains whose members are pairwise indistinguishable."""
    groups: dict[tuple[str, ...], list[Chain]] = {}
    for c in chains:
        groups.setdefault(tuple(m.canon() for m in c.members), []).append(c)
    return [(cs[0], len(cs)) for _, cs in sorted(groups.items())]


def is_chain(X: Qset, gamma: Iterable[Qset]) -> bool:
    members = list(dict.fromkeys(gamma))
    if not any(X == z for z in members):
        return False
    if not all(subqset(z, X) for z in members):
        return False
    for z, y in itertools.combinations(members, 2):
        if not (subqset(y, z) or subqset(z, y)):
            return False
    for z in members:
        if z.is_empty():
            continue
        dd = direct_descendants(z)
        if sum(1 for y in members if any(y == d for d in dd)) != 1:
            return False
    return True


def build_qfunction(gamma: Chain | Iterable[Qset]) -> QFunction:
    """Index a chain from the empty quasiset (0) up to its top (n).

    Raises :class:`InvalidChain` if some member has no unique direct
    descendant in the chain or is left unindexed.
    """
    members = list(gamma.members if isinstance(gamma, Chain) else dict.fromkeys(gamma))
    if not members:
        raise InvalidChain("empty family")
    tops = [z for z in members if all(subqset(y, z) for y in members)]
    if len(tops) != 1:
        raise InvalidChain("family has no greatest member")
    seq = [tops[0]]
    while not seq[-1].is_empty():
        if len(seq) > len(members):
            raise NonTerminatingChain("descent does not reach the empty quasiset")
        dd = direct_descendants(seq[-1])
        nxt = [y for y in members if any(y == d for d in dd)]
        if len(nxt) != 1:
            raise InvalidChain(f"{seq[-1]} has {len(nxt)} direct descendants in the chain")
        seq.append(nxt[0])
    if len(set(seq)) != len(set(members)):
        raise InvalidChain("chain has members the descent never reaches")
    return QFunction(tuple(reversed(seq)))


def chain_lengths(X: Qset, limit: int = WALK_LIMIT) -> frozenset[int]:
    """Number of descent steps from X to the empty quasiset, over every chain.

    Instead of listing chains one by one this walks the descent lattice layer
    by layer: layer k holds the subquasisets reachable from X by k direct
    descents, and a chain of length k exists iff ∅ is in layer k. Subquasisets
    of X are bit masks over X's elements. The relative singleton of x is the
    same in X and in every Z ⊆ X containing x, so it is computed once, in X.
    """
    elems = X.elements()
    if len(elems) > limit:
        raise CapExceeded(f"descent lattice of {len(elems)} elements exceeds limit {limit}")
    sing = []
    for e in elems:
        s = singleton(X, e)
        bits = 0
        for f in s.elements():
            bits |= 1 << _locate(elems, f)
        sing.append(bits)
    full = (1 << len(elems)) - 1
    if len(elems) <= _PY_WALK_MAX:
        return _walk_py(full, sing)
    return _walk_np(full, sing)


def _locate(elems, f) -> int:
    for i, e in enumerate(elems):
        if _is(e, f):
            return i
    raise NotMember(f"{f!r}")


def _walk_py(full: int, sing: list[int]) -> frozenset[int]:
    lengths = set()
    layer = {full}
    step = 0
    while layer:
        if 0 in layer:
            lengths.add(step)
        layer = {z & ~s for z in layer for i, s in enumerate(sing) if z >> i & 1}
        step += 1
        if step > full + 1:
            raise NonTerminatingChain("descent walk did not terminate")
    return frozenset(lengths)


def _walk_np(full: int, sing: list[int]) -> frozenset[int]:
    size = full + 1
    masks = np.arange(size, dtype=np.int64)
    holders = [masks[(masks >> i) & 1 == 1] for i in range(len(sing))]
    layer = np.zeros(size, dtype=bool)
    layer[full] = True
    lengths = set()
    step = 0
    while layer.any():
        if layer[0]:
            lengths.add(step)
        nxt = np.zeros(size, dtype=bool)
        for src, s in zip(holders, sing):
            active = src[layer[src]]
            nxt[active & ~s] = True
        layer = nxt
        step += 1
        if step > size:
            raise NonTerminatingChain("descent walk did not terminate")
    return frozenset(lengths)


def is_finite(X: Qset) -> bool:
    """Fin(X): a single n indexes every chain of X."""
    return len(chain_lengths(X)) == 1


def qcard(X: Qset) -> QcardResult:
    lengths = chain_lengths(X)
    if len(lengths) == 1:
        return Defined(next(iter(lengths)))
    return Undefined(f"chains of X have lengths {sorted(lengths)}")


def qcard_by_chains(X: Qset, cap: int = DEFAULT_CHAIN_CAP) -> QcardResult:
    """qcard by explicit enumeration: build the quasifunction of every chain."""
    tops = {build_qfunction(c).top_index for c in descendant_chains(X, cap)}
    if len(tops) == 1:
        return Defined(tops.pop())
    return Undefined(f"chains of X have lengths {sorted(tops)}")
