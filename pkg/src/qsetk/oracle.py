"""Ground-truth helpers that look at token identity.

Test harnesses and the checker use these. :mod:`qsetk.counting` must never
import this module; ``tests/test_counting.py`` enforces that.
"""

from __future__ import annotations

import random
from typing import Iterable

from qsetk.core import ClassicalElem, Qset, Token, Universe


def oracle_card(X: Qset) -> int:
    return len(X._m) + len(X._c) + len(X._nested)


def serial(t: Token) -> int:
    return t._serial


def same_token(a: Token, b: Token) -> bool:
    return a is b


def tokens(X: Qset) -> list[Token]:
    return sorted(X._m, key=serial)


def token_serials(X: Qset) -> frozenset[int]:
    return frozenset(t._serial for t in X._m)


def qset_from_tokens(u: Universe, toks: Iterable[Token], classical: Iterable[ClassicalElem] = (),
                     nested: Iterable[Qset] = ()) -> Qset:
    return Qset(u, toks, classical, nested)


def random_permutation(u: Universe, rng: random.Random) -> dict[Token, Token]:
    """A uniformly random kind-preserving permutation of every pool."""
    pi = {}
    for kind in u.kinds:
        pool = list(u._pools[kind.id])
        shuffled = pool[:]
        rng.shuffle(shuffled)
        pi.update(zip(pool, shuffled))
    return pi


def transposition(a: Token, b: Token) -> dict[Token, Token]:
    return {a: b, b: a}


def subset_masks(X: Qset) -> list[Qset]:
    """Every token-level subset of X, by brute force over bit masks."""
    elems = sorted(X._m, key=serial) + sorted(X._c, key=lambda c: c.canon()) + list(X._nested)
    out = []
    for mask in range(1 << len(elems)):
        chosen = [e for i, e in enumerate(elems) if mask >> i & 1]
        out.append(Qset(X.universe,
                        [e for e in chosen if isinstance(e, Token)],
                        [e for e in chosen if not isinstance(e, (Token, Qset))],
                        [e for e in chosen if isinstance(e, Qset)]))
    return out
