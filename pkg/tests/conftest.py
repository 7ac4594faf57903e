import itertools
import random

import pytest
from hypothesis import strategies as st

from qsetk import CSet, MAtom, make_qset, make_universe
from qsetk.checker import DESK_BOUNDS, all_qsets, enumerate_shapes
from qsetk.dsl import nodes as N
from qsetk.oracle import qset_from_tokens, tokens


@pytest.fixture
def u_ef():
    return make_universe([("e", 3), ("f", 2)], [MAtom("a"), MAtom("b"), CSet.of(MAtom("c"))])


@pytest.fixture
def rng():
    return random.Random(20261016)


def brute_chains(X):
    """Chains of X as removal orders, by permutation brute force.

    Independent of qsetk.counting: each ordering of X's elements removes one
    element per step; chains are the distinct sequences of remaining sets.
    """
    elems = list(X.elements())
    seen = set()
    for order in itertools.permutations(range(len(elems))):
        remaining = set(range(len(elems)))
        seq = [frozenset(remaining)]
        for i in order:
            remaining.discard(i)
            seq.append(frozenset(remaining))
        seen.add(tuple(seq))
    return seen


DESK_SHAPES = enumerate_shapes(DESK_BOUNDS)


@st.composite
def universe_and_qset(draw, shapes=DESK_SHAPES):
    """A desk-bounds universe together with one of its flat quasisets."""
    shape = draw(st.sampled_from(shapes))
    u = shape.build()
    qs = all_qsets(u)
    return u, qs[draw(st.integers(0, len(qs) - 1))]


# -- grammar-driven AST generator ------------------------------------------

_IDENT_HEAD = "abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_"
_IDENT_TAIL = _IDENT_HEAD + "0123456789"


def random_ident(rng):
    while True:
        s = rng.choice(_IDENT_HEAD) + "".join(rng.choice(_IDENT_TAIL) for _ in range(rng.randint(0, 5)))
        if s not in N.KEYWORDS:
            return s


def random_flag_name(rng):
    return rng.choice("abcdefghijklmnopqrstuvwxyz") + "".join(
        rng.choice("abcdefghijklmnopqrstuvwxyz0123456789-") for _ in range(rng.randint(0, 8))
    )


def random_expr(rng, depth=4):
    if depth == 0 or rng.random() < 0.3:
        if rng.random() < 0.5:
            return N.Ident(random_ident(rng))
        elems = tuple(
            N.Elem(random_ident(rng), rng.choice([None, rng.randint(0, 50)]))
            for _ in range(rng.randint(0, 4))
        )
        return N.Literal(elems)
    pick = rng.randrange(5)
    if pick == 0:
        return N.Union_(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if pick == 1:
        return N.Intersect(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if pick == 2:
        return N.Diff(random_expr(rng, depth - 1), random_expr(rng, depth - 1))
    if pick == 3:
        return N.Pow(random_expr(rng, depth - 1))
    return N.SingletonOf(random_expr(rng, depth - 1), random_ident(rng))


def random_stmt(rng):
    pick = rng.randrange(5)
    if pick == 0:
        return N.KindDecl(random_ident(rng), rng.randint(0, 99))
    if pick == 1:
        return N.MAtomDecl(random_ident(rng))
    if pick == 2:
        return N.Let(random_ident(rng), random_expr(rng))
    if pick == 3:
        return N.Query(rng.choice(N.QUERY_OPS), random_expr(rng))
    flags = tuple((random_flag_name(rng), rng.choice([None, rng.randint(0, 9)])) for _ in range(rng.randint(0, 3)))
    return N.Check(random_ident(rng), flags)


def random_program(rng):
    return tuple(random_stmt(rng) for _ in range(rng.randint(1, 4)))


__all__ = ["brute_chains", "random_program", "universe_and_qset", "make_qset", "qset_from_tokens", "tokens"]


# -- acceptance summary --------------------------------------------------------

ACCEPTANCE: dict[int, tuple[str, bool, str]] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE):
        title, ok, detail = ACCEPTANCE[n]
        terminalreporter.write_line(f"[{'PASS' if ok else 'FAIL'}] {n}. {title}: {detail}")
