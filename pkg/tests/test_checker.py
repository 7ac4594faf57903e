import itertools
import json

import pytest

from qsetk import core
from qsetk.checker import (
    ALL_IDS,
    THEOREMS,
    Bounds,
    UniverseShape,
    ZERO_BOUNDS,
    all_qsets,
    check_axioms,
    check_theorem,
    enumerate_shapes,
    enumerate_universes,
    expected_instances,
    replay,
    run_suite,
    universe_from_spec,
    universe_spec,
)
from qsetk.core import make_qset, make_universe
from qsetk.errors import UnknownTheorem
from qsetk.oracle import oracle_card

SMALL = Bounds(max_kinds=2, max_total_matoms=2, max_classical=1, max_nesting=1, powerset_card_cap=3)


def mutant_union(X, Y):
    """Union that loses one m-atom whenever both sides are nonempty."""
    Z = core.union(X, Y)
    if X.is_empty() or Y.is_empty() or not Z.matoms():
        return Z
    return core.difference(Z, core.Qset(Z.universe, Z.matoms()[:1]))


# -- enumeration -------------------------------------------------------------


def test_enumerate_one_kind():
    assert [u.pool_sizes() for u in enumerate_universes(Bounds(1, 2, 0, 0, 0))] == [{"e": 0}, {"e": 1}, {"e": 2}]


def test_enumerate_zero_bounds():
    us = list(enumerate_universes(ZERO_BOUNDS))
    assert len(us) == 1 and us[0].elements() == ()


def test_enumerate_two_kinds_with_and_without_symmetry():
    b = Bounds(2, 2, 0, 0, 0)
    full = [s.pools for s in enumerate_shapes(b, symmetry=False)]
    assert full == [(0, 0), (1, 0), (0, 1), (1, 1), (2, 0), (0, 2)]
    brute = [p for p in itertools.product(range(3), repeat=2) if sum(p) <= 2]
    assert sorted(full) == sorted(brute)
    assert [s.pools for s in enumerate_shapes(b)] == [(0, 0), (1, 0), (1, 1), (2, 0)]


def test_enumeration_is_unique_and_deterministic():
    shapes = enumerate_shapes(Bounds())
    assert len(shapes) == len(set(shapes)) == 9 * 6
    assert shapes == enumerate_shapes(Bounds())


def test_classical_shapes_respect_nesting():
    flat = enumerate_shapes(Bounds(0, 0, 2, 0, 0))
    assert all(s.sets == 0 for s in flat) and len(flat) == 3
    nested = enumerate_shapes(Bounds(0, 0, 2, 1, 0))
    assert len(nested) == 6
    for s in nested:
        assert all(c.depth() <= 1 for c in s.classical())
        assert len(set(s.classical())) == s.atoms + s.sets


def test_universe_spec_round_trip():
    u = UniverseShape((2, 1), 1, 2).build()
    v = universe_from_spec(json.loads(json.dumps(universe_spec(u))))
    assert [getattr(e, "kind", e) for e in u.elements()] == [getattr(e, "kind", e) for e in v.elements()]


# -- axioms ----------------------------------------------------------------------


def test_axioms_on_empty_universe():
    h1, h2 = check_axioms(make_universe())
    assert h1.holds and h2.holds
    assert h1.instances_checked == 0


def test_axioms_on_pool_of_three():
    h1, h2 = check_axioms(make_universe([("e", 3)]))
    assert h1.holds and h1.instances_checked == 2**3 - 1
    assert h2.holds and h2.instances_checked == 4**3


def test_axioms_hold_on_small_bounds():
    for u in enumerate_universes(SMALL):
        assert all(v.holds for v in check_axioms(u))


# -- theorems ---------------------------------------------------------------------


def test_nonzero_on_one_matom():
    v = check_theorem("NONZERO", make_universe([("e", 1)]))
    assert v.holds and v.instances_checked == 1


def test_add_on_disjoint_singletons():
    u = make_universe([("e", 2)])
    v = check_theorem("ADD", u)
    assert v.holds and v.instances_checked == 3**2


def test_pow_on_qcard_one():
    v = check_theorem("POW", make_universe([("e", 1)]), Bounds(powerset_card_cap=1))
    assert v.holds and v.instances_checked == 2


def test_pow_skips_above_cap():
    v = check_theorem("POW", make_universe([("e", 3)]), Bounds(powerset_card_cap=2))
    assert v.holds
    assert v.instances_checked == 1 + 3 + 3
    assert any("not checked" in n for n in v.notes)


def test_unknown_theorem():
    with pytest.raises(UnknownTheorem):
        check_theorem("FOO", make_universe())
    with pytest.raises(UnknownTheorem):
        run_suite(ZERO_BOUNDS, theorems=("FOO",))


@pytest.mark.parametrize("tid", THEOREMS)
def test_each_theorem_holds_on_small_bounds(tid):
    for u in enumerate_universes(SMALL):
        assert check_theorem(tid, u, SMALL).holds


@pytest.mark.parametrize("tid", ALL_IDS)
def test_coverage_matches_closed_form(tid):
    for u in enumerate_universes(SMALL):
        v = check_axioms(u, SMALL)[ALL_IDS.index(tid)] if tid in ("H1", "H2") else check_theorem(tid, u, SMALL)
        assert v.instances_checked == expected_instances(tid, u, SMALL), (tid, u)


def test_closed_forms_against_direct_counts():
    u = UniverseShape((2, 1), 1, 0).build()
    qs = all_qsets(u)
    b = Bounds(powerset_card_cap=2)
    proper = sum(1 for X in qs for Y in qs if core.subqset(X, Y) is core.Inclusion.PROPER_SUB)
    disjoint = sum(1 for X in qs for Y in qs if core.intersection(X, Y).is_empty())
    assert expected_instances("MONO", u, b) == proper
    assert expected_instances("ADD", u, b) == disjoint
    assert expected_instances("POW", u, b) == sum(1 for X in qs if oracle_card(X) <= 2)
    assert expected_instances("SING1", u, b) == sum(oracle_card(X) for X in qs)
    assert expected_instances("SUBCARD", u, b) == sum(oracle_card(X) + 1 for X in qs)


# -- suite ------------------------------------------------------------------------


def test_zero_bounds_suite_passes_vacuously():
    r = run_suite(ZERO_BOUNDS)
    assert r.holds
    assert [v.theorem_id for v in r.verdicts] == list(ALL_IDS)
    assert r.verdict("H1").instances_checked == 0


def test_report_is_deterministic_and_matches_schema():
    a, b = run_suite(SMALL), run_suite(SMALL)
    assert a.to_json(timing=False) == b.to_json(timing=False)
    d = json.loads(a.to_json())
    assert set(d) == {"bounds", "symmetry", "verdicts", "elapsed_ms"}
    v = d["verdicts"][0]
    assert {"id", "holds", "universes_checked", "instances_checked", "counterexample"} <= set(v)
    assert v["counterexample"] is None


def test_parallel_report_equals_serial():
    serial = run_suite(SMALL)
    parallel = run_suite(SMALL, jobs=2)
    assert serial.to_json(timing=False) == parallel.to_json(timing=False)


def test_symmetry_flag_checks_more_universes():
    sym = run_suite(SMALL, theorems=("NONZERO",))
    full = run_suite(SMALL, theorems=("NONZERO",), symmetry=False)
    assert full.verdict("NONZERO").universes_checked > sym.verdict("NONZERO").universes_checked
    assert full.holds


# -- mutation test of the checker itself ---------------------------------------------


def test_mutant_union_breaks_add_and_replays():
    u = make_universe([("e", 2)])
    v = check_theorem("ADD", u, union=mutant_union)
    assert not v.holds
    cx = v.counterexample
    assert set(cx["qsets"]) == {"X", "Y", "Z"}
    assert replay("ADD", cx)


def test_mutant_counterexample_is_first_in_canonical_order():
    v = run_suite(SMALL, theorems=("ADD",), union=mutant_union).verdict("ADD")
    assert not v.holds
    # first universe with an m-atom and a second element: pools (1, 0) plus one M-atom
    assert v.counterexample["universe"] == {"pools": {"e": 1, "f": 0}, "classical": ["a"]}
    assert replay("ADD", v.counterexample)


def test_replay_rejects_a_non_violation():
    u = make_universe([("e", 2)])
    X = make_qset(u, {"e": 1})
    Y = core.difference(u.pool("e"), X)
    cx = {
        "universe": universe_spec(u),
        "qsets": {k: {"canon": q.canon(), "indices": [i for i, e in enumerate(u.elements()) if e in q]}
                  for k, q in {"X": X, "Y": Y, "Z": X | Y}.items()},
        "details": "",
    }
    assert not replay("ADD", cx)


def test_mutant_qcard_breaks_nonzero():
    from qsetk.counting import Defined, qcard

    def off_by_one(X):
        r = qcard(X)
        return Defined(r.n - 1)

    v = check_theorem("NONZERO", make_universe([("e", 1)]), qcard=off_by_one)
    assert not v.holds
    # the mutant lives in qcard itself, so the real pipeline does not reproduce it
    assert not replay("NONZERO", v.counterexample)
