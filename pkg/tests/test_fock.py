import cmath
import math
from collections import Counter

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from qsetk.core import make_qset, make_universe
from qsetk.counting import Defined, is_chain, qcard
from qsetk.errors import (
    BadDistribution,
    IndexOutOfRange,
    InvalidDensity,
    NoQuasisetRepresentation,
    NotPure,
    ZeroVector,
)
from qsetk.fock import (
    DensityMatrix,
    Eigenstate,
    IgnoranceMixture,
    UndefinedParticleNumber,
    density_of,
    ionization_experiment,
    make_state,
    mixture,
    number_verdict,
    off_diagonal_norm,
    to_qset,
)


def test_make_state_examples():
    s = make_state([(2, 1)])
    assert s.amplitudes[2] == 1 and not s.renormalized
    cat = make_state([(1, 0.6), (2, 0.8)])
    assert abs(abs(cat.amplitudes[1]) ** 2 + abs(cat.amplitudes[2]) ** 2 - 1) < 1e-12
    assert not cat.renormalized
    with pytest.raises(ZeroVector):
        make_state([])
    with pytest.raises(IndexOutOfRange):
        make_state([(8, 1)])


def test_make_state_renormalizes():
    s = make_state([(0, 3), (1, 4)])
    assert s.renormalized
    assert np.isclose(np.linalg.norm(s.amplitudes), 1)


def test_density_of_basis_state():
    rho = density_of(make_state([(2, 1)])).entries
    expected = np.zeros((8, 8))
    expected[2, 2] = 1
    assert np.allclose(rho, expected)


def test_mixture_matrix_is_diagonal():
    rho = mixture([(1, 0.36), (2, 0.64)]).entries
    assert rho[1, 1] == pytest.approx(0.36) and rho[2, 2] == pytest.approx(0.64)
    assert np.count_nonzero(rho - np.diag(np.diag(rho))) == 0
    with pytest.raises(BadDistribution):
        mixture([(1, 0.5)])
    with pytest.raises(BadDistribution):
        mixture([(1, 1.5), (2, -0.5)])


def test_superposition_has_interference_terms():
    alpha, beta = 0.6, 0.8j
    rho = density_of(make_state([(1, alpha), (2, beta)])).entries
    assert rho[1, 2] == pytest.approx(alpha * np.conj(beta))
    assert rho[2, 1] == pytest.approx(beta * np.conj(alpha))


def test_off_diagonal_norm_by_hand():
    a = b = 1 / math.sqrt(2)
    # dense 3x3 block written out explicitly, independent of density_of
    block = [[0, 0, 0], [0, a * a, a * b], [0, b * a, b * b]]
    by_hand = math.sqrt(sum(abs(block[i][j]) ** 2 for i in range(3) for j in range(3) if i != j))
    assert by_hand == pytest.approx(0.70710678, abs=1e-8)
    assert off_diagonal_norm(density_of(make_state([(1, a), (2, b)]))) == pytest.approx(by_hand, abs=1e-12)
    assert off_diagonal_norm(mixture([(1, 0.5), (2, 0.5)])) == 0
    assert off_diagonal_norm(density_of(make_state([(2, 1)]))) == 0


def test_verdict_examples():
    assert number_verdict(density_of(make_state([(2, 1)]))) == Eigenstate(2)
    v = number_verdict(mixture([(1, 0.36), (2, 0.64)]))
    assert isinstance(v, IgnoranceMixture)
    assert v.distribution == pytest.approx({1: 0.36, 2: 0.64}, abs=1e-9)
    u = number_verdict(density_of(make_state([(1, 0.6), (2, 0.8)])))
    assert isinstance(u, UndefinedParticleNumber)


def test_verdict_rejects_invalid_density():
    with pytest.raises(InvalidDensity):
        number_verdict(DensityMatrix(np.eye(3, dtype=complex)))
    bad = np.zeros((2, 2), dtype=complex)
    bad[0, 1] = 1
    bad[0, 0] = 1
    with pytest.raises(InvalidDensity):
        number_verdict(DensityMatrix(bad))
    neg = np.diag([1.5, -0.5]).astype(complex)
    with pytest.raises(InvalidDensity):
        number_verdict(DensityMatrix(neg))
    with pytest.raises(ValueError):
        number_verdict(mixture([(0, 1)]), eps=0)


def test_to_qset_examples():
    u = make_universe([("e", 8)])
    X = to_qset(Eigenstate(2), u, "e")
    assert X.canon() == "⟨e×2⟩" and qcard(X) == Defined(2)
    vac = to_qset(Eigenstate(0), u, "e")
    assert vac.is_empty() and qcard(vac) == Defined(0)
    with pytest.raises(NoQuasisetRepresentation) as info:
        to_qset(UndefinedParticleNumber(0.5), u, "e")
    assert info.value.off_diagonal_norm == 0.5
    family = to_qset(IgnoranceMixture({1: 0.36, 2: 0.64}), u, "e")
    assert [(p, qcard(X)) for p, X in family] == [(0.36, Defined(1)), (0.64, Defined(2))]


def test_consistency_for_every_basis_state():
    u = make_universe([("e", 8)])
    for n in range(8):
        v = number_verdict(density_of(make_state([(n, 1)])))
        assert v == Eigenstate(n)
        assert qcard(to_qset(v, u, "e")) == Defined(n)


amplitudes = st.lists(
    st.tuples(st.integers(0, 7), st.complex_numbers(max_magnitude=2, allow_nan=False, allow_infinity=False)),
    min_size=1, max_size=4,
).filter(lambda amps: any(abs(sum(a for m, a in amps if m == n)) > 1e-3 for n, _ in amps))


@settings(max_examples=200, deadline=None)
@given(amplitudes, st.floats(0, 2 * math.pi))
def test_verdict_trichotomy_and_phase_invariance(amps, phase):
    s = make_state(amps)
    rho = density_of(s)
    v = number_verdict(rho)
    assert isinstance(v, (Eigenstate, IgnoranceMixture, UndefinedParticleNumber))
    assert not isinstance(v, IgnoranceMixture)  # a pure state is never a proper mixture
    shifted = density_of(make_state([(n, a * cmath.exp(1j * phase)) for n, a in amps]))
    assert type(number_verdict(shifted)) is type(v)
    off_zero = off_diagonal_norm(rho) <= 1e-9
    assert off_zero == isinstance(v, (Eigenstate, IgnoranceMixture))


@settings(max_examples=100, deadline=None)
@given(st.dictionaries(st.integers(0, 7), st.floats(0.01, 1), min_size=1, max_size=5))
def test_mixtures_sum_to_one(weights):
    total = sum(weights.values())
    v = number_verdict(mixture([(n, w / total) for n, w in weights.items()]))
    dist = v.distribution if isinstance(v, IgnoranceMixture) else {v.n: 1.0}
    assert sum(dist.values()) == pytest.approx(1, abs=1e-9)


# -- ionization ----------------------------------------------------------------


def test_helium_ionizes_in_two_steps():
    u = make_universe([("e", 2)])
    He = make_qset(u, {"e": 2})
    for seed in range(20):
        chain, log = ionization_experiment(He, seed)
        assert [m.canon() for m in chain.members] == ["⟨e×2⟩", "⟨e×1⟩", "∅"]
        assert log == ["e", "e"]


def test_ionizing_nothing():
    u = make_universe([("e", 1)])
    chain, log = ionization_experiment(make_qset(u), 0)
    assert len(chain.members) == 1 and log == []


def test_mixed_kinds_over_seeds():
    u = make_universe([("e", 2), ("f", 1)])
    X = make_qset(u, {"e": 2, "f": 1})
    orders = set()
    for seed in range(1, 101):
        chain, log = ionization_experiment(X, seed)
        assert len(chain.members) == 4
        assert Counter(log) == Counter(X.profile())
        assert is_chain(X, chain)
        orders.add(tuple(log))
    assert len(orders) == 3


def test_ionization_is_reproducible_and_requires_purity():
    from qsetk.core import MAtom

    u = make_universe([("e", 3), ("f", 2)], [MAtom("a")])
    X = make_qset(u, {"e": 3, "f": 2})
    assert ionization_experiment(X, 9)[1] == ionization_experiment(X, 9)[1]
    with pytest.raises(NotPure):
        ionization_experiment(make_qset(u, {"e": 1}, classical=[MAtom("a")]), 0)
