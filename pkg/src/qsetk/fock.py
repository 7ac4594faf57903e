"""Single-mode truncated Fock space: does a state have a particle number?

A density matrix in the number basis is classified by its spectral support on
the number operator. Only states with a definite number (eigenstates), or
classical ignorance over definite numbers (diagonal mixtures), map to
quasisets; coherent superpositions of different numbers do not.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Union

import numpy as np

from qsetk import core, counting
from qsetk.core import Qset, Universe
from qsetk.errors import (
    BadDistribution,
    IndexOutOfRange,
    InvalidDensity,
    NoQuasisetRepresentation,
    NotPure,
    ZeroVector,
)

DEFAULT_DIM = 8
EPS = 1e-9
EPS_NORM = 1e-9


@dataclass(frozen=True)
class FockState:
    amplitudes: np.ndarray
    renormalized: bool = False

    @property
    def dim(self) -> int:
        return len(self.amplitudes)


@dataclass(frozen=True)
class DensityMatrix:
    entries: np.ndarray

    @property
    def dim(self) -> int:
        return self.entries.shape[0]


@dataclass(frozen=True)
class Eigenstate:
    n: int


@dataclass(frozen=True)
class IgnoranceMixture:
    distribution: dict[int, float]


@dataclass(frozen=True)
class UndefinedParticleNumber:
    off_diagonal_norm: float


NumberVerdict = Union[Eigenstate, IgnoranceMixture, UndefinedParticleNumber]


def make_state(amps: Iterable[tuple[int, complex]], dim: int = DEFAULT_DIM) -> FockState:
    """Build a normalized state from ``(n, amplitude)`` pairs."""
    psi = np.zeros(dim, dtype=complex)
    for n, a in amps:
        if not 0 <= n < dim:
            raise IndexOutOfRange(f"number state |{n}⟩ outside truncation {dim}")
        psi[n] += a
    norm = np.linalg.norm(psi)
    if norm == 0:
        raise ZeroVector("state has no nonzero amplitude")
    renorm = abs(norm**2 - 1) > EPS_NORM
    if renorm:
        psi = psi / norm
    return FockState(psi, renorm)


def density_of(s: FockState) -> DensityMatrix:
    return DensityMatrix(np.outer(s.amplitudes, s.amplitudes.conj()))


def mixture(ps: Iterable[tuple[int, float]], dim: int = DEFAULT_DIM) -> DensityMatrix:
    """Diagonal density matrix: probability ``p`` of definitely having ``n`` particles."""
    diag = np.zeros(dim)
    for n, p in ps:
        if not 0 <= n < dim:
            raise IndexOutOfRange(f"number state |{n}⟩ outside truncation {dim}")
        if p < 0:
            raise BadDistribution(f"negative probability {p}")
        diag[n] += p
    if abs(diag.sum() - 1) > EPS_NORM:
        raise BadDistribution(f"probabilities sum to {diag.sum()}")
    return DensityMatrix(np.diag(diag).astype(complex))


def off_diagonal_norm(rho: DensityMatrix) -> float:
    """Frobenius norm of the interference terms."""
    m = rho.entries
    return float(np.linalg.norm(m - np.diag(np.diag(m))))


def validate(rho: DensityMatrix, eps: float = EPS) -> None:
    m = rho.entries
    if m.ndim != 2 or m.shape[0] != m.shape[1]:
        raise InvalidDensity("density matrix must be square")
    if np.abs(m - m.conj().T).max() > eps:
        raise InvalidDensity("not Hermitian")
    if abs(np.trace(m) - 1) > eps:
        raise InvalidDensity(f"trace {np.trace(m).real:.6g} != 1")
    if np.linalg.eigvalsh(m).min() < -eps:
        raise InvalidDensity("not positive semidefinite")


def number_verdict(rho: DensityMatrix, eps: float = EPS) -> NumberVerdict:
    if eps <= 0:
        raise ValueError("eps must be positive")
    validate(rho, eps)
    off = off_diagonal_norm(rho)
    if off > eps:
        return UndefinedParticleNumber(off)
    diag = np.diag(rho.entries).real
    support = {n: float(p) for n, p in enumerate(diag) if p > eps}
    if len(support) == 1:
        return Eigenstate(next(iter(support)))
    return IgnoranceMixture(support)


def to_qset(verdict: NumberVerdict, u: Universe, kind: str):
    """Eigenstate -> pure quasiset; mixture -> weighted family; otherwise raise."""
    if isinstance(verdict, UndefinedParticleNumber):
        raise NoQuasisetRepresentation(verdict.off_diagonal_norm)
    if isinstance(verdict, Eigenstate):
        return core.make_qset(u, {kind: verdict.n})
    return [(p, core.make_qset(u, {kind: n})) for n, p in sorted(verdict.distribution.items())]


def ionization_experiment(X: Qset, seed: int) -> tuple[counting.Chain, list[str]]:
    """Ionize X one particle at a time until nothing is left.

    Each step picks a kind with probability proportional to how many of it
    remain, extracts the singleton of one such m-atom, and records the kind.
    """
    if not X.is_pure():
        raise NotPure(f"{X} contains classical or nested elements")
    rng = random.Random(seed)
    members = [X]
    log = []
    current = X
    while not current.is_empty():
        atoms = current.matoms()
        prof = current.profile()
        kind = rng.choices(list(prof), weights=list(prof.values()))[0]
        x = rng.choice([t for t in atoms if t.kind.id == kind])
        current = core.difference(current, counting.singleton(current, x))
        members.append(current)
        log.append(kind)
    return counting.Chain(tuple(members)), log
