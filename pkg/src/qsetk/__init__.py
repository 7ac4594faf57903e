"""Derived quasicardinality for finite quasisets, with an exhaustive checker."""

from qsetk.core import (
    CSet,
    Inclusion,
    Kind,
    MAtom,
    Qset,
    Token,
    Universe,
    difference,
    empty,
    ext_eq,
    indist,
    intersection,
    make_qset,
    make_universe,
    permute,
    powerset,
    subqset,
    union,
)
from qsetk.counting import (
    Chain,
    Defined,
    QFunction,
    Undefined,
    build_qfunction,
    descendant_chains,
    direct_descendants,
    family_Ax,
    is_chain,
    is_finite,
    qcard,
    singleton,
)

__version__ = "0.1.0"
