"""Laboratory for two-way DFAs and the one-way liveness language."""

from .matrix import BoolMatrix, BoolVector, add, identity, is_idempotent, multiply, zero
from .owl import (
    OwlString,
    OwlSymbol,
    Property,
    connectivity,
    is_live,
    nfa_live,
    representative,
)
from .tdfa import Tdfa, build_accept_all, build_broken_solver, build_subset_solver, decide
from .sequence import ConnectivitySequence, build_sequence, verify_sequence

__version__ = "0.1.0"

__all__ = [
    "BoolMatrix",
    "BoolVector",
    "ConnectivitySequence",
    "OwlString",
    "OwlSymbol",
    "Property",
    "Tdfa",
    "add",
    "build_accept_all",
    "build_broken_solver",
    "build_sequence",
    "build_subset_solver",
    "connectivity",
    "decide",
    "identity",
    "is_idempotent",
    "is_live",
    "multiply",
    "nfa_live",
    "representative",
    "verify_sequence",
    "zero",
]
