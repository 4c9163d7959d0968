"""Eigenoperator sets, instructional-set solvers, and Bell-Mermin bounds
for GHZ and generalized Dicke states of three and four qubits."""

from .pauli import PauliSum, PauliWord, parse_sum, render_sum, sigma
from .states import StateVector, dicke, exchange_flip, ghz, sym_dicke

__all__ = [
    "PauliSum",
    "PauliWord",
    "StateVector",
    "dicke",
    "exchange_flip",
    "ghz",
    "parse_sum",
    "render_sum",
    "sigma",
    "sym_dicke",
]
