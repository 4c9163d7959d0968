"""Amplitude vectors for GHZ, Dicke, and symmetrized Dicke states.

Constructors follow the non-normalized conventions used throughout the
package; expectation values divide by the squared norm where needed.  Basis
words (j1,...,jn) with jk in {1,2} pack into integers with j=1 -> bit 0,
j=2 -> bit 1 and qubit 1 in the most significant position.
"""

from __future__ import annotations

from typing import Iterable, Sequence

import numpy as np


def pack_basis_word(word: Sequence[int]) -> int:
    """Packed index of a basis word such as (1,2,1)."""
    index = 0
    for j in word:
        if j not in (1, 2):
            raise ValueError(f"basis letters must be 1 or 2, got {word}")
        index = (index << 1) | (j - 1)
    return index


def unpack_basis_word(index: int, n: int) -> tuple[int, ...]:
    return tuple(((index >> (n - 1 - a)) & 1) + 1 for a in range(n))


class StateVector:
    """Complex amplitudes over the 2^n packed basis; immutable once built."""

    __slots__ = ("n", "amps")

    def __init__(self, n: int, amps: Iterable[complex]):
        if n < 1:
            raise ValueError("qubit count must be >= 1")
        arr = np.array(list(amps) if not isinstance(amps, np.ndarray) else amps,
                       dtype=complex)
        if arr.shape != (1 << n,):
            raise ValueError(f"expected {1 << n} amplitudes, got {arr.shape}")
        arr = arr.copy()
        arr.setflags(write=False)
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "amps", arr)

    def __setattr__(self, name, value):
        raise AttributeError("StateVector is immutable")

    @property
    def norm_sq(self) -> float:
        return float(np.real(np.vdot(self.amps, self.amps)))

    def is_zero(self, tol: float = 0.0) -> bool:
        return bool(np.all(np.abs(self.amps) <= tol))

    def allclose(self, other: "StateVector", tol: float = 1e-12) -> bool:
        return self.n == other.n and bool(
            np.all(np.abs(self.amps - other.amps) <= tol)
        )

    def __eq__(self, other) -> bool:
        if not isinstance(other, StateVector):
            return NotImplemented
        return self.n == other.n and bool(np.array_equal(self.amps, other.amps))

    def __repr__(self) -> str:
        nonzero = {i: self.amps[i] for i in range(1 << self.n) if self.amps[i] != 0}
        return f"StateVector(n={self.n}, nonzero={nonzero})"

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "amps": [[float(a.real), float(a.imag)] for a in self.amps],
        }

    @classmethod
    def from_json_dict(cls, data: dict) -> "StateVector":
        return cls(int(data["n"]), [complex(re, im) for re, im in data["amps"]])


def ghz(n: int) -> StateVector:
    """GHZ state: unit amplitudes on e_{1,...,1} and e_{2,...,2}."""
    if n not in (3, 4):
        raise ValueError(f"unsupported qubit count {n}; expected 3 or 4")
    amps = np.zeros(1 << n, dtype=complex)
    amps[0] = 1
    amps[(1 << n) - 1] = 1
    return StateVector(n, amps)


def dicke(n: int, m: int) -> StateVector:
    """Dicke state of degree m: unit amplitudes on all weight-m basis words."""
    if n not in (3, 4):
        raise ValueError(f"unsupported qubit count {n}; expected 3 or 4")
    if not 1 <= m <= n // 2:
        raise ValueError(f"degree {m} out of range 1..{n // 2} for {n} qubits")
    amps = np.zeros(1 << n, dtype=complex)
    for index in range(1 << n):
        if bin(index).count("1") == m:
            amps[index] = 1
    return StateVector(n, amps)


# Basis pairs (b, conjugate of b) receiving each coefficient, listed in the
# order the coefficients are numbered for each supported (n, m) family.
_SYM_PAIRS: dict[tuple[int, int], list[tuple[int, int]]] = {
    (3, 1): [(0b100, 0b011), (0b010, 0b101), (0b001, 0b110)],
    (4, 1): [(0b1000, 0b0111), (0b0100, 0b1011), (0b0010, 0b1101), (0b0001, 0b1110)],
    (4, 2): [(0b0011, 0b1100), (0b0101, 0b1010), (0b0110, 0b1001)],
}


def sym_coeff_count(n: int, m: int) -> int:
    if (n, m) not in _SYM_PAIRS:
        raise ValueError(f"no symmetrized Dicke family for (n, m) = ({n}, {m})")
    return len(_SYM_PAIRS[(n, m)])


def sym_dicke(n: int, m: int, coeffs: Sequence[complex] | None = None) -> StateVector:
    """Symmetrized Dicke state: each coefficient weights a conjugate basis pair.

    Coefficients must all be nonzero; omitting them uses all ones, in which
    case the result is the plain symmetrization of ``dicke(n, m)``.
    """
    pairs = _SYM_PAIRS.get((n, m))
    if pairs is None:
        raise ValueError(f"no symmetrized Dicke family for (n, m) = ({n}, {m})")
    if coeffs is None:
        coeffs = [1.0] * len(pairs)
    coeffs = [complex(c) for c in coeffs]
    if len(coeffs) != len(pairs):
        raise ValueError(
            f"expected {len(pairs)} coefficients for (n, m) = ({n}, {m}), "
            f"got {len(coeffs)}"
        )
    if any(c == 0 for c in coeffs):
        raise ValueError("all coefficients must be nonzero")
    amps = np.zeros(1 << n, dtype=complex)
    for (b, b_conj), c in zip(pairs, coeffs):
        amps[b] += c
        amps[b_conj] += c
    return StateVector(n, amps)


def exchange_flip(v: StateVector) -> StateVector:
    """Move the amplitude at each basis word to its e1<->e2 complement."""
    mask = (1 << v.n) - 1
    amps = np.zeros_like(v.amps)
    for index in range(1 << v.n):
        amps[mask ^ index] = v.amps[index]
    return StateVector(v.n, amps)


def is_exchange_symmetric(v: StateVector, tol: float = 1e-12) -> bool:
    return exchange_flip(v).allclose(v, tol=tol)
