"""Hamiltonians, symmetric generators, spin permutations, and named states.

The computational basis is ordered with spin 1 as the most significant bit:
for three spins, |100> sits at index 4.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from math import comb, sqrt

import numpy as np

from .tensor_core import pauli_string_matrix

N_MAX = 6


@dataclass
class SpinState:
    """Pure state of an n-spin register (unit norm within 1e-12)."""

    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        self.amplitudes = np.asarray(self.amplitudes, dtype=complex)
        if self.amplitudes.shape != (2 ** self.n,):
            raise ValueError(
                f"state for n={self.n} needs {2 ** self.n} amplitudes"
            )
        if abs(np.linalg.norm(self.amplitudes) - 1.0) > 1e-12:
            raise ValueError("state is not normalized")


def _check_n(n: int, n_min: int = 1) -> None:
    if not n_min <= n <= N_MAX:
        raise ValueError(f"spin count n={n} outside [{n_min}, {N_MAX}]")


def _collective(n: int, axis: str) -> np.ndarray:
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for j in range(n):
        labels = ["0"] * n
        labels[j] = axis
        h += pauli_string_matrix(labels)
    return h


def hamiltonian_x(n: int) -> np.ndarray:
    """Collective transverse field: sum of sigma-x on each spin."""
    _check_n(n)
    return _collective(n, "x")


def hamiltonian_y(n: int) -> np.ndarray:
    _check_n(n)
    return _collective(n, "y")


def hamiltonian_zz(n: int) -> np.ndarray:
    """All-to-all Ising coupling: sum over pairs k < m of sigma-z sigma-z."""
    _check_n(n, n_min=2)
    h = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for k, m in itertools.combinations(range(n), 2):
        labels = ["0"] * n
        labels[k] = "z"
        labels[m] = "z"
        h += pauli_string_matrix(labels)
    return h


def generator_strings(n: int, k_x: int, k_y: int, k_z: int):
    """Distinct letter placements for the (k_x, k_y, k_z) symmetric generator.

    Lexicographic order of label tuples ('0' < 'x' < 'y' < 'z'), so the sum
    order is deterministic.
    """
    word = "0" * (n - k_x - k_y - k_z) + "x" * k_x + "y" * k_y + "z" * k_z
    return sorted(set(itertools.permutations(word)))


def symmetric_generator(n: int, k_x: int, k_y: int, k_z: int) -> np.ndarray:
    """i times the sum of all Pauli strings with the given letter counts."""
    _check_n(n)
    counts = (k_x, k_y, k_z)
    if any(k < 0 for k in counts) or sum(counts) > n:
        raise ValueError(f"invalid letter counts {counts} for n={n}")
    out = np.zeros((2 ** n, 2 ** n), dtype=complex)
    for labels in generator_strings(n, k_x, k_y, k_z):
        out += pauli_string_matrix(labels)
    return 1j * out


def transposition(n: int, j: int) -> np.ndarray:
    """Unitary swapping spins j and j+1 (j is 1-based)."""
    _check_n(n, n_min=2)
    if not 1 <= j <= n - 1:
        raise ValueError(f"transposition index j={j} outside [1, {n - 1}]")
    dim = 2 ** n
    p = np.zeros((dim, dim), dtype=complex)
    # bit j counted from the most significant side
    hi, lo = n - j, n - j - 1
    for idx in range(dim):
        b_hi = (idx >> hi) & 1
        b_lo = (idx >> lo) & 1
        swapped = idx & ~(1 << hi) & ~(1 << lo)
        swapped |= b_lo << hi
        swapped |= b_hi << lo
        p[swapped, idx] = 1.0
    return p


def is_permutation_invariant(a: np.ndarray, tol: float = 1e-10) -> bool:
    """True iff a commutes with every adjacent-spin swap within tol."""
    dim = a.shape[0]
    n = dim.bit_length() - 1
    if 2 ** n != dim:
        raise ValueError(f"dimension {dim} is not a power of two")
    for j in range(1, n):
        pj = transposition(n, j)
        if np.abs(pj @ a @ pj - a).max() > tol:
            return False
    return True


def phi_state(n: int, m: int) -> SpinState:
    """Normalized uniform superposition of basis kets with m ones."""
    _check_n(n)
    if not 0 <= m <= n:
        raise ValueError(f"excitation count m={m} outside [0, {n}]")
    v = np.zeros(2 ** n, dtype=complex)
    for idx in range(2 ** n):
        if bin(idx).count("1") == m:
            v[idx] = 1.0
    return SpinState(n=n, amplitudes=v / sqrt(comb(n, m)))


def ghz_state(n: int) -> SpinState:
    _check_n(n)
    amps = (phi_state(n, 0).amplitudes + phi_state(n, n).amplitudes) / sqrt(2.0)
    return SpinState(n=n, amplitudes=amps)


def w_state(n: int) -> SpinState:
    _check_n(n)
    return phi_state(n, 1)


def ket(n: int, bits: str) -> SpinState:
    """Computational basis ket from a bitstring, MSB first."""
    if len(bits) != n or not bits or set(bits) - {"0", "1"}:
        raise ValueError(f"bad bitstring {bits!r} for n={n}")
    v = np.zeros(2 ** n, dtype=complex)
    v[int(bits, 2)] = 1.0
    return SpinState(n=n, amplitudes=v)


def state_to_json(state: SpinState) -> dict:
    return {
        "n": state.n,
        "amplitudes": [
            [float(z.real), float(z.imag)] for z in state.amplitudes
        ],
    }


def state_from_json(doc: dict) -> SpinState:
    v = np.array([complex(re, im) for re, im in doc["amplitudes"]])
    return SpinState(n=int(doc["n"]), amplitudes=v)
