"""Lie-algebraic tools for collectively controlled symmetric Ising spin networks.

The package computes dynamical Lie algebra closures for the collective
control system (Ising coupling drift plus global x/y fields), certifies
their permutation-invariant block structure, and synthesizes control
pulse schedules realizing arbitrary unitaries on the permutation
invariant subspace for two and three spins.
"""

from . import (
    tensor_core,
    spin_model,
    lie_engine,
    coordinates,
    synthesis,
    simulator,
    acceptance,
)

__all__ = [
    "tensor_core",
    "spin_model",
    "lie_engine",
    "coordinates",
    "synthesis",
    "simulator",
    "acceptance",
    "cli",
]

__version__ = "0.1.0"
