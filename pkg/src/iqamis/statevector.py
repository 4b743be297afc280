"""Exact statevector primitives for diagonal costs and the transverse-field mixer.

Amplitude index ``k`` encodes the basis string little-endian: bit ``q`` of
``k`` is qubit ``q``, and a set bit is spin ``+1``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Sequence

import numpy as np

from . import _kernels
from .ising import IsingCost

MAX_QUBITS = 24
NORM_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class QuantumState:
    n: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=np.complex128)
        if amps.shape != (1 << self.n,):
            raise ValueError(f"expected {1 << self.n} amplitudes, got {amps.shape}")
        drift = abs(float(np.vdot(amps, amps).real) - 1.0)
        if drift > NORM_TOL:
            raise ValueError(f"state is not normalized (|norm^2 - 1| = {drift:.2e})")
        object.__setattr__(self, "amplitudes", amps)

    @property
    def probabilities(self) -> np.ndarray:
        a = self.amplitudes
        return a.real**2 + a.imag**2

    @property
    def norm(self) -> float:
        return float(np.sqrt(self.probabilities.sum()))

    def copy(self) -> "QuantumState":
        return QuantumState(self.n, self.amplitudes.copy())


def basis_state(bits: Sequence[int]) -> QuantumState:
    n = len(bits)
    amps = np.zeros(1 << n, dtype=np.complex128)
    amps[sum(int(b) << q for q, b in enumerate(bits))] = 1.0
    return QuantumState(n, amps)


def uniform_state(n: int, cap: int = MAX_QUBITS) -> QuantumState:
    if not 1 <= n <= cap:
        raise ValueError(f"qubit count {n} outside [1, {cap}]")
    dim = 1 << n
    return QuantumState(n, np.full(dim, 1.0 / np.sqrt(dim), dtype=np.complex128))


def apply_phase(state: QuantumState, cost: IsingCost, gamma: float) -> QuantumState:
    """Return ``exp(-i gamma C) |state>``."""
    if cost.n != state.n:
        raise ValueError(f"cost has {cost.n} qubits, state has {state.n}")
    out = state.copy()
    _kernels.apply_phase(out.amplitudes, *cost.levels, float(gamma))
    return out


def apply_mixer(state: QuantumState, beta: float) -> QuantumState:
    """Return ``exp(-i beta B) |state>`` with ``B = -sum_j X_j``.

    Each qubit sees ``cos(beta) I + i sin(beta) X``.
    """
    out = state.copy()
    _kernels.apply_mixer(out.amplitudes, state.n, float(beta))
    return out


def _check_qubit(state: QuantumState, j: int) -> int:
    if not 0 <= j < state.n:
        raise IndexError(f"qubit {j} out of range for n={state.n}")
    return j


def z_expectations(state: QuantumState) -> np.ndarray:
    return _kernels.z_expectations(state.probabilities, state.n)


def zz_expectations(state: QuantumState, pairs: Sequence[tuple[int, int]]) -> np.ndarray:
    pi = np.array([p[0] for p in pairs], dtype=np.int64)
    pj = np.array([p[1] for p in pairs], dtype=np.int64)
    return _kernels.zz_expectations(state.probabilities, pi, pj)


def expect_z(state: QuantumState, j: int) -> float:
    _check_qubit(state, j)
    probs = state.probabilities.reshape(-1, 2, 1 << j)
    return float(probs[:, 1, :].sum() - probs[:, 0, :].sum())


def expect_zz(state: QuantumState, i: int, j: int) -> float:
    _check_qubit(state, i)
    _check_qubit(state, j)
    if i == j:
        raise ValueError("expect_zz needs two distinct qubits")
    return float(zz_expectations(state, [(i, j)])[0])


def expect_cost(state: QuantumState, cost: IsingCost) -> float:
    if cost.n != state.n:
        raise ValueError(f"cost has {cost.n} qubits, state has {state.n}")
    return float(np.dot(cost.diagonal, state.probabilities))


def sample_bitstrings(state: QuantumState, shots: int, seed=None) -> np.ndarray:
    """Draw ``shots`` computational-basis measurements as a ``(shots, n)`` 0/1 array."""
    rng = np.random.default_rng(seed)
    probs = state.probabilities
    idx = rng.choice(probs.shape[0], size=shots, p=probs / probs.sum())
    return ((idx[:, None] >> np.arange(state.n)[None, :]) & 1).astype(np.int8)


def sampled_correlators(
    state: QuantumState, pairs: Sequence[tuple[int, int]], shots: int, seed=None
) -> tuple[np.ndarray, np.ndarray]:
    """Shot-noise estimates of ``<Z_j>`` and ``<Z_i Z_j>`` from sampled strings."""
    spins = 2 * sample_bitstrings(state, shots, seed).astype(np.float64) - 1
    z = spins.mean(axis=0)
    zz = np.array([(spins[:, a] * spins[:, b]).mean() for a, b in pairs])
    return z, zz
