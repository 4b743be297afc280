"""Diagonal 2-local Ising costs and the MIS penalty encoding.

Sign convention used everywhere in the package: bit ``x_i = 1`` maps to spin
``z_i = +1`` and ``x_i = 0`` to ``z_i = -1``.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
from typing import Mapping, Sequence

import numpy as np

from . import _kernels
from .graph import Graph


def bits_to_spins(x: Sequence[int]) -> np.ndarray:
    return 2 * np.asarray(x, dtype=np.int64) - 1


def spins_to_bits(z: Sequence[int]) -> tuple[int, ...]:
    return tuple(int(s > 0) for s in z)


@dataclass(frozen=True)
class IsingCost:
    """``constant + sum_i h_i z_i + sum_{i<j} J_ij z_i z_j`` over ``n`` spins.

    Couplings are keyed by sorted pairs ``(i, j)`` with ``i < j``; entries that
    are exactly zero are dropped.
    """

    n: int
    constant: float = 0.0
    fields: tuple[float, ...] = ()
    couplings: Mapping[tuple[int, int], float] = field(default_factory=dict)

    def __post_init__(self):
        n = int(self.n)
        fields = tuple(float(h) for h in self.fields) if self.fields else (0.0,) * n
        if len(fields) != n:
            raise ValueError(f"expected {n} fields, got {len(fields)}")
        couplings: dict[tuple[int, int], float] = {}
        for (a, b), v in self.couplings.items():
            a, b = int(a), int(b)
            if a == b:
                raise ValueError(f"self-coupling on qubit {a}")
            if not (0 <= a < n and 0 <= b < n):
                raise ValueError(f"coupling ({a}, {b}) out of range for n={n}")
            key = (a, b) if a < b else (b, a)
            couplings[key] = couplings.get(key, 0.0) + float(v)
        couplings = {k: v for k, v in sorted(couplings.items()) if v != 0.0}
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "constant", float(self.constant))
        object.__setattr__(self, "fields", fields)
        object.__setattr__(self, "couplings", couplings)

    @property
    def pairs(self) -> list[tuple[int, int]]:
        return list(self.couplings)

    @cached_property
    def _pair_arrays(self):
        pairs = self.pairs
        pi = np.array([p[0] for p in pairs], dtype=np.int64)
        pj = np.array([p[1] for p in pairs], dtype=np.int64)
        pv = np.array([self.couplings[p] for p in pairs], dtype=np.float64)
        return pi, pj, pv

    @cached_property
    def diagonal(self) -> np.ndarray:
        """Cost value for every basis index (bit ``q`` of the index is qubit ``q``)."""
        pi, pj, pv = self._pair_arrays
        diag = _kernels.cost_diagonal(
            self.n, self.constant, np.asarray(self.fields, dtype=np.float64), pi, pj, pv
        )
        diag.setflags(write=False)
        return diag

    @cached_property
    def levels(self) -> tuple[np.ndarray, np.ndarray]:
        """``(distinct diagonal values, per-index position in that list)``."""
        return _kernels.diagonal_levels(self.diagonal)

    def evaluate(self, z: Sequence[int]) -> float:
        z = np.asarray(z)
        if z.shape != (self.n,):
            raise ValueError(f"expected {self.n} spins, got shape {z.shape}")
        if not np.all(np.abs(z) == 1):
            raise ValueError("spins must be +1 or -1")
        total = self.constant
        for h, s in zip(self.fields, z):
            total += h * s
        for (a, b), v in self.couplings.items():
            total += v * z[a] * z[b]
        return float(total)

    def fix_spin(self, i: int, s: int) -> "IsingCost":
        """Substitute ``z_i = s`` and drop qubit ``i`` (later qubits shift down)."""
        if not 0 <= i < self.n:
            raise IndexError(f"qubit {i} out of range for n={self.n}")
        if s not in (1, -1):
            raise ValueError("spin value must be +1 or -1")
        fields = list(self.fields)
        constant = self.constant + fields[i] * s
        couplings: dict[tuple[int, int], float] = {}
        for (a, b), v in self.couplings.items():
            if a == i:
                fields[b] += v * s
            elif b == i:
                fields[a] += v * s
            else:
                couplings[(a, b)] = v
        return self._drop(i, constant, fields, couplings)

    def substitute_anticorrelated(self, l: int, k: int) -> "IsingCost":
        """Substitute ``z_l = -z_k`` and drop qubit ``l``."""
        if l == k:
            raise ValueError("qubits must differ")
        for q in (l, k):
            if not 0 <= q < self.n:
                raise IndexError(f"qubit {q} out of range for n={self.n}")
        fields = list(self.fields)
        fields[k] -= fields[l]
        constant = self.constant
        couplings: dict[tuple[int, int], float] = {}

        def add(a, b, v):
            key = (a, b) if a < b else (b, a)
            couplings[key] = couplings.get(key, 0.0) + v

        for (a, b), v in self.couplings.items():
            if {a, b} == {l, k}:
                # z_l z_k = -1
                constant -= v
            elif a == l:
                add(k, b, -v)
            elif b == l:
                add(a, k, -v)
            else:
                add(a, b, v)
        return self._drop(l, constant, fields, couplings)

    def _drop(self, i, constant, fields, couplings) -> "IsingCost":
        def shift(q):
            return q - 1 if q > i else q

        del fields[i]
        moved = {(shift(a), shift(b)): v for (a, b), v in couplings.items()}
        return IsingCost(self.n - 1, constant, tuple(fields), moved)


def encode_mis(g: Graph, lam: float) -> IsingCost:
    """Penalty Hamiltonian ``-sum r_i (Z_i+1) + lam sum_<ij> (Z_i+1)(Z_j+1)``."""
    if not lam > 0:
        raise ValueError(f"penalty weight must be positive, got {lam}")
    fields = [-r + lam * d for r, d in zip(g.weights, g.degrees)]
    constant = -sum(g.weights) + lam * g.m
    return IsingCost(g.n, constant, tuple(fields), {e: lam for e in g.edges})


def reward_penalty(g: Graph, x: Sequence[int]) -> tuple[float, int]:
    """Set reward ``sum r_i x_i`` and the number of edges inside the set."""
    if len(x) != g.n:
        raise ValueError(f"expected {g.n} bits, got {len(x)}")
    reward = sum(r for r, b in zip(g.weights, x) if b)
    penalty = sum(1 for u, v in g.edges if x[u] and x[v])
    return float(reward), penalty


def penalized_value(g: Graph, lam: float, x: Sequence[int]) -> float:
    """``r(x) - 2 lam p(x)``: the penalized objective in set-value units."""
    r, p = reward_penalty(g, x)
    return r - 2.0 * lam * p


def minimize_exhaustive(cost: IsingCost) -> tuple[tuple[int, ...], float]:
    """Exact minimizer of a cost by enumeration.

    Returns ``(spins, value)``; ties go to the lexicographically smallest bit
    string (qubit 0 most significant).
    """
    if cost.n == 0:
        return (), cost.constant
    diag = cost.diagonal
    best = diag.min()
    idx = np.flatnonzero(diag == best)
    rev = np.zeros_like(idx)
    for q in range(cost.n):
        rev |= ((idx >> q) & 1) << (cost.n - 1 - q)
    k = int(idx[np.argmin(rev)])
    spins = tuple(1 if (k >> q) & 1 else -1 for q in range(cost.n))
    return spins, float(best)
