"""QAOA-p state preparation, multi-start Nelder-Mead angle search, correlators."""

from __future__ import annotations

import hashlib
from dataclasses import dataclass
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from . import _kernels
from .ising import IsingCost
from .statevector import (
    QuantumState,
    expect_cost,
    uniform_state,
    z_expectations,
    zz_expectations,
)


@dataclass(frozen=True)
class Angles:
    gammas: tuple[float, ...]
    betas: tuple[float, ...]

    def __post_init__(self):
        gammas = tuple(float(g) for g in self.gammas)
        betas = tuple(float(b) for b in self.betas)
        if len(gammas) != len(betas) or not gammas:
            raise ValueError("need p >= 1 and equally many gammas and betas")
        object.__setattr__(self, "gammas", gammas)
        object.__setattr__(self, "betas", betas)

    @property
    def p(self) -> int:
        return len(self.gammas)

    def to_vector(self) -> np.ndarray:
        return np.array(self.gammas + self.betas)

    @classmethod
    def from_vector(cls, vec: Sequence[float]) -> "Angles":
        vec = np.asarray(vec, dtype=float)
        p = vec.shape[0] // 2
        return cls(tuple(vec[:p]), tuple(vec[p:]))


@dataclass(frozen=True, eq=False)
class CorrelatorReport:
    """Single-qubit ``<Z_j>``, coupled-pair ``<Z_i Z_j>`` and ``<C>`` of one state."""

    z: np.ndarray
    zz: dict[tuple[int, int], float]
    cost_expectation: float

    def digest(self) -> str:
        h = hashlib.sha256(np.round(np.asarray(self.z, dtype=float), 12).tobytes())
        h.update(np.round(np.array(list(self.zz.values()), dtype=float), 12).tobytes())
        return h.hexdigest()[:12]


@dataclass(frozen=True)
class OptimizerConfig:
    """Multi-start Nelder-Mead settings.

    Initial gammas are drawn uniformly from ``gamma_range`` and betas from
    ``beta_range``; restarts are evaluated in index order and the first
    strictly-best result is kept.
    """

    restarts: int = 10
    max_evals: int = 2000
    tol: float = 1e-6
    seed: int = 0
    gamma_range: tuple[float, float] = (0.0, np.pi)
    beta_range: tuple[float, float] = (0.0, np.pi / 2)

    def __post_init__(self):
        if self.restarts < 1 or self.max_evals < 1 or not self.tol > 0:
            raise ValueError("restarts, max_evals and tol must be positive")


def qaoa_state(cost: IsingCost, angles: Angles) -> QuantumState:
    if cost.n < 1:
        raise ValueError("QAOA needs at least one qubit")
    state = uniform_state(cost.n)
    amps = state.amplitudes
    for g, b in zip(angles.gammas, angles.betas):
        _kernels.apply_phase(amps, *cost.levels, g)
        _kernels.apply_mixer(amps, cost.n, b)
    return state


def energy_function(cost: IsingCost, p: int):
    """Fast ``angles-vector -> <C>`` closure sharing one amplitude buffer."""
    levels, inverse = cost.levels
    buf = np.empty(1 << cost.n, dtype=np.complex128)
    n = cost.n

    def energy(vec: np.ndarray) -> float:
        vec = np.asarray(vec, dtype=np.float64)
        return _kernels.qaoa_energy(levels, inverse, n, vec[:p].copy(), vec[p:].copy(), buf)

    return energy


def optimize_angles(
    cost: IsingCost, p: int, config: OptimizerConfig | None = None
) -> tuple[Angles, float]:
    """Minimize ``<C>`` over QAOA-p angles with multi-start Nelder-Mead."""
    if p < 1:
        raise ValueError("p must be >= 1")
    config = config or OptimizerConfig()
    rng = np.random.default_rng(config.seed)
    energy = energy_function(cost, p)
    best_x, best_val = None, np.inf
    for _ in range(config.restarts):
        x0 = np.concatenate(
            [rng.uniform(*config.gamma_range, size=p), rng.uniform(*config.beta_range, size=p)]
        )
        res = minimize(
            energy,
            x0,
            method="Nelder-Mead",
            options={"maxfev": config.max_evals, "xatol": config.tol, "fatol": config.tol},
        )
        val = energy(res.x)
        if val < best_val:
            best_x, best_val = res.x, val
    angles = Angles.from_vector(best_x)
    return angles, expect_cost(qaoa_state(cost, angles), cost)


def report_from_state(state: QuantumState, cost: IsingCost) -> CorrelatorReport:
    pairs = cost.pairs
    zz = zz_expectations(state, pairs) if pairs else np.zeros(0)
    return CorrelatorReport(
        z=z_expectations(state),
        zz={pair: float(v) for pair, v in zip(pairs, zz)},
        cost_expectation=expect_cost(state, cost),
    )


def correlators(cost: IsingCost, angles: Angles) -> CorrelatorReport:
    return report_from_state(qaoa_state(cost, angles), cost)
