"""Linear-schedule quantum annealing by second-order split-step evolution.

``H(t) = s(t) C + (1 - s(t)) B`` with ``B = -sum_j X_j`` and the evolution
starting in the uniform superposition (the ground state of ``B``). With the
default ``"forward"`` orientation ``s(t) = t / tau`` so the run ends on ``C``;
``"reverse"`` uses ``s(t) = 1 - t / tau`` literally.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from . import _kernels
from .ising import IsingCost
from .qaoa import CorrelatorReport, report_from_state
from .statevector import MAX_QUBITS, QuantumState, uniform_state

DEFAULT_DT = 0.001


@dataclass(frozen=True)
class AnnealSchedule:
    """Total time ``tau`` split into ``steps`` equal Strang steps.

    ``steps=None`` picks ``ceil(tau / DEFAULT_DT)``.
    """

    tau: float
    steps: int | None = None
    orientation: str = "forward"

    def __post_init__(self):
        if not self.tau > 0:
            raise ValueError("tau must be positive")
        if self.steps is None:
            object.__setattr__(self, "steps", max(1, math.ceil(self.tau / DEFAULT_DT)))
        if self.steps < 1:
            raise ValueError("steps must be >= 1")
        if self.orientation not in ("forward", "reverse"):
            raise ValueError(f"unknown orientation {self.orientation!r}")

    @property
    def dt(self) -> float:
        return self.tau / self.steps

    def weight(self, t: float) -> float:
        """Weight of the cost Hamiltonian at time ``t``."""
        frac = t / self.tau
        return frac if self.orientation == "forward" else 1.0 - frac

    def refined(self, factor: int = 2) -> "AnnealSchedule":
        return AnnealSchedule(self.tau, self.steps * factor, self.orientation)


def anneal(cost: IsingCost, schedule: AnnealSchedule, cap: int = MAX_QUBITS) -> QuantumState:
    if cost.n > cap:
        raise ValueError(f"{cost.n} qubits exceeds the cap of {cap}")
    state = uniform_state(cost.n, cap)
    # per step: mixer(dt/2 (1-s)), phase(dt s), mixer(dt/2 (1-s)) with s at the midpoint
    _kernels.anneal_evolve(
        state.amplitudes,
        cost.n,
        *cost.levels,
        float(schedule.tau),
        int(schedule.steps),
        schedule.orientation == "forward",
    )
    return state


def anneal_correlators(cost: IsingCost, schedule: AnnealSchedule) -> CorrelatorReport:
    return report_from_state(anneal(cost, schedule), cost)
