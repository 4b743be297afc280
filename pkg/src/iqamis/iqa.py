"""Iterative quantum algorithms for (weighted) MIS.

Each iteration asks a backend for correlators of the current reduced problem,
lets a selection rule pick a vertex or edge, shrinks the problem accordingly
and records the decision. When the problem becomes trivial (or small enough
for exhaustive search) the remainder is solved exactly and the recorded
decisions are unwound into an assignment of the original vertices.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Protocol, Sequence

import numpy as np

from .analytic import mimic_backend, mimic_optimize_angles
from .annealing import AnnealSchedule, anneal_correlators
from .classical import brute_force, correct, is_independent
from .graph import Graph
from .ising import IsingCost, bits_to_spins, encode_mis, minimize_exhaustive
from .qaoa import Angles, CorrelatorReport, OptimizerConfig, correlators, optimize_angles

TIE_TOL = 1e-9


class Rule(str, enum.Enum):
    MINQ = "MINQ"
    MAXQ = "MAXQ"
    MMQ = "MMQ"
    WMMQ = "WMMQ"
    EDGE_ANTI = "EDGE_ANTI"
    EDGE_CORR = "EDGE_CORR"

    @property
    def uses_pairs(self) -> bool:
        return self in (Rule.EDGE_ANTI, Rule.EDGE_CORR)


# -- backends ----------------------------------------------------------------


class Backend(Protocol):
    def report(
        self, cost: IsingCost, graph: Graph | None, lam: float, seed: int
    ) -> CorrelatorReport: ...


@dataclass(frozen=True)
class QaoaBackend:
    """Statevector QAOA-p with angles re-optimized from scratch on every call."""

    p: int = 1
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    supports_pairs = True

    def report(self, cost, graph, lam, seed):
        angles, _ = optimize_angles(cost, self.p, replace(self.optimizer, seed=seed))
        return correlators(cost, angles)


@dataclass(frozen=True)
class AnnealBackend:
    schedule: AnnealSchedule
    supports_pairs = True

    def report(self, cost, graph, lam, seed):
        return anneal_correlators(cost, self.schedule)


@dataclass(frozen=True)
class MimicBackend:
    """Closed-form p=1 correlators; fixed ``angles`` or optimized per call."""

    angles: Angles | None = None
    optimizer: OptimizerConfig = field(default_factory=OptimizerConfig)
    supports_pairs = False

    def report(self, cost, graph, lam, seed):
        if graph is None:
            raise ValueError("the mimic backend needs a pure MIS instance")
        angles = self.angles
        if angles is None:
            angles, _ = mimic_optimize_angles(graph, lam, replace(self.optimizer, seed=seed))
        return mimic_backend(graph, lam, angles)


# -- configuration and records -------------------------------------------------


@dataclass(frozen=True)
class IqaConfig:
    backend: Backend = field(default_factory=QaoaBackend)
    rule: Rule = Rule.MINQ
    lam: float = 1.0
    brute_force_threshold: int = 0
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "rule", Rule(self.rule))
        if not self.lam > 0:
            raise ValueError("penalty weight must be positive")
        if self.brute_force_threshold < 0:
            raise ValueError("brute_force_threshold must be >= 0")
        if self.rule.uses_pairs and not getattr(self.backend, "supports_pairs", True):
            raise ValueError(f"{self.rule.value} needs a backend with exact pair correlators")


@dataclass(frozen=True)
class IqaStep:
    """One decision. ``assignment`` maps original vertex ids to fixed bits;
    for ``anti-correlate`` steps ``pair = (eliminated, kept)`` instead."""

    index: int
    kind: str
    vertices: tuple[int, ...]
    assignment: dict[int, int]
    size_after: int
    report_digest: str = ""
    deviation: bool | None = None
    degenerate: bool = False  # chosen by the tie rule among zero-valued keys
    pair: tuple[int, int] | None = None
    terminal_value: float | None = None


@dataclass
class IqaTrace:
    n: int
    steps: list[IqaStep] = field(default_factory=list)

    @property
    def complete(self) -> bool:
        return bool(self.steps) and self.steps[-1].kind == "terminal-brute-force"

    @property
    def deviation_seen(self) -> bool:
        return any(s.deviation for s in self.steps)


@dataclass
class IqaResult:
    bitstring: tuple[int, ...]
    set_value: float
    feasible: bool
    corrected_bitstring: tuple[int, ...]
    corrected_value: float
    trace: IqaTrace


# -- helpers -------------------------------------------------------------------


def deviation_audit(rule: Rule, graph: Graph, v: int) -> bool | None:
    """Could the classical greedy rule not have picked vertex ``v``?

    ``None`` for rules without a classical counterpart.
    """
    rule = Rule(rule)
    if rule is Rule.MINQ:
        return graph.degree(v) != min(graph.degrees)
    if rule is Rule.MAXQ:
        return graph.degree(v) != max(graph.degrees)
    return None


def _select(keys: Sequence[float], labels: Sequence, maximize: bool) -> tuple[int, bool]:
    """Best key with ties (within ``TIE_TOL``) going to the lowest original label.

    The second value flags a degenerate selection: several candidates tied at
    a key of zero, so the tie rule alone made the choice.
    """
    keys = np.asarray(keys, dtype=float)
    best = keys.max() if maximize else keys.min()
    near = np.flatnonzero(np.abs(keys - best) <= TIE_TOL * max(1.0, abs(best)))
    pick = int(min(near, key=lambda k: labels[k]))
    return pick, bool(near.size > 1 and abs(best) <= TIE_TOL)


def _argbest(keys: Sequence[float], labels: Sequence, maximize: bool) -> int:
    return _select(keys, labels, maximize)[0]


def _fix_many(cost: IsingCost, values: dict[int, int]) -> IsingCost:
    for q in sorted(values, reverse=True):
        cost = cost.fix_spin(q, values[q])
    return cost


def _step_seed(seed: int, index: int) -> int:
    return int(np.random.SeedSequence([seed, index]).generate_state(1)[0])


def back_propagate(trace: IqaTrace, terminal: dict[int, int] | None = None) -> tuple[int, ...]:
    """Unwind the recorded decisions into a full bit string (original labels)."""
    if not trace.complete and terminal is None:
        raise ValueError("trace has no terminal step")
    bits: dict[int, int] = {}
    for step in trace.steps:
        bits.update(step.assignment)
    if terminal is not None:
        bits.update(terminal)
    for step in reversed(trace.steps):
        if step.kind == "anti-correlate":
            gone, kept = step.pair
            bits[gone] = 1 - bits[kept]
    missing = set(range(trace.n)) - set(bits)
    if missing:
        raise ValueError(f"trace leaves vertices {sorted(missing)} unassigned")
    return tuple(bits[v] for v in range(trace.n))


# -- main loop -----------------------------------------------------------------


def run_iqa(g: Graph, config: IqaConfig | None = None) -> IqaResult:
    config = config or IqaConfig()
    if g.n == 0:
        raise ValueError("graph must be nonempty")
    rule, lam = config.rule, config.lam
    graph: Graph | None = g
    cost = encode_mis(g, lam)
    labels = list(range(g.n))
    trace = IqaTrace(g.n)

    while True:
        idx = len(trace.steps)
        trivial = (
            cost.n <= config.brute_force_threshold
            or (graph is not None and graph.m == 0)
            or (graph is None and not cost.couplings)
        )
        if trivial:
            trace.steps.append(_terminal_step(idx, cost, graph, labels))
            break

        report = config.backend.report(cost, graph, lam, _step_seed(config.seed, idx))
        digest = report.digest()

        if rule is Rule.EDGE_ANTI:
            pairs = list(report.zz)
            labelled = [(labels[a], labels[b]) for a, b in pairs]
            pick, degenerate = _select([report.zz[p] for p in pairs], labelled, maximize=False)
            kept, gone = pairs[pick]
            cost = cost.substitute_anticorrelated(gone, kept)
            pair = (labels[gone], labels[kept])
            del labels[gone]
            graph = None
            trace.steps.append(
                IqaStep(
                    idx, "anti-correlate", pair, {}, cost.n, digest,
                    degenerate=degenerate, pair=pair,
                )
            )
            continue

        deviation = None
        if rule is Rule.EDGE_CORR:
            pairs = list(graph.edges)
            labelled = [(labels[a], labels[b]) for a, b in pairs]
            pick, degenerate = _select([report.zz[e] for e in pairs], labelled, maximize=True)
            a, b = pairs[pick]
            fixed = {a: -1, b: -1}
            step_kind = "fix-off"
        else:
            z = np.asarray(report.z)
            if rule is Rule.MINQ:
                v, degenerate = _select(z, labels, maximize=True)
                on = True
            elif rule is Rule.MAXQ:
                v, degenerate = _select(z, labels, maximize=False)
                on = False
            else:
                keys = z * np.asarray(graph.weights) if rule is Rule.WMMQ else z
                v, degenerate = _select(np.abs(keys), labels, maximize=True)
                # a zero winner counts as non-negative and is flagged
                on = bool(keys[v] >= -TIE_TOL)
                degenerate = degenerate or bool(abs(keys[v]) <= TIE_TOL)
            deviation = deviation_audit(rule, graph, v)
            if on:
                fixed = {v: 1, **{u: -1 for u in graph.neighbors(v)}}
                step_kind = "fix-on"
            else:
                fixed = {v: -1}
                step_kind = "fix-off"

        cost = _fix_many(cost, fixed)
        graph, remap = graph.delete_vertices(fixed)
        assignment = {labels[q]: int(s > 0) for q, s in fixed.items()}
        touched = tuple(sorted(assignment))
        labels = [labels[old] for old in sorted(remap, key=remap.get)]
        trace.steps.append(
            IqaStep(
                idx, step_kind, touched, assignment, cost.n, digest,
                deviation=deviation, degenerate=degenerate,
            )
        )

    bits = back_propagate(trace)
    value = float(sum(w for w, b in zip(g.weights, bits) if b))
    feasible = is_independent(g, bits)
    fixed_bits = bits if feasible else correct(g, lam, bits, seed=config.seed)
    fixed_value = float(sum(w for w, b in zip(g.weights, fixed_bits) if b))
    return IqaResult(bits, value, feasible, fixed_bits, fixed_value, trace)


def _terminal_step(idx: int, cost: IsingCost, graph: Graph | None, labels: list[int]) -> IqaStep:
    if graph is not None:
        if graph.m == 0:
            local = [1] * graph.n
        else:
            local = list(brute_force(graph).bitstring)
    elif not cost.couplings:
        # independent spins: each settles against its own field (0 on a zero field)
        local = [1 if h < 0 else 0 for h in cost.fields]
    else:
        spins, _ = minimize_exhaustive(cost)
        local = [int(s > 0) for s in spins]
    value = cost.evaluate(bits_to_spins(local)) if cost.n else cost.constant
    assignment = {labels[q]: b for q, b in enumerate(local)}
    return IqaStep(
        idx, "terminal-brute-force", tuple(sorted(assignment)), assignment, 0,
        terminal_value=value,
    )
