"""Greedy MIS baselines, the exact solver and bit-flip feasibility correction.

Every greedy rule breaks ties by the lowest *original* vertex id; original ids
are carried through deletions with the remap tables returned by
:class:`~iqamis.graph.Graph`.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterator, Sequence

import numpy as np

from . import _kernels
from .graph import Graph
from .ising import penalized_value

BRUTE_FORCE_CAP = 24


@dataclass(frozen=True)
class SolveResult:
    bitstring: tuple[int, ...]
    set_value: float
    feasible: bool
    trace: list[tuple[str, int, str]] = field(default_factory=list, compare=False)

    @classmethod
    def from_bits(cls, g: Graph, bits: Sequence[int], trace=None) -> "SolveResult":
        bits = tuple(int(b) for b in bits)
        value = float(sum(w for w, b in zip(g.weights, bits) if b))
        return cls(bits, value, is_independent(g, bits), list(trace or []))

    @property
    def size(self) -> int:
        return sum(self.bitstring)


def is_independent(g: Graph, bits: Sequence[int]) -> bool:
    return not any(bits[u] and bits[v] for u, v in g.edges)


def _pick(current: Graph, labels: list[int], key: Callable[[int], float]) -> int:
    # smallest key, ties by lowest original label
    return min(range(current.n), key=lambda v: (key(v), labels[v]))


def _greedy_add(g: Graph, key: Callable[[Graph, int], float]) -> SolveResult:
    bits = [0] * g.n
    current, labels = g, list(range(g.n))
    trace = []
    while current.n:
        v = _pick(current, labels, lambda u: key(current, u))
        trace.append(("add", labels[v], current.digest()))
        bits[labels[v]] = 1
        current, remap = current.delete_closed_neighborhood(v)
        labels = [labels[old] for old in sorted(remap, key=remap.get)]
    return SolveResult.from_bits(g, bits, trace)


def _greedy_delete(g: Graph, key: Callable[[Graph, int], float]) -> SolveResult:
    current, labels = g, list(range(g.n))
    trace = []
    while current.m:
        candidates = [v for v in range(current.n) if current.degree(v) > 0]
        v = min(candidates, key=lambda u: (key(current, u), labels[u]))
        trace.append(("delete", labels[v], current.digest()))
        current, remap = current.delete_vertex(v)
        labels = [labels[old] for old in sorted(remap, key=remap.get)]
    bits = [0] * g.n
    for lab in labels:
        bits[lab] = 1
    return SolveResult.from_bits(g, bits, trace)


def greedy_min(g: Graph) -> SolveResult:
    """MIN: add a minimum-degree vertex, delete its closed neighborhood, repeat."""
    return _greedy_add(g, lambda cur, v: cur.degree(v))


def greedy_max(g: Graph) -> SolveResult:
    """MAX: delete a maximum-degree vertex until no edges remain."""
    return _greedy_delete(g, lambda cur, v: -cur.degree(v))


def greedy_wmin(g: Graph) -> SolveResult:
    """Weighted MIN: add the vertex maximizing ``r / (d + 1)``."""
    return _greedy_add(g, lambda cur, v: -cur.weights[v] / (cur.degree(v) + 1))


def greedy_wmax(g: Graph) -> SolveResult:
    """Weighted MAX: delete the non-isolated vertex minimizing ``r / (d (d + 1))``."""
    return _greedy_delete(
        g, lambda cur, v: cur.weights[v] / (cur.degree(v) * (cur.degree(v) + 1))
    )


def brute_force(g: Graph) -> SolveResult:
    """Maximum-weight independent set by exhaustive enumeration.

    Ties between optima go to the lexicographically smallest bit string.
    """
    if g.n > BRUTE_FORCE_CAP:
        raise ValueError(f"brute force limited to {BRUTE_FORCE_CAP} vertices, got {g.n}")
    mask = _kernels.mwis_bruteforce(g.adjacency_masks, np.asarray(g.weights, dtype=np.float64))
    return SolveResult.from_bits(g, [(mask >> v) & 1 for v in range(g.n)])


def min_guarantee(max_degree: int) -> float:
    """Worst-case approximation ratio ``3 / (max_degree + 2)`` of MIN (capped at 1)."""
    return min(1.0, 3.0 / (max_degree + 2))


def correction_path(
    g: Graph, x: Sequence[int], seed=None, policy: str = "uniform"
) -> Iterator[tuple[int, ...]]:
    """Yield ``x`` and each string after successive single bit-flip corrections.

    Each step picks a uniformly random edge with both endpoints set and clears
    one endpoint: a uniformly random one (``"uniform"``) or the lighter one
    (``"lighter"``, ties to the lower id).
    """
    if len(x) != g.n:
        raise ValueError(f"expected {g.n} bits, got {len(x)}")
    if policy not in ("uniform", "lighter"):
        raise ValueError(f"unknown correction policy {policy!r}")
    rng = np.random.default_rng(seed)
    bits = [int(b) for b in x]
    yield tuple(bits)
    while True:
        bad = [(u, v) for u, v in g.edges if bits[u] and bits[v]]
        if not bad:
            return
        u, v = bad[rng.integers(len(bad))]
        if policy == "uniform":
            drop = (u, v)[rng.integers(2)]
        else:
            drop = u if g.weights[u] <= g.weights[v] else v
        bits[drop] = 0
        yield tuple(bits)


def correct(
    g: Graph, lam: float, x: Sequence[int], seed=None, policy: str = "uniform"
) -> tuple[int, ...]:
    """Turn ``x`` into an independent set by repeated single bit flips.

    When ``2 lam >= max weight`` (``lam >= 1/2`` for unit weights) no flip
    lowers ``r(x) - 2 lam p(x)``, so the returned set weighs at least that
    much; this is checked and a violation raises ``AssertionError``.
    """
    *_, final = correction_path(g, x, seed, policy)
    if 2.0 * lam >= max(g.weights, default=0.0):
        bound = penalized_value(g, lam, x)
        value = sum(w for w, b in zip(g.weights, final) if b)
        assert value >= bound - 1e-12, (value, bound)
    return final
