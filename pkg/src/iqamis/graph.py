"""Vertex-weighted simple undirected graphs and seeded random instances.

Graphs are immutable. Deletions return a new graph with compacted vertex ids
together with a ``{old_id: new_id}`` table for the surviving vertices.
"""

from __future__ import annotations

import hashlib
import math
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from pathlib import Path
from typing import Iterable

import numpy as np


class GraphFormatError(ValueError):
    """Raised when a graph file does not follow the ``p mis`` text format."""


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices ``0..n-1`` with positive weights.

    Parameters
    ----------
    n : int
        Number of vertices.
    edges : iterable of pairs
        Unordered vertex pairs. Stored normalized as sorted ``(u, v)`` with
        ``u < v``. Self-loops and duplicate edges are rejected.
    weights : sequence of float, optional
        Per-vertex reward, defaults to all ones.
    """

    n: int
    edges: tuple[tuple[int, int], ...] = ()
    weights: tuple[float, ...] = field(default=None)  # type: ignore[assignment]

    def __post_init__(self):
        n = int(self.n)
        if n < 0:
            raise ValueError(f"vertex count must be non-negative, got {n}")
        seen = set()
        for e in self.edges:
            u, v = (int(x) for x in e)
            if u == v:
                raise ValueError(f"self-loop on vertex {u}")
            if not (0 <= u < n and 0 <= v < n):
                raise ValueError(f"edge ({u}, {v}) out of range for n={n}")
            key = (u, v) if u < v else (v, u)
            if key in seen:
                raise ValueError(f"duplicate edge {key}")
            seen.add(key)
        if self.weights is None:
            weights = (1.0,) * n
        else:
            weights = tuple(float(w) for w in self.weights)
        if len(weights) != n:
            raise ValueError(f"expected {n} weights, got {len(weights)}")
        if any(not w > 0 for w in weights):
            raise ValueError("all vertex weights must be > 0")
        object.__setattr__(self, "n", n)
        object.__setattr__(self, "edges", tuple(sorted(seen)))
        object.__setattr__(self, "weights", weights)

    # -- structure --------------------------------------------------------

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def _adj(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def adjacency_masks(self) -> np.ndarray:
        masks = np.zeros(self.n, dtype=np.int64)
        for u, v in self.edges:
            masks[u] |= 1 << v
            masks[v] |= 1 << u
        return masks

    @property
    def is_weighted(self) -> bool:
        return any(w != 1.0 for w in self.weights)

    def _check(self, v: int) -> int:
        if not 0 <= v < self.n:
            raise IndexError(f"vertex {v} out of range for n={self.n}")
        return v

    def neighbors(self, v: int) -> frozenset[int]:
        return self._adj[self._check(v)]

    def degree(self, v: int) -> int:
        return len(self._adj[self._check(v)])

    @cached_property
    def degrees(self) -> tuple[int, ...]:
        return tuple(len(s) for s in self._adj)

    @property
    def max_degree(self) -> int:
        return max(self.degrees, default=0)

    def has_edge(self, u: int, v: int) -> bool:
        return self._check(v) in self._adj[self._check(u)]

    def edge_triangles(self, u: int, v: int) -> int:
        """Number of triangles containing the edge ``{u, v}``."""
        if not self.has_edge(u, v):
            raise ValueError(f"({u}, {v}) is not an edge")
        return len(self._adj[u] & self._adj[v])

    def is_connected(self) -> bool:
        if self.n <= 1:
            return True
        seen = {0}
        queue = deque([0])
        while queue:
            u = queue.popleft()
            for w in self._adj[u]:
                if w not in seen:
                    seen.add(w)
                    queue.append(w)
        return len(seen) == self.n

    # -- mutation (returns new graphs) -------------------------------------

    def delete_vertices(self, removed: Iterable[int]) -> tuple["Graph", dict[int, int]]:
        gone = {self._check(int(v)) for v in removed}
        keep = [v for v in range(self.n) if v not in gone]
        remap = {old: new for new, old in enumerate(keep)}
        edges = [(remap[u], remap[v]) for u, v in self.edges if u in remap and v in remap]
        weights = [self.weights[v] for v in keep]
        return Graph(len(keep), edges, weights), remap

    def delete_vertex(self, v: int) -> tuple["Graph", dict[int, int]]:
        return self.delete_vertices([v])

    def delete_closed_neighborhood(self, v: int) -> tuple["Graph", dict[int, int]]:
        return self.delete_vertices({v} | self.neighbors(v))

    # -- serialization -----------------------------------------------------

    def to_text(self, weighted: bool | None = None) -> str:
        if weighted is None:
            weighted = self.is_weighted
        head = f"p mis {self.n} {self.m}" + (" weighted" if weighted else "")
        lines = [head]
        if weighted:
            lines.append("w " + " ".join(repr(w) for w in self.weights))
        lines.extend(f"e {u} {v}" for u, v in self.edges)
        return "\n".join(lines) + "\n"

    def digest(self) -> str:
        return hashlib.sha256(self.to_text(weighted=True).encode()).hexdigest()[:16]

    def __repr__(self) -> str:
        return f"Graph(n={self.n}, m={self.m}, weighted={self.is_weighted})"


def parse_graph(text: str) -> Graph:
    """Parse the ``p mis <n> <m> [weighted]`` text format."""
    header = None
    weights = None
    edges: list[tuple[int, int]] = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        tok = line.split()
        try:
            if tok[0] == "p":
                if header is not None or len(tok) not in (4, 5) or tok[1] != "mis":
                    raise GraphFormatError(f"line {lineno}: bad header {raw!r}")
                if len(tok) == 5 and tok[4] != "weighted":
                    raise GraphFormatError(f"line {lineno}: unknown flag {tok[4]!r}")
                header = (int(tok[2]), int(tok[3]), len(tok) == 5)
            elif header is None:
                raise GraphFormatError(f"line {lineno}: content before header")
            elif tok[0] == "w":
                if not header[2] or weights is not None:
                    raise GraphFormatError(f"line {lineno}: unexpected weight line")
                weights = [float(x) for x in tok[1:]]
            elif tok[0] == "e":
                if len(tok) != 3:
                    raise GraphFormatError(f"line {lineno}: bad edge line {raw!r}")
                u, v = int(tok[1]), int(tok[2])
                if u >= v:
                    raise GraphFormatError(f"line {lineno}: edge endpoints must satisfy u < v")
                edges.append((u, v))
            else:
                raise GraphFormatError(f"line {lineno}: unknown record {tok[0]!r}")
        except ValueError as exc:
            if isinstance(exc, GraphFormatError):
                raise
            raise GraphFormatError(f"line {lineno}: {exc}") from exc
    if header is None:
        raise GraphFormatError("missing 'p mis' header")
    n, m, weighted = header
    if weighted and weights is None:
        raise GraphFormatError("weighted graph without a 'w' line")
    if len(edges) != m:
        raise GraphFormatError(f"header declares {m} edges, found {len(edges)}")
    try:
        return Graph(n, edges, weights)
    except ValueError as exc:
        raise GraphFormatError(str(exc)) from exc


def read_graph(path: str | Path) -> Graph:
    return parse_graph(Path(path).read_text())


def write_graph(g: Graph, path: str | Path, weighted: bool | None = None) -> None:
    Path(path).write_text(g.to_text(weighted=weighted))


# -- random instances --------------------------------------------------------


def default_edge_probability(n: int) -> float:
    """``1.2 ln(n) / n``, the edge density used throughout the experiments."""
    return 1.2 * math.log(n) / n if n > 1 else 0.0


def er_connected(n: int, q: float, seed=None, max_attempts: int = 10_000) -> Graph:
    """Connected Erdős–Rényi G(n, q) graph by rejection sampling.

    Every candidate draws each of the ``n(n-1)/2`` edges independently with
    probability ``q`` (pairs visited in lexicographic order); candidates are
    redrawn until one is connected.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if not 0.0 <= q <= 1.0:
        raise ValueError(f"edge probability must lie in [0, 1], got {q}")
    rng = np.random.default_rng(seed)
    iu, ju = np.triu_indices(n, k=1)
    for _ in range(max_attempts):
        keep = rng.random(iu.shape[0]) < q
        g = Graph(n, list(zip(iu[keep].tolist(), ju[keep].tolist())))
        if g.is_connected():
            return g
    raise RuntimeError(
        f"no connected graph after {max_attempts} attempts (n={n}, q={q})"
    )


def with_uniform_weights(g: Graph, lo: float, hi: float, seed=None) -> Graph:
    if lo > hi:
        raise ValueError("lo must not exceed hi")
    if lo <= 0:
        raise ValueError("weights must be positive")
    if lo == hi:
        return Graph(g.n, g.edges, [float(lo)] * g.n)
    rng = np.random.default_rng(seed)
    return Graph(g.n, g.edges, rng.uniform(lo, hi, size=g.n).tolist())


# -- named graphs used by tests and the CLI ----------------------------------


def complete_graph(n: int) -> Graph:
    return Graph(n, [(u, v) for u in range(n) for v in range(u + 1, n)])


def path_graph(n: int) -> Graph:
    return Graph(n, [(i, i + 1) for i in range(n - 1)])


def cycle_graph(n: int) -> Graph:
    return Graph(n, [(i, (i + 1) % n) for i in range(n)])


def star_graph(leaves: int) -> Graph:
    """Star with center 0 and ``leaves`` leaves."""
    return Graph(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def petersen_graph() -> Graph:
    outer = [(i, (i + 1) % 5) for i in range(5)]
    spokes = [(i, i + 5) for i in range(5)]
    inner = [(5 + i, 5 + (i + 2) % 5) for i in range(5)]
    return Graph(10, outer + spokes + inner)
