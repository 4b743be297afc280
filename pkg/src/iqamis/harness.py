"""Seeded experiment sweeps: instance generation, per-algorithm runs, CSV output.

Every algorithm in a sweep sees the same graph for a given ``(n, index)``
because instance seeds depend only on ``(master seed, n, index)``. The rows
file holds no wall-clock data so that repeated runs are byte-identical;
timings go to a separate file.
"""

from __future__ import annotations

import csv
import io
import json
import logging
import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field, fields
from pathlib import Path
from typing import Sequence

import numpy as np

from . import __version__, _kernels
from .annealing import AnnealSchedule
from .classical import brute_force, greedy_max, greedy_min, greedy_wmax, greedy_wmin
from .graph import Graph, default_edge_probability, er_connected, with_uniform_weights
from .iqa import AnnealBackend, IqaConfig, MimicBackend, QaoaBackend, Rule, run_iqa
from .ising import encode_mis
from .qaoa import OptimizerConfig, optimize_angles

log = logging.getLogger(__name__)

CLASSICAL = {
    "MIN": greedy_min,
    "MAX": greedy_max,
    "WMIN": greedy_wmin,
    "WMAX": greedy_wmax,
}
QAOA_DIRECT = "QAOA"
ROW_COLUMNS = (
    "algorithm", "n", "instance", "q", "instance_seed", "graph_digest",
    "set_value", "opt_value", "ratio", "feasible", "deviation_seen", "error",
)
SUMMARY_COLUMNS = ("algorithm", "n", "count", "mean_ratio", "sem", "errors")
METRIC_NOTE = (
    "ratio = set weight / optimum weight; for QAOA the numerator is the exact "
    "expectation of r(x) - 2 lam p(x) in the optimized QAOA state"
)


# -- algorithm tokens ------------------------------------------------------------


@dataclass(frozen=True)
class AlgorithmSpec:
    """Parsed algorithm token such as ``MIN``, ``QAOA:p=2``, ``MINQ:tau=4``
    or ``MMQ:mimic``. Unset depths fall back to the experiment defaults."""

    name: str
    p: int | None = None
    tau: float | None = None
    mimic: bool = False

    @classmethod
    def parse(cls, token: str) -> "AlgorithmSpec":
        name, *opts = token.strip().split(":")
        name = name.upper()
        if name == "QAOA-DIRECT":
            name = QAOA_DIRECT
        if name not in CLASSICAL and name != QAOA_DIRECT and name not in Rule.__members__:
            raise ValueError(f"unknown algorithm {name!r}")
        p = tau = None
        mimic = False
        for opt in opts:
            key, _, val = opt.partition("=")
            if key == "p":
                p = int(val)
            elif key == "tau":
                tau = float(val)
            elif key == "mimic" and not val:
                mimic = True
            else:
                raise ValueError(f"bad option {opt!r} in {token!r}")
        if name in CLASSICAL and (p or tau or mimic):
            raise ValueError(f"{name} takes no backend options")
        if sum(x is not None and x is not False for x in (p, tau, mimic or None)) > 1:
            raise ValueError(f"{token!r}: choose one of p, tau, mimic")
        if name == QAOA_DIRECT and (tau is not None or mimic):
            raise ValueError("QAOA runs on the statevector only")
        if p is not None and p < 1:
            raise ValueError("p must be >= 1")
        return cls(name, p, tau, mimic)

    @property
    def label(self) -> str:
        if self.mimic:
            return f"{self.name}:mimic"
        if self.tau is not None:
            return f"{self.name}:tau={self.tau:g}"
        if self.p is not None:
            return f"{self.name}:p={self.p}"
        return self.name


# -- configuration -----------------------------------------------------------------


@dataclass(frozen=True)
class ExperimentConfig:
    algorithms: tuple[str, ...] = ("MIN", "MINQ:p=1")
    n_min: int = 5
    n_max: int = 12
    instances: int = 200
    q: float | None = None  # None: 1.2 ln(n) / n
    lam: float = 1.0
    weighted: bool = False
    w_lo: float = 1.0
    w_hi: float = 2.0
    p: int = 1
    tau: float = 2.0
    anneal_steps: int | None = None
    seed: int = 0
    restarts: int = 10
    max_evals: int = 2000
    brute_force_threshold: int = 0
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "algorithms", tuple(self.algorithms))
        for token in self.algorithms:
            AlgorithmSpec.parse(token)
        if not 1 <= self.n_min <= self.n_max:
            raise ValueError("need 1 <= n_min <= n_max")
        if self.n_max > 24:
            raise ValueError("n_max exceeds the simulator cap of 24")
        if self.instances < 1 or self.workers < 1:
            raise ValueError("instances and workers must be positive")

    @property
    def specs(self) -> tuple[AlgorithmSpec, ...]:
        return tuple(AlgorithmSpec.parse(t) for t in self.algorithms)

    def edge_probability(self, n: int) -> float:
        return default_edge_probability(n) if self.q is None else self.q

    @property
    def optimizer(self) -> OptimizerConfig:
        return OptimizerConfig(restarts=self.restarts, max_evals=self.max_evals)


_LIST_KEYS = {"algorithms"}
_ALIASES = {"lambda": "lam", "n": None}


def parse_config(text: str) -> ExperimentConfig:
    """Read ``key = value`` lines (``#`` comments, optional quotes, comma lists).

    ``n = 5..12`` sets both bounds; ``q = auto`` selects the default rule.
    """
    types = {f.name: f.type for f in fields(ExperimentConfig)}
    values: dict = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        key, sep, val = line.partition("=")
        key, val = key.strip().lower().replace("-", "_"), val.strip()
        if not sep or not key:
            raise ValueError(f"line {lineno}: expected key = value")
        key = _ALIASES.get(key, key)
        if val[:1] == "[" and val[-1:] == "]":
            val = val[1:-1]
        if key is None:
            lo, _, hi = val.partition("..")
            values["n_min"], values["n_max"] = int(lo), int(hi or lo)
            continue
        if key not in types:
            raise ValueError(f"line {lineno}: unknown key {key!r}")
        parts = [v.strip().strip("'\"") for v in val.split(",")]
        if key in _LIST_KEYS:
            values[key] = tuple(p for p in parts if p)
            continue
        (val,) = parts
        kind = types[key]
        if key == "q":
            values[key] = None if val.lower() == "auto" else float(val)
        elif key == "anneal_steps":
            values[key] = None if val.lower() in ("auto", "none") else int(val)
        elif "bool" in kind:
            if val.lower() not in ("true", "false", "1", "0", "yes", "no"):
                raise ValueError(f"line {lineno}: {key} needs a boolean")
            values[key] = val.lower() in ("true", "1", "yes")
        elif "int" in kind:
            values[key] = int(val)
        else:
            values[key] = float(val)
    return ExperimentConfig(**values)


def load_config(path: str | Path) -> ExperimentConfig:
    return parse_config(Path(path).read_text())


# -- instances and single runs -------------------------------------------------------


def instance_seed(master: int, n: int, index: int) -> int:
    return int(np.random.SeedSequence([master, n, index]).generate_state(1, np.uint64)[0])


def make_instance(config: ExperimentConfig, n: int, index: int) -> tuple[Graph, int]:
    seed = instance_seed(config.seed, n, index)
    g = er_connected(n, config.edge_probability(n), seed=seed)
    if config.weighted:
        g = with_uniform_weights(g, config.w_lo, config.w_hi, seed=[seed, 1])
    return g, seed


def qaoa_direct_ratio(
    g: Graph, p: int, lam: float = 1.0, opt_config: OptimizerConfig | None = None,
    opt_value: float | None = None,
) -> float:
    """Expected penalized set weight of the optimized QAOA-p state over the optimum."""
    _, energy = optimize_angles(encode_mis(g, lam), p, opt_config)
    if opt_value is None:
        opt_value = brute_force(g).set_value
    return (-energy / 2.0) / opt_value


def iqa_config(spec: AlgorithmSpec, config: ExperimentConfig, seed: int) -> IqaConfig:
    if spec.mimic:
        backend = MimicBackend(optimizer=config.optimizer)
    elif spec.tau is not None:
        backend = AnnealBackend(AnnealSchedule(spec.tau, config.anneal_steps))
    else:
        backend = QaoaBackend(spec.p or config.p, config.optimizer)
    return IqaConfig(
        backend=backend,
        rule=Rule[spec.name],
        lam=config.lam,
        brute_force_threshold=config.brute_force_threshold,
        seed=seed % (1 << 63),
    )


def run_algorithm(
    spec: AlgorithmSpec, g: Graph, config: ExperimentConfig, seed: int, opt_value: float
) -> tuple[float, bool | None, bool | None]:
    """Return ``(set_value, feasible, deviation_seen)`` for one algorithm."""
    if spec.name in CLASSICAL:
        res = CLASSICAL[spec.name](g)
        return res.set_value, res.feasible, None
    if spec.name == QAOA_DIRECT:
        opt = OptimizerConfig(config.restarts, config.max_evals, seed=seed % (1 << 63))
        ratio = qaoa_direct_ratio(g, spec.p or config.p, config.lam, opt, opt_value)
        return ratio * opt_value, None, None
    res = run_iqa(g, iqa_config(spec, config, seed))
    dev = res.trace.deviation_seen if spec.name in ("MINQ", "MAXQ") else None
    return res.corrected_value, res.feasible, dev


# -- sweep -------------------------------------------------------------------------------


@dataclass
class ExperimentRow:
    algorithm: str
    n: int
    instance: int
    q: float
    instance_seed: int
    graph_digest: str
    set_value: float | None
    opt_value: float | None
    ratio: float | None
    feasible: bool | None
    deviation_seen: bool | None
    error: str = ""
    wall_time: float = field(default=0.0, compare=False)

    def csv_cells(self) -> list[str]:
        def cell(x):
            if x is None:
                return ""
            if isinstance(x, bool):
                return "1" if x else "0"
            if isinstance(x, float):
                return repr(x)
            return str(x)

        return [cell(getattr(self, c)) for c in ROW_COLUMNS]


@dataclass
class SummaryRow:
    algorithm: str
    n: int
    count: int
    mean_ratio: float
    sem: float
    errors: int


@dataclass
class ExperimentResult:
    config: ExperimentConfig
    rows: list[ExperimentRow]
    summary: list[SummaryRow]

    def ratios(self, algorithm: str, n: int) -> np.ndarray:
        label = AlgorithmSpec.parse(algorithm).label
        return np.array(
            [r.ratio for r in self.rows if r.algorithm == label and r.n == n and not r.error]
        )

    def summary_for(self, algorithm: str, n: int) -> SummaryRow:
        label = AlgorithmSpec.parse(algorithm).label
        for s in self.summary:
            if s.algorithm == label and s.n == n:
                return s
        raise KeyError((algorithm, n))


def sem(values: Sequence[float]) -> float:
    """Standard error of the mean with the sample (n - 1) standard deviation."""
    x = np.asarray(values, dtype=float)
    if x.size < 2:
        return math.nan
    return float(x.std(ddof=1) / math.sqrt(x.size))


def _run_instance(args: tuple[ExperimentConfig, int, int]) -> list[ExperimentRow]:
    config, n, index = args
    g, seed = make_instance(config, n, index)
    q = float(config.edge_probability(n))
    digest = g.digest()
    opt = brute_force(g).set_value
    rows = []
    for spec in config.specs:
        start = time.perf_counter()
        try:
            value, feasible, dev = run_algorithm(spec, g, config, seed, opt)
            row = ExperimentRow(
                spec.label, n, index, q, seed, digest, float(value), float(opt),
                float(value / opt), feasible, dev,
            )
        except Exception as exc:  # a failing instance must not end the sweep
            log.warning("%s n=%d instance=%d failed: %s", spec.label, n, index, exc)
            msg = f"{type(exc).__name__}: {exc}".replace("\n", " ")
            row = ExperimentRow(
                spec.label, n, index, q, seed, digest, None, float(opt), None, None, None, msg
            )
        row.wall_time = time.perf_counter() - start
        rows.append(row)
    return rows


def run_experiment(config: ExperimentConfig, out_dir: str | Path | None = None) -> ExperimentResult:
    tasks = [
        (config, n, i)
        for n in range(config.n_min, config.n_max + 1)
        for i in range(config.instances)
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(config.workers) as pool:
            batches = list(pool.map(_run_instance, tasks, chunksize=4))
    else:
        batches = []
        for k, task in enumerate(tasks):
            batches.append(_run_instance(task))
            if (k + 1) % max(1, len(tasks) // 10) == 0:
                log.info("%d/%d instances done", k + 1, len(tasks))
    order = {spec.label: k for k, spec in enumerate(config.specs)}
    rows = sorted(
        (r for b in batches for r in b), key=lambda r: (order[r.algorithm], r.n, r.instance)
    )
    summary = summarize(rows, order)
    result = ExperimentResult(config, rows, summary)
    if out_dir is not None:
        write_outputs(result, out_dir)
    return result


def summarize(rows: Sequence[ExperimentRow], order: dict[str, int]) -> list[SummaryRow]:
    groups: dict[tuple[str, int], list[ExperimentRow]] = {}
    for r in rows:
        groups.setdefault((r.algorithm, r.n), []).append(r)
    out = []
    for (alg, n), group in sorted(groups.items(), key=lambda kv: (order[kv[0][0]], kv[0][1])):
        ok = [r.ratio for r in group if not r.error]
        mean = float(np.mean(ok)) if ok else math.nan
        out.append(SummaryRow(alg, n, len(ok), mean, sem(ok), len(group) - len(ok)))
    return out


def rows_csv(rows: Sequence[ExperimentRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(ROW_COLUMNS)
    for r in rows:
        w.writerow(r.csv_cells())
    return buf.getvalue()


def summary_csv(summary: Sequence[SummaryRow]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(SUMMARY_COLUMNS)
    for s in summary:
        w.writerow([s.algorithm, s.n, s.count, repr(s.mean_ratio), repr(s.sem), s.errors])
    return buf.getvalue()


def write_outputs(result: ExperimentResult, out_dir: str | Path) -> None:
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    (out / "rows.csv").write_text(rows_csv(result.rows))
    (out / "summary.csv").write_text(summary_csv(result.summary))
    timings = io.StringIO()
    w = csv.writer(timings, lineterminator="\n")
    w.writerow(("algorithm", "n", "instance", "wall_time"))
    for r in result.rows:
        w.writerow((r.algorithm, r.n, r.instance, f"{r.wall_time:.6f}"))
    (out / "timings.csv").write_text(timings.getvalue())
    meta = {
        "package_version": __version__,
        "kernel_backend": _kernels.backend_name(),
        "metric": METRIC_NOTE,
        "sem": "sample standard deviation / sqrt(count)",
        "config": asdict(result.config),
    }
    (out / "metadata.json").write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
