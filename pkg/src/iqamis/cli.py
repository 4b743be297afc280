"""Command line entry point: ``iqamis {gen,solve,oracle,verify,experiment}``."""

from __future__ import annotations

import argparse
import json
import logging
import sys
from collections import Counter

from . import harness
from .classical import brute_force
from .graph import GraphFormatError, default_edge_probability, er_connected, read_graph, with_uniform_weights, write_graph
from .iqa import run_iqa
from .verify import SUITES, run_suite


def _u64(text: str) -> int:
    value = int(text, 0)
    if not 0 <= value < 1 << 64:
        raise argparse.ArgumentTypeError("seed must fit in 64 unsigned bits")
    return value


def _q(text: str) -> float | None:
    if text == "auto":
        return None
    q = float(text)
    if not 0.0 <= q <= 1.0:
        raise argparse.ArgumentTypeError("q must lie in [0, 1]")
    return q


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="iqamis", description=__doc__)
    parser.add_argument("-v", "--verbose", action="store_true", help="log progress to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    gen = sub.add_parser("gen", help="write a connected random graph")
    gen.add_argument("--n", type=int, required=True)
    gen.add_argument("--q", type=_q, default=None, help="edge probability or 'auto' (1.2 ln n / n)")
    gen.add_argument("--weighted", action="store_true")
    gen.add_argument("--wlo", type=float, default=1.0)
    gen.add_argument("--whi", type=float, default=2.0)
    gen.add_argument("--seed", type=_u64, default=0)
    gen.add_argument("--out", required=True)

    solve = sub.add_parser("solve", help="run one algorithm on a graph file")
    solve.add_argument("--graph", required=True)
    solve.add_argument("--alg", required=True, help="MIN, MAX, WMIN, WMAX, QAOA, MINQ, MAXQ, "
                       "MMQ, WMMQ, EDGE_ANTI, EDGE_CORR; append ':mimic' for the closed-form backend")
    depth = solve.add_mutually_exclusive_group()
    depth.add_argument("--p", type=int, default=None)
    depth.add_argument("--tau", type=float, default=None)
    solve.add_argument("--lambda", dest="lam", type=float, default=1.0)
    solve.add_argument("--seed", type=_u64, default=0)
    solve.add_argument("--json", action="store_true")

    oracle = sub.add_parser("oracle", help="exact maximum-weight independent set")
    oracle.add_argument("--graph", required=True)

    verify = sub.add_parser("verify", help="run an oracle-equivalence suite")
    verify.add_argument("--suite", required=True, choices=SUITES)

    exp = sub.add_parser("experiment", help="run a seeded sweep and write CSV files")
    exp.add_argument("--config", required=True)
    exp.add_argument("--out-dir", required=True)
    return parser


def _cmd_gen(args) -> int:
    q = default_edge_probability(args.n) if args.q is None else args.q
    g = er_connected(args.n, q, seed=args.seed)
    if args.weighted:
        g = with_uniform_weights(g, args.wlo, args.whi, seed=[args.seed, 1])
    write_graph(g, args.out, weighted=args.weighted)
    print(f"wrote {args.out}: n={g.n} m={g.m} digest={g.digest()}")
    return 0


def _cmd_solve(args) -> int:
    g = read_graph(args.graph)
    spec = harness.AlgorithmSpec.parse(args.alg)
    if args.p is not None or args.tau is not None:
        spec = harness.AlgorithmSpec.parse(
            f"{spec.name}:p={args.p}" if args.p is not None else f"{spec.name}:tau={args.tau}"
        )
    config = harness.ExperimentConfig(algorithms=(spec.label,), lam=args.lam, n_min=1, n_max=24)
    out: dict = {"algorithm": spec.label, "n": g.n}
    if spec.name == harness.QAOA_DIRECT:
        opt = brute_force(g).set_value
        value, _, _ = harness.run_algorithm(spec, g, config, args.seed, opt)
        out.update(expected_value=value, opt_value=opt, ratio=value / opt)
    elif spec.name in harness.CLASSICAL:
        res = harness.CLASSICAL[spec.name](g)
        out.update(
            set=[v for v, b in enumerate(res.bitstring) if b],
            value=res.set_value,
            feasible=res.feasible,
            trace={"steps": len(res.trace), "kinds": dict(Counter(k for k, *_ in res.trace))},
        )
    else:
        res = run_iqa(g, harness.iqa_config(spec, config, args.seed))
        out.update(
            set=[v for v, b in enumerate(res.corrected_bitstring) if b],
            value=res.corrected_value,
            feasible=res.feasible,
            raw_set=[v for v, b in enumerate(res.bitstring) if b],
            raw_value=res.set_value,
            trace={
                "steps": len(res.trace.steps),
                "kinds": dict(Counter(s.kind for s in res.trace.steps)),
                "deviation_seen": res.trace.deviation_seen,
                "degenerate_steps": sum(s.degenerate for s in res.trace.steps),
            },
        )
    if args.json:
        print(json.dumps(out, sort_keys=True))
    else:
        for key, val in out.items():
            print(f"{key}: {val}")
    return 0


def _cmd_oracle(args) -> int:
    g = read_graph(args.graph)
    res = brute_force(g)
    print(f"set: {[v for v, b in enumerate(res.bitstring) if b]}")
    print(f"value: {res.set_value:g}")
    return 0


def _cmd_verify(args) -> int:
    res = run_suite(args.suite)
    print(res)
    return 0 if res.passed else 1


def _cmd_experiment(args) -> int:
    config = harness.load_config(args.config)
    result = harness.run_experiment(config, args.out_dir)
    errors = sum(s.errors for s in result.summary)
    for s in result.summary:
        print(f"{s.algorithm:>16} n={s.n:<3} mean={s.mean_ratio:.4f} sem={s.sem:.4f} errors={s.errors}")
    print(f"wrote {args.out_dir}/rows.csv, summary.csv, timings.csv, metadata.json")
    return 0 if not errors else 3


COMMANDS = {
    "gen": _cmd_gen,
    "solve": _cmd_solve,
    "oracle": _cmd_oracle,
    "verify": _cmd_verify,
    "experiment": _cmd_experiment,
}


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.INFO if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        return COMMANDS[args.command](args)
    except (GraphFormatError, ValueError, RuntimeError, OSError) as exc:
        print(f"iqamis {args.command}: error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
