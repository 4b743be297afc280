"""Time the numba and numpy kernel paths side by side.

    python3 benchmarks/bench_kernels.py [--n 12] [--repeat 20]

Each kernel is called once before timing so numba compilation is excluded.
The numpy column is always available; the numba column needs numba and
``IQAMIS_NUMBA`` unset or truthy.
"""

from __future__ import annotations

import argparse
import timeit

import numpy as np

from iqamis import _kernels as K
from iqamis.graph import default_edge_probability, er_connected, with_uniform_weights
from iqamis.ising import encode_mis


def cases(n: int):
    g = with_uniform_weights(er_connected(n, default_edge_probability(n), seed=1), 1, 2, seed=2)
    cost = encode_mis(g, 1.0)
    pi, pj, pv = cost._pair_arrays
    fields = np.asarray(cost.fields, dtype=np.float64)
    levels, inverse = cost.levels
    amps = np.full(1 << n, 2 ** (-n / 2), dtype=np.complex128)
    probs = np.abs(amps) ** 2
    buf = np.empty_like(amps)
    gam, bet = np.array([0.3, 0.5]), np.array([0.4, 0.2])
    adj = g.adjacency_masks
    w = np.asarray(g.weights, dtype=np.float64)
    return {
        "cost_diagonal": lambda f: f(n, cost.constant, fields, pi, pj, pv),
        "apply_phase": lambda f: f(amps, levels, inverse, 0.1),
        "apply_mixer": lambda f: f(amps, n, 0.1),
        "z_expectations": lambda f: f(probs, n),
        "zz_expectations": lambda f: f(probs, pi, pj),
        "qaoa_energy(p=2)": lambda f: f(levels, inverse, n, gam, bet, buf),
        "anneal_evolve(100 steps)": lambda f: f(amps.copy(), n, levels, inverse, 0.1, 100, True),
        "mwis_bruteforce": lambda f: f(adj, w),
    }


def main(argv=None):
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=12)
    ap.add_argument("--repeat", type=int, default=20)
    args = ap.parse_args(argv)
    print(f"n={args.n}, numba active: {K.USE_NUMBA}")
    print(f"{'kernel':<26}{'numpy [us]':>14}{'numba [us]':>14}{'speedup':>10}")
    for name, call in cases(args.n).items():
        base = name.split("(")[0]
        row = []
        for suffix in ("_np", "_nb"):
            fn = getattr(K, base + suffix, None)
            if fn is None:
                row.append(float("nan"))
                continue
            call(fn)
            t = min(timeit.repeat(lambda: call(fn), number=1, repeat=args.repeat))
            row.append(t * 1e6)
        print(f"{name:<26}{row[0]:>14.1f}{row[1]:>14.1f}{row[0] / row[1]:>10.1f}")


if __name__ == "__main__":
    main()
