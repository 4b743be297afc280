"""Hot numeric kernels with a numba path and a pure-numpy fallback.

Set ``IQAMIS_NUMBA=0`` in the environment before import to force the numpy
path (numba is then never imported). The numpy variants are always importable
as ``<name>_np`` and, when numba is active, the jitted ones as ``<name>_nb``, so
they can be compared directly; the unsuffixed names are the ones the rest of
the package calls.

Basis convention: bit ``q`` of an amplitude index is qubit ``q`` and a set bit
means spin ``+1``.
"""

from __future__ import annotations

import os

import numpy as np

_FLAG = os.environ.get("IQAMIS_NUMBA", "1").strip().lower()
NUMBA_REQUESTED = _FLAG not in {"0", "false", "off", "no"}

try:
    if not NUMBA_REQUESTED:
        raise ImportError("numba disabled by IQAMIS_NUMBA")
    from numba import njit

    HAS_NUMBA = True
except ImportError:  # pragma: no cover - exercised only without numba
    HAS_NUMBA = False

USE_NUMBA = HAS_NUMBA and NUMBA_REQUESTED


# ---------------------------------------------------------------------------
# numpy reference path
# ---------------------------------------------------------------------------


def _spin_table(n: int) -> np.ndarray:
    idx = np.arange(1 << n, dtype=np.int64)
    bits = (idx[None, :] >> np.arange(n, dtype=np.int64)[:, None]) & 1
    return (2 * bits - 1).astype(np.float64)


def cost_diagonal_np(n, constant, fields, pi, pj, pv):
    diag = np.full(1 << n, float(constant))
    if n == 0:
        return diag
    spins = _spin_table(n)
    diag += fields @ spins
    for a, b, v in zip(pi, pj, pv):
        diag += v * spins[a] * spins[b]
    return diag


def apply_phase_np(amps, levels, inverse, gamma):
    amps *= np.exp(-1j * gamma * levels)[inverse]


def apply_mixer_np(amps, n, beta):
    c = np.cos(beta)
    s = 1j * np.sin(beta)
    for q in range(n):
        view = amps.reshape(-1, 2, 1 << q)
        lo = view[:, 0, :].copy()
        hi = view[:, 1, :]
        view[:, 0, :] = c * lo + s * hi
        view[:, 1, :] = c * hi + s * lo


def z_expectations_np(probs, n):
    out = np.empty(n)
    for q in range(n):
        view = probs.reshape(-1, 2, 1 << q)
        out[q] = view[:, 1, :].sum() - view[:, 0, :].sum()
    return out


def zz_expectations_np(probs, pi, pj):
    n = int(np.log2(probs.shape[0])) if probs.shape[0] > 1 else 0
    spins = _spin_table(n)
    out = np.empty(len(pi))
    for k, (a, b) in enumerate(zip(pi, pj)):
        out[k] = np.dot(spins[a] * spins[b], probs)
    return out


def qaoa_energy_np(levels, inverse, n, gammas, betas, buf):
    buf[:] = 1.0 / np.sqrt(buf.shape[0])
    for g, b in zip(gammas, betas):
        apply_phase_np(buf, levels, inverse, g)
        apply_mixer_np(buf, n, b)
    return float(np.dot(levels[inverse], buf.real**2 + buf.imag**2))


def anneal_evolve_np(amps, n, levels, inverse, tau, steps, forward):
    dt = tau / steps
    for k in range(steps):
        frac = (k + 0.5) / steps
        s = frac if forward else 1.0 - frac
        half = 0.5 * (1.0 - s) * dt
        apply_mixer_np(amps, n, half)
        apply_phase_np(amps, levels, inverse, s * dt)
        apply_mixer_np(amps, n, half)


def mwis_bruteforce_np(adj, weights):
    n = adj.shape[0]
    if n == 0:
        return 0
    shifts = np.arange(n, dtype=np.int64)
    best_val = -np.inf
    best_rev = None
    best_mask = 0
    chunk = 1 << min(n, 16)
    for start in range(0, 1 << n, chunk):
        masks = np.arange(start, start + chunk, dtype=np.int64)
        bits = (masks[:, None] >> shifts[None, :]) & 1
        conflict = np.zeros(chunk, dtype=bool)
        for v in range(n):
            conflict |= (bits[:, v] == 1) & ((masks & adj[v]) != 0)
        values = bits @ weights
        values[conflict] = -np.inf
        top = values.max()
        if top < best_val:
            continue
        cands = masks[values == top]
        # lexicographically smallest bitstring (x_0 most significant)
        rev = (((cands[:, None] >> shifts[None, :]) & 1) << (n - 1 - shifts)[None, :]).sum(axis=1)
        k = int(np.argmin(rev))
        if top > best_val or rev[k] < best_rev:
            best_val, best_rev, best_mask = top, rev[k], int(cands[k])
    return best_mask


# ---------------------------------------------------------------------------
# numba path (plain loops, compiled)
# ---------------------------------------------------------------------------


def _cost_diagonal_loop(n, constant, fields, pi, pj, pv):
    dim = 1 << n
    diag = np.empty(dim)
    m = pi.shape[0]
    for k in range(dim):
        acc = constant
        for q in range(n):
            if (k >> q) & 1:
                acc += fields[q]
            else:
                acc -= fields[q]
        for e in range(m):
            if ((k >> pi[e]) & 1) == ((k >> pj[e]) & 1):
                acc += pv[e]
            else:
                acc -= pv[e]
        diag[k] = acc
    return diag


def _apply_phase_loop(amps, levels, inverse, gamma):
    # one cos/sin per distinct cost value, then a gather
    u = levels.shape[0]
    cr = np.empty(u)
    ci = np.empty(u)
    for i in range(u):
        t = -gamma * levels[i]
        cr[i] = np.cos(t)
        ci[i] = np.sin(t)
    v = amps.view(np.float64)
    for k in range(amps.shape[0]):
        j = inverse[k]
        re = v[2 * k]
        im = v[2 * k + 1]
        v[2 * k] = re * cr[j] - im * ci[j]
        v[2 * k + 1] = re * ci[j] + im * cr[j]


def _apply_mixer_loop(amps, n, beta):
    # (c I + i s X) on each qubit, on the interleaved re/im view
    c = np.cos(beta)
    s = np.sin(beta)
    dim = amps.shape[0]
    v = amps.view(np.float64)
    for q in range(n):
        step = 1 << q
        for base in range(0, dim, 2 * step):
            for k in range(base, base + step):
                a = 2 * k
                b = 2 * (k + step)
                lr = v[a]
                li = v[a + 1]
                hr = v[b]
                hi = v[b + 1]
                v[a] = c * lr - s * hi
                v[a + 1] = c * li + s * hr
                v[b] = c * hr - s * li
                v[b + 1] = c * hi + s * lr


def _z_expectations_loop(probs, n):
    out = np.zeros(n)
    for k in range(probs.shape[0]):
        p = probs[k]
        for q in range(n):
            if (k >> q) & 1:
                out[q] += p
            else:
                out[q] -= p
    return out


def _zz_expectations_loop(probs, pi, pj):
    m = pi.shape[0]
    out = np.zeros(m)
    for k in range(probs.shape[0]):
        p = probs[k]
        for e in range(m):
            if ((k >> pi[e]) & 1) == ((k >> pj[e]) & 1):
                out[e] += p
            else:
                out[e] -= p
    return out


def _qaoa_energy_loop(levels, inverse, n, gammas, betas, buf):
    dim = buf.shape[0]
    amp0 = 1.0 / np.sqrt(dim)
    for k in range(dim):
        buf[k] = amp0
    for layer in range(gammas.shape[0]):
        apply_phase_nb(buf, levels, inverse, gammas[layer])
        apply_mixer_nb(buf, n, betas[layer])
    acc = 0.0
    for k in range(dim):
        a = buf[k]
        acc += levels[inverse[k]] * (a.real * a.real + a.imag * a.imag)
    return acc


def _anneal_evolve_loop(amps, n, levels, inverse, tau, steps, forward):
    dt = tau / steps
    for k in range(steps):
        frac = (k + 0.5) / steps
        s = frac if forward else 1.0 - frac
        half = 0.5 * (1.0 - s) * dt
        apply_mixer_nb(amps, n, half)
        apply_phase_nb(amps, levels, inverse, s * dt)
        apply_mixer_nb(amps, n, half)


def _mwis_bruteforce_loop(adj, weights):
    # depth-first enumeration of independent sets only
    n = adj.shape[0]
    if n == 0:
        return 0
    best_mask = 0
    best_val = 0.0
    stack_mask = np.zeros(n + 1, dtype=np.int64)
    stack_next = np.zeros(n + 1, dtype=np.int64)
    stack_val = np.zeros(n + 1)
    stack_block = np.zeros(n + 1, dtype=np.int64)
    depth = 0
    stack_next[0] = 0
    while depth >= 0:
        v = stack_next[depth]
        if v >= n:
            depth -= 1
            continue
        stack_next[depth] = v + 1
        if (stack_block[depth] >> v) & 1:
            continue
        mask = stack_mask[depth] | (1 << v)
        val = stack_val[depth] + weights[v]
        better = val > best_val
        if val == best_val:
            diff = mask ^ best_mask
            low = diff & (-diff)
            # the candidate wins iff it holds a 0 at the first differing index
            better = (mask & low) == 0
        if better:
            best_val = val
            best_mask = mask
        depth += 1
        stack_mask[depth] = mask
        stack_val[depth] = val
        stack_block[depth] = stack_block[depth - 1] | adj[v] | (1 << v)
        stack_next[depth] = v + 1
    return best_mask


if HAS_NUMBA:
    _jit = njit(cache=True, nogil=True)
    cost_diagonal_nb = _jit(_cost_diagonal_loop)
    apply_phase_nb = _jit(_apply_phase_loop)
    apply_mixer_nb = _jit(_apply_mixer_loop)
    z_expectations_nb = _jit(_z_expectations_loop)
    zz_expectations_nb = _jit(_zz_expectations_loop)
    qaoa_energy_nb = _jit(_qaoa_energy_loop)
    mwis_bruteforce_nb = _jit(_mwis_bruteforce_loop)
    anneal_evolve_nb = _jit(_anneal_evolve_loop)


if USE_NUMBA:
    cost_diagonal = cost_diagonal_nb
    apply_phase = apply_phase_nb
    apply_mixer = apply_mixer_nb
    z_expectations = z_expectations_nb
    zz_expectations = zz_expectations_nb
    qaoa_energy = qaoa_energy_nb
    mwis_bruteforce = mwis_bruteforce_nb
    anneal_evolve = anneal_evolve_nb
else:
    cost_diagonal = cost_diagonal_np
    apply_phase = apply_phase_np
    apply_mixer = apply_mixer_np
    z_expectations = z_expectations_np
    zz_expectations = zz_expectations_np
    qaoa_energy = qaoa_energy_np
    mwis_bruteforce = mwis_bruteforce_np
    anneal_evolve = anneal_evolve_np


def diagonal_levels(diag):
    """Distinct values of a cost diagonal and the index of each entry's value."""
    levels, inverse = np.unique(diag, return_inverse=True)
    return levels, inverse.astype(np.int64).reshape(-1)


def backend_name() -> str:
    return "numba" if USE_NUMBA else "numpy"
