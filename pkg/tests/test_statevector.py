import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.linalg import expm

from iqamis.graph import complete_graph, path_graph
from iqamis.ising import IsingCost, encode_mis
from iqamis.statevector import (
    QuantumState,
    apply_mixer,
    apply_phase,
    basis_state,
    expect_cost,
    expect_z,
    expect_zz,
    sample_bitstrings,
    sampled_correlators,
    uniform_state,
    z_expectations,
)

from conftest import graphs

X = np.array([[0, 1], [1, 0]], dtype=complex)


def random_state(n, rng):
    v = rng.normal(size=1 << n) + 1j * rng.normal(size=1 << n)
    return QuantumState(n, v / np.linalg.norm(v))


def sum_x(n):
    out = np.zeros((1 << n, 1 << n), dtype=complex)
    for q in range(n):
        out += np.kron(np.kron(np.eye(1 << (n - 1 - q)), X), np.eye(1 << q))
    return out


def test_uniform_state():
    assert np.allclose(uniform_state(1).amplitudes, [2**-0.5] * 2)
    assert np.allclose(uniform_state(2).amplitudes, [0.5] * 4)
    assert np.allclose(z_expectations(uniform_state(5)), 0)
    with pytest.raises(ValueError):
        uniform_state(0)
    with pytest.raises(ValueError):
        uniform_state(25)


def test_state_rejects_bad_norm():
    with pytest.raises(ValueError):
        QuantumState(1, np.array([1.0, 1.0], dtype=complex))


def test_little_endian_basis():
    s = basis_state([1, 0, 0])
    assert s.amplitudes[1] == 1
    assert expect_z(s, 0) == 1 and expect_z(s, 1) == -1


def test_phase_identity_and_probabilities(rng):
    cost = encode_mis(path_graph(3), 1.0)
    s = random_state(3, rng)
    assert np.allclose(apply_phase(s, cost, 0.0).amplitudes, s.amplitudes)
    out = apply_phase(s, cost, 1.234)
    assert np.allclose(out.probabilities, s.probabilities, atol=1e-15)


def test_phase_single_qubit_matches_matrix_exponential(rng):
    cost = IsingCost(1, 0.0, (1.0,), {})
    s = random_state(1, rng)
    # C = Z with the basis |0> -> spin -1, |1> -> spin +1
    c = np.diag([-1.0, 1.0])
    ref = expm(-1j * np.pi * c) @ s.amplitudes
    assert np.allclose(apply_phase(s, cost, np.pi).amplitudes, ref, atol=1e-12)


def test_phase_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_phase(uniform_state(2), encode_mis(path_graph(3), 1.0), 0.1)


def test_mixer_identity_and_flip():
    s = basis_state([0, 0, 0])
    assert np.allclose(apply_mixer(s, 0.0).amplitudes, s.amplitudes)
    out = apply_mixer(s, np.pi / 2).amplitudes
    expected = np.zeros(8, dtype=complex)
    expected[7] = 1j**3
    assert np.allclose(out, expected, atol=1e-15)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_operators_match_dense_exponentials(n, rng):
    g = complete_graph(n) if n > 1 else path_graph(1)
    cost = encode_mis(g, 0.7)
    diag = np.diag(cost.diagonal)
    for _ in range(5):
        s = random_state(n, rng)
        beta, gamma = rng.uniform(-3, 3, size=2)
        ref_mix = expm(1j * beta * sum_x(n)) @ s.amplitudes
        assert np.max(np.abs(apply_mixer(s, beta).amplitudes - ref_mix)) < 1e-10
        ref_phase = expm(-1j * gamma * diag) @ s.amplitudes
        assert np.max(np.abs(apply_phase(s, cost, gamma).amplitudes - ref_phase)) < 1e-10


@given(graphs(n_max=6), st.lists(st.floats(-4, 4), min_size=4, max_size=4))
def test_norm_and_composition(g, angles):
    cost = encode_mis(g, 1.0)
    b1, b2, g1, g2 = angles
    s = random_state(g.n, np.random.default_rng(g.n))
    both = apply_mixer(apply_mixer(s, b1), b2)
    assert np.max(np.abs(both.amplitudes - apply_mixer(s, b1 + b2).amplitudes)) < 1e-10
    both = apply_phase(apply_phase(s, cost, g1), cost, g2)
    assert np.max(np.abs(both.amplitudes - apply_phase(s, cost, g1 + g2).amplitudes)) < 1e-10
    t = apply_mixer(apply_phase(apply_mixer(s, b1), cost, g1), b2)
    assert abs(t.norm - 1) < 1e-10


def test_operations_do_not_mutate_input(rng):
    s = random_state(2, rng)
    before = s.amplitudes.copy()
    apply_mixer(s, 0.3)
    apply_phase(s, encode_mis(complete_graph(2), 1.0), 0.3)
    assert np.array_equal(s.amplitudes, before)


def test_expectations():
    u = uniform_state(2)
    assert expect_zz(u, 0, 1) == pytest.approx(0.0)
    bell = QuantumState(2, np.array([1, 0, 0, 1], dtype=complex) / math.sqrt(2))
    assert expect_zz(bell, 0, 1) == pytest.approx(1.0)
    with pytest.raises(ValueError):
        expect_zz(bell, 1, 1)
    with pytest.raises(IndexError):
        expect_z(bell, 2)
    cost = encode_mis(complete_graph(2), 1.0)
    assert expect_cost(u, cost) == pytest.approx(-1.0)
    assert expect_cost(basis_state([1, 0]), cost) == cost.evaluate([1, -1])


def test_p3_center_value():
    cost = encode_mis(path_graph(3), 1.0)
    s = apply_mixer(apply_phase(uniform_state(3), cost, 0.2), np.pi / 8)
    assert expect_z(s, 1) == pytest.approx(-0.23360, abs=1e-4)


def test_k2_zz_against_probability_sum(rng):
    cost = encode_mis(complete_graph(2), 1.0)
    for _ in range(5):
        beta, gamma = rng.uniform(0, 3, size=2)
        s = apply_mixer(apply_phase(uniform_state(2), cost, gamma), beta)
        p = s.probabilities
        ref = p[0] - p[1] - p[2] + p[3]
        assert expect_zz(s, 0, 1) == pytest.approx(ref, abs=1e-14)


@given(graphs(n_max=6, weighted=True))
def test_cost_linearity(g):
    cost = encode_mis(g, 1.3)
    s = random_state(g.n, np.random.default_rng(7))
    lin = cost.constant + sum(h * expect_z(s, i) for i, h in enumerate(cost.fields))
    lin += sum(v * expect_zz(s, a, b) for (a, b), v in cost.couplings.items())
    assert expect_cost(s, cost) == pytest.approx(lin, abs=1e-12)


def test_shot_sampling_is_seeded_and_consistent(rng):
    s = random_state(3, rng)
    a = sample_bitstrings(s, 200, seed=5)
    assert np.array_equal(a, sample_bitstrings(s, 200, seed=5))
    z, zz = sampled_correlators(s, [(0, 1)], 200_000, seed=1)
    assert np.allclose(z, z_expectations(s), atol=0.01)
    assert zz[0] == pytest.approx(expect_zz(s, 0, 1), abs=0.01)
