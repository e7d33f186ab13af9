import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqc1sim import circuit as cc
from dqc1sim.circuit import Circuit, CircuitError, invert, random_circuit
from dqc1sim.exact import (
    CapExceededError,
    Dqc1Spec,
    OutcomeDistribution,
    StateVector,
    acceptance_probability,
    apply_circuit,
    basis_images,
    check_additive,
    check_multiplicative,
    dqc1_acceptance,
    dqc1m_distribution,
    output_probability,
    postselected_probability,
    unitary_of,
)

import oracle

R = 1 / math.sqrt(2)
KINDS = ("H", "T", "TDG", "S", "X", "Z", "RZ8", "CNOT", "CZ", "RZZ8")


def rand(n, gates, seed, output=0):
    kinds = KINDS if n >= 2 else KINDS[:7]
    return random_circuit(n, gates, np.random.default_rng(seed), kinds=kinds, output=output)


def test_apply_circuit_examples():
    s = apply_circuit(StateVector.zero(1), Circuit(1, [cc.x(0)]))
    assert np.allclose(s.amplitudes, [0, 1])
    s = apply_circuit(StateVector.zero(1), Circuit(1, [cc.h(0)]))
    assert np.allclose(s.amplitudes, [R, R])


def test_apply_circuit_dimension_mismatch():
    with pytest.raises(ValueError):
        apply_circuit(StateVector.zero(2), Circuit(1))


def test_statevector_norm_checked():
    with pytest.raises(ValueError):
        StateVector(1, np.array([1.0, 1.0]))


def test_little_endian_indexing():
    s = apply_circuit(StateVector.zero(3), Circuit(3, [cc.x(1)]))
    assert s.probabilities()[0b010] == 1


def test_unitary_examples():
    assert np.allclose(unitary_of(Circuit(1, [cc.h(0)])), [[R, R], [R, -R]])
    assert np.allclose(unitary_of(Circuit(2)), np.eye(4))
    assert np.allclose(unitary_of(Circuit(1, [cc.t(0)])), np.diag([1, np.exp(1j * np.pi / 4)]))
    assert np.allclose(unitary_of(Circuit(1, [cc.rz8(2, 0)])), np.diag([np.exp(1j * np.pi / 4), np.exp(-1j * np.pi / 4)]))


def test_unitary_cap():
    with pytest.raises(CapExceededError):
        unitary_of(Circuit(13))
    with pytest.raises(CapExceededError):
        unitary_of(Circuit(3), cap=2)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 4), st.integers(0, 20), st.integers(0, 2**32 - 1))
def test_unitary_matches_dense_oracle(n, gates, seed):
    c = rand(n, gates, seed)
    assert np.allclose(unitary_of(c), oracle.unitary(c), atol=1e-10)
    assert np.allclose(unitary_of(c) @ unitary_of(invert(c)), np.eye(2**n), atol=1e-10)


@settings(max_examples=60, deadline=None)
@given(st.integers(1, 5), st.integers(0, 30), st.integers(0, 2**32 - 1))
def test_norm_preserved_and_matches_unitary(n, gates, seed):
    c = rand(n, gates, seed)
    rng = np.random.default_rng(seed)
    v = rng.normal(size=2**n) + 1j * rng.normal(size=2**n)
    s = StateVector(n, v / np.linalg.norm(v))
    out = apply_circuit(s, c)
    assert abs(np.linalg.norm(out.amplitudes) - 1) <= 1e-12
    assert np.allclose(out.amplitudes, oracle.unitary(c) @ s.amplitudes, atol=1e-10)


def test_acceptance_examples():
    assert acceptance_probability(Circuit(1)) == 0
    assert acceptance_probability(Circuit(2, [cc.x(1)], outputs=(1,))) == 1
    assert abs(acceptance_probability(Circuit(1, [cc.h(0)])) - 0.5) < 1e-15
    with pytest.raises(CircuitError):
        acceptance_probability(Circuit(2, outputs=(0, 1)))


def test_dqc1_acceptance_examples():
    assert dqc1_acceptance(Circuit(1, [cc.x(0)])) == 1
    assert abs(dqc1_acceptance(Circuit(2, [cc.cnot(1, 0)])) - 0.5) < 1e-15
    assert abs(dqc1_acceptance(Circuit(1, [cc.h(0)])) - 0.5) < 1e-15


def test_clean_qubit_override():
    c = Circuit(2, [cc.cnot(1, 0)], clean_qubit=0)
    # with wire 1 clean the control is |0>, so wire 0 (mixed) is unchanged
    assert abs(dqc1_acceptance(Dqc1Spec(c, clean_qubit=1)) - 0.5) < 1e-15
    assert dqc1_acceptance(Dqc1Spec(c, clean_qubit=1, output_qubits=[1])) == 0


def test_ensemble_cap():
    with pytest.raises(CapExceededError):
        dqc1_acceptance(Circuit(4), ensemble_cap=2)


def test_dqc1m_examples():
    n = 3
    d = dqc1m_distribution(Dqc1Spec(Circuit(n), output_qubits=range(n)))
    for key, p in d.items():
        assert p == (2.0 ** -(n - 1) if key[0] == "0" else 0.0)
    d = dqc1m_distribution(Circuit(1, [cc.h(0)]))
    assert d.as_dict() == pytest.approx({"0": 0.5, "1": 0.5}, abs=1e-15)


@settings(max_examples=50, deadline=None)
@given(st.integers(1, 5), st.integers(0, 25), st.integers(0, 2**32 - 1), st.data())
def test_dqc1m_matches_density_matrix_oracle(n, gates, seed, data):
    c = rand(n, gates, seed)
    clean = data.draw(st.integers(0, n - 1))
    outs = data.draw(st.permutations(range(n)).map(lambda p: p[: max(1, len(p) // 2 + 1)]))
    d = dqc1m_distribution(Dqc1Spec(c, clean_qubit=clean, output_qubits=outs))
    assert np.allclose(d.probs, oracle.dqc1_distribution(c, clean, outs), atol=1e-10)
    assert abs(d.probs.sum() - 1) <= 1e-10
    for j, q in enumerate(outs):
        single = dqc1_acceptance(Dqc1Spec(c, clean_qubit=clean, output_qubits=[q]))
        assert abs(d.marginal([j])["1"] - single) <= 1e-12


def test_outcome_distribution_keys_follow_output_order():
    d = dqc1m_distribution(Dqc1Spec(Circuit(2, [cc.x(0)]), output_qubits=[1, 0]))
    assert d["01"] == pytest.approx(0.5) and d["11"] == pytest.approx(0.5)
    assert d["10"] == 0 and d["00"] == 0
    assert list(d) == ["00", "10", "01", "11"] or set(d) == {"00", "01", "10", "11"}


def _dist(*probs):
    m = int(math.log2(len(probs)))
    return OutcomeDistribution(range(m), probs)


def test_comparator_examples():
    p = _dist(0.5, 0.5)
    assert check_multiplicative(p, p, 1)
    assert check_multiplicative(p, _dist(0.7, 0.3), 2)
    assert not check_multiplicative(p, _dist(0.8, 0.2), 2)
    assert check_additive(p, p, 0)
    assert not check_additive(p, _dist(0.0, 1.0), 0.4)
    assert check_additive(p, _dist(0.0, 1.0), 0.5)
    with pytest.raises(ValueError):
        check_additive(p, _dist(0.25, 0.25, 0.25, 0.25), 0.1)
    with pytest.raises(ValueError):
        check_multiplicative(p, p, 0.5)


@settings(max_examples=50, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=4, max_size=4).filter(lambda v: sum(v) > 0.1), st.floats(1, 100))
def test_comparators_reflexive(v, c):
    p = _dist(*(np.array(v) / sum(v)))
    assert check_multiplicative(p, p, c)
    assert check_additive(p, p, 0)


def test_postselected_probability_matches_projection():
    c = Circuit(3, [cc.h(0), cc.cnot(0, 1), cc.t(1), cc.h(1), cc.cnot(1, 2)])
    probs = oracle.pure_output_probs(c)
    for fixed in [{0: 1}, {1: 0, 2: 1}, {0: 1, 1: 1, 2: 1}, {}]:
        want = sum(p for i, p in enumerate(probs) if all((i >> q) & 1 == b for q, b in fixed.items()))
        assert abs(postselected_probability(c, fixed) - want) < 1e-12
    # an untouched wire stays at |0>
    assert postselected_probability(Circuit(2, [cc.h(0)]), {1: 1}) == 0


@settings(max_examples=40, deadline=None)
@given(st.integers(2, 5), st.integers(0, 20), st.integers(0, 2**32 - 1), st.data())
def test_output_probability_with_classical_suffix(n, gates, seed, data):
    c = rand(n, gates, seed)
    rng = np.random.default_rng(seed + 1)
    suffix = []
    for _ in range(data.draw(st.integers(0, 6))):
        a, b, t = (int(v) for v in rng.choice(n + 2, size=3, replace=False))
        suffix.append(cc.ccx(a, b, t) if rng.random() < 0.5 else cc.cnot(a, t))
    full = Circuit(n + 2, [*c.gates, *suffix])
    q = data.draw(st.integers(0, n + 1))
    probs = oracle.pure_output_probs(full)
    want = sum(p for i, p in enumerate(probs) if (i >> q) & 1)
    assert abs(output_probability(full, q, 1) - want) <= 1e-12
    assert abs(output_probability(full, q, 0) - (1 - want)) <= 1e-12


def test_basis_images():
    c = Circuit(3, [cc.ccx(0, 1, 2), cc.x(0)])
    assert [i for i, _ in basis_images(c, [0b011, 0b000])] == [0b110, 0b001]
    with pytest.raises(ValueError):
        basis_images(Circuit(1, [cc.h(0)]), [0])


def test_deterministic_bit_identical():
    c = rand(5, 30, 3)
    a = dqc1m_distribution(Dqc1Spec(c, output_qubits=range(5))).probs
    b = dqc1m_distribution(Dqc1Spec(c, output_qubits=range(5))).probs
    assert a.tobytes() == b.tobytes()
