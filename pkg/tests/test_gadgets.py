
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from dqc1sim import circuit as cc
from dqc1sim.circuit import Circuit, CircuitError, GateKind, depth, invert, random_circuit
from dqc1sim.exact import (
    Dqc1Spec,
    StateVector,
    acceptance_probability,
    apply_circuit,
    dqc1_acceptance,
    dqc1m_distribution,
    output_probability,
    postselected_probability,
)
from dqc1sim.gadgets import (
    TELEPORT_DEPTH,
    IqpSpec,
    build_dw,
    build_iqp_dqc1,
    build_vw,
    iqp_spec_from_circuit,
    lemma1_prediction,
    teleport_compile,
    vw_depth_bound,
)

import oracle


def test_lemma1_prediction_examples():
    assert lemma1_prediction(0.5, 1) == 0.5
    assert lemma1_prediction(0, 3) == 0 and lemma1_prediction(1, 3) == 0
    assert lemma1_prediction(0.25, 2) == 0.1875
    with pytest.raises(ValueError):
        lemma1_prediction(1.5, 1)


def test_dw_examples():
    assert abs(dqc1_acceptance(build_dw(Circuit(1, [cc.h(0)])).circuit) - 0.5) < 1e-12
    assert dqc1_acceptance(build_dw(Circuit(1)).circuit) == 0
    assert dqc1_acceptance(build_dw(Circuit(1, [cc.x(0)])).circuit) == 0


def test_dw_structure():
    q = Circuit(2, [cc.h(0), cc.cnot(0, 1)], outputs=(1,))
    g = build_dw(q)
    assert g.source_n == 2 and g.circuit.num_qubits == 3
    assert g.circuit.clean_qubit == 0 and g.circuit.outputs == (0,)
    first, last = g.circuit.gates[0], g.circuit.gates[-1]
    assert first == last == cc.ncx([1, 2], 0, [0, 0])
    assert cc.cz(0, 2) in g.circuit.gates


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 4), st.integers(0, 25), st.integers(0, 2**32 - 1))
def test_dw_matches_lemma1_against_density_oracle(n, gates, seed):
    q = random_circuit(n, gates, np.random.default_rng(seed), output=int(seed % n))
    p = oracle.acceptance(q)
    dw = build_dw(q).circuit
    got = oracle.dqc1_distribution(dw, 0, [0])[1]
    assert abs(got - lemma1_prediction(p, n)) <= 1e-10


@settings(max_examples=15, deadline=None)
@given(st.integers(1, 4), st.integers(0, 15), st.integers(0, 2**32 - 1))
def test_decomposed_dw_matches_lemma1(n, gates, seed):
    q = random_circuit(n, gates, np.random.default_rng(seed))
    g = build_dw(q, decompose=True)
    assert not any(k in {GateKind.CCX, GateKind.NCX} for k in (x.kind for x in g.circuit.gates))
    got = dqc1_acceptance(g.circuit)
    assert abs(got - lemma1_prediction(acceptance_probability(q), n)) <= 1e-10


def _teleport_stats(q):
    tel = teleport_compile(q)
    probs = apply_circuit(StateVector.zero(tel.circuit.num_qubits), tel.circuit).probabilities()
    idx = np.arange(len(probs))
    ok = np.ones(len(probs), dtype=bool)
    for w in tel.postselect:
        ok &= (idx >> w) & 1 == 1
    p_all = probs[ok].sum()
    p_o = probs[ok & ((idx >> tel.o) & 1 == 1)].sum() / p_all
    return tel, p_all, p_o


def test_teleport_examples():
    tel = teleport_compile(Circuit(1))
    assert tel.r == 0 and tel.o == 0
    tel, p_all, p_o = _teleport_stats(Circuit(1, [cc.h(0)]))
    assert abs(p_o - 0.5) <= 1e-10 and abs(p_all - 2.0**-tel.r) <= 1e-12
    tel, p_all, p_o = _teleport_stats(Circuit(2, [cc.h(0), cc.cnot(0, 1)], outputs=(1,)))
    assert abs(p_o - 0.5) <= 1e-10 and abs(p_all - 2.0**-tel.r) <= 1e-12
    assert depth(tel.circuit) <= TELEPORT_DEPTH


@settings(max_examples=20, deadline=None)
@given(st.integers(1, 2), st.integers(0, 3), st.integers(0, 2**32 - 1))
def test_teleport_contract_statevector(n, gates, seed):
    q = random_circuit(n, gates, np.random.default_rng(seed), kinds=("H", "T", "S", "CNOT"))
    tel, p_all, p_o = _teleport_stats(q)
    assert abs(p_all - 2.0**-tel.r) <= 1e-12
    assert abs(p_o - acceptance_probability(q)) <= 1e-10
    assert depth(tel.circuit) <= TELEPORT_DEPTH
    assert tel.r == 2 * sum(len(g.qubits) for g in q.gates)


def test_streaming_postselection_agrees_with_statevector():
    q = Circuit(2, [cc.h(0), cc.t(0), cc.cnot(0, 1), cc.h(1)], outputs=(1,))
    tel = teleport_compile(q)
    fixed = {w: 1 for w in tel.postselect}
    p_all = postselected_probability(tel.circuit, fixed)
    assert abs(p_all - 2.0**-tel.r) <= 1e-12
    p_joint = postselected_probability(tel.circuit, {**fixed, tel.o: 1})
    assert abs(p_joint / p_all - acceptance_probability(q)) <= 1e-10


def test_vw_examples():
    for q, p in [(Circuit(1, [cc.x(0)]), 1.0), (Circuit(1), 0.0), (Circuit(1, [cc.h(0)]), 0.5)]:
        vw = build_vw(q)
        got = output_probability(vw.circuit, vw.o_prime, 0)
        assert abs(got - p / 2**vw.r) <= 1e-10
        assert vw.o_prime == vw.circuit.num_qubits - 1
        assert vw.circuit.outputs == (vw.o_prime,)
        assert depth(vw.circuit) <= vw_depth_bound(vw.r)


def test_vw_small_case_by_full_statevector():
    q = Circuit(1, [cc.h(0), cc.t(0), cc.h(0)])
    vw = build_vw(q)
    probs = apply_circuit(StateVector.zero(vw.circuit.num_qubits), vw.circuit).probabilities()
    p0 = probs[(np.arange(len(probs)) >> vw.o_prime) & 1 == 0].sum()
    assert abs(p0 - acceptance_probability(q) / 2**vw.r) <= 1e-10


def test_vw_dagger_dqc1_identity():
    q = Circuit(1, [cc.h(0)])
    vw = build_vw(q)
    n = vw.circuit.num_qubits
    assert n <= 13
    dist = dqc1m_distribution(Dqc1Spec(invert(vw.circuit), clean_qubit=vw.o_prime, output_qubits=range(n)))
    assert abs(dist.probs[0] - acceptance_probability(q) / 2 ** (vw.l + vw.r)) <= 1e-10


@pytest.mark.parametrize("r", [0, 1, 2, 3, 4, 5, 8, 9, 16, 100])
def test_vw_depth_bound_monotone(r):
    assert vw_depth_bound(r) >= vw_depth_bound(max(r - 1, 0))


def test_iqp_spec_normalization():
    spec = IqpSpec(2, {(0, 1)}, (17, -1, 0), {(1, 2): 16, (2, 0): 3})
    assert spec.theta == (1, 15, 0)
    assert spec.edge_theta == {frozenset({0, 2}): 3}
    assert spec.outputs == (0, 1, 2)
    with pytest.raises(CircuitError):
        IqpSpec(1, {(0, 0)})
    with pytest.raises(CircuitError):
        IqpSpec(1, {(0, 2)})
    with pytest.raises(CircuitError):
        IqpSpec(1, theta=(1,))


def test_build_iqp_examples():
    c = build_iqp_dqc1(IqpSpec(0))
    assert [g.kind for g in c.gates] == [GateKind.H, GateKind.H]
    assert dqc1m_distribution(c)["0"] == pytest.approx(1, abs=1e-15)
    c = build_iqp_dqc1(IqpSpec(1, {(0, 1)}))
    assert c.gates == (cc.h(0), cc.h(1), cc.cz(0, 1), cc.h(0), cc.h(1))


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 5), st.integers(0, 2**32 - 1))
def test_iqp_spec_round_trip(l, seed):
    rng = np.random.default_rng(seed)
    n = l + 1
    edges = {(a, b) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.4}
    zz = {(a, b): int(rng.integers(16)) for a in range(n) for b in range(a + 1, n) if rng.random() < 0.3}
    spec = IqpSpec(l, edges, tuple(int(k) for k in rng.integers(0, 16, size=n)), zz)
    assert iqp_spec_from_circuit(build_iqp_dqc1(spec)) == spec


def test_iqp_spec_from_circuit_folds_phase_gates():
    c = Circuit(1, [cc.h(0), cc.t(0), cc.s(0), cc.h(0)])
    assert iqp_spec_from_circuit(c).theta == (13,)
    with pytest.raises(CircuitError):
        iqp_spec_from_circuit(Circuit(2, [cc.h(0), cc.h(1), cc.cnot(0, 1), cc.h(0), cc.h(1)]))
