"""Exact brute-force simulation.

Amplitude index bit ``j`` is qubit ``j``'s basis value (little-endian).
Mixed inputs are handled by averaging pure runs over every basis setting of
the mixed qubits, in ascending basis order, so results are bit-reproducible.
"""

from __future__ import annotations

import itertools
from collections.abc import Mapping
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import _kernels
from .circuit import CLASSICAL_KINDS, Circuit, CircuitError, GateKind

DEFAULT_UNITARY_CAP = 12
DEFAULT_ENSEMBLE_CAP = 20
# elements per simulated chunk (batch * 2**n)
_CHUNK_ELEMENTS = 1 << 21


class CapExceededError(ValueError):
    """Raised when an instance is too large for the configured brute-force cap."""


@dataclass(frozen=True)
class StateVector:
    num_qubits: int
    amplitudes: np.ndarray

    def __post_init__(self):
        amps = np.asarray(self.amplitudes, dtype=complex).reshape(-1)
        if amps.size != 2**self.num_qubits:
            raise ValueError(f"expected {2 ** self.num_qubits} amplitudes, got {amps.size}")
        norm = float(np.vdot(amps, amps).real)
        if abs(norm - 1) > 1e-12:
            raise ValueError(f"state is not normalised (squared norm {norm!r})")
        object.__setattr__(self, "amplitudes", amps)

    @classmethod
    def zero(cls, n: int) -> StateVector:
        return cls.basis(n, 0)

    @classmethod
    def basis(cls, n: int, index: int) -> StateVector:
        amps = np.zeros(2**n, dtype=complex)
        amps[index] = 1
        return cls(n, amps)

    def probabilities(self) -> np.ndarray:
        return np.abs(self.amplitudes) ** 2


class OutcomeDistribution(Mapping):
    """Exact probabilities over bit strings of the designated outputs.

    Keys are strings such as ``"01"`` whose i-th character is the value of
    ``output_qubits[i]``. ``probs`` is the dense array indexed little-endian
    in output order (bit i of the index is output i).
    """

    def __init__(self, output_qubits: Sequence[int], probs):
        self.output_qubits = tuple(output_qubits)
        probs = np.asarray(probs, dtype=float).reshape(-1)
        if probs.size != 2 ** len(self.output_qubits):
            raise ValueError("probability array size does not match output count")
        if np.any(probs < -1e-12) or np.any(probs > 1 + 1e-12):
            raise ValueError("probabilities must lie in [0, 1]")
        if abs(probs.sum() - 1) > 1e-10:
            raise ValueError(f"probabilities sum to {probs.sum()!r}, not 1")
        self.probs = probs

    @property
    def arity(self) -> int:
        return len(self.output_qubits)

    def _index(self, key) -> int:
        bits = [int(b) for b in key]
        if len(bits) != self.arity or any(b not in (0, 1) for b in bits):
            raise KeyError(key)
        return sum(b << i for i, b in enumerate(bits))

    def __getitem__(self, key) -> float:
        return float(self.probs[self._index(key)])

    def __iter__(self):
        for i in range(self.probs.size):
            yield "".join(str((i >> j) & 1) for j in range(self.arity))

    def __len__(self) -> int:
        return self.probs.size

    def marginal(self, positions: Sequence[int]) -> OutcomeDistribution:
        """Marginal on a subset of output positions (indices into ``output_qubits``)."""
        probs = _marginal_from_full(self.probs, self.arity, positions)
        return OutcomeDistribution([self.output_qubits[p] for p in positions], probs)

    def as_dict(self) -> dict[str, float]:
        return {k: self[k] for k in self}

    def __repr__(self):
        return f"OutcomeDistribution(outputs={self.output_qubits}, probs={self.as_dict()})"


@dataclass(frozen=True)
class Dqc1Spec:
    """A circuit run on |0><0| (clean qubit) tensored with maximally mixed qubits."""

    circuit: Circuit
    clean_qubit: int | None = None
    output_qubits: tuple[int, ...] | None = None

    def __post_init__(self):
        c = self.circuit
        clean = c.clean if self.clean_qubit is None else int(self.clean_qubit)
        outs = c.outputs if self.output_qubits is None else tuple(int(q) for q in self.output_qubits)
        if not 0 <= clean < c.num_qubits:
            raise CircuitError(f"clean qubit {clean} out of range")
        if not outs or len(set(outs)) != len(outs) or any(not 0 <= q < c.num_qubits for q in outs):
            raise CircuitError(f"invalid output qubits {outs}")
        object.__setattr__(self, "clean_qubit", clean)
        object.__setattr__(self, "output_qubits", outs)

    @property
    def num_qubits(self) -> int:
        return self.circuit.num_qubits


def _as_spec(spec) -> Dqc1Spec:
    return spec if isinstance(spec, Dqc1Spec) else Dqc1Spec(spec)


def apply_circuit(s: StateVector, c: Circuit) -> StateVector:
    if s.num_qubits != c.num_qubits:
        raise ValueError(f"state has {s.num_qubits} qubits, circuit has {c.num_qubits}")
    out = _kernels.run_batch(s.amplitudes[None, :], c.gates, c.num_qubits)[0]
    return StateVector(c.num_qubits, out)


def unitary_of(c: Circuit, cap: int = DEFAULT_UNITARY_CAP) -> np.ndarray:
    n = c.num_qubits
    if n > cap:
        raise CapExceededError(f"{n} qubits exceeds the dense-unitary cap of {cap}")
    cols = _kernels.run_batch(np.eye(2**n, dtype=complex), c.gates, n)
    return cols.T.copy()


def _marginal_from_full(full: np.ndarray, n: int, outputs: Sequence[int]) -> np.ndarray:
    tensor = full.reshape((2,) * n)
    axes_keep = [n - 1 - q for q in outputs]
    drop = tuple(ax for ax in range(n) if ax not in axes_keep)
    summed = tensor.sum(axis=drop) if drop else tensor
    remaining = [ax for ax in range(n) if ax not in drop]
    order = [remaining.index(ax) for ax in reversed(axes_keep)]
    return np.transpose(summed, order).reshape(-1)


def acceptance_probability(c: Circuit) -> float:
    """Probability that the single designated output reads 1 on input |0...0>."""
    out = c.output
    psi = _kernels.run_batch(_kernels.basis_batch(c.num_qubits, [0]), c.gates, c.num_qubits)[0]
    probs = np.abs(psi) ** 2
    return float(_marginal_from_full(probs, c.num_qubits, [out])[1])


def _ensemble_probabilities(spec: Dqc1Spec, cap: int) -> np.ndarray:
    """Sum over all mixed basis inputs of |U|0,x>|^2, divided by the ensemble size."""
    c = spec.circuit
    n = c.num_qubits
    if n - 1 > cap:
        raise CapExceededError(f"{n - 1} mixed qubits exceeds the ensemble cap of {cap}")
    clean_bit = 1 << spec.clean_qubit
    inputs = np.array([i for i in range(2**n) if not i & clean_bit], dtype=np.int64)
    chunk = max(1, _CHUNK_ELEMENTS >> n)
    total = np.zeros(2**n)
    for start in range(0, len(inputs), chunk):
        psi = _kernels.run_batch(_kernels.basis_batch(n, inputs[start : start + chunk]), c.gates, n)
        total += (np.abs(psi) ** 2).sum(axis=0)
    return total / len(inputs)


def dqc1m_distribution(spec, ensemble_cap: int = DEFAULT_ENSEMBLE_CAP) -> OutcomeDistribution:
    """Joint distribution of the output qubits for the one-clean-qubit input."""
    spec = _as_spec(spec)
    full = _ensemble_probabilities(spec, ensemble_cap)
    return OutcomeDistribution(spec.output_qubits, _marginal_from_full(full, spec.num_qubits, spec.output_qubits))


def dqc1_acceptance(spec, ensemble_cap: int = DEFAULT_ENSEMBLE_CAP) -> float:
    spec = _as_spec(spec)
    if len(spec.output_qubits) != 1:
        raise CircuitError(f"expected one output qubit, got {len(spec.output_qubits)}")
    return dqc1m_distribution(spec, ensemble_cap)["1"]


def check_multiplicative(p: OutcomeDistribution, q: OutcomeDistribution, c: float) -> bool:
    """True iff ``p(x)/c <= q(x) <= c*p(x)`` for every outcome ``x``.

    A zero on either side therefore forces an exact zero on the other.
    """
    if p.arity != q.arity:
        raise ValueError(f"arity mismatch: {p.arity} vs {q.arity}")
    if c < 1:
        raise ValueError(f"c must be at least 1, got {c}")
    a, b = p.probs, q.probs
    return bool(np.all(a / c <= b) and np.all(b <= c * a))


def check_additive(p: OutcomeDistribution, q: OutcomeDistribution, eps: float) -> bool:
    if p.arity != q.arity:
        raise ValueError(f"arity mismatch: {p.arity} vs {q.arity}")
    if eps < 0:
        raise ValueError(f"eps must be non-negative, got {eps}")
    return bool(np.max(np.abs(p.probs - q.probs)) <= eps)


# Structured exact evaluation -------------------------------------------------


def postselected_probability(c: Circuit, fixed: Mapping[int, int]) -> float:
    """Exact ``|| Pi_fixed U |0...0> ||^2`` for a projector fixing some output bits.

    Wires are allocated at their first gate and fixed wires are projected out
    right after their last gate, so the live register stays narrow when the
    gate list is ordered so that wires retire early. Unfixed wires are summed
    over at the end.
    """
    fixed = {int(q): int(b) for q, b in fixed.items()}
    for q in fixed:
        if not 0 <= q < c.num_qubits:
            raise CircuitError(f"qubit {q} out of range")
    last_use: dict[int, int] = {}
    for i, g in enumerate(c.gates):
        for q in g.qubits:
            last_use[q] = i
    if any(b == 1 for q, b in fixed.items() if q not in last_use):
        return 0.0

    psi = np.ones((), dtype=complex)
    live: list[int] = []
    zero = np.array([1, 0], dtype=complex)
    for i, g in enumerate(c.gates):
        for q in g.qubits:
            if q not in live:
                psi = np.multiply.outer(psi, zero)
                live.append(q)
        psi = _kernels.apply_gate(psi, g, [live.index(q) for q in g.qubits])
        for q in g.qubits:
            if last_use[q] == i and q in fixed:
                ax = live.index(q)
                psi = np.take(psi, fixed[q], axis=ax)
                live.pop(ax)
    return float(np.sum(np.abs(psi) ** 2))


def _classical_suffix_start(c: Circuit) -> int:
    i = len(c.gates)
    while i > 0 and c.gates[i - 1].kind in CLASSICAL_KINDS:
        i -= 1
    return i


def _anf_mul(a: frozenset, b: frozenset) -> frozenset:
    out: set = set()
    for m1 in a:
        for m2 in b:
            out ^= {m1 | m2}
    return frozenset(out)


_ONE = frozenset({frozenset()})
_ZERO = frozenset()


def output_probability(c: Circuit, qubit: int, value: int, max_support: int = 16) -> float:
    """Exact probability that ``qubit`` reads ``value`` after ``c`` on |0...0>.

    A trailing run of basis-permuting gates (X, CNOT, Toffoli) is handled
    symbolically: the measured bit is written as an XOR of AND-monomials of
    the bits leaving the quantum prefix, and each satisfying assignment is
    evaluated with :func:`postselected_probability` on the prefix.
    """
    start = _classical_suffix_start(c)
    prefix = c.with_gates(c.gates[:start])
    touched = prefix.used_qubits()
    anf = {q: (frozenset({frozenset({q})}) if q in touched else _ZERO) for q in range(c.num_qubits)}
    for g in c.gates[start:]:
        tq = g.target
        if g.kind is GateKind.X:
            anf[tq] = anf[tq] ^ _ONE
            continue
        term = _ONE
        for ctrl, pol in zip(g.controls, g.control_polarity()):
            lit = anf[ctrl] if pol else anf[ctrl] ^ _ONE
            term = _anf_mul(term, lit)
        anf[tq] = anf[tq] ^ term
    poly = anf[qubit]
    const = 1 if frozenset() in poly else 0
    monomials = [m for m in poly if m]
    if not monomials:
        return 1.0 if const == value else 0.0
    if len(monomials) == 1:
        p_one = postselected_probability(prefix, {q: 1 for q in monomials[0]})
        return p_one if (const ^ 1) == value else 1.0 - p_one
    support = sorted(set().union(*monomials))
    if len(support) > max_support:
        raise CapExceededError(f"measured bit depends on {len(support)} prefix bits")
    total = 0.0
    for bits in itertools.product((0, 1), repeat=len(support)):
        assign = dict(zip(support, bits))
        f = const
        for m in monomials:
            f ^= all(assign[q] for q in m)
        if f == value:
            total += postselected_probability(prefix, assign)
    return total


def basis_images(c: Circuit, inputs: Iterable[int]) -> list[tuple[int, complex]]:
    """For each basis input, the unique basis output and its amplitude.

    Raises if some input is not mapped to a single basis state.
    """
    inputs = list(inputs)
    out = _kernels.run_batch(_kernels.basis_batch(c.num_qubits, inputs), c.gates, c.num_qubits)
    images = []
    for row, idx in zip(out, inputs):
        j = int(np.argmax(np.abs(row)))
        if abs(abs(row[j]) - 1) > 1e-10:
            raise ValueError(f"basis input {idx} is not mapped to a basis state")
        images.append((j, complex(row[j])))
    return images
