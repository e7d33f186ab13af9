"""Polynomial-time exact strong simulation for two restricted DQC1_m families.

* Shallow circuits: only the light cone of the measured wires is simulated.
  A full outcome ``z`` is evaluated as ``2^-l`` times the probability that
  the clean wire of ``Q^dagger |z>`` reads 0, which needs the forward cone of
  the clean wire only.
* IQP circuits: the outcome depends on the clean wire's bit alone, through
  the overlap of two branches of a graph-like state.
"""

from __future__ import annotations

import math
from typing import Sequence

import numpy as np

from . import _kernels
from .circuit import Circuit, CircuitError, cone_subcircuit, invert
from .exact import Dqc1Spec, OutcomeDistribution, _as_spec
from .gadgets import IqpSpec

DEFAULT_CONE_CAP = 20


class ConeCapExceeded(ValueError):
    """The light cone is too wide: the circuit is not shallow enough."""


def _bits_to_index(bits: Sequence[int]) -> int:
    return sum(int(b) << i for i, b in enumerate(bits))


def _check_bits(bits, length):
    bits = [int(b) for b in bits]
    if len(bits) != length or any(b not in (0, 1) for b in bits):
        raise ValueError(f"expected {length} bits, got {bits}")
    return bits


def _clean_cone(spec: Dqc1Spec, cone_cap: int):
    """Forward cone of the clean wire, as a subcircuit of ``Q^dagger``."""
    dagger = invert(spec.circuit).with_roles(clean_qubit=spec.clean_qubit)
    sub, wires = cone_subcircuit(dagger, [spec.clean_qubit])
    if len(wires) > cone_cap:
        raise ConeCapExceeded(f"light cone of {len(wires)} qubits exceeds cap {cone_cap}")
    return sub, wires


def _clean_zero_probabilities(sub: Circuit, inputs: np.ndarray) -> np.ndarray:
    """For each basis input of ``sub``, probability that its clean wire reads 0."""
    n = sub.num_qubits
    out = _kernels.run_batch(_kernels.basis_batch(n, inputs), sub.gates, n)
    probs = (np.abs(out) ** 2).reshape((len(inputs),) + (2,) * n)
    zero = np.take(probs, 0, axis=_kernels.qubit_axis(sub.clean, n))
    return zero.reshape(len(inputs), -1).sum(axis=1)


def strongsim_constdepth_point(spec, z: Sequence[int], cone_cap: int = DEFAULT_CONE_CAP) -> float:
    """Exact probability of the full outcome ``z`` (one bit per wire, wire order)."""
    spec = _as_spec(spec)
    n = spec.num_qubits
    z = _check_bits(z, n)
    sub, wires = _clean_cone(spec, cone_cap)
    idx = _bits_to_index([z[w] for w in wires])
    p0 = _clean_zero_probabilities(sub, np.array([idx]))[0]
    return float(p0) / 2 ** (n - 1)


def strongsim_constdepth_distribution(spec, cone_cap: int = DEFAULT_CONE_CAP) -> OutcomeDistribution:
    """All full-outcome probabilities (outputs = every wire, in wire order).

    The cone is the same for every ``z``, so each distinct restriction of
    ``z`` to the cone is simulated once.
    """
    spec = _as_spec(spec)
    n = spec.num_qubits
    sub, wires = _clean_cone(spec, cone_cap)
    k = len(wires)
    per_cone = _clean_zero_probabilities(sub, np.arange(2**k)) / 2 ** (n - 1)
    # cone wire i has weight 2**i in the cone index
    zs = np.arange(2**n)
    cone_index = np.zeros(2**n, dtype=np.int64)
    for i, w in enumerate(wires):
        cone_index |= ((zs >> w) & 1) << i
    return OutcomeDistribution(range(n), per_cone[cone_index])


def strongsim_constdepth_marginal(
    spec,
    subset: Sequence[int],
    z_s: Sequence[int],
    cone_cap: int = DEFAULT_CONE_CAP,
) -> float:
    """Exact probability that the wires in ``subset`` read ``z_s``.

    Simulates the union light cone of ``subset`` with the clean wire (if in
    the cone) set to |0> and every other cone wire averaged over both basis
    values.
    """
    spec = _as_spec(spec)
    subset = [int(q) for q in subset]
    z_s = _check_bits(z_s, len(subset))
    if len(set(subset)) != len(subset) or any(not 0 <= q < spec.num_qubits for q in subset):
        raise CircuitError(f"invalid subset {subset}")
    sub, wires = cone_subcircuit(spec.circuit.with_roles(clean_qubit=spec.clean_qubit), subset)
    k = len(wires)
    if k > cone_cap:
        raise ConeCapExceeded(f"light cone of {k} qubits exceeds cap {cone_cap}")
    pos = {w: i for i, w in enumerate(wires)}
    inputs = np.arange(2**k)
    if spec.clean_qubit in pos:
        inputs = inputs[(inputs >> pos[spec.clean_qubit]) & 1 == 0]
    out = _kernels.run_batch(_kernels.basis_batch(k, inputs), sub.gates, k)
    probs = (np.abs(out) ** 2).sum(axis=0)
    mask = np.ones(2**k, dtype=bool)
    idx = np.arange(2**k)
    for q, b in zip(subset, z_s):
        mask &= ((idx >> pos[q]) & 1) == b
    return float(probs[mask].sum() / len(inputs))


def strongsim_constdepth_marginal_distribution(spec, subset, cone_cap: int = DEFAULT_CONE_CAP) -> OutcomeDistribution:
    subset = list(subset)
    probs = [
        strongsim_constdepth_marginal(spec, subset, [(i >> j) & 1 for j in range(len(subset))], cone_cap)
        for i in range(2 ** len(subset))
    ]
    return OutcomeDistribution(subset, probs)


# IQP ---------------------------------------------------------------------------

_R = 1 / math.sqrt(2)
# cos(k pi/4), exact zeros
_COS4 = [1.0, _R, 0.0, -_R, -1.0, -_R, 0.0, _R]


def _cos_sin_quarter(k: int) -> tuple[float, float]:
    """cos and sin of k*pi/4."""
    return _COS4[k % 8], _COS4[(k - 2) % 8]


def clean_bit_distribution(spec: IqpSpec) -> tuple[float, float]:
    """Probabilities that the clean wire (wire 0) reads 0 and 1.

    Writing the diagonal part as a sum over the clean wire's value ``b``, the
    probability is ``1/2 + (-1)^z Re(c)`` where ``c`` is half the overlap of
    the two branches. Only gates touching wire 0 survive in that overlap and
    each neighbour ``j`` contributes an independent average over its basis
    value: 0 for a bare CZ, ``cos 2t`` for a bare ZZ rotation by ``t`` and
    ``i sin 2t`` for both together.
    """
    n = spec.num_qubits
    cz_nbrs = {j for e in spec.edges if 0 in e for j in e if j != 0}
    zz_nbrs = {}
    for e, k in spec.edge_theta.items():
        if 0 in e:
            (j,) = [v for v in e if v != 0]
            zz_nbrs[j] = k
    if any(j in cz_nbrs and j not in zz_nbrs for j in range(1, n)):
        # a bare CZ neighbour makes the branches orthogonal
        return 0.5, 0.5
    cos0, sin0 = _cos_sin_quarter(spec.theta[0])
    overlap = complex(cos0, sin0)  # exp(2 i theta_0)
    for j in sorted(cz_nbrs | set(zz_nbrs)):
        cos2, sin2 = _cos_sin_quarter(zz_nbrs[j])
        factor = complex(0.0, sin2) if j in cz_nbrs else complex(cos2, 0.0)
        if factor == 0:
            return 0.5, 0.5
        overlap *= factor
    p0 = 0.5 + 0.5 * overlap.real
    return p0, 1.0 - p0


def isolated_clean_probability(theta_k: int, z1: int) -> float:
    """|<phi_z|+>|^2 with |phi_z> = exp(-i theta Z) H |z>, theta = theta_k * pi/8."""
    theta = (theta_k % 16) * math.pi / 8
    plus = np.array([_R, _R], dtype=complex)
    hz = np.array([_R, _R if z1 == 0 else -_R], dtype=complex)
    phi = np.array([np.exp(-1j * theta), np.exp(1j * theta)]) * hz
    return float(abs(np.vdot(phi, plus)) ** 2)


def strongsim_iqp(spec: IqpSpec, z: Sequence[int]) -> float:
    """Exact probability of outcome ``z`` on the designated outputs (in output order)."""
    outs = spec.outputs
    z = _check_bits(z, len(outs))
    m = len(outs)
    if 0 not in outs:
        return 2.0**-m
    z1 = z[outs.index(0)]
    touched = any(0 in e for e in spec.edges) or any(0 in e for e in spec.edge_theta)
    if touched:
        p = clean_bit_distribution(spec)[z1]
    else:
        p = isolated_clean_probability(spec.theta[0], z1)
    return p / 2 ** (m - 1)


def strongsim_iqp_distribution(spec: IqpSpec) -> OutcomeDistribution:
    m = len(spec.outputs)
    probs = [strongsim_iqp(spec, [(i >> j) & 1 for j in range(m)]) for i in range(2**m)]
    return OutcomeDistribution(spec.outputs, probs)
