"""Gate application on state tensors.

A state is an ndarray whose qubit axes each have length 2; extra (batch)
axes are allowed. ``axes[i]`` is the tensor axis holding ``gate.qubits[i]``.
Kernels never modify their input.
"""

from __future__ import annotations

import math

import numpy as np

from .circuit import Gate, GateKind

_R = 1 / math.sqrt(2)
_H = np.array([[_R, _R], [_R, -_R]], dtype=complex)

_COS8 = [1.0, None, _R, None, 0.0, None, -_R, None, -1.0, None, -_R, None, 0.0, None, _R, None]


def lattice_phase(k: int) -> complex:
    """exp(i k pi/8), exact on multiples of pi/4."""
    k %= 16
    if k % 2 == 0:
        return complex(_COS8[k], _COS8[(k - 4) % 16])
    angle = k * math.pi / 8
    return complex(math.cos(angle), math.sin(angle))


_ONE_QUBIT_DIAG = {
    GateKind.Z: (1, -1),
    GateKind.S: (1, 1j),
    GateKind.SDG: (1, -1j),
    GateKind.T: (1, lattice_phase(2)),
    GateKind.TDG: (1, lattice_phase(-2)),
}


def _index(ndim: int, fixed: dict[int, int]) -> tuple:
    idx = [slice(None)] * ndim
    for ax, v in fixed.items():
        idx[ax] = v
    return tuple(idx)


def _scale(psi: np.ndarray, axis: int, d0: complex, d1: complex) -> np.ndarray:
    out = psi.copy()
    if d0 != 1:
        out[_index(psi.ndim, {axis: 0})] *= d0
    if d1 != 1:
        out[_index(psi.ndim, {axis: 1})] *= d1
    return out


def _controlled_flip(psi, control_axes, polarity, target_axis):
    out = psi.copy()
    sel = dict(zip(control_axes, polarity))
    i0 = _index(psi.ndim, {**sel, target_axis: 0})
    i1 = _index(psi.ndim, {**sel, target_axis: 1})
    out[i0] = psi[i1]
    out[i1] = psi[i0]
    return out


def apply_gate(psi: np.ndarray, gate: Gate, axes) -> np.ndarray:
    kind = gate.kind
    if kind is GateKind.H:
        (ax,) = axes
        moved = np.tensordot(_H, psi, axes=([1], [ax]))
        return np.moveaxis(moved, 0, ax)
    if kind is GateKind.X:
        return np.flip(psi, axis=axes[0]).copy()
    if kind in _ONE_QUBIT_DIAG:
        return _scale(psi, axes[0], *_ONE_QUBIT_DIAG[kind])
    if kind is GateKind.RZ8:
        k = gate.phase_step
        return _scale(psi, axes[0], lattice_phase(k), lattice_phase(-k))
    if kind in (GateKind.CNOT, GateKind.CCX, GateKind.NCX):
        return _controlled_flip(psi, axes[:-1], gate.control_polarity(), axes[-1])
    if kind is GateKind.CZ:
        out = psi.copy()
        out[_index(psi.ndim, {axes[0]: 1, axes[1]: 1})] *= -1
        return out
    if kind is GateKind.MCP8:
        out = psi.copy()
        sel = dict(zip(axes[:-1], gate.polarity))
        sel[axes[-1]] = 1
        out[_index(psi.ndim, sel)] *= lattice_phase(gate.phase_step)
        return out
    if kind is GateKind.RZZ8:
        k = gate.phase_step
        even, odd = lattice_phase(k), lattice_phase(-k)
        out = psi.copy()
        a, b = axes
        for va in (0, 1):
            for vb in (0, 1):
                out[_index(psi.ndim, {a: va, b: vb})] *= even if va == vb else odd
        return out
    raise ValueError(f"unsupported gate kind {kind}")


def qubit_axis(q: int, n: int, lead: int = 1) -> int:
    """Tensor axis of qubit ``q`` in a little-endian register of ``n`` qubits
    preceded by ``lead`` batch axes."""
    return lead + (n - 1 - q)


def run_batch(states: np.ndarray, gates, n: int) -> np.ndarray:
    """Evolve a (batch, 2**n) array of state vectors through ``gates``."""
    batch = states.shape[0]
    psi = states.reshape((batch,) + (2,) * n)
    for g in gates:
        psi = apply_gate(psi, g, [qubit_axis(q, n) for q in g.qubits])
    return psi.reshape(batch, 2**n)


def basis_batch(n: int, indices) -> np.ndarray:
    indices = np.asarray(indices, dtype=np.int64)
    out = np.zeros((len(indices), 2**n), dtype=complex)
    out[np.arange(len(indices)), indices] = 1
    return out
