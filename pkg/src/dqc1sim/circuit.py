"""Circuit intermediate representation.

Qubits are integer wires ``0 .. num_qubits - 1``. A :class:`Circuit` is an
immutable gate sequence plus role metadata: the clean qubit used by
one-clean-qubit runs and the ordered list of designated output qubits.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field, replace
from typing import Iterable, Sequence

import numpy as np


class CircuitError(ValueError):
    """Raised when a gate or circuit violates an IR invariant."""


class GateKind(enum.Enum):
    H = "H"
    X = "X"
    Z = "Z"
    S = "S"
    SDG = "SDG"
    T = "T"
    TDG = "TDG"
    CNOT = "CNOT"
    CZ = "CZ"
    CCX = "CCX"
    # multi-controlled X with per-control polarity
    NCX = "NCX"
    # exp(i k pi/8 Z)
    RZ8 = "RZ8"
    # exp(i k pi/8 Z (x) Z)
    RZZ8 = "RZZ8"
    # phase exp(i k pi/8) on |1> of the target when all controls match
    MCP8 = "MCP8"


_FIXED_ARITY = {
    GateKind.H: 1,
    GateKind.X: 1,
    GateKind.Z: 1,
    GateKind.S: 1,
    GateKind.SDG: 1,
    GateKind.T: 1,
    GateKind.TDG: 1,
    GateKind.RZ8: 1,
    GateKind.CNOT: 2,
    GateKind.CZ: 2,
    GateKind.RZZ8: 2,
    GateKind.CCX: 3,
}

POLARIZED_KINDS = frozenset({GateKind.NCX, GateKind.MCP8})
ROTATION_KINDS = frozenset({GateKind.RZ8, GateKind.RZZ8, GateKind.MCP8})
DIAGONAL_KINDS = frozenset(
    {
        GateKind.Z,
        GateKind.S,
        GateKind.SDG,
        GateKind.T,
        GateKind.TDG,
        GateKind.CZ,
        GateKind.RZ8,
        GateKind.RZZ8,
        GateKind.MCP8,
    }
)
# gates that permute computational basis states
CLASSICAL_KINDS = frozenset({GateKind.X, GateKind.CNOT, GateKind.CCX, GateKind.NCX})

_INVERSE_KIND = {
    GateKind.S: GateKind.SDG,
    GateKind.SDG: GateKind.S,
    GateKind.T: GateKind.TDG,
    GateKind.TDG: GateKind.T,
}


@dataclass(frozen=True)
class Gate:
    """One primitive operation.

    For controlled kinds the controls come first and the target last.
    ``polarity`` holds one bit per control (multi-controlled kinds only) and
    ``phase_step`` the integer ``k`` of a ``k*pi/8`` rotation, stored mod 16.
    """

    kind: GateKind
    qubits: tuple[int, ...]
    polarity: tuple[int, ...] = ()
    phase_step: int = 0

    def __post_init__(self):
        object.__setattr__(self, "kind", GateKind(self.kind))
        object.__setattr__(self, "qubits", tuple(int(q) for q in self.qubits))
        object.__setattr__(self, "polarity", tuple(int(b) for b in self.polarity))
        object.__setattr__(self, "phase_step", int(self.phase_step) % 16)

    @property
    def controls(self) -> tuple[int, ...]:
        if self.kind in POLARIZED_KINDS or self.kind in (GateKind.CNOT, GateKind.CCX):
            return self.qubits[:-1]
        return ()

    @property
    def target(self) -> int:
        return self.qubits[-1]

    def control_polarity(self) -> tuple[int, ...]:
        """Polarity bits for every control, implicit ones included."""
        if self.kind in POLARIZED_KINDS:
            return self.polarity
        return (1,) * len(self.controls)

    def shifted(self, offset: int = 0, mapping: dict[int, int] | None = None) -> Gate:
        if mapping is not None:
            qubits = tuple(mapping[q] for q in self.qubits)
        else:
            qubits = tuple(q + offset for q in self.qubits)
        return replace(self, qubits=qubits)

    def inverse(self) -> Gate:
        if self.kind in ROTATION_KINDS:
            return replace(self, phase_step=-self.phase_step)
        return replace(self, kind=_INVERSE_KIND.get(self.kind, self.kind))

    def __str__(self) -> str:
        name = self.kind.value
        if self.kind is GateKind.NCX:
            bits = "".join(map(str, self.polarity))
            return " ".join([name, bits, *map(str, self.qubits)])
        if self.kind is GateKind.MCP8:
            bits = "".join(map(str, self.polarity)) or "-"
            return " ".join([name, str(self.phase_step), bits, *map(str, self.qubits)])
        if self.kind in ROTATION_KINDS:
            return " ".join([name, str(self.phase_step), *map(str, self.qubits)])
        return " ".join([name, *map(str, self.qubits)])


def h(q):
    return Gate(GateKind.H, (q,))


def x(q):
    return Gate(GateKind.X, (q,))


def z(q):
    return Gate(GateKind.Z, (q,))


def s(q):
    return Gate(GateKind.S, (q,))


def sdg(q):
    return Gate(GateKind.SDG, (q,))


def t(q):
    return Gate(GateKind.T, (q,))


def tdg(q):
    return Gate(GateKind.TDG, (q,))


def cnot(control, target):
    return Gate(GateKind.CNOT, (control, target))


def cz(a, b):
    return Gate(GateKind.CZ, (a, b))


def ccx(c1, c2, target):
    return Gate(GateKind.CCX, (c1, c2, target))


def ncx(controls: Sequence[int], target: int, polarity: Sequence[int] | None = None):
    controls = tuple(controls)
    if polarity is None:
        polarity = (1,) * len(controls)
    return Gate(GateKind.NCX, (*controls, target), tuple(polarity))


def rz8(k: int, q: int):
    return Gate(GateKind.RZ8, (q,), phase_step=k)


def rzz8(k: int, a: int, b: int):
    return Gate(GateKind.RZZ8, (a, b), phase_step=k)


def mcp8(k: int, controls: Sequence[int], target: int, polarity: Sequence[int] | None = None):
    controls = tuple(controls)
    if polarity is None:
        polarity = (1,) * len(controls)
    return Gate(GateKind.MCP8, (*controls, target), tuple(polarity), k)


def _check_gate(gate: Gate, num_qubits: int, index: int) -> None:
    where = f"gate {index} ({gate})"
    arity = _FIXED_ARITY.get(gate.kind)
    if arity is not None and len(gate.qubits) != arity:
        raise CircuitError(f"{where}: expected {arity} qubits, got {len(gate.qubits)}")
    if not gate.qubits:
        raise CircuitError(f"{where}: no qubits")
    if len(set(gate.qubits)) != len(gate.qubits):
        raise CircuitError(f"{where}: duplicate qubit")
    for q in gate.qubits:
        if not 0 <= q < num_qubits:
            raise CircuitError(f"{where}: qubit index {q} out of range for {num_qubits} qubits")
    if gate.kind in POLARIZED_KINDS:
        if len(gate.polarity) != len(gate.qubits) - 1:
            raise CircuitError(f"{where}: polarity length does not match control count")
        if any(b not in (0, 1) for b in gate.polarity):
            raise CircuitError(f"{where}: polarity bits must be 0 or 1")
        if gate.kind is GateKind.NCX and len(gate.qubits) < 2:
            raise CircuitError(f"{where}: NCX needs at least one control")
    elif gate.polarity:
        raise CircuitError(f"{where}: polarity given for uncontrolled kind")
    if gate.kind not in ROTATION_KINDS and gate.phase_step:
        raise CircuitError(f"{where}: phase step given for non-rotation kind")


@dataclass(frozen=True)
class Circuit:
    """Immutable gate sequence over ``num_qubits`` wires with role metadata."""

    num_qubits: int
    gates: tuple[Gate, ...] = ()
    clean_qubit: int | None = 0
    outputs: tuple[int, ...] = (0,)

    def __post_init__(self):
        object.__setattr__(self, "gates", tuple(self.gates))
        object.__setattr__(self, "outputs", tuple(int(q) for q in self.outputs))
        validate(self)

    def __len__(self) -> int:
        return len(self.gates)

    def __iter__(self):
        return iter(self.gates)

    @property
    def output(self) -> int:
        """The single designated output; raises if several are designated."""
        if len(self.outputs) != 1:
            raise CircuitError(f"expected one designated output, got {len(self.outputs)}")
        return self.outputs[0]

    @property
    def clean(self) -> int:
        return 0 if self.clean_qubit is None else self.clean_qubit

    def with_gates(self, gates: Iterable[Gate]) -> Circuit:
        return replace(self, gates=tuple(gates))

    def with_roles(self, *, clean_qubit: int | None | str = "keep", outputs=None) -> Circuit:
        changes = {}
        if clean_qubit != "keep":
            changes["clean_qubit"] = clean_qubit
        if outputs is not None:
            changes["outputs"] = tuple(outputs)
        return replace(self, **changes)

    def used_qubits(self) -> set[int]:
        return {q for g in self.gates for q in g.qubits}


def validate(c: Circuit) -> None:
    """Check every IR invariant, raising :class:`CircuitError` on the first violation."""
    if not isinstance(c.num_qubits, (int, np.integer)) or c.num_qubits < 1:
        raise CircuitError(f"num_qubits must be a positive integer, got {c.num_qubits!r}")
    for i, gate in enumerate(c.gates):
        _check_gate(gate, c.num_qubits, i)
    if not c.outputs:
        raise CircuitError("at least one output qubit must be designated")
    if len(set(c.outputs)) != len(c.outputs):
        raise CircuitError("duplicate output qubit")
    for q in c.outputs:
        if not 0 <= q < c.num_qubits:
            raise CircuitError(f"output qubit {q} out of range for {c.num_qubits} qubits")
    if c.clean_qubit is not None and not 0 <= c.clean_qubit < c.num_qubits:
        raise CircuitError(f"clean qubit {c.clean_qubit} out of range for {c.num_qubits} qubits")


def depth(c: Circuit) -> int:
    """Number of layers under greedy earliest-layer packing."""
    level = [0] * c.num_qubits
    deepest = 0
    for gate in c.gates:
        layer = 1 + max(level[q] for q in gate.qubits)
        for q in gate.qubits:
            level[q] = layer
        deepest = max(deepest, layer)
    return deepest


def invert(c: Circuit) -> Circuit:
    return c.with_gates(g.inverse() for g in reversed(c.gates))


def concat(a: Circuit, b: Circuit) -> Circuit:
    """``a`` followed by ``b``; roles come from ``a``."""
    n = max(a.num_qubits, b.num_qubits)
    return replace(a, num_qubits=n, gates=a.gates + b.gates)


def _controlled_gate(g: Gate, ctrl: int) -> list[Gate]:
    """Gates realising ``g`` conditioned on ``ctrl`` being |1>, exactly (no phase slack)."""
    k = g.kind
    q = g.qubits
    if k is GateKind.X:
        return [cnot(ctrl, q[0])]
    if k is GateKind.Z:
        return [cz(ctrl, q[0])]
    if k is GateKind.H:
        tq = q[0]
        return [s(tq), h(tq), t(tq), cnot(ctrl, tq), tdg(tq), h(tq), sdg(tq)]
    if k is GateKind.S:
        tq = q[0]
        return [t(ctrl), t(tq), cnot(ctrl, tq), tdg(tq), cnot(ctrl, tq)]
    if k is GateKind.SDG:
        tq = q[0]
        return [cnot(ctrl, tq), t(tq), cnot(ctrl, tq), tdg(tq), tdg(ctrl)]
    if k is GateKind.T:
        return [mcp8(2, [ctrl], q[0])]
    if k is GateKind.TDG:
        return [mcp8(-2, [ctrl], q[0])]
    if k is GateKind.CNOT:
        return [ccx(ctrl, q[0], q[1])]
    if k is GateKind.CZ:
        return [h(q[1]), ccx(ctrl, q[0], q[1]), h(q[1])]
    if k in (GateKind.CCX, GateKind.NCX):
        return [ncx((ctrl, *g.controls), g.target, (1, *g.control_polarity()))]
    if k is GateKind.MCP8:
        return [mcp8(g.phase_step, (ctrl, *g.controls), g.target, (1, *g.polarity))]
    if k is GateKind.RZ8:
        # exp(ik pi/8 Z) = exp(ik pi/8) * diag(1, exp(-ik pi/4))
        return [mcp8(g.phase_step, [], ctrl), mcp8(-2 * g.phase_step, [ctrl], q[0])]
    if k is GateKind.RZZ8:
        a, b = q
        return [
            mcp8(g.phase_step, [], ctrl),
            cnot(a, b),
            mcp8(-2 * g.phase_step, [ctrl], b),
            cnot(a, b),
        ]
    raise CircuitError(f"no controlled form for {k}")


def controlled_on(c: Circuit, ctrl: int, polarity: int = 1) -> Circuit:
    """Apply ``c`` only on the branch where ``ctrl`` equals ``polarity``.

    The result acts as the identity on the other branch. T-type phases are
    emitted as native controlled-phase gates (:data:`GateKind.MCP8`) because
    no ancilla-free exact form exists in the H/CNOT/T set.
    """
    if polarity not in (0, 1):
        raise CircuitError(f"polarity must be 0 or 1, got {polarity}")
    if ctrl in c.used_qubits():
        raise CircuitError(f"control qubit {ctrl} collides with the circuit's qubits")
    gates: list[Gate] = []
    for g in c.gates:
        gates.extend(_controlled_gate(g, ctrl))
    if polarity == 0 and gates:
        gates = [x(ctrl), *gates, x(ctrl)]
    return replace(c, num_qubits=max(c.num_qubits, ctrl + 1), gates=tuple(gates))


@dataclass(frozen=True)
class LightCone:
    qubits: frozenset[int]
    for_output: int
    gate_indices: tuple[int, ...] = field(default=(), compare=False)

    def __len__(self) -> int:
        return len(self.qubits)


def _backward_cone(c: Circuit, seeds: Iterable[int]) -> tuple[set[int], list[int]]:
    cone = set(seeds)
    used = []
    for i in range(len(c.gates) - 1, -1, -1):
        qs = c.gates[i].qubits
        if cone.intersection(qs):
            cone.update(qs)
            used.append(i)
    used.reverse()
    return cone, used


def light_cone(c: Circuit, out: int) -> LightCone:
    """Qubits whose inputs can influence ``out`` (reverse dependence closure)."""
    if not 0 <= out < c.num_qubits:
        raise CircuitError(f"qubit {out} out of range for {c.num_qubits} qubits")
    cone, used = _backward_cone(c, [out])
    return LightCone(frozenset(cone), out, tuple(used))


def cone_subcircuit(c: Circuit, outs: Iterable[int]) -> tuple[Circuit, list[int]]:
    """Restrict ``c`` to the union light cone of ``outs``.

    Returns the induced subcircuit over relabelled wires ``0..|S|-1`` and the
    original qubit index of each new wire (ascending). Roles are mapped when
    they fall inside the cone.
    """
    outs = list(outs)
    cone, used = _backward_cone(c, outs)
    order = sorted(cone)
    mapping = {q: i for i, q in enumerate(order)}
    gates = [c.gates[i].shifted(mapping=mapping) for i in used]
    clean = mapping.get(c.clean, None)
    sub = Circuit(len(order), gates, clean_qubit=clean, outputs=[mapping[q] for q in outs])
    return sub, order


def random_circuit(
    n: int,
    num_gates: int,
    rng: np.random.Generator,
    kinds: Sequence[str] = ("H", "T", "CNOT"),
    output: int = 0,
) -> Circuit:
    """Uniform random placements of the given gate kinds (two-qubit kinds need n >= 2)."""
    kinds = [GateKind(k) for k in kinds]
    if n < 2:
        kinds = [k for k in kinds if _FIXED_ARITY.get(k, 2) == 1]
    gates = []
    for _ in range(num_gates):
        kind = kinds[rng.integers(len(kinds))]
        arity = _FIXED_ARITY[kind]
        qubits = rng.choice(n, size=arity, replace=False)
        step = int(rng.integers(16)) if kind in ROTATION_KINDS else 0
        gates.append(Gate(kind, tuple(int(q) for q in qubits), phase_step=step))
    return Circuit(n, gates, outputs=(output,))


def random_layered_circuit(n: int, layers: int, rng: np.random.Generator, two_qubit_rate=0.6) -> Circuit:
    """Random circuit of depth at most ``layers``; each layer has disjoint supports.

    Pairs are drawn between arbitrary wires, not only neighbours.
    """
    singles = [GateKind.H, GateKind.T, GateKind.S, GateKind.X, GateKind.Z, GateKind.TDG, GateKind.RZ8]
    pairs = [GateKind.CNOT, GateKind.CZ, GateKind.RZZ8]
    gates = []
    for _ in range(layers):
        free = list(rng.permutation(n))
        while free:
            if len(free) >= 2 and rng.random() < two_qubit_rate:
                a, b = int(free.pop()), int(free.pop())
                kind = pairs[rng.integers(len(pairs))]
                step = int(rng.integers(1, 16)) if kind is GateKind.RZZ8 else 0
                gates.append(Gate(kind, (a, b), phase_step=step))
            else:
                q = int(free.pop())
                if rng.random() < 0.25:
                    continue
                kind = singles[rng.integers(len(singles))]
                step = int(rng.integers(1, 16)) if kind is GateKind.RZ8 else 0
                gates.append(Gate(kind, (q,), phase_step=step))
    return Circuit(n, gates, outputs=tuple(range(n)))
