"""Circuit builders for the one-clean-qubit hardness gadgets."""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from . import circuit as cc
from .circuit import Circuit, CircuitError, controlled_on, invert
from .decompose import ancillas_needed, lower_toffolis

# greedy depth of any teleport_compile output
TELEPORT_DEPTH = 6
# depth(V_w) <= VW_DEPTH_OFFSET + VW_DEPTH_SLOPE * ceil(log2(max(r, 2)))
VW_DEPTH_OFFSET = TELEPORT_DEPTH + 1
VW_DEPTH_SLOPE = 1


def vw_depth_bound(r: int) -> int:
    return VW_DEPTH_OFFSET + VW_DEPTH_SLOPE * math.ceil(math.log2(max(r, 2)))


@dataclass(frozen=True)
class DwGadget:
    circuit: Circuit
    source_n: int


def lemma1_prediction(p: float, n: int) -> float:
    """DQC1 acceptance of the D-gadget built from an n-qubit circuit with acceptance p."""
    if not 0 <= p <= 1:
        raise ValueError(f"p must lie in [0, 1], got {p}")
    if n < 1:
        raise ValueError(f"n must be positive, got {n}")
    return 4 / 2**n * p * (1 - p)


def build_dw(q: Circuit, out: int | None = None, *, decompose: bool = False) -> DwGadget:
    """One-clean-qubit circuit whose acceptance is ``4/2^n * p * (1 - p)``.

    Wire 0 is the clean qubit and the output; ``q`` is shifted onto wires
    ``1..n``. Sequence: zero-controlled NOT of all ``q`` wires onto wire 0,
    ``q`` controlled on wire 0, CZ between wire 0 and ``q``'s output,
    controlled ``q``-inverse, and the first gate again.

    ``q`` with ``p = 1`` gives acceptance 0 just like ``p = 0``; callers that
    need the nonzero-iff-accepting property must ensure ``p < 1``.

    With ``decompose=True`` every Toffoli-type gate is lowered to the
    H/X/CNOT/T set, borrowing ancillas from extra maximally mixed wires
    appended after the ``q`` register when the circuit has no idle wires.
    """
    n = q.num_qubits
    out = q.output if out is None else out
    if not 0 <= out < n:
        raise CircuitError(f"output {out} out of range")
    shifted = Circuit(n + 1, [g.shifted(1) for g in q.gates], outputs=(0,))
    register = list(range(1, n + 1))
    flag = cc.ncx(register, 0, [0] * n)
    gates = [
        flag,
        *controlled_on(shifted, 0, 1).gates,
        cc.cz(0, out + 1),
        *controlled_on(invert(shifted), 0, 1).gates,
        flag,
    ]
    if not decompose:
        return DwGadget(Circuit(n + 1, gates, clean_qubit=0, outputs=(0,)), n)
    extra = ancillas_needed(n)
    total = n + 1 + extra
    lowered = lower_toffolis(Circuit(total, gates, clean_qubit=0, outputs=(0,)), spare=range(n + 1, total))
    return DwGadget(lowered, n)


@dataclass(frozen=True)
class Teleported:
    """Constant-depth rewrite of a circuit by postselected gate teleportation.

    ``o`` carries the simulated output; ``postselect`` lists the r wires that
    must all read 1 for ``o`` to follow the original circuit.
    """

    circuit: Circuit
    o: int
    postselect: tuple[int, ...]
    source: Circuit = field(repr=False)

    @property
    def r(self) -> int:
        return len(self.postselect)

    @property
    def roles(self) -> dict:
        return {"o": self.o, "p": list(self.postselect)}


def teleport_compile(q: Circuit) -> Teleported:
    """Rewrite ``q`` into a circuit of depth at most :data:`TELEPORT_DEPTH`.

    Every (gate, wire) slot gets a fresh Bell pair ``(a, b)``; the wire's
    current holder is Bell-measured against ``a`` and the gate is applied to
    the ``b`` halves. Each Bell measurement (CNOT, H, then X on both wires)
    reads 11 exactly on the correction-free branch, which occurs with
    probability 1/4 whatever the state. Gates are emitted slot by slot so
    measured wires retire early, which keeps
    :func:`~dqc1sim.exact.postselected_probability` narrow.
    """
    out = q.output
    holder = list(range(q.num_qubits))
    nxt = q.num_qubits
    gates = []
    post = []
    for g in q.gates:
        fresh = {}
        for w in g.qubits:
            a, b = nxt, nxt + 1
            nxt += 2
            old = holder[w]
            gates += [cc.h(a), cc.cnot(a, b), cc.cnot(old, a), cc.h(old), cc.x(old), cc.x(a)]
            post += [old, a]
            holder[w] = b
            fresh[w] = b
        gates.append(g.shifted(mapping=fresh))
    o = holder[out]
    c = Circuit(nxt, gates, clean_qubit=None, outputs=(o, *post))
    return Teleported(c, o, tuple(post), q)


@dataclass(frozen=True)
class VwGadget:
    circuit: Circuit
    l: int
    r: int
    o: int
    p: tuple[int, ...]
    p_prime: int
    o_prime: int
    teleported: Teleported = field(repr=False)

    @property
    def roles(self) -> dict:
        return {"o": self.o, "p": list(self.p), "p_prime": self.p_prime, "o_prime": self.o_prime}


def build_vw(q: Circuit) -> VwGadget:
    """Log-depth circuit with ``P(o' = 0) = p / 2^r`` on input |0...0>.

    Appends to the teleported circuit a balanced Toffoli tree computing the
    AND of the postselection bits into fresh zero wires (result ``p'``), then
    sets ``o' = NOT(o AND p')`` on a last, fresh wire.
    """
    tel = teleport_compile(q)
    gates = list(tel.circuit.gates)
    nxt = tel.circuit.num_qubits
    level = list(tel.postselect)
    if not level:
        p_prime = nxt
        nxt += 1
        gates.append(cc.x(p_prime))
    else:
        while len(level) > 1:
            merged = []
            for i in range(0, len(level) - 1, 2):
                gates.append(cc.ccx(level[i], level[i + 1], nxt))
                merged.append(nxt)
                nxt += 1
            if len(level) % 2:
                merged.append(level[-1])
            level = merged
        p_prime = level[0]
    o_prime = nxt
    gates += [cc.x(o_prime), cc.ccx(tel.o, p_prime, o_prime)]
    c = Circuit(o_prime + 1, gates, clean_qubit=o_prime, outputs=(o_prime,))
    return VwGadget(c, o_prime, tel.r, tel.o, tel.postselect, p_prime, o_prime, tel)


@dataclass(frozen=True)
class IqpSpec:
    """Commuting-gate circuit on ``l + 1`` wires; wire 0 is the clean qubit.

    ``edges`` are CZ pairs over 0-based wires, ``theta[j]`` the multiplier of
    pi/8 in ``exp(i theta_j Z_j)``, and ``edge_theta`` optional multipliers of
    ``exp(i theta Z_a Z_b)`` keyed by wire pairs.
    """

    l: int
    edges: frozenset = frozenset()
    theta: tuple[int, ...] = ()
    edge_theta: dict = field(default_factory=dict)
    outputs: tuple[int, ...] | None = None

    def __post_init__(self):
        n = self.l + 1
        if self.l < 0:
            raise CircuitError("l must be non-negative")
        edges = frozenset(_pair(e, n) for e in self.edges)
        theta = tuple(int(k) % 16 for k in self.theta) or (0,) * n
        if len(theta) != n:
            raise CircuitError(f"theta needs {n} entries, got {len(theta)}")
        zz = {}
        for e, k in dict(self.edge_theta).items():
            e = _pair(e, n)
            zz[e] = (zz.get(e, 0) + int(k)) % 16
        zz = {e: k for e, k in sorted(zz.items(), key=lambda kv: sorted(kv[0])) if k}
        outputs = tuple(range(n)) if self.outputs is None else tuple(int(q) for q in self.outputs)
        if not outputs or len(set(outputs)) != len(outputs) or any(not 0 <= q < n for q in outputs):
            raise CircuitError(f"invalid outputs {outputs}")
        object.__setattr__(self, "edges", edges)
        object.__setattr__(self, "theta", theta)
        object.__setattr__(self, "edge_theta", zz)
        object.__setattr__(self, "outputs", outputs)

    @property
    def num_qubits(self) -> int:
        return self.l + 1


def _pair(e, n) -> frozenset:
    a, b = (int(v) for v in e)
    if a == b:
        raise CircuitError(f"self-loop on wire {a}")
    if not (0 <= a < n and 0 <= b < n):
        raise CircuitError(f"edge {a}-{b} out of range")
    return frozenset((a, b))


def build_iqp_dqc1(spec: IqpSpec) -> Circuit:
    n = spec.num_qubits
    layer = [cc.h(j) for j in range(n)]
    diag = [cc.cz(*sorted(e)) for e in sorted(spec.edges, key=sorted)]
    diag += [cc.rz8(k, j) for j, k in enumerate(spec.theta) if k]
    diag += [cc.rzz8(k, *sorted(e)) for e, k in spec.edge_theta.items()]
    return Circuit(n, [*layer, *diag, *layer], clean_qubit=0, outputs=spec.outputs)


_DIAG_AS_RZ8 = {
    cc.GateKind.Z: -4,
    cc.GateKind.S: -2,
    cc.GateKind.SDG: 2,
    cc.GateKind.T: -1,
    cc.GateKind.TDG: 1,
}


def iqp_spec_from_circuit(c: Circuit) -> IqpSpec:
    """Recover an :class:`IqpSpec` from a Hadamard / diagonal / Hadamard circuit.

    Single-qubit diagonal gates are folded into Z-rotations up to global
    phase. Raises :class:`CircuitError` if ``c`` is not of that shape or its
    clean qubit is not wire 0.
    """
    n = c.num_qubits
    gs = list(c.gates)
    if c.clean != 0:
        raise CircuitError("IQP circuits use wire 0 as the clean qubit")
    if len(gs) < 2 * n:
        raise CircuitError("not an IQP circuit: missing Hadamard layers")
    head, body, tail = gs[:n], gs[n : len(gs) - n], gs[len(gs) - n :]
    for part in (head, tail):
        if sorted(g.qubits[0] for g in part if g.kind is cc.GateKind.H) != list(range(n)):
            raise CircuitError("not an IQP circuit: outer layers must be one H per wire")
    edges: set = set()
    theta = [0] * n
    zz: dict = {}
    for g in body:
        if g.kind is cc.GateKind.CZ:
            edges ^= {frozenset(g.qubits)}
        elif g.kind is cc.GateKind.RZ8:
            theta[g.qubits[0]] += g.phase_step
        elif g.kind in _DIAG_AS_RZ8:
            theta[g.qubits[0]] += _DIAG_AS_RZ8[g.kind]
        elif g.kind is cc.GateKind.RZZ8:
            e = frozenset(g.qubits)
            zz[e] = zz.get(e, 0) + g.phase_step
        else:
            raise CircuitError(f"not an IQP circuit: {g.kind.value} is not a commuting diagonal gate")
    return IqpSpec(n - 1, frozenset(edges), tuple(theta), zz, c.outputs)
