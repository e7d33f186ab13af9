"""Lowering of multi-controlled NOT gates to {H, X, CNOT, T, T-dagger}.

All constructions use *borrowed* ancillas: helper wires in an arbitrary,
unknown state that are returned to that state afterwards. Budget by control
count ``k``:

* ``k <= 2``: none (CNOT, or the seven-T Toffoli network);
* ``3 <= k <= 4``: ``k - 2`` ancillas, V-shaped Toffoli ladder;
* ``k >= 5``: two ancillas, split into two halves that borrow each other.
"""

from __future__ import annotations

from typing import Sequence

from .circuit import Circuit, CircuitError, Gate, GateKind, cnot, h, t, tdg, x


def ancillas_needed(k: int) -> int:
    if k <= 2:
        return 0
    if k <= 4:
        return k - 2
    return 2


def toffoli_network(c1: int, c2: int, target: int) -> list[Gate]:
    """Exact Toffoli (no global phase) with seven T-type gates."""
    return [
        h(target),
        cnot(c2, target),
        tdg(target),
        cnot(c1, target),
        t(target),
        cnot(c2, target),
        tdg(target),
        cnot(c1, target),
        t(c2),
        t(target),
        h(target),
        cnot(c1, c2),
        t(c1),
        tdg(c2),
        cnot(c1, c2),
    ]


def _ladder(controls: Sequence[int], target: int, ancillas: Sequence[int]) -> list[tuple[int, int, int]]:
    """Toffoli triples for k >= 3 controls using k - 2 borrowed ancillas.

    The ladder is applied twice so every ancilla returns to its input value
    while the target picks up the AND of all controls.
    """
    k = len(controls)
    a = list(ancillas[: k - 2])
    top = (controls[k - 1], a[k - 3], target)
    down = [(controls[i], a[i - 2], a[i - 1]) for i in range(k - 2, 1, -1)]
    bottom = (controls[0], controls[1], a[0])
    half = [top, *down, bottom, *reversed(down)]
    return half + half


def _mcx_triples(controls: Sequence[int], target: int, ancillas: Sequence[int]) -> list[tuple[int, ...]]:
    """Multi-controlled X as a list of CNOT pairs / Toffoli triples (all positive controls)."""
    k = len(controls)
    if k == 1:
        return [(controls[0], target)]
    if k == 2:
        return [(controls[0], controls[1], target)]
    if len(ancillas) >= k - 2:
        return _ladder(controls, target, ancillas)
    if k <= 4 or len(ancillas) < 2:
        raise CircuitError(f"{k} controls need {ancillas_needed(k)} borrowed ancillas, got {len(ancillas)}")
    pivot, spare = ancillas[0], ancillas[1]
    m1 = (k + 1) // 2
    first, second = list(controls[:m1]), list(controls[m1:])
    # each half borrows wires that are idle during that half
    lower = _mcx_triples(first, pivot, [*second, target, spare])
    upper = _mcx_triples([*second, pivot], target, [*first, spare])
    return lower + upper + lower + upper


def decompose_mcx(
    controls: Sequence[int],
    target: int,
    polarity: Sequence[int] | None = None,
    ancillas: Sequence[int] = (),
) -> list[Gate]:
    """Gate list for the multi-controlled X on the given wires."""
    controls = list(controls)
    if not controls:
        raise CircuitError("need at least one control")
    polarity = [1] * len(controls) if polarity is None else list(polarity)
    if len(polarity) != len(controls):
        raise CircuitError("polarity length does not match control count")
    need = ancillas_needed(len(controls))
    ancillas = list(ancillas)[:need] if need else []
    if len(ancillas) < need:
        raise CircuitError(f"{len(controls)} controls need {need} borrowed ancillas, got {len(ancillas)}")
    wires = [*controls, target, *ancillas]
    if len(set(wires)) != len(wires):
        raise CircuitError("ancillas, controls and target must be distinct")

    flips = [x(c) for c, b in zip(controls, polarity) if b == 0]
    gates = list(flips)
    for item in _mcx_triples(controls, target, ancillas):
        if len(item) == 2:
            gates.append(cnot(*item))
        else:
            gates.extend(toffoli_network(*item))
    gates.extend(flips)
    return gates


def decompose_generalized_toffoli(
    k: int,
    polarity: Sequence[int] | None = None,
    ancillas: Sequence[int] | None = None,
    *,
    controls: Sequence[int] | None = None,
    target: int | None = None,
) -> Circuit:
    """Circuit realising the k-controlled NOT with borrowed ancillas.

    By default controls are wires ``0..k-1``, the target is wire ``k`` and the
    ancillas follow. The returned circuit uses only H, X, CNOT, T and T-dagger.
    """
    if k < 1:
        raise CircuitError("k must be at least 1")
    controls = list(range(k)) if controls is None else list(controls)
    if len(controls) != k:
        raise CircuitError("control list length must equal k")
    target = k if target is None else target
    if ancillas is None:
        start = max([*controls, target]) + 1
        ancillas = list(range(start, start + ancillas_needed(k)))
    gates = decompose_mcx(controls, target, polarity, ancillas)
    used = [*controls, target, *list(ancillas)[: ancillas_needed(k)]]
    return Circuit(max(used) + 1, gates, outputs=(target,))


def lower_toffolis(c: Circuit, spare: Sequence[int] = ()) -> Circuit:
    """Replace every CCX/NCX in ``c`` by its decomposition.

    Borrowed ancillas are taken from ``spare`` first, then from any other wire
    of the circuit not touched by the gate being lowered.
    """
    out: list[Gate] = []
    for g in c.gates:
        if g.kind not in (GateKind.CCX, GateKind.NCX):
            out.append(g)
            continue
        controls, target = list(g.controls), g.target
        need = ancillas_needed(len(controls))
        busy = set(g.qubits)
        pool = [q for q in spare if q not in busy]
        pool += [q for q in range(c.num_qubits) if q not in busy and q not in pool]
        if len(pool) < need:
            raise CircuitError(f"not enough idle wires to lower {g}: need {need}")
        out.extend(decompose_mcx(controls, target, g.control_polarity(), pool[:need]))
    return c.with_gates(out)
