"""Line-oriented circuit file format.

::

    # comment
    qubits 3
    clean 0            # optional, default 0
    outputs 0 2
    H 0
    CNOT 0 1           # control, target
    NCX 10 0 1 2       # polarity bits, controls..., target
    RZ8 2 0            # exp(i 2pi/8 Z) on wire 0
    RZZ8 1 0 2
    MCP8 2 1 0 1       # phase 2pi/8, polarity bits ('-' for none), controls..., target

Other gate lines: ``X q``, ``Z q``, ``S q``, ``SDG q``, ``T q``, ``TDG q``,
``CZ a b``, ``CCX c1 c2 t``.
"""

from __future__ import annotations

from .circuit import Circuit, CircuitError, Gate, GateKind

_SIMPLE = {
    "H": (GateKind.H, 1),
    "X": (GateKind.X, 1),
    "Z": (GateKind.Z, 1),
    "S": (GateKind.S, 1),
    "SDG": (GateKind.SDG, 1),
    "T": (GateKind.T, 1),
    "TDG": (GateKind.TDG, 1),
    "CNOT": (GateKind.CNOT, 2),
    "CZ": (GateKind.CZ, 2),
    "CCX": (GateKind.CCX, 3),
}
_ROTATIONS = {"RZ8": (GateKind.RZ8, 1), "RZZ8": (GateKind.RZZ8, 2)}


class ParseError(ValueError):
    def __init__(self, message: str, line: int, column: int = 1):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column


def _tokens(raw: str) -> list[tuple[str, int]]:
    """Whitespace-separated tokens with 1-based columns, comments removed."""
    text = raw.split("#", 1)[0]
    out = []
    col = 0
    for part in text.split():
        col = text.index(part, col)
        out.append((part, col + 1))
        col += len(part)
    return out


def _int(tok: tuple[str, int], lineno: int) -> int:
    try:
        return int(tok[0])
    except ValueError:
        raise ParseError(f"expected an integer, got {tok[0]!r}", lineno, tok[1]) from None


def _bits(tok: tuple[str, int], lineno: int) -> tuple[int, ...]:
    if tok[0] == "-":
        return ()
    if not tok[0] or set(tok[0]) - {"0", "1"}:
        raise ParseError(f"expected polarity bits, got {tok[0]!r}", lineno, tok[1])
    return tuple(int(ch) for ch in tok[0])


def _expect(toks, count, lineno, name):
    if len(toks) != count:
        col = toks[count][1] if len(toks) > count else (toks[-1][1] if toks else 1)
        raise ParseError(f"{name} takes {count - 1} arguments, got {len(toks) - 1}", lineno, col)


def _gate(toks, lineno) -> Gate:
    name, col = toks[0]
    key = name.upper()
    if key in _SIMPLE:
        kind, arity = _SIMPLE[key]
        _expect(toks, arity + 1, lineno, key)
        return Gate(kind, tuple(_int(t, lineno) for t in toks[1:]))
    if key in _ROTATIONS:
        kind, arity = _ROTATIONS[key]
        _expect(toks, arity + 2, lineno, key)
        return Gate(kind, tuple(_int(t, lineno) for t in toks[2:]), phase_step=_int(toks[1], lineno))
    if key == "NCX":
        if len(toks) < 2:
            raise ParseError("NCX needs polarity bits", lineno, col)
        pol = _bits(toks[1], lineno)
        _expect(toks, len(pol) + 3, lineno, "NCX")
        return Gate(GateKind.NCX, tuple(_int(t, lineno) for t in toks[2:]), pol)
    if key == "MCP8":
        if len(toks) < 3:
            raise ParseError("MCP8 needs a phase step and polarity bits", lineno, col)
        pol = _bits(toks[2], lineno)
        _expect(toks, len(pol) + 4, lineno, "MCP8")
        return Gate(GateKind.MCP8, tuple(_int(t, lineno) for t in toks[3:]), pol, _int(toks[1], lineno))
    raise ParseError(f"unknown gate or directive {name!r}", lineno, col)


def parse_circuit_file(text: str) -> Circuit:
    num_qubits = None
    clean = 0
    outputs = None
    gates: list[Gate] = []
    gate_lines: list[int] = []
    for lineno, raw in enumerate(text.splitlines(), start=1):
        toks = _tokens(raw)
        if not toks:
            continue
        head = toks[0][0].lower()
        if head == "qubits":
            _expect(toks, 2, lineno, "qubits")
            num_qubits = _int(toks[1], lineno)
        elif head == "clean":
            _expect(toks, 2, lineno, "clean")
            clean = _int(toks[1], lineno)
        elif head == "outputs":
            if len(toks) < 2:
                raise ParseError("outputs needs at least one qubit", lineno, toks[0][1])
            outputs = [_int(t, lineno) for t in toks[1:]]
        else:
            gates.append(_gate(toks, lineno))
            gate_lines.append(lineno)
    if num_qubits is None:
        raise ParseError("missing 'qubits' header", 1)
    if outputs is None:
        raise ParseError("missing 'outputs' header", 1)
    try:
        return Circuit(num_qubits, gates, clean_qubit=clean, outputs=outputs)
    except CircuitError as exc:
        msg = str(exc)
        if msg.startswith("gate "):
            idx = int(msg.split()[1])
            raise ParseError(msg, gate_lines[idx]) from exc
        raise ParseError(msg, 1) from exc


def format_circuit(c: Circuit) -> str:
    lines = [f"qubits {c.num_qubits}", f"clean {c.clean}", "outputs " + " ".join(map(str, c.outputs))]
    lines += [str(g) for g in c.gates]
    return "\n".join(lines) + "\n"
