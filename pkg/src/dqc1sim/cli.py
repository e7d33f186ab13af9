"""Command-line entry point.

Every command writes one JSON report to stdout. Exit status: 0 when the
verdict passes, 1 when it fails, 2 on usage, parse or size-cap errors.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
import time

import numpy as np

from .circuit import CircuitError, random_circuit
from .exact import (
    DEFAULT_ENSEMBLE_CAP,
    CapExceededError,
    Dqc1Spec,
    acceptance_probability,
    dqc1_acceptance,
    dqc1m_distribution,
)
from .fileformat import ParseError, format_circuit, parse_circuit_file
from .gadgets import build_dw, build_vw, iqp_spec_from_circuit, lemma1_prediction
from .strongsim import (
    DEFAULT_CONE_CAP,
    ConeCapExceeded,
    strongsim_constdepth_distribution,
    strongsim_constdepth_marginal_distribution,
    strongsim_iqp_distribution,
)

DEFAULT_TOLERANCE = 1e-10


class UsageError(Exception):
    pass


def _digest(text: str) -> str:
    return hashlib.sha256(text.encode()).hexdigest()


def cmd_demo_lemma1(
    n: int,
    trials: int,
    seed: int,
    tolerance: float = DEFAULT_TOLERANCE,
    max_gates: int = 40,
    ensemble_cap: int = DEFAULT_ENSEMBLE_CAP,
    decompose: bool = False,
) -> dict:
    """Compare simulated and predicted D-gadget acceptance on seeded random circuits."""
    if n < 1:
        raise UsageError("n must be positive")
    if n > ensemble_cap:
        raise CapExceededError(f"n={n} exceeds the ensemble cap of {ensemble_cap}")
    rng = np.random.default_rng(seed)
    rows = []
    worst = 0.0
    slack = None
    for _ in range(trials):
        q = random_circuit(n, int(rng.integers(0, max_gates + 1)), rng)
        p = acceptance_probability(q)
        gadget = build_dw(q, decompose=decompose)
        simulated = dqc1_acceptance(Dqc1Spec(gadget.circuit), ensemble_cap + 2)
        predicted = lemma1_prediction(p, n)
        worst = max(worst, abs(simulated - predicted))
        if p <= 0.5:
            s = min(simulated - 2 * p / 2**n, 4 * p / 2**n - simulated)
            slack = s if slack is None else min(slack, s)
        rows.append({"gates": len(q), "p": p, "predicted": predicted, "simulated": simulated})
    sb_ok = slack is None or slack >= -tolerance
    return {
        "n": n,
        "trials": trials,
        "seed": seed,
        "max_gates": max_gates,
        "decompose_toffoli": decompose,
        "max_deviation": worst,
        "sb_gap_min_slack": slack,
        "sb_gap_ok": sb_ok,
        "results": rows,
        "verdict": "pass" if worst <= tolerance and sb_ok else "fail",
    }


def cmd_compare(
    text: str,
    method: str,
    outputs=None,
    marginal=None,
    tolerance: float = DEFAULT_TOLERANCE,
    cone_cap: int = DEFAULT_CONE_CAP,
    ensemble_cap: int = DEFAULT_ENSEMBLE_CAP,
) -> dict:
    """Run a strong simulator and the brute-force oracle on one circuit file."""
    c = parse_circuit_file(text)
    if outputs:
        c = c.with_roles(outputs=outputs)
    targets = list(marginal) if marginal else list(c.outputs)
    if method == "constdepth":
        spec = Dqc1Spec(c)
        if targets == list(range(c.num_qubits)):
            strong = strongsim_constdepth_distribution(spec, cone_cap)
        else:
            strong = strongsim_constdepth_marginal_distribution(spec, targets, cone_cap)
    elif method == "iqp":
        iqp = iqp_spec_from_circuit(c.with_roles(outputs=targets))
        strong = strongsim_iqp_distribution(iqp)
    else:
        raise UsageError(f"unknown method {method!r}")
    oracle = dqc1m_distribution(Dqc1Spec(c, output_qubits=targets), ensemble_cap)
    deviation = float(np.max(np.abs(strong.probs - oracle.probs)))
    return {
        "method": method,
        "input_sha256": _digest(text),
        "num_qubits": c.num_qubits,
        "clean_qubit": c.clean,
        "outputs": targets,
        "strong": strong.as_dict(),
        "oracle": oracle.as_dict(),
        "max_deviation": deviation,
        "verdict": "pass" if deviation <= tolerance else "fail",
    }


def cmd_simulate(text: str, ensemble_cap: int = DEFAULT_ENSEMBLE_CAP) -> dict:
    c = parse_circuit_file(text)
    dist = dqc1m_distribution(Dqc1Spec(c), ensemble_cap)
    report = {
        "input_sha256": _digest(text),
        "num_qubits": c.num_qubits,
        "clean_qubit": c.clean,
        "outputs": list(c.outputs),
        "distribution": dist.as_dict(),
        "verdict": "pass",
    }
    if len(c.outputs) == 1:
        report["pure_acceptance"] = acceptance_probability(c)
    return report


def cmd_build(text: str, gadget: str, decompose: bool = False) -> dict:
    q = parse_circuit_file(text)
    report = {"gadget": gadget, "input_sha256": _digest(text), "verdict": "pass"}
    if gadget == "dw":
        built = build_dw(q, decompose=decompose)
        report["source_n"] = built.source_n
    else:
        built = build_vw(q)
        report.update(l=built.l, r=built.r, roles=built.roles)
    report["circuit"] = format_circuit(built.circuit)
    return report


def _parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="dqc1sim", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, cone=False):
        p.add_argument("--tolerance", type=float, default=DEFAULT_TOLERANCE)
        p.add_argument("--ensemble-cap", type=int, default=DEFAULT_ENSEMBLE_CAP)
        if cone:
            p.add_argument("--cone-cap", type=int, default=DEFAULT_CONE_CAP)

    demo = sub.add_parser("demo-lemma1", help="sweep random circuits through the D gadget")
    demo.add_argument("--n", type=int, required=True)
    demo.add_argument("--trials", type=int, default=100)
    demo.add_argument("--seed", type=int, default=0)
    demo.add_argument("--max-gates", type=int, default=40)
    demo.add_argument("--decompose-toffoli", action="store_true")
    common(demo)

    cmp_ = sub.add_parser("compare", help="strong simulator versus brute-force oracle")
    cmp_.add_argument("file")
    cmp_.add_argument("--method", choices=["constdepth", "iqp"], required=True)
    cmp_.add_argument("--outputs", type=int, nargs="+")
    cmp_.add_argument("--marginal", type=int, nargs="+", help="compare the marginal on these wires")
    common(cmp_, cone=True)

    sim = sub.add_parser("simulate", help="exact one-clean-qubit output distribution")
    sim.add_argument("file")
    sim.add_argument("--ensemble-cap", type=int, default=DEFAULT_ENSEMBLE_CAP)

    build = sub.add_parser("build", help="print a gadget circuit built from a file")
    build.add_argument("gadget", choices=["dw", "vw"])
    build.add_argument("file")
    build.add_argument("--decompose-toffoli", action="store_true")
    return parser


def _read(path: str) -> str:
    if path == "-":
        return sys.stdin.read()
    with open(path) as fh:
        return fh.read()


def main(argv=None) -> int:
    parser = _parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return 2 if exc.code else 0
    start = time.perf_counter()
    try:
        if args.command == "demo-lemma1":
            body = cmd_demo_lemma1(
                args.n,
                args.trials,
                args.seed,
                args.tolerance,
                args.max_gates,
                args.ensemble_cap,
                args.decompose_toffoli,
            )
        elif args.command == "compare":
            body = cmd_compare(
                _read(args.file),
                args.method,
                args.outputs,
                args.marginal,
                args.tolerance,
                args.cone_cap,
                args.ensemble_cap,
            )
        elif args.command == "simulate":
            body = cmd_simulate(_read(args.file), args.ensemble_cap)
        else:
            body = cmd_build(_read(args.file), args.gadget, args.decompose_toffoli)
    except ConeCapExceeded as exc:
        print(f"error: light cone exceeds cap: {exc}", file=sys.stderr)
        return 2
    except (ParseError, CircuitError, CapExceededError, UsageError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2
    report = {
        "command": args.command,
        "args": {k: v for k, v in sorted(vars(args).items()) if k != "command"},
        "tolerance": getattr(args, "tolerance", None),
        **body,
        "wall_clock_seconds": time.perf_counter() - start,
    }
    print(json.dumps(report, indent=2, sort_keys=True))
    return 0 if report["verdict"] == "pass" else 1


if __name__ == "__main__":
    sys.exit(main())
