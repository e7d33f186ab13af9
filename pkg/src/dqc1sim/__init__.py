"""Exact simulation of one-clean-qubit circuits and the gadgets built on them."""

from .circuit import (
    Circuit,
    CircuitError,
    Gate,
    GateKind,
    LightCone,
    concat,
    controlled_on,
    depth,
    invert,
    light_cone,
    validate,
)
from .decompose import decompose_generalized_toffoli, lower_toffolis
from .exact import (
    CapExceededError,
    Dqc1Spec,
    OutcomeDistribution,
    StateVector,
    acceptance_probability,
    apply_circuit,
    check_additive,
    check_multiplicative,
    dqc1_acceptance,
    dqc1m_distribution,
    output_probability,
    postselected_probability,
    unitary_of,
)
from .fileformat import ParseError, format_circuit, parse_circuit_file
from .gadgets import (
    IqpSpec,
    build_dw,
    build_iqp_dqc1,
    build_vw,
    iqp_spec_from_circuit,
    lemma1_prediction,
    teleport_compile,
)
from .strongsim import (
    ConeCapExceeded,
    strongsim_constdepth_marginal,
    strongsim_constdepth_point,
    strongsim_iqp,
)

__all__ = [
    "decompose_generalized_toffoli",
    "lower_toffolis",
    "ParseError",
    "format_circuit",
    "parse_circuit_file",
    "Circuit",
    "CircuitError",
    "Gate",
    "GateKind",
    "LightCone",
    "concat",
    "controlled_on",
    "depth",
    "invert",
    "light_cone",
    "validate",
    "CapExceededError",
    "Dqc1Spec",
    "OutcomeDistribution",
    "StateVector",
    "acceptance_probability",
    "apply_circuit",
    "check_additive",
    "check_multiplicative",
    "dqc1_acceptance",
    "dqc1m_distribution",
    "output_probability",
    "postselected_probability",
    "unitary_of",
    "IqpSpec",
    "build_dw",
    "build_iqp_dqc1",
    "build_vw",
    "iqp_spec_from_circuit",
    "lemma1_prediction",
    "teleport_compile",
    "ConeCapExceeded",
    "strongsim_constdepth_marginal",
    "strongsim_constdepth_point",
    "strongsim_iqp",
]
