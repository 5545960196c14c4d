"""Gate teleportation over parallel and series Bell-pair networks under LOCC."""

from .errors import (
    EntanglementError,
    ImpossibleBranchError,
    InvolutionRequired,
    LocalityViolation,
    MissingMessage,
    TelegateError,
    TopologyMismatch,
)
from .gates import (
    Gate,
    GateFlags,
    InvolutionCertificate,
    controlled,
    hadamard,
    identity,
    involution_certificate,
    parse_gate_spec,
    pauli_x,
    pauli_z,
    random_involution,
    random_unitary,
    validate,
)
from .statevector import (
    MeasurementBasis,
    MeasurementRecord,
    StateVector,
    apply_gate,
    basis_state,
    discard_qubit,
    fidelity_up_to_phase,
    permute_qubits,
    project_measure,
    random_state,
    tensor,
)
from .network import (
    BellEdge,
    ClassicalMessage,
    CostLedger,
    Network,
    Party,
    Role,
    Topology,
    TopologyKind,
    bell_state,
    build_network,
)
from .protocols import (
    ProtocolFamily,
    ProtocolSpec,
    measurement_schedule,
    oracle_effect,
    run_parallel_simultaneous_cu,
    run_protocol,
    run_series_ncu,
    run_series_simultaneous_ch,
    topology_for,
)
from .verify import (
    BranchResult,
    VerificationReport,
    brute_force_oracle,
    check_costs,
    enumerate_branches,
    expected_costs,
    verify_inputs,
    verify_protocol,
)

__version__ = "0.1.0"

__all__ = [
    "EntanglementError",
    "ImpossibleBranchError",
    "InvolutionRequired",
    "LocalityViolation",
    "MissingMessage",
    "TelegateError",
    "TopologyMismatch",
    "Gate",
    "GateFlags",
    "InvolutionCertificate",
    "controlled",
    "hadamard",
    "identity",
    "involution_certificate",
    "parse_gate_spec",
    "pauli_x",
    "pauli_z",
    "random_involution",
    "random_unitary",
    "validate",
    "MeasurementBasis",
    "MeasurementRecord",
    "StateVector",
    "apply_gate",
    "basis_state",
    "discard_qubit",
    "fidelity_up_to_phase",
    "permute_qubits",
    "project_measure",
    "random_state",
    "tensor",
    "BellEdge",
    "ClassicalMessage",
    "CostLedger",
    "Network",
    "Party",
    "Role",
    "Topology",
    "TopologyKind",
    "bell_state",
    "build_network",
    "ProtocolFamily",
    "ProtocolSpec",
    "measurement_schedule",
    "oracle_effect",
    "run_parallel_simultaneous_cu",
    "run_protocol",
    "run_series_ncu",
    "run_series_simultaneous_ch",
    "topology_for",
    "BranchResult",
    "VerificationReport",
    "brute_force_oracle",
    "check_costs",
    "enumerate_branches",
    "expected_costs",
    "verify_inputs",
    "verify_protocol",
]
