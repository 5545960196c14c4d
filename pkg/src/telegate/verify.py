"""Exhaustive branch enumeration and cost-formula checking.

Every protocol claim is decided, not sampled: all 2^(2(n-1)) measurement
branches are forced one by one, each final state is compared against the
ideal-effect oracle, branch probabilities are accumulated, and the ledger is
matched against the closed-form ebit/cbit costs with integer exactness.
"""

from __future__ import annotations

import itertools
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .errors import ImpossibleBranchError
from .network import CostLedger, build_network
from .protocols import (
    ProtocolFamily,
    ProtocolSpec,
    oracle_effect,
    run_protocol,
    topology_for,
)
from .statevector import StateVector, basis_state, fidelity_up_to_phase, random_state

FIDELITY_ATOL = 1e-10
PROBABILITY_ATOL = 1e-9


@dataclass(frozen=True, slots=True)
class BranchResult:
    """One forced measurement-outcome assignment and what it produced."""

    outcomes: tuple[int, ...]
    probability: float
    fidelity: float
    ledger: CostLedger
    impossible: bool = False


@dataclass(frozen=True, slots=True)
class VerificationReport:
    spec: ProtocolSpec
    trials: int
    min_fidelity: float
    max_probability_deviation: float
    cost_ok: bool
    probability_sums_ok: bool
    branches: tuple[BranchResult, ...]

    @property
    def passed(self) -> bool:
        return (
            self.min_fidelity >= 1.0 - FIDELITY_ATOL
            and self.cost_ok
            and self.probability_sums_ok
        )


def expected_costs(family: ProtocolFamily, n: int) -> tuple[int, int]:
    """Closed-form (ebits, cbits) for a complete n-party run."""
    if family is ProtocolFamily.SERIES_SIMULTANEOUS_CH:
        return n - 1, (n * n + n - 2) // 2
    return n - 1, 2 * (n - 1)


def check_costs(spec: ProtocolSpec, ledger: CostLedger) -> bool:
    """True iff the ledger matches the family's closed form exactly."""
    return (ledger.ebits, ledger.cbits) == expected_costs(spec.family, spec.n)


def enumerate_branches(
    spec: ProtocolSpec,
    input_state: StateVector,
    *,
    enforce_involution: bool = True,
    max_workers: int = 1,
) -> list[BranchResult]:
    """Force every outcome assignment through the protocol, one branch each.

    Impossible branches (probability below 1e-12) are retained with their
    flag set rather than raising.  Branches are independent, so they may be
    fanned out to a thread pool; results come back in outcome order either
    way.
    """
    spec.validate(enforce_involution=enforce_involution)
    base, _ = build_network(topology_for(spec.family), spec.n, input_state)
    target = oracle_effect(spec, input_state)
    assignments = list(itertools.product((0, 1), repeat=spec.num_measurements))

    def evaluate(bits: tuple[int, ...]) -> BranchResult:
        net = base.copy()
        try:
            final = run_protocol(spec, net, bits, enforce_involution=enforce_involution)
        except ImpossibleBranchError:
            probability = float(np.prod(net.measurement_probabilities()))
            return BranchResult(bits, probability, 0.0, net.ledger.copy(), impossible=True)
        probability = float(np.prod(net.measurement_probabilities()))
        fidelity = fidelity_up_to_phase(final, target)
        return BranchResult(bits, probability, fidelity, net.ledger.copy())

    if max_workers > 1:
        with ThreadPoolExecutor(max_workers=max_workers) as pool:
            return list(pool.map(evaluate, assignments))
    return [evaluate(bits) for bits in assignments]


def _all_basis_states(n: int) -> list[StateVector]:
    return [basis_state(n, format(i, f"0{n}b")) for i in range(1 << n)]


def verify_inputs(
    spec: ProtocolSpec,
    inputs: list[StateVector],
    *,
    max_workers: int = 1,
) -> VerificationReport:
    """Enumerate every branch for every input and aggregate the verdict."""
    uniform = 2.0 ** -spec.num_measurements
    min_fidelity = float("inf")
    max_deviation = 0.0
    cost_ok = True
    sums_ok = True
    worst_branches: tuple[BranchResult, ...] = ()
    for state in inputs:
        branches = enumerate_branches(spec, state, max_workers=max_workers)
        low = min(b.fidelity for b in branches)
        if low < min_fidelity:
            min_fidelity = low
            worst_branches = tuple(branches)
        max_deviation = max(
            max_deviation, max(abs(b.probability - uniform) for b in branches)
        )
        cost_ok = cost_ok and all(check_costs(spec, b.ledger) for b in branches)
        sums_ok = sums_ok and abs(sum(b.probability for b in branches) - 1.0) <= PROBABILITY_ATOL
    return VerificationReport(
        spec=spec,
        trials=len(inputs),
        min_fidelity=min_fidelity,
        max_probability_deviation=max_deviation,
        cost_ok=cost_ok,
        probability_sums_ok=sums_ok,
        branches=worst_branches,
    )


def verify_protocol(
    spec: ProtocolSpec,
    num_random_inputs: int = 20,
    seed: int | None = 0,
    *,
    max_workers: int = 1,
) -> VerificationReport:
    """Run the full sweep: every computational basis input plus random states."""
    spec.validate()
    rng = np.random.default_rng(seed)
    inputs = _all_basis_states(spec.n)
    inputs += [random_state(spec.n, rng) for _ in range(num_random_inputs)]
    return verify_inputs(spec, inputs, max_workers=max_workers)


def brute_force_oracle(spec: ProtocolSpec, input_state: StateVector) -> StateVector:
    """Ground-truth effect built as an explicit 2^n x 2^n matrix.

    Deliberately independent of the gate-embedding machinery: the matrix is
    assembled column by column with plain index arithmetic, then multiplied
    against the input amplitudes.
    """
    n = spec.n
    if n > 7:
        raise ValueError(f"brute-force oracle capped at 7 parties, got {n}")
    if input_state.num_qubits != n:
        raise ValueError(
            f"input has {input_state.num_qubits} qubits, spec expects {n}"
        )
    u = spec.payload.matrix
    dim = 1 << n
    matrix = np.zeros((dim, dim), dtype=np.complex128)
    for col in range(dim):
        controls = [(col >> (n - 1 - q)) & 1 for q in range(n - 1)]
        target_bit = col & 1
        if spec.family is ProtocolFamily.SERIES_N_CONTROLLED_U:
            power = 1 if all(controls) else 0
        else:
            power = sum(controls)
        uk = np.linalg.matrix_power(u, power)
        base = col - target_bit
        matrix[base, col] = uk[0, target_bit]
        matrix[base + 1, col] = uk[1, target_bit]
    return StateVector(n, matrix @ input_state.amplitudes)
