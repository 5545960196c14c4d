"""LOCC world model: parties, Bell-pair distribution, and a classical bus.

A :class:`Network` owns the joint statevector, a qubit-ownership map, the
entanglement topology, and a message bus that counts classical bits per
(sender, recipient) delivery.  Local operations are gated by ownership: a
party touching a qubit it does not hold raises :class:`LocalityViolation`,
which is the core safety property of the model.

Register layout
---------------
Qubits carry stable string labels; global indices shift as measured qubits
are discarded, so code should resolve labels via :meth:`Network.qubit_index`
right before use.  With n parties (party n is the target):

* parallel: ``d1 e1 d2 e2 ... d{n-1} e{n-1} t1 ... t{n-1} dn`` where ``di``
  is party i's data qubit, ``ei`` is control party i's Bell half and ``ti``
  the matching target-held half.
* series: ``d1 f1 | r2 d2 f2 | ... | rn dn`` where ``fi`` is party i's
  forward Bell half and ``r{i+1}`` the matching half held by party i+1.

At n = 3 these orderings coincide with the seven-qubit registers used
throughout the protocol transcriptions.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from .errors import ImpossibleBranchError, LocalityViolation, MissingMessage
from .gates import Gate
from .statevector import (
    MeasurementBasis,
    MeasurementRecord,
    StateVector,
    discard_qubit,
    apply_gate,
    permute_qubits,
    project_measure,
    tensor,
)


class Role(Enum):
    CONTROL = "control"
    TARGET = "target"


class TopologyKind(Enum):
    PARALLEL = "parallel"
    SERIES = "series"


@dataclass(frozen=True, slots=True)
class BellEdge:
    """One distributed Bell pair, with build-time global qubit indices."""

    party_a: int
    qubit_a: int
    party_b: int
    qubit_b: int


@dataclass(frozen=True, slots=True)
class Topology:
    kind: TopologyKind
    n: int
    bell_pairs: tuple[BellEdge, ...]


@dataclass(slots=True)
class CostLedger:
    """Entanglement and classical-communication accounting for one run.

    ``ebits`` is fixed at build time (protocols consume entanglement, never
    create it); ``cbits`` counts each (sender, recipient, bit) delivery, so a
    broadcast to k recipients costs k.
    """

    ebits: int = 0
    cbits: int = 0

    def copy(self) -> "CostLedger":
        return CostLedger(self.ebits, self.cbits)


@dataclass(frozen=True, slots=True)
class ClassicalMessage:
    sender: int
    recipient: int
    bit: int
    tag: str


@dataclass(slots=True)
class Party:
    id: int
    role: Role
    data_qubit: int = -1
    held_qubits: set[int] = field(default_factory=set)
    inbox: list[ClassicalMessage] = field(default_factory=list)


def bell_state() -> StateVector:
    """The resource state (|00> + |11>)/sqrt(2)."""
    return StateVector(2, np.array([1, 0, 0, 1]) / math.sqrt(2))


class Network:
    """Mutable protocol-execution context, confined to one branch.

    Distinct branches must run on independent copies (see :meth:`copy`);
    nothing here is shared mutable state.
    """

    def __init__(
        self,
        kind: TopologyKind,
        n: int,
        state: StateVector,
        labels: list[str],
        owner: dict[str, int],
        data_labels: dict[int, str],
        parties: dict[int, Party],
        topology: Topology,
        ledger: CostLedger,
        trace: list[dict] | None = None,
        measurements: list[MeasurementRecord] | None = None,
    ):
        self.kind = kind
        self.n = n
        self.state = state
        self._labels = labels
        self._owner = owner
        self._data_labels = data_labels
        self.parties = parties
        self.topology = topology
        self.ledger = ledger
        self.trace = [] if trace is None else trace
        self.measurements = [] if measurements is None else measurements
        self._refresh()

    # -- label/index bookkeeping ---------------------------------------

    def qubit_index(self, label: str) -> int:
        """Current global index of the qubit with the given stable label."""
        try:
            return self._labels.index(label)
        except ValueError:
            raise KeyError(f"no live qubit labelled {label!r}") from None

    def label_at(self, index: int) -> str:
        return self._labels[index]

    def _refresh(self) -> None:
        for party in self.parties.values():
            party.held_qubits = {
                i for i, lbl in enumerate(self._labels) if self._owner[lbl] == party.id
            }
            data = self._data_labels.get(party.id)
            party.data_qubit = self._labels.index(data) if data in self._labels else -1

    # -- local operations ------------------------------------------------

    def local_apply(self, party_id: int, gate: Gate, targets: list[int]) -> StateVector:
        """Apply a gate to qubits all held by ``party_id``."""
        party = self.parties[party_id]
        foreign = [t for t in targets if t not in party.held_qubits]
        if foreign:
            names = [self._labels[t] for t in foreign if 0 <= t < len(self._labels)]
            raise LocalityViolation(
                f"party {party_id} does not hold qubit(s) {foreign} {names}"
            )
        labels = [self._labels[t] for t in targets]
        self.state = apply_gate(self.state, gate, targets)
        self.trace.append(
            {"type": "gate", "party": party_id, "gate": gate.label, "qubits": labels}
        )
        return self.state

    def local_measure(
        self, party_id: int, qubit: int, basis: MeasurementBasis, outcome: int
    ) -> tuple[float, StateVector]:
        """Project ``qubit`` onto ``outcome``, then discard it from the register."""
        party = self.parties[party_id]
        if qubit not in party.held_qubits:
            raise LocalityViolation(f"party {party_id} does not hold qubit {qubit}")
        label = self._labels[qubit]
        probability, post = project_measure(self.state, qubit, basis, outcome)
        self.trace.append(
            {
                "type": "measure",
                "party": party_id,
                "qubit": label,
                "basis": basis.value,
                "outcome": outcome,
                "probability": probability,
            }
        )
        self.measurements.append(MeasurementRecord(qubit, basis, outcome, probability))
        if post is None:
            raise ImpossibleBranchError(
                f"outcome {outcome} on qubit {label} has probability {probability:.3e}"
            )
        self.state = discard_qubit(post, qubit)
        del self._labels[qubit]
        del self._owner[label]
        self._refresh()
        return probability, self.state

    # -- classical bus ----------------------------------------------------

    def send_cbit(self, sender: int, recipient: int, bit: int, tag: str) -> None:
        """Deliver one classical bit; each delivery costs one cbit."""
        if sender == recipient:
            raise ValueError(f"party {sender} cannot send a cbit to itself")
        if sender not in self.parties or recipient not in self.parties:
            raise ValueError(f"unknown party in send {sender} -> {recipient}")
        bit = int(bit)
        if bit not in (0, 1):
            raise ValueError(f"cbit must be 0 or 1, got {bit!r}")
        self.parties[recipient].inbox.append(ClassicalMessage(sender, recipient, bit, tag))
        self.ledger.cbits += 1
        self.trace.append(
            {"type": "message", "sender": sender, "recipient": recipient, "bit": bit, "tag": tag}
        )

    def read_cbit(self, party_id: int, tag: str) -> int:
        """Read (without consuming) the bit delivered to ``party_id`` under ``tag``."""
        for msg in self.parties[party_id].inbox:
            if msg.tag == tag:
                return msg.bit
        raise MissingMessage(f"party {party_id} has no message tagged {tag!r}")

    # -- misc --------------------------------------------------------------

    def measurement_probabilities(self) -> list[float]:
        return [rec.probability for rec in self.measurements]

    def copy(self) -> "Network":
        parties = {
            pid: Party(p.id, p.role, p.data_qubit, set(p.held_qubits), list(p.inbox))
            for pid, p in self.parties.items()
        }
        return Network(
            self.kind,
            self.n,
            self.state,  # immutable, safe to share
            list(self._labels),
            dict(self._owner),
            dict(self._data_labels),
            parties,
            self.topology,
            self.ledger.copy(),
            list(self.trace),
            list(self.measurements),
        )


def _parallel_layout(n: int) -> list[str]:
    order: list[str] = []
    for i in range(1, n):
        order += [f"d{i}", f"e{i}"]
    order += [f"t{i}" for i in range(1, n)]
    order.append(f"d{n}")
    return order


def _series_layout(n: int) -> list[str]:
    order = ["d1", "f1"]
    for i in range(2, n):
        order += [f"r{i}", f"d{i}", f"f{i}"]
    order += [f"r{n}", f"d{n}"]
    return order


def build_network(
    kind: TopologyKind, n: int, input_state: StateVector
) -> tuple[Network, StateVector]:
    """Distribute n-1 Bell pairs around the n-qubit input state.

    ``input_state`` holds the data qubits in party order (qubit i-1 belongs
    to party i).  The returned network's register follows the layout
    documented in the module docstring, and its ledger already accounts for
    the n-1 distributed ebits.
    """
    if n < 2:
        raise ValueError(f"need at least 2 parties, got {n}")
    if input_state.num_qubits != n:
        raise ValueError(
            f"input state has {input_state.num_qubits} qubits, expected {n}"
        )

    combined = input_state
    for _ in range(n - 1):
        combined = tensor(combined, bell_state())

    if kind is TopologyKind.PARALLEL:
        layout = _parallel_layout(n)
        pair_labels = [(f"e{i}", f"t{i}") for i in range(1, n)]
    else:
        layout = _series_layout(n)
        pair_labels = [(f"f{i}", f"r{i + 1}") for i in range(1, n)]

    tensor_order = [f"d{i}" for i in range(1, n + 1)]
    for a, b in pair_labels:
        tensor_order += [a, b]
    position = {lbl: pos for pos, lbl in enumerate(layout)}
    perm = [position[lbl] for lbl in tensor_order]
    state = permute_qubits(combined, perm)

    owner: dict[str, int] = {}
    for i in range(1, n + 1):
        owner[f"d{i}"] = i
    if kind is TopologyKind.PARALLEL:
        for i in range(1, n):
            owner[f"e{i}"] = i
            owner[f"t{i}"] = n
        edges = tuple(
            BellEdge(i, position[f"e{i}"], n, position[f"t{i}"]) for i in range(1, n)
        )
    else:
        for i in range(1, n):
            owner[f"f{i}"] = i
            owner[f"r{i + 1}"] = i + 1
        edges = tuple(
            BellEdge(i, position[f"f{i}"], i + 1, position[f"r{i + 1}"])
            for i in range(1, n)
        )

    parties = {
        pid: Party(pid, Role.TARGET if pid == n else Role.CONTROL)
        for pid in range(1, n + 1)
    }
    data_labels = {pid: f"d{pid}" for pid in range(1, n + 1)}
    topology = Topology(kind, n, edges)
    net = Network(
        kind,
        n,
        state,
        list(layout),
        owner,
        data_labels,
        parties,
        topology,
        CostLedger(ebits=n - 1, cbits=0),
    )
    return net, net.state
