"""Gate-level circuit IR: construction, structural metrics, and ASAP scheduling.

A circuit is an immutable ordered gate list over ``n_qubits`` wires. This is
the single representation shared by the generators, the compiler, the noise
model and the test oracle.
"""
from __future__ import annotations

from dataclasses import dataclass

ONE_QUBIT_KINDS = frozenset({"H", "X", "RX", "RY", "RZ", "P", "U3"})
TWO_QUBIT_KINDS = frozenset({"CX", "CZ", "SWAP"})
GATE_KINDS = ONE_QUBIT_KINDS | TWO_QUBIT_KINDS

PARAM_ARITY = {
    "H": 0, "X": 0, "CX": 0, "CZ": 0, "SWAP": 0,
    "RX": 1, "RY": 1, "RZ": 1, "P": 1,
    "U3": 3,
}


@dataclass(frozen=True)
class Gate:
    """One gate application: a kind, an ordered qubit tuple and its angles.

    For CX the qubit order is (control, target). Angles are radians.
    """
    kind: str
    qubits: tuple[int, ...]
    params: tuple[float, ...] = ()

    def __post_init__(self):
        if self.kind not in GATE_KINDS:
            raise ValueError(f"unknown gate kind {self.kind!r}")
        expected = 2 if self.kind in TWO_QUBIT_KINDS else 1
        if len(self.qubits) != expected:
            raise ValueError(f"{self.kind} expects {expected} qubit(s), got {self.qubits}")
        if len(set(self.qubits)) != len(self.qubits):
            raise ValueError(f"{self.kind} qubits must be distinct, got {self.qubits}")
        if any(q < 0 for q in self.qubits):
            raise ValueError(f"negative qubit index in {self.qubits}")
        if len(self.params) != PARAM_ARITY[self.kind]:
            raise ValueError(
                f"{self.kind} expects {PARAM_ARITY[self.kind]} parameter(s), got {len(self.params)}"
            )

    @property
    def is_two_qubit(self) -> bool:
        return self.kind in TWO_QUBIT_KINDS

    # Shorthand constructors.
    @staticmethod
    def h(q: int) -> "Gate":
        return Gate("H", (q,))

    @staticmethod
    def x(q: int) -> "Gate":
        return Gate("X", (q,))

    @staticmethod
    def rx(q: int, theta: float) -> "Gate":
        return Gate("RX", (q,), (float(theta),))

    @staticmethod
    def ry(q: int, theta: float) -> "Gate":
        return Gate("RY", (q,), (float(theta),))

    @staticmethod
    def rz(q: int, lam: float) -> "Gate":
        return Gate("RZ", (q,), (float(lam),))

    @staticmethod
    def p(q: int, lam: float) -> "Gate":
        return Gate("P", (q,), (float(lam),))

    @staticmethod
    def u3(q: int, theta: float, phi: float, lam: float) -> "Gate":
        return Gate("U3", (q,), (float(theta), float(phi), float(lam)))

    @staticmethod
    def cx(control: int, target: int) -> "Gate":
        return Gate("CX", (control, target))

    @staticmethod
    def cz(a: int, b: int) -> "Gate":
        return Gate("CZ", (a, b))

    @staticmethod
    def swap(a: int, b: int) -> "Gate":
        return Gate("SWAP", (a, b))


@dataclass(frozen=True)
class Circuit:
    """Immutable ordered gate sequence over ``n_qubits`` wires."""
    n_qubits: int
    gates: tuple[Gate, ...] = ()

    def __post_init__(self):
        if self.n_qubits <= 0:
            raise ValueError("n_qubits must be positive")
        object.__setattr__(self, "gates", tuple(self.gates))
        for g in self.gates:
            if max(g.qubits) >= self.n_qubits:
                raise ValueError(f"gate {g} references qubit >= {self.n_qubits}")

    def __len__(self) -> int:
        return len(self.gates)


@dataclass(frozen=True)
class GateCounts:
    total: int
    two_qubit: int
    swap: int


@dataclass(frozen=True)
class GateDurations:
    """Uniform per-kind gate execution times, in seconds."""
    t_1q: float
    t_2q: float

    def __post_init__(self):
        if self.t_1q <= 0 or self.t_2q <= 0:
            raise ValueError("gate durations must be strictly positive")


@dataclass(frozen=True)
class Timeslice:
    """A layer of gates executing in parallel; duration is the slowest member."""
    gate_indices: tuple[int, ...]
    duration: float


@dataclass(frozen=True)
class Schedule:
    timeslices: tuple[Timeslice, ...]
    total_time: float


def _layers(circuit: Circuit) -> list[list[int]]:
    """Greedy as-soon-as-possible layering by per-qubit availability."""
    level = [0] * circuit.n_qubits
    layers: list[list[int]] = []
    for i, g in enumerate(circuit.gates):
        layer = max(level[q] for q in g.qubits)
        if layer == len(layers):
            layers.append([])
        layers[layer].append(i)
        for q in g.qubits:
            level[q] = layer + 1
    return layers


def depth(circuit: Circuit) -> int:
    """Number of ASAP layers; 0 for an empty circuit."""
    return len(_layers(circuit))


def count_gates(circuit: Circuit) -> GateCounts:
    two_qubit = sum(1 for g in circuit.gates if g.is_two_qubit)
    swap = sum(1 for g in circuit.gates if g.kind == "SWAP")
    return GateCounts(total=len(circuit.gates), two_qubit=two_qubit, swap=swap)


def _inverse_gate(g: Gate) -> Gate:
    if g.kind in ("H", "X", "CX", "CZ", "SWAP"):
        return g
    if g.kind in ("RX", "RY", "RZ", "P"):
        return Gate(g.kind, g.qubits, (-g.params[0],))
    # U3(theta, phi, lam) inverts to U3(-theta, -lam, -phi)
    theta, phi, lam = g.params
    return Gate("U3", g.qubits, (-theta, -lam, -phi))


def inverse(circuit: Circuit) -> Circuit:
    """Adjoint circuit: gates reversed, each replaced by its inverse."""
    return Circuit(circuit.n_qubits, tuple(_inverse_gate(g) for g in reversed(circuit.gates)))


def compose(a: Circuit, b: Circuit) -> Circuit:
    """Concatenate two circuits on the same qubit count, ``a`` first."""
    if a.n_qubits != b.n_qubits:
        raise ValueError(f"qubit-count mismatch: {a.n_qubits} != {b.n_qubits}")
    return Circuit(a.n_qubits, a.gates + b.gates)


def schedule_asap(circuit: Circuit, durations: GateDurations) -> Schedule:
    """Greedy ASAP schedule; each slice lasts as long as its slowest gate."""
    slices = []
    total = 0.0
    for layer in _layers(circuit):
        dur = max(
            durations.t_2q if circuit.gates[i].is_two_qubit else durations.t_1q
            for i in layer
        )
        slices.append(Timeslice(gate_indices=tuple(layer), duration=dur))
        total += dur
    return Schedule(timeslices=tuple(slices), total_time=total)


def dumps(circuit: Circuit) -> str:
    """Textual dump, one gate per line: ``KIND q[,q] [param,...]``."""
    lines = []
    for g in circuit.gates:
        parts = [g.kind, ",".join(str(q) for q in g.qubits)]
        if g.params:
            parts.append(",".join(f"{v:.12g}" for v in g.params))
        lines.append(" ".join(parts))
    return "\n".join(lines)
