"""Dense-unitary oracle for small circuits (n <= 6).

Convention: qubit 0 is the least-significant bit of the basis-state index.
Used by the test suites to check compilation and generator semantics; not a
simulator for experiments.
"""
from __future__ import annotations

import cmath
import math

import numpy as np

from .circuits import PARAM_ARITY, Circuit, Gate

MAX_ORACLE_QUBITS = 6


def gate_matrix(kind: str, params: tuple[float, ...]) -> np.ndarray:
    """Unitary of a single gate in its own qubit subspace.

    Two-qubit matrices are indexed by ``bit(qubits[0]) + 2 * bit(qubits[1])``.
    """
    if kind == "H":
        return np.array([[1, 1], [1, -1]], dtype=complex) / math.sqrt(2)
    if kind == "X":
        return np.array([[0, 1], [1, 0]], dtype=complex)
    if kind == "RX":
        t = params[0] / 2
        return np.array([[math.cos(t), -1j * math.sin(t)],
                         [-1j * math.sin(t), math.cos(t)]], dtype=complex)
    if kind == "RY":
        t = params[0] / 2
        return np.array([[math.cos(t), -math.sin(t)],
                         [math.sin(t), math.cos(t)]], dtype=complex)
    if kind == "RZ":
        lam = params[0]
        return np.array([[cmath.exp(-1j * lam / 2), 0],
                         [0, cmath.exp(1j * lam / 2)]], dtype=complex)
    if kind == "P":
        return np.array([[1, 0], [0, cmath.exp(1j * params[0])]], dtype=complex)
    if kind == "U3":
        theta, phi, lam = params
        c, s = math.cos(theta / 2), math.sin(theta / 2)
        return np.array([[c, -cmath.exp(1j * lam) * s],
                         [cmath.exp(1j * phi) * s, cmath.exp(1j * (phi + lam)) * c]],
                        dtype=complex)
    if kind == "CX":
        # control = qubits[0] (subspace bit 0), target = qubits[1] (bit 1)
        m = np.eye(4, dtype=complex)
        m[[1, 3]] = m[[3, 1]]
        return m
    if kind == "CZ":
        return np.diag([1, 1, 1, -1]).astype(complex)
    if kind == "SWAP":
        m = np.eye(4, dtype=complex)
        m[[1, 2]] = m[[2, 1]]
        return m
    raise ValueError(f"unknown gate kind {kind!r}")


def _embed(g: np.ndarray, qubits: tuple[int, ...], n: int) -> np.ndarray:
    """Embed a 1- or 2-qubit unitary at the given wire positions."""
    dim = 1 << n
    full = np.zeros((dim, dim), dtype=complex)
    k = len(qubits)
    for col in range(dim):
        sub_in = 0
        for t, q in enumerate(qubits):
            sub_in |= ((col >> q) & 1) << t
        base = col
        for q in qubits:
            base &= ~(1 << q)
        for sub_out in range(1 << k):
            amp = g[sub_out, sub_in]
            if amp == 0:
                continue
            row = base
            for t, q in enumerate(qubits):
                row |= ((sub_out >> t) & 1) << q
            full[row, col] = amp
    return full


def simulate_unitary(circuit: Circuit) -> np.ndarray:
    """Full 2^n x 2^n unitary of the circuit, gates applied in order."""
    if circuit.n_qubits > MAX_ORACLE_QUBITS:
        raise ValueError(f"oracle limited to n <= {MAX_ORACLE_QUBITS}")
    dim = 1 << circuit.n_qubits
    u = np.eye(dim, dtype=complex)
    for g in circuit.gates:
        u = _embed(gate_matrix(g.kind, g.params), g.qubits, circuit.n_qubits) @ u
    return u


def permutation_matrix(v2p: list[int] | tuple[int, ...]) -> np.ndarray:
    """Basis permutation sending virtual-ordered states to physical wires.

    Column x maps to the row whose bit at ``v2p[v]`` equals bit v of x.
    """
    n = len(v2p)
    dim = 1 << n
    m = np.zeros((dim, dim), dtype=complex)
    for x in range(dim):
        y = 0
        for v in range(n):
            y |= ((x >> v) & 1) << v2p[v]
        m[y, x] = 1
    return m


def phases_match(a: np.ndarray, b: np.ndarray, tol: float) -> bool:
    """True if a == (global phase) * b within elementwise tolerance."""
    idx = np.unravel_index(np.argmax(np.abs(b)), b.shape)
    if abs(b[idx]) < tol:
        return bool(np.max(np.abs(a)) <= tol)
    phase = a[idx] / b[idx]
    if abs(abs(phase) - 1) > tol:
        return False
    return bool(np.max(np.abs(a - phase * b)) <= tol)


def random_circuit(rng, n: int, n_gates: int | None = None) -> Circuit:
    """Random mixed-kind circuit for equivalence batteries (n <= 6)."""
    if n_gates is None:
        n_gates = int(rng.integers(5, 25))
    one_q = ("H", "X", "RX", "RY", "RZ", "P", "U3")
    two_q = ("CX", "CZ", "SWAP")
    gates = []
    for _ in range(n_gates):
        if n >= 2 and rng.random() < 0.45:
            kind = two_q[int(rng.integers(len(two_q)))]
            a, b = rng.choice(n, size=2, replace=False)
            gates.append(Gate(kind, (int(a), int(b))))
        else:
            kind = one_q[int(rng.integers(len(one_q)))]
            q = int(rng.integers(n))
            params = tuple(float(v) for v in rng.uniform(-math.pi, math.pi, 3))
            gates.append(Gate(kind, (q,), params[:PARAM_ARITY[kind]]))
    return Circuit(n, tuple(gates))


def equivalent_up_to_layout(original: Circuit, compiled, tol: float = 1e-7) -> bool:
    """Check P_final^dag . U_compiled . P_initial == U_original up to phase.

    ``compiled`` is a CompiledCircuit whose layouts map virtual to physical
    qubits; circuit sizes must match and stay within the oracle cap.
    """
    routed = compiled.circuit
    if routed.n_qubits != original.n_qubits:
        raise ValueError("oracle equivalence requires equal qubit counts")
    if original.n_qubits > MAX_ORACLE_QUBITS:
        raise ValueError(f"oracle limited to n <= {MAX_ORACLE_QUBITS}")
    u_orig = simulate_unitary(original)
    u_comp = simulate_unitary(routed)
    p0 = permutation_matrix(compiled.initial_layout.v2p)
    pf = permutation_matrix(compiled.final_layout.v2p)
    a = pf.conj().T @ u_comp @ p0
    return phases_match(a, u_orig, tol)
