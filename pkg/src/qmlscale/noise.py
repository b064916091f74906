"""Analytical depolarizing + decoherence fidelity model for compiled circuits.

Tracks one fidelity value per qubit, all starting at 1. Gate applications
reduce the fidelity of the touched qubits; after every timeslice an
amplitude-damping/dephasing factor multiplies every qubit, idle ones
included. The total circuit fidelity is the product over qubits.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace

import numpy as np

from .circuits import Circuit, GateDurations, schedule_asap

# Reference hardware parameters: error rates, gate times and coherence times
# of recent superconducting devices (uniform across qubits and couplings).
DEFAULT_P1 = 7.42e-5
DEFAULT_P2 = 7e-4
DEFAULT_T_1Q = 7.9e-9
DEFAULT_T_2Q = 30e-9
DEFAULT_T1 = 1.2e-3
DEFAULT_T2 = 1.16e-3


@dataclass(frozen=True)
class NoiseParams:
    """Depolarization strengths, correlation knob, gate times and T1/T2."""
    p1: float = DEFAULT_P1
    p2: float = DEFAULT_P2
    p_ent: float = 0.0
    t_1q: float = DEFAULT_T_1Q
    t_2q: float = DEFAULT_T_2Q
    T1: float = DEFAULT_T1
    T2: float = DEFAULT_T2

    def __post_init__(self):
        for name in ("p1", "p2", "p_ent"):
            v = getattr(self, name)
            if not 0.0 <= v <= 1.0:
                raise ValueError(f"{name} must be in [0, 1], got {v}")
        for name in ("t_1q", "t_2q", "T1", "T2"):
            if getattr(self, name) <= 0:
                raise ValueError(f"{name} must be positive")
        if self.T2 > 2.0 * self.T1:
            raise ValueError("T2 cannot exceed 2*T1")


@dataclass(frozen=True)
class FidelityResult:
    total: float
    per_qubit: tuple[float, ...]
    total_time: float


def new_state(n: int) -> np.ndarray:
    """Per-qubit fidelity vector, initialized to all ones."""
    return np.ones(n, dtype=np.float64)


def apply_1q(state: np.ndarray, q: int, params: NoiseParams) -> np.ndarray:
    """Single-qubit depolarization update on qubit q."""
    p = params.p1
    state[q] = (1.0 - p) * state[q] + (1.0 - params.p_ent) * p / 2.0
    return state


def apply_2q(state: np.ndarray, qi: int, qj: int, params: NoiseParams) -> np.ndarray:
    """Two-qubit depolarization update; both qubits share the correlation term."""
    p = params.p2
    s = state[qi] + state[qj]
    root = math.sqrt(1.0 - p)
    eta = 0.5 * (math.sqrt((1.0 - p) * s * s + p) - root * s)
    corr = (1.0 - params.p_ent) * eta
    state[qi] = root * state[qi] + corr
    state[qj] = root * state[qj] + corr
    return state


def apply_decoherence(state: np.ndarray, t_layer: float, params: NoiseParams) -> np.ndarray:
    """Relaxation/dephasing decay of every qubit over one timeslice."""
    if t_layer < 0:
        raise ValueError("t_layer must be >= 0")
    factor = math.exp(-t_layer / params.T1) * 0.5 * (math.exp(-t_layer / params.T2) + 1.0)
    state *= factor
    return state


def apply_improvement(params: NoiseParams, delta: float) -> NoiseParams:
    """Scale error rates and gate times down by an improvement factor >= 1."""
    if delta < 1:
        raise ValueError("improvement factor must be >= 1")
    return replace(
        params,
        p1=params.p1 / delta,
        p2=params.p2 / delta,
        t_1q=params.t_1q / delta,
        t_2q=params.t_2q / delta,
    )


_BASIS_KINDS = frozenset({"U3", "CX"})


@dataclass(frozen=True)
class SliceProgram:
    """Vectorized slice-by-slice evaluation plan for one compiled circuit.

    Built once per circuit; fidelity can then be re-evaluated cheaply for
    many parameter settings (e.g. improvement-factor sweeps).
    """
    n_qubits: int
    slices: tuple[tuple[np.ndarray, np.ndarray, np.ndarray], ...]


def build_slice_program(circuit: Circuit) -> SliceProgram:
    """Precompute per-slice gate index arrays from the ASAP schedule."""
    for g in circuit.gates:
        if g.kind not in _BASIS_KINDS:
            raise ValueError(f"fidelity model requires a {{U3, CX}} circuit, found {g.kind}")
    # the layering is duration-independent, so placeholder durations suffice;
    # real slice times are resolved at evaluation time from the 1q/2q split
    sched = schedule_asap(circuit, GateDurations(1.0, 1.0))
    slices = []
    for ts in sched.timeslices:
        oneq, twoq_i, twoq_j = [], [], []
        for gi in ts.gate_indices:
            g = circuit.gates[gi]
            if g.is_two_qubit:
                twoq_i.append(g.qubits[0])
                twoq_j.append(g.qubits[1])
            else:
                oneq.append(g.qubits[0])
        slices.append((
            np.asarray(oneq, dtype=np.intp),
            np.asarray(twoq_i, dtype=np.intp),
            np.asarray(twoq_j, dtype=np.intp),
        ))
    return SliceProgram(circuit.n_qubits, tuple(slices))


def evaluate_slice_program(program: SliceProgram, params: NoiseParams) -> FidelityResult:
    f = new_state(program.n_qubits)
    p1, p2, pe = params.p1, params.p2, params.p_ent
    root2 = math.sqrt(1.0 - p2)
    decay = {}
    for t in (params.t_1q, params.t_2q):
        decay[t] = math.exp(-t / params.T1) * 0.5 * (math.exp(-t / params.T2) + 1.0)
    total_time = 0.0
    for oneq, ti, tj in program.slices:
        if oneq.size:
            f[oneq] = (1.0 - p1) * f[oneq] + (1.0 - pe) * p1 / 2.0
        if ti.size:
            s = f[ti] + f[tj]
            eta = 0.5 * (np.sqrt((1.0 - p2) * s * s + p2) - root2 * s)
            corr = (1.0 - pe) * eta
            f[ti] = root2 * f[ti] + corr
            f[tj] = root2 * f[tj] + corr
        # slice duration is the slowest member gate's time
        if ti.size and oneq.size:
            t_layer = max(params.t_1q, params.t_2q)
        elif ti.size:
            t_layer = params.t_2q
        else:
            t_layer = params.t_1q
        f *= decay[t_layer]
        total_time += t_layer
    total = float(np.prod(f))
    return FidelityResult(total=total, per_qubit=tuple(float(v) for v in f), total_time=total_time)


def estimate_fidelity(compiled, params: NoiseParams) -> FidelityResult:
    """Total circuit fidelity of a compiled ({U3, CX}) circuit.

    Accepts a CompiledCircuit or a bare Circuit already in the basis.
    """
    circuit = getattr(compiled, "circuit", compiled)
    return evaluate_slice_program(build_slice_program(circuit), params)
