"""Scaling sweeps and technology-gap analysis.

Resource and fidelity sweeps cross circuit families with device topologies
and qubit counts; the technology-gap sweep additionally scales hardware
quality by an improvement factor, fits stretched exponentials to the
fidelity-vs-qubits curves and inverts them for threshold qubit counts.
All sweeps are pure functions of their spec and return rows in a fixed
deterministic order regardless of worker-pool width.
"""
from __future__ import annotations

import math
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field

import numpy as np

from .compiler import ResourceMetrics, SabreConfig, compile_circuit
from .generators import FAMILY_NAMES, build_family, parse_family
from .noise import (NoiseParams, SliceProgram, apply_improvement,
                    build_slice_program, evaluate_slice_program)
from .topology import TOPOLOGY_NAMES, build_topology

RESOURCE_QUBITS = tuple(range(100, 1001, 100))
TTN_RESOURCE_QUBITS = tuple(2 ** k for k in range(3, 11))
FIDELITY_QUBITS = tuple(range(10, 101, 10))
TTN_FIDELITY_QUBITS = (4, 8, 16, 32, 64)
DEFAULT_DELTAS = (1.0,) + tuple(float(d) for d in range(10, 101, 10))
THRESHOLD_TARGET = 0.99


class FitError(RuntimeError):
    """Raised when a stretched-exponential fit is degenerate or underdetermined."""


@dataclass(frozen=True)
class SweepSpec:
    """Cross-product description of one experiment sweep."""
    families: tuple[str, ...] = FAMILY_NAMES
    topologies: tuple[str, ...] = TOPOLOGY_NAMES
    qubits: tuple[int, ...] = RESOURCE_QUBITS
    ttn_qubits: tuple[int, ...] = TTN_RESOURCE_QUBITS
    deltas: tuple[float, ...] = DEFAULT_DELTAS
    fixed_n: int = 256
    noise: NoiseParams = field(default_factory=NoiseParams)
    sabre: SabreConfig = field(default_factory=SabreConfig)
    seed: int = 42
    workers: int = 1

    def __post_init__(self):
        for fam in self.families:
            parse_family(fam)
        for topo in self.topologies:
            if topo not in TOPOLOGY_NAMES:
                raise ValueError(f"unknown topology {topo!r}")
        for name, counts in (("qubits", self.qubits), ("ttn_qubits", self.ttn_qubits)):
            if not counts:
                raise ValueError(f"{name} must be non-empty")
            if list(counts) != sorted(set(counts)):
                raise ValueError(f"{name} must be strictly increasing")
        for n in self.ttn_qubits:
            if n < 2 or n & (n - 1) != 0:
                raise ValueError(f"ttn qubit counts must be powers of two, got {n}")
        if any(d < 1 for d in self.deltas):
            raise ValueError("improvement factors must be >= 1")

    def qubits_for(self, family: str) -> tuple[int, ...]:
        return self.ttn_qubits if family == "ttn" else self.qubits


@dataclass(frozen=True)
class StretchedExpFit:
    """Parameters of F(N) = exp(-(N/lambda)^beta) from a linearized fit."""
    lam: float
    beta: float
    r_squared: float
    points_used: int


@dataclass(frozen=True)
class ResourceRow:
    family: str
    topology: str
    n_qubits: int
    metrics: ResourceMetrics


@dataclass(frozen=True)
class FidelityRow:
    family: str
    topology: str
    n_qubits: int
    delta: float
    total_fidelity: float
    metrics: ResourceMetrics


@dataclass(frozen=True)
class TechGapRow:
    family: str
    topology: str
    delta: float
    fidelity_at_fixed_n: float
    fixed_n: int
    fit: StretchedExpFit | None
    n_threshold: float | None
    extrapolated: bool | None
    fit_error: str | None


@dataclass(frozen=True)
class TechGapResult:
    rows: tuple[TechGapRow, ...]


def _compile_point(args) -> tuple[ResourceMetrics, SliceProgram]:
    # circuit angles stay at their fixed defaults: resources and the fidelity
    # model are angle-independent, so sweeps are seeded only through SABRE
    family, topology, n, sabre = args
    circuit = build_family(family, n)
    graph = build_topology(topology, n)
    compiled = compile_circuit(circuit, graph, sabre)
    return compiled.metrics, build_slice_program(compiled.circuit)


def _map_jobs(fn, jobs: list, workers: int) -> list:
    if workers <= 1 or len(jobs) <= 1:
        return [fn(j) for j in jobs]
    with ProcessPoolExecutor(max_workers=workers) as pool:
        return list(pool.map(fn, jobs, chunksize=1))


def _compile_grid(spec: SweepSpec, qubits_for) -> dict[tuple[str, str, int], tuple[ResourceMetrics, SliceProgram]]:
    jobs = []
    keys = []
    for family in spec.families:
        for topology in spec.topologies:
            for n in qubits_for(family):
                keys.append((family, topology, n))
                jobs.append((family, topology, n, spec.sabre))
    results = _map_jobs(_compile_point, jobs, spec.workers)
    return dict(zip(keys, results))


def resource_sweep(spec: SweepSpec) -> list[ResourceRow]:
    """Post-compilation resource metrics per (family, topology, qubit count)."""
    grid = _compile_grid(spec, spec.qubits_for)
    rows = []
    for family in spec.families:
        for topology in spec.topologies:
            for n in spec.qubits_for(family):
                metrics, _ = grid[(family, topology, n)]
                rows.append(ResourceRow(family, topology, n, metrics))
    return rows


def fidelity_sweep(spec: SweepSpec) -> list[FidelityRow]:
    """Total circuit fidelity per (family, topology, qubit count, improvement factor)."""
    grid = _compile_grid(spec, spec.qubits_for)
    rows = []
    for family in spec.families:
        for topology in spec.topologies:
            for n in spec.qubits_for(family):
                metrics, program = grid[(family, topology, n)]
                for delta in spec.deltas:
                    params = apply_improvement(spec.noise, delta)
                    total = evaluate_slice_program(program, params).total
                    rows.append(FidelityRow(family, topology, n, delta, total, metrics))
    return rows


def fit_stretched_exponential(points: list[tuple[float, float]]) -> StretchedExpFit:
    """Least-squares fit of F(N) = exp(-(N/lambda)^beta) on its linearization.

    Filters out F within 1e-12 of 1 (no information) and clamps underflowed
    values at 1e-300. The fit runs on ln(-ln F) vs ln N; its R^2 is reported.
    """
    usable = []
    for n, f in points:
        if f > 1.0 - 1e-12:
            continue
        usable.append((n, max(f, 1e-300)))
    if len(usable) < 2:
        raise FitError(f"need at least 2 usable points, have {len(usable)}")
    x = np.log([n for n, _ in usable])
    y = np.log([-math.log(f) for _, f in usable])
    slope, intercept = np.polyfit(x, y, 1)
    if not np.isfinite(slope) or slope <= 0:
        raise FitError(f"degenerate fit (slope {slope})")
    resid = y - (slope * x + intercept)
    ss_tot = float(np.sum((y - y.mean()) ** 2))
    if ss_tot == 0.0:
        raise FitError("zero variance in transformed fidelities")
    r2 = 1.0 - float(np.sum(resid ** 2)) / ss_tot
    beta = float(slope)
    lam = float(math.exp(-intercept / beta))
    return StretchedExpFit(lam=lam, beta=beta, r_squared=r2, points_used=len(usable))


def n_threshold(fit: StretchedExpFit, target: float = THRESHOLD_TARGET) -> float:
    """Largest qubit count keeping F(N) above the target, from the fit."""
    if not 0.0 < target < 1.0:
        raise ValueError("target fidelity must be in (0, 1)")
    if fit.lam <= 0 or fit.beta <= 0:
        raise ValueError("invalid fit parameters")
    return fit.lam * (-math.log(target)) ** (1.0 / fit.beta)


def tech_gap_sweep(spec: SweepSpec) -> TechGapResult:
    """Fidelity at a fixed qubit count plus threshold qubit counts, per delta.

    The fidelity-vs-qubits curve for the threshold fit uses the spec's qubit
    ranges; the fixed-count evaluation uses ``spec.fixed_n``.
    """
    def curve_plus_fixed(family: str) -> tuple[int, ...]:
        counts = set(spec.qubits_for(family))
        counts.add(spec.fixed_n)
        return tuple(sorted(counts))

    grid = _compile_grid(spec, curve_plus_fixed)
    rows = []
    for family in spec.families:
        curve_ns = spec.qubits_for(family)
        for topology in spec.topologies:
            for delta in spec.deltas:
                params = apply_improvement(spec.noise, delta)
                _, fixed_prog = grid[(family, topology, spec.fixed_n)]
                fixed_f = evaluate_slice_program(fixed_prog, params).total
                points = []
                for n in curve_ns:
                    _, prog = grid[(family, topology, n)]
                    points.append((float(n), evaluate_slice_program(prog, params).total))
                try:
                    fit = fit_stretched_exponential(points)
                    thr = n_threshold(fit, THRESHOLD_TARGET)
                    extrapolated = not (curve_ns[0] <= thr <= curve_ns[-1])
                    rows.append(TechGapRow(family, topology, delta, fixed_f, spec.fixed_n,
                                           fit, thr, extrapolated, None))
                except FitError as exc:
                    rows.append(TechGapRow(family, topology, delta, fixed_f, spec.fixed_n,
                                           None, None, None, str(exc)))
    return TechGapResult(rows=tuple(rows))
