"""Compilation-aware resource and fidelity scaling analysis for QML circuits."""

from .circuits import (Circuit, Gate, GateCounts, GateDurations, Schedule,
                       Timeslice, compose, count_gates, depth, dumps, inverse,
                       schedule_asap)
from .generators import (FAMILY_NAMES, EntanglementStrategy, build_family,
                         entanglement_pairs, ghz_circuit, kernel_circuit,
                         qnn_circuit, ttn_circuit, two_local, zz_feature_map)
from .topology import TOPOLOGY_NAMES, CouplingGraph, build_topology, distance_matrix
from .compiler import (CompiledCircuit, Layout, ResourceMetrics, SabreConfig,
                       compile_circuit, decompose_to_basis, dumps_compiled,
                       optimize, sabre_route, trivial_layout)
from .noise import (FidelityResult, NoiseParams, apply_1q, apply_2q,
                    apply_decoherence, apply_improvement, estimate_fidelity)
from .analysis import (FitError, StretchedExpFit, SweepSpec, TechGapResult,
                       TechGapRow, fidelity_sweep, fit_stretched_exponential,
                       n_threshold, resource_sweep, tech_gap_sweep)
from .oracle import equivalent_up_to_layout, simulate_unitary

__version__ = "0.1.0"

__all__ = [
    "Circuit", "Gate", "GateCounts", "GateDurations", "Schedule", "Timeslice",
    "compose", "count_gates", "depth", "dumps", "inverse", "schedule_asap",
    "FAMILY_NAMES", "EntanglementStrategy", "build_family", "entanglement_pairs",
    "ghz_circuit", "kernel_circuit", "qnn_circuit", "ttn_circuit", "two_local",
    "zz_feature_map",
    "TOPOLOGY_NAMES", "CouplingGraph", "build_topology", "distance_matrix",
    "CompiledCircuit", "Layout", "ResourceMetrics", "SabreConfig",
    "compile_circuit", "decompose_to_basis", "dumps_compiled", "optimize",
    "sabre_route", "trivial_layout",
    "FidelityResult", "NoiseParams", "apply_1q", "apply_2q",
    "apply_decoherence", "apply_improvement", "estimate_fidelity",
    "FitError", "StretchedExpFit", "SweepSpec", "TechGapResult", "TechGapRow",
    "fidelity_sweep", "fit_stretched_exponential", "n_threshold",
    "resource_sweep", "tech_gap_sweep",
    "equivalent_up_to_layout", "simulate_unitary",
    "__version__",
]
