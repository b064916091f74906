"""Circuit family constructors: ZZ feature maps, TwoLocal, kernels, QNN, TTN, GHZ.

Families are parameterized by qubit count and an entangling strategy. Angles
default to a fixed deterministic sequence (0.1, 0.2, ...) so that generated
circuits are bit-identical across runs; pass a seed to draw them uniformly
from [0, 2*pi) instead.
"""
from __future__ import annotations

import enum
import math

import numpy as np

from .circuits import Circuit, Gate, compose, inverse


class EntanglementStrategy(enum.Enum):
    LINEAR = "linear"
    CIRCULAR = "circular"
    SCA = "sca"
    PAIRWISE = "pairwise"

    @classmethod
    def parse(cls, name: str) -> "EntanglementStrategy":
        try:
            return cls(name.lower())
        except ValueError:
            raise ValueError(f"unknown entanglement strategy {name!r}") from None


FAMILY_NAMES = (
    "kernel-linear", "kernel-circular", "kernel-sca", "kernel-pairwise",
    "qnn-linear", "qnn-circular", "qnn-sca", "qnn-pairwise",
    "ttn", "ghz",
)


def _dedup_unordered(pairs: list[tuple[int, int]]) -> list[tuple[int, int]]:
    # Only bites at n=2, where the circular wrap pair duplicates the linear one.
    seen = set()
    out = []
    for a, b in pairs:
        key = frozenset((a, b))
        if key not in seen:
            seen.add(key)
            out.append((a, b))
    return out


def entanglement_pairs(
    strategy: EntanglementStrategy, n: int, block_index: int = 0
) -> list[list[tuple[int, int]]]:
    """(control, target) pairs of one entanglement block, grouped in sublayers.

    Linear and circular blocks are block-independent. SCA shifts the circular
    list by the block index, reversing gate directions and application order
    on odd blocks. Pairwise returns two sublayers (even-odd, then odd-even).
    """
    if n < 2:
        raise ValueError("entanglement requires n >= 2")
    if strategy is EntanglementStrategy.LINEAR:
        return [[(i, i + 1) for i in range(n - 1)]]
    if strategy is EntanglementStrategy.CIRCULAR:
        pairs = [(n - 1, 0)] + [(i, i + 1) for i in range(n - 1)]
        return [_dedup_unordered(pairs)]
    if strategy is EntanglementStrategy.SCA:
        pairs = [(n - 1, 0)] + [(i, i + 1) for i in range(n - 1)]
        shift = block_index % n
        pairs = [((a - shift) % n, (b - shift) % n) for a, b in pairs]
        if block_index % 2 == 1:
            pairs = [(b, a) for a, b in pairs]
            pairs.reverse()
        return [_dedup_unordered(pairs)]
    if strategy is EntanglementStrategy.PAIRWISE:
        even = [(i, i + 1) for i in range(0, n - 1, 2)]
        odd = [(i, i + 1) for i in range(1, n - 1, 2)]
        return [even, odd] if odd else [even]
    raise ValueError(f"unknown strategy {strategy!r}")


def _flat_pairs(strategy: EntanglementStrategy, n: int, block_index: int) -> list[tuple[int, int]]:
    return [p for sub in entanglement_pairs(strategy, n, block_index) for p in sub]


def default_angles(count: int, offset: int = 0) -> list[float]:
    """Fixed deterministic angle sequence 0.1*(offset+1), 0.1*(offset+2), ..."""
    return [0.1 * (offset + j + 1) for j in range(count)]


def _draw_angles(count: int, rng: np.random.Generator | None, offset: int = 0) -> list[float]:
    if rng is None:
        return default_angles(count, offset)
    return [float(v) for v in rng.uniform(0.0, 2.0 * math.pi, count)]


def zz_feature_map(
    n: int,
    strategy: EntanglementStrategy,
    reps: int,
    data: list[float],
) -> Circuit:
    """Data-encoding map: H layer, P(2x) layer, then CX-conjugated ZZ phases."""
    if n < 2:
        raise ValueError("feature map requires n >= 2")
    if reps < 1:
        raise ValueError("reps must be >= 1")
    if len(data) != n:
        raise ValueError(f"data length {len(data)} != n_qubits {n}")
    gates: list[Gate] = []
    for r in range(reps):
        gates.extend(Gate.h(q) for q in range(n))
        gates.extend(Gate.p(q, 2.0 * data[q]) for q in range(n))
        for i, j in _flat_pairs(strategy, n, r):
            angle = 2.0 * (math.pi - data[i]) * (math.pi - data[j])
            gates.append(Gate.cx(i, j))
            gates.append(Gate.p(j, angle))
            gates.append(Gate.cx(i, j))
    return Circuit(n, tuple(gates))


def two_local(
    n: int,
    strategy: EntanglementStrategy,
    reps: int,
    params: list[float],
) -> Circuit:
    """Layered ansatz: RY rotation layers alternating with CX entanglement blocks."""
    if n < 2:
        raise ValueError("ansatz requires n >= 2")
    if len(params) != n * (reps + 1):
        raise ValueError(f"expected {n * (reps + 1)} parameters, got {len(params)}")
    gates: list[Gate] = []
    gates.extend(Gate.ry(q, params[q]) for q in range(n))
    for r in range(reps):
        for i, j in _flat_pairs(strategy, n, r):
            gates.append(Gate.cx(i, j))
        base = n * (r + 1)
        gates.extend(Gate.ry(q, params[base + q]) for q in range(n))
    return Circuit(n, tuple(gates))


def kernel_circuit(
    n: int,
    strategy: EntanglementStrategy,
    x1: list[float],
    x2: list[float],
) -> Circuit:
    """Kernel estimation circuit: feature map of x1 followed by the inverse map of x2."""
    fwd = zz_feature_map(n, strategy, 1, x1)
    rev = inverse(zz_feature_map(n, strategy, 1, x2))
    return compose(fwd, rev)


def qnn_circuit(n: int, strategy: EntanglementStrategy, seed: int | None = None) -> Circuit:
    """Feature map (linear entanglement, 1 rep) followed by a 2-rep TwoLocal ansatz."""
    rng = np.random.default_rng(seed) if seed is not None else None
    x = _draw_angles(n, rng)
    theta = _draw_angles(3 * n, rng, offset=n)
    fmap = zz_feature_map(n, EntanglementStrategy.LINEAR, 1, x)
    ansatz = two_local(n, strategy, 2, theta)
    return compose(fmap, ansatz)


def ttn_circuit(n: int, params: list[float] | None = None, seed: int | None = None) -> Circuit:
    """Binary-tree ansatz: n-1 entangling nodes over log2(n) layers plus a final RY.

    Each node rotates both qubits then entangles downward (control on the
    discarded branch); needs 2*(n-1)+1 parameters.
    """
    if n < 2 or n & (n - 1) != 0:
        raise ValueError(f"tree ansatz requires a power-of-two qubit count, got {n}")
    n_params = 2 * (n - 1) + 1
    if params is None:
        rng = np.random.default_rng(seed) if seed is not None else None
        params = _draw_angles(n_params, rng)
    if len(params) != n_params:
        raise ValueError(f"expected {n_params} parameters, got {len(params)}")
    gates: list[Gate] = []
    k = n.bit_length() - 1
    idx = 0
    for level in range(k):
        step = 1 << level
        for i in range(0, n, 2 * step):
            a, b = i, i + step
            gates.append(Gate.ry(a, params[idx]))
            gates.append(Gate.ry(b, params[idx + 1]))
            idx += 2
            gates.append(Gate.cx(b, a))
    gates.append(Gate.ry(0, params[idx]))
    return Circuit(n, tuple(gates))


def ghz_circuit(n: int) -> Circuit:
    """Nearest-neighbor GHZ preparation: H then a CX chain."""
    if n < 2:
        raise ValueError("GHZ requires n >= 2")
    gates = [Gate.h(0)] + [Gate.cx(i, i + 1) for i in range(n - 1)]
    return Circuit(n, tuple(gates))


def parse_family(name: str) -> tuple[str, EntanglementStrategy | None]:
    """Split a family name like 'kernel-circular' into (kind, strategy)."""
    if name in ("ttn", "ghz"):
        return name, None
    if "-" in name:
        kind, _, strat = name.partition("-")
        if kind in ("kernel", "qnn"):
            return kind, EntanglementStrategy.parse(strat)
    raise ValueError(f"unknown circuit family {name!r}")


def build_family(name: str, n: int, seed: int | None = None) -> Circuit:
    """Construct a named circuit family at the given size.

    With ``seed=None`` angles come from the fixed default sequence, making the
    result bit-identical across runs.
    """
    kind, strategy = parse_family(name)
    if kind == "ghz":
        return ghz_circuit(n)
    if kind == "ttn":
        return ttn_circuit(n, seed=seed)
    if kind == "qnn":
        return qnn_circuit(n, strategy, seed=seed)
    # kernel: two data vectors drawn from one angle stream
    rng = np.random.default_rng(seed) if seed is not None else None
    x1 = _draw_angles(n, rng)
    x2 = _draw_angles(n, rng, offset=n)
    return kernel_circuit(n, strategy, x1, x2)
