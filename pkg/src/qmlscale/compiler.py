"""Three-stage compilation onto a coupling graph.

Pipeline: decompose to the {U3, CX} basis, place with the identity layout,
route with a SABRE-style SWAP search, expand SWAPs, then run a peephole
optimizer (adjacent single-qubit merges and CX pair cancellation). Emits
resource metrics comparing the pre-routing and final circuits.
"""
from __future__ import annotations

import cmath
import math
from collections import deque
from dataclasses import dataclass

import numpy as np

from .circuits import Circuit, Gate, count_gates, depth, dumps
from .oracle import gate_matrix
from .topology import CouplingGraph, distance_matrix

_PI = math.pi


@dataclass(frozen=True)
class Layout:
    """Bijection between virtual circuit qubits and physical device qubits."""
    v2p: tuple[int, ...]
    p2v: tuple[int, ...]

    def __post_init__(self):
        n = len(self.v2p)
        if len(self.p2v) != n or sorted(self.v2p) != list(range(n)):
            raise ValueError("layout is not a bijection")
        if any(self.p2v[p] != v for v, p in enumerate(self.v2p)):
            raise ValueError("v2p and p2v are inconsistent")


def trivial_layout(n: int) -> Layout:
    """Identity mapping q_i -> Q_i."""
    ident = tuple(range(n))
    return Layout(ident, ident)


@dataclass(frozen=True)
class SabreConfig:
    """Routing heuristic knobs; defaults follow the common SABRE settings."""
    extended_set_size: int = 20
    lookahead_weight: float = 0.5
    decay_increment: float = 0.001
    decay_reset_interval: int = 5
    seed: int = 0
    stall_limit: int | None = None  # None resolves to 3 * device qubits

    def __post_init__(self):
        if self.extended_set_size < 0:
            raise ValueError("extended_set_size must be >= 0")
        if not 0.0 <= self.lookahead_weight <= 1.0:
            raise ValueError("lookahead_weight must be in [0, 1]")
        if self.decay_increment < 0:
            raise ValueError("decay_increment must be >= 0")
        if self.stall_limit is not None and self.stall_limit < 1:
            raise ValueError("stall_limit must be >= 1")


@dataclass(frozen=True)
class ResourceMetrics:
    swap_count: int
    depth_pre: int
    depth_post: int
    depth_increase_pct: float
    twoq_pre: int
    twoq_post: int
    twoq_overhead_pct: float


@dataclass(frozen=True)
class CompiledCircuit:
    """Routed, basis-decomposed, optimized circuit plus its layouts and metrics."""
    circuit: Circuit
    initial_layout: Layout
    final_layout: Layout
    metrics: ResourceMetrics


class _SabreRouter:
    """One deterministic routing trial over the gate dependency DAG."""

    def __init__(self, circuit: Circuit, graph: CouplingGraph, layout: Layout,
                 cfg: SabreConfig):
        self.gates = circuit.gates
        self.n_phys = graph.n
        self.cfg = cfg
        self.dist = distance_matrix(graph).tolist()
        self.edges = graph.edge_list()
        self.adjacent = set()
        for u, v in self.edges:
            self.adjacent.add(u * graph.n + v)
            self.adjacent.add(v * graph.n + u)
        self.edges_by_qubit: list[list[tuple[int, int]]] = [[] for _ in range(graph.n)]
        for e in self.edges:
            self.edges_by_qubit[e[0]].append(e)
            self.edges_by_qubit[e[1]].append(e)
        self.neighbors = graph.neighbors()
        self.v2p = list(layout.v2p)
        self.p2v = list(layout.p2v)
        # per-wire dependency DAG
        self.succ: list[list[int]] = [[] for _ in self.gates]
        self.pred_count = [0] * len(self.gates)
        last: dict[int, int] = {}
        for i, g in enumerate(self.gates):
            for q in g.qubits:
                if q in last:
                    self.succ[last[q]].append(i)
                    self.pred_count[i] += 1
                last[q] = i
        self.decay = [1.0] * graph.n
        self.out: list[Gate] = []
        self.swap_count = 0
        self.stall_limit = cfg.stall_limit if cfg.stall_limit is not None else 3 * graph.n

    def _emit(self, g: Gate):
        qs = tuple(self.v2p[q] for q in g.qubits)
        self.out.append(Gate(g.kind, qs, g.params))

    def _apply_swap(self, u: int, v: int):
        self.out.append(Gate.swap(min(u, v), max(u, v)))
        a, b = self.p2v[u], self.p2v[v]
        self.p2v[u], self.p2v[v] = b, a
        self.v2p[a], self.v2p[b] = v, u
        self.swap_count += 1

    def _extended_set(self, front: list[int]) -> list[int]:
        limit = self.cfg.extended_set_size
        if limit == 0:
            return []
        ext: list[int] = []
        decremented: dict[int, int] = {}
        layer = front
        done = False
        while layer and not done:
            nxt = []
            for gi in layer:
                for s in self.succ[gi]:
                    decremented[s] = decremented.get(s, 0) + 1
                    self.pred_count[s] -= 1
                    if self.pred_count[s] == 0:
                        nxt.append(s)
                        if self.gates[s].is_two_qubit:
                            ext.append(s)
                if len(ext) >= limit:
                    done = True
                    break
            layer = nxt
        for s, c in decremented.items():
            self.pred_count[s] += c
        return ext

    def _choose_swap(self, front2q: list[int], ext: list[int]) -> tuple[int, int]:
        dist, v2p = self.dist, self.v2p
        front_pairs = []
        gate_at_phys: dict[int, int] = {}
        front_base = 0
        for k, gi in enumerate(front2q):
            a, b = self.gates[gi].qubits
            pa, pb = v2p[a], v2p[b]
            front_pairs.append((pa, pb))
            gate_at_phys[pa] = k
            gate_at_phys[pb] = k
            front_base += dist[pa][pb]
        ext_pairs = []
        ext_at_phys: dict[int, list[int]] = {}
        ext_base = 0
        for k, gi in enumerate(ext):
            a, b = self.gates[gi].qubits
            pa, pb = v2p[a], v2p[b]
            ext_pairs.append((pa, pb))
            ext_at_phys.setdefault(pa, []).append(k)
            ext_at_phys.setdefault(pb, []).append(k)
            ext_base += dist[pa][pb]

        candidates: set[tuple[int, int]] = set()
        for p in gate_at_phys:
            candidates.update(self.edges_by_qubit[p])
        n_front = len(front2q)
        n_ext = max(1, len(ext_pairs))
        w = self.cfg.lookahead_weight
        best_edge = None
        best_score = math.inf
        for u, v in sorted(candidates):
            df = 0
            seen_front = gate_at_phys.get(u)
            alt = gate_at_phys.get(v)
            front_hits = {seen_front, alt} - {None}
            for k in front_hits:
                pa, pb = front_pairs[k]
                na = v if pa == u else (u if pa == v else pa)
                nb = v if pb == u else (u if pb == v else pb)
                df += dist[na][nb] - dist[pa][pb]
            de = 0
            ext_hits = set(ext_at_phys.get(u, ())) | set(ext_at_phys.get(v, ()))
            for k in ext_hits:
                pa, pb = ext_pairs[k]
                na = v if pa == u else (u if pa == v else pa)
                nb = v if pb == u else (u if pb == v else pb)
                de += dist[na][nb] - dist[pa][pb]
            decay = self.decay[u] if self.decay[u] >= self.decay[v] else self.decay[v]
            score = decay * ((front_base + df) / n_front + w * (ext_base + de) / n_ext)
            if score < best_score:
                best_score = score
                best_edge = (u, v)
        return best_edge

    def _shortest_path(self, src: int, dst: int) -> list[int]:
        parent = {src: src}
        queue = deque([src])
        while queue:
            p = queue.popleft()
            if p == dst:
                break
            for q in self.neighbors[p]:
                if q not in parent:
                    parent[q] = p
                    queue.append(q)
        path = [dst]
        while path[-1] != src:
            path.append(parent[path[-1]])
        path.reverse()
        return path

    def _swap_bookkeeping(self, u: int, v: int):
        if self.swap_count % self.cfg.decay_reset_interval == 0:
            self.decay = [1.0] * self.n_phys
        else:
            self.decay[u] += self.cfg.decay_increment
            self.decay[v] += self.cfg.decay_increment

    def run(self) -> tuple[Circuit, Layout, int]:
        front = [i for i, c in enumerate(self.pred_count) if c == 0]
        ext_cache: list[int] | None = None
        stall = 0
        v2p, adjacent, n = self.v2p, self.adjacent, self.n_phys
        while front:
            executable = []
            blocked = []
            for gi in front:
                g = self.gates[gi]
                if not g.is_two_qubit:
                    executable.append(gi)
                elif v2p[g.qubits[0]] * n + v2p[g.qubits[1]] in adjacent:
                    executable.append(gi)
                else:
                    blocked.append(gi)
            if executable:
                front = blocked
                for gi in executable:
                    self._emit(self.gates[gi])
                    for s in self.succ[gi]:
                        self.pred_count[s] -= 1
                        if self.pred_count[s] == 0:
                            front.append(s)
                self.decay = [1.0] * n
                ext_cache = None
                stall = 0
                continue
            if stall >= self.stall_limit:
                # release valve: walk the first blocked gate together directly
                a, b = self.gates[front[0]].qubits
                path = self._shortest_path(v2p[a], v2p[b])
                for i in range(len(path) - 2):
                    u, w = path[i], path[i + 1]
                    self._apply_swap(u, w)
                    self._swap_bookkeeping(u, w)
                stall = 0
                continue
            if ext_cache is None:
                ext_cache = self._extended_set(front)
            u, v = self._choose_swap(front, ext_cache)
            self._apply_swap(u, v)
            self._swap_bookkeeping(u, v)
            stall += 1
        routed = Circuit(self.n_phys, tuple(self.out))
        final = Layout(tuple(self.v2p), tuple(self.p2v))
        return routed, final, self.swap_count


def sabre_route(
    circuit: Circuit,
    graph: CouplingGraph,
    layout: Layout | None = None,
    cfg: SabreConfig | None = None,
) -> tuple[Circuit, Layout, int]:
    """Insert SWAPs so every two-qubit gate acts on coupled physical qubits.

    Returns the routed circuit over physical wires, the final layout, and the
    number of SWAPs inserted (before any 3-CX expansion).
    """
    if circuit.n_qubits > graph.n:
        raise ValueError(f"circuit ({circuit.n_qubits} qubits) exceeds device ({graph.n})")
    if layout is None:
        layout = trivial_layout(graph.n)
    if len(layout.v2p) != graph.n:
        raise ValueError("layout size must match device size")
    return _SabreRouter(circuit, graph, layout, cfg or SabreConfig()).run()


_H_U3 = (_PI / 2, 0.0, _PI)


def decompose_to_basis(circuit: Circuit) -> Circuit:
    """Rewrite every gate into the {U3, CX} basis (global phases discarded)."""
    out: list[Gate] = []
    for g in circuit.gates:
        kind = g.kind
        if kind in ("U3", "CX"):
            out.append(g)
        elif kind == "H":
            out.append(Gate.u3(g.qubits[0], *_H_U3))
        elif kind == "X":
            out.append(Gate.u3(g.qubits[0], _PI, 0.0, _PI))
        elif kind == "RX":
            out.append(Gate.u3(g.qubits[0], g.params[0], -_PI / 2, _PI / 2))
        elif kind == "RY":
            out.append(Gate.u3(g.qubits[0], g.params[0], 0.0, 0.0))
        elif kind in ("RZ", "P"):
            out.append(Gate.u3(g.qubits[0], 0.0, 0.0, g.params[0]))
        elif kind == "SWAP":
            a, b = g.qubits
            out.extend((Gate.cx(a, b), Gate.cx(b, a), Gate.cx(a, b)))
        elif kind == "CZ":
            a, b = g.qubits
            out.extend((Gate.u3(b, *_H_U3), Gate.cx(a, b), Gate.u3(b, *_H_U3)))
        else:
            raise ValueError(f"cannot decompose gate kind {kind!r}")
    return Circuit(circuit.n_qubits, tuple(out))


def _u3_angles(m: np.ndarray) -> tuple[float, float, float]:
    """Extract (theta, phi, lam) with U3 == m up to global phase (Z-Y-Z form)."""
    a, b = abs(m[0, 0]), abs(m[1, 0])
    theta = 2.0 * math.atan2(b, a)
    if b < 1e-12:
        # diagonal: keep phi = 0 and fold all phase into lam
        return 0.0, 0.0, cmath.phase(m[1, 1] / m[0, 0])
    if a < 1e-12:
        return _PI, 0.0, cmath.phase(-m[0, 1] / m[1, 0])
    v = m / (m[0, 0] / a)
    return theta, cmath.phase(v[1, 0]), cmath.phase(-v[0, 1])


def _is_identity(m: np.ndarray, tol: float = 1e-9) -> bool:
    if abs(m[0, 0]) < 0.5:
        return False
    phase = m[0, 0] / abs(m[0, 0])
    return bool(np.max(np.abs(m / phase - np.eye(2))) <= tol)


def _merge_runs(gates: tuple[Gate, ...]) -> list[Gate]:
    """Fuse maximal adjacent single-qubit runs per wire into one U3 each."""
    pending: dict[int, list[Gate]] = {}
    out: list[Gate] = []

    def flush(q: int):
        run = pending.pop(q, None)
        if not run:
            return
        if len(run) == 1:
            if not _is_identity(gate_matrix(run[0].kind, run[0].params)):
                out.append(run[0])
            return
        m = gate_matrix(run[0].kind, run[0].params)
        for g in run[1:]:
            m = gate_matrix(g.kind, g.params) @ m
        if not _is_identity(m):
            out.append(Gate.u3(q, *_u3_angles(m)))

    for g in gates:
        if g.is_two_qubit:
            for q in sorted(g.qubits):
                flush(q)
            out.append(g)
        else:
            pending.setdefault(g.qubits[0], []).append(g)
    for q in sorted(pending):
        flush(q)
    return out


def _cancel_cx_pairs(gates: list[Gate]) -> list[Gate]:
    """Drop adjacent identical-orientation CX pairs with nothing in between."""
    out: list[Gate | None] = []
    last_on: dict[int, int] = {}

    def rescan(q: int, start: int):
        for i in range(start, -1, -1):
            g = out[i]
            if g is not None and q in g.qubits:
                last_on[q] = i
                return
        last_on.pop(q, None)

    for g in gates:
        if g.kind == "CX":
            a, b = g.qubits
            ia, ib = last_on.get(a), last_on.get(b)
            if ia is not None and ia == ib and out[ia].qubits == g.qubits \
                    and out[ia].kind == "CX":
                out[ia] = None
                rescan(a, ia - 1)
                rescan(b, ia - 1)
                continue
        out.append(g)
        for q in g.qubits:
            last_on[q] = len(out) - 1
    return [g for g in out if g is not None]


def optimize(circuit: Circuit) -> Circuit:
    """Peephole pass to fixpoint; never increases depth or gate counts."""
    gates = circuit.gates
    while True:
        new = tuple(_cancel_cx_pairs(_merge_runs(gates)))
        if new == gates:
            return Circuit(circuit.n_qubits, new)
        gates = new


def _pct(pre: int, post: int) -> float:
    if pre == 0:
        return 0.0
    return 100.0 * (post - pre) / pre


def compile_circuit(
    circuit: Circuit,
    graph: CouplingGraph,
    cfg: SabreConfig | None = None,
) -> CompiledCircuit:
    """Full pipeline; pre metrics are taken after the initial basis decomposition."""
    cfg = cfg or SabreConfig()
    decomposed = decompose_to_basis(circuit)
    layout = trivial_layout(graph.n)
    routed, final_layout, swap_count = sabre_route(decomposed, graph, layout, cfg)
    final = optimize(decompose_to_basis(routed))

    allowed = set()
    for u, v in graph.edge_list():
        allowed.add((u, v))
        allowed.add((v, u))
    for g in final.gates:
        if g.is_two_qubit and g.qubits not in allowed:
            raise AssertionError(f"routed gate {g} not on a coupling edge")

    depth_pre, depth_post = depth(decomposed), depth(final)
    twoq_pre = count_gates(decomposed).two_qubit
    twoq_post = count_gates(final).two_qubit
    metrics = ResourceMetrics(
        swap_count=swap_count,
        depth_pre=depth_pre,
        depth_post=depth_post,
        depth_increase_pct=_pct(depth_pre, depth_post),
        twoq_pre=twoq_pre,
        twoq_post=twoq_post,
        twoq_overhead_pct=_pct(twoq_pre, twoq_post),
    )
    return CompiledCircuit(final, layout, final_layout, metrics)


def dumps_compiled(compiled: CompiledCircuit) -> str:
    """Metrics header line followed by the routed circuit's textual dump."""
    m = compiled.metrics
    header = (f"# swaps={m.swap_count}, depth_pre={m.depth_pre}, "
              f"depth_post={m.depth_post}, twoq_pre={m.twoq_pre}, twoq_post={m.twoq_post}")
    body = dumps(compiled.circuit)
    return header + ("\n" + body if body else "")
