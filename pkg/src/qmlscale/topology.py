"""Processor coupling graphs (linear, ring, grid, star) and hop distances."""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

TOPOLOGY_NAMES = ("linear", "ring", "grid", "star")


@dataclass(frozen=True)
class CouplingGraph:
    """Bidirectional device connectivity: unordered physical-qubit pairs."""
    n: int
    edges: frozenset[frozenset[int]]

    def __post_init__(self):
        for e in self.edges:
            if len(e) != 2:
                raise ValueError(f"edge {set(e)} is not a pair")
            if any(q < 0 or q >= self.n for q in e):
                raise ValueError(f"edge {set(e)} out of range for n={self.n}")

    @staticmethod
    def from_pairs(n: int, pairs) -> "CouplingGraph":
        return CouplingGraph(n, frozenset(frozenset(p) for p in pairs))

    def edge_list(self) -> list[tuple[int, int]]:
        """Edges as sorted (u, v) tuples with u < v, in deterministic order."""
        return sorted(tuple(sorted(e)) for e in self.edges)

    def neighbors(self) -> list[list[int]]:
        adj: list[list[int]] = [[] for _ in range(self.n)]
        for u, v in self.edge_list():
            adj[u].append(v)
            adj[v].append(u)
        return adj


def build_topology(kind: str, n: int) -> CouplingGraph:
    """Build one of the four device layouts at the given qubit count.

    The grid uses floor(sqrt(n)) rows and enough columns to fit, placing
    qubits row-major; the last row may be partial.
    """
    if n < 2:
        raise ValueError("topology requires n >= 2")
    kind = kind.lower()
    if kind == "linear":
        pairs = [(i, i + 1) for i in range(n - 1)]
    elif kind == "ring":
        pairs = [(i, i + 1) for i in range(n - 1)] + [(n - 1, 0)]
    elif kind == "grid":
        rows = max(1, math.floor(math.sqrt(n)))
        cols = math.ceil(n / rows)
        pairs = []
        for i in range(n):
            if (i % cols) != cols - 1 and i + 1 < n:
                pairs.append((i, i + 1))
            if i + cols < n:
                pairs.append((i, i + cols))
    elif kind == "star":
        pairs = [(0, i) for i in range(1, n)]
    else:
        raise ValueError(f"unknown topology {kind!r}")
    return CouplingGraph.from_pairs(n, pairs)


def distance_matrix(graph: CouplingGraph) -> np.ndarray:
    """All-pairs hop counts via breadth-first search; raises if disconnected."""
    rows, cols = [], []
    for u, v in graph.edge_list():
        rows.extend((u, v))
        cols.extend((v, u))
    data = np.ones(len(rows), dtype=np.int8)
    adj = csr_matrix((data, (rows, cols)), shape=(graph.n, graph.n))
    dist = shortest_path(adj, method="D", unweighted=True, directed=False)
    if np.isinf(dist).any():
        raise ValueError("coupling graph is disconnected")
    return dist.astype(np.int64)
