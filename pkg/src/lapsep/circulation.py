"""Simple circuit matrices and cycle decomposition of line-sum-symmetric nonnegative matrices.

A nonnegative matrix whose i-th row sum equals its i-th column sum is a
circulation on its support digraph (diagonal entries are self-loops), so it
splits into a positive combination of simple directed cycles.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import IndexOutOfRange, NegativeEntry, NotLineSumSymmetric

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class SimpleCircuit:
    """Directed cycle over distinct 1-based indices, rotated so the smallest comes first."""

    nodes: tuple[int, ...]

    def __post_init__(self):
        nodes = tuple(int(k) for k in self.nodes)
        if not nodes:
            raise ValueError("a circuit needs at least one node")
        if len(set(nodes)) != len(nodes):
            raise ValueError(f"circuit nodes must be distinct, got {nodes}")
        if min(nodes) < 1:
            raise IndexOutOfRange(f"circuit nodes are 1-based, got {nodes}")
        k = nodes.index(min(nodes))
        object.__setattr__(self, "nodes", nodes[k:] + nodes[:k])

    def __len__(self):
        return len(self.nodes)

    def arcs(self) -> list[tuple[int, int]]:
        nodes = self.nodes
        return [(nodes[m], nodes[(m + 1) % len(nodes)]) for m in range(len(nodes))]


@dataclass(frozen=True)
class CircuitDecomposition:
    terms: tuple[tuple[float, SimpleCircuit], ...]
    source_dim: int
    dust: float = field(default=0.0, compare=False)

    def matrix(self) -> np.ndarray:
        out = np.zeros((self.source_dim, self.source_dim))
        for alpha, c in self.terms:
            for i, j in c.arcs():
                out[i - 1, j - 1] += alpha
        return out


def circuit_to_matrix(c: SimpleCircuit, q: int) -> np.ndarray:
    if max(c.nodes) > q:
        raise IndexOutOfRange(f"circuit {c.nodes} does not fit in dimension {q}")
    m = np.zeros((q, q))
    for i, j in c.arcs():
        m[i - 1, j - 1] = 1.0
    return m


def decompose_circulation(b, tol: float = DEFAULT_TOL) -> CircuitDecomposition:
    """Write ``b`` as ``sum(alpha * circuit_to_matrix(C))`` with simple circuits ``C``.

    Greedy walk: start at the smallest node with outgoing residual, always step
    to the smallest-index target with residual above ``tol`` (a self-loop is
    the target equal to the current node). The first repeated node closes a
    cycle, whose minimum residual is subtracted. Each extraction zeroes at
    least one arc, so there are at most ``nnz(b)`` terms.
    """
    r = np.array(b, dtype=float)
    if r.ndim != 2 or r.shape[0] != r.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {r.shape}")
    q = r.shape[0]
    if np.any(r < -tol):
        raise NegativeEntry(f"matrix has entries below -tol (min {r.min():.3g})")
    if not np.all(np.abs(r.sum(axis=1) - r.sum(axis=0)) <= tol):
        raise NotLineSumSymmetric("row sums differ from column sums")
    r[np.abs(r) <= tol] = 0.0

    terms: list[tuple[float, SimpleCircuit]] = []
    dust = 0.0
    while True:
        active = np.flatnonzero(r.max(axis=1) > 0) if q else []
        if len(active) == 0:
            break
        path = [int(active[0])]
        pos = {path[0]: 0}
        while True:
            here = path[-1]
            targets = np.flatnonzero(r[here] > 0)
            if targets.size == 0:
                # conservation broken by rounding: drop the arc that led here
                prev = path[-2]
                dust = max(dust, r[prev, here])
                r[prev, here] = 0.0
                break
            nxt = int(targets[0])
            if nxt in pos:
                cycle = path[pos[nxt]:]
                arcs = [(cycle[m], cycle[(m + 1) % len(cycle)]) for m in range(len(cycle))]
                alpha = min(r[i, j] for i, j in arcs)
                for i, j in arcs:
                    r[i, j] -= alpha
                    if r[i, j] <= tol:
                        dust = max(dust, abs(r[i, j]))
                        r[i, j] = 0.0
                terms.append((float(alpha), SimpleCircuit(tuple(k + 1 for k in cycle))))
                break
            pos[nxt] = len(path)
            path.append(nxt)
    return CircuitDecomposition(tuple(terms), q, dust)
