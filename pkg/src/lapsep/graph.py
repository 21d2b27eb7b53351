"""Weighted graphs on the p x q vertex grid and their Laplacian density matrices."""

from __future__ import annotations

import warnings
from dataclasses import dataclass
from typing import Iterable, NamedTuple

import numpy as np

from .errors import EmptyGraph, ReflectionCollision
from .tensor import TensorShape, as_shape, flatten, unflatten

Vertex = tuple[int, int]


class Edge(NamedTuple):
    u: Vertex
    v: Vertex
    weight: float


def _canonical_edge(shape: TensorShape, u, v, w) -> Edge:
    u = (int(u[0]), int(u[1]))
    v = (int(v[0]), int(v[1]))
    ku, kv = flatten(shape, *u), flatten(shape, *v)
    if ku == kv:
        raise ValueError(f"edge endpoints must be distinct, got {u} twice")
    w = float(w)
    if not (w > 0 and np.isfinite(w)):
        raise ValueError(f"edge weight must be positive and finite, got {w}")
    if kv < ku:
        u, v = v, u
    return Edge(u, v, w)


@dataclass(frozen=True)
class WeightedGraph:
    """Undirected graph on the full grid {1..p} x {1..q}; isolated vertices allowed.

    Edges are canonicalized: endpoints ordered by flat index and the edge list
    sorted, so two graphs with the same edge set compare equal.
    """

    shape: TensorShape
    edges: tuple[Edge, ...] = ()

    def __post_init__(self):
        shape = as_shape(self.shape)
        edges = sorted(
            (_canonical_edge(shape, *e) for e in self.edges),
            key=lambda e: (flatten(shape, *e.u), flatten(shape, *e.v)),
        )
        seen = set()
        for e in edges:
            if (e.u, e.v) in seen:
                raise ValueError(f"duplicate edge {e.u}-{e.v}")
            seen.add((e.u, e.v))
        object.__setattr__(self, "shape", shape)
        object.__setattr__(self, "edges", tuple(edges))

    @classmethod
    def from_edges(cls, p: int, q: int, edges: Iterable) -> "WeightedGraph":
        return cls(TensorShape(p, q), tuple(edges))

    @property
    def n(self) -> int:
        return self.shape.n

    def entangled_edges(self) -> list[Edge]:
        return [e for e in self.edges if e.u[0] != e.v[0] and e.u[1] != e.v[1]]


def adjacency(g: WeightedGraph) -> np.ndarray:
    a = np.zeros((g.n, g.n))
    for e in g.edges:
        k, l = flatten(g.shape, *e.u) - 1, flatten(g.shape, *e.v) - 1
        a[k, l] += e.weight
        a[l, k] += e.weight
    return a


def degrees(g: WeightedGraph) -> np.ndarray:
    """Weighted degree of every vertex, indexed by flat position."""
    d = np.zeros(g.n)
    for e in g.edges:
        d[flatten(g.shape, *e.u) - 1] += e.weight
        d[flatten(g.shape, *e.v) - 1] += e.weight
    return d


def laplacian_density(g: WeightedGraph) -> np.ndarray:
    """``(D - A) / trace(D)``: a unit-trace matrix with zero row sums."""
    adj = adjacency(g)
    total = float(adj.sum())
    if total <= 0:
        raise EmptyGraph("graph has no edges, Laplacian has zero trace")
    lap = -adj / total
    np.fill_diagonal(lap, 0.0)
    np.fill_diagonal(lap, -lap.sum(axis=1))
    return lap + 0.0  # drop negative zeros


def graph_partial_transpose(g: WeightedGraph) -> WeightedGraph:
    """Reflect every edge about its midpoint: ``{(i,j),(i',j')} -> {(i,j'),(i',j)}``.

    Edges sharing a row or a column are fixed. Colliding images have their
    weights summed and a ``ReflectionCollision`` warning is issued.
    """
    merged: dict[tuple[Vertex, Vertex], float] = {}
    collided = False
    for e in g.edges:
        (i, j), (i2, j2) = e.u, e.v
        image = _canonical_edge(g.shape, (i, j2), (i2, j), e.weight)
        key = (image.u, image.v)
        if key in merged:
            collided = True
            merged[key] += e.weight
        else:
            merged[key] = e.weight
    if collided:
        warnings.warn("partial transpose merged colliding edges", ReflectionCollision, stacklevel=2)
    return WeightedGraph(g.shape, tuple(Edge(u, v, w) for (u, v), w in merged.items()))


def degree_criterion(g: WeightedGraph, tol: float = 1e-9) -> tuple[bool, list[Vertex]]:
    """Compare vertex degrees of ``g`` and its partial transpose.

    Degrees are compared up to ``tol`` times the total degree, so the result
    agrees with the row-sum check on the normalized Laplacian.
    """
    d0 = degrees(g)
    d1 = degrees(graph_partial_transpose(g))
    scale = float(d0.sum()) or 1.0
    bad = np.flatnonzero(np.abs(d0 - d1) > tol * scale)
    return bad.size == 0, [unflatten(g.shape, int(k) + 1) for k in bad]
