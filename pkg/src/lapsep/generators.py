"""Random instance generators.

All randomness flows through ``numpy.random.Generator`` backed by PCG64, so a
fixed seed gives identical instances on every platform.

* separable kind: off-diagonal blocks are (signed) random circulations and
  diagonal blocks absorb their row sums, so every block is line-sum symmetric.
* entangled kind: star graphs whose entangled edges all meet one vertex; the
  partial transpose lowers that vertex's degree.
* random kind: unstructured members of the requested class.
"""

from __future__ import annotations

import numpy as np

from .circulation import SimpleCircuit, circuit_to_matrix
from .graph import Edge, WeightedGraph, laplacian_density
from .tensor import TensorShape, as_shape, flatten

CLASSES = ("s10", "s1", "v1")
KINDS = ("separable", "entangled", "random")


def make_rng(seed) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(seed))


def random_circuit(q: int, rng: np.random.Generator, max_len: int | None = None) -> SimpleCircuit:
    max_len = q if max_len is None else min(max_len, q)
    k = int(rng.integers(1, max_len + 1))
    return SimpleCircuit(tuple(int(x) + 1 for x in rng.permutation(q)[:k]))


def random_circulation(q: int, rng: np.random.Generator, n_circuits: int | None = None,
                       self_loops: bool = True) -> np.ndarray:
    """Positive combination of random simple circuits on ``q`` nodes."""
    if n_circuits is None:
        n_circuits = int(rng.integers(1, 2 * q + 1))
    out = np.zeros((q, q))
    for _ in range(n_circuits):
        c = random_circuit(q, rng)
        if len(c) == 1 and not self_loops:
            continue
        out += rng.uniform(0.1, 1.0) * circuit_to_matrix(c, q)
    return out


def random_laplacian(q: int, rng: np.random.Generator, density: float = 0.5) -> np.ndarray:
    """Unnormalized weighted Laplacian of a random graph on ``q`` vertices."""
    adj = np.zeros((q, q))
    for i in range(q):
        for j in range(i + 1, q):
            if rng.random() < density:
                adj[i, j] = adj[j, i] = rng.uniform(0.1, 1.0)
    return np.diag(adj.sum(axis=1)) - adj


def _normalize(a: np.ndarray) -> np.ndarray:
    t = np.trace(a)
    if t <= 0:
        raise ValueError("generated matrix has zero trace")
    return a / t


def separable_instance(shape, cls: str, rng: np.random.Generator, density: float = 0.7) -> np.ndarray:
    """Matrix in S1_0 (``s10``), S1 (``s1``) or V1 (``v1``) with all blocks line-sum symmetric."""
    s = as_shape(shape)
    if cls == "s10" and s.n == 1:
        raise ValueError("the only 1x1 matrix with zero row sums is 0")
    for _ in range(100):
        a = _separable_block_matrix(s, cls, rng, density)
        if np.trace(a) > 0:
            return _normalize(a)
    raise ValueError("could not draw a nonzero instance")


def _separable_block_matrix(s: TensorShape, cls: str, rng: np.random.Generator, density: float) -> np.ndarray:
    p, q = s.p, s.q
    sign = 1.0 if cls == "v1" else -1.0
    a = np.zeros((s.n, s.n))
    absorbed = np.zeros((p, q))
    for u in range(p):
        for v in range(u + 1, p):
            if (u, v) != (0, 1) and rng.random() > density:
                continue
            b = random_circulation(q, rng)
            a[u * q:(u + 1) * q, v * q:(v + 1) * q] = sign * b
            a[v * q:(v + 1) * q, u * q:(u + 1) * q] = sign * b.T
            absorbed[u] += b.sum(axis=1)
            absorbed[v] += b.sum(axis=0)
    for u in range(p):
        if cls == "v1":
            off = np.zeros((q, q))
            for i in range(q):
                for j in range(i + 1, q):
                    if rng.random() < 0.5:
                        off[i, j] = off[j, i] = rng.uniform(0.1, 1.0)
            diag_block = off + np.diag(off.sum(axis=1) + rng.uniform(0.0, 0.5, q))
        else:
            diag_block = random_laplacian(q, rng)
            if cls == "s1":
                diag_block += np.diag(rng.uniform(0.0, 0.5, q))
        a[u * q:(u + 1) * q, u * q:(u + 1) * q] = diag_block + np.diag(absorbed[u])
    return a


def star_graph(shape, rng: np.random.Generator, extra_edges: bool = True) -> WeightedGraph:
    """Graph whose entangled edges all share one vertex; the other edges share a row or a column."""
    s = as_shape(shape)
    if s.p < 2 or s.q < 2:
        raise ValueError("entangled instances need p >= 2 and q >= 2")
    ci, cj = int(rng.integers(1, s.p + 1)), int(rng.integers(1, s.q + 1))
    others = [(i, j) for i in range(1, s.p + 1) for j in range(1, s.q + 1) if i != ci and j != cj]
    k = int(rng.integers(1, len(others) + 1))
    picked = rng.permutation(len(others))[:k]
    edges = {}
    for m in picked:
        edges[((ci, cj), others[int(m)])] = rng.uniform(0.1, 1.0)
    if extra_edges:
        vertices = [(i, j) for i in range(1, s.p + 1) for j in range(1, s.q + 1)]
        for x in range(len(vertices)):
            for y in range(x + 1, len(vertices)):
                u, v = vertices[x], vertices[y]
                if (u[0] == v[0] or u[1] == v[1]) and rng.random() < 0.3:
                    edges[(u, v)] = rng.uniform(0.1, 1.0)
    return WeightedGraph(s, tuple(Edge(u, v, w) for (u, v), w in edges.items()))


def random_graph(shape, rng: np.random.Generator, density: float = 0.4) -> WeightedGraph:
    s = as_shape(shape)
    vertices = [(i, j) for i in range(1, s.p + 1) for j in range(1, s.q + 1)]
    edges = []
    for x in range(len(vertices)):
        for y in range(x + 1, len(vertices)):
            if rng.random() < density:
                edges.append(Edge(vertices[x], vertices[y], rng.uniform(0.1, 1.0)))
    if not edges and len(vertices) > 1:
        edges.append(Edge(vertices[0], vertices[1], rng.uniform(0.1, 1.0)))
    return WeightedGraph(s, tuple(edges))


def signless_star(shape, rng: np.random.Generator) -> np.ndarray:
    """``(D + A)/trace(D)`` for a star of entangled edges: a V1 matrix with a non-PSD partial transpose."""
    g = star_graph(shape, rng, extra_edges=False)
    adj = np.zeros((g.n, g.n))
    for e in g.edges:
        k, l = flatten(g.shape, *e.u) - 1, flatten(g.shape, *e.v) - 1
        adj[k, l] = adj[l, k] = e.weight
    return _normalize(np.diag(adj.sum(axis=1)) + adj)


def random_instance(shape, cls: str, rng: np.random.Generator) -> np.ndarray:
    s = as_shape(shape)
    if cls == "s10":
        return laplacian_density(random_graph(s, rng))
    if cls == "s1":
        lap = np.zeros((s.n, s.n))
        g = random_graph(s, rng)
        if g.edges:
            lap = laplacian_density(g)
        return _normalize(lap + np.diag(rng.uniform(0.0, 0.5 / s.n, s.n)))
    if cls == "v1":
        off = np.zeros((s.n, s.n))
        for i in range(s.n):
            for j in range(i + 1, s.n):
                if rng.random() < 0.4:
                    off[i, j] = off[j, i] = rng.uniform(0.1, 1.0)
        return _normalize(off + np.diag(off.sum(axis=1) + rng.uniform(0.0, 0.5, s.n)))
    raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")


def entangled_instance(shape, cls: str, rng: np.random.Generator) -> np.ndarray:
    s = as_shape(shape)
    if cls == "v1":
        return signless_star(s, rng)
    if cls in ("s10", "s1"):
        return laplacian_density(star_graph(s, rng))
    raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")


def generate(cls: str, p: int, q: int, seed: int, kind: str) -> np.ndarray:
    """Deterministic instance of the requested class and kind."""
    if cls not in CLASSES:
        raise ValueError(f"unknown class {cls!r}; expected one of {CLASSES}")
    if kind not in KINDS:
        raise ValueError(f"unknown kind {kind!r}; expected one of {KINDS}")
    shape = TensorShape(p, q)
    rng = make_rng(seed)
    if kind == "separable":
        return separable_instance(shape, cls, rng)
    if kind == "entangled":
        return entangled_instance(shape, cls, rng)
    return random_instance(shape, cls, rng)
