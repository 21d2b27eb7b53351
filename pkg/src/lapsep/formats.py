"""Line-oriented text formats for matrices, graphs, and product decompositions.

Matrix::

    n p q
    <n rows of n reals>

Graph (1-based grid coordinates, w > 0)::

    graph p q m
    i1 j1 i2 j2 w        (m lines)

Decomposition::

    decomp p q t
    c                    (weight)
    re im re im ...      (2p reals, vector a)
    re im re im ...      (2q reals, vector b)
    ...                  (t such triples)

Blank lines and lines starting with ``#`` are ignored. Numbers are written in
shortest round-trip form, so write-then-read is the identity.
"""

from __future__ import annotations

import math
from pathlib import Path
from typing import Iterator

import numpy as np

from .engine import ProductDecomposition, ProductTerm
from .errors import ParseError
from .graph import Edge, WeightedGraph
from .tensor import TensorShape


def fmt(x: float) -> str:
    return repr(float(x))


def _lines(text: str) -> Iterator[tuple[int, list[str]]]:
    for lineno, raw in enumerate(text.splitlines(), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield lineno, line.split()


def _int(tok: str, lineno: int, what: str, minimum: int = 0) -> int:
    try:
        v = int(tok)
    except ValueError:
        raise ParseError(f"{what} must be an integer, got {tok!r}", lineno) from None
    if v < minimum:
        raise ParseError(f"{what} must be >= {minimum}, got {v}", lineno)
    return v


def _float(tok: str, lineno: int) -> float:
    try:
        v = float(tok)
    except ValueError:
        raise ParseError(f"expected a number, got {tok!r}", lineno) from None
    if not math.isfinite(v):
        raise ParseError(f"non-finite value {tok!r}", lineno)
    return v


def _floats(tokens: list[str], count: int, lineno: int, what: str) -> list[float]:
    if len(tokens) != count:
        raise ParseError(f"{what}: expected {count} numbers, got {len(tokens)}", lineno)
    return [_float(t, lineno) for t in tokens]


def detect_format(text: str) -> str:
    for lineno, toks in _lines(text):
        head = toks[0].lower()
        if head == "graph":
            return "graph"
        if head == "decomp":
            return "decomp"
        return "matrix"
    raise ParseError("empty input")


# -- matrix -----------------------------------------------------------------

def write_matrix(a, shape) -> str:
    a = np.asarray(a, dtype=float)
    n = a.shape[0]
    out = [f"{n} {shape.p} {shape.q}"]
    out.extend(" ".join(fmt(x) for x in row) for row in a)
    return "\n".join(out) + "\n"


def read_matrix(text: str) -> tuple[np.ndarray, TensorShape]:
    it = _lines(text)
    try:
        lineno, head = next(it)
    except StopIteration:
        raise ParseError("empty input") from None
    if len(head) != 3:
        raise ParseError("matrix header must be 'n p q'", lineno)
    n = _int(head[0], lineno, "n", 1)
    p = _int(head[1], lineno, "p", 1)
    q = _int(head[2], lineno, "q", 1)
    if n != p * q:
        raise ParseError(f"n = {n} is not p*q = {p * q}", lineno)
    rows = []
    for lineno, toks in it:
        if len(rows) == n:
            raise ParseError("extra data after matrix rows", lineno)
        rows.append(_floats(toks, n, lineno, f"row {len(rows) + 1}"))
    if len(rows) != n:
        raise ParseError(f"expected {n} rows, got {len(rows)}")
    return np.array(rows, dtype=float), TensorShape(p, q)


# -- graph ------------------------------------------------------------------

def write_graph(g: WeightedGraph) -> str:
    out = [f"graph {g.shape.p} {g.shape.q} {len(g.edges)}"]
    out.extend(f"{e.u[0]} {e.u[1]} {e.v[0]} {e.v[1]} {fmt(e.weight)}" for e in g.edges)
    return "\n".join(out) + "\n"


def read_graph(text: str) -> WeightedGraph:
    it = _lines(text)
    try:
        lineno, head = next(it)
    except StopIteration:
        raise ParseError("empty input") from None
    if len(head) != 4 or head[0].lower() != "graph":
        raise ParseError("graph header must be 'graph p q m'", lineno)
    p = _int(head[1], lineno, "p", 1)
    q = _int(head[2], lineno, "q", 1)
    m = _int(head[3], lineno, "m", 0)
    shape = TensorShape(p, q)
    edges = []
    for lineno, toks in it:
        if len(edges) == m:
            raise ParseError("extra data after edge list", lineno)
        if len(toks) != 5:
            raise ParseError("edge line must be 'i1 j1 i2 j2 w'", lineno)
        i1, j1, i2, j2 = (_int(t, lineno, "coordinate", 1) for t in toks[:4])
        if i1 > p or i2 > p or j1 > q or j2 > q:
            raise ParseError(f"edge endpoint outside the {p} x {q} grid", lineno)
        w = _float(toks[4], lineno)
        edges.append((lineno, Edge((i1, j1), (i2, j2), w)))
    if len(edges) != m:
        raise ParseError(f"expected {m} edges, got {len(edges)}")
    try:
        return WeightedGraph(shape, tuple(e for _, e in edges))
    except ValueError as exc:
        raise ParseError(str(exc)) from None


# -- decomposition ------------------------------------------------------------

def _interleave(v: np.ndarray) -> str:
    return " ".join(f"{fmt(z.real)} {fmt(z.imag)}" for z in np.asarray(v, dtype=np.complex128))


def _complex(interleaved: np.ndarray) -> np.ndarray:
    out = np.empty(len(interleaved) // 2, dtype=np.complex128)
    out.real = interleaved[0::2]
    out.imag = interleaved[1::2]
    return out


def write_decomposition(d: ProductDecomposition) -> str:
    out = [f"decomp {d.shape.p} {d.shape.q} {len(d.terms)}"]
    for t in d.terms:
        out.append(fmt(t.weight))
        out.append(_interleave(t.a))
        out.append(_interleave(t.b))
    return "\n".join(out) + "\n"


def read_decomposition(text: str) -> ProductDecomposition:
    it = _lines(text)
    try:
        lineno, head = next(it)
    except StopIteration:
        raise ParseError("empty input") from None
    if len(head) != 4 or head[0].lower() != "decomp":
        raise ParseError("decomposition header must be 'decomp p q t'", lineno)
    p = _int(head[1], lineno, "p", 1)
    q = _int(head[2], lineno, "q", 1)
    t = _int(head[3], lineno, "t", 0)
    body = list(it)
    if len(body) != 3 * t:
        raise ParseError(f"expected {3 * t} data lines for {t} terms, got {len(body)}")
    terms = []
    for k in range(t):
        (l1, w), (l2, a), (l3, b) = body[3 * k:3 * k + 3]
        weight = _floats(w, 1, l1, "weight")[0]
        av = np.array(_floats(a, 2 * p, l2, "vector a"))
        bv = np.array(_floats(b, 2 * q, l3, "vector b"))
        terms.append(ProductTerm(weight, _complex(av), _complex(bv)))
    return ProductDecomposition(TensorShape(p, q), tuple(terms))


# -- files ------------------------------------------------------------------

def load(path, fmt_hint: str | None = None):
    """Read a file and return ``(kind, payload)`` with kind in {matrix, graph, decomp}."""
    text = Path(path).read_text()
    kind = fmt_hint or detect_format(text)
    if kind == "matrix":
        return kind, read_matrix(text)
    if kind == "graph":
        return kind, read_graph(text)
    if kind == "decomp":
        return kind, read_decomposition(text)
    raise ParseError(f"unknown format {kind!r}")
