"""Grid indexing on C^p (x) C^q and the (p, q)-partial transpose.

All indices in this module's API are 1-based: ``flatten(shape, i, j) = (i-1)*q + j``.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import IndexOutOfRange, ShapeMismatch


@dataclass(frozen=True)
class TensorShape:
    p: int
    q: int

    def __post_init__(self):
        if int(self.p) != self.p or int(self.q) != self.q or self.p < 1 or self.q < 1:
            raise ShapeMismatch(f"tensor factors must be positive integers, got ({self.p}, {self.q})")

    @property
    def n(self) -> int:
        return self.p * self.q

    def flatten(self, i: int, j: int) -> int:
        return flatten(self, i, j)

    def unflatten(self, k: int) -> tuple[int, int]:
        return unflatten(self, k)


def as_shape(shape) -> TensorShape:
    if isinstance(shape, TensorShape):
        return shape
    p, q = shape
    return TensorShape(int(p), int(q))


def flatten(shape, i: int, j: int) -> int:
    s = as_shape(shape)
    if not (1 <= i <= s.p and 1 <= j <= s.q):
        raise IndexOutOfRange(f"grid index ({i}, {j}) outside 1..{s.p} x 1..{s.q}")
    return (i - 1) * s.q + j


def unflatten(shape, k: int) -> tuple[int, int]:
    s = as_shape(shape)
    if not 1 <= k <= s.n:
        raise IndexOutOfRange(f"flat index {k} outside 1..{s.n}")
    i, j = divmod(k - 1, s.q)
    return i + 1, j + 1


def check_square(a, shape) -> np.ndarray:
    s = as_shape(shape)
    a = np.asarray(a)
    if a.ndim != 2 or a.shape != (s.n, s.n):
        raise ShapeMismatch(f"matrix of shape {a.shape} does not match p*q = {s.p}*{s.q} = {s.n}")
    return a


def block(a, shape, u: int, v: int) -> np.ndarray:
    """The q x q block in block-row ``u``, block-column ``v`` (1-based), as a copy."""
    s = as_shape(shape)
    a = check_square(a, s)
    if not (1 <= u <= s.p and 1 <= v <= s.p):
        raise IndexOutOfRange(f"block ({u}, {v}) outside 1..{s.p}")
    q = s.q
    return a[(u - 1) * q:u * q, (v - 1) * q:v * q].copy()


def partial_transpose(a, shape) -> np.ndarray:
    """Transpose every q x q block in place of a new copy of ``a``.

    Entrywise: ``pT[(i,j),(k,l)] = A[(i,l),(k,j)]``.
    """
    s = as_shape(shape)
    a = check_square(a, s)
    p, q = s.p, s.q
    return a.reshape(p, q, p, q).transpose(0, 3, 2, 1).reshape(s.n, s.n).copy()


def is_entangled_position(shape, k: int, l: int) -> bool:
    """True when flat positions ``k`` and ``l`` differ in both grid coordinates."""
    i, j = unflatten(shape, k)
    i2, j2 = unflatten(shape, l)
    return i != i2 and j != j2
