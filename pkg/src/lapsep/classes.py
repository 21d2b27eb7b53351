"""Membership tests for the generalized-Laplacian class S and the diagonally dominant class V.

S: real symmetric, nonnegative row sums, nonpositive off-diagonal entries.
S1 adds unit trace, S1_0 adds zero row sums. V: nonnegative symmetric with
``A[i,i] >= sum_{j != i} A[i,j]``; V1 adds unit trace.

One tolerance per call, applied absolutely (entries of unit-trace matrices are O(1/n)).
"""

from __future__ import annotations

from dataclasses import asdict, dataclass, fields

import numpy as np

from .linalg import is_hermitian, is_psd
from .tensor import as_shape, block, check_square, partial_transpose

DEFAULT_TOL = 1e-9


@dataclass(frozen=True)
class ClassReport:
    is_symmetric: bool = False
    nonneg_row_sums: bool = False
    nonpos_off_diagonal: bool = False
    in_S: bool = False
    unit_trace: bool = False
    in_S1: bool = False
    zero_row_sums: bool = False
    in_S1_0: bool = False
    is_nonnegative: bool = False
    diag_dominant: bool = False
    in_V: bool = False
    in_V1: bool = False
    is_psd: bool = False
    is_valid_density: bool = False
    tol_used: float = DEFAULT_TOL

    def as_dict(self) -> dict:
        return asdict(self)

    def flags(self) -> list[str]:
        return [f.name for f in fields(self) if f.name != "tol_used" and getattr(self, f.name)]


def _real_square(a) -> np.ndarray | None:
    try:
        a = np.asarray(a)
    except Exception:
        return None
    if a.ndim != 2 or a.shape[0] != a.shape[1] or a.shape[0] == 0:
        return None
    if not np.issubdtype(a.dtype, np.number):
        return None
    if np.iscomplexobj(a):
        if np.any(np.abs(a.imag) > 0):
            return None
        a = a.real
    a = a.astype(float)
    if not np.all(np.isfinite(a)):
        return None
    return a


def classify_membership(a, tol: float = DEFAULT_TOL) -> ClassReport:
    """Compute every class flag for ``a``; never raises, invalid input gives an all-false report."""
    a = _real_square(a)
    if a is None:
        return ClassReport(tol_used=tol)

    n = a.shape[0]
    off = a - np.diag(np.diag(a))
    rows = a.sum(axis=1)
    off_rows = off.sum(axis=1)

    symmetric = bool(np.max(np.abs(a - a.T)) <= tol)
    nonneg_rows = bool(np.all(rows >= -tol))
    nonpos_off = bool(np.all(off[~np.eye(n, dtype=bool)] <= tol)) if n > 1 else True
    unit_trace = bool(abs(np.trace(a) - 1.0) <= tol)
    zero_rows = bool(np.all(np.abs(rows) <= tol))
    nonneg = bool(np.all(a >= -tol))
    dominant = bool(np.all(np.diag(a) >= off_rows - tol))

    in_S = symmetric and nonneg_rows and nonpos_off
    in_V = symmetric and nonneg and dominant

    psd = False
    if is_hermitian(a, tol):
        psd = is_psd(a, tol)[0]

    return ClassReport(
        is_symmetric=symmetric,
        nonneg_row_sums=nonneg_rows,
        nonpos_off_diagonal=nonpos_off,
        in_S=in_S,
        unit_trace=unit_trace,
        in_S1=in_S and unit_trace,
        zero_row_sums=zero_rows,
        in_S1_0=in_S and unit_trace and zero_rows,
        is_nonnegative=nonneg,
        diag_dominant=dominant,
        in_V=in_V,
        in_V1=in_V and unit_trace,
        is_psd=psd,
        is_valid_density=symmetric and unit_trace and psd,
        tol_used=tol,
    )


def is_line_sum_symmetric(b, tol: float = DEFAULT_TOL) -> bool:
    b = np.asarray(b)
    return bool(np.all(np.abs(b.sum(axis=1) - b.sum(axis=0)) <= tol))


def blockwise_line_sum_symmetric(a, shape, tol: float = DEFAULT_TOL) -> tuple[bool, tuple[int, int] | None]:
    """Check every q x q block for line-sum symmetry; report the first failing block (1-based)."""
    s = as_shape(shape)
    a = check_square(a, s)
    for u in range(1, s.p + 1):
        for v in range(1, s.p + 1):
            if not is_line_sum_symmetric(block(a, s, u, v), tol):
                return False, (u, v)
    return True, None


def row_sums_match_after_pt(a, shape, tol: float = DEFAULT_TOL) -> tuple[bool, float]:
    s = as_shape(shape)
    a = check_square(a, s)
    dev = np.abs(partial_transpose(a, s).sum(axis=1) - a.sum(axis=1))
    worst = float(np.max(dev)) if dev.size else 0.0
    return worst <= tol, worst


def is_block_tridiagonal(a, shape, tol: float = DEFAULT_TOL) -> bool:
    s = as_shape(shape)
    a = check_square(a, s)
    for u in range(1, s.p + 1):
        for v in range(u + 2, s.p + 1):
            if np.any(np.abs(block(a, s, u, v)) > tol) or np.any(np.abs(block(a, s, v, u)) > tol):
                return False
    return True


def block_tridiagonal_inference(a, shape, tol: float = DEFAULT_TOL) -> bool:
    """Block tridiagonal plus matching pT row sums, which forces every block to be line-sum symmetric.

    The matching propagates down the block chain: the (1,2) block is forced
    first, then each superdiagonal block from its predecessor.
    """
    s = as_shape(shape)
    a = check_square(a, s)
    if not is_block_tridiagonal(a, s, tol):
        return False
    ok, _ = row_sums_match_after_pt(a, s, tol)
    if ok and np.max(np.abs(a - a.T)) <= tol:
        # deviation can accumulate once per link of the chain
        assert blockwise_line_sum_symmetric(a, s, s.p * tol)[0]
    return ok
