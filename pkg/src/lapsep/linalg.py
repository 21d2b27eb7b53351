"""Dense Hermitian numerics: a cyclic complex Jacobi eigensolver, PSD test, reductions.

Matrices are plain numpy arrays. Every function here returns fresh arrays and
never writes to its inputs.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .errors import NoConvergence, NotHermitian, ShapeMismatch

DEFAULT_TOL = 1e-12
MAX_SWEEPS = 100
PSD_FLOOR = 1e-12


@dataclass(frozen=True)
class SpectralDecomposition:
    """Eigenvalues ascending; column ``k`` of ``eigenvectors`` pairs with ``eigenvalues[k]``."""

    eigenvalues: np.ndarray
    eigenvectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        v = self.eigenvectors
        return (v * self.eigenvalues) @ v.conj().T


class Reductions(NamedTuple):
    trace: complex | float
    row_sums: np.ndarray
    col_sums: np.ndarray
    total_sum: complex | float
    fro_norm: float


def _as_square(m) -> np.ndarray:
    a = np.asarray(m)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ShapeMismatch(f"expected a square matrix, got shape {a.shape}")
    return a


def hermitian_error(m) -> float:
    a = _as_square(m)
    if a.size == 0:
        return 0.0
    return float(np.max(np.abs(a - a.conj().T)))


def is_hermitian(m, tol: float = DEFAULT_TOL) -> bool:
    a = _as_square(m)
    if not np.all(np.isfinite(a)):
        return False
    scale = max(1.0, float(np.linalg.norm(a)))
    return hermitian_error(a) <= tol * scale


def _check_hermitian(m, tol: float) -> np.ndarray:
    a = _as_square(m)
    if a.shape[0] < 1:
        raise ShapeMismatch("matrix must be at least 1x1")
    if not is_hermitian(a, tol):
        raise NotHermitian(
            f"matrix is not Hermitian within tol={tol:g} (max |M - M^H| = {hermitian_error(a):.3g})"
        )
    return a


def _off_norm(a: np.ndarray) -> float:
    off = a.copy()
    np.fill_diagonal(off, 0.0)
    return float(np.linalg.norm(off))


def _jacobi(a: np.ndarray, tol: float, max_sweeps: int) -> SpectralDecomposition:
    a = np.array(a, dtype=np.complex128)
    a = (a + a.conj().T) / 2
    n = a.shape[0]
    v = np.eye(n, dtype=np.complex128)
    target = tol * float(np.linalg.norm(a))

    for _ in range(max_sweeps):
        if _off_norm(a) <= target:
            break
        for p in range(n - 1):
            for q in range(p + 1, n):
                apq = a[p, q]
                mag = abs(apq)
                if mag == 0.0:
                    continue
                phase = apq / mag
                theta = (a[q, q].real - a[p, p].real) / (2.0 * mag)
                if abs(theta) > 1e150:
                    t = 1.0 / (2.0 * theta)
                else:
                    t = (1.0 if theta >= 0 else -1.0) / (abs(theta) + np.sqrt(theta * theta + 1.0))
                c = 1.0 / np.sqrt(t * t + 1.0)
                s = t * c
                # G = diag(1, conj(phase)) @ [[c, s], [-s, c]]
                g00, g01 = c, s
                g10, g11 = -s * phase.conjugate(), c * phase.conjugate()

                cp, cq = a[:, p].copy(), a[:, q].copy()
                a[:, p] = cp * g00 + cq * g10
                a[:, q] = cp * g01 + cq * g11
                rp, rq = a[p, :].copy(), a[q, :].copy()
                a[p, :] = np.conj(g00) * rp + np.conj(g10) * rq
                a[q, :] = np.conj(g01) * rp + np.conj(g11) * rq
                a[p, q] = a[q, p] = 0.0
                a[p, p] = a[p, p].real
                a[q, q] = a[q, q].real

                vp, vq = v[:, p].copy(), v[:, q].copy()
                v[:, p] = vp * g00 + vq * g10
                v[:, q] = vp * g01 + vq * g11
    else:
        if _off_norm(a) > target:
            raise NoConvergence(f"Jacobi did not converge in {max_sweeps} sweeps")

    w = np.diag(a).real.copy()
    order = np.argsort(w, kind="stable")
    v = v[:, order]
    v /= np.linalg.norm(v, axis=0)
    return SpectralDecomposition(w[order], v)


def jacobi_eigh(m, tol: float = DEFAULT_TOL, max_sweeps: int = MAX_SWEEPS) -> SpectralDecomposition:
    """Eigendecomposition of a Hermitian matrix by cyclic complex Jacobi rotations.

    Sweeps stop once the off-diagonal Frobenius mass is at most ``tol * ||M||_F``.
    Raises ``NotHermitian`` or ``NoConvergence``.
    """
    a = _check_hermitian(m, tol)
    return _jacobi(a, tol, max_sweeps)


def is_psd(m, tol: float = DEFAULT_TOL) -> tuple[bool, float, np.ndarray]:
    """Return ``(flag, min_eigenvalue, min_eigenvector)``.

    ``flag`` holds when the smallest eigenvalue is at least
    ``-tol * max(1, spectral norm)``, never tighter than ``-1e-12``.
    """
    a = _check_hermitian(m, tol)
    spec = _jacobi(a, DEFAULT_TOL, MAX_SWEEPS)
    lam = float(spec.eigenvalues[0])
    norm2 = float(np.max(np.abs(spec.eigenvalues)))
    threshold = max(tol * max(1.0, norm2), PSD_FLOOR)
    return lam >= -threshold, lam, spec.eigenvectors[:, 0].copy()


def reductions(m) -> Reductions:
    a = _as_square(m)
    row = a.sum(axis=1)
    col = a.sum(axis=0)
    return Reductions(
        trace=a.trace().item() if a.size else 0.0,
        row_sums=row,
        col_sums=col,
        total_sum=a.sum().item() if a.size else 0.0,
        fro_norm=float(np.linalg.norm(a)),
    )
