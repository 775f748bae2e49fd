"""Dense complex Hermitian arithmetic and spectral computation.

Matrices are square numpy ``complex128`` arrays. Everything downstream
(effect validation, operator order tests, projections) is built on the
eigendecomposition provided here: a cyclic Jacobi sweep with complex
rotations, deterministic for identical input bits and accurate to
~1e-14 relative for the small dimensions this library targets.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable

import numba
import numpy as np

# Jacobi stops when the off-diagonal Frobenius mass drops below
# OFF_TOL_FACTOR * ||A||_F, or after MAX_SWEEPS sweeps.
OFF_TOL_FACTOR = 1e-13
MAX_SWEEPS = 64


class DimensionMismatch(ValueError):
    """Raised when two operands do not share the same dimension."""


def _check_same_dim(A: np.ndarray, B: np.ndarray) -> None:
    if A.shape != B.shape:
        raise DimensionMismatch(f"dimension mismatch: {A.shape} vs {B.shape}")


def hermitize(M: np.ndarray) -> np.ndarray:
    """Exact Hermitian part (M + M†)/2.

    The averaged result satisfies H[i, j] == conj(H[j, i]) bit-for-bit and
    has an exactly real diagonal, which downstream code relies on.
    """
    M = np.asarray(M, dtype=np.complex128)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError(f"expected a square matrix, got shape {M.shape}")
    return (M + M.conj().T) / 2


def frobenius(A: np.ndarray) -> float:
    return float(np.linalg.norm(A))


@numba.njit(cache=True)
def _jacobi_sweeps(a, v, want_vectors, off_tol, max_sweeps):
    d = a.shape[0]
    pivot_tol = off_tol / (2.0 * d)
    for sweep in range(max_sweeps):
        off2 = 0.0
        for i in range(d - 1):
            for j in range(i + 1, d):
                x = a[i, j]
                off2 += x.real * x.real + x.imag * x.imag
        if math.sqrt(2.0 * off2) <= off_tol:
            return sweep
        for p in range(d - 1):
            for q in range(p + 1, d):
                apq = a[p, q]
                r = abs(apq)
                if r <= pivot_tol:
                    continue
                ph = apq / r
                theta = (a[q, q].real - a[p, p].real) / (2.0 * r)
                if theta >= 0.0:
                    t = 1.0 / (theta + math.sqrt(theta * theta + 1.0))
                else:
                    t = -1.0 / (-theta + math.sqrt(theta * theta + 1.0))
                c = 1.0 / math.sqrt(t * t + 1.0)
                s = t * c
                sph = s * ph
                sphc = s * ph.conjugate()
                for k in range(d):
                    akp = a[k, p]
                    akq = a[k, q]
                    a[k, p] = c * akp - sphc * akq
                    a[k, q] = sph * akp + c * akq
                for k in range(d):
                    apk = a[p, k]
                    aqk = a[q, k]
                    a[p, k] = c * apk - sph * aqk
                    a[q, k] = sphc * apk + c * aqk
                a[p, q] = 0.0
                a[q, p] = 0.0
                a[p, p] = complex(a[p, p].real, 0.0)
                a[q, q] = complex(a[q, q].real, 0.0)
                if want_vectors:
                    for k in range(d):
                        vkp = v[k, p]
                        vkq = v[k, q]
                        v[k, p] = c * vkp - sphc * vkq
                        v[k, q] = sph * vkp + c * vkq
    return max_sweeps


@dataclass(frozen=True)
class EigenDecomposition:
    """Eigenvalues ascending; columns of ``vectors`` are the eigenvectors."""

    values: np.ndarray
    vectors: np.ndarray

    def reconstruct(self) -> np.ndarray:
        V = self.vectors
        return (V * self.values) @ V.conj().T


def _run_jacobi(A: np.ndarray, want_vectors: bool) -> tuple[np.ndarray, np.ndarray]:
    a = np.ascontiguousarray(A, dtype=np.complex128).copy()
    d = a.shape[0]
    v = np.eye(d, dtype=np.complex128)
    off_tol = OFF_TOL_FACTOR * float(np.linalg.norm(a))
    _jacobi_sweeps(a, v, want_vectors, off_tol, MAX_SWEEPS)
    w = a.diagonal().real.copy()
    order = np.argsort(w, kind="stable")
    return w[order], v[:, order]


def eigh(A: np.ndarray) -> EigenDecomposition:
    """Full eigendecomposition of a Hermitian matrix.

    Cyclic Jacobi with complex rotations. The eigenvector phase is fixed by
    making the largest-modulus component of each column real and positive,
    so identical input bits always produce identical output bits.
    """
    w, V = _run_jacobi(A, True)
    for j in range(V.shape[1]):
        k = int(np.argmax(np.abs(V[:, j])))
        pivot = V[k, j]
        m = abs(pivot)
        if m > 0.0:
            V[:, j] *= pivot.conjugate() / m
    return EigenDecomposition(values=w, vectors=V)


def eigvalsh(A: np.ndarray) -> np.ndarray:
    """Eigenvalues only (ascending); skips accumulating the rotations."""
    w, _ = _run_jacobi(A, False)
    return w


def min_eigenvalue(A: np.ndarray) -> float:
    return float(eigvalsh(A)[0])


def is_psd(A: np.ndarray, tol: float) -> tuple[bool, float]:
    """PSD test with relative slack; returns (verdict, smallest eigenvalue).

    The slack is tol * max(1, ||A||_F): effects have norm near one, so this
    behaves like an absolute tolerance there while guarding tiny matrices.
    """
    w = min_eigenvalue(A)
    return w >= -tol * max(1.0, frobenius(A)), w


def apply_spectral(A: np.ndarray, f: Callable[[float], float]) -> np.ndarray:
    """V f(Lambda) V* for a real function f applied to the spectrum."""
    dec = eigh(A)
    try:
        fw = np.asarray(f(dec.values), dtype=np.float64)
        if fw.shape != dec.values.shape:
            raise ValueError
    except (TypeError, ValueError):
        fw = np.array([float(f(x)) for x in dec.values])
    return hermitize((dec.vectors * fw) @ dec.vectors.conj().T)


def matrix_abs(A: np.ndarray) -> np.ndarray:
    """Operator modulus |A| = sqrt(A*A)."""
    return apply_spectral(A, np.abs)


def psd_clip(A: np.ndarray) -> np.ndarray:
    """Frobenius-nearest positive semidefinite matrix (negative part dropped)."""
    return apply_spectral(A, lambda w: np.maximum(w, 0.0))


def pseudo_inverse(A: np.ndarray, rank_tol: float) -> np.ndarray:
    """Moore-Penrose inverse; eigenvalues |w| <= rank_tol * max|w| are zeroed."""
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    dec = eigh(A)
    absw = np.abs(dec.values)
    cut = rank_tol * absw.max()
    inv = np.zeros_like(dec.values)
    keep = absw > cut
    inv[keep] = 1.0 / dec.values[keep]
    return hermitize((dec.vectors * inv) @ dec.vectors.conj().T)


def spectral_projector(A: np.ndarray, lo: float, hi: float) -> np.ndarray:
    """Orthogonal projection onto the eigenspaces with eigenvalue in [lo, hi]."""
    if lo > hi:
        raise ValueError("empty window: lo > hi")
    dec = eigh(A)
    keep = (dec.values >= lo) & (dec.values <= hi)
    ind = np.where(keep, 1.0, 0.0)
    return hermitize((dec.vectors * ind) @ dec.vectors.conj().T)


def mul(A: np.ndarray, B: np.ndarray) -> np.ndarray:
    _check_same_dim(np.asarray(A), np.asarray(B))
    return np.asarray(A) @ np.asarray(B)


def hermitian_part(M: np.ndarray) -> np.ndarray:
    return hermitize(M)


def commutator_norm(A: np.ndarray, B: np.ndarray) -> float:
    _check_same_dim(np.asarray(A), np.asarray(B))
    return frobenius(A @ B - B @ A)
