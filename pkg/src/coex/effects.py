"""The effect algebra: order, complement, Jordan product, infima.

An effect is a Hermitian operator E with 0 <= E <= I. Alongside the
elementary operations (complement, partial order, Jordan product,
generalized infimum) this module carries the finite-dimensional recipe
for the true order-theoretic infimum of two effects: shrink both to the
intersection of their ranges, then compare.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import hermitian as hm
from .hermitian import DimensionMismatch

EPS_PSD = 1e-9          # spectrum slack for effect validation and order tests
RANK_TOL = 1e-9         # eigenvalue threshold for range projectors
EPS_INTERSECT = 1e-7    # window around eigenvalue 2 of P+Q for range intersection

EXISTS = "EXISTS"
NOT_EXISTS = "NOT_EXISTS"


class SpectrumOutOfRange(ValueError):
    """An eigenvalue escapes [0, 1]; ``witness`` holds the offender."""

    def __init__(self, message: str, witness: float):
        super().__init__(message)
        self.witness = witness


class NotAProjection(ValueError):
    """Input expected to be an orthogonal projection is not one."""


class Effect:
    """A validated Hermitian contraction 0 <= E <= I.

    Build instances through :func:`validate_effect` (or the exemplar
    constructors); the bare constructor trusts its input.
    """

    __slots__ = ("matrix",)

    def __init__(self, matrix: np.ndarray):
        m = np.asarray(matrix, dtype=np.complex128)
        m.setflags(write=False)
        self.matrix = m

    @property
    def dim(self) -> int:
        return self.matrix.shape[0]

    def __repr__(self) -> str:
        return f"Effect(dim={self.dim})"


def validate_effect(A: np.ndarray, tol: float = EPS_PSD) -> Effect:
    """Validate 0 <= A <= I and wrap it; no clamping is performed."""
    H = hm.hermitize(A)
    if not np.all(np.isfinite(H)):
        raise ValueError("effect matrix contains non-finite entries")
    ok_low, w_min = hm.is_psd(H, tol)
    if not ok_low:
        raise SpectrumOutOfRange(f"eigenvalue {w_min} below 0", w_min)
    ok_high, slack = hm.is_psd(np.eye(H.shape[0]) - H, tol)
    if not ok_high:
        raise SpectrumOutOfRange(f"eigenvalue {1 - slack} above 1", 1 - slack)
    return Effect(H)


def complement(E: Effect) -> Effect:
    """E^perp = I - E. Exact and involutive; no revalidation needed."""
    return Effect(np.eye(E.dim) - E.matrix)


def leq(E: Effect, F: Effect, tol: float = EPS_PSD) -> bool:
    """Operator order: E <= F iff F - E is positive semidefinite."""
    hm._check_same_dim(E.matrix, F.matrix)
    ok, _ = hm.is_psd(F.matrix - E.matrix, tol)
    return ok


def jordan_product(E: Effect, F: Effect) -> np.ndarray:
    """(EF + FE)/2: Hermitian by construction but not necessarily positive."""
    hm._check_same_dim(E.matrix, F.matrix)
    return hm.hermitize((E.matrix @ F.matrix + F.matrix @ E.matrix) / 2)


def generalized_infimum(E: Effect, F: Effect) -> np.ndarray:
    """(E + F - |E - F|)/2: below both E and F, but possibly non-positive."""
    hm._check_same_dim(E.matrix, F.matrix)
    return hm.hermitize((E.matrix + F.matrix - hm.matrix_abs(E.matrix - F.matrix)) / 2)


def range_projector(E: Effect, rank_tol: float = RANK_TOL) -> np.ndarray:
    """Projection onto the span of eigenvectors with eigenvalue > rank_tol."""
    if rank_tol <= 0:
        raise ValueError("rank_tol must be positive")
    dec = hm.eigh(E.matrix)
    keep = np.where(dec.values > rank_tol, 1.0, 0.0)
    return hm.hermitize((dec.vectors * keep) @ dec.vectors.conj().T)


def _check_projection(P: np.ndarray, tol: float = EPS_PSD) -> np.ndarray:
    P = np.asarray(P, dtype=np.complex128)
    scale = max(1.0, hm.frobenius(P))
    if hm.frobenius(P - P.conj().T) > tol * scale:
        raise NotAProjection("input is not Hermitian")
    if hm.frobenius(P @ P - P) > tol * scale:
        raise NotAProjection("input is not idempotent")
    return P


def intersection_projector(P: np.ndarray, Q: np.ndarray,
                           eps: float = EPS_INTERSECT) -> np.ndarray:
    """Projection onto ran(P) ∩ ran(Q).

    A vector is in both ranges exactly when it is an eigenvector of P+Q
    with eigenvalue 2, so the intersection projector is the spectral
    projector of P+Q on a small window around 2. For non-intersecting
    ranges the next eigenvalue down is generically O(1) away.
    """
    P = _check_projection(P)
    Q = _check_projection(Q)
    hm._check_same_dim(P, Q)
    return hm.spectral_projector(hm.hermitize(P + Q), 2 - eps, 2 + eps)


def infimum_with_projection(E: Effect, P: np.ndarray,
                            rank_tol: float = RANK_TOL) -> Effect:
    """The effect infimum E ∧ P for an orthogonal projection P.

    Realized as the shorted operator of E to ran(P): the unique maximal
    positive operator below E supported inside ran(P). In a block basis
    [ran P ; ker P] it is the generalized Schur complement
    E11 - E12 E22⁺ E21 padded with zeros.
    """
    P = _check_projection(P)
    hm._check_same_dim(E.matrix, P)
    dec = hm.eigh(P)
    inside = dec.values >= 0.5
    if not inside.any():
        return Effect(np.zeros_like(E.matrix))
    U1 = dec.vectors[:, inside]
    U2 = dec.vectors[:, ~inside]
    E11 = U1.conj().T @ E.matrix @ U1
    if U2.shape[1] == 0:
        return Effect(hm.hermitize(U1 @ E11 @ U1.conj().T))
    E12 = U1.conj().T @ E.matrix @ U2
    E22 = hm.hermitize(U2.conj().T @ E.matrix @ U2)
    S = E11 - E12 @ hm.pseudo_inverse(E22, rank_tol) @ E12.conj().T
    return Effect(hm.hermitize(U1 @ S @ U1.conj().T))


@dataclass(frozen=True)
class InfimumResult:
    """Outcome of the two-effect infimum; diagnostics always populated."""

    kind: str                  # EXISTS or NOT_EXISTS
    value: Effect | None       # present iff kind == EXISTS
    meet_e: Effect             # E ∧ P_{E,F}
    meet_f: Effect             # F ∧ P_{E,F}
    e_below_f: bool
    f_below_e: bool

    @property
    def exists(self) -> bool:
        return self.kind == EXISTS


def infimum(E: Effect, F: Effect, tol: float = EPS_PSD,
            rank_tol: float = RANK_TOL) -> InfimumResult:
    """Greatest lower bound E ∧ F in the effect order, when it exists.

    Finite-dimensional recipe: project both effects to the intersection
    of their ranges (P = P_{E,F}), short each one to ran(P), and compare.
    The infimum exists iff the two shorted operators are comparable, and
    then equals the smaller one.
    """
    hm._check_same_dim(E.matrix, F.matrix)
    P = intersection_projector(range_projector(E, rank_tol),
                               range_projector(F, rank_tol))
    A = infimum_with_projection(E, P, rank_tol)
    B = infimum_with_projection(F, P, rank_tol)
    a_le_b = leq(A, B, tol)
    b_le_a = leq(B, A, tol)
    if a_le_b or b_le_a:
        return InfimumResult(EXISTS, A if a_le_b else B, A, B, a_le_b, b_le_a)
    return InfimumResult(NOT_EXISTS, None, A, B, False, False)
