"""Constructors for the concrete effect families used throughout.

Qubit effects in Bloch form, the noisy unbiased-basis pair in dimension
d, rank-one pairs, and the exact qubit coexistence criteria that serve
as ground truth for the numerical condition checkers.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import effects as eff
from .effects import Effect

PAULI_X = np.array([[0, 1], [1, 0]], dtype=np.complex128)
PAULI_Y = np.array([[0, -1j], [1j, 0]], dtype=np.complex128)
PAULI_Z = np.array([[1, 0], [0, -1]], dtype=np.complex128)
_PAULI = (PAULI_X, PAULI_Y, PAULI_Z)

BLOCH_SLACK = 1e-12


class InvalidBloch(ValueError):
    """Bloch parameters outside the effect body."""


@dataclass(frozen=True)
class QubitEffect:
    """Bloch parametrization (alpha, v) of the 2x2 effect (alpha*I + v.sigma)/2."""

    alpha: float
    bloch: tuple[float, float, float]

    def __post_init__(self):
        v = np.asarray(self.bloch, dtype=float)
        if v.shape != (3,):
            raise InvalidBloch("bloch vector must have three components")
        if not 0 <= self.alpha <= 2:
            raise InvalidBloch(f"alpha={self.alpha} outside [0, 2]")
        limit = min(self.alpha, 2 - self.alpha)
        if np.linalg.norm(v) > limit + BLOCH_SLACK:
            raise InvalidBloch(
                f"|v|={np.linalg.norm(v):.6g} exceeds min(alpha, 2-alpha)={limit:.6g}")

    def effect(self) -> Effect:
        v = self.bloch
        m = self.alpha * np.eye(2) + v[0] * PAULI_X + v[1] * PAULI_Y + v[2] * PAULI_Z
        return Effect(m / 2)


def qubit_effect(alpha: float, v) -> Effect:
    """(alpha*I + v.sigma)/2 with eigenvalues (alpha ± |v|)/2."""
    vx, vy, vz = (float(x) for x in v)
    return QubitEffect(alpha, (vx, vy, vz)).effect()


def busch_criterion(e, f) -> tuple[bool, float]:
    """Exact coexistence decision for an unbiased qubit pair.

    Returns (decision, margin) with margin = 2 - |e+f| - |e-f|; the pair
    is coexistent iff the margin is nonnegative.
    """
    e = np.asarray(e, dtype=float)
    f = np.asarray(f, dtype=float)
    if np.linalg.norm(e) > 1 + BLOCH_SLACK or np.linalg.norm(f) > 1 + BLOCH_SLACK:
        raise InvalidBloch("unbiased criterion needs |e| <= 1 and |f| <= 1")
    margin = 2 - np.linalg.norm(e + f) - np.linalg.norm(e - f)
    return margin >= 0, float(margin)


def liu_criterion(e_norm: float, f_norm: float, beta: float) -> tuple[bool, float]:
    """Exact decision for E unbiased, F biased by beta, with e orthogonal to f.

    Returns (decision, margin) with
    margin = sqrt(beta^2 - |f|^2) + sqrt((2-beta)^2 - |f|^2) - 2|e|.
    """
    if not 0 <= e_norm <= 1 + BLOCH_SLACK:
        raise ValueError(f"|e|={e_norm} outside [0, 1]")
    if not f_norm - BLOCH_SLACK <= beta <= 2 - f_norm + BLOCH_SLACK:
        raise ValueError(f"beta={beta} outside [|f|, 2-|f|]")
    margin = (math.sqrt(max(beta**2 - f_norm**2, 0.0))
              + math.sqrt(max((2 - beta) ** 2 - f_norm**2, 0.0))
              - 2 * e_norm)
    return margin >= 0, float(margin)


def liu_pair(e_norm: float, f_norm: float, beta: float) -> tuple[Effect, Effect]:
    """Canonical frame for the biased orthogonal family: e along x, f along y."""
    E = qubit_effect(1.0, (e_norm, 0.0, 0.0))
    F = qubit_effect(beta, (0.0, f_norm, 0.0))
    return E, F


def mub_pair(dim: int, lam: float) -> tuple[Effect, Effect]:
    """Noisy pair mixing a basis projection and the uniform superposition.

    E = lam |0><0| + (1-lam) I/d and F = lam |u><u| + (1-lam) I/d where
    u is the uniform superposition of the basis; their overlap is 1/sqrt(d).
    """
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    if not 0 <= lam <= 1:
        raise ValueError(f"lambda={lam} outside [0, 1]")
    phi0 = np.zeros(dim, dtype=np.complex128)
    phi0[0] = 1.0
    psi0 = np.ones(dim, dtype=np.complex128) / math.sqrt(dim)
    noise = (1 - lam) * np.eye(dim) / dim
    E = Effect(lam * np.outer(phi0, phi0.conj()) + noise)
    F = Effect(lam * np.outer(psi0, psi0.conj()) + noise)
    return E, F


def lambda_max(dim: int) -> float:
    """Mixing weight below which the basis/superposition pair is known coexistent."""
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    return 0.5 + (math.sqrt(dim) - 1) / (2 * (dim - 1))


def lambda_jor(dim: int) -> float:
    """Exact Jordan-positivity threshold for the basis/superposition pair.

    The binding term is E.F restricted to span{|0>, |u>}, where the two
    geometry operators |0><u| + |u><0| and |0><0| + |u><u| commute; the
    smallest eigenvalue is a quadratic in the mixing weight and this is
    its positive root. Equals lambda_max at dim 2, strictly below it after.
    """
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    if dim == 2:
        return math.sqrt(2) / 2
    s = math.sqrt(dim)
    return ((s + 1) * (s - 2) + math.sqrt(dim * (dim - 1))) / ((dim - 2) * (s + 1))


def noisy_pair(E: Effect, F: Effect, t: float) -> tuple[Effect, Effect]:
    """(tE + (1-t)I, tF + (1-t)I): trivially coexistent for t <= 1/2."""
    if not 0 < t <= 0.5:
        raise ValueError(f"t={t} outside (0, 1/2]")
    Id = np.eye(E.dim)
    return Effect(t * E.matrix + (1 - t) * Id), Effect(t * F.matrix + (1 - t) * Id)


def mixed_commuting_pair(E: Effect, s: float, t: float) -> tuple[Effect, Effect]:
    """(sE + (1-s)E^perp, tE + (1-t)E^perp): always commuting.

    Requires E incomparable with I/2, otherwise the pair degenerates and
    the accompanying comparability claims lose their bite.
    """
    if not (0 < s < 1 and 0 < t < 1):
        raise ValueError("mixing weights must lie strictly inside (0, 1)")
    half = Effect(np.eye(E.dim) / 2)
    if eff.leq(E, half) or eff.leq(half, E):
        raise ValueError("effect must be incomparable with I/2")
    Ec = eff.complement(E)
    return (Effect(s * E.matrix + (1 - s) * Ec.matrix),
            Effect(t * E.matrix + (1 - t) * Ec.matrix))


def rank_one_pair(psi, phi, a: float, b: float) -> tuple[Effect, Effect]:
    """(a|psi><psi|, b|phi><phi|) for unit vectors and weights in (0, 1]."""
    psi = np.asarray(psi, dtype=np.complex128)
    phi = np.asarray(phi, dtype=np.complex128)
    for name, vec in (("psi", psi), ("phi", phi)):
        if abs(np.linalg.norm(vec) - 1) > 1e-12:
            raise ValueError(f"{name} is not a unit vector")
    if not (0 < a <= 1 and 0 < b <= 1):
        raise ValueError("weights must lie in (0, 1]")
    return (Effect(a * np.outer(psi, psi.conj())),
            Effect(b * np.outer(phi, phi.conj())))
