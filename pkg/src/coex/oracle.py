"""Ground-truth pair coexistence via convex feasibility.

A pair (E, F) is coexistent iff some G satisfies 0 <= G, G <= E,
G <= F and G >= E + F - I. Each constraint set is a shifted PSD cone
with a cheap Frobenius-nearest projection, so Dykstra's alternating
projections (with correction terms) converge to a point of the
intersection whenever one exists. Alternating projections cannot
certify infeasibility, hence the ternary outcome: residuals at or
beyond ``infeas_tol`` after every restart are reported as
LIKELY_INFEASIBLE, residuals within ``feas_tol`` as FEASIBLE with the
witness attached, anything in between as UNDETERMINED.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import effects as eff
from . import hermitian as hm
from .effects import Effect

FEASIBLE = "FEASIBLE"
LIKELY_INFEASIBLE = "LIKELY_INFEASIBLE"
UNDETERMINED = "UNDETERMINED"

LOWER = "LOWER"
UPPER = "UPPER"


@dataclass(frozen=True)
class OracleParams:
    max_iters: int = 5000
    feas_tol: float = 1e-7
    infeas_tol: float = 1e-4
    restarts: int = 3
    # cycles without residual improvement before a run is declared stalled;
    # the residual is monotone, so a stalled run ends where max_iters would
    stall_window: int = 64

    def __post_init__(self):
        if not self.feas_tol < self.infeas_tol:
            raise ValueError("feas_tol must be smaller than infeas_tol")
        if self.max_iters < 1 or self.restarts < 1:
            raise ValueError("max_iters and restarts must be positive")


@dataclass(frozen=True)
class OracleOutcome:
    kind: str
    witness_G: np.ndarray | None
    residual: float                 # best violation reached by the chosen run
    iterations: int
    # raw per-cycle violation stayed non-increasing past the second cycle;
    # on infeasible instances the iterates settle into a limit cycle and the
    # raw sequence may oscillate there, so this is diagnostic, not a gate
    residual_monotone: bool = True


def project_shifted_cone(X: np.ndarray, bound: np.ndarray, side: str) -> np.ndarray:
    """Frobenius-nearest Y with Y >= bound (LOWER) or Y <= bound (UPPER)."""
    hm._check_same_dim(np.asarray(X), np.asarray(bound))
    if side == LOWER:
        return hm.hermitize(bound + hm.psd_clip(X - bound))
    if side == UPPER:
        return hm.hermitize(bound - hm.psd_clip(bound - X))
    raise ValueError(f"side must be LOWER or UPPER, got {side!r}")


def violation(E: Effect, F: Effect, G: np.ndarray) -> float:
    """Worst constraint violation of G, floored at zero."""
    hm._check_same_dim(E.matrix, F.matrix)
    Id = np.eye(E.dim)
    worst = min(
        hm.min_eigenvalue(hm.hermitize(G)),
        hm.min_eigenvalue(hm.hermitize(E.matrix - G)),
        hm.min_eigenvalue(hm.hermitize(F.matrix - G)),
        hm.min_eigenvalue(hm.hermitize(G + Id - E.matrix - F.matrix)),
    )
    return max(0.0, -worst)


def _start_points(E: Effect, F: Effect) -> list[np.ndarray]:
    Id = np.eye(E.dim)
    return [
        np.zeros((E.dim, E.dim), dtype=np.complex128),
        hm.psd_clip(eff.generalized_infimum(E, F)),
        hm.psd_clip(hm.hermitize((E.matrix + F.matrix - Id) / 2)),
    ]


def _dykstra_run(E: Effect, F: Effect, start: np.ndarray,
                 params: OracleParams) -> tuple[np.ndarray, float, int, bool]:
    """One Dykstra run; returns (best G, best residual, cycles, monotone)."""
    d = E.dim
    Id = np.eye(d)
    constraints = (
        (np.zeros((d, d), dtype=np.complex128), LOWER),
        (E.matrix, UPPER),
        (F.matrix, UPPER),
        (E.matrix + F.matrix - Id, LOWER),
    )
    X = start.copy()
    corrections = [np.zeros((d, d), dtype=np.complex128) for _ in constraints]
    best = violation(E, F, X)
    best_G = X.copy()
    if best <= params.feas_tol:
        return best_G, best, 0, True
    monotone = True
    prev = math.inf
    since_improvement = 0
    cycles = 0
    for cycles in range(1, params.max_iters + 1):
        for k, (bound, side) in enumerate(constraints):
            shifted = X + corrections[k]
            Y = project_shifted_cone(shifted, bound, side)
            corrections[k] = shifted - Y
            X = Y
        v = violation(E, F, X)
        # the transition out of the first cycle may overshoot (corrections
        # start at zero); from the second cycle on the residual must not grow
        if cycles > 2 and v > prev + 1e-12:
            monotone = False
        prev = v
        if v < best - max(1e-14, 1e-9 * best):
            best = v
            best_G = X.copy()
            since_improvement = 0
        else:
            since_improvement += 1
        if best <= params.feas_tol:
            return X, v, cycles, monotone
        if since_improvement >= params.stall_window:
            break
    return best_G, best, cycles, monotone


def decide_pair(E: Effect, F: Effect, params: OracleParams | None = None) -> OracleOutcome:
    """Ternary coexistence decision for one pair of effects.

    Restarts run in a fixed order from the closed-form candidates (zero,
    the clipped generalized infimum, the clipped midpoint); the first
    restart reaching feasibility wins, otherwise the lowest-residual run
    is reported (ties broken by restart index). ``params.restarts`` caps
    how many of the three candidates are used.
    """
    if params is None:
        params = OracleParams()
    hm._check_same_dim(E.matrix, F.matrix)
    starts = _start_points(E, F)[: params.restarts]
    best: tuple[float, int, np.ndarray, int, bool] | None = None
    for idx, start in enumerate(starts):
        G, residual, cycles, monotone = _dykstra_run(E, F, start, params)
        if best is None or residual < best[0]:
            best = (residual, idx, G, cycles, monotone)
        if residual <= params.feas_tol:
            break
    assert best is not None
    residual, _, G, cycles, monotone = best
    if residual <= params.feas_tol:
        return OracleOutcome(FEASIBLE, hm.hermitize(G), residual, cycles, monotone)
    if residual >= params.infeas_tol:
        return OracleOutcome(LIKELY_INFEASIBLE, None, residual, cycles, monotone)
    return OracleOutcome(UNDETERMINED, None, residual, cycles, monotone)
