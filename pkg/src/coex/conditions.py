"""Sufficient-condition checkers for pair (and n-tuple) coexistence.

Five checkers share a common shape: decide HOLDS/FAILS at a tolerance,
record the eigenvalue witnesses of every inequality tested, and on
success emit a coexistence witness that an independent verifier can
recheck. The implication lattice COMMU => JOR => GINF and
COMP => GINF, COMP => INF is exercised by the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from itertools import permutations, product

import numpy as np

from . import effects as eff
from . import hermitian as hm
from .effects import Effect

COMMU = "COMMU"
COMP = "COMP"
INF = "INF"
JOR = "JOR"
GINF = "GINF"
CONDITIONS = (COMMU, COMP, INF, JOR, GINF)

FOUR_TERM = "FOUR_TERM"
SINGLE_G = "SINGLE_G"

DEFAULT_TOL = 1e-9
MAX_EFFECTS = 8

IMPLICATIONS = ((COMMU, JOR), (JOR, GINF), (COMP, GINF), (COMP, INF))


class CombinatorialLimit(ValueError):
    """Too many effects for the factorial symmetrization."""


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    holds: bool
    # one (label, min-eigenvalue or norm) entry per inequality tested
    witnesses: list[tuple[str, float]]
    branch: str | None = None

    @property
    def status(self) -> str:
        return "HOLDS" if self.holds else "FAILS"


@dataclass(frozen=True)
class CoexWitness:
    """Either four margin effects (FOUR_TERM) or a single lower bound G."""

    form: str
    matrices: dict[str, np.ndarray]


@dataclass(frozen=True)
class PairReport:
    tol: float
    verdicts: dict[str, ConditionVerdict]
    witnesses: dict[str, CoexWitness | None]
    implications: dict[str, bool]
    oracle: object | None = None

    @property
    def any_holds(self) -> bool:
        return any(v.holds for v in self.verdicts.values())


def check_commu(E: Effect, F: Effect,
                tol: float = DEFAULT_TOL) -> tuple[ConditionVerdict, CoexWitness | None]:
    """Commutation test; the witness splits EF across the four outcomes."""
    norm = hm.commutator_norm(E.matrix, F.matrix)
    holds = norm <= tol
    verdict = ConditionVerdict(COMMU, holds, [("commutator_norm", norm)])
    if not holds:
        return verdict, None
    Ec, Fc = eff.complement(E), eff.complement(F)
    witness = CoexWitness(FOUR_TERM, {
        "G11": hm.hermitian_part(E.matrix @ F.matrix),
        "G12": hm.hermitian_part(E.matrix @ Fc.matrix),
        "G21": hm.hermitian_part(Ec.matrix @ F.matrix),
        "G22": hm.hermitian_part(Ec.matrix @ Fc.matrix),
    })
    return verdict, witness


def check_comp(E: Effect, F: Effect,
               tol: float = DEFAULT_TOL) -> tuple[ConditionVerdict, CoexWitness | None]:
    """Comparability (trivial coexistence) across the complement equivalence."""
    Id = np.eye(E.dim)
    Fc = eff.complement(F)
    # branch label, difference that must be PSD, witness G for the original pair
    branches = [
        ("E<=F", F.matrix - E.matrix, E.matrix),
        ("F<=E", E.matrix - F.matrix, F.matrix),
        ("E<=Fc", Fc.matrix - E.matrix, np.zeros_like(Id)),
        ("Fc<=E", E.matrix - Fc.matrix, E.matrix + F.matrix - Id),
    ]
    witnesses = []
    hit = None
    for label, diff, g in branches:
        ok, w_min = hm.is_psd(diff, tol)
        witnesses.append((label, w_min))
        if ok and hit is None:
            hit = (label, g)
    if hit is None:
        return ConditionVerdict(COMP, False, witnesses), None
    label, g = hit
    verdict = ConditionVerdict(COMP, True, witnesses, branch=label)
    return verdict, CoexWitness(SINGLE_G, {"G": hm.hermitize(g)})


def check_jor(E: Effect, F: Effect,
              tol: float = DEFAULT_TOL) -> tuple[ConditionVerdict, CoexWitness | None]:
    """All four Jordan products of E/E^perp with F/F^perp must be PSD."""
    Ec, Fc = eff.complement(E), eff.complement(F)
    terms = {
        "G11": eff.jordan_product(E, F),
        "G12": eff.jordan_product(E, Fc),
        "G21": eff.jordan_product(Ec, F),
        "G22": eff.jordan_product(Ec, Fc),
    }
    labels = {"G11": "E.F", "G12": "E.Fc", "G21": "Ec.F", "G22": "Ec.Fc"}
    witnesses = []
    holds = True
    for key, term in terms.items():
        ok, w_min = hm.is_psd(term, tol)
        witnesses.append((labels[key], w_min))
        holds = holds and ok
    verdict = ConditionVerdict(JOR, holds, witnesses)
    if not holds:
        return verdict, None
    return verdict, CoexWitness(FOUR_TERM, terms)


def check_ginf(E: Effect, F: Effect,
               tol: float = DEFAULT_TOL) -> tuple[ConditionVerdict, CoexWitness | None]:
    """Generalized-infimum condition.

    HOLDS iff (E⊓F >= 0 and E^perp⊓F^perp >= 0) or
    (E^perp⊓F >= 0 and E⊓F^perp >= 0). The first disjunct certifies
    G = E⊓F directly; the second certifies the pair (E^perp, F) with
    G' = E^perp⊓F, which maps to G = F - G' for (E, F).
    """
    Ec, Fc = eff.complement(E), eff.complement(F)
    g_ef = eff.generalized_infimum(E, F)
    g_cc = eff.generalized_infimum(Ec, Fc)
    g_cf = eff.generalized_infimum(Ec, F)
    g_fc = eff.generalized_infimum(E, Fc)
    oks = {}
    witnesses = []
    for label, g in (("E,F", g_ef), ("Ec,Fc", g_cc), ("Ec,F", g_cf), ("E,Fc", g_fc)):
        ok, w_min = hm.is_psd(g, tol)
        oks[label] = ok
        witnesses.append((label, w_min))
    if oks["E,F"] and oks["Ec,Fc"]:
        verdict = ConditionVerdict(GINF, True, witnesses, branch="E,F")
        return verdict, CoexWitness(SINGLE_G, {"G": g_ef})
    if oks["Ec,F"] and oks["E,Fc"]:
        verdict = ConditionVerdict(GINF, True, witnesses, branch="Ec,F")
        return verdict, CoexWitness(SINGLE_G, {"G": hm.hermitize(F.matrix - g_cf)})
    return ConditionVerdict(GINF, False, witnesses), None


def check_inf(E: Effect, F: Effect, tol: float = DEFAULT_TOL,
              rank_tol: float = eff.RANK_TOL) -> tuple[ConditionVerdict, CoexWitness | None]:
    """Infimum condition over the four complement combinations.

    A branch succeeds when the infimum of the (possibly complemented)
    pair exists and dominates sum - I. The branch diagnostics separate
    "infimum absent" from "inequality violated".
    """
    Id = np.eye(E.dim)
    Ec, Fc = eff.complement(E), eff.complement(F)
    branches = [("E,F", E, F), ("E,Fc", E, Fc), ("Ec,F", Ec, F), ("Ec,Fc", Ec, Fc)]
    witnesses = []
    hit = None
    for label, A, B in branches:
        res = eff.infimum(A, B, tol, rank_tol)
        witnesses.append((f"{label} infimum exists", 1.0 if res.exists else 0.0))
        if not res.exists:
            continue
        slack = res.value.matrix - (A.matrix + B.matrix - Id)
        ok, w_min = hm.is_psd(slack, tol)
        witnesses.append((f"{label} slack", w_min))
        if ok and hit is None:
            hit = (label, res.value.matrix, A, B)
    if hit is None:
        return ConditionVerdict(INF, False, witnesses), None
    label, H, A, B = hit
    # map the branch witness back to a lower bound for the original (E, F)
    if label == "E,F":
        g = H
    elif label == "E,Fc":
        g = E.matrix - H
    elif label == "Ec,F":
        g = F.matrix - H
    else:
        g = E.matrix + F.matrix - Id + H
    verdict = ConditionVerdict(INF, True, witnesses, branch=label)
    return verdict, CoexWitness(SINGLE_G, {"G": hm.hermitize(g)})


def jordan_general(effects: list[Effect], pattern: list[int]) -> np.ndarray:
    """Symmetrized product over all orderings of E_k or its complement.

    ``pattern[k] == 1`` selects effect k itself, ``2`` its complement;
    the result is the average of the n! ordered products.
    """
    n = len(effects)
    if not 1 <= n <= MAX_EFFECTS:
        raise CombinatorialLimit(
            f"COMBINATORIAL_LIMIT: {n} effects (supported: 1..{MAX_EFFECTS})")
    if len(pattern) != n or any(i not in (1, 2) for i in pattern):
        raise ValueError("pattern must give one index in {1, 2} per effect")
    dim = effects[0].dim
    chosen = []
    for k, e in enumerate(effects):
        if e.dim != dim:
            raise hm.DimensionMismatch("effects must share one dimension")
        chosen.append(e.matrix if pattern[k] == 1 else eff.complement(e).matrix)
    acc = np.zeros((dim, dim), dtype=np.complex128)
    for perm in permutations(range(n)):
        M = chosen[perm[0]]
        for k in perm[1:]:
            M = M @ chosen[k]
        acc += M
    return hm.hermitize(acc / math.factorial(n))


def check_jor_multi(effects: list[Effect],
                    tol: float = DEFAULT_TOL) -> ConditionVerdict:
    """Jordan condition for n effects: all 2^n symmetrized terms PSD."""
    witnesses = []
    worst = (None, math.inf)
    holds = True
    for pattern in product((1, 2), repeat=len(effects)):
        term = jordan_general(effects, list(pattern))
        ok, w_min = hm.is_psd(term, tol)
        label = "".join(str(i) for i in pattern)
        witnesses.append((label, w_min))
        if w_min < worst[1]:
            worst = (label, w_min)
        holds = holds and ok
    return ConditionVerdict(JOR, holds, witnesses, branch=worst[0])


def witness_violations(E: Effect, F: Effect, witness: CoexWitness,
                       tol: float = DEFAULT_TOL) -> list[tuple[str, float]]:
    """Every constraint the witness fails, as (label, offending value)."""
    Id = np.eye(E.dim)
    out = []
    scale = max(1.0, hm.frobenius(E.matrix), hm.frobenius(F.matrix))
    if witness.form == FOUR_TERM:
        g = witness.matrices
        for label, resid in (
            ("G11+G12=E", g["G11"] + g["G12"] - E.matrix),
            ("G11+G21=F", g["G11"] + g["G21"] - F.matrix),
            ("sum=I", g["G11"] + g["G12"] + g["G21"] + g["G22"] - Id),
        ):
            r = hm.frobenius(resid)
            if r > tol * scale:
                out.append((label, r))
        for key in ("G11", "G12", "G21", "G22"):
            ok, w_min = hm.is_psd(g[key], tol)
            if not ok:
                out.append((f"{key}>=0", w_min))
    elif witness.form == SINGLE_G:
        G = witness.matrices["G"]
        for label, slack in (
            ("G>=0", G),
            ("G<=E", E.matrix - G),
            ("G<=F", F.matrix - G),
            ("G+I>=E+F", G + Id - E.matrix - F.matrix),
        ):
            ok, w_min = hm.is_psd(slack, tol)
            if not ok:
                out.append((label, w_min))
    else:
        raise ValueError(f"unknown witness form {witness.form!r}")
    return out


def verify_witness(E: Effect, F: Effect, witness: CoexWitness,
                   tol: float = DEFAULT_TOL) -> bool:
    return not witness_violations(E, F, witness, tol)


def full_report(E: Effect, F: Effect, tol: float = DEFAULT_TOL,
                run_oracle: bool = False, oracle_params=None) -> PairReport:
    """All five verdicts plus implication consistency; oracle on request."""
    checks = {
        COMMU: check_commu,
        COMP: check_comp,
        INF: check_inf,
        JOR: check_jor,
        GINF: check_ginf,
    }
    verdicts: dict[str, ConditionVerdict] = {}
    witnesses: dict[str, CoexWitness | None] = {}
    for name, fn in checks.items():
        verdict, witness = fn(E, F, tol)
        verdicts[name] = verdict
        witnesses[name] = witness
    implications = {
        f"{a}=>{b}": (not verdicts[a].holds) or verdicts[b].holds
        for a, b in IMPLICATIONS
    }
    oracle_outcome = None
    if run_oracle:
        from . import oracle as oracle_mod
        oracle_outcome = oracle_mod.decide_pair(E, F, oracle_params)
    return PairReport(tol=tol, verdicts=verdicts, witnesses=witnesses,
                      implications=implications, oracle=oracle_outcome)
