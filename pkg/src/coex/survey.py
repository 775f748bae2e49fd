"""Random-effect sampling and condition-coverage surveys.

Effects are drawn by rescaling a complex Wishart matrix to a uniform
top eigenvalue, which covers the whole effect body without touching
its boundary structure. Per-pair RNG streams are derived from
(seed, pair index) through a counter-based generator, so the survey is
deterministic and independent of processing order. Results go to CSV
with the statistics appended as '#'-prefixed comment lines.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import conditions as cond
from . import hermitian as hm
from . import oracle as orc
from .effects import Effect

_VERSION = "0.1.0"

CSV_COLUMNS = (
    "pair_id", "dim",
    "commu", "comp", "inf", "jor", "ginf",
    "oracle",
    "min_commu", "min_comp", "min_inf", "min_jor", "min_ginf",
)


@dataclass(frozen=True)
class SurveyRow:
    pair_id: int
    dim: int
    holds: dict[str, bool]          # per condition
    oracle_kind: str                # "" when the oracle did not run
    minima: dict[str, float]        # worst witness value per condition


@dataclass
class SurveyStats:
    dim: int
    n_pairs: int
    seed: int
    tol: float
    oracle_ran: bool
    counts: dict[str, int] = field(default_factory=dict)
    conjecture_violations: int = 0                  # INF holds but GINF fails
    lattice_violations: int = 0
    confusion: dict[str, int] = field(default_factory=dict)

    @property
    def fractions(self) -> dict[str, float]:
        return {c: self.counts.get(c, 0) / self.n_pairs for c in cond.CONDITIONS}


def sample_effect(dim: int, rng: np.random.Generator) -> Effect:
    """Wishart draw rescaled so the top eigenvalue is uniform on (0, 1]."""
    if dim < 2:
        raise ValueError("dimension must be at least 2")
    B = (rng.standard_normal((dim, dim)) + 1j * rng.standard_normal((dim, dim)))
    B /= math.sqrt(2)
    H = hm.hermitize(B @ B.conj().T)
    top = float(hm.eigvalsh(H)[-1])
    if top <= 0.0:
        return Effect(np.zeros((dim, dim), dtype=np.complex128))
    u = 1.0 - rng.uniform()         # uniform on (0, 1]
    return Effect((u / top) * H)


def pair_stream(seed: int, pair_id: int) -> np.random.Generator:
    """Counter-based stream for one pair, independent of execution order."""
    return np.random.Generator(np.random.Philox(np.random.SeedSequence([seed, pair_id])))


def _row_minimum(verdict: cond.ConditionVerdict) -> float:
    values = [v for _, v in verdict.witnesses]
    return min(values) if values else math.nan


def run_survey(dim: int, n_pairs: int, seed: int, run_oracle: bool = False,
               tol: float = cond.DEFAULT_TOL,
               oracle_params: orc.OracleParams | None = None,
               ) -> tuple[list[SurveyRow], SurveyStats]:
    if n_pairs < 1:
        raise ValueError("need at least one pair")
    rows = []
    stats = SurveyStats(dim=dim, n_pairs=n_pairs, seed=seed, tol=tol,
                        oracle_ran=run_oracle)
    stats.counts = {c: 0 for c in cond.CONDITIONS}
    for pair_id in range(n_pairs):
        rng = pair_stream(seed, pair_id)
        E = sample_effect(dim, rng)
        F = sample_effect(dim, rng)
        report = cond.full_report(E, F, tol, run_oracle=run_oracle,
                                  oracle_params=oracle_params)
        holds = {c: report.verdicts[c].holds for c in cond.CONDITIONS}
        minima = {c: _row_minimum(report.verdicts[c]) for c in cond.CONDITIONS}
        oracle_kind = report.oracle.kind if report.oracle is not None else ""
        rows.append(SurveyRow(pair_id, dim, holds, oracle_kind, minima))
        for c in cond.CONDITIONS:
            if holds[c]:
                stats.counts[c] += 1
        if holds[cond.INF] and not holds[cond.GINF]:
            stats.conjecture_violations += 1
        if not all(report.implications.values()):
            stats.lattice_violations += 1
        if run_oracle:
            for c in cond.CONDITIONS:
                key = f"{c}:{'HOLDS' if holds[c] else 'FAILS'}:{oracle_kind}"
                stats.confusion[key] = stats.confusion.get(key, 0) + 1
    return rows, stats


def _fmt(x: float) -> str:
    return f"{x:.17g}"


def emit_csv(rows: list[SurveyRow], stats: SurveyStats, path) -> None:
    """Header, one line per pair, then stats as '#' comment lines."""
    lines = [",".join(CSV_COLUMNS)]
    for row in rows:
        cells = [str(row.pair_id), str(row.dim)]
        cells += ["1" if row.holds[c] else "0" for c in cond.CONDITIONS]
        cells.append(row.oracle_kind)
        cells += [_fmt(row.minima[c]) for c in cond.CONDITIONS]
        lines.append(",".join(cells))
    lines.append(f"# version {_VERSION}")
    lines.append(f"# dim {stats.dim}")
    lines.append(f"# seed {stats.seed}")
    lines.append(f"# n_pairs {stats.n_pairs}")
    lines.append(f"# tol {_fmt(stats.tol)}")
    lines.append(f"# oracle {'on' if stats.oracle_ran else 'off'}")
    for c in cond.CONDITIONS:
        lines.append(f"# count {c} {stats.counts.get(c, 0)} "
                     f"fraction {_fmt(stats.fractions[c])}")
    lines.append(f"# conjecture_violations {stats.conjecture_violations}")
    lines.append(f"# lattice_violations {stats.lattice_violations}")
    for key in sorted(stats.confusion):
        lines.append(f"# confusion {key} {stats.confusion[key]}")
    try:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write("\n".join(lines) + "\n")
    except OSError as exc:
        raise OSError(f"cannot write survey CSV to {path}: {exc}") from exc
