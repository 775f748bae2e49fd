"""Command-line front end.

Subcommands:
  check   five condition verdicts for two named effects from a JSON file
  qubit   the same for Bloch-parametrized qubit effects, plus the exact
          qubit criteria when they apply
  mub     the noisy basis/superposition family: single point or a scan
  multi   the n-effect Jordan check on named effects from a file
  survey  random-pair condition coverage, written to CSV

Exit codes: 0 coexistence established (a condition holds or the oracle
finds a witness), 1 usage/parse/validation error, 2 the oracle reports
likely non-coexistence, 3 unresolved.

Effect files are JSON documents: {"dim": d, "effects": [{"name": ...,
"re": [[...]], "im": [[...]]}]} with real and imaginary parts as d x d
arrays. Floats are written with 17 significant digits so a file round-
trips bit-for-bit.
"""

from __future__ import annotations

import argparse
import json
import math
import sys

import numpy as np

from . import conditions as cond
from . import effects as eff
from . import exemplars as ex
from . import oracle as orc
from . import survey as svy
from .effects import Effect

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_INFEASIBLE = 2
EXIT_UNRESOLVED = 3


class CliError(Exception):
    pass


def _fmt(x: float) -> str:
    return f"{x:.17g}"


# ---------------------------------------------------------------- effect files

def load_effect_file(path) -> dict[str, Effect]:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            doc = json.load(fh)
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc}") from exc
    except json.JSONDecodeError as exc:
        raise CliError(f"{path} is not valid JSON: {exc}") from exc
    if not isinstance(doc, dict) or "dim" not in doc or "effects" not in doc:
        raise CliError(f"{path}: expected an object with 'dim' and 'effects'")
    dim = doc["dim"]
    out: dict[str, Effect] = {}
    for entry in doc["effects"]:
        name = entry.get("name")
        if not isinstance(name, str) or not name:
            raise CliError(f"{path}: every effect needs a non-empty name")
        if name in out:
            raise CliError(f"{path}: duplicate effect name {name!r}")
        try:
            re = np.asarray(entry["re"], dtype=float)
            im = np.asarray(entry["im"], dtype=float)
        except (KeyError, TypeError, ValueError) as exc:
            raise CliError(f"{path}: effect {name!r}: bad 're'/'im' arrays ({exc})") from exc
        if re.shape != (dim, dim) or im.shape != (dim, dim):
            raise CliError(f"{path}: effect {name!r}: matrices must be {dim}x{dim}")
        try:
            out[name] = eff.validate_effect(re + 1j * im)
        except (ValueError, eff.SpectrumOutOfRange) as exc:
            raise CliError(f"{path}: effect {name!r} is not a valid effect: {exc}") from exc
    return out


def save_effect_file(path, named_effects: dict[str, Effect]) -> None:
    """Serializer with explicit 17-significant-digit decimals."""
    dims = {E.dim for E in named_effects.values()}
    if len(dims) != 1:
        raise CliError("all effects in one file must share the dimension")
    dim = dims.pop()

    def matrix_lines(M: np.ndarray, indent: str) -> str:
        rows = []
        for row in M:
            rows.append(indent + "[" + ", ".join(_fmt(float(x)) for x in row) + "]")
        return ",\n".join(rows)

    blocks = []
    for name, E in named_effects.items():
        blocks.append(
            '    {\n'
            f'      "name": {json.dumps(name)},\n'
            '      "re": [\n' + matrix_lines(E.matrix.real, "        ") + '\n      ],\n'
            '      "im": [\n' + matrix_lines(E.matrix.imag, "        ") + '\n      ]\n'
            '    }'
        )
    text = ('{\n'
            f'  "dim": {dim},\n'
            '  "effects": [\n' + ",\n".join(blocks) + '\n  ]\n'
            '}\n')
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


# ------------------------------------------------------------------- reporting

def _report_lines(report: cond.PairReport) -> list[str]:
    lines = []
    for name in cond.CONDITIONS:
        verdict = report.verdicts[name]
        parts = [f"{name:<5} {verdict.status}"]
        if verdict.branch:
            parts.append(f"branch {verdict.branch}")
        worst = min((v for _, v in verdict.witnesses), default=math.nan)
        parts.append(f"worst witness {_fmt(worst)}")
        lines.append("  ".join(parts))
    ok = all(report.implications.values())
    lines.append("implications " + ("consistent" if ok else "VIOLATED: " + ", ".join(
        k for k, v in report.implications.items() if not v)))
    if report.oracle is not None:
        o = report.oracle
        lines.append(f"oracle {o.kind}  residual {_fmt(o.residual)}  iterations {o.iterations}")
    return lines


def _report_json(report: cond.PairReport, extra: dict) -> dict:
    doc = {
        "tol": report.tol,
        "verdicts": {
            name: {
                "status": v.status,
                "branch": v.branch,
                "witnesses": [[label, value] for label, value in v.witnesses],
            }
            for name, v in report.verdicts.items()
        },
        "implications": report.implications,
        "oracle": None,
    }
    if report.oracle is not None:
        doc["oracle"] = {
            "kind": report.oracle.kind,
            "residual": report.oracle.residual,
            "iterations": report.oracle.iterations,
        }
    doc.update(extra)
    return doc


def _exit_code(report: cond.PairReport) -> int:
    if report.any_holds:
        return EXIT_OK
    if report.oracle is not None:
        if report.oracle.kind == orc.FEASIBLE:
            return EXIT_OK
        if report.oracle.kind == orc.LIKELY_INFEASIBLE:
            return EXIT_INFEASIBLE
    return EXIT_UNRESOLVED


def _emit(report: cond.PairReport, as_json: bool, extra: dict) -> int:
    if as_json:
        print(json.dumps(_report_json(report, extra), indent=2))
    else:
        for key, value in extra.items():
            print(f"{key}: {value}")
        for line in _report_lines(report):
            print(line)
    return _exit_code(report)


# ----------------------------------------------------------------- subcommands

def _cmd_check(args) -> int:
    table = load_effect_file(args.file)
    for name in (args.names[0], args.names[1]):
        if name not in table:
            raise CliError(f"{args.file}: no effect named {name!r}")
    E, F = table[args.names[0]], table[args.names[1]]
    report = cond.full_report(E, F, args.tol, run_oracle=args.oracle)
    return _emit(report, args.json, {"effects": f"{args.names[0]},{args.names[1]}"})


def _parse_vec3(text: str) -> tuple[float, float, float]:
    parts = text.split(",")
    if len(parts) != 3:
        raise CliError(f"expected three comma-separated numbers, got {text!r}")
    try:
        x, y, z = (float(p) for p in parts)
    except ValueError as exc:
        raise CliError(f"bad vector {text!r}: {exc}") from exc
    return x, y, z


def _cmd_qubit(args) -> int:
    e = np.array(_parse_vec3(args.e))
    f = np.array(_parse_vec3(args.f))
    try:
        E = ex.qubit_effect(args.alpha, e)
        F = ex.qubit_effect(args.beta, f)
    except ex.InvalidBloch as exc:
        raise CliError(f"INVALID_BLOCH: {exc}") from exc
    report = cond.full_report(E, F, args.tol, run_oracle=args.oracle)
    extra = {}
    ne, nf = float(np.linalg.norm(e)), float(np.linalg.norm(f))
    orthogonal = abs(float(e @ f)) <= 1e-12
    if args.alpha == 1 and args.beta == 1:
        ok, margin = ex.busch_criterion(e, f)
        extra["exact_criterion"] = f"busch {'coexistent' if ok else 'not-coexistent'} margin {_fmt(margin)}"
    elif orthogonal and (args.alpha == 1 or args.beta == 1):
        if args.alpha == 1:
            ok, margin = ex.liu_criterion(ne, nf, args.beta)
        else:
            ok, margin = ex.liu_criterion(nf, ne, args.alpha)
        extra["exact_criterion"] = f"liu {'coexistent' if ok else 'not-coexistent'} margin {_fmt(margin)}"
    return _emit(report, args.json, extra)


def _cmd_mub(args) -> int:
    if args.scan is not None:
        if args.scan < 2:
            raise CliError("--scan needs at least two steps")
        print("lambda," + ",".join(cond.CONDITIONS))
        for lam in np.linspace(0.0, 1.0, args.scan):
            E, F = ex.mub_pair(args.dim, float(lam))
            report = cond.full_report(E, F, args.tol)
            flags = ",".join("H" if report.verdicts[c].holds else "f"
                             for c in cond.CONDITIONS)
            print(f"{lam:.6f},{flags}")
        print(f"# lambda_jor({args.dim}) = {_fmt(ex.lambda_jor(args.dim))}")
        print(f"# lambda_max({args.dim}) = {_fmt(ex.lambda_max(args.dim))}")
        return EXIT_OK
    if args.lam is None:
        raise CliError("provide --lambda or --scan")
    E, F = ex.mub_pair(args.dim, args.lam)
    report = cond.full_report(E, F, args.tol, run_oracle=args.oracle)
    extra = {
        "lambda": _fmt(args.lam),
        "lambda_jor": _fmt(ex.lambda_jor(args.dim)),
        "lambda_max": _fmt(ex.lambda_max(args.dim)),
    }
    return _emit(report, args.json, extra)


def _cmd_multi(args) -> int:
    table = load_effect_file(args.file)
    missing = [n for n in args.names if n not in table]
    if missing:
        raise CliError(f"{args.file}: no effect named {missing[0]!r}")
    effects = [table[n] for n in args.names]
    try:
        verdict = cond.check_jor_multi(effects, args.tol)
    except cond.CombinatorialLimit as exc:
        raise CliError(str(exc)) from exc
    worst = min(verdict.witnesses, key=lambda kv: kv[1])
    if args.json:
        print(json.dumps({
            "status": verdict.status,
            "worst_pattern": worst[0],
            "worst_eigenvalue": worst[1],
            "patterns": [[label, value] for label, value in verdict.witnesses],
        }, indent=2))
    else:
        print(f"JOR[{len(effects)}] {verdict.status}  "
              f"worst pattern {worst[0]}  min eigenvalue {_fmt(worst[1])}")
    return EXIT_OK if verdict.holds else EXIT_UNRESOLVED


def _cmd_survey(args) -> int:
    rows, stats = svy.run_survey(args.dim, args.samples, args.seed,
                                 run_oracle=args.oracle, tol=args.tol)
    svy.emit_csv(rows, stats, args.out)
    print(f"wrote {args.out} ({len(rows)} pairs, dim {stats.dim}, seed {stats.seed})")
    for c in cond.CONDITIONS:
        print(f"{c:<5} {stats.counts[c]:>6}  fraction {stats.fractions[c]:.4f}")
    print(f"conjecture violations (INF holds, GINF fails): {stats.conjecture_violations}")
    if stats.oracle_ran:
        for key in sorted(stats.confusion):
            print(f"confusion {key} {stats.confusion[key]}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="coex",
        description="Decide and certify joint measurability of quantum effects.")
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, oracle=True):
        p.add_argument("--tol", type=float, default=cond.DEFAULT_TOL,
                       help="PSD slack for every condition (default 1e-9)")
        p.add_argument("--json", action="store_true",
                       help="emit one JSON document instead of text")
        if oracle:
            p.add_argument("--oracle", action="store_true",
                           help="also run the feasibility oracle")

    p = sub.add_parser("check", help="check two effects from a JSON effect file")
    p.add_argument("file")
    p.add_argument("names", nargs=2, metavar="NAME")
    add_common(p)
    p.set_defaults(fn=_cmd_check)

    p = sub.add_parser("qubit", help="check a Bloch-parametrized qubit pair")
    p.add_argument("--e", required=True, help="Bloch vector x,y,z of the first effect")
    p.add_argument("--alpha", type=float, default=1.0, help="bias of the first effect")
    p.add_argument("--f", required=True, help="Bloch vector x,y,z of the second effect")
    p.add_argument("--beta", type=float, default=1.0, help="bias of the second effect")
    add_common(p)
    p.set_defaults(fn=_cmd_qubit)

    p = sub.add_parser("mub", help="noisy basis/superposition pair in dimension d")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--lambda", dest="lam", type=float, default=None,
                   help="mixing weight in [0, 1]")
    p.add_argument("--scan", type=int, default=None,
                   help="tabulate verdicts at this many evenly spaced weights")
    add_common(p)
    p.set_defaults(fn=_cmd_mub)

    p = sub.add_parser("multi", help="n-effect Jordan check on named effects")
    p.add_argument("file")
    p.add_argument("names", nargs="+", metavar="NAME")
    add_common(p, oracle=False)
    p.set_defaults(fn=_cmd_multi)

    p = sub.add_parser("survey", help="random-pair condition coverage to CSV")
    p.add_argument("--dim", type=int, required=True)
    p.add_argument("--samples", type=int, required=True)
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out", required=True)
    p.add_argument("--tol", type=float, default=cond.DEFAULT_TOL)
    p.add_argument("--oracle", action="store_true")
    p.set_defaults(fn=_cmd_survey)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.fn(args)
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    except (ValueError, eff.SpectrumOutOfRange) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
