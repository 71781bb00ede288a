"""
Command-line front end.

Usage::

    bellkit demo
    bellkit check STATE POVM [POVM ...] --inequality NAME [--gamma G ...]
    bellkit sweep CONFIG
    bellkit classical [MODEL] [--random SEED N]
    bellkit conditions REPRESENTATION POVM_B1 POVM_B2
    bellkit schema [KIND]

Exit codes: 0 computed and the inequality holds, 2 computed and violated,
1 input or configuration error.

Documents are JSON with ``"schema": "bellkit/1"``; ``bellkit schema`` prints
the JSON Schema of each kind (density, representation, povm, lhv-model,
sweep, report). CSV output has a header row, LF line endings, and columns

* check: ``name,lhs,rhs,slack,violated``
* sweep: ``theta_1..theta_k`` (or ``draw``), ``name,lhs,rhs,slack,violated``
* classical: ``model,name,lhs,rhs,slack,violated``
"""

from __future__ import annotations

import argparse
import csv
import io
import json
import sys
from typing import Sequence

import numpy as np

from . import serialization as ser
from .classical import (
    LhvModel,
    classical_bell_report,
    classical_extended_chsh,
    random_model,
    random_valid_gamma,
)
from .errors import BellkitError, InvalidConfig
from .expectations import correlation
from .inequalities import (
    CHSH_GAMMA,
    DEFAULT_TOL,
    GammaVector,
    bell_restriction,
    condition_sor,
    condition_vbi,
    InequalityReport,
    bell_original,
    chsh_report,
    extended_chsh,
    quantum_bell_analogue,
    separable_bound,
    separable_bound_inf,
    two_term_linear_bound,
)
from .measurements import spin_observable
from .states import SeparableRepresentation, assemble, rho_zero, rho_zero_representation
from .sweep import SweepConfig, SweepResult, SweepTarget, run_sweep

EXIT_HOLDS, EXIT_ERROR, EXIT_VIOLATED = 0, 1, 2

INEQUALITIES = {
    # name: (number of POVMs, needs a representation)
    "bell-original": (3, False),
    "chsh": (4, False),
    "extended-chsh": (4, False),
    "separable-bound": (3, True),
    "separable-bound-inf": (3, True),
    "two-term": (3, True),
    "quantum-analogue": (3, True),
}


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _csv(header: Sequence[str], rows: Sequence[Sequence]) -> str:
    buf = io.StringIO()
    w = csv.writer(buf, lineterminator="\n")
    w.writerow(header)
    for row in rows:
        w.writerow([ser.fixed(v) if isinstance(v, float) else v for v in row])
    return buf.getvalue()


def _report_row(r: InequalityReport) -> list:
    return [r.name, r.lhs, r.rhs, r.slack, str(r.violated).lower()]


# ---------------------------------------------------------------- demo


def demo_lines(tol: float = 1e-9) -> tuple[list[str], list[str]]:
    """Text of the worked separable-state example and the list of mismatches."""
    rho = rho_zero()
    thetas = (0.0, np.pi / 6, np.pi / 3)
    a, b, c = (spin_observable(t, name) for t, name in zip(thetas, "abc"))
    cos = [np.cos(2 * t) for t in thetas]
    lines = [
        "bellkit demo: separable two-qubit state rho0 = (|ud><ud| + |du><du|)/2",
        "spin settings theta = (0, pi/6, pi/3)",
    ]
    failures = []
    records = {}
    for (i, j), (p, q) in zip(((0, 1), (0, 2), (1, 2)), ((a, b), (a, c), (b, c))):
        closed = -cos[i] * cos[j]
        rec = correlation(rho, p, q)
        records[p.label + q.label] = rec
        lines.append(f"  E({p.label},{q.label}) closed={ser.fixed(closed)} trace={ser.fixed(rec.value)}")
        if abs(closed - rec.value) > tol:
            failures.append(f"E({p.label},{q.label}) trace disagrees with closed form")

    bell = bell_original(records["ab"], records["ac"], records["bc"], tol=tol)
    lines.append(_line("bell_original", bell))
    if not (abs(bell.lhs - 1) <= tol and abs(bell.rhs - 0.75) <= tol and bell.violated):
        failures.append("bell_original: expected lhs=1, rhs=0.75, violated")

    d = spin_observable(np.pi / 2, "d")
    e = [correlation(rho, x, y) for x, y in ((a, b), (c, b), (c, d), (a, d))]
    chsh = chsh_report(*e, tol=tol)
    lines.append("spin settings theta = (0, pi/6, pi/3, pi/2)")
    lines.append(_line("chsh", chsh))
    if chsh.violated:
        failures.append("chsh: expected to hold")

    analogue = quantum_bell_analogue(rho_zero_representation(symmetrized=True), a, b, c, tol=tol)
    lines.append("symmetric representation {|u><u| (x) |d><d|}_sym, settings (0, pi/6, pi/3)")
    lines.append(_line("quantum_analogue", analogue))
    if analogue.violated or abs(analogue.rhs - 1.25) > tol or abs(analogue.lhs - 1) > tol:
        failures.append("quantum_analogue: expected lhs=1, rhs=1.25, holds")
    lines.append("demo: all values match" if not failures else "demo: MISMATCH")
    return lines, failures


def _line(name: str, r: InequalityReport) -> str:
    verdict = "VIOLATED" if r.violated else "holds"
    return f"{name}: lhs={ser.fixed(r.lhs)} rhs={ser.fixed(r.rhs)} {verdict}"


def cmd_demo(args) -> int:
    lines, failures = demo_lines(args.tol)
    _emit("\n".join(lines) + "\n", args.out)
    for f in failures:
        print(f"error: {f}", file=sys.stderr)
    return EXIT_ERROR if failures else EXIT_HOLDS


# ---------------------------------------------------------------- check


def run_check(state_doc, povm_docs, inequality: str, gamma=None, tol=DEFAULT_TOL, extra_reps=(), symmetrized=False) -> InequalityReport:
    if inequality not in INEQUALITIES:
        raise InvalidConfig(f"unknown inequality {inequality!r}; choose from {sorted(INEQUALITIES)}")
    n_povms, needs_rep = INEQUALITIES[inequality]
    if len(povm_docs) != n_povms:
        raise InvalidConfig(f"{inequality} needs {n_povms} POVM files, got {len(povm_docs)}")
    state = ser.state_from_json(state_doc)
    povms = [ser.povm_from_json(d) for d in povm_docs]
    if needs_rep and not isinstance(state, SeparableRepresentation):
        raise InvalidConfig(f"{inequality} needs a representation document as state")

    if inequality in ("bell-original", "chsh", "extended-chsh"):
        rho = assemble(state) if isinstance(state, SeparableRepresentation) else state
        sym = symmetrized or (isinstance(state, SeparableRepresentation) and state.symmetrized)
        if inequality == "bell-original":
            a, b, c = povms
            e = [correlation(rho, x, y, sym) for x, y in ((a, b), (a, c), (b, c))]
            return bell_original(*e, c1=a.bound, c2=max(b.bound, c.bound), tol=tol)
        a, b, c, d = povms
        e = [correlation(rho, x, y, sym) for x, y in ((a, b), (c, b), (c, d), (a, d))]
        c1, c2 = max(a.bound, c.bound), max(b.bound, d.bound)
        if inequality == "chsh":
            return chsh_report(*e, c1=c1, c2=c2, tol=tol)
        return extended_chsh(GammaVector(tuple(gamma)) if gamma else CHSH_GAMMA, *e, c1=c1, c2=c2, tol=tol)

    pa, pb1, pb2 = povms
    if inequality == "separable-bound":
        return separable_bound(state, pa, pb1, pb2, tol)
    if inequality == "separable-bound-inf":
        return separable_bound_inf([state, *extra_reps], pa, pb1, pb2, tol)
    if inequality == "two-term":
        if not gamma or len(gamma) != 2:
            raise InvalidConfig("two-term needs --gamma G1 G2")
        return two_term_linear_bound(gamma[0], gamma[1], state, pa, pb1, pb2, tol)
    return quantum_bell_analogue(state, pa, pb1, pb2, tol)


def cmd_check(args) -> int:
    extra = [ser.representation_from_json(ser.load_json(p)) for p in args.also]
    report = run_check(
        ser.load_json(args.state),
        [ser.load_json(p) for p in args.povms],
        args.inequality,
        args.gamma,
        args.tol,
        extra,
        args.symmetrized,
    )
    if args.format == "csv":
        text = _csv(["name", "lhs", "rhs", "slack", "violated"], [_report_row(report)])
    else:
        text = ser.dumps({"schema": ser.SCHEMA_TAG, "kind": "report", **report.to_dict()})
    _emit(text, args.out)
    return EXIT_VIOLATED if report.violated else EXIT_HOLDS


# ---------------------------------------------------------------- sweep


def sweep_config_from_json(doc: dict, base_dir=None, seed=None, threads=1, tol=DEFAULT_TOL) -> SweepConfig:
    ser.validate(doc, "sweep")
    state = doc.get("state")
    if isinstance(state, str):
        import pathlib

        path = pathlib.Path(state)
        if base_dir is not None and not path.is_absolute():
            path = pathlib.Path(base_dir) / path
        state = ser.load_json(path)
    if state == "rho0" or state is None and doc["target"] in ("bell-original", "chsh", "extended-chsh"):
        state_obj = rho_zero()
    elif state == "rho0-sym" or state is None and doc["target"] == "quantum-analogue":
        state_obj = rho_zero_representation(symmetrized=True)
    elif state is None:
        state_obj = None
    else:
        state_obj = ser.state_from_json(state)
    gamma = GammaVector(tuple(doc["gamma"])) if "gamma" in doc else None
    return SweepConfig(
        target=SweepTarget(doc["target"]),
        state=state_obj,
        resolution=doc.get("resolution", 64),
        seed=doc.get("seed", 0) if seed is None else seed,
        sample_count=doc.get("sample_count", 1000),
        gamma=gamma,
        symmetrized=doc.get("symmetrized", False),
        retain=doc.get("retain", 10),
        threads=threads,
        tol=tol,
    )


def sweep_summary(cfg: SweepConfig, res: SweepResult) -> str:
    r = res.best_report
    if cfg.target is SweepTarget.SOUNDNESS:
        verdict = "PASS" if r.slack >= -cfg.tol else "FAIL"
        return (
            f"soundness: {res.evaluations} reports over {cfg.sample_count} draws, "
            f"min slack={ser.fixed(r.slack)} ({r.name}, draw {res.best_settings[0]}), "
            f"min slack >= -{cfg.tol:g}: {verdict}"
        )
    settings = ", ".join(ser.fixed(t) for t in res.best_settings)
    return (
        f"{cfg.target.value}: best settings ({settings}) lhs={ser.fixed(r.lhs)} "
        f"rhs={ser.fixed(r.rhs)} margin={ser.fixed(-r.slack)} over {res.evaluations} evaluations"
    )


def cmd_sweep(args) -> int:
    import pathlib

    cfg = sweep_config_from_json(
        ser.load_json(args.config), pathlib.Path(args.config).parent, args.seed, args.threads, args.tol
    )
    res = run_sweep(cfg)
    if args.format == "csv":
        if cfg.target is SweepTarget.SOUNDNESS:
            header = ["draw"]
        else:
            header = [f"theta_{i + 1}" for i in range(len(res.best_settings))]
        header += ["name", "lhs", "rhs", "slack", "violated"]
        rows = [
            [*row.settings, row.name, row.lhs, row.rhs, row.slack, str(row.violated(cfg.tol)).lower()]
            for row in res.rows
        ]
        text = _csv(header, rows)
    else:
        text = ser.dumps(
            {
                "schema": ser.SCHEMA_TAG,
                "kind": "sweep-result",
                "target": cfg.target.value,
                "extremum": res.extremum_kind.value,
                "evaluations": res.evaluations,
                "best_settings": list(res.best_settings),
                "best_report": res.best_report.to_dict(),
                "rows": [
                    {"settings": list(r.settings), "name": r.name, "lhs": r.lhs, "rhs": r.rhs, "slack": r.slack}
                    for r in res.rows
                ],
            }
        )
    _emit(text, args.out)
    print(sweep_summary(cfg, res), file=sys.stderr)
    return EXIT_VIOLATED if res.best_report.violated else EXIT_HOLDS


# ---------------------------------------------------------------- classical


def _pad(labels: list[str], n: int) -> list[str]:
    return (labels + [labels[-1]] * n)[:n]


def classical_reports(m: LhvModel, bell=None, chsh=None, gamma=None, tol=DEFAULT_TOL) -> list[InequalityReport]:
    names = list(m.observables)
    bell = bell or _pad(names, 3)
    chsh = chsh or _pad(names, 4)
    return [
        classical_bell_report(m, *bell, tol=tol),
        classical_extended_chsh(m, gamma or CHSH_GAMMA, *chsh, tol=tol),
    ]


def random_classical_batch(seed: int, n: int, tol=DEFAULT_TOL) -> list[tuple[int, InequalityReport]]:
    out = []
    for i in range(n):
        rng = np.random.default_rng([seed, i, 0])
        size = int(rng.integers(1, 9))
        c1, c2 = (float(x) for x in rng.uniform(0.5, 2.0, 2))
        bounds = {"A": c1, "C": c1, "B": c2, "D": c2}
        m = random_model([seed, i, 1], size, bounds)
        gamma = random_valid_gamma(rng)
        out.append((i, classical_bell_report(m, "A", "B", "D", tol)))
        out.append((i, classical_extended_chsh(m, gamma, "A", "C", "B", "D", tol=tol)))
    return out


def cmd_classical(args) -> int:
    if args.random is not None:
        seed, n = args.random
        pairs = random_classical_batch(seed, n, args.tol)
    elif args.model:
        m = ser.model_from_json(ser.load_json(args.model))
        gamma = GammaVector(tuple(args.gamma)) if args.gamma else None
        pairs = [(0, r) for r in classical_reports(m, args.bell, args.chsh, gamma, args.tol)]
    else:
        raise InvalidConfig("give a model file or --random SEED N")
    violated = any(r.violated for _, r in pairs)
    if args.format == "csv":
        text = _csv(["model", "name", "lhs", "rhs", "slack", "violated"], [[i, *_report_row(r)] for i, r in pairs])
    else:
        summary = {}
        for name in dict.fromkeys(r.name for _, r in pairs):
            group = [(i, r) for i, r in pairs if r.name == name]
            i, worst = min(group, key=lambda x: (x[1].slack, x[0]))
            summary[name] = {
                "count": len(group),
                "violations": sum(r.violated for _, r in group),
                "min_slack": worst.slack,
                "worst_model": i,
                "worst": worst.to_dict(),
            }
        text = ser.dumps({"schema": ser.SCHEMA_TAG, "kind": "classical-result", "models": len({i for i, _ in pairs}), "reports": summary})
    _emit(text, args.out)
    return EXIT_VIOLATED if violated else EXIT_HOLDS


# ---------------------------------------------------------------- conditions


def run_conditions(rep: SeparableRepresentation, pb1, pb2, tol=DEFAULT_TOL) -> dict:
    rho_s = assemble(rep)
    vbi = condition_vbi(rep, pb1, pb2, rho_s, tol)
    out = {
        "vbi": {
            "sign": vbi.sign.value,
            "sigma_value": vbi.sigma_value,
            "state_value": vbi.state_value,
            "diagonal_value": vbi.diagonal_value,
            "sign_consistent": vbi.sign_consistent,
        },
        "sor": condition_sor(rep, pb1, tol).value,
    }
    if abs(pb1.bound - 1.0) <= 1e-12:
        out["restriction"] = bell_restriction(rho_s, pb1, tol).value
    return out


def cmd_conditions(args) -> int:
    rep = ser.representation_from_json(ser.load_json(args.representation))
    pb1, pb2 = (ser.povm_from_json(ser.load_json(p)) for p in (args.pb1, args.pb2))
    res = run_conditions(rep, pb1, pb2, args.tol)
    if args.format == "csv":
        text = _csv(
            ["vbi", "sor", "restriction"],
            [[res["vbi"]["sign"], res["sor"], res.get("restriction", "")]],
        )
    else:
        text = ser.dumps({"schema": ser.SCHEMA_TAG, "kind": "conditions", **res})
    _emit(text, args.out)
    return EXIT_HOLDS


# ---------------------------------------------------------------- schema


def cmd_schema(args) -> int:
    kinds = [args.kind] if args.kind else list(ser.SCHEMAS)
    doc = {k: ser.SCHEMAS[k] for k in kinds}
    _emit(json.dumps(doc, indent=2) + "\n", args.out)
    return EXIT_HOLDS


# ---------------------------------------------------------------- main


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--tol", type=float, default=DEFAULT_TOL, help="inequality tolerance (default 1e-9)")
    common.add_argument("--seed", type=int, default=None)
    common.add_argument("--format", choices=("json", "csv"), default="json")
    common.add_argument("--out", default=None, help="write output here instead of stdout")
    common.add_argument("--threads", type=int, default=1)

    parser = argparse.ArgumentParser(prog="bellkit", description=__doc__.split("\n\n")[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("demo", parents=[common], help="reproduce the separable-state worked example")
    p.set_defaults(func=cmd_demo)

    p = sub.add_parser("check", parents=[common], help="evaluate one inequality on JSON inputs")
    p.add_argument("state")
    p.add_argument("povms", nargs="+")
    p.add_argument("--inequality", "-i", required=True, choices=sorted(INEQUALITIES))
    p.add_argument("--gamma", type=float, nargs="+")
    p.add_argument("--also", action="append", default=[], help="extra representation (separable-bound-inf)")
    p.add_argument("--symmetrized", action="store_true")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sweep", parents=[common], help="run a grid or randomized sweep")
    p.add_argument("config")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("classical", parents=[common], help="classical-model inequalities")
    p.add_argument("model", nargs="?")
    p.add_argument("--random", type=int, nargs=2, metavar=("SEED", "N"))
    p.add_argument("--bell", nargs=3, metavar=("A", "D1", "D2"))
    p.add_argument("--chsh", nargs=4, metavar=("A", "C", "B", "D"))
    p.add_argument("--gamma", type=float, nargs=4)
    p.set_defaults(func=cmd_classical)

    p = sub.add_parser("conditions", parents=[common], help="sufficient-condition checks")
    p.add_argument("representation")
    p.add_argument("pb1")
    p.add_argument("pb2")
    p.set_defaults(func=cmd_conditions)

    p = sub.add_parser("schema", parents=[common], help="print JSON schemas")
    p.add_argument("kind", nargs="?", choices=sorted(ser.SCHEMAS))
    p.set_defaults(func=cmd_schema)
    return parser


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BellkitError as e:
        name, msg = type(e).__name__, str(e)
        print(f"error: {msg}" if msg.startswith(name) else f"error: {name}: {msg}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
