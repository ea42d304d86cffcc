"""Command-line front end.

Exit codes: 0 when the query answers true/valid/sat/ok, 1 when it answers
false/invalid/unsat or a proof fails, 2 on usage or input errors, 3 when a
resource cap leaves the answer unknown.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from typing import List, Optional, Sequence

from . import harness, ltsplan, mcheck, proofcheck, sat
from .formula import Kh, ParseError, parse, render
from .model import Ltsu, ModelFormatError, dumps_model, load_model, validate

EXIT_TRUE = 0
EXIT_FALSE = 1
EXIT_USAGE = 2
EXIT_UNKNOWN = 3


class UsageError(Exception):
    pass


def _agents_arg(raw: str) -> List[str]:
    agents = [a.strip() for a in raw.split(",") if a.strip()]
    if not agents:
        raise UsageError("agent list must be non-empty")
    return agents


def _load_ltsu(path: str) -> Ltsu:
    model, _ = load_model(path)
    if not isinstance(model, Ltsu):
        raise UsageError(f"{path}: model file has no 'strategies' field")
    problems = validate(model, list(model.strategies))
    if problems:
        raise UsageError(f"{path}: invalid model: {problems[0]}")
    return model


def _cmd_parse(args) -> int:
    f = parse(args.formula, _agents_arg(args.agents))
    print(render(f))
    return EXIT_TRUE


def _cmd_check(args) -> int:
    model = _load_ltsu(args.model)
    if args.state not in model.base.states:
        raise UsageError(f"unknown state {args.state!r}")
    f = parse(args.formula, list(model.strategies))
    ext = mcheck.extension(model, f)
    truth = args.state in ext.states
    if args.extension:
        print(" ".join(model.base.sort_states(ext.states)))
    if args.witness and isinstance(f, Kh) and truth:
        cell = mcheck.witness(model, f)
        if cell is not None:
            plans = sorted(cell, key=lambda p: (len(p), p))
            print("witness: " + " ".join("." .join(p) if p else "eps" for p in plans))
    print("true" if truth else "false")
    return EXIT_TRUE if truth else EXIT_FALSE


def _cmd_sat(args) -> int:
    agents = _agents_arg(args.agents)
    f = parse(args.formula, agents)
    result = sat.satisfiable(f, agents)
    if result.is_sat:
        print("SAT")
        if args.out:
            with open(args.out, "w", encoding="utf-8") as fh:
                fh.write(dumps_model(result.model, result.state))
        return EXIT_TRUE
    print("UNSAT")
    return EXIT_FALSE


def _cmd_valid(args) -> int:
    agents = _agents_arg(args.agents)
    f = parse(args.formula, agents)
    result = sat.valid(f, agents)
    if result.valid:
        print("VALID")
        return EXIT_TRUE
    out = args.out or "countermodel.json"
    with open(out, "w", encoding="utf-8") as fh:
        fh.write(dumps_model(result.model, result.state))
    print(f"INVALID (countermodel written to {out})")
    return EXIT_FALSE


def _cmd_lts_check(args) -> int:
    model, _ = load_model(args.model)
    if isinstance(model, Ltsu):
        print("warning: strategies ignored under plan-existence semantics",
              file=sys.stderr)
        base = model.base
    else:
        base = model
    if args.state not in base.states:
        raise UsageError(f"unknown state {args.state!r}")
    f = parse(args.formula, _agents_arg(args.agents))
    ext = ltsplan.extension_lts(base, f)
    truth = args.state in ext.states
    if args.extension:
        print(" ".join(base.sort_states(ext.states)))
    print("true" if truth else "false")
    return EXIT_TRUE if truth else EXIT_FALSE


def _cmd_prove(args) -> int:
    with open(args.file, "r", encoding="utf-8") as fh:
        text = fh.read()
    script = proofcheck.parse_proof(text, args.system, _agents_arg(args.agents))
    result = proofcheck.check_proof(script)
    if result.ok:
        print("OK")
        return EXIT_TRUE
    print(f"line {result.line}: {result.reason}")
    return EXIT_FALSE


def _cmd_gen(args) -> int:
    config = harness.GenConfig(
        seed=args.seed, max_states=args.max_states, max_actions=args.max_actions,
        max_plan_len=args.max_plan_len, max_cells=args.max_cells,
        num_agents=args.num_agents)
    model = harness.gen_ltsu(config)
    text = dumps_model(model)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return EXIT_TRUE


def _cmd_differential(args) -> int:
    config = harness.GenConfig(seed=args.seed, num_agents=args.num_agents)
    report = harness.differential_run(args.cases, config)
    if args.json:
        print(json.dumps(report.to_dict(), indent=2))
    else:
        print(report.to_text())
    return EXIT_TRUE if not report.mismatches else EXIT_FALSE


def _measure_seconds(model: Ltsu, f, repeats: int) -> float:
    start = time.perf_counter()
    for _ in range(repeats):
        mcheck.extension(model, f)
    return (time.perf_counter() - start) / repeats


def _loglog_slope(xs: Sequence[float], ys: Sequence[float]) -> float:
    lx = [math.log(x) for x in xs]
    ly = [math.log(y) for y in ys]
    mx = sum(lx) / len(lx)
    my = sum(ly) / len(ly)
    num = sum((a - mx) * (b - my) for a, b in zip(lx, ly))
    den = sum((a - mx) ** 2 for a in lx)
    return num / den


def _cmd_bench(args) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    sizes = [int(s) for s in args.sizes.split(",")]
    agents = ["i"]
    f = parse(args.formula, agents)
    rows = []
    for n in sizes:
        model = harness.scaling_model(n)
        _measure_seconds(model, f, 1)  # warm-up
        repeats = 1
        secs = _measure_seconds(model, f, repeats)
        while secs * repeats < 0.02:
            repeats *= 4
            secs = _measure_seconds(model, f, repeats)
        rows.append((n, secs))

    csv_path = f"{args.out_dir}/bench.csv"
    with open(csv_path, "w", encoding="utf-8") as fh:
        fh.write("states,seconds\n")
        for n, secs in rows:
            fh.write(f"{n},{secs:.9f}\n")

    slope = _loglog_slope([n for n, _ in rows], [s for _, s in rows])
    fig, ax = plt.subplots(figsize=(5, 3.5))
    ax.loglog([n for n, _ in rows], [s for _, s in rows], "o-", label="extension")
    ref = [rows[0][1] * (n / rows[0][0]) ** 2 for n, _ in rows]
    ax.loglog([n for n, _ in rows], ref, "--", color="gray", label="quadratic ref")
    ax.set_xlabel("states")
    ax.set_ylabel("seconds per call")
    ax.legend()
    fig.tight_layout()
    png_path = f"{args.out_dir}/bench.png"
    fig.savefig(png_path, dpi=150)
    plt.close(fig)

    print(f"log-log slope: {slope:.2f}")
    print(f"wrote {csv_path} and {png_path}")
    return EXIT_TRUE


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="khow")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", help="print the core form of a formula")
    p.add_argument("formula")
    p.add_argument("--agents", default="i", help="comma-separated agent names")
    p.set_defaults(func=_cmd_parse)

    p = sub.add_parser("check", help="model-check a formula at a state")
    p.add_argument("formula")
    p.add_argument("--model", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--extension", action="store_true",
                   help="also print the satisfying states")
    p.add_argument("--witness", action="store_true",
                   help="print the witnessing plan cell for a true Kh formula")
    p.set_defaults(func=_cmd_check)

    p = sub.add_parser("sat", help="decide satisfiability")
    p.add_argument("formula")
    p.add_argument("--agents", default="i")
    p.add_argument("--out", help="write the certificate model here")
    p.set_defaults(func=_cmd_sat)

    p = sub.add_parser("valid", help="decide validity")
    p.add_argument("formula")
    p.add_argument("--agents", default="i")
    p.add_argument("--out", help="countermodel path (default countermodel.json)")
    p.set_defaults(func=_cmd_valid)

    p = sub.add_parser("lts-check", help="model-check under plan-existence semantics")
    p.add_argument("formula")
    p.add_argument("--model", required=True)
    p.add_argument("--state", required=True)
    p.add_argument("--agents", default="i")
    p.add_argument("--extension", action="store_true")
    p.set_defaults(func=_cmd_lts_check)

    p = sub.add_parser("prove", help="check a derivation file")
    p.add_argument("file")
    p.add_argument("--system", required=True, choices=["KHi", "KH"])
    p.add_argument("--agents", default="i")
    p.set_defaults(func=_cmd_prove)

    p = sub.add_parser("gen", help="write a seeded random model")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--out")
    p.add_argument("--max-states", type=int, default=5)
    p.add_argument("--max-actions", type=int, default=3)
    p.add_argument("--max-plan-len", type=int, default=2)
    p.add_argument("--max-cells", type=int, default=3)
    p.add_argument("--num-agents", type=int, default=1)
    p.set_defaults(func=_cmd_gen)

    p = sub.add_parser("differential", help="run the differential comparisons")
    p.add_argument("--cases", type=int, default=25)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--num-agents", type=int, default=1)
    p.add_argument("--json", action="store_true")
    p.set_defaults(func=_cmd_differential)

    p = sub.add_parser("bench", help="time the checker over growing models; "
                                     "writes bench.csv and bench.png")
    p.add_argument("--sizes", default="10,25,50,100,200")
    p.add_argument("--formula", default="Kh[i](p, q) & ~Kh[i](p, r)")
    p.add_argument("--out-dir", default=".")
    p.set_defaults(func=_cmd_bench)

    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else EXIT_TRUE
    try:
        return args.func(args)
    except (UsageError, ParseError, ModelFormatError, ValueError,
            proofcheck.ProofFormatError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except sat.ResourceCapExceeded as exc:
        print("UNKNOWN")
        print(f"resource cap: {exc}", file=sys.stderr)
        return EXIT_UNKNOWN


if __name__ == "__main__":
    sys.exit(main())
