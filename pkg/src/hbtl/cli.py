"""``btl``: command-line front end.

Exit codes: 0 ok / true / winning verdict, 1 false / unsat-within-bounds /
losing verdict, 2 usage or input error, 3 budget exceeded or inconclusive.
Every subcommand accepts ``--json`` for machine-readable output on stdout.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import __version__

OK, FALSE, USAGE, BUDGET = 0, 1, 2, 3


class CliError(Exception):
    def __init__(self, message: str, payload: dict | None = None, code: int = USAGE):
        super().__init__(message)
        self.payload = payload or {"error": message}
        self.code = code


def _read(path: str) -> str:
    try:
        return Path(path).read_text()
    except OSError as exc:
        raise CliError(f"cannot read {path}: {exc.strerror}") from None


def _formula(args):
    from .parser import ParseError, parse_formula

    text = args.formula if args.formula is not None else _read(args.file)
    try:
        return parse_formula(text)
    except ParseError as exc:
        raise CliError(str(exc), exc.as_dict()) from None


def _tree(path: str):
    from .models import TreeError
    from .serialization import load_tree

    try:
        return load_tree(_read(path))
    except (TreeError, json.JSONDecodeError) as exc:
        raise CliError(f"{path}: {exc}") from None


def _instance(path: str):
    from .tiling import TilingError, load_instance

    try:
        return load_instance(_read(path))
    except (TilingError, json.JSONDecodeError) as exc:
        raise CliError(f"{path}: {exc}") from None


# ---------------------------------------------------------------- commands


def cmd_parse(args):
    from .formula import FormulaError, classify, depth, size

    f = _formula(args)
    try:
        c = classify(f).as_dict()
    except FormulaError:
        c = {"class": "path", "k": None}
    out = {"formula": str(f), "class": c["class"], "size": size(f), "depth": depth(f), "k": c["k"]}
    text = "\n".join(f"{k}: {v}" for k, v in out.items())
    return OK, out, text


def cmd_check(args):
    from .checker import CheckError, check_state

    t = _tree(args.tree)
    f = _formula(args)
    node = t.root if args.node is None else args.node
    if args.assign:
        try:
            assign = [int(x) for x in args.assign.split(",")]
        except ValueError:
            raise CliError("--assign expects comma-separated node ids") from None
    else:
        from .formula import max_var

        assign = [t.root] * max_var(f)
    try:
        value = check_state(t, node, assign, f, args.mode)
    except CheckError as exc:
        raise CliError(str(exc)) from None
    out = {"value": value, "node": node, "assignment": assign, "mode": args.mode}
    return (OK if value else FALSE), out, "true" if value else "false"


def cmd_rewrite(args):
    from .rewriter import RewriteError, rewrite

    f = _formula(args)
    try:
        rep = rewrite(args.pipeline, f)
    except RewriteError as exc:
        raise CliError(str(exc)) from None
    d = rep.as_dict()
    text = (f"{d['output']}\n# kind: {d['kind']}; size {d['input_size']} -> {d['output_size']}"
            + (f"; fresh: {', '.join(d['fresh'])}" if d["fresh"] else ""))
    return OK, d, text


def cmd_encode_tiling(args):
    from .formula import size
    from .tiling import TilingError, encode_tiling, part

    inst = _instance(args.instance)
    try:
        f = part(inst, args.part) if args.part else encode_tiling(inst)
    except TilingError as exc:
        raise CliError(str(exc)) from None
    out = {"part": args.part or "all", "size": size(f), "formula": str(f)}
    return OK, out, f"{out['formula']}\n# size {out['size']}"


def cmd_solve_tiling(args):
    from .tiling import A_WINS, E_WINS, StateBudgetExceeded, TilingError, solve_tiling

    inst = _instance(args.instance)
    try:
        res = solve_tiling(inst, args.width, args.max_rows, args.budget)
    except StateBudgetExceeded as exc:
        raise CliError(str(exc), code=BUDGET) from None
    except TilingError as exc:
        raise CliError(str(exc)) from None
    code = {E_WINS: OK, A_WINS: FALSE}.get(res.verdict, BUDGET)
    text = res.verdict + (f" within {res.rows_needed} rows" if res.rows_needed else "")
    return code, res.as_dict(), text


def cmd_game_solve(args):
    from .game import SPOILER, GameBudgetExceeded, solve_game

    left, right = _tree(args.left), _tree(args.right)
    try:
        w = solve_game(left, right, args.rounds, budget=args.budget)
    except GameBudgetExceeded as exc:
        raise CliError(str(exc), code=BUDGET) from None
    return (OK if w == SPOILER else FALSE), {"winner": w, "rounds": args.rounds}, w


def cmd_game_replay(args):
    from .game import SPOILER, IllegalMove, ScriptError, replay

    left, right = _tree(args.left), _tree(args.right)
    try:
        tr = replay(_read(args.script), left, right, args.rounds)
    except (IllegalMove, ScriptError) as exc:
        raise CliError(str(exc)) from None
    d = tr.as_dict()
    lines = d["moves"] + [f"winner: {tr.winner}" if tr.complete else "incomplete transcript"]
    return (OK if tr.winner == SPOILER else FALSE), d, "\n".join(lines)


def cmd_sat(args):
    from .sat import BudgetExceeded, SearchBounds, bounded_sat
    from .serialization import tree_to_dict

    f = _formula(args)
    props = [p for p in args.props.split(",") if p]
    try:
        bounds = SearchBounds(args.depth, args.branch, props, args.max_nodes)
        res = bounded_sat(f, bounds, args.budget, args.mode)
    except BudgetExceeded as exc:
        raise CliError(str(exc), code=BUDGET) from None
    except ValueError as exc:
        raise CliError(str(exc)) from None
    model = tree_to_dict(res.model) if res.model else None
    out = {"verdict": res.verdict, "candidates": res.candidates, "model": model}
    text = res.verdict + (f"\n{json.dumps(model)}" if model else "")
    return (OK if res.satisfiable else FALSE), out, text


def cmd_build_model(args):
    from .models import build_A, build_B, unravel
    from .serialization import transition_system_to_dict, tree_to_dict

    if args.index < 0:
        raise CliError("--index must be non-negative")
    if args.family == "A":
        ts = build_A(args.index)
    else:
        if args.S is None or args.N is None:
            raise CliError("family B needs --S and --N")
        try:
            ts = build_B(args.index, args.S, args.N)
        except ValueError as exc:
            raise CliError(str(exc)) from None
    if args.depth is None:
        out = {"transition_system": transition_system_to_dict(ts)}
    else:
        if args.depth < 0:
            raise CliError("--depth must be non-negative")
        out = {"tree": tree_to_dict(unravel(ts, args.depth))}
    return OK, out, json.dumps(out, indent=2)


def cmd_report(args):
    from .report import write_report

    files = write_report(args.out, max_m=args.max_m, max_n=args.max_n,
                         formulas=args.formulas, seed=args.seed)
    return OK, {"files": files}, "\n".join(files.values())


# ------------------------------------------------------------------ parser


def _formula_source(p):
    g = p.add_mutually_exclusive_group(required=True)
    g.add_argument("--formula", help="formula text")
    g.add_argument("--file", help="file holding the formula text")


def _mode(p):
    p.add_argument("--mode", choices=["leaf-loop", "strict"], default="leaf-loop")


def build_parser() -> argparse.ArgumentParser:
    from .rewriter import PIPELINES

    ap = argparse.ArgumentParser(prog="btl", description="Hybrid branching-time logic workbench.")
    ap.add_argument("--version", action="version", version=f"btl {__version__}")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--json", action="store_true", help="machine-readable output")
    sub = ap.add_subparsers(dest="command", required=True)

    p = sub.add_parser("parse", parents=[common], help="parse a formula and print its metrics")
    _formula_source(p)
    p.set_defaults(func=cmd_parse)

    p = sub.add_parser("check", parents=[common], help="check a formula on a tree")
    p.add_argument("--tree", required=True)
    _formula_source(p)
    _mode(p)
    p.add_argument("--node", type=int)
    p.add_argument("--assign", help="comma-separated node ids for x1, x2, ...")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("rewrite", parents=[common], help="run a rewrite pipeline")
    p.add_argument("--pipeline", required=True, choices=sorted(PIPELINES))
    _formula_source(p)
    p.set_defaults(func=cmd_rewrite)

    p = sub.add_parser("encode-tiling", parents=[common], help="encode a tiling instance")
    p.add_argument("--instance", required=True)
    p.add_argument("--part", help="chi1..chi10, psi1..psi7 (also χ4, ψ7, θ', ξ, ...)")
    p.set_defaults(func=cmd_encode_tiling)

    p = sub.add_parser("solve-tiling", parents=[common], help="solve the tiling game on a small board")
    p.add_argument("--instance", required=True)
    p.add_argument("--width", type=int, required=True)
    p.add_argument("--max-rows", type=int, required=True)
    p.add_argument("--budget", type=int, default=10**6, help="maximum number of game states")
    p.set_defaults(func=cmd_solve_tiling)

    p = sub.add_parser("game-solve", parents=[common], help="solve the k-round HCTL game")
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--rounds", type=int, required=True)
    p.add_argument("--budget", type=int, default=2_000_000, help="maximum number of memoised states")
    p.set_defaults(func=cmd_game_solve)

    p = sub.add_parser("game-replay", parents=[common], help="replay a game script")
    p.add_argument("--script", required=True)
    p.add_argument("--left", required=True)
    p.add_argument("--right", required=True)
    p.add_argument("--rounds", type=int, help="number of rounds (default: as many as the script plays)")
    p.set_defaults(func=cmd_game_replay)

    p = sub.add_parser("sat", parents=[common], help="bounded satisfiability search")
    _formula_source(p)
    p.add_argument("--depth", type=int)
    p.add_argument("--branch", type=int)
    p.add_argument("--props", required=True, help="comma-separated proposition universe")
    p.add_argument("--max-nodes", type=int, default=6)
    p.add_argument("--budget", type=int, default=10**6, help="maximum number of candidate trees")
    _mode(p)
    p.set_defaults(func=cmd_sat)

    p = sub.add_parser("build-model", parents=[common], help="build A_i or B_k")
    p.add_argument("--family", required=True, choices=["A", "B"])
    p.add_argument("--index", type=int, required=True)
    p.add_argument("--depth", type=int, help="unravel to this depth")
    p.add_argument("--S", type=int, help="white path length for B_k")
    p.add_argument("--N", type=int, help="index of the A copy inside B_k")
    p.set_defaults(func=cmd_build_model)

    p = sub.add_parser("report", parents=[common], help="write CSV tables and PNG figures")
    p.add_argument("--out", default="report")
    p.add_argument("--max-m", type=int, default=6)
    p.add_argument("--max-n", type=int, default=8)
    p.add_argument("--formulas", type=int, default=500)
    p.add_argument("--seed", type=int, default=0)
    p.set_defaults(func=cmd_report)
    return ap


def main(argv=None) -> int:
    ap = build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return USAGE if exc.code not in (0, None) else OK
    try:
        code, payload, text = args.func(args)
    except CliError as exc:
        if args.json:
            print(json.dumps(exc.payload, sort_keys=True))
        print(f"btl {args.command}: {exc}", file=sys.stderr)
        return exc.code
    print(json.dumps(payload, sort_keys=True) if args.json else text)
    return code


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
