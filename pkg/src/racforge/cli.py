"""Command-line entry point: ``racforge {bounds,design,construct,eval,reproduce}``.

Exit codes: 0 success, 2 usage or validation error, 3 budget exhausted with
no result, 4 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from pathlib import Path

import numpy as np

EXIT_OK = 0
EXIT_USAGE = 2
EXIT_BUDGET = 3
EXIT_NUMERIC = 4

FAMILIES = ("l1", "llm1-rac", "llm1-qrac", "liabotro-rac", "liabotro-qrac", "tensor")


class UsageError(ValueError):
    pass


def _positive_int(text: str) -> int:
    v = int(text)
    if v <= 0:
        raise argparse.ArgumentTypeError(f"expected a positive integer, got {text}")
    return v


def _nonneg_int(text: str) -> int:
    v = int(text)
    if v < 0:
        raise argparse.ArgumentTypeError(f"expected a nonnegative integer, got {text}")
    return v


def _positive_float(text: str) -> float:
    v = float(text)
    if not v > 0:
        raise argparse.ArgumentTypeError(f"expected a positive number, got {text}")
    return v


def _seed(text: str) -> int:
    v = int(text)
    if not 0 <= v < 1 << 64:
        raise argparse.ArgumentTypeError("seed must be a 64-bit unsigned integer")
    return v


def _default_jobs() -> int:
    env = os.environ.get("RAC_FORGE_JOBS")
    if env is None:
        return 1
    try:
        return max(1, int(env))
    except ValueError:
        return 1


def _show(x) -> str:
    if isinstance(x, Fraction):
        return f"{x} ({float(x):.17g})" if x.denominator != 1 else str(x.numerator)
    return f"{float(x):.17g}"


def _emit(text: str, output: str | None) -> None:
    if output:
        Path(output).write_text(text)
    else:
        sys.stdout.write(text)
        if not text.endswith("\n"):
            sys.stdout.write("\n")


def _check_lk(L: int, k: int) -> None:
    if not 1 <= k <= L <= 24:
        raise UsageError(f"need 1 <= k <= L <= 24, got L={L}, k={k}")


def _pretty_rows(rows: list[dict], columns: list[str]) -> str:
    widths = {c: max(len(c), *(len(str(r[c])) for r in rows)) if rows else len(c) for c in columns}
    lines = ["  ".join(c.ljust(widths[c]) for c in columns)]
    for r in rows:
        lines.append("  ".join(str(r[c]).ljust(widths[c]) for c in columns))
    return "\n".join(lines) + "\n"


def cmd_bounds(args) -> int:
    from .bounds import bound_report

    _check_lk(args.L, args.k)
    rep = bound_report(args.L, args.k)
    if args.format == "csv":
        text = rep.to_csv()
    elif args.format == "json":
        text = rep.to_json() + "\n"
    else:
        rows = rep.to_rows()
        text = f"(L, k) = ({args.L}, {args.k}), covering radius H = {rep.covering_radius}\n"
        text += _pretty_rows(rows, ["label", "value", "kind", "clamped", "note"])
    _emit(text, args.output)
    return EXIT_OK


def _write_code(code, path: str) -> None:
    Path(path).write_text(code.to_json() + "\n")


def cmd_design(args) -> int:
    from .codes import avg_success, build_avg_code, build_worst_code, worst_success
    from .design import Budget, search_avg_optimal, search_worst_achievable

    _check_lk(args.L, args.k)
    budget = Budget(args.node_limit, args.time_limit)
    strategy = args.strategy or ("bnb" if args.objective == "avg" else "local")
    if args.objective == "avg":
        res = search_avg_optimal(args.L, args.k, strategy, budget, seed=args.seed, starts=args.starts,
                                 jobs=args.jobs)
        code = build_avg_code(res.S, args.k)
        check = avg_success(code)
    else:
        res = search_worst_achievable(args.L, args.k, strategy, budget, seed=args.seed, starts=args.starts)
        code = build_worst_code(res.S, args.k)
        check = worst_success(code)
    if isinstance(check, Fraction) and isinstance(res.success_probability, Fraction):
        if check != res.success_probability:
            raise RuntimeError(f"synthesized code evaluates to {check}, search reported {res.success_probability}")
    elif abs(float(check) - float(res.success_probability)) > 1e-9:
        raise RuntimeError(f"synthesized code evaluates to {check}, search reported {res.success_probability}")
    payload = res.to_json(timing=args.timing) + "\n"
    if not args.no_files:
        stem = f"{args.objective}_L{args.L}_k{args.k}"
        _emit(payload, args.result_file or f"design_{stem}.json")
        _write_code(code, args.code_file or f"code_{stem}.json")
    if args.format == "json":
        sys.stdout.write(payload)
    else:
        print(f"success probability: {_show(res.success_probability)}")
        print(f"optimality: {res.optimality}" + (" (conditional on deterministic decoders)"
                                                 if res.conditional_on_conjecture else ""))
        print(f"codebook: {' '.join(res.S.strings())}")
    return EXIT_OK


def _parse_blocks(text: str) -> list[tuple[int, int]]:
    blocks = []
    for part in text.split(":"):
        try:
            L, k = (int(x) for x in part.split(","))
        except ValueError as exc:
            raise UsageError(f"bad block {part!r}; expected L,k pairs joined by ':'") from exc
        blocks.append((L, k))
    return blocks


def _library_block(L: int, k: int):
    from .codes import identity_code
    from .quantum import classical_as_quantum, liabotro_qrac, llm1_qrac

    if (L, k) == (1, 1):
        return classical_as_quantum(identity_code(1))
    if k == 1 and L in (2, 3):
        return liabotro_qrac(L, 1)
    if k == L - 1 and L >= 2:
        return llm1_qrac(L)
    raise UsageError(f"no library block for (L, k) = ({L}, {k}); available: (1,1), (2,1), (3,1), (m+1,m)")


def cmd_construct(args) -> int:
    from .codes import avg_success, optimal_L1_code, optimal_LLm1_code, worst_success
    from .quantum import liabotro_qrac, llm1_qrac, qrac_success, tensor_compose

    fam = args.family
    need_L = fam != "tensor"
    if need_L and args.L is None:
        raise UsageError(f"construct {fam} needs --L")
    if fam == "l1":
        code = optimal_L1_code(args.L)
    elif fam == "llm1-rac":
        code = optimal_LLm1_code(args.L)
    elif fam == "llm1-qrac":
        code = llm1_qrac(args.L)
    elif fam in ("liabotro-rac", "liabotro-qrac"):
        if args.k is None:
            raise UsageError(f"construct {fam} needs --k")
        paulis = args.paulis.split(",") if args.paulis else None
        code = liabotro_qrac(args.L, args.k, "classical" if fam == "liabotro-rac" else "quantum", paulis)
    else:
        if not args.blocks:
            raise UsageError("construct tensor needs --blocks, e.g. 2,1:2,1")
        blocks = _parse_blocks(args.blocks)
        code = tensor_compose([(_library_block(L, k), L) for L, k in blocks])
    if hasattr(code, "encoder"):
        avg, worst = avg_success(code), worst_success(code)
    else:
        avg, worst = qrac_success(code)
    if not args.no_files:
        name = args.output or f"{fam}_L{code.L}_k{code.k}.json"
        _write_code(code, name)
    print(f"(L, k) = ({code.L}, {code.k})")
    print(f"average success: {_show(avg)}")
    print(f"worst-case success: {_show(worst)}")
    return EXIT_OK


def load_code(path: str):
    from .codes import ClassicalCode
    from .quantum import QuantumCode

    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: not valid JSON ({exc})") from exc
    kind = data.get("type") if isinstance(data, dict) else None
    try:
        if kind == "classical-rac":
            return ClassicalCode.from_dict(data)
        if kind == "quantum-rac":
            return QuantumCode.from_dict(data)
    except (KeyError, TypeError) as exc:
        raise UsageError(f"{path}: missing or malformed field {exc}") from exc
    raise UsageError(f"{path}: unknown code type {kind!r}")


def cmd_eval(args) -> int:
    from .codes import avg_success, worst_success
    from .quantum import qrac_success

    code = load_code(args.code_file)
    if hasattr(code, "encoder"):
        avg, worst = avg_success(code), worst_success(code)
    else:
        avg, worst = qrac_success(code)
    if args.format == "json":
        from .serialize import format_number

        print(json.dumps({"L": code.L, "k": code.k, "avg": format_number(avg), "worst": format_number(worst)}))
    else:
        print(f"(L, k) = ({code.L}, {code.k})")
        print(f"average success: {_show(avg)}")
        print(f"worst-case success: {_show(worst)}")
    return EXIT_OK


def cmd_reproduce(args) -> int:
    from .design import Budget
    from .tables import FIELDS, reproduce, rows_to_csv

    if args.max_L < 1:
        raise UsageError("--max-L must be >= 1")
    budget = Budget(args.node_limit, args.time_limit)
    rows = reproduce(args.table, args.max_L, budget, seed=args.seed, starts=args.starts, jobs=args.jobs)
    if args.format == "csv":
        text = rows_to_csv(rows)
    elif args.format == "json":
        text = json.dumps([r.as_dict() for r in rows], indent=1) + "\n"
    else:
        text = _pretty_rows([r.as_dict() for r in rows], FIELDS)
    _emit(text, args.output)
    if args.strict and any(r.match is False for r in rows):
        return 1
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="racforge", description="Random access code bounds, design and reproduction.")
    sub = p.add_subparsers(dest="command", required=True)

    def common_output(sp, formats=("csv", "json", "pretty"), default="pretty"):
        sp.add_argument("--format", choices=formats, default=default)
        sp.add_argument("--output", "-o", help="write to this file instead of stdout")

    def limits(sp):
        sp.add_argument("--seed", type=_seed, default=0)
        sp.add_argument("--node-limit", type=_nonneg_int, default=None)
        sp.add_argument("--time-limit", type=_positive_float, default=None, help="seconds")
        sp.add_argument("--starts", type=_positive_int, default=64, help="local-search restarts")
        sp.add_argument("--jobs", type=_positive_int, default=_default_jobs(),
                        help="worker processes (default: $RAC_FORGE_JOBS or 1)")

    sp = sub.add_parser("bounds", help="closed-form bounds at (L, k)")
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    common_output(sp)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("design", help="search for an average-optimal or worst-case codebook")
    sp.add_argument("objective", choices=("avg", "worst"))
    sp.add_argument("--L", type=int, required=True)
    sp.add_argument("--k", type=int, required=True)
    sp.add_argument("--strategy", choices=("exhaustive", "bnb", "local"), default=None,
                    help="default: bnb for avg, local for worst")
    limits(sp)
    sp.add_argument("--format", choices=("json", "pretty"), default="pretty")
    sp.add_argument("--result-file", help="DesignResult JSON path (default design_<objective>_L<L>_k<k>.json)")
    sp.add_argument("--code-file", help="code JSON path (default code_<objective>_L<L>_k<k>.json)")
    sp.add_argument("--no-files", action="store_true", help="print only, write nothing")
    sp.add_argument("--timing", action="store_true", help="include wall time in the JSON payload")
    sp.set_defaults(func=cmd_design)

    sp = sub.add_parser("construct", help="build a code from a known family")
    sp.add_argument("family", choices=FAMILIES)
    sp.add_argument("--L", type=int)
    sp.add_argument("--k", type=int)
    sp.add_argument("--paulis", help="comma-separated Pauli strings for liabotro-*")
    sp.add_argument("--blocks", help="tensor blocks as L,k pairs joined by ':', e.g. 2,1:3,1")
    sp.add_argument("--output", "-o", help="code file path (default <family>_L<L>_k<k>.json)")
    sp.add_argument("--no-files", action="store_true")
    sp.set_defaults(func=cmd_construct)

    sp = sub.add_parser("eval", help="evaluate a saved code file")
    sp.add_argument("code_file")
    sp.add_argument("--format", choices=("json", "pretty"), default="pretty")
    sp.set_defaults(func=cmd_eval)

    sp = sub.add_parser("reproduce", help="recompute a results table")
    sp.add_argument("--table", type=int, choices=(1, 2, 3), required=True)
    sp.add_argument("--max-L", type=int, default=6)
    limits(sp)
    sp.add_argument("--strict", action="store_true", help="exit 1 if any covered cell mismatches")
    common_output(sp, default="csv")
    sp.set_defaults(func=cmd_reproduce)
    return p


def main(argv: list[str] | None = None) -> int:
    from .codes import InvariantError
    from .design import BudgetExhausted

    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except BudgetExhausted as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (UsageError, InvariantError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (RuntimeError, ArithmeticError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    sys.exit(main())
