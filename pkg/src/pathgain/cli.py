"""Command-line front end.

Exit codes: 0 success or solvable, 1 unsolvable or failed check, 2 input
error, 3 budget exceeded.
"""
from __future__ import annotations

import argparse
import json
import sys
from importlib import resources
from pathlib import Path

from . import io
from .equations import PolySystem, build_km_system, build_path_system
from .errors import (
    BranchBudgetExceeded,
    BudgetExceeded,
    FieldMismatch,
    InadmissibleCharacteristic,
    InputError,
    LiftInconsistency,
    NotASolution,
    PathGainError,
    RankViolation,
    UnsatisfiableDemand,
)
from .forest import forest_to_dict, transform
from .fuzz import FAMILIES, bench, compare_oracle
from .galois import parse_field
from .network import Problem, problem_from_dict, topo_sort
from .recover import NetworkCode, derive_code, verify_code
from .simplify import (
    DEFAULT_DEPTH,
    DEFAULT_WIDTH,
    UNSOLVABLE,
    admits,
    branch_analyze,
    lift_solution,
    linear_eliminate,
)
from .solve import DEFAULT_BUDGET, Solution, brute_force, solvable_over

EXIT_OK, EXIT_FAIL, EXIT_INPUT, EXIT_BUDGET = 0, 1, 2, 3


# -- input helpers ----------------------------------------------------------------

def resolve(path: str) -> Path:
    """A file path, or the name of a bundled fixture."""
    p = Path(path)
    if p.exists():
        return p
    bundled = resources.files("pathgain") / "fixtures" / p.name
    if bundled.is_file():
        return Path(str(bundled))
    raise InputError(f"no such file: {path}")


def load_json(path: str):
    p = resolve(path)
    try:
        return json.loads(p.read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise InputError(f"cannot read {path}: {exc}") from exc


def load_problem(path: str) -> Problem:
    return problem_from_dict(load_json(path))


def load_system_or_problem(path: str) -> tuple[PolySystem, Problem | None]:
    data = load_json(path)
    if isinstance(data, dict) and "nodes" in data:
        prob = problem_from_dict(data)
        return build_path_system(prob), prob
    if isinstance(data, dict) and "reduced" in data and "original" in data:
        data = data["original"]
    return PolySystem.from_dict(data), None


def emit(args, data, text: str | None = None) -> None:
    body = text if text is not None else io.dumps(data)
    if args.out:
        io.write_text(args.out, body if body.endswith("\n") else body + "\n")
    else:
        sys.stdout.write(body if body.endswith("\n") else body + "\n")


def info(msg: str) -> None:
    print(msg, file=sys.stderr)


# -- commands ---------------------------------------------------------------------

def cmd_transform(args) -> int:
    prob = load_problem(args.problem)
    forest = transform(prob, topo_sort(prob))
    data = forest_to_dict(forest)
    data["topological_order"] = forest.order
    emit(args, data)
    return EXIT_OK


def cmd_equations(args) -> int:
    prob = load_problem(args.problem)
    if args.formulation == "edge":
        system = build_km_system(prob)
    else:
        try:
            system = build_path_system(prob)
        except UnsatisfiableDemand as exc:
            info(f"unsolvable: {exc}")
            return EXIT_FAIL
    info(f"{len(system.variables)} variables, {len(system)} equations, "
         f"by degree {dict(sorted(system.count_by_degree().items()))}")
    emit(args, system.to_dict(), system.to_text() if args.text else None)
    return EXIT_OK


def cmd_simplify(args) -> int:
    system, _ = load_system_or_problem(args.system)
    res = linear_eliminate(system)
    info(f"{len(res.reduced.variables)} variables, {len(res.reduced)} equations left; "
         f"verdict {res.verdict_text}")
    emit(args, res.to_dict(), res.reduced.to_text() if args.text else None)
    return EXIT_FAIL if res.verdict == UNSOLVABLE else EXIT_OK


def cmd_analyze(args) -> int:
    system, _ = load_system_or_problem(args.system)
    res = branch_analyze(system, args.depth, args.width)
    for line in res.branch_log:
        info(line)
    info(f"verdict {res.verdict_text}")
    emit(args, res.to_dict())
    return EXIT_FAIL if res.verdict == UNSOLVABLE else EXIT_OK


def _solve_system(args, system: PolySystem, F) -> int:
    if args.mode != "first":
        found = brute_force(system, F, args.mode, args.budget)
        out = {"field": F.name, "count": found.count}
        if args.mode == "all":
            out["solutions"] = [Solution(F, s).to_dict()["assignment"] for s in found.solutions]
        emit(args, out)
        return EXIT_OK if found.count else EXIT_FAIL
    try:
        res = branch_analyze(system, args.depth, args.width)
    except BranchBudgetExceeded:
        res = linear_eliminate(system)
    if any(c % F.p for c in res.constants) or not admits(res.verdict, F.p):
        emit(args, {"solvable": False, "field": F.name, "verdict": res.verdict_text,
                    "reason": f"characteristic {F.p} excluded"})
        return EXIT_FAIL
    found = brute_force(res.reduced, F, "first", args.budget)
    if not found.solutions:
        emit(args, {"solvable": False, "field": F.name, "verdict": res.verdict_text,
                    "reason": "reduced system has no solution"})
        return EXIT_FAIL
    emit(args, Solution(F, lift_solution(res, F, found.solutions[0])).to_dict())
    return EXIT_OK


def cmd_solve(args) -> int:
    F = parse_field(args.field)
    data = load_json(args.input)
    if isinstance(data, dict) and "nodes" in data and args.mode == "first":
        report = solvable_over(problem_from_dict(data), F, args.budget, args.depth, args.width)
        if not report.solvable:
            info(report.reason)
            emit(args, {"solvable": False, "field": F.name, "verdict": report.verdict,
                        "reason": report.reason})
            return EXIT_FAIL
        emit(args, report.solution.to_dict())
        return EXIT_OK
    system, _ = load_system_or_problem(args.input)
    return _solve_system(args, system, F)


def cmd_recover(args) -> int:
    prob = load_problem(args.problem)
    sol = Solution.from_dict(load_json(args.solution))
    code = derive_code(prob, None, sol)
    emit(args, code.to_dict())
    return EXIT_OK


def cmd_verify(args) -> int:
    prob = load_problem(args.problem)
    code = NetworkCode.from_dict(load_json(args.code))
    reports = verify_code(prob, code)
    for r in reports:
        info(f"sink {r.sink}: {'pass' if r.passed else 'FAIL'}")
    emit(args, {"field": code.field.name, "all_pass": all(r.passed for r in reports),
                "sinks": [r.to_dict(code.field) for r in reports]})
    return EXIT_OK if all(r.passed for r in reports) else EXIT_FAIL


def cmd_compare_oracle(args) -> int:
    F = parse_field(args.field)
    report = compare_oracle(args.trials, args.seed, F, args.budget, args.family)
    data = report.to_dict()
    info(f"{data['agree']}/{data['compared']} agree, {data['skipped']} skipped, "
         f"{data['witness_failures']} witness failures")
    emit(args, data)
    return EXIT_OK if report.disagree == 0 and report.witness_failures == 0 else EXIT_FAIL


def cmd_bench(args) -> int:
    emit(args, bench(args.nodes, args.edges, args.sources, args.sinks, args.seed,
                     window=args.window))
    return EXIT_OK


# -- parser -------------------------------------------------------------------------

def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="pathgain",
        description="Scalar linear network coding through path-gain equations.")
    sub = parser.add_subparsers(dest="command", required=True)

    def command(name, func, help_):
        p = sub.add_parser(name, help=help_)
        p.set_defaults(func=func)
        p.add_argument("--out", help="write the result here instead of stdout")
        return p

    def search_flags(p):
        p.add_argument("--depth", type=int, default=DEFAULT_DEPTH, help="case-split depth")
        p.add_argument("--width", type=int, default=DEFAULT_WIDTH, help="case-split budget")

    p = command("transform", cmd_transform, "unfold a problem into sink trees")
    p.add_argument("problem")

    p = command("equations", cmd_equations, "build the polynomial system of a problem")
    p.add_argument("problem")
    p.add_argument("--formulation", choices=["path", "edge"], default="path")
    p.add_argument("--text", action="store_true", help="human-readable output")

    p = command("simplify", cmd_simplify, "prune and eliminate (system or problem file)")
    p.add_argument("system")
    p.add_argument("--text", action="store_true", help="print only the reduced equations")

    p = command("analyze", cmd_analyze, "simplify plus case analysis on the characteristic")
    p.add_argument("system")
    search_flags(p)

    p = command("solve", cmd_solve, "search for a solution over GF(p^m)")
    p.add_argument("input", help="problem or system file")
    p.add_argument("--field", required=True, help="p^m or a prime power, e.g. 2^2 or 4")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET,
                   help="maximum equation evaluations")
    p.add_argument("--mode", choices=["first", "all", "count"], default="first",
                   help="all/count search the given system without simplifying")
    search_flags(p)

    p = command("recover", cmd_recover, "derive edge coefficients from a path-gain solution")
    p.add_argument("problem")
    p.add_argument("solution")

    p = command("verify", cmd_verify, "check a network code by forward propagation")
    p.add_argument("problem")
    p.add_argument("code")

    p = command("compare-oracle", cmd_compare_oracle,
                "cross-check against the edge-gain formulation on random DAGs")
    p.add_argument("--trials", type=int, default=200)
    p.add_argument("--seed", type=int, default=42)
    p.add_argument("--field", default="2")
    p.add_argument("--budget", type=int, default=DEFAULT_BUDGET)
    p.add_argument("--family", choices=FAMILIES, default="random",
                   help="instance generator: sparse random DAGs or shared-bottleneck graphs")

    p = command("bench", cmd_bench, "time the pipeline on a random DAG")
    p.add_argument("--nodes", type=int, default=87)
    p.add_argument("--edges", type=int, default=161)
    p.add_argument("--sources", type=int, default=5)
    p.add_argument("--sinks", type=int, default=10)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--window", type=int, default=None, help="max label gap per edge")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except (BudgetExceeded, BranchBudgetExceeded) as exc:
        info(f"budget exceeded: {exc}")
        return EXIT_BUDGET
    except (InputError, NotASolution, FieldMismatch, InadmissibleCharacteristic) as exc:
        info(f"input error: {exc}")
        return EXIT_INPUT
    except (UnsatisfiableDemand, RankViolation, LiftInconsistency) as exc:
        info(f"failed: {exc}")
        return EXIT_FAIL
    except PathGainError as exc:
        info(f"error: {exc}")
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
