"""Exhaustive search for solutions of a polynomial system over GF(q)."""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator

from .equations import PolySystem, build_path_system
from .errors import BranchBudgetExceeded, BudgetExceeded, ParseError, UnsatisfiableDemand
from .forest import Forest, transform
from .galois import FieldSpec, parse_field
from .network import Problem, topo_sort
from .simplify import (
    DEFAULT_DEPTH,
    DEFAULT_WIDTH,
    SimplifyResult,
    admits,
    branch_analyze,
    lift_solution,
    linear_eliminate,
    verdict_str,
)

DEFAULT_BUDGET = 2 ** 24


@dataclass
class Solution:
    field: FieldSpec
    assignment: dict[str, int]  # variable -> field element index

    def to_dict(self) -> dict:
        return {"field": self.field.name,
                "assignment": {v: str(self.field.elem(x)) for v, x in self.assignment.items()}}

    @classmethod
    def from_dict(cls, data: dict) -> "Solution":
        try:
            F = parse_field(str(data["field"]))
            assignment = {str(v): F.index(F.parse(str(x)))
                          for v, x in data["assignment"].items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"malformed solution: {exc}") from exc
        return cls(F, assignment)


@dataclass
class SearchResult:
    solutions: list[dict[str, int]]
    count: int
    evaluations: int


class _Compiled:
    """Equations as (coefficient index, variable levels) term lists, each
    scheduled at the level of its last variable."""

    def __init__(self, system: PolySystem, order: list[str], F: FieldSpec):
        level = {v: n for n, v in enumerate(order)}
        self.at_level: list[list] = [[] for _ in order]
        self.constant_violation = False
        for eq in system.equations:
            terms = [(F.from_int_i(c), tuple(level[v] for v in mono))
                     for mono, c in eq.terms.items()]
            terms = [t for t in terms if t[0]]
            if not terms:
                continue
            if all(not lv for _, lv in terms):
                self.constant_violation = True
                continue
            last = max(max(lv) for _, lv in terms if lv)
            self.at_level[last].append(terms)


def _evaluator(F: FieldSpec):
    if F.m == 1:
        p = F.p

        def ev(terms, vals):
            total = 0
            for c, lv in terms:
                t = c
                for x in lv:
                    t *= vals[x]
                total += t
            return total % p
    else:
        add, mul = F.add_i, F.mul_i

        def ev(terms, vals):
            total = 0
            for c, lv in terms:
                t = c
                for x in lv:
                    t = mul(t, vals[x])
                total = add(total, t)
            return total
    return ev


def search(system: PolySystem, F: FieldSpec, order: list[str],
           budget: int = DEFAULT_BUDGET, stats: dict | None = None) -> Iterator[dict[str, int]]:
    """Depth-first enumeration over ``order`` in lexicographic element order.

    Each equation is checked as soon as its last variable is bound.  The
    budget caps the number of equation evaluations.
    """
    comp = _Compiled(system, order, F)
    if comp.constant_violation:
        return
    n = len(order)
    if n == 0:
        yield {}
        return
    ev = _evaluator(F)
    q = F.q
    vals = [0] * n
    at_level = comp.at_level
    spent = 0
    # explicit stack of next value to try per level
    nxt = [0] * n
    lvl = 0
    while lvl >= 0:
        if nxt[lvl] == q:
            nxt[lvl] = 0
            lvl -= 1
            continue
        vals[lvl] = nxt[lvl]
        nxt[lvl] += 1
        ok = True
        for terms in at_level[lvl]:
            spent += 1
            if ev(terms, vals):
                ok = False
                break
        if stats is not None:
            stats["evaluations"] = spent
        if spent > budget:
            raise BudgetExceeded(f"search exceeded {budget} equation evaluations")
        if not ok:
            continue
        if lvl == n - 1:
            yield dict(zip(order, vals))
        else:
            lvl += 1


def greedy_order(system: PolySystem, variables: list[str]) -> list[str]:
    """Order variables so that equations become fully bound as early as
    possible (better pruning; loses lexicographic witness order)."""
    pending = [set(eq.variables()) for eq in system.equations]
    rank = {v: n for n, v in enumerate(variables)}
    left = set(variables)
    order = []
    while left:
        def score(v):
            closes = sum(1 for s in pending if s == {v})
            touches = sum(1 for s in pending if v in s)
            return (-closes, -touches, rank[v])
        v = min(left, key=score)
        order.append(v)
        left.discard(v)
        for s_ in pending:
            s_.discard(v)
        pending = [s_ for s_ in pending if s_]
    return order


def brute_force(system: PolySystem, F: FieldSpec, mode: str = "first",
                budget: int = DEFAULT_BUDGET, order: str = "lex") -> SearchResult:
    """Exhaustive search; modes ``first``, ``all`` and ``count``.

    Variables that occur in no equation are free: they are 0 in ``first``
    witnesses, enumerated in ``all`` and multiply the ``count`` by q each.
    ``order="greedy"`` reorders the search for speed; the ``first`` witness is
    then no longer the lexicographically smallest one.
    """
    if mode not in ("first", "all", "count"):
        raise ValueError(f"unknown mode {mode!r}")
    if order not in ("lex", "greedy"):
        raise ValueError(f"unknown order {order!r}")
    used = system.used_variables()
    if mode == "all":
        names = list(system.variables)
    else:
        names = [v for v in system.variables if v in used]
    if order == "greedy":
        names = greedy_order(system, names)
    order = names
    free = [v for v in system.variables if v not in order]
    stats = {"evaluations": 0}
    solutions: list[dict[str, int]] = []
    count = 0
    for sol in search(system, F, order, budget, stats):
        count += 1
        if mode != "count":
            full = {v: sol.get(v, 0) for v in system.variables}
            solutions.append(full)
            if mode == "first":
                break
    if mode == "count":
        count *= F.q ** len(free)
    return SearchResult(solutions, count, stats["evaluations"])


@dataclass
class SolveReport:
    solvable: bool
    verdict: str
    reason: str
    solution: Solution | None = None
    simplified: SimplifyResult | None = field(default=None, repr=False)


def solvable_over(prob: Problem, F: FieldSpec, budget: int = DEFAULT_BUDGET,
                  depth: int = DEFAULT_DEPTH, width: int = DEFAULT_WIDTH,
                  forest: Forest | None = None) -> SolveReport:
    """Path-gain pipeline: equations, simplification, characteristic check,
    search on the reduced system, lift to all path gains."""
    if forest is None:
        forest = transform(prob, topo_sort(prob))
    try:
        system = build_path_system(prob, forest)
    except UnsatisfiableDemand as exc:
        return SolveReport(False, "unsolvable", str(exc))
    try:
        res = branch_analyze(system, depth, width)
    except BranchBudgetExceeded:
        res = linear_eliminate(system)
    if any(c % F.p for c in res.constants) or not admits(res.verdict, F.p):
        return SolveReport(False, res.verdict_text,
                           f"characteristic {F.p} excluded", simplified=res)
    found = brute_force(res.reduced, F, "first", budget)
    if not found.solutions:
        return SolveReport(False, res.verdict_text,
                           f"reduced system has no solution over {F}", simplified=res)
    full = lift_solution(res, F, found.solutions[0])
    return SolveReport(True, res.verdict_text, "solution found", Solution(F, full), res)


def system_solvable(system: PolySystem, F: FieldSpec, budget: int = DEFAULT_BUDGET) -> bool:
    return bool(brute_force(system, F, "first", budget).solutions)


__all__ = ["Solution", "SearchResult", "SolveReport", "brute_force", "search",
           "solvable_over", "system_solvable", "verdict_str"]
