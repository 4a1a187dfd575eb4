"""Simplification of degree <= 2 systems with integer coefficients.

Only unit pivots (coefficient +1 or -1) are ever used, so every step is valid
in all characteristics at once.  Constant equations ``c = 0`` left over by
elimination are turned into a characteristic verdict, encoded as an integer:

* ``0``: no constraint (every characteristic admissible),
* ``1``: unsolvable in every field,
* ``n > 1``: only characteristics dividing ``n`` are admissible.

Branch verdicts are combined with lcm, which is exact on the level of
admissible prime sets (the primes of ``lcm(a, b)`` are those of a or b).
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations
from math import gcd, lcm

from .equations import PolySystem
from .errors import (
    BranchBudgetExceeded,
    InadmissibleCharacteristic,
    LiftInconsistency,
    NotASolution,
    ParseError,
)
from .galois import FieldSpec
from .poly import Poly, var_key

NO_CONSTRAINT = 0
UNSOLVABLE = 1

DEFAULT_DEPTH = 4
DEFAULT_WIDTH = 64


def verdict_str(n: int) -> str:
    if n == NO_CONSTRAINT:
        return "no-constraint"
    if n == UNSOLVABLE:
        return "unsolvable"
    return f"chars-dividing:{n}"


def verdict_from_str(text: str) -> int:
    if text == "no-constraint":
        return NO_CONSTRAINT
    if text == "unsolvable":
        return UNSOLVABLE
    if text.startswith("chars-dividing:"):
        return int(text.split(":", 1)[1])
    raise ParseError(f"unknown verdict {text!r}")


def admits(verdict: int, p: int) -> bool:
    """Whether characteristic p is admissible under the verdict."""
    if verdict == NO_CONSTRAINT:
        return True
    return verdict % p == 0 and verdict != UNSOLVABLE


def constants_verdict(constants) -> int:
    g = 0
    for c in constants:
        g = gcd(g, c)
    return g


@dataclass(frozen=True)
class Step:
    """One reduction step, replayed backwards by :func:`lift_solution`.

    ``eliminate``: var := poly.  ``drop``: poly = 0 is the removed equation,
    solvable for var.  ``free``: var occurs nowhere any more (poly is None).
    """

    kind: str
    var: str
    poly: Poly | None
    tag: str = ""

    def to_dict(self) -> dict:
        return {"kind": self.kind, "var": self.var,
                "poly": None if self.poly is None else self.poly.to_json(),
                "tag": self.tag}

    @classmethod
    def from_dict(cls, d: dict) -> "Step":
        poly = None if d.get("poly") is None else Poly.from_json(d["poly"])
        return cls(d["kind"], d["var"], poly, d.get("tag", ""))


@dataclass
class SimplifyResult:
    original: PolySystem
    reduced: PolySystem
    steps: list[Step]
    constants: list[int]
    verdict: int
    branch_log: list[str] = field(default_factory=list)

    @property
    def trace(self) -> list[tuple[str, Poly, str]]:
        return [(s.var, s.poly, s.tag) for s in self.steps if s.kind == "eliminate"]

    @property
    def dropped(self) -> list[tuple[str, Poly | None]]:
        return [(s.var, s.poly) for s in self.steps if s.kind != "eliminate"]

    @property
    def verdict_text(self) -> str:
        return verdict_str(self.verdict)

    def to_dict(self) -> dict:
        return {
            "reduced": self.reduced.to_dict(),
            "trace": [{"var": v, "expr": p.to_json(), "tag": t} for v, p, t in self.trace],
            "verdict": self.verdict_text,
            "constants": list(self.constants),
            "steps": [s.to_dict() for s in self.steps],
            "branch_log": list(self.branch_log),
            "original": self.original.to_dict(),
        }

    @classmethod
    def from_dict(cls, d: dict) -> "SimplifyResult":
        try:
            return cls(
                PolySystem.from_dict(d["original"]),
                PolySystem.from_dict(d["reduced"]),
                [Step.from_dict(s) for s in d["steps"]],
                [int(c) for c in d.get("constants", [])],
                verdict_from_str(d["verdict"]),
                list(d.get("branch_log", [])),
            )
        except (KeyError, TypeError, ValueError) as exc:
            raise ParseError(f"malformed simplify result: {exc}") from exc


class _Work:
    """Mutable equation store with a variable -> equations index."""

    def __init__(self, system: PolySystem):
        self.eqs: dict[int, Poly] = {}
        self.tags: dict[int, str] = {}
        self.occ: dict[str, set[int]] = {}
        self.seen: dict[Poly, int] = {}
        self.constants: list[int] = []
        self.linear: set[int] = set()
        self.qkeys: dict[int, tuple] = {}
        self.next_id = 0
        for eq, tag in zip(system.equations, system.tags):
            self.add(eq, tag)

    def add(self, eq: Poly, tag: str) -> None:
        eq = eq.canonical()
        if not eq or eq in self.seen:
            return
        if eq.is_constant:
            c = abs(eq.constant)
            if c not in self.constants:
                self.constants.append(c)
            return
        k = self.next_id
        self.next_id += 1
        self.eqs[k], self.tags[k], self.seen[eq] = eq, tag, k
        if eq.degree == 1:
            self.linear.add(k)
        for v in eq.variables():
            self.occ.setdefault(v, set()).add(k)

    def remove(self, k: int) -> tuple[Poly, str]:
        eq, tag = self.eqs.pop(k), self.tags.pop(k)
        del self.seen[eq]
        self.linear.discard(k)
        self.qkeys.pop(k, None)
        for v in eq.variables():
            self.occ[v].discard(k)
        return eq, tag

    def substitute(self, var: str, value: Poly) -> None:
        for k in sorted(self.occ.get(var, ())):
            eq, tag = self.remove(k)
            self.add(eq.substitute(var, value), tag)

    def system(self, variables) -> PolySystem:
        order = sorted(self.eqs)
        used = {v for k in order for v in self.eqs[k].variables()}
        return PolySystem([v for v in variables if v in used],
                          [self.eqs[k] for k in order], [self.tags[k] for k in order])


def _droppable(work: _Work, var: str) -> int | None:
    ks = work.occ.get(var)
    if not ks or len(ks) != 1:
        return None
    k = next(iter(ks))
    eq = work.eqs[k]
    if eq.degree == 1 and abs(eq.linear_coeff(var)) == 1:
        return k
    return None


def _drop_pass(work: _Work, variables, steps: list[Step]) -> bool:
    rank = {v: n for n, v in enumerate(variables)}
    changed = True
    any_change = False
    while changed:
        changed = False
        # only variables of linear equations can qualify
        cands = {v for k in work.linear for v in work.eqs[k].variables()}
        for v in sorted(cands, key=lambda v: rank.get(v, len(rank))):
            k = _droppable(work, v)
            if k is not None:
                eq, tag = work.remove(k)
                steps.append(Step("drop", v, eq, tag))
                changed = any_change = True
    return any_change


def drop_unused(system: PolySystem) -> tuple[PolySystem, list[tuple[str, Poly]]]:
    """Remove variables that occur in exactly one linear equation (with a unit
    coefficient) together with that equation, to fixpoint."""
    work = _Work(system)
    steps: list[Step] = []
    _drop_pass(work, system.variables, steps)
    reduced = work.system(system.variables)
    for c in work.constants:
        reduced.add(Poly.const(c), "constant")
    return reduced, [(s.var, s.poly) for s in steps]


def _pick_pivot(work: _Work, variables) -> tuple[int, str] | None:
    rank = {v: n for n, v in enumerate(variables)}
    best = None
    for k in work.linear:
        eq = work.eqs[k]
        for v in eq.variables():
            if abs(eq.linear_coeff(v)) != 1:
                continue
            key = (len(work.occ[v]), rank.get(v, len(rank)), var_key(v), k)
            if best is None or key < best[0]:
                best = (key, k, v)
    return None if best is None else (best[1], best[2])


def _finish_free(work: _Work, variables, steps: list[Step]) -> None:
    stepped = {s.var for s in steps}
    for v in variables:
        if v not in stepped and not work.occ.get(v):
            steps.append(Step("free", v, None))


def _quadratic_key(eq: Poly):
    """Quadratic part divided by its content, plus that content.

    ``eq`` is canonical, so its leading (quadratic) coefficient is positive
    and equations whose quadratic parts differ only in sign share a key.
    """
    quad = {m: c for m, c in eq.terms.items() if len(m) == 2}
    if not quad:
        return None, 0
    g = 0
    for c in quad.values():
        g = gcd(g, c)
    return Poly({m: c // g for m, c in quad.items()}, _clean=True), g


def _derive_linear(work: _Work) -> bool:
    """Add integer combinations of two equations whose quadratic parts cancel.

    Such combinations are implied by the system in every characteristic, so
    adding them never changes the solution set.
    """
    groups: dict[Poly, list[tuple[int, int]]] = {}
    for k in sorted(work.eqs):
        if k not in work.qkeys:
            work.qkeys[k] = _quadratic_key(work.eqs[k])
        key, g = work.qkeys[k]
        if key is not None:
            groups.setdefault(key, []).append((k, g))
    before = (len(work.eqs), len(work.constants))
    for members in groups.values():
        (k1, g1), rest = members[0], members[1:]
        for k2, g2 in rest:
            m = lcm(g1, g2)
            combo = work.eqs[k1] * (m // g1) - work.eqs[k2] * (m // g2)
            tag = f"derived:{work.tags[k1]}|{work.tags[k2]}"
            work.add(combo, tag)
    return (len(work.eqs), len(work.constants)) != before


def linear_eliminate(system: PolySystem) -> SimplifyResult:
    """Unit-pivot Gaussian-style elimination interleaved with pruning."""
    work = _Work(system)
    variables = list(system.variables)
    steps: list[Step] = []
    while True:
        _drop_pass(work, variables, steps)
        pivot = _pick_pivot(work, variables)
        if pivot is None:
            if _derive_linear(work):
                continue
            break
        k, v = pivot
        eq, tag = work.remove(k)
        c = eq.linear_coeff(v)
        # c*v + rest = 0 with c = +-1, so v = -c*rest
        value = (eq - Poly.monomial([v], c)) * (-c)
        steps.append(Step("eliminate", v, value, tag))
        work.substitute(v, value)
    _finish_free(work, variables, steps)
    reduced = work.system(variables)
    constants = sorted(set(work.constants))
    return SimplifyResult(system, reduced, steps, constants, constants_verdict(constants))


# -- case analysis ---------------------------------------------------------------

_PAIR_LIMIT = 256


def _single_term(eq: Poly) -> tuple[int, tuple] | None:
    if len(eq.terms) == 1:
        (mono, c), = eq.terms.items()
        if mono:
            return c, mono
    return None


def _branch_candidates(system: PolySystem) -> list[tuple[int, tuple, str]]:
    out = []
    for eq in system.equations:
        st = _single_term(eq)
        if st:
            out.append((*st, f"{eq.to_text()} = 0"))
    eqs = system.equations
    if len(eqs) <= _PAIR_LIMIT:
        for e1, e2 in combinations(eqs, 2):
            for combo, op in ((e1 + e2, "+"), (e1 - e2, "-")):
                st = _single_term(combo)
                if st:
                    out.append((*st, f"({e1.to_text()}) {op} ({e2.to_text()})"))
    # prefer large constants (they give a characteristic branch), then small monomials
    out.sort(key=lambda t: (abs(t[0]) == 1, len(set(t[1])), tuple(var_key(v) for v in t[1])))
    return out


def branch_analyze(system: PolySystem, depth: int = DEFAULT_DEPTH,
                   width: int = DEFAULT_WIDTH) -> SimplifyResult:
    """Eliminate, then refine the characteristic verdict by case splits on
    equations of the form c*M = 0: either the characteristic divides c or
    some variable of M vanishes."""
    base = linear_eliminate(system)
    log: list[str] = []
    budget = [width]

    def explore(sys_: PolySystem, level: int, indent: str) -> int:
        res = linear_eliminate(sys_)
        n0 = res.verdict
        if n0 == UNSOLVABLE:
            log.append(f"{indent}contradiction")
            return UNSOLVABLE
        cands = _branch_candidates(res.reduced)
        if not cands:
            return n0
        if level >= depth:
            log.append(f"{indent}depth limit, verdict {verdict_str(n0)}")
            return n0
        c, mono, origin = cands[0]
        log.append(f"{indent}split on {origin}  =>  {Poly.monomial(mono, c).to_text()} = 0")
        combined = UNSOLVABLE
        if abs(c) > 1:
            v = gcd(n0, abs(c))
            log.append(f"{indent}  char | {abs(c)}: {verdict_str(v)}")
            combined = lcm(combined, v)
        for x in sorted(set(mono), key=var_key):
            budget[0] -= 1
            if budget[0] < 0:
                raise BranchBudgetExceeded(
                    f"case analysis exceeded width {width}", base.verdict)
            log.append(f"{indent}  {x} = 0:")
            sub = PolySystem(list(res.reduced.variables),
                             [eq.substitute(x, Poly.const(0)) for eq in res.reduced.equations],
                             list(res.reduced.tags))
            v = gcd(n0, explore(sub, level + 1, indent + "    "))
            log.append(f"{indent}  {x} = 0 gives {verdict_str(v)}")
            combined = lcm(combined, v)
        return combined

    verdict = explore(base.reduced, 0, "")
    verdict = gcd(base.verdict, verdict)
    return SimplifyResult(base.original, base.reduced, base.steps, base.constants,
                          verdict, log)


# -- lifting ------------------------------------------------------------------------

def lift_solution(result: SimplifyResult, field_: FieldSpec,
                  partial: dict[str, int]) -> dict[str, int]:
    """Extend an assignment of the reduced variables (field indices) to all
    original variables by replaying the steps backwards."""
    p = field_.p
    if any(c % p for c in result.constants) or not admits(result.verdict, p):
        raise InadmissibleCharacteristic(
            f"characteristic {p} excluded ({result.verdict_text})")
    missing = [v for v in result.reduced.variables if v not in partial]
    if missing:
        raise NotASolution(f"no value for reduced variables {missing}")
    if not result.reduced.is_satisfied(field_, partial):
        raise NotASolution("assignment does not satisfy the reduced system")

    values = dict(partial)

    def ev(poly: Poly) -> int:
        for v in poly.variables():
            values.setdefault(v, 0)
        return poly.evaluate(field_, values)

    for step in reversed(result.steps):
        if step.kind == "free":
            values.setdefault(step.var, 0)
        elif step.kind == "eliminate":
            values[step.var] = ev(step.poly)
        else:
            c = step.poly.linear_coeff(step.var)
            rest = step.poly - Poly.monomial([step.var], c)
            values[step.var] = ev(rest * (-c))
    for v in result.original.variables:
        values.setdefault(v, 0)
    full = {v: values[v] for v in result.original.variables}
    bad = [eq for eq in result.original.equations if eq.evaluate(field_, full)]
    if bad:
        raise LiftInconsistency(f"lifted assignment violates {bad[0].to_text()} = 0")
    return full
