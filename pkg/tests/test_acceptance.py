"""End-to-end acceptance checks, one test per criterion.

Each test records a single PASS/FAIL line that is repeated in the pytest
terminal summary.
"""
import time

from conftest import fixture_path, record
from pathgain.equations import PolySystem, build_km_system, build_path_system
from pathgain.errors import BranchBudgetExceeded, UnsatisfiableDemand
from pathgain.forest import transform
from pathgain.fuzz import FAMILIES, bench, compare_oracle, corpus_problem
from pathgain.galois import parse_field
from pathgain.io import read_json
from pathgain.network import problem_load
from pathgain.poly import parse_poly
from pathgain.recover import derive_code, verify_code
from pathgain.simplify import admits, branch_analyze, drop_unused, lift_solution, linear_eliminate
from pathgain.solve import Solution, brute_force, solvable_over

ORACLE_SEED = 42
ORACLE_TRIALS = 200
SCALE_SEED = 158        # one of the heavier draws: about 26k equations before simplification

TO_REFERENCE = {"b3": "b4", "b4": "b3", "b5": "b6", "b6": "b5"}
REFERENCE_LINEAR = ["a1 + a2 - 1", "b1", "a3 + a4", "b2 - 1", "a5 - 1", "b3 + b4", "a6",
                    "b5 + b6 - 1"]
REFERENCE_QUADRATIC = ["a2*b2 - a4*b1", "a2*b3 - a5*b1", "a2*b5 - a6*b1", "a4*b3 - a5*b2",
                       "a4*b5 - a6*b2", "a5*b5 - a6*b3"]


def canon(polys):
    return {p.canonical() for p in polys}


def butterfly():
    return problem_load(fixture_path("butterfly.json"))


def test_criterion_1_butterfly_counts():
    t0 = time.perf_counter()
    prob = butterfly()
    forest = transform(prob)
    system = build_path_system(prob, forest)
    km = build_km_system(prob)
    names = {g: TO_REFERENCE.get(a, a) for g, a in forest.aliases().items()}
    renamed = system.renamed(names)
    lin = [e for e in renamed.equations if e.degree == 1]
    quad = [e for e in renamed.equations if e.degree == 2]
    elapsed = time.perf_counter() - t0
    ok = (len(system.variables) == 12 and len(lin) == 8 and len(quad) == 6
          and canon(lin) == canon(map(parse_poly, REFERENCE_LINEAR))
          and canon(quad) == canon(map(parse_poly, REFERENCE_QUADRATIC))
          and (len(km), len(km.variables)) == (8, 10) and elapsed < 1)
    record(1, ok, f"path {len(system.variables)} vars {len(lin)}+{len(quad)} eqs, "
                  f"edge-gain {len(km)} eqs in {len(km.variables)} vars, {elapsed:.3f}s")
    assert ok


def test_criterion_2_butterfly_simplification():
    t0 = time.perf_counter()
    system = build_path_system(butterfly())
    step1, _ = drop_unused(system)
    res = linear_eliminate(system)
    elapsed = time.perf_counter() - t0
    eqs = res.reduced.equations
    x, y = res.reduced.variables if len(res.reduced.variables) == 2 else (None, None)
    ok = (len(eqs) == 1 and x is not None and eqs[0] == parse_poly(f"{x}*{y} - 1")
          and len(step1.variables) == 8 and step1.count_by_degree() == {1: 4, 2: 6}
          and elapsed < 1)
    record(2, ok, f"reduced to '{eqs[0].to_text() if eqs else ''} = 0', step 1 has "
                  f"{len(step1.variables)} vars {step1.count_by_degree()}, {elapsed:.3f}s")
    assert ok


def test_criterion_3_characteristic_two():
    t0 = time.perf_counter()
    system = PolySystem.from_dict(read_json(fixture_path("char2_system.json")))
    res = branch_analyze(system)
    n3 = brute_force(system, parse_field("3"), "count").count
    n5 = brute_force(system, parse_field("5"), "count").count
    gf2 = brute_force(system, parse_field("2"), "all").solutions
    ones = {v: 1 for v in system.variables}
    elapsed = time.perf_counter() - t0
    ok = res.verdict == 2 and n3 == 0 and n5 == 0 and ones in gf2 and elapsed < 5
    record(3, ok, f"verdict {res.verdict_text}, solutions GF(3)={n3} GF(5)={n5} "
                  f"GF(2)={len(gf2)} incl. all-ones={ones in gf2}, {elapsed:.3f}s")
    assert ok


def test_criterion_4_recovery():
    t0 = time.perf_counter()
    prob = butterfly()
    forest = transform(prob)
    F = parse_field("2^2")
    one, a, a2 = 1, 2, 3
    witness = {"a1": one, "a5": one, "b2": one, "b5": one, "a2": 0, "a6": 0, "b1": 0, "b6": 0,
               "a3": a, "a4": a, "b3": a2, "b4": a2}
    by_alias = {al: g for g, al in forest.aliases().items()}
    code = derive_code(prob, forest, Solution(F, {by_alias[k]: v for k, v in witness.items()}))
    elapsed = time.perf_counter() - t0
    checks = {
        "f_e3": code.edge_functions["e3"] == (a, one),
        "c_e3": code.scales["e3"] == (0, one, a2, 0),
        "a_e1e3": code.coeffs["e1", "e3"] == a, "a_e2e3": code.coeffs["e2", "e3"] == one,
        "a_e3e6": code.coeffs["e3", "e6"] == one, "a_e3e7": code.coeffs["e3", "e7"] == a2,
        "a_e4e8": code.coeffs["e4", "e8"] == one, "a_e6e8": code.coeffs["e6", "e8"] == 0,
        "a_e4e9": code.coeffs["e4", "e9"] == a, "a_e6e9": code.coeffs["e6", "e9"] == one,
        "f_e8": code.edge_functions["e8"] == (one, 0),
        "f_e9": code.edge_functions["e9"] == (0, one),
        "decodes": all(r.passed for r in verify_code(prob, code)),
    }
    bad = [k for k, v in checks.items() if not v]
    ok = not bad and elapsed < 1
    record(4, ok, f"{len(checks) - len(bad)}/{len(checks)} values match, {elapsed:.3f}s")
    assert ok


def test_criterion_5_oracle_equivalence():
    t0 = time.perf_counter()
    parts, ok = [], True
    for family in FAMILIES:
        for fname in ("2", "3"):
            rep = compare_oracle(ORACLE_TRIALS, ORACLE_SEED, parse_field(fname), family=family)
            ok &= rep.disagree == 0 and rep.witness_failures == 0 and len(rep.compared) > 0
            m = rep.matrix()
            parts.append(f"{family} GF({fname}) {rep.agree}/{len(rep.compared)} agree "
                         f"[{m['yes/yes']} yes, {m['no/no']} no], {rep.skipped} over budget, "
                         f"{rep.witness_failures} witness failures")
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 300
    record(5, ok, "; ".join(parts) + f", {elapsed:.1f}s")
    assert ok


def test_criterion_6_invariants():
    fields = [parse_field(f) for f in ("2", "3", "2^2")]
    degree_bad = rank_bad = lift_bad = decode_bad = lifts = 0
    cases = [(t, family) for family in FAMILIES for t in range(ORACLE_TRIALS)]
    for t, family in cases:
        prob = corpus_problem(ORACLE_SEED, t, family)
        forest = transform(prob)
        try:
            system = build_path_system(prob, forest)
        except UnsatisfiableDemand:
            continue
        degree_bad += system.max_degree > 2
        for F in fields:
            report = solvable_over(prob, F, forest=forest)
            if not report.solvable:
                continue
            lifts += 1
            lift_bad += not system.is_satisfied(F, report.solution.assignment)
            code = derive_code(prob, forest, report.solution)
            rank_bad += code.max_rank > 1
            decode_bad += not all(r.passed for r in verify_code(prob, code))
    ok = degree_bad == rank_bad == lift_bad == decode_bad == 0
    record(6, ok, f"{len(cases)} instances, {lifts} lifted solutions; violations: "
                  f"degree {degree_bad}, rank {rank_bad}, lift {lift_bad}, decode {decode_bad}")
    assert ok


def _reduced_verdict(system, F):
    try:
        res = branch_analyze(system)
    except BranchBudgetExceeded:
        res = linear_eliminate(system)
    if any(c % F.p for c in res.constants) or not admits(res.verdict, F.p):
        return False
    found = brute_force(res.reduced, F, "first").solutions
    if found:
        lift_solution(res, F, found[0])
    return bool(found)


def test_criterion_7_simplification_preserves_solvability():
    t0 = time.perf_counter()
    fields = [parse_field(f) for f in ("2", "3", "2^2")]
    instances = []
    for family in FAMILIES:
        t, start = 0, len(instances)
        while len(instances) - start < 100:
            try:
                instances.append(build_path_system(corpus_problem(7, t, family)))
            except UnsatisfiableDemand:
                pass
            t += 1
    agree = total = solvable = 0
    for system in instances:
        for F in fields:
            expect = bool(brute_force(system, F, "first", order="greedy").solutions)
            got = _reduced_verdict(system, F)
            total += 1
            agree += expect == got
            solvable += expect
    elapsed = time.perf_counter() - t0
    ok = agree == total and elapsed < 300
    record(7, ok, f"{agree}/{total} agree over {len(instances)} instances x 3 fields "
                  f"({solvable} solvable, {total - solvable} not), {elapsed:.1f}s")
    assert ok


def test_criterion_8_scale_smoke():
    t0 = time.perf_counter()
    out = bench(87, 161, 5, 10, seed=SCALE_SEED)
    elapsed = time.perf_counter() - t0
    ok = "equations_after" in out and elapsed < 10
    record(8, ok, f"{out.get('leaf_variables')} path gains, {out.get('equations_before')} -> "
                  f"{out.get('equations_after')} equations, verdict {out.get('verdict')}, "
                  f"{elapsed:.2f}s")
    assert ok
