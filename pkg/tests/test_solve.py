import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from oracle import all_solutions
from pathgain.equations import PolySystem, build_path_system
from pathgain.errors import BudgetExceeded, ParseError
from pathgain.galois import parse_field
from pathgain.network import make_problem
from pathgain.poly import Poly, parse_poly
from pathgain.solve import Solution, brute_force, solvable_over, system_solvable

VARS = ["x1", "x2", "x3"]
monos = st.lists(st.sampled_from(VARS), max_size=2).map(tuple)
equations = st.dictionaries(monos, st.integers(-2, 2), min_size=1, max_size=4).map(Poly)
systems = st.lists(equations, min_size=0, max_size=4).map(lambda eqs: PolySystem(VARS, eqs))


@settings(max_examples=150, deadline=None)
@given(systems, st.sampled_from(["2", "3", "2^2"]))
def test_all_and_count_match_naive(system, fname):
    F = parse_field(fname)
    expect = all_solutions(system, F)
    found = brute_force(system, F, "all")
    assert found.solutions == expect          # same lexicographic order
    assert brute_force(system, F, "count").count == len(expect)
    for order in ("lex", "greedy"):
        first = brute_force(system, F, "first", order=order).solutions
        assert bool(first) == bool(expect)
        if first:
            assert first[0] in expect
    if expect:
        assert brute_force(system, F, "first").solutions[0] == expect[0]


def test_butterfly_counts_per_field(butterfly):
    # the system reduces to x*y = 1 with all other gains determined: q - 1 solutions
    system = build_path_system(butterfly)
    for fname, expect in (("2", 1), ("3", 2), ("2^2", 3), ("5", 4)):
        assert brute_force(system, parse_field(fname), "count").count == expect


def test_free_variables():
    s = PolySystem(["x", "y"], [parse_poly("x - 1")])
    F = parse_field("3")
    assert brute_force(s, F, "count").count == 3
    assert brute_force(s, F, "first").solutions == [{"x": 1, "y": 0}]
    assert len(brute_force(s, F, "all").solutions) == 3


def test_constant_equation():
    s = PolySystem(["x"], [Poly.const(2)])
    assert not system_solvable(s, parse_field("3"))
    assert system_solvable(s, parse_field("2"))


def test_budget():
    s = PolySystem([f"x{k}" for k in range(12)], [Poly.sum_of(f"x{k}" for k in range(12)) - 1])
    with pytest.raises(BudgetExceeded):
        brute_force(s, parse_field("3"), "count", budget=100)


def test_bad_mode():
    with pytest.raises(ValueError):
        brute_force(PolySystem(), parse_field("2"), "some")


def test_solvable_over_butterfly(butterfly):
    for fname in ("2", "3", "2^2"):
        F = parse_field(fname)
        report = solvable_over(butterfly, F)
        assert report.solvable
        system = build_path_system(butterfly)
        assert system.is_satisfied(F, report.solution.assignment)


def test_solvable_over_unreachable_demand():
    prob = make_problem([1, 2, 3], [("a", 1, 3)], [1, 2], [(3, 2)])
    report = solvable_over(prob, parse_field("2"))
    assert not report.solvable


def test_solution_roundtrip():
    F = parse_field("2^2")
    sol = Solution(F, {"x": 3, "y": 0})
    d = sol.to_dict()
    assert d == {"field": "2^2", "assignment": {"x": "1,1", "y": "0,0"}}
    assert Solution.from_dict(d) == sol
    with pytest.raises(ParseError):
        Solution.from_dict({"assignment": {}})
