"""Scalar linear network coding through path-gain polynomial systems.

Typical pipeline::

    prob = problem_load("butterfly.json")
    system = build_path_system(prob)
    result = branch_analyze(system)
    report = solvable_over(prob, parse_field("4"))
    code = derive_code(prob, None, report.solution)
"""
from .equations import PolySystem, build_km_system, build_path_system
from .forest import Forest, transform
from .galois import FieldElem, FieldSpec, field_make, parse_field
from .network import Problem, make_problem, problem_load, topo_sort
from .poly import Poly, parse_poly
from .recover import NetworkCode, derive_code, verify_code
from .simplify import SimplifyResult, branch_analyze, lift_solution, linear_eliminate
from .solve import Solution, brute_force, solvable_over

__version__ = "0.1.0"

__all__ = [
    "FieldElem", "FieldSpec", "Forest", "NetworkCode", "Poly", "PolySystem", "Problem",
    "SimplifyResult", "Solution", "branch_analyze", "brute_force", "build_km_system",
    "build_path_system", "derive_code", "field_make", "lift_solution", "linear_eliminate",
    "make_problem", "parse_field", "parse_poly", "problem_load", "solvable_over",
    "topo_sort", "transform", "verify_code",
]
