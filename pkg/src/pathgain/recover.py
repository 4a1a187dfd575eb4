"""Turn a path-gain solution into edge-to-edge coding coefficients, and check
a code by forward propagation.

Recovery walks the nodes from the sources downwards.  For an edge e out of v,
the rows of the flow matrix F_e are the coding vectors carried by the copies
of e in the forest.  Edge compatibility makes F_e rank one, so every row is a
multiple of one representative row f_e, and the multipliers become the
scaling vector c_e consumed further down.
"""
from __future__ import annotations

from dataclasses import dataclass, field

from .equations import build_path_system
from .errors import NotASolution, ParseError, RankViolation
from .forest import Forest, transform
from .galois import FieldSpec, parse_field
from .network import Problem, sink_edge_id, source_edge_id, topo_sort
from .solve import Solution

Vector = tuple[int, ...]


@dataclass
class NetworkCode:
    field: FieldSpec
    coeffs: dict[tuple[str, str], int]
    decode: dict[tuple[int, str], int]           # (sink node, input edge) -> factor
    edge_functions: dict[str, Vector] = field(default_factory=dict)
    scales: dict[str, Vector] = field(default_factory=dict)
    max_rank: int = 0

    def coeff(self, e_in: str, e_out: str):
        return self.field.elem(self.coeffs[e_in, e_out])

    def to_dict(self) -> dict:
        el = lambda x: str(self.field.elem(x))  # noqa: E731
        return {
            "field": self.field.name,
            "coeffs": [{"from": a, "to": b, "value": el(v)}
                       for (a, b), v in self.coeffs.items()],
            "decode": [{"sink": t, "edge": e, "value": el(v)}
                       for (t, e), v in self.decode.items()],
            "edge_functions": {e: [el(x) for x in f] for e, f in self.edge_functions.items()},
        }

    @classmethod
    def from_dict(cls, data: dict) -> "NetworkCode":
        try:
            F = parse_field(str(data["field"]))
            idx = lambda s: F.index(F.parse(str(s)))  # noqa: E731
            coeffs = {(c["from"], c["to"]): idx(c["value"]) for c in data["coeffs"]}
            decode = {(int(d["sink"]), d["edge"]): idx(d["value"]) for d in data["decode"]}
            funcs = {e: tuple(idx(x) for x in f)
                     for e, f in data.get("edge_functions", {}).items()}
        except (KeyError, TypeError, AttributeError) as exc:
            raise ParseError(f"malformed network code: {exc}") from exc
        return cls(F, coeffs, decode, funcs)


def _unit(n: int, i: int) -> Vector:
    return tuple(1 if k == i else 0 for k in range(1, n + 1))


def derive_code(prob: Problem, forest: Forest | None, solution: Solution) -> NetworkCode:
    F = solution.field
    if forest is None:
        forest = transform(prob, topo_sort(prob))
    values = solution.assignment
    missing = [lv.name for lv in forest.leaf_vars if lv.name not in values]
    if missing:
        raise NotASolution(f"no value for path gains {missing[:5]}")
    system = build_path_system(prob, forest)
    bad = [eq for eq in system.equations if eq.evaluate(F, values)]
    if bad:
        raise NotASolution(f"solution violates {bad[0].to_text()} = 0")

    n_src = len(prob.sources)
    zero = (0,) * n_src
    src_index = prob.source_index
    f: dict[str, Vector] = {}
    c: dict[str, list[int]] = {}
    coeffs: dict[tuple[str, str], int] = {}
    max_rank = 0

    def position(tree_edge: int) -> int:
        return forest.copy_position(tree_edge)

    for v in reversed(forest.order):
        ins = prob.in_edges(v)
        if v in src_index:
            i = src_index[v]
            for e in prob.out_edges(v):
                f[e] = _unit(n_src, i)
                leaf_val = []
                for te in forest.R_e[e]:
                    lv = forest.var_by_leaf[forest.edges[te].tail]
                    leaf_val.append(values[lv.name])
                c[e] = leaf_val
                coeffs[source_edge_id(i), e] = 1
            continue
        if v in prob.sink_nodes:
            continue
        for e in prob.out_edges(v):
            n_rows = len(forest.R_e[e])
            rows = [[0] * n_src for _ in range(n_rows)]
            slices = {}
            for e_in in ins:
                c_in = [c[e_in][position(te)] for te in forest.R_ep_e(e_in, e)]
                slices[e_in] = c_in
                for r, scale in enumerate(c_in):
                    if scale:
                        row = rows[r]
                        for k, x in enumerate(f[e_in]):
                            row[k] = F.add_i(row[k], F.mul_i(scale, x))
            pick = next((r for r, row in enumerate(rows) if any(row)), None)
            if pick is None:
                f[e] = zero
                c[e] = [0] * n_rows
                for e_in in ins:
                    coeffs[e_in, e] = 0
                continue
            fe = tuple(rows[pick])
            f[e] = fe
            for e_in in ins:
                coeffs[e_in, e] = slices[e_in][pick]
            lead = next(k for k, x in enumerate(fe) if x)
            inv = F.inv_i(fe[lead])
            scale_vec = []
            for r, row in enumerate(rows):
                s = F.mul_i(row[lead], inv)
                if any(row[k] != F.mul_i(s, fe[k]) for k in range(n_src)):
                    raise RankViolation(
                        f"flow matrix of {e} has independent rows {pick} and {r}")
                scale_vec.append(s)
            max_rank = max(max_rank, 1)
            c[e] = scale_vec

    decode: dict[tuple[int, str], int] = {}
    for j, sink in enumerate(prob.sinks, 1):
        for e in prob.in_edges(sink.node):
            factor = c[e][0] if c.get(e) else 0
            decode[sink.node, e] = factor
            coeffs[e, sink_edge_id(j)] = factor
    return NetworkCode(F, coeffs, decode, dict(f), {e: tuple(v) for e, v in c.items()},
                       max_rank)


@dataclass
class SinkReport:
    sink: int
    demand: int
    output: Vector
    passed: bool

    def to_dict(self, F: FieldSpec) -> dict:
        return {"sink": self.sink, "demand": self.demand, "pass": self.passed,
                "output": [str(F.elem(x)) for x in self.output]}


def verify_code(prob: Problem, code: NetworkCode, F: FieldSpec | None = None) -> list[SinkReport]:
    """Propagate coding vectors forward using only the coefficients."""
    F = F or code.field
    n_src = len(prob.sources)
    f: dict[str, Vector] = {}
    src_index = prob.source_index

    def combine(pairs) -> Vector:
        acc = [0] * n_src
        for a, vec in pairs:
            if a:
                for k, x in enumerate(vec):
                    acc[k] = F.add_i(acc[k], F.mul_i(a, x))
        return tuple(acc)

    for v in reversed(topo_sort(prob)):
        ins = prob.in_edges(v)
        inputs = [(e_in, f[e_in]) for e_in in ins]
        if v in src_index:
            i = src_index[v]
            inputs.append((source_edge_id(i), _unit(n_src, i)))
        for e in prob.out_edges(v):
            f[e] = combine((code.coeffs.get((e_in, e), 0), vec) for e_in, vec in inputs)

    out = []
    for sink in prob.sinks:
        got = combine((code.decode.get((sink.node, e), 0), f[e])
                      for e in prob.in_edges(sink.node))
        out.append(SinkReport(sink.node, sink.demand, got, got == _unit(n_src, sink.demand)))
    return out
