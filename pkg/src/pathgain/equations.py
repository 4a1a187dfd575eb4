"""Polynomial systems for a network coding problem.

Two formulations are built here:

* the path-gain system on the unfolded forest: one linear no-interference
  equation per (sink, reachable source) and quadratic edge-compatibility
  equations that force the copies of every edge to carry proportional flows;
* the edge-to-edge gain system, obtained by symbolic forward propagation of
  coding vectors.  It serves as the independent oracle.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from itertools import combinations

from .errors import ParseError, UnsatisfiableDemand
from .forest import Forest, LeafVar, transform
from .network import Problem, natural_key, sink_edge_id, topo_sort
from .poly import Poly, var_key


@dataclass(frozen=True)
class PathGain:
    i: int
    j: int
    k: int

    @property
    def name(self) -> str:
        return f"g{self.i}_{self.j}_{self.k}"


@dataclass(frozen=True)
class EdgeGain:
    e_in: str
    e_out: str

    @property
    def name(self) -> str:
        return f"al_{self.e_in}_{self.e_out}"


@dataclass
class PolySystem:
    """Equations ``poly = 0`` over an ordered variable list.

    Equations are stored in canonical sign-normalized form and deduplicated on
    insertion; zero polynomials are dropped.
    """

    variables: list[str] = field(default_factory=list)
    equations: list[Poly] = field(default_factory=list)
    tags: list[str] = field(default_factory=list)

    def __post_init__(self):
        eqs, tags = self.equations, self.tags or [""] * len(self.equations)
        self.equations, self.tags = [], []
        self._seen: set = set()
        for eq, tag in zip(eqs, tags):
            self.add(eq, tag)

    def add(self, eq: Poly, tag: str = "") -> bool:
        eq = eq.canonical()
        if not eq or eq in self._seen:
            return False
        self._seen.add(eq)
        self.equations.append(eq)
        self.tags.append(tag)
        return True

    def __len__(self):
        return len(self.equations)

    def __eq__(self, other):
        if not isinstance(other, PolySystem):
            return NotImplemented
        return (self.variables == other.variables and self.equations == other.equations
                and self.tags == other.tags)

    @property
    def max_degree(self) -> int:
        return max((eq.degree for eq in self.equations), default=0)

    def count_by_degree(self) -> dict[int, int]:
        out: dict[int, int] = {}
        for eq in self.equations:
            out[eq.degree] = out.get(eq.degree, 0) + 1
        return out

    def used_variables(self) -> set[str]:
        return {v for eq in self.equations for v in eq.variables()}

    def is_satisfied(self, field_, values: dict[str, int]) -> bool:
        return all(eq.evaluate(field_, values) == 0 for eq in self.equations)

    def renamed(self, mapping: dict[str, str]) -> "PolySystem":
        sub = {old: Poly.var(new) for old, new in mapping.items()}
        return PolySystem(
            [mapping.get(v, v) for v in self.variables],
            [eq.substitute_many(sub) for eq in self.equations],
            list(self.tags),
        )

    def to_text(self) -> str:
        return "\n".join(f"{eq.to_text()} = 0" for eq in self.equations)

    def to_dict(self) -> dict:
        return {
            "variables": list(self.variables),
            "equations": [{"terms": eq.to_json(), "tag": tag}
                          for eq, tag in zip(self.equations, self.tags)],
        }

    @classmethod
    def from_dict(cls, data: dict) -> "PolySystem":
        try:
            variables = [str(v) for v in data["variables"]]
            eqs = [Poly.from_json(e["terms"]) for e in data["equations"]]
            tags = [e.get("tag", "") for e in data["equations"]]
        except (KeyError, TypeError) as exc:
            raise ParseError(f"malformed system: {exc}") from exc
        unknown = set().union(*(eq.variables() for eq in eqs)) - set(variables)
        if unknown:
            raise ParseError(f"equations use undeclared variables {sorted(unknown)}")
        return cls(variables, eqs, tags)


def sort_variables(names) -> list[str]:
    return sorted(names, key=var_key)


# -- path-gain formulation ------------------------------------------------------

def build_no_interference(forest: Forest) -> list[tuple[Poly, str]]:
    """Per tree j and source i reaching it: sum of path gains = [s(j) == i]."""
    prob = forest.problem
    out = []
    for j, (sink, root) in enumerate(zip(prob.sinks, forest.roots), 1):
        reach = forest.h[root]
        for i in range(1, len(prob.sources) + 1):
            names = reach.get(i, ())
            if not names:
                if sink.demand == i:
                    raise UnsatisfiableDemand(j, i)
                continue
            delta = 1 if sink.demand == i else 0
            out.append((Poly.sum_of(names) - delta, f"ni:sink={sink.node},source={i}"))
    return out


def build_edge_compat(forest: Forest) -> list[tuple[Poly, str]]:
    """2x2-minor conditions making all copies of an edge carry proportional flows.

    Copies of edge e are represented by their tail copies (a tail copy's flow
    is the flow on its single outgoing edge).  Only tails with more than one
    input are enumerated: a single-input tail just forwards the equations of
    its input edge.
    """
    prob = forest.problem
    h = forest.h
    out = []
    for v in prob.nodes:
        if len(prob.in_edges(v)) <= 1:
            continue
        for e in prob.out_edges(v):
            copies = forest.R_v_e(v, e)
            if len(copies) < 2:
                continue
            # all copies of v root isomorphic subtrees; the first is representative
            reaching = [i for i, names in h[copies[0]].items() if names]
            if len(reaching) < 2:
                continue
            sums = {(u, i): Poly.sum_of(h[u][i]) for u in copies for i in reaching}
            for (c1, u1), (c2, u2) in combinations(enumerate(copies, 1), 2):
                for i1, i2 in combinations(reaching, 2):
                    eq = sums[u1, i1] * sums[u2, i2] - sums[u2, i1] * sums[u1, i2]
                    if eq:
                        tag = f"ec:node={v},edge={e},copies={c1}-{c2},sources={i1}-{i2}"
                        out.append((eq, tag))
    return out


def build_path_system(prob: Problem, forest: Forest | None = None) -> PolySystem:
    if forest is None:
        forest = transform(prob, topo_sort(prob))
    system = PolySystem(list(forest.variables))
    for eq, tag in build_no_interference(forest):
        system.add(eq, tag)
    for eq, tag in build_edge_compat(forest):
        assert eq.degree <= 2, eq
        system.add(eq, tag)
    return system


# -- edge-to-edge gain formulation (oracle) ---------------------------------------

def _gain_needed(prob: Problem, v: int) -> bool:
    """A gain variable exists only where a node mixes several inputs; a
    single input is forwarded with gain 1 (its scale is absorbed downstream)."""
    return len(prob.in_edges(v)) > 1


def build_km_system(prob: Problem) -> PolySystem:
    """Forward-propagate symbolic coding vectors and equate sink outputs to
    the demanded unit vectors.  Degree grows with path length."""
    n_src = len(prob.sources)
    src_index = prob.source_index
    zero = [Poly.const(0)] * n_src
    f: dict[str, list[Poly]] = {}
    variables: list[str] = []

    for v in reversed(topo_sort(prob)):
        ins = prob.in_edges(v)
        for e in prob.out_edges(v):
            if v in src_index:
                f[e] = [Poly.const(1 if c == src_index[v] else 0)
                        for c in range(1, n_src + 1)]
            elif not ins:
                f[e] = list(zero)
            elif not _gain_needed(prob, v):
                f[e] = f[ins[0]]
            else:
                acc = list(zero)
                for e_in in ins:
                    g = EdgeGain(e_in, e).name
                    variables.append(g)
                    gv = Poly.var(g)
                    acc = [a + gv * x for a, x in zip(acc, f[e_in])]
                f[e] = acc

    system = PolySystem()
    for j, sink in enumerate(prob.sinks, 1):
        ins = prob.in_edges(sink.node)
        if not ins:
            output = list(zero)
        elif not _gain_needed(prob, sink.node):
            output = f[ins[0]]
        else:
            output = list(zero)
            for e_in in ins:
                g = EdgeGain(e_in, sink_edge_id(j)).name
                variables.append(g)
                gv = Poly.var(g)
                output = [a + gv * x for a, x in zip(output, f[e_in])]
        for c in range(1, n_src + 1):
            target = 1 if c == sink.demand else 0
            system.add(output[c - 1] - target, f"km:sink={sink.node},coord={c}")
    system.variables = variables
    return system


def expand_path_in_gains(forest: Forest, leaf: LeafVar) -> Poly:
    """Product of the edge-to-edge gains along the path of a leaf variable."""
    prob = forest.problem
    path = forest.path_of(leaf.leaf)
    names = []
    for e_in, e_out in zip(path, path[1:]):
        if _gain_needed(prob, prob.edge_map[e_in].head):
            names.append(EdgeGain(e_in, e_out).name)
    sink = prob.sinks[leaf.j - 1].node
    if _gain_needed(prob, sink):
        names.append(EdgeGain(path[-1], sink_edge_id(leaf.j)).name)
    return Poly.monomial(names)


def path_substitution(forest: Forest) -> dict[str, Poly]:
    return {lv.name: expand_path_in_gains(forest, lv) for lv in forest.leaf_vars}


__all__ = [
    "EdgeGain", "PathGain", "PolySystem", "build_edge_compat", "build_km_system",
    "build_no_interference", "build_path_system", "expand_path_in_gains",
    "natural_key", "path_substitution", "sort_variables",
]
