"""Network coding problem model: a directed acyclic multigraph with sources,
sinks and demands.

Node ids are integers, edges are addressed only by their string id (parallel
edges are allowed).  Every source and every sink also owns a virtual edge,
``v_src_<i>`` into source ``i`` and ``v_snk_<j>`` out of sink ``j``.
"""
from __future__ import annotations

import json
import re
from collections import Counter, deque
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path
from typing import Iterable

from .errors import CyclicGraph, DanglingDemand, DuplicateEdgeId, ParseError


def natural_key(text: str):
    """Sort key that orders ``e2`` before ``e10``."""
    return tuple(
        (0, int(tok), "") if tok.isdigit() else (1, 0, tok)
        for tok in re.split(r"(\d+)", text)
        if tok
    )


def source_edge_id(i: int) -> str:
    return f"v_src_{i}"


def sink_edge_id(j: int) -> str:
    return f"v_snk_{j}"


@dataclass(frozen=True)
class Edge:
    id: str
    tail: int | None
    head: int | None
    virtual: bool = False


@dataclass(frozen=True)
class Sink:
    node: int
    demand: int  # 1-based source index


@dataclass(frozen=True)
class Problem:
    """A (possibly not yet normalized) network coding problem.

    ``sources[i-1]`` is the node producing symbol ``X_i``; ``sinks[j-1]`` is
    the j-th sink and the source index it demands.
    """

    nodes: tuple[int, ...]
    edges: tuple[Edge, ...]
    sources: tuple[int, ...]
    sinks: tuple[Sink, ...]

    @cached_property
    def edge_map(self) -> dict[str, Edge]:
        return {e.id: e for e in self.edges}

    @cached_property
    def _incidence(self):
        ins = {v: [] for v in self.nodes}
        outs = {v: [] for v in self.nodes}
        for e in sorted(self.edges, key=lambda e: natural_key(e.id)):
            outs[e.tail].append(e.id)
            ins[e.head].append(e.id)
        return ins, outs

    def in_edges(self, v: int) -> list[str]:
        """I(v), real edges only, in natural edge-id order."""
        return self._incidence[0][v]

    def out_edges(self, v: int) -> list[str]:
        """O(v), real edges only, in natural edge-id order."""
        return self._incidence[1][v]

    @cached_property
    def source_index(self) -> dict[int, int]:
        """Node -> 1-based symbol index (valid after normalization)."""
        return {v: i for i, v in enumerate(self.sources, 1)}

    @cached_property
    def sink_nodes(self) -> frozenset[int]:
        return frozenset(s.node for s in self.sinks)

    def virtual_edges(self) -> list[Edge]:
        out = [Edge(source_edge_id(i), None, v, True)
               for i, v in enumerate(self.sources, 1)]
        out += [Edge(sink_edge_id(j), s.node, None, True)
                for j, s in enumerate(self.sinks, 1)]
        return out

    @property
    def is_normalized(self) -> bool:
        src_count = Counter(self.sources)
        snk_count = Counter(s.node for s in self.sinks)
        for v, n in src_count.items():
            if n > 1 or self.in_edges(v) or v in snk_count:
                return False
        for v, n in snk_count.items():
            if n > 1 or self.out_edges(v):
                return False
        return True


def make_problem(nodes: Iterable[int], edges: Iterable[tuple[str, int, int]],
                 sources: Iterable[int], sinks: Iterable[tuple[int, int]],
                 normalize: bool = True) -> Problem:
    """Build and validate a problem from plain tuples."""
    nodes = tuple(sorted(set(int(v) for v in nodes)))
    edge_list = tuple(Edge(str(i), int(t), int(h)) for i, t, h in edges)
    prob = Problem(nodes, edge_list, tuple(int(v) for v in sources),
                   tuple(Sink(int(v), int(d)) for v, d in sinks))
    validate(prob)
    return normalize_rates(prob) if normalize else prob


def validate(prob: Problem) -> None:
    node_set = set(prob.nodes)
    seen = set()
    for e in prob.edges:
        if e.id in seen:
            raise DuplicateEdgeId(f"duplicate edge id {e.id!r}")
        if e.id.startswith("v_src_") or e.id.startswith("v_snk_"):
            raise ParseError(f"edge id {e.id!r} uses a reserved prefix")
        seen.add(e.id)
        if e.tail not in node_set or e.head not in node_set:
            raise ParseError(f"edge {e.id!r} references an unknown node")
        if e.tail == e.head:
            raise CyclicGraph(f"self-loop on node {e.tail}")
    for v in prob.sources:
        if v not in node_set:
            raise ParseError(f"source node {v} is not in the node list")
    for s in prob.sinks:
        if s.node not in node_set:
            raise ParseError(f"sink node {s.node} is not in the node list")
        if not 1 <= s.demand <= len(prob.sources):
            raise DanglingDemand(
                f"sink {s.node} demands source #{s.demand}, "
                f"but only {len(prob.sources)} sources exist")
    topo_sort(prob)


def _fresh_edge_id(base: str, taken: set[str]) -> str:
    eid = base
    while eid in taken:
        eid += "'"
    taken.add(eid)
    return eid


def normalize_rates(prob: Problem) -> Problem:
    """Give every source and sink exactly one unit of data.

    A node that produces several symbols, has incoming edges, or doubles as a
    sink is fed by fresh virtual source nodes, one per symbol.  Sinks are
    split the same way with fresh virtual sink nodes.  Idempotent.
    """
    if prob.is_normalized:
        return prob
    src_count = Counter(prob.sources)
    snk_count = Counter(s.node for s in prob.sinks)
    next_id = max(prob.nodes) + 1
    nodes = list(prob.nodes)
    edges = list(prob.edges)
    taken = {e.id for e in edges}
    seen_rate: Counter = Counter()

    new_sources = []
    for v in prob.sources:
        if src_count[v] == 1 and not prob.in_edges(v) and v not in snk_count:
            new_sources.append(v)
            continue
        seen_rate[v] += 1
        fresh = next_id
        next_id += 1
        nodes.append(fresh)
        edges.append(Edge(_fresh_edge_id(f"{v}_in{seen_rate[v]}", taken), fresh, v))
        new_sources.append(fresh)

    src_set = set(prob.sources)
    new_sinks = []
    seen_rate.clear()
    for s in prob.sinks:
        v = s.node
        if snk_count[v] == 1 and not prob.out_edges(v) and v not in src_set:
            new_sinks.append(s)
            continue
        seen_rate[v] += 1
        fresh = next_id
        next_id += 1
        nodes.append(fresh)
        edges.append(Edge(_fresh_edge_id(f"{v}_out{seen_rate[v]}", taken), v, fresh))
        new_sinks.append(Sink(fresh, s.demand))

    return Problem(tuple(nodes), tuple(edges), tuple(new_sources), tuple(new_sinks))


def topo_sort(prob: Problem) -> list[int]:
    """Sinks-first ordering: repeatedly emit a node with no unplaced
    successors, decrementing the counters of its in-neighbours.

    Eligible nodes are taken first-come first-served; nodes becoming
    eligible at the same moment are queued by ascending id.
    """
    remaining = {v: len(prob.out_edges(v)) for v in prob.nodes}
    queue = deque(sorted(v for v, n in remaining.items() if n == 0))
    order = []
    while queue:
        v = queue.popleft()
        order.append(v)
        freed = []
        for eid in prob.in_edges(v):
            u = prob.edge_map[eid].tail
            remaining[u] -= 1
            if remaining[u] == 0:
                freed.append(u)
        queue.extend(sorted(freed))
    if len(order) != len(prob.nodes):
        raise CyclicGraph("graph contains a directed cycle")
    return order


# -- serialization -----------------------------------------------------------

def problem_to_dict(prob: Problem) -> dict:
    return {
        "nodes": list(prob.nodes),
        "edges": [{"id": e.id, "tail": e.tail, "head": e.head} for e in prob.edges],
        "sources": [{"node": v} for v in prob.sources],
        "sinks": [{"node": s.node, "demand": s.demand} for s in prob.sinks],
    }


def problem_from_dict(data: dict, normalize: bool = True) -> Problem:
    try:
        nodes = [int(v) for v in data["nodes"]]
        edges = [(e["id"], e["tail"], e["head"]) for e in data["edges"]]
        sources = [s["node"] for s in data["sources"]]
        sinks = [(s["node"], s["demand"]) for s in data["sinks"]]
    except (KeyError, TypeError, ValueError) as exc:
        raise ParseError(f"malformed problem: {exc}") from exc
    return make_problem(nodes, edges, sources, sinks, normalize=normalize)


def problem_load(path: str | Path, normalize: bool = True) -> Problem:
    try:
        data = json.loads(Path(path).read_text(encoding="utf-8"))
    except (OSError, json.JSONDecodeError) as exc:
        raise ParseError(f"cannot read problem {path}: {exc}") from exc
    return problem_from_dict(data, normalize=normalize)


def problem_save(prob: Problem, path: str | Path) -> None:
    from .io import write_json

    write_json(path, problem_to_dict(prob))
