"""Unfold the network into one tree per sink.

Every node with several outgoing edges is replicated once per outgoing edge,
sinks first, until each sink roots its own tree and every tree node has a
single outgoing edge.  Leaves are copies of source nodes and correspond
one-to-one with source-to-sink paths, which is what makes the leaf values
usable as path-gain variables.

Copies are created depth first from each root, trees in sink order, input
edges in natural edge-id order.  That fixes every copy index and variable
name deterministically.
"""
from __future__ import annotations

import string
from dataclasses import dataclass, field
from functools import cached_property

from .network import Problem, natural_key, topo_sort


@dataclass(frozen=True)
class TreeNode:
    id: int
    orig: int
    tree: int
    copy: int
    out_edge: int | None           # tree edge id, None for roots
    in_edges: tuple[int, ...]      # aligned with Problem.in_edges(orig)


@dataclass(frozen=True)
class TreeEdge:
    id: int
    orig: str
    tree: int
    copy: int
    tail: int
    head: int


@dataclass(frozen=True)
class LeafVar:
    i: int      # source index
    j: int      # tree (sink) index
    k: int      # copy index within (i, j)
    leaf: int   # tree node id

    @property
    def name(self) -> str:
        return f"g{self.i}_{self.j}_{self.k}"


@dataclass
class Forest:
    problem: Problem
    order: list[int]
    nodes: list[TreeNode]
    edges: list[TreeEdge]
    roots: list[int]
    leaf_vars: list[LeafVar]
    R_v: dict[int, list[int]]
    R_e: dict[str, list[int]]
    h: list[dict[int, tuple[str, ...]]] = field(repr=False)

    @cached_property
    def var_by_leaf(self) -> dict[int, LeafVar]:
        return {lv.leaf: lv for lv in self.leaf_vars}

    @cached_property
    def variables(self) -> list[str]:
        """Path-gain variable names ordered by (source, tree, copy)."""
        return [lv.name for lv in sorted(self.leaf_vars, key=lambda lv: (lv.i, lv.j, lv.k))]

    @cached_property
    def leaf_counts(self) -> dict[tuple[int, int], int]:
        """N_ij: number of copies of source i in tree j."""
        out: dict = {}
        for lv in self.leaf_vars:
            out[lv.i, lv.j] = out.get((lv.i, lv.j), 0) + 1
        return out

    def leaves(self, i: int, j: int) -> list[LeafVar]:
        return [lv for lv in self.leaf_vars if lv.i == i and lv.j == j]

    def copy_position(self, tree_edge: int) -> int:
        """0-based position of a tree edge inside R_e of its original edge."""
        return self.edges[tree_edge].copy - 1

    def R_v_e(self, v: int, e: str) -> list[int]:
        """Copies of node v whose outgoing edge is a copy of e (R_e order)."""
        return [self.edges[x].tail for x in self.R_e.get(e, [])]

    def R_ep_e(self, e_in: str, e_out: str) -> list[int]:
        """Copies of e_in that feed a copy of e_out, aligned with R_e(e_out)."""
        v = self.problem.edge_map[e_out].tail
        pos = self.problem.in_edges(v).index(e_in)
        return [self.nodes[t].in_edges[pos] for t in self.R_v_e(v, e_out)]

    def path_of(self, leaf: int) -> list[str]:
        """Original edge ids from a leaf up to its root."""
        out = []
        node = self.nodes[leaf]
        while node.out_edge is not None:
            te = self.edges[node.out_edge]
            out.append(te.orig)
            node = self.nodes[te.head]
        return out

    def aliases(self) -> dict[str, str]:
        """Letter names (a1, a2, ..., b1, ...) numbered tree by tree.

        Only defined while there are at most 26 sources.
        """
        if len(self.problem.sources) > 26:
            return {}
        out = {}
        counters: dict[int, int] = {}
        for lv in self.leaf_vars:
            counters[lv.i] = counters.get(lv.i, 0) + 1
            out[lv.name] = f"{string.ascii_lowercase[lv.i - 1]}{counters[lv.i]}"
        return out


def transform(prob: Problem, order: list[int] | None = None) -> Forest:
    """Replicate nodes into |T| sink-rooted trees with full replica bookkeeping."""
    if order is None:
        order = topo_sort(prob)
    src_index = prob.source_index
    # staged node: [orig, tree, out_edge, in_edges]; staged edge: (orig, tree, tail, head)
    staged: list[list] = []
    staged_edges: list[tuple] = []
    roots: list[int] = []
    leaf_vars: list[LeafVar] = []
    R_v: dict[int, list[int]] = {v: [] for v in prob.nodes}
    R_e: dict[str, list[int]] = {e.id: [] for e in prob.edges}

    for j, sink in enumerate(prob.sinks, 1):
        k_count: dict[int, int] = {}
        # nodes are materialized when popped, so ids follow a pre-order walk
        stack: list[tuple] = [(sink.node, None, None)]
        while stack:
            orig, parent, eid = stack.pop()
            nid = len(staged)
            out_edge = None
            if parent is not None:
                out_edge = len(staged_edges)
                staged_edges.append((eid, j, nid, parent))
                staged[parent][3].append(out_edge)
                R_e[eid].append(out_edge)
            else:
                roots.append(nid)
            staged.append([orig, j, out_edge, []])
            R_v[orig].append(nid)
            if orig in src_index:
                i = src_index[orig]
                k_count[i] = k_count.get(i, 0) + 1
                leaf_vars.append(LeafVar(i, j, k_count[i], nid))
            for in_eid in reversed(prob.in_edges(orig)):
                stack.append((prob.edge_map[in_eid].tail, nid, in_eid))

    # A copy of e sits directly under a copy of head(e), so ordering R_e by
    # head creation order aligns R_e with R_head(e).
    for eid in R_e:
        R_e[eid].sort(key=lambda te: staged_edges[te][3])
    node_copy = {nid: c for v in R_v for c, nid in enumerate(R_v[v], 1)}
    edge_copy = {te: c for eid in R_e for c, te in enumerate(R_e[eid], 1)}

    nodes = [
        TreeNode(nid, orig, tree, node_copy[nid], out_edge, tuple(ins))
        for nid, (orig, tree, out_edge, ins) in enumerate(staged)
    ]
    edges = [
        TreeEdge(te, eid, tree, edge_copy[te], tail, head)
        for te, (eid, tree, tail, head) in enumerate(staged_edges)
    ]

    # h-sets, bottom-up: children always have larger ids than their parent.
    var_by_leaf = {lv.leaf: lv for lv in leaf_vars}
    h: list[dict] = [None] * len(nodes)
    for node in reversed(nodes):
        acc: dict[int, list[str]] = {}
        if node.id in var_by_leaf:
            lv = var_by_leaf[node.id]
            acc[lv.i] = [lv.name]
        for te in node.in_edges:
            for i, names in h[edges[te].tail].items():
                acc.setdefault(i, []).extend(names)
        h[node.id] = {i: tuple(sorted(names, key=natural_key))
                      for i, names in sorted(acc.items())}

    return Forest(prob, list(order), nodes, edges, roots, leaf_vars, R_v, R_e, h)


# -- serialization -------------------------------------------------------------

def forest_to_dict(forest: Forest) -> dict:
    aliases = forest.aliases()

    def node_record(nid: int) -> dict:
        node = forest.nodes[nid]
        rec = {"node": node.orig, "copy": node.copy}
        lv = forest.var_by_leaf.get(nid)
        if lv is not None:
            rec["var"] = lv.name
        if node.in_edges:
            rec["inputs"] = [
                {"edge": forest.edges[te].orig, "copy": forest.edges[te].copy,
                 "from": node_record(forest.edges[te].tail)}
                for te in node.in_edges
            ]
        return rec

    return {
        "trees": [
            {"index": j, "sink": forest.nodes[root].orig, "root": node_record(root)}
            for j, root in enumerate(forest.roots, 1)
        ],
        "leaf_vars": [
            {"name": lv.name, "source": lv.i, "tree": lv.j, "k": lv.k,
             "path": forest.path_of(lv.leaf),
             **({"alias": aliases[lv.name]} if lv.name in aliases else {})}
            for lv in forest.leaf_vars
        ],
    }


def enumerate_paths(prob: Problem, i: int, j: int) -> list[list[str]]:
    """All source_i -> sink_j paths as edge-id lists, by plain DFS on the
    original graph (independent of :func:`transform`)."""
    start = prob.sources[i - 1]
    goal = prob.sinks[j - 1].node
    out: list[list[str]] = []

    def walk(v: int, path: list[str]) -> None:
        if v == goal:
            out.append(list(path))
            return
        for eid in prob.out_edges(v):
            path.append(eid)
            walk(prob.edge_map[eid].head, path)
            path.pop()

    walk(start, [])
    out.sort(key=lambda p: [natural_key(e) for e in p])
    return out
