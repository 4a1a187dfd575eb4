"""Seeded random instances, the formulation cross-check and a timing bench."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass, field

from .equations import build_km_system, build_path_system
from .errors import BudgetExceeded, InfeasibleParams, UnsatisfiableDemand
from .forest import transform
from .galois import FieldSpec
from .network import Problem, make_problem, topo_sort
from .recover import derive_code, verify_code
from .simplify import linear_eliminate
from .solve import DEFAULT_BUDGET, brute_force, solvable_over

_ATTEMPTS = 200


def random_dag(seed: int, n_nodes: int, n_edges: int, n_sources: int, n_sinks: int,
               window: int | None = None, require_reachable: bool = False) -> Problem:
    """Random DAG on nodes 1..n with edges from lower to higher labels.

    Parallel edges are allowed.  ``window`` optionally bounds head - tail,
    which keeps path counts manageable on large graphs.  Isolated nodes are
    only used as sources or sinks when there are not enough other
    candidates.  Graphs without enough candidates (or, with
    ``require_reachable``, with a sink no source reaches) are redrawn from
    the same stream.
    """
    if n_nodes < 1 or n_sources < 1 or n_sinks < 0 or n_edges < 0:
        raise InfeasibleParams("need at least one node and one source")
    if n_sources + n_sinks > n_nodes or (n_edges and n_nodes < 2):
        raise InfeasibleParams(
            f"{n_sources} sources and {n_sinks} sinks do not fit in {n_nodes} nodes")
    rng = random.Random(seed)
    nodes = list(range(1, n_nodes + 1))
    for _ in range(_ATTEMPTS):
        edges = []
        for k in range(1, n_edges + 1):
            tail = rng.randint(1, n_nodes - 1)
            top = n_nodes if window is None else min(n_nodes, tail + window)
            edges.append((f"e{k}", tail, rng.randint(tail + 1, top)))
        has_in = {h for _, _, h in edges}
        has_out = {t for _, t, _ in edges}
        cand_src = _prefer([v for v in nodes if v not in has_in], has_out, n_sources)
        if cand_src is None:
            continue
        sources = sorted(rng.sample(cand_src, n_sources))
        reach = _reachability(nodes, edges)
        cand_snk = [v for v in nodes if v not in has_out and v not in sources]
        if require_reachable:
            cand_snk = [v for v in cand_snk if any(v in reach[s] for s in sources)]
        cand_snk = _prefer(cand_snk, has_in, n_sinks)
        if cand_snk is None:
            continue
        sinks = sorted(rng.sample(cand_snk, n_sinks))
        sink_list = []
        for t in sinks:
            able = [i for i, s in enumerate(sources, 1) if t in reach[s]]
            if not able and require_reachable:
                break
            sink_list.append((t, rng.choice(able or list(range(1, n_sources + 1)))))
        else:
            return make_problem(nodes, edges, sources, sink_list)
    raise InfeasibleParams(f"no valid DAG found after {_ATTEMPTS} draws")


def _prefer(cands: list[int], connected: set[int], k: int) -> list[int] | None:
    """Candidates touching some edge if there are at least k of them."""
    if len(cands) < k:
        return None
    linked = [v for v in cands if v in connected]
    return linked if len(linked) >= k else cands


def _reachability(nodes, edges) -> dict[int, set[int]]:
    succ: dict[int, list[int]] = {v: [] for v in nodes}
    for _, t, h in edges:
        succ[t].append(h)
    reach: dict[int, set[int]] = {}
    for v in sorted(nodes, reverse=True):  # heads have larger labels
        acc = {v}
        for w in succ[v]:
            acc |= reach[w]
        reach[v] = acc
    return reach


def corpus_params(seed: int, index: int, attempt: int = 0, max_nodes: int = 8,
                  max_edges: int = 12, n_sources: int = 2,
                  sinks: tuple[int, int] = (2, 3)) -> dict:
    """Deterministic small-instance parameters for trial ``index``."""
    rng = random.Random(f"{seed}:{index}:{attempt}")
    n_sinks = rng.randint(*sinks)
    n = rng.randint(n_sources + n_sinks + 1, max_nodes)
    m = rng.randint(n - 2, min(max_edges, 2 * n))
    return {"seed": rng.getrandbits(64), "n_nodes": n, "n_edges": m,
            "n_sources": n_sources, "n_sinks": n_sinks}


def bottleneck_dag(seed: int, n_sources: int = 2, n_sinks: int = 2) -> Problem:
    """Sources feed one shared edge u -> v that fans out to the sinks, plus
    random side links from sources to sinks (butterfly-like).

    Plain random DAGs are almost always solvable; this family produces a mix
    of solvable and unsolvable instances.  Every demand is reachable.
    """
    rng = random.Random(seed)
    sources = list(range(1, n_sources + 1))
    u, v = n_sources + 1, n_sources + 2
    sinks = list(range(v + 1, v + 1 + n_sinks))
    while True:
        edges = [(s, u) for s in sources if rng.random() < 0.85]
        edges.append((u, v))
        edges += [(v, t) for t in sinks if rng.random() < 0.85]
        edges += [(s, t) for s in sources for t in sinks if rng.random() < 0.3]
        feeds = {t: {s for s, h in edges if h == t} for t in sinks}
        through = {s for s, h in edges if h == u}
        demands = []
        for t in sinks:
            able = set(feeds[t]) & set(sources)
            if (v, t) in edges:
                able |= through
            if not able:
                break
            demands.append((t, rng.choice(sorted(able))))
        else:
            named = [(f"e{k}", a, b) for k, (a, b) in enumerate(edges, 1)]
            return make_problem(sources + [u, v] + sinks, named, sources, demands)


FAMILIES = ("random", "bottleneck")


def corpus_problem(seed: int, index: int, family: str = "random", **kw) -> Problem:
    """Instance ``index`` of the seeded corpus; infeasible draws are redrawn."""
    if family == "bottleneck":
        rng = random.Random(f"{seed}:{index}:bottleneck")
        return bottleneck_dag(rng.getrandbits(64), 2, rng.randint(2, 3))
    if family != "random":
        raise ValueError(f"unknown family {family!r}")
    for attempt in range(_ATTEMPTS):
        try:
            return random_dag(**corpus_params(seed, index, attempt, **kw))
        except InfeasibleParams:
            continue
    raise InfeasibleParams(f"corpus instance {index} could not be drawn")


def corpus(seed: int, count: int, family: str = "random", **kw) -> list[Problem]:
    return [corpus_problem(seed, t, family, **kw) for t in range(count)]


# -- oracle comparison ----------------------------------------------------------

@dataclass
class TrialResult:
    index: int
    path: bool | None
    edge: bool | None
    witness_ok: bool | None = None
    note: str = ""


@dataclass
class OracleReport:
    field: str
    trials: list[TrialResult] = field(default_factory=list)

    @property
    def compared(self) -> list[TrialResult]:
        return [t for t in self.trials if t.path is not None and t.edge is not None]

    @property
    def agree(self) -> int:
        return sum(t.path == t.edge for t in self.compared)

    @property
    def disagree(self) -> int:
        return len(self.compared) - self.agree

    @property
    def skipped(self) -> int:
        return len(self.trials) - len(self.compared)

    @property
    def witness_failures(self) -> int:
        return sum(t.witness_ok is False for t in self.trials)

    def matrix(self) -> dict[str, int]:
        out = {"yes/yes": 0, "yes/no": 0, "no/yes": 0, "no/no": 0}
        for t in self.compared:
            out[f"{'yes' if t.path else 'no'}/{'yes' if t.edge else 'no'}"] += 1
        return out

    def to_dict(self) -> dict:
        return {
            "field": self.field, "trials": len(self.trials), "compared": len(self.compared),
            "agree": self.agree, "disagree": self.disagree, "skipped": self.skipped,
            "witness_failures": self.witness_failures,
            "matrix (path/edge)": self.matrix(),
            "mismatches": [t.index for t in self.compared if t.path != t.edge],
        }


def edge_solvable(prob: Problem, F: FieldSpec, budget: int = DEFAULT_BUDGET) -> bool:
    system = build_km_system(prob)
    return bool(brute_force(system, F, "first", budget, order="greedy").solutions)


def compare_one(prob: Problem, F: FieldSpec, budget: int = DEFAULT_BUDGET,
                index: int = 0) -> TrialResult:
    try:
        edge = edge_solvable(prob, F, budget)
    except BudgetExceeded:
        return TrialResult(index, None, None, note="edge-gain search over budget")
    forest = transform(prob, topo_sort(prob))
    try:
        report = solvable_over(prob, F, budget, forest=forest)
    except BudgetExceeded:
        return TrialResult(index, None, edge, note="path-gain search over budget")
    witness_ok = None
    if report.solution is not None:
        code = derive_code(prob, forest, report.solution)
        witness_ok = all(r.passed for r in verify_code(prob, code))
    return TrialResult(index, report.solvable, edge, witness_ok, report.reason)


def compare_oracle(trials: int, seed: int, F: FieldSpec, budget: int = DEFAULT_BUDGET,
                   family: str = "random") -> OracleReport:
    report = OracleReport(F.name)
    for t in range(trials):
        report.trials.append(compare_one(corpus_problem(seed, t, family), F, budget, t))
    return report


# -- bench -------------------------------------------------------------------------

def bench(n_nodes: int, n_edges: int, n_sources: int, n_sinks: int, seed: int = 0,
          window: int | None = None) -> dict:
    prob = random_dag(seed, n_nodes, n_edges, n_sources, n_sinks, window=window,
                      require_reachable=True)
    out: dict = {"nodes": len(prob.nodes), "edges": len(prob.edges),
                 "sources": len(prob.sources), "sinks": len(prob.sinks)}
    t0 = time.perf_counter()
    forest = transform(prob, topo_sort(prob))
    t1 = time.perf_counter()
    out["leaf_variables"] = len(forest.leaf_vars)
    try:
        system = build_path_system(prob, forest)
    except UnsatisfiableDemand as exc:
        out["unsatisfiable_demand"] = str(exc)
        out["seconds"] = {"transform": t1 - t0}
        return out
    t2 = time.perf_counter()
    res = linear_eliminate(system)
    t3 = time.perf_counter()
    deg = system.count_by_degree()
    out.update({
        "variables_before": len(system.variables),
        "equations_before": len(system),
        "linear_before": deg.get(1, 0),
        "quadratic_before": deg.get(2, 0),
        "variables_after": len(res.reduced.variables),
        "equations_after": len(res.reduced),
        "verdict": res.verdict_text,
        "seconds": {"transform": t1 - t0, "equations": t2 - t1, "simplify": t3 - t2,
                    "total": t3 - t0},
    })
    return out
