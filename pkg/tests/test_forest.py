from collections import Counter

from hypothesis import given, settings
from hypothesis import strategies as st

from pathgain.forest import enumerate_paths, forest_to_dict, transform
from pathgain.fuzz import corpus_problem

problems = st.integers(0, 10_000).map(lambda t: corpus_problem(99, t))


def downstream_routes(prob) -> dict[str, int]:
    """Number of ways to continue from each edge to some sink (one per tree)."""
    sinks = Counter(s.node for s in prob.sinks)
    memo: dict[int, int] = {}

    def routes(v: int) -> int:
        if v not in memo:
            memo[v] = sinks[v] + sum(routes(prob.edge_map[e].head) for e in prob.out_edges(v))
        return memo[v]

    return {e.id: routes(e.head) for e in prob.edges}


def test_butterfly_copies(butterfly):
    forest = transform(butterfly)
    sizes = {e: len(r) for e, r in forest.R_e.items()}
    assert sizes == {"e1": 4, "e2": 4, "e3": 4, "e4": 2, "e5": 2, "e6": 2, "e7": 2,
                     "e8": 1, "e9": 1, "e10": 1, "e11": 1}
    assert len(forest.leaf_vars) == 12
    assert forest.leaf_counts == {(1, 1): 2, (2, 1): 1, (1, 2): 2, (2, 2): 1,
                                  (1, 3): 1, (2, 3): 2, (1, 4): 1, (2, 4): 2}


def test_butterfly_aliases(butterfly):
    forest = transform(butterfly)
    paths = {forest.aliases()[lv.name]: forest.path_of(lv.leaf) for lv in forest.leaf_vars}
    assert paths["a1"] == ["e4", "e8"]
    assert paths["a2"] == ["e1", "e3", "e6", "e8"]
    assert paths["b1"] == ["e2", "e3", "e6", "e8"]
    assert paths["a5"] == ["e1", "e3", "e7", "e10"]
    assert paths["b3"] == ["e5", "e10"]
    assert paths["b4"] == ["e2", "e3", "e7", "e10"]


def test_forest_dict(butterfly):
    d = forest_to_dict(transform(butterfly))
    assert [t["sink"] for t in d["trees"]] == [7, 8, 9, 10]
    assert {v["alias"] for v in d["leaf_vars"]} == {f"a{k}" for k in range(1, 7)} | {
        f"b{k}" for k in range(1, 7)}


@settings(max_examples=60, deadline=None)
@given(problems)
def test_leaves_biject_with_paths(prob):
    forest = transform(prob)
    for i in range(1, len(prob.sources) + 1):
        for j in range(1, len(prob.sinks) + 1):
            got = sorted(forest.path_of(lv.leaf) for lv in forest.leaves(i, j))
            assert got == sorted(enumerate_paths(prob, i, j))


@settings(max_examples=60, deadline=None)
@given(problems)
def test_copy_counts_match_route_counts(prob):
    forest = transform(prob)
    routes = downstream_routes(prob)
    for e, copies in forest.R_e.items():
        assert len(copies) == routes[e]
        assert [forest.copy_position(te) for te in copies] == list(range(len(copies)))


@settings(max_examples=60, deadline=None)
@given(problems)
def test_replica_alignment(prob):
    forest = transform(prob)
    for e in prob.edges:
        v = e.tail
        tails = forest.R_v_e(v, e.id)
        assert all(forest.nodes[t].orig == v for t in tails)
        for e_in in prob.in_edges(v):
            feeding = forest.R_ep_e(e_in, e.id)
            assert len(feeding) == len(tails)
            for te, t in zip(feeding, tails):
                assert forest.edges[te].orig == e_in
                assert forest.edges[te].head == t
