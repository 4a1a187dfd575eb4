import pytest

from pathgain.errors import CyclicGraph, DanglingDemand, DuplicateEdgeId, ParseError
from pathgain.network import (
    make_problem,
    natural_key,
    normalize_rates,
    problem_from_dict,
    problem_to_dict,
    topo_sort,
)


def test_butterfly_shape(butterfly):
    assert butterfly.is_normalized
    assert len(butterfly.edges) == 11
    assert butterfly.sources == (1, 2)
    assert [(s.node, s.demand) for s in butterfly.sinks] == [(7, 1), (8, 2), (9, 1), (10, 2)]
    assert butterfly.in_edges(5) == ["e4", "e6"]
    assert butterfly.out_edges(4) == ["e6", "e7"]


def test_topological_order_butterfly(butterfly):
    # first-come first-served from the sinks; the order used for recovery
    assert topo_sort(butterfly) == [7, 8, 9, 10, 5, 6, 4, 3, 1, 2]


def test_topological_order_is_valid(butterfly):
    pos = {v: n for n, v in enumerate(topo_sort(butterfly))}
    assert all(pos[e.head] < pos[e.tail] for e in butterfly.edges)


def test_natural_key():
    assert sorted(["e10", "e2", "e1"], key=natural_key) == ["e1", "e2", "e10"]


@pytest.mark.parametrize("edges, sources, sinks, exc", [
    ([("a", 1, 2), ("a", 2, 3)], [1], [(3, 1)], DuplicateEdgeId),
    ([("a", 1, 2), ("b", 2, 1)], [1], [(2, 1)], CyclicGraph),
    ([("a", 1, 1)], [1], [(2, 1)], CyclicGraph),
    ([("a", 1, 9)], [1], [(2, 1)], ParseError),
    ([("a", 1, 2)], [1], [(2, 2)], DanglingDemand),
    ([("v_src_1", 1, 2)], [1], [(2, 1)], ParseError),
    ([("a", 1, 2)], [7], [(2, 1)], ParseError),
])
def test_validation(edges, sources, sinks, exc):
    with pytest.raises(exc):
        make_problem([1, 2, 3], edges, sources, sinks)


def test_normalize_splits_rates():
    # node 1 sends two symbols, node 2 is both relay and sink, node 3 demands twice
    prob = make_problem([1, 2, 3], [("a", 1, 2), ("b", 2, 3), ("c", 1, 3)],
                        [1, 1], [(2, 1), (3, 1), (3, 2)])
    assert prob.is_normalized
    assert len(prob.sources) == 2 and len(set(prob.sources)) == 2
    assert len({s.node for s in prob.sinks}) == 3
    for v in prob.sources:
        assert not prob.in_edges(v)
    for s in prob.sinks:
        assert not prob.out_edges(s.node)
    assert normalize_rates(prob) is prob


def test_unnormalized_kept_on_request():
    prob = make_problem([1, 2], [("a", 1, 2)], [1, 1], [(2, 1)], normalize=False)
    assert not prob.is_normalized


def test_dict_roundtrip(butterfly):
    assert problem_from_dict(problem_to_dict(butterfly)) == butterfly
    with pytest.raises(ParseError):
        problem_from_dict({"nodes": [1], "edges": [{"id": "a"}]})
