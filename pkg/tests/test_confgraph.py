import pytest

from qdstrata.confgraph import (INVALID, ConfGraph, GraphError, assign_weights,
                                classify_base_type, invalid_reason, signed_weights_at)


def graph(kinds, edges):
    return ConfGraph(tuple(kinds), tuple(edges))


@pytest.mark.parametrize("kinds, edges, base", [
    ("-+-", [(0, 1), (1, 2)], "a"),
    ("--", [(0, 1)], "a"),
    ("-", [(0, 0)], "b"),
    ("-+", [(0, 1), (1, 0)], "b"),
    ("+-", [(0, 0), (0, 1)], "c"),
    ("++", [(0, 0), (0, 1), (1, 1)], "d"),
    ("+", [(0, 0), (0, 0)], "e"),
    ("oo", [(0, 0), (0, 1), (1, 0)], "e"),
    ("o+o", [(0, 0), (0, 1), (1, 2), (2, 2)], "d"),
])
def test_base_types(kinds, edges, base):
    assert classify_base_type(graph(kinds, edges)) == base


@pytest.mark.parametrize("kinds, edges, fragment", [
    ("+-", [(0, 1)], "valence one"),
    ("+", [(0, 0)], "exactly one"),
    ("---", [(0, 1), (1, 2), (2, 0)], "exactly one"),
    ("++", [(0, 1), (0, 1), (0, 1)], "banned"),
    ("oo", [(0, 0), (0, 1), (1, 1)], "'+' vertex"),
    ("+", [(0, 0), (0, 0), (0, 0)], "valence above four"),
    ("+++", [(0, 1), (1, 2), (2, 0), (0, 1), (1, 2)], "more than two"),
    ("-o-", [(0, 1), (1, 2)], None),
])
def test_invalid_graphs(kinds, edges, fragment):
    g = graph(kinds, edges)
    if fragment is None:
        assert classify_base_type(g) != INVALID
    else:
        assert classify_base_type(g) == INVALID
        assert fragment in invalid_reason(g)


def test_adjacent_valence_two_cylinders_rejected():
    g = graph("-oo-", [(0, 1), (1, 2), (2, 3)])
    assert classify_base_type(g) == INVALID


def test_disconnected_graph_raises():
    with pytest.raises(GraphError):
        classify_base_type(graph("--+", [(0, 1), (2, 2)]))


def test_weights_of_chain_edges_are_two():
    g = graph("++", [(0, 0), (0, 1), (1, 1)])
    assert assign_weights(g) == (1, 2, 1)
    g = graph("+-", [(0, 0), (0, 1)])
    assert assign_weights(g) == (1, 2)


def test_signed_weights_sum_to_zero():
    for kinds, edges in [("++", [(0, 0), (0, 1), (1, 1)]), ("+", [(0, 0), (0, 0)]),
                         ("-+", [(0, 1), (1, 0)]), ("oo", [(0, 0), (0, 1), (1, 0)])]:
        g = graph(kinds, edges)
        for v, k in enumerate(g.kinds):
            if k == "-":
                continue
            w = signed_weights_at(g, v)
            assert sum(w.values()) == 0
            assert set(w) == set(g.ends_at(v))


def test_signed_weights_undefined_at_minus():
    with pytest.raises(GraphError):
        signed_weights_at(graph("--", [(0, 1)]), 0)


def test_text_round_trip():
    g = graph("o+o", [(0, 0), (0, 1), (1, 2), (2, 2)])
    assert ConfGraph.from_text(g.text()) == g
