import random

import networkx as nx
import pytest
from hypothesis import given, settings, strategies as st

from franknum.errors import GraphFormatError
from franknum.graphio import Graph, classify, parse_graph6, read_graph6_lines, write_graph6

import graphs


def nx_graph6(g: Graph) -> str:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges)
    return nx.to_graph6_bytes(h, header=False).decode().strip()


def test_empty_five_vertices():
    g = parse_graph6("D??")
    assert (g.n, g.m) == (5, 0)
    assert write_graph6(g) == "D??"


def test_k4_code():
    g = parse_graph6("C~")
    assert g == graphs.complete(4)
    assert write_graph6(graphs.complete(4)) == "C~"


def test_petersen_against_independent_encoder():
    p = graphs.petersen()
    code = nx_graph6(p)
    g = parse_graph6(code)
    assert g == p
    assert g.is_cubic() and g.m == 15
    assert nx.girth(nx.from_edgelist(g.edges)) == 5
    assert write_graph6(g) == code


def test_header_and_blank_lines():
    items = list(read_graph6_lines([">>graph6<<C~\n", "\n", "C~\n", "C#\n"]))
    assert [i for i, _ in items] == [0, 1, 2]
    assert items[0][1] == graphs.complete(4)
    assert isinstance(items[2][1], GraphFormatError)


@pytest.mark.parametrize("text", ["", "C", "C~~", "B~", "C\x7f", ":Fa@x^", "&C~"])
def test_malformed(text):
    with pytest.raises(GraphFormatError):
        parse_graph6(text)


def test_error_offset_points_at_bad_byte():
    with pytest.raises(GraphFormatError) as info:
        parse_graph6("E?!?")
    assert info.value.offset == 2


def test_large_order_length_field():
    g = Graph(70, [(0, 69), (5, 6)])
    code = write_graph6(g)
    assert code.startswith("~")
    assert parse_graph6(code) == g
    assert code == nx_graph6(g)


def test_classify_petersen():
    c = classify(graphs.petersen())
    assert c.is_cubic and c.is_3_edge_connected and c.is_cyclically_4_edge_connected
    assert c.is_3_edge_colourable is False


def test_classify_k4_and_path():
    c = classify(graphs.complete(4))
    assert c.is_cubic and c.is_3_edge_connected and c.is_3_edge_colourable
    p = classify(Graph(2, [(0, 1)]))
    assert not p.is_cubic and not p.is_3_edge_connected
    assert p.as_dict()["3col"] is None


def test_graph_rejects_loops_and_duplicates():
    with pytest.raises(ValueError):
        Graph(3, [(0, 0)])
    with pytest.raises(ValueError):
        Graph(3, [(0, 1), (1, 0)])
    with pytest.raises(ValueError):
        Graph(2, [(0, 2)])


def test_edge_index_is_lexicographic():
    g = Graph(4, [(2, 3), (1, 0), (0, 3)])
    assert g.edges == ((0, 1), (0, 3), (2, 3))
    assert g.edge_id(3, 0) == 1


@st.composite
def small_graphs(draw, max_n=40):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for v in range(n) for u in range(v)]
    if not pairs:
        return Graph(n)
    picked = draw(st.lists(st.sampled_from(pairs), unique=True, max_size=len(pairs)))
    return Graph(n, picked)


@settings(max_examples=300, deadline=None)
@given(small_graphs())
def test_round_trip_property(g):
    code = write_graph6(g)
    assert parse_graph6(code) == g
    assert code == nx_graph6(g)


@settings(max_examples=100, deadline=None)
@given(st.integers(2, 30).map(lambda k: 2 * k), st.integers(0, 2**32))
def test_round_trip_random_cubic(n, seed):
    g = graphs.random_cubic(n, random.Random(seed))
    assert parse_graph6(write_graph6(g)) == g
