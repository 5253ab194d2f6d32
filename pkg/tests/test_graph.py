import networkx as nx
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from cliquelab.errors import DomainError, ParseError, SelfLoopError, VertexRangeError
from cliquelab.graph import (Graph, complete_graph, cycle_graph, from_graph6, induced_subgraph,
                             min_degree, parse_graph, petersen_graph, serialize_graph, star_graph,
                             to_graph6)


@st.composite
def graphs(draw, max_n=14):
    n = draw(st.integers(0, max_n))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph(n, chosen)


def test_edge_list_triangle():
    g = parse_graph("0 1\n1 2\n2 0", "edge-list")
    assert g == complete_graph(3)


def test_graph6_k4():
    g = parse_graph("C~", "graph6")
    assert g.n == 4 and g.num_edges() == 6


def test_self_loop_rejected():
    with pytest.raises(SelfLoopError):
        parse_graph("0 0", "edge-list")


def test_edge_list_comments_and_duplicates():
    g = parse_graph("# a triangle\n0 1\n1 0  # again\n1 2\n2 0\n", "edge-list")
    assert g.num_edges() == 3


def test_edge_list_range_error():
    with pytest.raises(VertexRangeError):
        parse_graph("# n=3\n0 5\n", "edge-list")


@pytest.mark.parametrize("text,offset", [("C~!", 2), ("C~~", 2), ("", 0)])
def test_graph6_errors_name_offset(text, offset):
    with pytest.raises(ParseError) as exc:
        from_graph6(text)
    assert exc.value.offset == offset


@pytest.mark.parametrize("n", [0, 1, 5, 62, 63, 100])
def test_graph6_matches_networkx_encoder(n):
    ref = nx.gnp_random_graph(n, 0.3, seed=n)
    g = Graph(n, ref.edges())
    assert to_graph6(g) == nx.to_graph6_bytes(ref, header=False).decode().strip()


def test_graph6_header_accepted():
    assert from_graph6(">>graph6<<C~") == complete_graph(4)


@settings(max_examples=60, deadline=None)
@given(graphs(max_n=20))
def test_round_trip_both_formats(g):
    for fmt in ("graph6", "edge-list"):
        assert parse_graph(serialize_graph(g, fmt), fmt) == g


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_handshake(g):
    assert sum(g.degrees()) == 2 * g.num_edges()


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_induced_on_everything_is_identity(g):
    sub, labels = induced_subgraph(g, range(g.n))
    assert sub == g and labels == list(range(g.n))


@pytest.mark.parametrize("g,expected", [
    (complete_graph(5), 4), (cycle_graph(6), 2), (star_graph(5), 1)])
def test_min_degree(g, expected):
    assert min_degree(g) == expected


def test_min_degree_empty_graph():
    with pytest.raises(DomainError):
        min_degree(Graph(0))


def test_induced_examples():
    assert induced_subgraph(complete_graph(5), [0, 2, 4])[0] == complete_graph(3)
    assert induced_subgraph(cycle_graph(5), [1, 2])[0] == complete_graph(2)


def test_petersen_face_is_c5():
    ref = nx.petersen_graph()
    assert set(petersen_graph().edges()) == {tuple(sorted(e)) for e in ref.edges()}
    sub, _ = induced_subgraph(petersen_graph(), [0, 1, 2, 3, 4])
    assert sub == cycle_graph(5)


def test_induced_out_of_range():
    with pytest.raises(VertexRangeError):
        induced_subgraph(cycle_graph(4), [0, 7])


def test_graph_rejects_bad_edges():
    with pytest.raises(SelfLoopError):
        Graph(3, [(1, 1)])
    with pytest.raises(VertexRangeError):
        Graph(3, [(0, 3)])
