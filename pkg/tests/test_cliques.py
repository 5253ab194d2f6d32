import random
from math import comb

import pytest

from cliquelab.cliques import enumerate_r_cliques, is_kl_free
from cliquelab.constructions import complete_multipartite
from cliquelab.graph import Graph, complete_graph, cycle_graph, gnp, petersen_graph

from oracles import brute_cliques, edge_set


def test_examples():
    assert len(enumerate_r_cliques(complete_graph(5), 3)) == 10
    assert len(enumerate_r_cliques(cycle_graph(5), 3)) == 0
    octa = complete_multipartite([2, 2, 2]).graph
    assert len(enumerate_r_cliques(octa, 3)) == 8


def test_r_larger_than_n_is_empty():
    assert enumerate_r_cliques(complete_graph(3), 5).cliques == []


def test_kl_free_examples():
    assert is_kl_free(cycle_graph(5), 3) == (True, None)
    assert is_kl_free(complete_graph(4), 4) == (False, (0, 1, 2, 3))
    assert is_kl_free(petersen_graph(), 3)[0]


@pytest.mark.parametrize("n", range(1, 13))
def test_complete_graph_counts(n):
    for r in range(1, n + 1):
        assert len(enumerate_r_cliques(complete_graph(n), r)) == comb(n, r)


def test_cap_truncates_explicitly():
    cl = enumerate_r_cliques(complete_graph(6), 3, cap=4)
    assert cl.truncated and len(cl) == 4
    assert cl.cliques == enumerate_r_cliques(complete_graph(6), 3).cliques[:4]
    assert not enumerate_r_cliques(complete_graph(6), 3, cap=20).truncated


@pytest.mark.parametrize("seed", range(40))
def test_against_brute_force(seed):
    rng = random.Random(seed)
    n = rng.randint(1, 15)
    g = gnp(n, rng.uniform(0.2, 0.8), seed)
    E = edge_set(g)
    for r in (2, 3, 4):
        listed = enumerate_r_cliques(g, r).cliques
        assert listed == brute_cliques(n, E, r)  # same canonical order
        assert all(g.is_clique(c) for c in listed)
        free, _ = is_kl_free(g, r)
        assert free == (len(enumerate_r_cliques(g, r, cap=1)) == 0)


def test_empty_graph():
    assert enumerate_r_cliques(Graph(4), 1).cliques == [(0,), (1,), (2,), (3,)]
