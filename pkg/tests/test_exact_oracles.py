import math
from itertools import product

import networkx as nx
import pytest
from hypothesis import assume, given

from src.errors import BudgetExceeded, DomainError, GuardExceeded
from src.exact_oracles import (
    OracleLimits,
    _Budget,
    chromatic_number,
    greedy_coloring,
    independence_number,
    max_clique,
    maximal_bicliques,
    maximum_independent_set,
    min_biclique_partition,
    min_cover_weight,
)
from src.generators import complete_graph, cycle_graph, path_graph, petersen_graph
from src.graph_core import Biclique, Graph, cover_stats, popcount, validate_cover, validate_partition

from .strategies import small_graphs


def _to_networkx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(1, g.n + 1))
    h.add_edges_from(g.edges)
    return h


def _brute_force_chromatic(g: Graph) -> int:
    if g.n == 0:
        return 0
    for c in range(1, g.n + 1):
        for colors in product(range(c), repeat=g.n):
            if all(colors[u - 1] != colors[v - 1] for u, v in g.edges):
                return c
    return g.n


@pytest.mark.parametrize(
    "g, expected",
    [(complete_graph(4), 4), (cycle_graph(5), 3), (petersen_graph(), 3), (Graph(0), 0), (Graph(3), 1)],
)
def test_chromatic_number(g, expected):
    assert chromatic_number(g) == expected


@pytest.mark.parametrize(
    "g, expected",
    [(complete_graph(6), 1), (cycle_graph(5), 2), (petersen_graph(), 4)],
)
def test_independence_number(g, expected):
    assert independence_number(g) == expected
    assert g.is_independent(maximum_independent_set(g))


@pytest.mark.parametrize(
    "g, expected",
    [(complete_graph(2), 1), (complete_graph(3), 2), (complete_graph(4), 3), (complete_graph(5), 4), (path_graph(3), 1)],
)
def test_min_biclique_partition(g, expected):
    result = min_biclique_partition(g)
    assert result.value == expected
    assert result.witness.m == expected
    assert validate_partition(result.witness).ok
    assert validate_cover(result.witness, g).ok


def test_path_partition_witness_is_the_star():
    result = min_biclique_partition(path_graph(3))
    assert result.witness.as_sets() == [((1, 3), (2,))]


@pytest.mark.parametrize("k, expected", [(2, 2), (3, 5), (4, 8)])
def test_min_cover_weight_of_complete_graphs(k, expected):
    g = complete_graph(k)
    result = min_cover_weight(g)
    assert result.value == expected
    assert result.value >= k * math.log2(k) - 1e-9
    assert validate_cover(result.witness, g).ok
    assert cover_stats(result.witness).weight == expected


def test_witness_bicliques_have_minimum_vertex_on_the_left():
    for b in min_cover_weight(complete_graph(4)).witness.bicliques:
        assert b.left & -b.vertices


def test_edgeless_graph_needs_no_bicliques():
    assert min_biclique_partition(Graph(3)).value == 0
    assert min_cover_weight(Graph(3)).value == 0


def test_maximal_bicliques_of_c4():
    assert maximal_bicliques(cycle_graph(4)) == [Biclique.of({1, 3}, {2, 4})]


def test_maximal_bicliques_of_triangle():
    found = {(b.left_vertices(), b.right_vertices()) for b in maximal_bicliques(complete_graph(3))}
    assert found == {((1,), (2, 3)), ((1, 2), (3,)), ((1, 3), (2,))}


def test_greedy_coloring_is_proper_upper_bound():
    g = petersen_graph()
    colors, used = greedy_coloring(g)
    assert all(colors[u] != colors[v] for u, v in g.edges)
    assert used >= chromatic_number(g)


def test_guards():
    with pytest.raises(GuardExceeded):
        chromatic_number(complete_graph(33))
    with pytest.raises(GuardExceeded):
        min_biclique_partition(complete_graph(7))
    with pytest.raises(GuardExceeded):
        min_cover_weight(complete_graph(6))
    with pytest.raises(GuardExceeded):
        chromatic_number(complete_graph(6), OracleLimits(max_vertices_coloring=5))


def test_limits_must_be_positive():
    with pytest.raises(DomainError):
        OracleLimits(max_edges_partition=0)
    with pytest.raises(DomainError):
        OracleLimits(time_budget=-1.0)


def test_budget_is_checked_every_1024_nodes():
    budget = _Budget(seconds=-1.0)
    for _ in range(1023):
        budget.tick()
    with pytest.raises(BudgetExceeded):
        budget.tick()


@given(small_graphs(max_n=6))
def test_chromatic_number_matches_brute_force(g):
    assert chromatic_number(g) == _brute_force_chromatic(g)


@given(small_graphs(max_n=7))
def test_clique_and_independence_match_networkx(g):
    h = _to_networkx(g)
    _, clique_size = nx.max_weight_clique(h, weight=None)
    _, alpha = nx.max_weight_clique(nx.complement(h), weight=None)
    assert popcount(max_clique(g)) == clique_size
    assert independence_number(g) == alpha


@given(small_graphs(max_n=6))
def test_maximal_bicliques_cover_every_edge(g):
    bicliques = maximal_bicliques(g)
    covered = {e for b in bicliques for e in b.edges()}
    assert covered == set(g.edges)


@given(small_graphs(max_n=6))
def test_cross_oracle_lower_bounds(g):
    assume(g.edges and len(g.edges) <= 10)
    chi = chromatic_number(g)
    alpha = independence_number(g)
    bp = min_biclique_partition(g)
    weight = min_cover_weight(g)
    assert bp.value >= math.ceil(math.log2(chi))
    assert weight.value >= g.n * math.log2(g.n / alpha) - 1e-9
    assert weight.value <= cover_stats(bp.witness).weight
    assert validate_cover(weight.witness, g).ok
    assert validate_partition(bp.witness).ok
