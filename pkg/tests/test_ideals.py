from __future__ import annotations

import pytest
from hypothesis import given
from hypothesis import strategies as st

from binomial_betti.graph import Graph, GraphError, completion_along_edge, delete_edge, is_cut_edge
from binomial_betti.ideals import (
    Colon,
    EdgeIdeal,
    Intersection,
    Principal,
    edge_binomial,
    edge_ideal_spec,
    fine_blocks,
    linear_extension_contained,
    minimal_generator_profile,
    subspaces_equal,
    swap_xy,
    verify_colon_completion,
)
from binomial_betti.polylinalg import span_reduce
from binomial_betti.reference import EXAMPLE_GRAPH
from binomial_betti.splitting import s_partition
from conftest import all_trees, graphs, path, star


def test_edge_binomial_shape():
    f = edge_binomial(3, 1, 3)
    assert len(f) == 2 and sorted(f.values()) == [-1, 1]
    for m in f:
        assert sum(m) == 2
        assert tuple(m[v] + m[3 + v] for v in range(3)) == (1, 0, 1)
        assert (sum(m[:3]), sum(m[3:])) == (1, 1)


def test_single_edge_slices():
    J = edge_ideal_spec(Graph.from_edges(2, [(1, 2)]))
    assert J.slice(2).dim == 1
    assert J.slice(3).dim == 4


def test_example_generators():
    J = edge_ideal_spec(EXAMPLE_GRAPH)
    assert len(J.generators) == 11
    assert J.slice(2).dim == 11


def test_zero_ideal():
    Z = edge_ideal_spec(Graph(3))
    assert all(Z.slice(d).dim == 0 for d in range(4))
    assert minimal_generator_profile(Z, 4) == {}
    assert Z.support == frozenset()


def test_example_intersection_in_degree_3():
    part = s_partition(EXAMPLE_GRAPH, 1)
    assert part.JK.slice(3).dim == 10


def test_example_profiles():
    assert minimal_generator_profile(edge_ideal_spec(EXAMPLE_GRAPH), 3) == {2: 11}
    part = s_partition(EXAMPLE_GRAPH, 1)
    assert minimal_generator_profile(part.JK, 4) == {3: 10, 4: 5}


def test_colon_of_star_minus_edge():
    H = delete_edge(star(4), (1, 4))
    C = Colon(EdgeIdeal(H), edge_binomial(4, 1, 4))
    assert C.slice(2).dim == 3
    assert verify_colon_completion(H, (1, 4), 5)


def test_colon_for_path():
    # the path 1-2-3 with pendant edge {3,4} removed
    H = Graph.from_edges(4, [(1, 2), (2, 3)])
    assert verify_colon_completion(H, (3, 4), 6)


def test_colon_precondition():
    with pytest.raises(GraphError):
        verify_colon_completion(path(3), (1, 3), 3)  # {1,3} closes a cycle
    with pytest.raises(GraphError):
        verify_colon_completion(path(3), (1, 2), 3)  # already an edge


def test_blocks_assemble_the_slice():
    J = edge_ideal_spec(Graph.from_edges(3, [(1, 2), (2, 3)]))
    for d in range(5):
        assert subspaces_equal(J.slice(d), J.slice_from_blocks(d))


def test_principal_ideal():
    P = Principal(2, edge_binomial(2, 1, 2))
    assert minimal_generator_profile(P, 4) == {2: 1}
    assert P.slice(4).dim == 10  # dim R_2 in four variables


@given(graphs(max_n=4))
def test_edge_ideals_are_minimally_generated_by_edges(G):
    prof = minimal_generator_profile(EdgeIdeal(G), 3)
    assert prof == ({2: G.num_edges} if G.edges else {})


@given(graphs(max_n=4), st.integers(0, 3))
def test_ideal_property(G, d):
    assert linear_extension_contained(EdgeIdeal(G), d)


@given(graphs(max_n=4), st.data())
def test_intersection_is_symmetric(G, data):
    if len(G.edges) < 2:
        return
    J_edges = data.draw(st.lists(st.sampled_from(G.edges), unique=True, min_size=1, max_size=len(G.edges) - 1))
    K_edges = [e for e in G.edges if e not in J_edges]
    A, B = EdgeIdeal(G, J_edges), EdgeIdeal(G, K_edges)
    for d in range(5):
        assert subspaces_equal(Intersection(A, B).slice(d), Intersection(B, A).slice(d))
    assert linear_extension_contained(Intersection(A, B), 3)


@given(graphs(max_n=4), st.integers(2, 4))
def test_swap_symmetry_of_edge_ideals(G, d):
    S = EdgeIdeal(G).slice(d)
    swapped = [{S.index[swap_xy(S.basis[c])]: v for c, v in r.items()} for r in S.rows]
    assert span_reduce(swapped, S.basis, d).rows == S.rows


@pytest.mark.parametrize("T", all_trees(5), ids=str)
def test_intersection_shift_dimensions(T):
    # dim (J_{T∖e} ∩ <f_e>)_d = dim (J_{(T∖e)_e})_{d-2} for each cut edge
    for e in T.edges:
        assert is_cut_edge(T, e)
        H = delete_edge(T, e)
        meet = Intersection(EdgeIdeal(H), EdgeIdeal(T, [e]))
        completed = EdgeIdeal(completion_along_edge(H, e))
        for d in range(2, 6):
            assert meet.slice(d).dim == completed.slice(d - 2).dim


def test_support_and_fine_blocks():
    J = EdgeIdeal(Graph.from_edges(4, [(1, 3)]))
    assert J.support == frozenset({1, 3})
    blocks = list(fine_blocks(4, 2, sorted(J.support), 2))
    assert all(a[1] == 0 and a[3] == 0 for a, _ in blocks)
    assert len(blocks) == 3 * 3  # a in {2e_1, e_1 + e_3, 2e_3}, b = 0..2
