import numpy as np
import pytest
from hypothesis import given

from revmarkov.errors import CapExceededError, DisconnectedGraphError, DuplicateEdgeError, GraphError, UnknownLabelError
from revmarkov.graph import (
    bfs_spanning_tree,
    build_graph,
    complete_graph,
    cycle_basis,
    enumerate_spanning_trees,
    is_spanning_tree,
    kirchhoff_count,
    lift_path,
    line_graph,
    loop_transform,
)
from revmarkov.paths import Path

from helpers import graphs, triangle


class TestConstruction:
    def test_triangle_counts(self):
        g = triangle()
        assert (g.num_vertices, g.num_edges, g.loops, g.cycle_rank) == (3, 3, (), 1)

    def test_complete_with_loops_order(self):
        g = complete_graph("abc")
        assert g.edges == ((0, 0), (0, 1), (0, 2), (1, 1), (1, 2), (2, 2))
        assert g.loops == (0, 3, 5)
        assert g.cycle_rank == 1

    def test_edge_lookup_is_symmetric(self):
        g = complete_graph("acgt")
        assert g.edge_id(1, 3) == g.edge_id(3, 1)
        assert g.edge_label(g.edge_id(3, 1)) == "c-t"
        assert g.other_end(g.edge_id(0, 0), 0) == 0

    def test_duplicate_edge(self):
        with pytest.raises(DuplicateEdgeError):
            build_graph("ab", [("a", "b"), ("b", "a")])

    def test_disconnected(self):
        with pytest.raises(DisconnectedGraphError):
            build_graph("abcd", [("a", "b"), ("c", "d")])

    def test_unknown_label(self):
        with pytest.raises(UnknownLabelError):
            build_graph("ab", [("a", "z")])

    def test_needs_an_edge(self):
        with pytest.raises(GraphError):
            build_graph("a", [])

    def test_single_loop_graph(self):
        g = build_graph("a", [("a", "a")])
        assert g.cycle_rank == 0
        assert kirchhoff_count(g) == 1

    def test_incidence_counts_loops_once(self):
        g = complete_graph("ab")
        np.testing.assert_array_equal(g.incidence(), [[1, 1, 0], [0, 1, 1]])


class TestSpanningTrees:
    def test_k4_has_16_trees(self):
        g = complete_graph(range(4), loops=False)
        assert len(enumerate_spanning_trees(g)) == 16 == kirchhoff_count(g)

    def test_trees_keep_every_loop(self):
        g = complete_graph(range(3))
        for t in enumerate_spanning_trees(g):
            assert set(g.loops) <= t.edges
            assert len(t.edges) == g.num_vertices - 1 + len(g.loops)

    def test_cap(self):
        with pytest.raises(CapExceededError):
            enumerate_spanning_trees(complete_graph(range(6), loops=False), cap=100)

    @given(graphs(max_vertices=6))
    def test_enumeration_matches_kirchhoff(self, g):
        trees = enumerate_spanning_trees(g)
        assert len(trees) == kirchhoff_count(g)
        assert len({t.edges for t in trees}) == len(trees)
        assert all(is_spanning_tree(g, t.edges) for t in trees)

    @given(graphs(max_vertices=6))
    def test_bfs_tree_is_spanning(self, g):
        assert is_spanning_tree(g, bfs_spanning_tree(g).edges)


class TestCycleBasis:
    def test_k4_star_basis(self):
        g = complete_graph(range(4), loops=False)
        cycles = [c.vertices(g) for c in cycle_basis(g)]
        assert cycles == [(1, 2, 0, 1), (1, 3, 0, 1), (2, 3, 0, 2)]

    @given(graphs(max_vertices=6))
    def test_basis_size_and_closure(self, g):
        basis = cycle_basis(g)
        assert len(basis) == g.cycle_rank
        for cyc in basis:
            verts = cyc.vertices(g)
            assert verts[0] == verts[-1]
            Path(g, verts)  # every step is an edge
            assert not any(g.is_loop(e) for e in cyc.edge_ids)

    @given(graphs(max_vertices=6))
    def test_cycles_have_zero_boundary(self, g):
        # signed vertex-edge incidence annihilates every oriented cycle
        for cyc in cycle_basis(g):
            boundary = np.zeros(g.num_vertices)
            for e, forward in cyc.steps:
                u, v = g.edges[e]
                tail, head = (u, v) if forward else (v, u)
                boundary[tail] -= 1
                boundary[head] += 1
            assert not boundary.any()

    @given(graphs(max_vertices=6))
    def test_basis_is_independent(self, g):
        from revmarkov.prior import cycle_sign_matrix

        c = cycle_sign_matrix(g, cycle_basis(g))
        assert np.linalg.matrix_rank(c) == g.cycle_rank if g.cycle_rank else c.shape[0] == 0


class TestLoopTransform:
    def test_line_with_loops(self):
        g = build_graph("abc", [("a", "a"), ("a", "b"), ("b", "c"), ("c", "c")])
        g2, edge_map, vertex_map = loop_transform(g)
        assert g2.loops == ()
        assert g2.num_edges == g.num_edges
        assert g2.num_vertices == g.num_vertices + 2
        assert g2.labels[vertex_map[0]] == "a'"
        lifted = lift_path(g, (0, 0, 1, 2, 2), vertex_map)
        Path(g2, lifted)

    @given(graphs(max_vertices=5, loops=True))
    def test_tree_count_preserved(self, g):
        g2, _, _ = loop_transform(g)
        assert kirchhoff_count(g2) == kirchhoff_count(g)


def test_line_graph():
    g = line_graph(4)
    assert g.edges == ((0, 1), (1, 2), (2, 3), (3, 4))
