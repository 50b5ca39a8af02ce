import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from domcore.errors import ParseError
from domcore.graph import (
    UNREACHABLE,
    betweenness,
    bfs_shortest_paths,
    build_graph,
    canonical_edge_lines,
    closed_neighborhood,
    clustering_coefficients,
    connected_components,
    drop_isolated,
    erdos_renyi,
    parse_edge_lines,
    read_edge_list,
    sorted_subset,
    two_hop_neighborhood,
    write_edge_list,
)

from oracles import brute_betweenness, to_nx

SQUARE_EAR = [(1, 2), (2, 3), (3, 4), (4, 1), (1, 5), (1, 6), (5, 6)]


def cycle(n):
    return build_graph([(i, i % n + 1) for i in range(1, n + 1)])


def ext_set(g, nodes):
    return set(g.to_external(nodes))


edge_lists = st.lists(st.tuples(st.integers(0, 15), st.integers(0, 15)), max_size=40)


class TestBuild:
    def test_dedup_and_self_loops(self):
        g = build_graph([(1, 2), (2, 1), (2, 2), (2, 3)])
        assert g.node_count == 3
        assert {tuple(g.to_external(e)) for e in g.edges()} == {(1, 2), (2, 3)}

    def test_empty(self):
        g = build_graph([])
        assert (g.node_count, g.edge_count) == (0, 0)

    def test_bad_pair(self):
        with pytest.raises(ParseError):
            build_graph([(1, 2, 3)])

    def test_parse_reports_line(self):
        with pytest.raises(ParseError) as exc:
            parse_edge_lines(["# c", "1\t2", "3"], path="f.txt")
        assert exc.value.line == 3
        assert "f.txt:3" in str(exc.value)

    def test_string_ids_keep_identity(self):
        g = build_graph([("a", "b"), ("b", 7)])
        assert g.to_external(range(3)) == [7, "a", "b"]

    def test_node_list_keeps_isolated(self):
        g = build_graph([(1, 2)], nodes=[9])
        assert g.node_count == 3 and g.degree(g.index(9)) == 0
        assert drop_isolated(g).node_count == 2

    @given(edge_lists)
    def test_round_trip(self, edges):
        g = build_graph(edges)
        g2 = build_graph(tuple(int(x) for x in line.split("\t")) for line in canonical_edge_lines(g))
        assert canonical_edge_lines(g2) == canonical_edge_lines(g)

    def test_round_trip_file(self, tmp_path):
        src = tmp_path / "in.txt"
        src.write_text("# header\n3\t1\n1\t3\n2\t3\n\n3\t3\n")
        g = read_edge_list(src)
        out = tmp_path / "out.txt"
        write_edge_list(g, out)
        assert out.read_text() == "1\t3\n2\t3\n"
        write_edge_list(read_edge_list(out), tmp_path / "again.txt")
        assert (tmp_path / "again.txt").read_bytes() == out.read_bytes()


class TestNeighborhoods:
    def test_closed(self):
        tri = build_graph([(1, 2), (2, 3), (3, 1)])
        assert ext_set(tri, closed_neighborhood(tri, tri.index(1)).members) == {1, 2, 3}
        path = build_graph([(1, 2), (2, 3)])
        assert ext_set(path, closed_neighborhood(path, path.index(1)).members) == {1, 2}
        iso = build_graph([], nodes=[4])
        assert ext_set(iso, closed_neighborhood(iso, 0).members) == {4}

    def test_two_hop(self):
        path = build_graph([(1, 2), (2, 3), (3, 4), (4, 5)])
        assert ext_set(path, two_hop_neighborhood(path, path.index(1)).members) == {1, 2, 3}
        c4 = cycle(4)
        assert ext_set(c4, two_hop_neighborhood(c4, c4.index(1)).members) == {1, 2, 3, 4}
        c7 = cycle(7)
        assert ext_set(c7, two_hop_neighborhood(c7, c7.index(1)).members) == {6, 7, 1, 2, 3}

    def test_bad_index(self):
        g = cycle(4)
        with pytest.raises(IndexError):
            closed_neighborhood(g, 4)
        with pytest.raises(IndexError):
            two_hop_neighborhood(g, -1)

    def test_sorted_subset(self):
        assert sorted_subset([1, 3], [0, 1, 2, 3])
        assert not sorted_subset([1, 4], [0, 1, 2, 3])
        assert sorted_subset([], [1])


class TestPaths:
    def test_path(self):
        g = build_graph([(1, 2), (2, 3)])
        ps = bfs_shortest_paths(g, g.index(1))
        assert [ps.dist[g.index(x)] for x in (1, 2, 3)] == [0, 1, 2]
        assert [ps.sigma[g.index(x)] for x in (1, 2, 3)] == [1, 1, 1]

    def test_c4(self):
        g = cycle(4)
        ps = bfs_shortest_paths(g, g.index(1))
        assert ps.dist[g.index(3)] == 2 and ps.sigma[g.index(3)] == 2

    def test_unreachable(self):
        g = build_graph([(1, 2)], nodes=[3])
        ps = bfs_shortest_paths(g, g.index(1))
        assert ps.dist[g.index(3)] == UNREACHABLE and ps.sigma[g.index(3)] == 0


class TestBetweenness:
    def test_examples(self):
        g = build_graph([(1, 2), (2, 3)])
        assert list(betweenness(g).values) == [0.0, 1.0, 0.0]
        star = build_graph([("c", 1), ("c", 2), ("c", 3)])
        assert betweenness(star).values[star.index("c")] == 3.0
        assert np.allclose(betweenness(cycle(4)).values, 0.5)

    def test_brute_force_oracle(self):
        for seed in range(40):
            g = erdos_renyi(4 + seed % 9, 0.35, seed)
            expected = [float(x) for x in brute_betweenness(g)]
            assert np.allclose(betweenness(g).values, expected, atol=1e-9), seed

    def test_networkx_cross_check(self):
        g = erdos_renyi(60, 0.08, 5)
        ref = nx.betweenness_centrality(to_nx(g), normalized=False)
        assert np.allclose(betweenness(g).values, [ref[v] for v in range(g.node_count)])

    def test_workers_do_not_change_result(self):
        g = erdos_renyi(150, 0.05, 11)
        one = betweenness(g, workers=1).values
        two = betweenness(g, workers=2).values
        assert np.array_equal(one, two)

    def test_sampled(self):
        g = erdos_renyi(30, 0.2, 2)
        exact = betweenness(g)
        full = betweenness(g, k=g.node_count, seed=4)
        assert np.allclose(full.values, exact.values) and not full.clamped
        clamped = betweenness(g, k=1000, seed=4)
        assert clamped.clamped and clamped.exact
        assert np.allclose(clamped.values, exact.values)
        s1 = betweenness(g, k=10, seed=9)
        s2 = betweenness(g, k=10, seed=9)
        assert not s1.exact and len(s1.pivots) == 10
        assert np.array_equal(s1.values, s2.values)


class TestClustering:
    def test_examples(self):
        tri = build_graph([(1, 2), (2, 3), (3, 1)])
        c = clustering_coefficients(tri)
        assert c.mean == 1.0 and set(c.coefficients.values()) == {1.0}
        star = build_graph([(0, 1), (0, 2), (0, 3)])
        assert set(clustering_coefficients(star).coefficients.values()) == {0.0}

    def test_networkx_cross_check(self):
        g = erdos_renyi(40, 0.2, 3)
        ref = nx.clustering(to_nx(g))
        got = clustering_coefficients(g).coefficients
        assert all(abs(got[v] - ref[v]) < 1e-12 for v in range(g.node_count))

    def test_induced_scope(self):
        g = build_graph(SQUARE_EAR)
        sub = [g.index(x) for x in (1, 5, 6, 2)]
        induced = clustering_coefficients(g, sub, "induced").coefficients
        ref = nx.clustering(to_nx(g).subgraph(sub))
        assert all(abs(induced[v] - ref[v]) < 1e-12 for v in sub)


class TestComponents:
    def test_examples(self):
        g = build_graph([(1, 2), (3, 4)])
        assert sorted(len(c) for c in connected_components(g)) == [2, 2]
        assert connected_components(g, []) == []
        ear = build_graph(SQUARE_EAR)
        comps = connected_components(ear, [ear.index(5), ear.index(6)])
        assert [ext_set(ear, c) for c in comps] == [{5, 6}]

    @settings(max_examples=50)
    @given(edge_lists)
    def test_matches_networkx(self, edges):
        g = build_graph(edges)
        ours = {frozenset(c) for c in connected_components(g)}
        assert ours == {frozenset(c) for c in nx.connected_components(to_nx(g))}


def test_sorted_merge_subset_matches_sets():
    for seed in range(1000):
        g = erdos_renyi(2 + seed % 49, (0.05, 0.15, 0.3)[seed % 3], seed)
        closed = [tuple(sorted(g.adjacency[v] + (v,))) for v in range(g.node_count)]
        for u, v in g.edges():
            for a, b in ((u, v), (v, u)):
                assert sorted_subset(closed[a], closed[b]) == (set(closed[a]) <= set(closed[b]))


def test_bfs_distances_symmetric():
    for seed in range(30):
        g = erdos_renyi(25, 0.1, seed)
        dist = [bfs_shortest_paths(g, v).dist for v in range(g.node_count)]
        assert all(dist[u][v] == dist[v][u] for u in range(25) for v in range(25))
