import itertools
import math

import numpy as np
import pytest

from pulsar.graph import (
    Graph,
    build_complete,
    build_hypercube,
    build_johnson,
    build_star,
    johnson_star,
    wedge,
    write_edgelist,
)


def edge_set(g):
    return {tuple(sorted(e)) for e in g.edges.tolist()}


def brute_force_johnson_edges(n, k):
    verts = list(itertools.combinations(range(n), k))
    return {
        (i, j)
        for i, j in itertools.combinations(range(len(verts)), 2)
        if len(set(verts[i]) & set(verts[j])) == k - 1
    }


@pytest.mark.parametrize("n,k", [(3, 1), (5, 2), (7, 3), (9, 2), (10, 4)])
def test_johnson_matches_brute_force(n, k):
    g = build_johnson(n, k)
    assert g.vertex_count == math.comb(n, k)
    assert np.all(g.degree == k * (n - k))
    assert g.arc_count == g.vertex_count * k * (n - k)
    assert edge_set(g) == brute_force_johnson_edges(n, k)


def test_johnson_examples():
    g = build_johnson(5, 2)
    assert (g.vertex_count, g.arc_count) == (10, 60)
    assert set(g.degree.tolist()) == {6}
    g = build_johnson(7, 3)
    assert g.vertex_count == 35 and set(g.degree.tolist()) == {12}


def test_johnson_k1_is_complete():
    for n in (3, 4, 6):
        assert edge_set(build_johnson(n, 1)) == edge_set(build_complete(n))


def test_complete3_isomorphic_to_johnson31():
    a, b = edge_set(build_complete(3)), edge_set(build_johnson(3, 1))
    isos = [p for p in itertools.permutations(range(3))
            if {tuple(sorted((p[u], p[v]))) for u, v in a} == b]
    assert isos


@pytest.mark.parametrize("n,k", [(4, 2), (6, 3), (3, 0), (5, 5)])
def test_johnson_rejects_small_or_invalid(n, k):
    with pytest.raises(ValueError):
        build_johnson(n, k)


def test_johnson_nonstrict_allows_balanced_case():
    g = build_johnson(6, 3, strict=False)
    assert g.vertex_count == 20 and set(g.degree.tolist()) == {9}


def test_inverse_is_fixed_point_free_involution():
    for g in (build_johnson(6, 2), build_hypercube(4), build_star(3)):
        inv = g.inverse
        a = np.arange(g.arc_count)
        assert np.all(inv[inv] == a)
        assert np.all(inv != a)
        assert np.all(g.origin[inv] == g.terminus)
        assert np.all(g.terminus[inv] == g.origin)
        assert np.all(np.bincount(g.origin, minlength=g.vertex_count) == g.degree)
        assert g.is_simple() and g.is_connected()


def test_star():
    s = build_star(1)
    assert (s.vertex_count, s.arc_count) == (2, 2)
    s = build_star(5)
    assert s.degree[0] == 5
    assert np.sum(build_star(3).degree == 1) == 3
    with pytest.raises(ValueError):
        build_star(0)


def test_hypercube():
    assert build_hypercube(1).arc_count == 2
    q = build_hypercube(3)
    assert (q.vertex_count, q.arc_count) == (8, 24)
    for u, v in q.edges.tolist():
        assert bin(u ^ v).count("1") == 1
    q10 = build_hypercube(10)
    assert q10.vertex_count == 1024 and set(q10.degree.tolist()) == {10}
    for bad in (0, 21):
        with pytest.raises(ValueError):
            build_hypercube(bad)


def test_complete():
    assert build_complete(2).arc_count == 2
    assert build_complete(30).arc_count == 870
    with pytest.raises(ValueError):
        build_complete(1)


def test_wedge_johnson_star():
    w = wedge(build_johnson(15, 2), 7, build_star(1), 0)
    assert w.graph.vertex_count == 106
    assert w.graph.degree[7] == 27
    assert w.first_arc_count == 105 * 26
    assert w.in_second.sum() == 2
    assert len(w.leaf_set) == 1
    (leaf,) = w.leaf_set
    assert w.graph.degree[leaf] == 1


def test_wedge_complete_complete_and_path():
    w = wedge(build_complete(30), 3, build_complete(30), 11)
    assert w.graph.vertex_count == 59
    assert w.graph.degree[3] == 58
    assert not w.leaf_set
    p = wedge(build_star(1), 1, build_star(1), 1)
    assert p.graph.vertex_count == 3
    assert sorted(p.graph.degree.tolist()) == [1, 1, 2]


def test_wedge_degree_sum_and_connectivity():
    for w in (johnson_star(8, 2, 5), wedge(build_hypercube(4), 0, build_star(3), 0)):
        g = w.graph
        assert g.degree.sum() == 2 * g.edge_count
        assert g.is_connected()
        assert np.all(g.terminus[w.in_second] != -1)
        # every star arc touches v* or a leaf
        touch = np.isin(g.origin[w.in_second], list(w.leaf_set) + [w.v_star])
        assert touch.all()


def test_johnson_star_center_degree():
    w = johnson_star(9, 3, 4)
    assert w.graph.degree[w.v_star] == 3 * 6 + 4


def test_wedge_rejects_bad_vertex():
    with pytest.raises(ValueError):
        wedge(build_complete(3), 3, build_star(1), 0)
    with pytest.raises(ValueError):
        wedge(build_complete(3), 0, build_star(1), -1)


def test_graph_rejects_unpaired_arcs():
    with pytest.raises(ValueError):
        Graph(2, np.array([0, 0]), np.array([1, 1]))


def test_edgelist_dump(tmp_path):
    path = tmp_path / "k3.txt"
    write_edgelist(build_complete(3), path)
    assert path.read_text().splitlines() == ["0 1", "0 2", "1 2"]
