import pytest
from hypothesis import given, strategies as st

from conftest import complete, graphs
from dynsep.graph import Graph, GraphError, complement_induced, read_edge_list, write_edge_list
from dynsep.oracles import ShadowGraph


def test_new_graph_k3():
    g = Graph(3, [(0, 1), (1, 2), (0, 2)])
    assert g.m == 3 and g.degree == [2, 2, 2]


def test_new_graph_empty():
    g = Graph(4)
    assert g.m == 0 and list(g.edges()) == []


def test_new_graph_k4():
    g = complete(4)
    assert g.m == 6 and g.degree == [3, 3, 3, 3]


@pytest.mark.parametrize("edges", [[(0, 1), (1, 0)], [(1, 1)], [(0, 3)], [(-1, 0)]])
def test_new_graph_rejects(edges):
    with pytest.raises(GraphError):
        Graph(3, edges)


def test_delete_from_k3_leaves_path():
    g = complete(3)
    g.delete_edge(0, 1)
    assert g.m == 2 and list(g.edges()) == [(0, 2), (1, 2)]


def test_insert_into_empty():
    g = Graph(2)
    g.insert_edge(0, 1)
    assert g.m == 1 and g.has_edge(1, 0)


def test_delete_reinsert_is_identity():
    g = complete(5)
    h = g.copy()
    g.delete_edge(2, 4)
    g.insert_edge(4, 2)
    assert g == h and g.rows == h.rows


def test_contract_violations_are_signalled():
    g = complete(3)
    with pytest.raises(GraphError):
        g.insert_edge(0, 1)
    g.delete_edge(0, 1)
    with pytest.raises(GraphError):
        g.delete_edge(1, 0)


def test_complement_induced_examples():
    h, ids = complement_induced(complete(3), [1, 2])
    assert h.m == 0 and ids == [1, 2]
    h, _ = complement_induced(Graph(3), [0, 1, 2])
    assert h == complete(3)
    k4_minus = complete(4)
    k4_minus.delete_edge(2, 3)
    h, ids = complement_induced(k4_minus, [1, 2, 3])
    assert [(ids[a], ids[b]) for a, b in h.edges()] == [(2, 3)]


def test_delete_vertex_edges():
    g = complete(4)
    removed = g.delete_vertex_edges(2)
    assert sorted(removed) == [(0, 2), (1, 2), (2, 3)] and g.degree[2] == 0 and g.m == 3


def test_edge_list_roundtrip(tmp_path):
    g = Graph(5, [(0, 4), (1, 2), (3, 4)])
    write_edge_list(g, tmp_path / "g.txt")
    assert (tmp_path / "g.txt").read_text().splitlines()[0] == "5 3"
    assert read_edge_list(tmp_path / "g.txt") == g


def _check_invariants(g: Graph):
    for u in range(g.n):
        assert not (g.rows[u] >> u) & 1
        assert g.degree[u] == g.rows[u].bit_count()
        for v in range(g.n):
            assert ((g.rows[u] >> v) & 1) == ((g.rows[v] >> u) & 1)
    assert 2 * g.m == sum(g.degree)


@given(st.integers(2, 10).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=60))))
def test_updates_agree_with_shadow_model(case):
    n, toggles = case
    g, shadow = Graph(n), ShadowGraph(n)
    for u, v in toggles:
        if u == v:
            continue
        if shadow.has(u, v):
            g.delete_edge(u, v)
            shadow.remove(u, v)
        else:
            g.insert_edge(u, v)
            shadow.add(u, v)
        _check_invariants(g)
    assert list(g.edges()) == shadow.edges()
    assert all(g.has_edge(u, v) == shadow.has(u, v) for u in range(n) for v in range(n) if u != v)


@given(graphs())
def test_complement_is_an_involution(g):
    everything = list(range(g.n))
    once, _ = complement_induced(g, everything)
    twice, _ = complement_induced(once, everything)
    assert twice == g and twice.rows == g.rows


@given(graphs(min_n=1))
def test_induced_matches_definition(g):
    s = list(range(0, g.n, 2))
    h, ids = g.induced(s)
    for a in range(h.n):
        for b in range(h.n):
            if a != b:
                assert h.has_edge(a, b) == g.has_edge(ids[a], ids[b])


@given(graphs())
def test_to_numpy_is_the_adjacency_matrix(g):
    a = g.to_numpy()
    assert a.shape == (g.n, g.n)
    assert all(bool(a[u, v]) == g.has_edge(u, v) for u in range(g.n) for v in range(g.n) if u != v)
    assert not a.diagonal().any()
