import numpy as np
from hypothesis import given, strategies as st

from conftest import complete, graphs, path
from dynsep.generators import gen_trace, gnp
from dynsep.graph import Graph
from dynsep.mis import DynamicMis
from dynsep.oracles import ShadowGraph, oracle_mis_check


def test_init_examples():
    assert DynamicMis(Graph(4)).members() == {0, 1, 2, 3}
    assert DynamicMis(complete(4)).members() == {0}
    assert DynamicMis(path(3)).members() == {0, 2}


def test_delete_k2_admits_other_endpoint():
    m = DynamicMis(Graph(2, [(0, 1)]))
    assert m.delete(0, 1) == [(1, True)]
    assert m.members() == {0, 1} and m.recourse_total == 1


def test_insert_evicts_larger_id():
    m = DynamicMis(path(3))
    assert m.insert(0, 2) == [(2, False)]
    assert m.members() == {0}
    m.check()


def test_insert_with_one_endpoint_in_set_is_silent():
    m = DynamicMis(Graph(4, [(0, 1)]))
    assert m.insert(1, 2) == []
    assert m.members() == {0, 2, 3}


def test_eviction_readmits_undominated_neighbours():
    # 1 and 2 hang off 3 only; evicting 3 frees both
    m = DynamicMis(Graph(5, [(1, 3), (2, 3), (0, 4)]))
    assert m.members() == {0, 1, 2}
    m.delete(1, 3)
    m.delete(2, 3)
    assert m.members() == {0, 1, 2, 3}
    delta = m.insert(0, 3)
    assert delta == [(3, False)]
    m.check()


def test_copy_flag():
    g = path(3)
    m = DynamicMis(g, copy=False)
    m.insert(0, 2)
    assert g.has_edge(0, 2)


@given(st.integers(2, 20).flatmap(lambda n: st.tuples(
    st.just(n), st.lists(st.tuples(st.integers(0, n - 1), st.integers(0, n - 1)), max_size=80))))
def test_invariants_under_toggles(case):
    n, toggles = case
    m = DynamicMis(Graph(n))
    shadow = ShadowGraph(n)
    for u, v in toggles:
        if u == v:
            continue
        before = m.members()
        if shadow.has(u, v):
            delta = m.delete(u, v)
            shadow.remove(u, v)
        else:
            delta = m.insert(u, v)
            shadow.add(u, v)
        m.check()
        assert oracle_mis_check(shadow, m.members())
        after = m.members()
        assert sorted((x, x in after) for x in before ^ after) == delta


@given(graphs(max_n=14))
def test_init_is_greedy_by_id(g):
    chosen = set()
    for v in range(g.n):
        if not any(g.has_edge(v, w) for w in chosen):
            chosen.add(v)
    assert DynamicMis(g).members() == chosen


def test_determinism():
    g = gnp(60, 0.1, seed=1)
    trace = gen_trace(g, "random", seed=5, steps=2000)
    runs = []
    for _ in range(2):
        m = DynamicMis(g)
        traj = []
        for o in trace.ops:
            (m.insert if o.op == "ins" else m.delete)(o.u, o.v)
            traj.append(tuple(sorted(m.members())))
        runs.append(traj)
    assert runs[0] == runs[1]


def test_amortized_work_is_linear_in_degree():
    """Total work stays within a small multiple of max degree times updates."""
    ratios = []
    for n, p in [(64, 0.1), (128, 0.1), (128, 0.3)]:
        g = gnp(n, p, seed=n)
        trace = gen_trace(g, "random", seed=1, steps=4000, p_insert=0.5)
        m = DynamicMis(g)
        peak = g.max_degree()
        for o in trace.ops:
            (m.insert if o.op == "ins" else m.delete)(o.u, o.v)
            peak = max(peak, m.g.max_degree()) if o.op == "ins" else peak
        ratios.append(m.work / (peak * len(trace)))
    assert max(ratios) < 4, ratios
