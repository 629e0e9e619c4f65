import json

import pytest
from hypothesis import given, settings, strategies as st

from netcode.errors import CycleError, MincutError, NetworkError, NodeDisjointnessError
from netcode.netgen import butterfly, chain, combination, example1_net, fig2_cascade, random_acyclic
from netcode.netgraph import (
    Network,
    depth_vectors,
    equal_depth,
    flow_decompose,
    load_network,
    mincut,
    node_disjoint_paths,
)


def _simple(edges, h=1, demands=(1,)):
    nodes = sorted({x for e in edges for x in e})
    return Network(
        nodes,
        [{"id": i + 1, "tail": a, "head": b} for i, (a, b) in enumerate(edges)],
        [{"node": "s", "h": h}],
        [{"node": "t", "demands": list(demands)}],
    )


def test_rejects_cycles():
    with pytest.raises(CycleError):
        _simple([("s", "a"), ("a", "b"), ("b", "a"), ("b", "t")])


def test_rejects_bad_roles():
    with pytest.raises(NetworkError):
        _simple([("s", "t"), ("a", "s"), ("s", "a")])
    with pytest.raises(NetworkError):
        _simple([("s", "t")], demands=(2,))


def test_imaginary_edges():
    n = butterfly()
    assert [e for e in n.full_order() if isinstance(e, str) and e.startswith("x")] == ["x1", "x2"]
    assert list(n.preds(1)) == ["x1", "x2"]
    assert list(n.sink("t1").edges) == ["t1#1", "t1#2"]
    assert set(n.preds("t1#1")) == {6, 8}


def test_topo_order_respects_edges():
    n = fig2_cascade()
    pos = {e: i for i, e in enumerate(n.topo_order())}
    for e in n.topo_order():
        for p in n.preds(e):
            if p in pos:
                assert pos[p] < pos[e]


def test_json_round_trip(tmp_path):
    n = fig2_cascade()
    assert load_network(n.to_json()) == n
    path = tmp_path / "net.json"
    path.write_text(json.dumps(n.to_dict()))
    assert load_network(str(path)) == n


def test_mincuts():
    n = butterfly()
    assert mincut(n, "t1") == mincut(n, "t2") == 2
    assert all(mincut(combination(5, 3), t.node) == 3 for t in combination(5, 3).sinks)
    starved = _simple([("s", "a"), ("a", "t")], h=2, demands=(1, 2))
    with pytest.raises(MincutError) as exc:
        flow_decompose(starved)
    assert list(exc.value.sinks) == ["t"]


def test_flow_paths_are_edge_disjoint_chains():
    n = fig2_cascade()
    fd = flow_decompose(n)
    for t in n.sinks:
        paths = fd.paths[t.node]
        assert len(paths) == 2
        real = [e for p in paths for e in p[1:-1]]
        assert len(real) == len(set(real))
        for p in paths:
            for a, b in zip(p, p[1:]):
                assert a in n.preds(b)
    # T(e) for the bottleneck edge c -> d holds every sink
    assert max(len(s) for s in fd.T.values()) == 6


def test_node_disjoint():
    assert node_disjoint_paths(butterfly())
    with pytest.raises(NodeDisjointnessError):
        node_disjoint_paths(chain(2, h=2))
    with pytest.raises(NodeDisjointnessError):
        node_disjoint_paths(fig2_cascade())


def test_depths():
    d = depth_vectors(fig2_cascade())
    assert d["v3"] == {2, 4} and d["v2"] == {2, 4} and d["d"] == {3}
    assert equal_depth(combination(4, 2))
    assert equal_depth(butterfly())
    assert not equal_depth(butterfly(), include_sinks=True)
    assert not equal_depth(fig2_cascade())
    assert not equal_depth(example1_net())


@settings(max_examples=30, deadline=None)
@given(st.integers(0, 10_000), st.integers(1, 3))
def test_random_instances_meet_mincut(seed, h):
    n = random_acyclic(9, 22, h, 2, seed)
    for t in n.sinks:
        assert mincut(n, t.node) >= h
    # depth vectors are exactly the path lengths found by brute force
    lengths = {v: set() for v in n.nodes}

    def walk(v, k):
        lengths[v].add(k)
        for e in n.real_out(v):
            walk(n.real[e].head, k + 1)

    walk("n0", 0)
    assert {v: frozenset(s) for v, s in lengths.items()} == depth_vectors(n)
