from itertools import combinations

import pytest

from netcode.errors import NetworkError
from netcode.netgen import (
    EXAMPLE3_DIRECT,
    combination,
    example1_net,
    example3_net,
    fig2_cascade,
    fig4_net,
    generate,
)
from netcode.netgraph import depth_vectors, load_network, mincut


def test_fig2_structure():
    n = fig2_cascade()
    assert n.h == 2 and len(n.sinks) == 6
    labelled = {n.real[e].label: n.real[e] for e in n.real if n.real[e].label}
    assert [labelled[f"e_{i}"].tail for i in range(1, 5)] == ["v2", "v2", "v3", "v3"]
    # each pair of relays meets at exactly one sink
    feeds = {t.node: {n.real[e].tail for e in n.real_in(t.node)} for t in n.sinks}
    assert sorted(tuple(sorted(v)) for v in feeds.values()) == sorted(combinations(["m1", "m2", "m3", "m4"], 2))
    assert all(mincut(n, t.node) == 2 for t in n.sinks)


def test_example1_structure():
    n = example1_net()
    assert [s.h for s in n.sources] == [1, 1]
    assert n.sink("t1").demands == (1,) or list(n.sink("t1").demands) == [1]
    assert len(n.real_out("v1")) == 1
    d = depth_vectors(n)
    assert d["v2"] == {2, 4} and d["v3"] == {2, 4}


def test_example3_structure():
    n = example3_net()
    assert {t.node: list(t.demands) for t in n.sinks} == {
        "t1": [1, 2, 3], "t2": [1, 2, 3], "t3": [1, 2, 3], "t4": [1, 3], "t5": [2, 3],
    }
    for t, srcs in EXAMPLE3_DIRECT.items():
        tails = {n.real[e].tail for e in n.real_in(t)}
        assert {f"r_{t}_{s}" for s in srcs} <= tails
    assert depth_vectors(n)["v2"] == {1, 2}


def test_fig4_structure():
    n = fig4_net()
    assert len(n.sinks) == 21 and n.sink("t21").h_t == 1
    assert sorted(n.real[e].tail for e in n.real_in("v13")) == ["v10", "v11", "v12"]
    assert all(mincut(n, f"t{i}") == 3 for i in range(1, 21))
    labels = sorted(n.real[e].label for e in n.real if n.real[e].label)
    assert labels == [f"f_{i}" for i in range(1, 7)]
    for e in n.real:
        lab = n.real[e].label
        if lab:
            i = int(lab[2:])
            assert (n.real[e].tail, n.real[e].head) == (f"v{i}", f"v{i + 6}")


def test_combination_counts():
    n = combination(5, 3)
    assert len(n.sinks) == 10 and len(n.real) == 5 + 30


def test_generate_round_trip():
    for spec in ("butterfly", "combination:4,2", "fig2", "example1", "example3", "fig4", "chain:3,2", "random:8,16,2,2"):
        n = generate(spec, seed=1)
        assert load_network(n.to_json()) == n
    assert generate("random:8,16,2,2", seed=3) == generate("random:8,16,2,2", seed=3)
    with pytest.raises(NetworkError):
        generate("pentagon")
