"""Deterministic generators for the reference networks and random instances.

Networks known only from a verbal description are rebuilt from the
properties they must have; each generator's docstring lists those
properties and the tests check them rather than a drawing.
"""

from __future__ import annotations

import random
from itertools import combinations

from .errors import MincutError, NetcodeError, NetworkError
from .netgraph import Network, flow_decompose


def _net(nodes, edge_pairs, sources, sinks, labels=None):
    labels = labels or {}
    edges = [
        {"id": i + 1, "tail": a, "head": b, **({"label": labels[i + 1]} if i + 1 in labels else {})}
        for i, (a, b) in enumerate(edge_pairs)
    ]
    return Network(nodes, edges, sources, sinks)


def chain(length: int = 2, h: int = 1) -> Network:
    """s -> a1 -> ... -> t with ``h`` parallel edges per hop."""
    nodes = ["s"] + [f"a{i}" for i in range(1, length)] + ["t"]
    pairs = [(nodes[i], nodes[i + 1]) for i in range(length) for _ in range(h)]
    return _net(nodes, pairs, [{"node": "s", "h": h}], [{"node": "t", "demands": list(range(1, h + 1))}])


def butterfly() -> Network:
    """Single source, two sinks, bottleneck c -> d."""
    nodes = ["s", "a", "b", "c", "d", "t1", "t2"]
    pairs = [
        ("s", "a"), ("s", "b"), ("a", "c"), ("b", "c"), ("c", "d"),
        ("a", "t1"), ("b", "t2"), ("d", "t1"), ("d", "t2"),
    ]
    return _net(nodes, pairs, [{"node": "s", "h": 2}], [{"node": t, "demands": [1, 2]} for t in ("t1", "t2")])


def combination(n_mid: int, k: int) -> Network:
    """Source -> n_mid middle nodes; one sink per k-subset, each demanding all k sequences."""
    if not (1 <= k <= n_mid):
        raise NetworkError("combination network needs 1 <= k <= n_mid")
    mids = [f"m{i}" for i in range(1, n_mid + 1)]
    subsets = list(combinations(range(n_mid), k))
    sinks = [f"t{j + 1}" for j in range(len(subsets))]
    pairs = [("s", m) for m in mids]
    for t, sub in zip(sinks, subsets):
        pairs += [(mids[i], t) for i in sub]
    return _net(
        ["s"] + mids + sinks, pairs,
        [{"node": "s", "h": k}],
        [{"node": t, "demands": list(range(1, k + 1))} for t in sinks],
    )


def fig2_cascade() -> Network:
    """Butterfly feeding a (4 choose 2) stage.

    - one source, h = 2, six sinks t1..t6 each demanding both sequences;
    - butterfly stage s -> a, b; a, b -> c -> d; its two outputs are v2
      (fed by a and d) and v3 (fed by b and d);
    - v2 emits e_1, e_2 and v3 emits e_3, e_4, each to a relay m_i;
    - every pair of relays feeds one sink, so any two of the vectors on
      e_1..e_4 must be independent;
    - v3's inputs arrive with different delays (2 and 4 hops).
    """
    nodes = ["s", "a", "b", "c", "d", "v2", "v3", "m1", "m2", "m3", "m4"] + [f"t{i}" for i in range(1, 7)]
    pairs = [
        ("s", "a"), ("s", "b"), ("a", "c"), ("b", "c"), ("c", "d"),
        ("a", "v2"), ("d", "v2"), ("d", "v3"), ("b", "v3"),
        ("v2", "m1"), ("v2", "m2"), ("v3", "m3"), ("v3", "m4"),
    ]
    labels = {10: "e_1", 11: "e_2", 12: "e_3", 13: "e_4"}
    for j, (x, y) in enumerate(combinations(range(1, 5), 2)):
        pairs += [(f"m{x}", f"t{j + 1}"), (f"m{y}", f"t{j + 1}")]
    return _net(
        nodes, pairs, [{"node": "s", "h": 2}],
        [{"node": f"t{i}", "demands": [1, 2]} for i in range(1, 7)], labels,
    )


def example1_net() -> Network:
    """Two sources where unit delays make interference unavoidable.

    - s1 emits x1 through u1, s2 emits x2 through u2, one edge each;
    - v1 mixes u1 and u2 onto a single edge to w, so both of its
      coefficients must be nonzero (t1 gets x1, t2 gets x2 only via w);
    - w feeds v2 and v3;
    - v2 combines u1 with w and feeds t2, which demands x2 only;
    - v3 combines u2 with w and feeds t1, which demands x1 only;
    - x1 reaches v2 along paths of 2 and 4 edges (likewise x2 at v3), so
      with delays the cancellation that works instantaneously is lost.
    """
    nodes = ["s1", "s2", "u1", "u2", "v1", "w", "v2", "v3", "t1", "t2"]
    pairs = [
        ("s1", "u1"), ("s2", "u2"), ("u1", "v1"), ("u2", "v1"), ("v1", "w"),
        ("u1", "v2"), ("u2", "v3"), ("w", "v2"), ("w", "v3"),
        ("v2", "t2"), ("v3", "t1"),
    ]
    return _net(
        nodes, pairs, [{"node": "s1", "h": 1}, {"node": "s2", "h": 1}],
        [{"node": "t1", "demands": [1]}, {"node": "t2", "demands": [2]}],
    )


# sink -> sources with a dedicated two-hop path
EXAMPLE3_DIRECT = {"t1": (1, 2), "t2": (1, 3), "t3": (1, 2), "t4": (1,), "t5": (3,)}


def example3_net() -> Network:
    """Three sources, five sinks; binary coding fails only without delays.

    - v0 mixes all three sources onto e_1 (through relay u1);
    - v2 mixes s2 (one hop) and s3 (two hops via w) onto e_2 (through u2),
      so v2 sees a delay disparity of one;
    - u1 feeds v1, t1, t2; u2 feeds v1, t3, t5; v1 emits e_3 to t4;
    - sinks also get dedicated two-hop paths from some sources:
      t1 {s1, s2}, t2 {s1, s3}, t3 {s1, s2}, t4 {s1}, t5 {s3};
    - t1, t2, t3 demand all sequences, t4 demands {x1, x3}, t5 {x2, x3}.
    """
    nodes = ["s1", "s2", "s3", "v0", "u1", "v2", "w", "u2", "v1"] + [f"t{i}" for i in range(1, 6)]
    pairs = [
        ("s1", "v0"), ("s2", "v0"), ("s3", "v0"), ("v0", "u1"),
        ("s2", "v2"), ("s3", "w"), ("w", "v2"), ("v2", "u2"),
        ("u1", "v1"), ("u1", "t1"), ("u1", "t2"),
        ("u2", "v1"), ("u2", "t5"), ("u2", "t3"),
        ("v1", "t4"),
    ]
    labels = {4: "e_1", 8: "e_2", 15: "e_3"}
    for t, srcs in EXAMPLE3_DIRECT.items():
        for s in srcs:
            r = f"r_{t}_{s}"
            nodes.append(r)
            pairs += [(f"s{s}", r), (r, t)]
    demands = {"t1": [1, 2, 3], "t2": [1, 2, 3], "t3": [1, 2, 3], "t4": [1, 3], "t5": [2, 3]}
    return _net(
        nodes, pairs, [{"node": f"s{i}", "h": 1} for i in (1, 2, 3)],
        [{"node": t, "demands": d} for t, d in demands.items()], labels,
    )


def fig4_net() -> Network:
    """Three sources, a (6 choose 3) stage, and one extra sink demanding x1.

    - v1..v3 each see only their own source; v4..v6 see all three;
    - v_i -> v_{6+i} for i = 1..6, so each of v1..v6 emits one vector;
    - every 3-subset of v7..v12 feeds one of t1..t20 (demanding all);
    - v13 collects v10, v11, v12 (which relay the mixed vectors f4..f6)
      and feeds t21, which demands x1 alone.
    """
    vs = [f"v{i}" for i in range(1, 14)]
    sinks = [f"t{i}" for i in range(1, 22)]
    nodes = ["s1", "s2", "s3"] + vs + sinks
    pairs = [(f"s{i}", f"v{i}") for i in (1, 2, 3)]
    pairs += [(f"s{j}", f"v{k}") for k in (4, 5, 6) for j in (1, 2, 3)]
    pairs += [(f"v{i}", f"v{i + 6}") for i in range(1, 7)]
    labels = {len(pairs) - 5 + i: f"f_{i + 1}" for i in range(6)}
    for j, sub in enumerate(combinations(range(7, 13), 3)):
        pairs += [(f"v{i}", f"t{j + 1}") for i in sub]
    pairs += [("v10", "v13"), ("v11", "v13"), ("v12", "v13"), ("v13", "t21")]
    snk = [{"node": f"t{i}", "demands": [1, 2, 3]} for i in range(1, 21)] + [{"node": "t21", "demands": [1]}]
    return _net(nodes, pairs, [{"node": f"s{i}", "h": 1} for i in (1, 2, 3)], snk, labels)


def random_acyclic(nodes: int, edges: int, h_s: int, sinks: int, seed: int, max_tries: int = 1000) -> Network:
    """Seeded single-source multicast instance with mincut >= h_s at every sink.

    Node ``n0`` is the source and the last ``sinks`` nodes are sinks.  Edges
    go from lower to higher index; candidates are redrawn from the same
    generator until the mincut condition holds.
    """
    if nodes < sinks + 2 or edges < h_s * sinks:
        raise NetworkError("parameters cannot admit the requested mincut")
    rng = random.Random(seed)
    names = [f"n{i}" for i in range(nodes)]
    first_sink = nodes - sinks
    for _ in range(max_tries):
        pairs = []
        # every sink gets h_s incoming edges, every non-sink some outgoing edge
        for t in range(first_sink, nodes):
            for _ in range(h_s):
                pairs.append((rng.randrange(0, first_sink), t))
        while len(pairs) < edges:
            a = rng.randrange(0, first_sink)
            b = rng.randrange(max(a + 1, 1), nodes)
            pairs.append((a, b))
        rng.shuffle(pairs)
        net = _net(
            names, [(names[a], names[b]) for a, b in pairs],
            [{"node": "n0", "h": h_s}],
            [{"node": names[t], "demands": list(range(1, h_s + 1))} for t in range(first_sink, nodes)],
        )
        try:
            flow_decompose(net)
        except MincutError:
            continue
        return net
    raise NetcodeError(f"no instance with mincut {h_s} after {max_tries} draws")


def corollary4_modify(n: Network):
    """Network with delay memory turned into forwarding edges, plus its binary unit-delay code."""
    from .delaycode import materialize, uniform_construct

    return materialize(n, uniform_construct(n, mode="ud"))


def generate(spec: str, seed: int = 0) -> Network:
    """Parse a generator name as used on the command line."""
    name, _, args = spec.partition(":")
    vals = [int(x) for x in args.split(",")] if args else []
    if name == "butterfly":
        return butterfly()
    if name == "combination":
        return combination(*(vals or [4, 2]))
    if name in ("fig2", "fig2_cascade"):
        return fig2_cascade()
    if name in ("example1", "ex1"):
        return example1_net()
    if name in ("example3", "ex3"):
        return example3_net()
    if name == "fig4":
        return fig4_net()
    if name == "chain":
        return chain(*(vals or [2]))
    if name == "random":
        params = vals or [8, 14, 2, 2]
        return random_acyclic(*params[:4], seed=seed)
    raise NetworkError(f"unknown generator {spec!r}")
