"""Acyclic multigraph networks with sources, sinks and imaginary edges.

Real edges carry integer ids.  Every source ``s`` with ``h_s`` sequences
gets imaginary incoming edges ``"x1"``, ``"x2"``, ... numbered globally
in source order, so ``x_i`` injects the i-th information sequence.
Every sink ``t`` gets one imaginary outgoing edge ``"t#j"`` per demanded
sequence; their global vectors form the columns of the sink's transfer
matrix.
"""

from __future__ import annotations

import heapq
import json
from collections import deque
from dataclasses import dataclass, field
from typing import Iterable

from .errors import CycleError, MincutError, NetworkError, NodeDisjointnessError


def edge_key(e):
    """Sort key placing integer ids first, then string ids."""
    return (0, e, "") if isinstance(e, int) else (1, 0, str(e))


@dataclass(frozen=True)
class Edge:
    id: object
    tail: str | None
    head: str | None
    label: str | None = None

    @property
    def imaginary(self):
        return not isinstance(self.id, int)


@dataclass(frozen=True)
class Source:
    node: str
    h: int
    edges: tuple


@dataclass(frozen=True)
class Sink:
    node: str
    demands: tuple
    edges: tuple

    @property
    def h_t(self):
        return len(self.demands)


class Network:
    """Validated network; treat as immutable after construction."""

    def __init__(self, nodes, edges, sources, sinks):
        self.nodes = tuple(nodes)
        node_set = set(self.nodes)
        if len(node_set) != len(self.nodes):
            raise NetworkError("duplicate node names")
        self.real = {}
        for e in edges:
            if not isinstance(e, Edge):
                e = Edge(int(e["id"]), str(e["tail"]), str(e["head"]), e.get("label"))
            if e.id in self.real:
                raise NetworkError(f"duplicate edge id {e.id}")
            if e.tail not in node_set or e.head not in node_set:
                raise NetworkError(f"edge {e.id} references an unknown node")
            if e.tail == e.head:
                raise CycleError(f"self-loop on edge {e.id}")
            self.real[e.id] = e

        self.edges = dict(self.real)
        self._in = {v: [] for v in self.nodes}
        self._out = {v: [] for v in self.nodes}
        for eid in sorted(self.real, key=edge_key):
            e = self.real[eid]
            self._out[e.tail].append(eid)
            self._in[e.head].append(eid)

        self.sources = []
        k = 0
        seen = set()
        for s in sources:
            node, h = (s.node, s.h) if isinstance(s, Source) else (str(s["node"]), int(s["h"]))
            if node not in node_set:
                raise NetworkError(f"unknown source node {node}")
            if node in seen:
                raise NetworkError(f"source {node} listed twice")
            seen.add(node)
            if self._in[node]:
                raise NetworkError(f"source {node} has incoming edges")
            if h < 0:
                raise NetworkError("negative source rate")
            ids = tuple(f"x{k + i + 1}" for i in range(h))
            k += h
            for x in ids:
                self.edges[x] = Edge(x, None, node)
            self._in[node] = list(ids)
            self.sources.append(Source(node, h, ids))
        self.h = k
        self.sources = tuple(self.sources)

        self.sinks = []
        for t in sinks:
            node, dem = (t.node, t.demands) if isinstance(t, Sink) else (str(t["node"]), t.get("demands", []))
            if node not in node_set:
                raise NetworkError(f"unknown sink node {node}")
            if node in seen:
                raise NetworkError(f"node {node} is both a source and a sink, or a repeated sink")
            seen.add(node)
            if self._out[node]:
                raise NetworkError(f"sink {node} has outgoing edges")
            dem = tuple(sorted({int(d) for d in dem}))
            if any(d < 1 or d > self.h for d in dem):
                raise NetworkError(f"demand index out of range at sink {node}")
            ids = tuple(f"{node}#{j + 1}" for j in range(len(dem)))
            for x in ids:
                self.edges[x] = Edge(x, node, None)
            self._out[node] = list(ids)
            self.sinks.append(Sink(node, dem, ids))
        self.sinks = tuple(self.sinks)
        self._sink_by_node = {t.node: t for t in self.sinks}
        self._source_by_node = {s.node: s for s in self.sources}
        self._topo = self._compute_topo()

    # -- structure -----------------------------------------------------

    def in_edges(self, v):
        """Γ_I(v): real incoming edges, or the imaginary edges at a source."""
        return tuple(self._in[v])

    def out_edges(self, v):
        """Γ_O(v): real outgoing edges, or the imaginary edges at a sink."""
        return tuple(self._out[v])

    def preds(self, e):
        """Edges whose symbols may feed edge ``e``."""
        tail = self.edges[e].tail
        return () if tail is None else tuple(self._in[tail])

    def consumers(self, e):
        head = self.edges[e].head
        return () if head is None else tuple(self._out[head])

    def sink(self, node) -> Sink:
        return self._sink_by_node[node]

    def source(self, node) -> Source:
        return self._source_by_node[node]

    def is_source(self, v):
        return v in self._source_by_node

    def is_sink(self, v):
        return v in self._sink_by_node

    def is_multicast(self):
        full = tuple(range(1, self.h + 1))
        return all(t.demands == full for t in self.sinks)

    def source_of_index(self, i):
        """Source node emitting the i-th (1-based) sequence."""
        return self.edges[f"x{i}"].head

    def label(self, e):
        lab = self.edges[e].label
        return lab if lab is not None else str(e)

    def max_out_degree(self):
        """δ: largest number of outgoing edges (imaginary ones included) at any node."""
        return max((len(self._out[v]) for v in self.nodes), default=0)

    # -- ordering --------------------------------------------------------

    def _compute_topo(self):
        pending = {}
        ready = []
        for eid, e in self.real.items():
            n = len(self._in[e.tail]) if not self.is_source(e.tail) else 0
            pending[eid] = n
            if n == 0:
                heapq.heappush(ready, (edge_key(eid), eid))
        order = []
        while ready:
            _, eid = heapq.heappop(ready)
            order.append(eid)
            for nxt in self._out[self.real[eid].head]:
                if nxt in pending:
                    pending[nxt] -= 1
                    if pending[nxt] == 0:
                        heapq.heappush(ready, (edge_key(nxt), nxt))
        if len(order) != len(self.real):
            raise CycleError("network contains a directed cycle")
        return tuple(order)

    def topo_order(self):
        return self._topo

    def full_order(self):
        """Imaginary source edges, real edges ancestrally, then sink imaginary edges."""
        src = tuple(x for s in self.sources for x in s.edges)
        snk = tuple(x for t in self.sinks for x in t.edges)
        return src + self._topo + snk

    def node_order(self):
        """Nodes in an ancestral order (sources first)."""
        indeg = {v: len(self.real_in(v)) for v in self.nodes}
        ready = [v for v in self.nodes if indeg[v] == 0]
        heapq.heapify(ready)
        out = []
        while ready:
            v = heapq.heappop(ready)
            out.append(v)
            for eid in self._out[v]:
                e = self.edges[eid]
                if e.head is not None:
                    indeg[e.head] -= 1
                    if indeg[e.head] == 0:
                        heapq.heappush(ready, e.head)
        return out

    def real_in(self, v):
        return tuple(x for x in self._in[v] if isinstance(x, int))

    def real_out(self, v):
        return tuple(x for x in self._out[v] if isinstance(x, int))

    # -- serialization ---------------------------------------------------

    def to_dict(self):
        edges = []
        for eid in sorted(self.real, key=edge_key):
            e = self.real[eid]
            d = {"id": eid, "tail": e.tail, "head": e.head}
            if e.label is not None:
                d["label"] = e.label
            edges.append(d)
        return {
            "nodes": list(self.nodes),
            "edges": edges,
            "sources": [{"node": s.node, "h": s.h} for s in self.sources],
            "sinks": [{"node": t.node, "demands": list(t.demands)} for t in self.sinks],
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)

    def __eq__(self, other):
        return isinstance(other, Network) and self.to_dict() == other.to_dict()

    def __repr__(self):
        return f"Network({len(self.nodes)} nodes, {len(self.real)} edges, h={self.h}, {len(self.sinks)} sinks)"


def load_network(description) -> Network:
    """Build a Network from a dict, a JSON string, or a path to a JSON file."""
    if isinstance(description, Network):
        return description
    if isinstance(description, str):
        text = description.strip()
        if not text.startswith("{"):
            with open(description) as fh:
                text = fh.read()
        description = json.loads(text)
    try:
        return Network(
            description["nodes"],
            description["edges"],
            description.get("sources", []),
            description.get("sinks", []),
        )
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, NetworkError):
            raise
        raise NetworkError(f"malformed network description: {exc}") from exc


def topo_order(n: Network):
    return n.topo_order()


# ---------------------------------------------------------------------------
# max-flow and path decomposition
# ---------------------------------------------------------------------------


def _unit_max_flow(arcs, src, dst, limit):
    """Edge-disjoint src→dst paths on unit-capacity arcs ``(id, tail, head)``.

    Augmenting paths are found by BFS, scanning arcs in list order, so
    the result is deterministic.  Returns a list of arc-id paths.
    """
    out, inc = {}, {}
    for a in arcs:
        out.setdefault(a[1], []).append(a)
        inc.setdefault(a[2], []).append(a)
    used = set()
    flow = 0
    while flow < limit:
        prev = {src: None}
        q = deque([src])
        while q and dst not in prev:
            u = q.popleft()
            for a in out.get(u, ()):
                if a[0] not in used and a[2] not in prev:
                    prev[a[2]] = (a, +1)
                    q.append(a[2])
            for a in inc.get(u, ()):
                if a[0] in used and a[1] not in prev:
                    prev[a[1]] = (a, -1)
                    q.append(a[1])
        if dst not in prev:
            break
        v = dst
        while prev[v] is not None:
            a, d = prev[v]
            if d > 0:
                used.add(a[0])
                v = a[1]
            else:
                used.discard(a[0])
                v = a[2]
        flow += 1
    paths = []
    avail = {u: [a for a in lst if a[0] in used] for u, lst in out.items()}
    for _ in range(flow):
        path, u = [], src
        while u != dst:
            a = avail[u].pop(0)
            path.append(a[0])
            u = a[2]
        paths.append(path)
    return paths


@dataclass
class FlowDecomposition:
    """Per-sink edge-disjoint paths plus the derived T(e), P(e) maps.

    Each path starts with an imaginary source edge and ends with one of
    the sink's imaginary edges, path ``j`` ending at ``t#j``.
    """

    paths: dict
    pred: dict = field(default_factory=dict)
    T: dict = field(default_factory=dict)
    P: dict = field(default_factory=dict)

    def __post_init__(self):
        for t, plist in self.paths.items():
            pm = {}
            for path in plist:
                for a, b in zip(path, path[1:]):
                    pm[b] = a
                    self.T.setdefault(b, set()).add(t)
                    self.P.setdefault(b, set()).add(a)
            self.pred[t] = pm

    def edges(self):
        return set(e for plist in self.paths.values() for p in plist for e in p)

    def max_T(self):
        return max((len(v) for v in self.T.values()), default=0)

    def pruned(self, n: Network) -> Network:
        """G*: the subnetwork spanned by flow paths."""
        keep = {e for e in self.edges() if isinstance(e, int)}
        nodes = set()
        for e in keep:
            nodes.update((n.real[e].tail, n.real[e].head))
        nodes.update(s.node for s in n.sources)
        nodes.update(t.node for t in n.sinks)
        return Network(
            [v for v in n.nodes if v in nodes],
            [n.real[e] for e in sorted(keep)],
            [{"node": s.node, "h": s.h} for s in n.sources],
            [{"node": t.node, "demands": list(t.demands)} for t in n.sinks],
        )


def _source_arcs(n: Network):
    """Arcs from a synthetic super-source: one per imaginary source edge."""
    return [(x, "*S*", s.node) for s in n.sources for x in s.edges]


def _real_arcs(n: Network):
    return [(eid, n.real[eid].tail, n.real[eid].head) for eid in sorted(n.real, key=edge_key)]


def mincut(n: Network, t_node: str) -> int:
    arcs = _source_arcs(n) + _real_arcs(n)
    return len(_unit_max_flow(arcs, "*S*", t_node, n.h + len(n.real)))


def flow_decompose(n: Network, h_s_required: int | None = None) -> FlowDecomposition:
    """h edge-disjoint paths to every sink (all sources via a super-source)."""
    need = n.h if h_s_required is None else h_s_required
    arcs = _source_arcs(n) + _real_arcs(n)
    paths, bad = {}, []
    for t in n.sinks:
        found = _unit_max_flow(arcs, "*S*", t.node, need)
        if len(found) < need:
            bad.append(t.node)
            continue
        paths[t.node] = [p + [f"{t.node}#{j + 1}"] for j, p in enumerate(found)]
    if bad:
        raise MincutError(bad, need)
    return FlowDecomposition(paths)


def node_disjoint_paths(n: Network, h_s: int | None = None) -> FlowDecomposition:
    """Like flow_decompose but paths share no node other than source and sink."""
    need = n.h if h_s is None else h_s
    endpoints = {s.node for s in n.sources} | {t.node for t in n.sinks}
    split = lambda v, side: v if v in endpoints else (v, side)  # noqa: E731
    base = [(("node", v), split(v, "in"), split(v, "out")) for v in n.nodes if v not in endpoints]
    real = [(eid, split(tl, "out"), split(hd, "in")) for eid, tl, hd in _real_arcs(n)]
    arcs = _source_arcs(n) + real + base
    paths, bad = {}, []
    for t in n.sinks:
        found = _unit_max_flow(arcs, "*S*", t.node, need)
        if len(found) < need:
            bad.append(t.node)
            continue
        clean = [[a for a in p if not (isinstance(a, tuple) and a[0] == "node")] for p in found]
        paths[t.node] = [p + [f"{t.node}#{j + 1}"] for j, p in enumerate(clean)]
    if bad:
        raise NodeDisjointnessError(bad, need)
    return FlowDecomposition(paths)


# ---------------------------------------------------------------------------
# depth vectors
# ---------------------------------------------------------------------------


def depth_vectors(n: Network) -> dict:
    """Set of distinct source→v path lengths (in edges) for every node."""
    d = {v: set() for v in n.nodes}
    for s in n.sources:
        d[s.node].add(0)
    for v in n.node_order():
        for eid in n.real_out(v):
            d[n.real[eid].head].update(x + 1 for x in d[v])
    return {v: frozenset(s) for v, s in d.items()}


def equal_depth(n: Network, include_sinks: bool = False) -> bool:
    """True iff no intermediate node sees two different path lengths.

    Sinks are skipped by default: they decode with memory, so only the
    mixing points inside the network matter.
    """
    d = depth_vectors(n)
    for v in n.nodes:
        if n.is_source(v) or (n.is_sink(v) and not include_sinks):
            continue
        if len(d[v]) > 1:
            return False
    return True


def with_edges(n: Network, extra_nodes: Iterable[str], edges: Iterable[Edge]) -> Network:
    """Copy of ``n`` with a replaced real edge set (used by materialization)."""
    return Network(
        list(n.nodes) + list(extra_nodes),
        list(edges),
        [{"node": s.node, "h": s.h} for s in n.sources],
        [{"node": t.node, "demands": list(t.demands)} for t in n.sinks],
    )
