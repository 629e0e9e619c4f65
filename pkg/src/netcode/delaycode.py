"""Binary delay-and-code schemes.

Each used adjacent pair ``(e, p)`` carries coefficient 1 and an exponent
``a_{e,p}``: the symbol from ``p`` enters ``e`` delayed by ``z^a``.  In
unit-delay mode the exponent includes the mandatory edge delay, so it is
at least 1 and the node's memory for that pair is ``a - 1``; in
instantaneous mode the memory is ``a`` itself.

The constructions follow the flow-based skeleton of :mod:`netcode.lif`
with the field coefficient replaced by a delay: a new predecessor is
added as ``u + z^beta x`` for the smallest ``beta`` that keeps every
relevant sink's dot product nonzero.  Each sink constraint rules out at
most one ``beta``.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field as dc_field

from .code import NetworkCode, normalize_mode, unit_vector, verify
from .errors import CodeError, FieldTooSmallError
from .field import make_field
from .lif import initial_state, update_sink_state
from .netgraph import Edge, Network, edge_key, flow_decompose, node_disjoint_paths, with_edges
from .polyrat import RationalFn, rat_add, rat_dot, rat_mul

F2 = make_field(2)


@dataclass
class DelayCodeScheme:
    discipline: str
    mode: str
    delays: dict = dc_field(default_factory=dict)  # (e, p) -> exponent, coefficient implicitly 1
    sink_kernels: dict = dc_field(default_factory=dict)  # (t#j, p) -> 1

    def memory(self, e, p) -> int:
        a = self.delays[(e, p)]
        return a - 1 if self.mode == "ud" else a

    def to_code(self, n: Network | None = None) -> NetworkCode:
        """The scheme as a binary code with kernels ``z^a``."""
        kernels = {pair: RationalFn.monomial(F2, a) for pair, a in self.delays.items()}
        for pair in self.sink_kernels:
            kernels[pair] = RationalFn.one(F2)
        mode = "general"
        if self.mode == "inst" and all(a == 0 for a in self.delays.values()):
            mode = "inst"
        return NetworkCode(F2, mode, kernels, n)

    def to_dict(self):
        items = sorted(self.delays.items(), key=lambda kv: (edge_key(kv[0][0]), edge_key(kv[0][1])))
        return {
            "discipline": self.discipline,
            "mode": self.mode,
            "entries": [{"edge": e, "pred": p, "m": 1, "delay": a} for (e, p), a in items],
            "sink_kernels": [{"edge": e, "pred": p} for (e, p) in sorted(self.sink_kernels, key=lambda k: (edge_key(k[0]), edge_key(k[1])))],
        }

    @classmethod
    def from_dict(cls, d):
        delays = {(x["edge"], x["pred"]): int(x["delay"]) for x in d["entries"] if int(x.get("m", 1))}
        sk = {(x["edge"], x["pred"]): 1 for x in d.get("sink_kernels", [])}
        return cls(d["discipline"], d["mode"], delays, sk)


def _z_shift(beta, x):
    zb = RationalFn.monomial(F2, beta)
    return [rat_mul(zb, v) if v.num else v for v in x]


def _vadd(u, v):
    return [rat_add(a, b) for a, b in zip(u, v)]


def delayed_combine(pairs, max_delay: int | None = None, mode: str = "inst"):
    """Binary combination ``u = sum alpha_k z^beta_k x_k`` meeting every constraint.

    ``pairs`` holds ``(x, y)`` where ``y`` is one dual vector or a list of
    them (all constraints attached to the same ``x``).  Returns
    ``(u, alphas, betas)``; entries with ``alpha = 0`` are unused.  In
    unit-delay mode the returned ``u`` is shifted by the edge delay ``z``
    and the betas are the exponents before that shift.
    """
    mode = normalize_mode(mode)
    groups = [(x, y if isinstance(y, list) and y and isinstance(y[0], list) else [y]) for x, y in pairs]
    for x, ys in groups:
        for y in ys:
            if not rat_dot(F2, x, y).num:
                raise ValueError("pair with x . y = 0")
    total = sum(len(ys) for _, ys in groups)
    bound = total - 1 if max_delay is None else max_delay
    u = None
    active = []
    alphas, betas = [], []
    for x, ys in groups:
        if u is not None and all(rat_dot(F2, u, y).num for y in ys):
            alphas.append(0)
            betas.append(0)
            active.extend(ys)
            continue
        cons = active + ys
        for beta in range(0, bound + 1):
            cand = _z_shift(beta, x) if u is None else _vadd(u, _z_shift(beta, x))
            if all(rat_dot(F2, cand, y).num for y in cons):
                break
        else:
            raise FieldTooSmallError(f"no delay up to {bound} satisfies all constraints")
        u = cand
        alphas.append(1)
        betas.append(beta)
        active = cons
    if mode == "ud":
        u = _z_shift(1, u)
    return u, alphas, betas


def _choose_shared_beta(targets, x, bound):
    """Smallest beta valid simultaneously for every (u, constraints) target."""
    for beta in range(0, bound + 1):
        xs = _z_shift(beta, x)
        ok = True
        for u, cons in targets:
            cand = xs if u is None else _vadd(u, xs)
            if not all(rat_dot(F2, cand, y).num for y in cons):
                ok = False
                break
        if ok:
            return beta
    raise FieldTooSmallError(f"no shared delay up to {bound} works")


class _Builder:
    """Shared state of the flow-based scheme constructions."""

    def __init__(self, n: Network, mode: str, fd):
        if not n.is_multicast():
            raise CodeError("delay-and-code construction handles multicast demands only")
        self.n = n
        self.mode = normalize_mode(mode)
        if self.mode == "general":
            raise CodeError("mode must be inst or ud")
        self.fd = fd
        self.sink_order = [t.node for t in n.sinks]
        self.b = {}
        for s in n.sources:
            for x in s.edges:
                self.b[x] = unit_vector(F2, n.h, int(x[1:]) - 1)
        self.states = {t: initial_state(F2, t, paths, n.h) for t, paths in fd.paths.items()}
        self.delays = {}
        self.shift = 1 if self.mode == "ud" else 0

    def sinks_of(self, e):
        return sorted(self.fd.T.get(e, ()), key=self.sink_order.index)

    def dual(self, t, p):
        st = self.states[t]
        return st.A[st.C.index(p)]

    def groups(self, e):
        """Distinct flow predecessors of ``e`` (ascending id) with their sinks' duals."""
        by_pred = {}
        for t in self.sinks_of(e):
            p = self.fd.pred[t][e]
            by_pred.setdefault(p, []).append(self.dual(t, p))
        return [(p, by_pred[p]) for p in sorted(by_pred, key=edge_key)]

    def commit(self, e, u):
        self.b[e] = _z_shift(self.shift, u) if self.shift else u
        for t in self.sinks_of(e):
            self.states[t] = update_sink_state(F2, self.states[t], e, self.b[e], self.fd.pred[t][e])

    def nonuniform_edge(self, e):
        grp = self.groups(e)
        bound = len(self.n.sinks) - 1
        u, alphas, betas = delayed_combine([(self.b[p], ys) for p, ys in grp], bound, "inst")
        for (p, _), a, beta in zip(grp, alphas, betas):
            if a:
                self.delays[(e, p)] = beta + self.shift
        self.commit(e, u)

    def uniform_node(self, v):
        outs = [e for e in self.n.real_out(v) if self.fd.T.get(e)]
        if not outs:
            return
        grp = {e: dict(self.groups(e)) for e in outs}
        preds = sorted({p for e in outs for p in grp[e]}, key=edge_key)
        u = {e: None for e in outs}
        active = {e: [] for e in outs}
        delta = self.n.max_out_degree()
        bound = delta * (len(self.n.sinks) - 1)
        for p in preds:
            x = self.b[p]
            need = []
            for e in outs:
                ys = grp[e].get(p)
                if ys is None:
                    continue
                if u[e] is not None and all(rat_dot(F2, u[e], y).num for y in ys):
                    active[e] = active[e] + ys
                    continue
                need.append(e)
            if not need:
                continue
            targets = [(u[e], active[e] + grp[e][p]) for e in need]
            beta = _choose_shared_beta(targets, x, bound)
            xs = _z_shift(beta, x)
            for e in need:
                u[e] = xs if u[e] is None else _vadd(u[e], xs)
                active[e] = active[e] + grp[e][p]
                self.delays[(e, p)] = beta + self.shift
        for e in outs:
            self.commit(e, u[e])

    def finish(self, discipline):
        sk = {}
        for t, paths in self.fd.paths.items():
            for path in paths:
                sk[(path[-1], path[-2])] = 1
        scheme = DelayCodeScheme(discipline, self.mode, self.delays, sk)
        scheme.sink_states = self.states
        return scheme


def nonuniform_construct(n: Network, mode: str = "ud") -> DelayCodeScheme:
    """Binary scheme where each pair (e, p) may use its own delay."""
    bld = _Builder(n, mode, flow_decompose(n))
    for e in n.topo_order():
        if bld.fd.T.get(e):
            bld.nonuniform_edge(e)
        else:
            bld.b[e] = [RationalFn.zero(F2)] * n.h
    return bld.finish("nonuniform")


def uniform_construct(n: Network, mode: str = "ud") -> DelayCodeScheme:
    """Binary scheme sharing one delay per incoming edge at intermediate nodes.

    Needs a node-disjoint flow decomposition so the outgoing edges of a
    node serve disjoint sink sets.  The source node is coded per edge.
    """
    bld = _Builder(n, mode, node_disjoint_paths(n))
    for v in n.node_order():
        if n.is_sink(v):
            continue
        if n.is_source(v):
            for e in n.real_out(v):
                if bld.fd.T.get(e):
                    bld.nonuniform_edge(e)
                else:
                    bld.b[e] = [RationalFn.zero(F2)] * n.h
        else:
            for e in n.real_out(v):
                if not bld.fd.T.get(e):
                    bld.b[e] = [RationalFn.zero(F2)] * n.h
            bld.uniform_node(v)
    return bld.finish("uniform")


# ---------------------------------------------------------------------------
# audits
# ---------------------------------------------------------------------------


def budget_audit(n: Network, scheme: DelayCodeScheme) -> dict:
    """Largest memory used at intermediate nodes against the discipline's bound."""
    T = len(n.sinks)
    bound = T - 1 if scheme.discipline == "nonuniform" else n.max_out_degree() * (T - 1)
    used = 0
    src_used = 0
    for (e, p), _a in scheme.delays.items():
        m = scheme.memory(e, p)
        if n.is_source(n.edges[e].tail):
            src_used = max(src_used, m)
        else:
            used = max(used, m)
    ok = used <= bound and src_used <= T - 1
    return {"max_memory": used, "max_source_memory": src_used, "bound": bound, "ok": ok}


def uniformity_audit(n: Network, scheme: DelayCodeScheme) -> bool:
    """At every intermediate node each incoming edge is delayed the same for all its users."""
    seen = {}
    for (e, p), a in scheme.delays.items():
        if n.is_source(n.edges[e].tail):
            continue
        if seen.setdefault(p, a) != a:
            return False
    return True


# ---------------------------------------------------------------------------
# memory to forwarding edges
# ---------------------------------------------------------------------------


def materialize(n: Network, scheme: DelayCodeScheme):
    """Replace shared node memory by chains of forwarding edges.

    Returns ``(G~, code)`` where ``code`` is a memoryless binary unit-delay
    code on ``G~``.  An incoming edge ``p`` delayed by ``a_p`` memory units
    at its head becomes ``p`` followed by ``a_p`` forwarding hops; the
    head's outgoing edges then read from the last hop.
    """
    if scheme.discipline != "uniform" or scheme.mode != "ud":
        raise CodeError("only uniform unit-delay schemes can be materialized")
    if not uniformity_audit(n, scheme):
        raise CodeError("scheme is not uniform")
    mem = {}
    for (e, p), a in scheme.delays.items():
        if not n.is_source(n.edges[e].tail) and a - 1 > 0:
            mem[p] = a - 1
    next_id = max(n.real) + 1
    edges = []
    extra_nodes = []
    last = {}
    fwd = {}
    for eid in sorted(n.real):
        ed = n.real[eid]
        k = mem.get(eid, 0)
        if not k:
            edges.append(ed)
            continue
        prev_node = ed.tail
        prev_edge = None
        for i in range(k + 1):
            head = ed.head if i == k else f"{ed.head}~{eid}~{i + 1}"
            if i < k:
                extra_nodes.append(head)
            new_id = eid if i == 0 else next_id
            if i:
                next_id += 1
                fwd[new_id] = prev_edge
            edges.append(Edge(new_id, prev_node, head, ed.label if i == 0 else None))
            prev_node, prev_edge = head, new_id
        last[eid] = prev_edge
    g = with_edges(n, extra_nodes, edges)
    z = RationalFn.monomial(F2, 1)
    kernels = {}
    for (e, p), a in scheme.delays.items():
        if n.is_source(n.edges[e].tail):
            kernels[(e, p)] = RationalFn.monomial(F2, a)
        else:
            kernels[(e, last.get(p, p))] = z
    for nid, prev in fwd.items():
        kernels[(nid, prev)] = z
    for (e, p) in scheme.sink_kernels:
        kernels[(e, last.get(p, p))] = RationalFn.one(F2)
    return g, NetworkCode(F2, "ud", kernels, g)


# ---------------------------------------------------------------------------
# the three-source impossibility search
# ---------------------------------------------------------------------------


def _vanishes(exponents) -> bool:
    """Whether a sum of F_2 monomials z^k (k in ``exponents``) is zero."""
    counts = {}
    for k in exponents:
        counts[k] = counts.get(k, 0) ^ 1
    return not any(counts.values())


def _valid_pair(f, g) -> bool:
    """f, g together with any one unit vector must be independent.

    For monomial vectors the 2x2 minor on rows r, s is
    ``z^{f_r + g_s} + z^{f_s + g_r}``, nonzero iff the exponents differ.
    """
    return all(f[r] + g[s] != f[s] + g[r] for r, s in ((1, 2), (0, 2), (0, 1)))


def fig4_delay_code_search(B: int = 8, allow_dependent: bool = False) -> dict:
    """Search binary delayed combinations of f4, f5, f6 equal to (g, 0, 0), g != 0.

    Every mixed vector is ``f = (z^a, z^b, z^c)`` with exponents in
    ``[0, B]``; a combination picks a subset of them with delays.  Only
    differences of delays matter, so a pair uses one relative delay
    ``d`` in ``[-B, B]``.

    - one vector: its lower entries are monomials, never zero;
    - two vectors: enumerated exhaustively over all exponent pairs and
      relative delays, keeping only pairs that are independent together
      with each unit vector (a property every valid code on the network
      has);
    - three vectors: each row is a sum of three monomials, which cannot
      vanish over F_2; for ``B <= 2`` this is also enumerated directly.

    With ``allow_dependent`` the independence filter is dropped, and the
    search must then find solutions.
    """
    vecs = list(itertools.product(range(B + 1), repeat=3))
    deltas = range(-B, B + 1)
    log = {"single": 0, "pair": 0, "triple": 0}
    solutions = []
    for f in vecs:
        for t in range(B + 1):
            log["single"] += 1
            if _vanishes([f[1] + t]) and _vanishes([f[2] + t]):
                solutions.append({"support": [f], "delays": [t]})
    for i, f in enumerate(vecs):
        for g in vecs[i if allow_dependent else i + 1:]:
            if not allow_dependent and not _valid_pair(f, g):
                continue
            for d in deltas:
                log["pair"] += 1
                tf, tg = max(d, 0), max(-d, 0)
                if (
                    _vanishes([f[1] + tf, g[1] + tg])
                    and _vanishes([f[2] + tf, g[2] + tg])
                    and not _vanishes([f[0] + tf, g[0] + tg])
                ):
                    solutions.append({"support": [f, g], "delays": [tf, tg]})
    triple_method = "parity"
    if B <= 2:
        triple_method = "enumerated"
        for trio in itertools.combinations(vecs, 3):
            for ts in itertools.product(range(B + 1), repeat=3):
                log["triple"] += 1
                rows = [[v[r] + t for v, t in zip(trio, ts)] for r in range(3)]
                if _vanishes(rows[1]) and _vanishes(rows[2]) and not _vanishes(rows[0]):
                    solutions.append({"support": list(trio), "delays": list(ts)})
    return {
        "B": B,
        "allow_dependent": allow_dependent,
        "checked": log,
        "triple_method": triple_method,
        "solutions": solutions,
    }
