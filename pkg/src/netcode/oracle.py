"""Exhaustive feasibility search on small networks.

The enumerated family:

* every real edge gets a local vector over its predecessors; only
  nonzero vectors whose first nonzero entry is 1 (or monic, for
  polynomials) are tried.  This loses nothing: rescaling an edge can be
  undone by its consumers, and an all-zero edge can be replaced by any
  vector that its consumers then ignore;
* unit-delay mode uses kernels ``z*c`` on non-source edges and ``z*r(z)``
  with ``deg r <= source_deg_bound`` on edges leaving a source;
* sink decoders are not enumerated: a sink is served iff its incoming
  vectors ``V`` satisfy ``rank(V) - rank(V_N) >= h_t`` where ``N`` are the
  rows it does not demand.

The search assigns edges depth-first.  After each assignment every
affected sink is tested with the same rank criterion on the vectors that
can still reach it (assigned edges with an unassigned consumer on a path
to the sink, and the sink's own incoming edges); anything that will ever
arrive lies in their span, so a failure there prunes the subtree.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass

from .code import NetworkCode, complete_decoders, verify
from .errors import SearchCapExceeded
from .field import FieldSpec, make_field, parse_field, prime_power
from .netgraph import Network, equal_depth
from .polyrat import RationalFn, const_rank, padd, pmul, poly_rank, pshift

DEFAULT_CAP = 10**8


def as_field(q) -> FieldSpec:
    if isinstance(q, FieldSpec):
        return q
    if isinstance(q, str):
        return parse_field(q)
    return make_field(*prime_power(int(q)))


def _projective(F: FieldSpec, k: int):
    """Nonzero vectors of F^k whose first nonzero entry is 1, in lexicographic order."""
    out = []
    for lead in range(k):
        for rest in itertools.product(range(F.q), repeat=k - lead - 1):
            out.append((0,) * lead + (1,) + rest)
    return out


def _poly_vectors(F: FieldSpec, k: int, D: int):
    """Nonzero k-vectors of polynomials of degree <= D, first nonzero entry monic."""
    polys = [()]
    for c in itertools.product(range(F.q), repeat=D + 1):
        t = list(c)
        while t and t[-1] == 0:
            t.pop()
        if t:
            polys.append(tuple(t))
    monic = [p for p in polys if p and p[-1] == 1]
    out = []
    for lead in range(k):
        for m in monic:
            for rest in itertools.product(polys, repeat=k - lead - 1):
                out.append(((),) * lead + (m,) + rest)
    return out


@dataclass
class SearchResult:
    feasible: bool
    code: NetworkCode | None
    certificate: dict

    def __bool__(self):
        return self.feasible


class _Search:
    def __init__(self, n: Network, F: FieldSpec, mode: str, D: int, cap: int):
        self.n, self.F, self.mode, self.D = n, F, mode, D
        self.ud = mode == "ud"
        h = n.h
        # edges that can reach each sink
        reach = {t.node: set() for t in n.sinks}
        anc_nodes = {}
        for t in n.sinks:
            seen = {t.node}
            stack = [t.node]
            while stack:
                v = stack.pop()
                for e in n.real_in(v):
                    reach[t.node].add(e)
                    u = n.real[e].tail
                    if u not in seen:
                        seen.add(u)
                        stack.append(u)
            anc_nodes[t.node] = seen
        self.reach = reach
        relevant = set().union(*reach.values()) if reach else set()
        # order: complete sinks greedily, each sink's ancestors in topo order
        topo = n.topo_order()
        pos = {e: i for i, e in enumerate(topo)}
        order, placed = [], set()
        remaining = [t.node for t in n.sinks]
        while remaining:
            t = min(remaining, key=lambda s: (len(reach[s] - placed), [x.node for x in n.sinks].index(s)))
            remaining.remove(t)
            for e in sorted(reach[t] - placed, key=pos.get):
                order.append(e)
                placed.add(e)
        self.order = order
        self.relevant = relevant
        self.options = {}
        size = 1
        for e in order:
            preds = n.preds(e)
            if self.ud and n.is_source(n.real[e].tail):
                opts = _poly_vectors(F, len(preds), D)
            else:
                opts = _projective(F, len(preds)) if len(preds) > 1 else [(1,)]
            self.options[e] = opts
            size *= len(opts)
        self.space_size = size
        if size > cap:
            raise SearchCapExceeded(size, cap)
        self.h = h
        self.vec = {}
        for s in n.sources:
            for x in s.edges:
                i = int(x[1:]) - 1
                self.vec[x] = tuple((1,) if j == i else () for j in range(h)) if self.ud else tuple(
                    1 if j == i else 0 for j in range(h)
                )
        self.consumers = {e: [c for c in n.consumers(e) if c in relevant] for e in list(n.real) + list(self.vec)}
        self.pending = {e: len(self.consumers[e]) for e in self.consumers}
        self.sink_rows = {}
        for t in n.sinks:
            D_ = [d - 1 for d in t.demands]
            self.sink_rows[t.node] = (t.h_t, [i for i in range(h) if i not in D_])
        self.affects = {e: [t.node for t in n.sinks if e in reach[t.node]] for e in order}
        self.visited = 0
        self.pruned = 0

    # -- vector arithmetic ---------------------------------------------------

    def combine(self, e, local):
        F = self.F
        preds = self.n.preds(e)
        h = self.h
        if self.ud:
            acc = [()] * h
            for p, c in zip(preds, local):
                if not c:
                    continue
                v = self.vec[p]
                coef = c if isinstance(c, tuple) else (c,)
                for i in range(h):
                    if v[i]:
                        acc[i] = padd(F, acc[i], pmul(F, coef, v[i]))
            return tuple(pshift(x, 1) for x in acc)
        acc = [0] * h
        add, mul = F.add, F.mul
        for p, c in zip(preds, local):
            if not c:
                continue
            v = self.vec[p]
            for i in range(h):
                if v[i]:
                    acc[i] = add(acc[i], mul(c, v[i]))
        return tuple(acc)

    def rank(self, rows):
        if not rows:
            return 0
        return poly_rank(self.F, rows) if self.ud else const_rank(self.F, rows)

    def sink_ok(self, t) -> bool:
        n = self.n
        h_t, N = self.sink_rows[t]
        if h_t == 0:
            return True
        reach = self.reach[t]
        live = []
        for e, v in self.vec.items():
            if isinstance(e, int) and n.real[e].head == t:
                live.append(v)
            elif any(c in reach and c not in self.vec for c in self.consumers.get(e, ())):
                live.append(v)
        live = [v for v in live if any(v)]
        if len(live) < h_t:
            return False
        rW = self.rank([list(v) for v in live])
        if rW < h_t:
            return False
        if not N:
            return True
        rN = self.rank([[v[i] for i in N] for v in live])
        return rW - rN >= h_t

    # -- search ----------------------------------------------------------------

    def run(self):
        self.assign = {}
        for t in self.n.sinks:
            if not self.sink_ok(t.node):
                return False
        return self._dfs(0)

    def _dfs(self, i):
        if i == len(self.order):
            return True
        e = self.order[i]
        for local in self.options[e]:
            self.visited += 1
            self.vec[e] = self.combine(e, local)
            self.assign[e] = local
            if all(self.sink_ok(t) for t in self.affects[e]):
                if self._dfs(i + 1):
                    return True
            else:
                self.pruned += 1
            del self.vec[e]
            del self.assign[e]
        return False

    def to_code(self) -> NetworkCode:
        F = self.F
        kernels = {}
        for e, local in self.assign.items():
            for p, c in zip(self.n.preds(e), local):
                if not c:
                    continue
                if self.ud:
                    coef = c if isinstance(c, tuple) else (c,)
                    kernels[(e, p)] = RationalFn.poly(F, pshift(coef, 1))
                else:
                    kernels[(e, p)] = RationalFn.const(F, c)
        code = NetworkCode(F, self.mode, kernels, self.n)
        return complete_decoders(self.n, code)


def exhaustive_search(
    n: Network, field, mode: str = "inst", source_deg_bound: int = 0, cap: int = DEFAULT_CAP
) -> SearchResult:
    """First feasible code in the enumerated family, or a certificate that none exists."""
    F = as_field(field)
    mode = "ud" if mode in ("ud", "unit_delay", "unit-delay") else "inst"
    s = _Search(n, F, mode, source_deg_bound, cap)
    found = s.run()
    cert = {
        "feasible": found,
        "field": F.name,
        "mode": mode,
        "source_deg_bound": source_deg_bound if mode == "ud" else None,
        "family": (
            "normalized local vectors; "
            + ("kernels z*c, source kernels z*poly(deg<=%d)" % source_deg_bound if mode == "ud" else "constant kernels")
        ),
        "edges_searched": len(s.order),
        "space_size": s.space_size,
        "nodes_visited": s.visited,
        "pruned": s.pruned,
    }
    code = None
    if found:
        code = s.to_code()
        v = verify(n, code)
        if not v.feasible:
            raise AssertionError(f"search produced an infeasible code: {v.describe()}")
    return SearchResult(found, code, cert)


def min_field_size(n: Network, mode: str = "inst", q_list=(2, 3, 4), source_deg_bound: int = 0, cap: int = DEFAULT_CAP):
    """Smallest listed field admitting a feasible code, with a verdict per field."""
    verdicts = {}
    best = None
    for q in q_list:
        F = as_field(q)
        try:
            r = exhaustive_search(n, F, mode, source_deg_bound, cap)
            verdicts[F.q] = r.feasible
            if r.feasible and best is None:
                best = F.q
        except SearchCapExceeded as exc:
            verdicts[F.q] = {"cap_exceeded": exc.size}
    return {"min": best, "verdicts": verdicts, "mode": mode}


def table1_audit(n: Network, q_list=(2, 3, 4), source_deg_bound: int = 0, cap: int = DEFAULT_CAP) -> dict:
    """Solvability in both modes per field and the implications between them."""
    from .convert import ud_to_inst

    inst, ud, ud_codes = {}, {}, {}
    for q in q_list:
        F = as_field(q)
        inst[F.q] = exhaustive_search(n, F, "inst", cap=cap).feasible
        r = exhaustive_search(n, F, "ud", source_deg_bound, cap)
        ud[F.q] = r.feasible
        if r.feasible:
            ud_codes[F.q] = r.code
    inst_solvable = any(inst.values())
    ud_solvable = any(ud.values())
    converted = None
    if ud_solvable and not inst_solvable:
        q0 = min(ud_codes)
        conv = ud_to_inst(n, ud_codes[q0])
        converted = conv.report()
        inst_solvable = True
    eq = equal_depth(n)
    checks = {
        "ud_implies_inst": (not ud_solvable) or inst_solvable,
        "inst_unsolvable_implies_ud_unsolvable": inst_solvable or not ud_solvable,
    }
    if eq:
        if source_deg_bound == 0:
            checks["equal_depth_same_verdicts"] = inst == ud
        else:
            mem = {q: exhaustive_search(n, as_field(q), "ud", 0, cap).feasible for q in q_list}
            checks["equal_depth_same_verdicts"] = inst == {as_field(q).q: v for q, v in mem.items()}
    return {
        "inst": inst,
        "ud": ud,
        "inst_solvable": inst_solvable,
        "ud_solvable": ud_solvable,
        "equal_depth": eq,
        "converted": converted,
        "checks": checks,
        "consistent": all(checks.values()),
    }
