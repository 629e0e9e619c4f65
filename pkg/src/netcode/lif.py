"""Deterministic flow-based multicast code construction.

Edges of the flow subgraph are visited in ancestral order.  Every sink
keeps the edges currently ending its flow paths (``C_t``), their global
vectors (``B_t``) and a dual basis (``A_t``) with ``b(c) . a_t(c') = 1``
iff ``c == c'``.  A new edge gets a combination of its flow predecessors
that stays independent of the rest of ``B_t`` for every sink using it,
which is tested by a nonzero dot product with the predecessor's dual.

In unit-delay mode the same procedure runs over F_q(z): each edge vector
is ``z`` times the chosen combination and all dot products are exact
rational functions, while the combination coefficients stay in F_q.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass

from .code import NetworkCode, normalize_mode, unit_vector
from .errors import CodeError, FieldTooSmallError, InfeasibleCodeError
from .field import FieldSpec, parse_field
from .netgraph import FlowDecomposition, Network, flow_decompose
from .polyrat import RatMatrix, RationalFn, rat_add, rat_dot, rat_mul

log = logging.getLogger(__name__)


def _axpy(F, u, alpha: RationalFn, x):
    return [rat_add(a, rat_mul(alpha, b)) if b.num else a for a, b in zip(u, x)]


def lemma2_combine(pairs, field: FieldSpec, strict: bool = True):
    """Combination ``u = sum c_k x_k`` with ``u . y_k != 0`` for every pair.

    ``pairs`` is a list of ``(x, y)`` vectors over F_q or F_q(z) (lists of
    RationalFn).  Coefficients ``c_k`` are taken from ``field``; the first
    nonzero element in representative order that clears all constraints
    so far is used.  Returns ``(u, coefficients)``.

    With ``strict`` the sufficient size condition ``q > n`` is enforced up
    front; otherwise the scan is attempted and FieldTooSmallError is raised
    only if it runs out of candidates.
    """
    F = field
    n = len(pairs)
    if n == 0:
        raise ValueError("no pairs to combine")
    for k, (x, y) in enumerate(pairs):
        if not rat_dot(F, x, y).num:
            raise ValueError(f"pair {k} has x . y = 0")
    if strict and F.q <= n:
        raise FieldTooSmallError(f"combining {n} pairs needs q > {n}, got q = {F.q}")
    u = list(pairs[0][0])
    coeffs = [1] + [0] * (n - 1)
    for i in range(1, n):
        x, y = pairs[i]
        if rat_dot(F, u, y).num:
            continue
        for a in range(1, F.q):
            alpha = RationalFn.const(F, a)
            cand = _axpy(F, u, alpha, x)
            if all(rat_dot(F, cand, pairs[j][1]).num for j in range(i + 1)):
                u = cand
                coeffs[i] = a
                break
        else:
            raise FieldTooSmallError(f"no coefficient in F_{F.q} keeps all {i + 1} constraints")
    return u, coeffs


@dataclass
class SinkState:
    """Current path-end edges, their vectors and the dual basis for one sink."""

    sink: str
    C: list
    B: list
    A: list

    def copy(self):
        return SinkState(self.sink, list(self.C), [list(v) for v in self.B], [list(v) for v in self.A])

    def b_matrix(self, F):
        return RatMatrix.from_columns(F, self.B)

    def a_matrix(self, F):
        return RatMatrix.from_columns(F, self.A)

    def dual_ok(self, F) -> bool:
        """B^T A == I."""
        n = len(self.C)
        for i in range(n):
            for j in range(n):
                d = rat_dot(F, self.B[i], self.A[j])
                if (i == j and d != RationalFn.one(F)) or (i != j and d.num):
                    return False
        return True


def initial_state(F: FieldSpec, sink: str, paths, h: int) -> SinkState:
    C = [p[0] for p in paths]
    vecs = [unit_vector(F, h, int(x[1:]) - 1) for x in C]
    return SinkState(sink, C, vecs, [list(v) for v in vecs])


def update_sink_state(F: FieldSpec, state: SinkState, e, b_e, pred) -> SinkState:
    """Replace ``pred`` by ``e`` in the sink's basis and repair the duals."""
    s = state.copy()
    k = s.C.index(pred)
    a_old = s.A[k]
    d = rat_dot(F, b_e, a_old)
    if not d.num:
        raise InfeasibleCodeError(f"edge {e} is dependent on the rest of the basis at {s.sink}")
    inv = d.inverse()
    a_new = [rat_mul(inv, x) for x in a_old]
    s.C[k] = e
    s.B[k] = list(b_e)
    s.A[k] = a_new
    for j in range(len(s.C)):
        if j == k:
            continue
        c = rat_dot(F, b_e, s.A[j])
        if c.num:
            s.A[j] = [rat_add(x, -rat_mul(c, y)) for x, y in zip(s.A[j], a_new)]
    return s


def lif_construct(
    n: Network,
    field,
    mode: str = "inst",
    decomposition: FlowDecomposition | None = None,
    on_step=None,
) -> NetworkCode:
    """Feasible multicast code for ``n`` over ``field`` in the requested mode.

    ``on_step(edge, states)`` is called after each processed edge with the
    dict of sink states, for invariant checking.
    """
    F = parse_field(field) if isinstance(field, str) else field
    mode = normalize_mode(mode)
    if mode == "general":
        raise CodeError("LIF builds instantaneous or unit-delay codes")
    if not n.is_multicast():
        raise CodeError("LIF handles multicast demands only")
    fd = decomposition or flow_decompose(n)
    max_t = fd.max_T()
    if F.q <= max_t:
        log.info("q = %d does not exceed max |T(e)| = %d; construction may fail", F.q, max_t)
    z = RationalFn.monomial(F, 1)
    h = n.h

    b = {}
    for s in n.sources:
        for x in s.edges:
            b[x] = unit_vector(F, h, int(x[1:]) - 1)
    states = {t: initial_state(F, t, paths, h) for t, paths in fd.paths.items()}
    kernels = {}

    for e in n.topo_order():
        sinks = sorted(fd.T.get(e, ()), key=lambda t: [s.node for s in n.sinks].index(t))
        if not sinks:
            b[e] = [RationalFn.zero(F)] * h
            continue
        pairs, preds = [], []
        for t in sinks:
            p = fd.pred[t][e]
            st = states[t]
            pairs.append((b[p], st.A[st.C.index(p)]))
            preds.append(p)
        u, coeffs = lemma2_combine(pairs, F, strict=False)
        local = {}
        for p, c in zip(preds, coeffs):
            if c:
                local[p] = F.add(local.get(p, 0), c)
        local = {p: c for p, c in local.items() if c}
        if mode == "ud":
            b[e] = [rat_mul(z, x) for x in u]
            for p, c in local.items():
                kernels[(e, p)] = RationalFn.monomial(F, 1, c)
        else:
            b[e] = u
            for p, c in local.items():
                kernels[(e, p)] = RationalFn.const(F, c)
        for t in sinks:
            states[t] = update_sink_state(F, states[t], e, b[e], fd.pred[t][e])
        if on_step is not None:
            on_step(e, states)

    for t, paths in fd.paths.items():
        for path in paths:
            kernels[(path[-1], path[-2])] = RationalFn.one(F)
    code = NetworkCode(F, mode, kernels, n)
    code.sink_states = states
    return code
