"""Network codes, global-vector propagation, transfer matrices, feasibility.

A code assigns a kernel ``m_{e,p}(z)`` to each adjacent edge pair
``(e, p)``; missing pairs are zero.  Three disciplines are supported:

``inst``
    every kernel is a constant of F_q.
``ud``
    unit-delay: kernels of non-source real edges are ``z*c``, kernels of
    edges leaving a source are ``z*r(z)`` for a rational ``r``.
``general``
    any rational kernel (used for delay-and-code schemes).

Kernels on a sink's imaginary edges form the sink's decoder.  They carry
no edge delay, may be any rational function in every mode, and when a
code leaves them unspecified the verifier computes one (see
:func:`complete_decoders`).
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field as dc_field

from .errors import CodeError, FieldMismatchError
from .field import FieldSpec, parse_field
from .netgraph import Network, edge_key
from .polyrat import (
    ONE,
    RatMatrix,
    RationalFn,
    format_poly,
    mat_det,
    mat_rank,
    nullspace,
    pexact_div,
    pgcd,
    pmul,
    rat_add,
    rat_mul,
)

MODES = {
    "inst": "inst",
    "instantaneous": "inst",
    "ud": "ud",
    "unit_delay": "ud",
    "unit-delay": "ud",
    "general": "general",
}


def normalize_mode(mode: str) -> str:
    try:
        return MODES[mode]
    except KeyError:
        raise CodeError(f"unknown code mode {mode!r}") from None


class NetworkCode:
    """Kernel assignment; immutable by convention."""

    def __init__(self, field: FieldSpec, mode: str, kernels: dict | None = None, network: Network | None = None):
        self.field = field
        self.mode = normalize_mode(mode)
        self.kernels = {}
        for (e, p), k in (kernels or {}).items():
            if isinstance(k, int):
                k = RationalFn.const(field, field.from_int(k))
            elif not isinstance(k, RationalFn):
                raise CodeError(f"kernel ({e},{p}) is not a rational function")
            if k.field != field:
                raise FieldMismatchError(f"kernel ({e},{p}) over F_{k.field.q}, code over F_{field.q}")
            if k.num:
                self.kernels[(e, p)] = k
        if network is not None:
            self.validate(network)

    def kernel(self, e, p) -> RationalFn:
        k = self.kernels.get((e, p))
        return k if k is not None else RationalFn.zero(self.field)

    def validate(self, n: Network):
        """Check adjacency and the mode discipline against network ``n``."""
        for (e, p), k in self.kernels.items():
            if e not in n.edges or p not in n.edges:
                raise CodeError(f"kernel on unknown edge pair ({e},{p})")
            if p not in n.preds(e):
                raise CodeError(f"edges {p} and {e} are not adjacent")
            ed = n.edges[e]
            if ed.head is None:
                continue
            if self.mode == "inst":
                if not k.is_constant():
                    raise CodeError(f"non-constant kernel {k} on ({e},{p}) in instantaneous mode")
            elif self.mode == "ud":
                if k.num[0] != 0:
                    raise CodeError(f"kernel {k} on ({e},{p}) lacks the edge delay z")
                if not n.is_source(ed.tail):
                    if not (k.is_polynomial() and len(k.num) == 2):
                        raise CodeError(f"kernel {k} on ({e},{p}) must be z times a constant")
        return self

    def with_kernels(self, updates: dict, mode: str | None = None) -> "NetworkCode":
        k = dict(self.kernels)
        k.update(updates)
        return NetworkCode(self.field, mode or self.mode, k)

    def sink_kernels_present(self, n: Network, t_node: str) -> bool:
        ids = set(n.sink(t_node).edges)
        return any(e in ids for (e, _p) in self.kernels)

    # -- serialization ---------------------------------------------------

    def to_dict(self):
        items = sorted(self.kernels.items(), key=lambda kv: (edge_key(kv[0][0]), edge_key(kv[0][1])))
        return {
            "field": self.field.name,
            "mode": self.mode,
            "kernels": [{"edge": e, "pred_edge": p, "kernel": k.to_dict()} for (e, p), k in items],
        }

    def to_json(self, indent=None):
        return json.dumps(self.to_dict(), indent=indent)

    @classmethod
    def from_dict(cls, d, network: Network | None = None) -> "NetworkCode":
        F = parse_field(d["field"])
        kernels = {}
        for item in d.get("kernels", []):
            kernels[(item["edge"], item["pred_edge"])] = RationalFn.from_dict(F, item["kernel"])
        return cls(F, d.get("mode", "general"), kernels, network)

    def __eq__(self, other):
        return (
            isinstance(other, NetworkCode)
            and self.field == other.field
            and self.mode == other.mode
            and self.kernels == other.kernels
        )

    def __repr__(self):
        return f"NetworkCode(F_{self.field.q}, {self.mode}, {len(self.kernels)} kernels)"


def load_code(description, network: Network | None = None) -> NetworkCode:
    if isinstance(description, NetworkCode):
        return description
    if isinstance(description, str):
        text = description.strip()
        if not text.startswith("{"):
            with open(description) as fh:
                text = fh.read()
        description = json.loads(text)
    return NetworkCode.from_dict(description, network)


# ---------------------------------------------------------------------------
# propagation
# ---------------------------------------------------------------------------


def unit_vector(F: FieldSpec, h: int, i: int):
    return [RationalFn.one(F) if j == i else RationalFn.zero(F) for j in range(h)]


def propagate(n: Network, c: NetworkCode, include_sinks: bool = True) -> dict:
    """Global vector b(e) for every edge, computed in ancestral order."""
    F = c.field
    h = n.h
    b = {}
    order = n.full_order()
    for e in order:
        ed = n.edges[e]
        if ed.tail is None:
            b[e] = unit_vector(F, h, int(e[1:]) - 1)
            continue
        if ed.head is None and not include_sinks:
            continue
        acc = [RationalFn.zero(F) for _ in range(h)]
        for p in n.preds(e):
            k = c.kernels.get((e, p))
            if k is None:
                continue
            acc = [rat_add(a, rat_mul(k, x)) if x.num else a for a, x in zip(acc, b[p])]
        b[e] = acc
    return b


# ---------------------------------------------------------------------------
# transfer matrices and verdicts
# ---------------------------------------------------------------------------


@dataclass
class SinkReport:
    sink: str
    demands: tuple
    M: RatMatrix
    Mp: RatMatrix
    g: RationalFn
    interference: list
    decoder_auto: bool = False

    @property
    def invertible(self):
        return bool(self.g.num)

    @property
    def interference_free(self):
        return not self.interference

    def to_dict(self):
        return {
            "sink": self.sink,
            "demands": list(self.demands),
            "M": [[str(x) for x in r] for r in self.M.rows],
            "g": str(self.g),
            "interference": [{"row": i + 1, "col": j + 1, "value": str(v)} for i, j, v in self.interference],
            "decoder_auto": self.decoder_auto,
        }


@dataclass
class TransferReport:
    field: FieldSpec
    sinks: list = dc_field(default_factory=list)
    code: NetworkCode | None = None

    def by_sink(self, node) -> SinkReport:
        return next(s for s in self.sinks if s.sink == node)

    def g_list(self):
        return [s.g for s in self.sinks]

    def f_list(self):
        return [v for s in self.sinks for (_i, _j, v) in s.interference]

    def to_dict(self):
        return {"field": self.field.name, "sinks": [s.to_dict() for s in self.sinks]}


@dataclass(frozen=True)
class Verdict:
    feasible: bool
    invertibility_fail: tuple = ()
    interference_fail: tuple = ()

    @property
    def kind(self):
        if self.feasible:
            return "feasible"
        kinds = []
        if self.invertibility_fail:
            kinds.append("invertibility_fail")
        if self.interference_fail:
            kinds.append("interference_fail")
        return "+".join(kinds)

    def describe(self):
        if self.feasible:
            return "feasible"
        parts = []
        if self.invertibility_fail:
            parts.append("invertibility fails at " + ", ".join(self.invertibility_fail))
        if self.interference_fail:
            parts.append("zero-interference fails at " + ", ".join(self.interference_fail))
        return "; ".join(parts)

    def to_dict(self):
        return {
            "verdict": self.kind,
            "invertibility_fail": list(self.invertibility_fail),
            "interference_fail": list(self.interference_fail),
        }


def _clear_column(F, col):
    """Scale a column of rationals to polynomials with coprime entries."""
    d = ONE
    for x in col:
        if x.den != ONE:
            g = pgcd(F, d, x.den)
            d = pmul(F, d, pexact_div(F, x.den, g))
    out = [RationalFn.make(F, pmul(F, x.num, pexact_div(F, d, x.den)), ONE) for x in col]
    return out


def sink_decoder(F: FieldSpec, h: int, demands, incoming):
    """Decoder columns for a sink given its incoming global vectors.

    Returns ``(C, ok)``: ``C`` is a list of ``len(demands)`` columns, one
    entry per incoming edge.  When ``ok`` the decoded matrix has an
    invertible demanded part and zero off-demand rows; such a decoder
    exists iff rank(V) - rank(V_N) >= h_t.  When no decoder exists a
    best-effort routing selection is returned instead so that the report
    shows why.
    """
    r = len(incoming)
    h_t = len(demands)
    if h_t == 0:
        return [], True
    D = [d - 1 for d in demands]
    N = [i for i in range(h) if i not in D]
    zero = RationalFn.zero(F)

    def pick(cols_of, candidates):
        chosen, vecs = [], []
        for k, col in enumerate(candidates):
            trial = vecs + [cols_of(col)]
            if mat_rank(RatMatrix.from_columns(F, trial)) == len(trial):
                chosen.append(k)
                vecs = trial
                if len(chosen) == h_t:
                    break
        return chosen

    if r:
        if N:
            VN = RatMatrix(F, [[incoming[j][i] for j in range(r)] for i in N])
            K = nullspace(VN)
        else:
            K = [[RationalFn.one(F) if i == j else zero for i in range(r)] for j in range(r)]
        def demanded(kvec):
            return [rat_sum(F, [rat_mul(kvec[j], incoming[j][i]) for j in range(r)]) for i in D]
        chosen = pick(demanded, K)
        if len(chosen) == h_t:
            return [_clear_column(F, K[k]) for k in chosen], True
        # fallback: route the first in-edges whose demanded parts are independent
        sel = pick(lambda j: [incoming[j][i] for i in D], list(range(r)))
    else:
        sel = []
    cols = []
    for j in sel:
        cols.append([RationalFn.one(F) if k == j else zero for k in range(r)])
    for j in range(r):
        if len(cols) == h_t:
            break
        if j not in sel:
            cols.append([RationalFn.one(F) if k == j else zero for k in range(r)])
    while len(cols) < h_t:
        cols.append([zero] * r)
    return cols, False


def rat_sum(F, xs):
    acc = RationalFn.zero(F)
    for x in xs:
        if x.num:
            acc = rat_add(acc, x)
    return acc


def complete_decoders(n: Network, c: NetworkCode, b: dict | None = None) -> NetworkCode:
    """Fill in decoders for sinks whose imaginary edges carry no kernels."""
    F = c.field
    b = propagate(n, c, include_sinks=False) if b is None else b
    updates = {}
    for t in n.sinks:
        if c.sink_kernels_present(n, t.node):
            continue
        ins = n.in_edges(t.node)
        cols, _ok = sink_decoder(F, n.h, t.demands, [b[p] for p in ins])
        for j, col in enumerate(cols):
            for p, k in zip(ins, col):
                if k.num:
                    updates[(t.edges[j], p)] = k
    return c.with_kernels(updates) if updates else c


def transfer_matrices(n: Network, c: NetworkCode, complete: bool = True) -> TransferReport:
    """M_t, M'_t, g_t and the off-demand entries for every sink."""
    F = c.field
    auto = set()
    if complete:
        missing = [t.node for t in n.sinks if not c.sink_kernels_present(n, t.node)]
        if missing:
            c = complete_decoders(n, c)
            auto = set(missing)
    b = propagate(n, c)
    report = TransferReport(F, code=c)
    for t in n.sinks:
        cols = [b[x] for x in t.edges]
        if cols:
            M = RatMatrix.from_columns(F, cols)
        else:
            M = RatMatrix(F, [[] for _ in range(n.h)])
        rows = [d - 1 for d in t.demands]
        Mp = RatMatrix(F, [M.rows[i] for i in rows])
        g = mat_det(Mp) if rows else RationalFn.one(F)
        inter = [
            (i, j, M.rows[i][j])
            for i in range(n.h)
            if i not in rows
            for j in range(len(cols))
            if M.rows[i][j].num
        ]
        report.sinks.append(SinkReport(t.node, t.demands, M, Mp, g, inter, t.node in auto))
    return report


def check_feasibility(report: TransferReport) -> Verdict:
    inv = tuple(s.sink for s in report.sinks if not s.invertible)
    itf = tuple(s.sink for s in report.sinks if not s.interference_free)
    return Verdict(not inv and not itf, inv, itf)


def verify(n: Network, c: NetworkCode) -> Verdict:
    return check_feasibility(transfer_matrices(n, c))


def is_feasible(n: Network, c: NetworkCode) -> bool:
    return verify(n, c).feasible


def lift_to_unit_delay(n: Network, c_inst: NetworkCode) -> NetworkCode:
    """Multiply every real-edge kernel by z; decoders are left as they are."""
    if c_inst.mode != "inst":
        raise CodeError("lift_to_unit_delay expects an instantaneous code")
    F = c_inst.field
    z = RationalFn.monomial(F, 1)
    out = {}
    for (e, p), k in c_inst.kernels.items():
        out[(e, p)] = k if n.edges[e].head is None else rat_mul(z, k)
    return NetworkCode(F, "ud", out, n)


def code_from_vectors(n: Network, F: FieldSpec, mode: str, kernels: dict) -> NetworkCode:
    """Convenience: kernels given as ints or coefficient lists ``[c0, c1, ...]``."""
    conv = {}
    for pair, k in kernels.items():
        if isinstance(k, RationalFn):
            conv[pair] = k
        elif isinstance(k, int):
            conv[pair] = RationalFn.const(F, F.from_int(k))
        elif isinstance(k, dict):
            conv[pair] = RationalFn.from_dict(F, k)
        else:
            conv[pair] = RationalFn.poly(F, k)
    return NetworkCode(F, mode, conv, n)


def format_vector(v) -> str:
    return "(" + ", ".join(str(x) for x in v) + ")"


__all__ = [
    "NetworkCode",
    "SinkReport",
    "TransferReport",
    "Verdict",
    "check_feasibility",
    "code_from_vectors",
    "complete_decoders",
    "format_poly",
    "format_vector",
    "lift_to_unit_delay",
    "load_code",
    "normalize_mode",
    "propagate",
    "sink_decoder",
    "transfer_matrices",
    "unit_vector",
    "verify",
    "is_feasible",
]
