"""Symbol-level simulation of a network code over a finite horizon.

Each kernel ``num(z)/den(z)`` acts as a causal linear filter on its
input sequence: ``den * y = num * x`` solved forward in time, which needs
a nonzero constant term in ``den``.  Pure delays ``z^a`` are shift
registers.  Edges are processed in ancestral order, each over the whole
horizon; because filters only look backwards in time this gives the same
sequences as stepping all edges one time instant at a time.
"""

from __future__ import annotations

import csv
import io
import random
from dataclasses import dataclass

from .code import NetworkCode, TransferReport, complete_decoders, load_code
from .errors import CodeError, FieldMismatchError, HorizonTooShortError
from .field import FieldSpec
from .netgraph import Network

DEFAULT_MARGIN = 8


def apply_filter(F: FieldSpec, num, den, x, H: int):
    """First H outputs of the filter num/den driven by x."""
    if not den or den[0] == 0:
        raise CodeError("kernel denominator vanishes at z = 0; filter is not causal")
    add, mul, neg = F.add, F.mul, F.neg
    inv0 = F.inv(den[0])
    y = [0] * H
    for k in range(H):
        acc = 0
        for i, c in enumerate(num):
            if i > k:
                break
            if c and x[k - i]:
                acc = add(acc, mul(c, x[k - i]))
        for j in range(1, min(len(den), k + 1)):
            if den[j] and y[k - j]:
                acc = add(acc, neg(mul(den[j], y[k - j])))
        y[k] = mul(acc, inv0) if inv0 != 1 else acc
    return y


@dataclass
class Trace:
    field: FieldSpec
    horizon: int
    inputs: list
    edges: dict

    def sink_outputs(self, n: Network, t_node: str):
        return [self.edges[x] for x in n.sink(t_node).edges]

    def to_csv(self, order=None) -> str:
        buf = io.StringIO()
        w = csv.writer(buf, lineterminator="\n")
        w.writerow(["time", "edge", "symbol"])
        for k in range(self.horizon):
            for e in order or self.edges:
                w.writerow([k, e, self.edges[e][k]])
        return buf.getvalue()


def random_inputs(F: FieldSpec, h: int, H: int, seed: int):
    rng = random.Random(seed)
    return [[rng.randrange(F.q) for _ in range(H)] for _ in range(h)]


def simulate(n: Network, code, inputs, H: int) -> Trace:
    """Drive ``inputs`` (h sequences of length >= H) through the network."""
    if hasattr(code, "to_code"):
        code = code.to_code(n)
    code = load_code(code)
    if any(not code.sink_kernels_present(n, t.node) for t in n.sinks):
        code = complete_decoders(n, code)
    F = code.field
    if H < 1:
        raise ValueError("horizon must be positive")
    if len(inputs) != n.h:
        raise ValueError(f"expected {n.h} input sequences, got {len(inputs)}")
    xs = []
    for seq in inputs:
        seq = list(seq)[:H]
        if len(seq) < H:
            raise ValueError("input sequence shorter than the horizon")
        for s in seq:
            if getattr(s, "field", F) != F:
                raise FieldMismatchError("input symbol from another field")
        xs.append([int(s) for s in seq])
    y = {}
    for e in n.full_order():
        ed = n.edges[e]
        if ed.tail is None:
            y[e] = xs[int(e[1:]) - 1]
            continue
        acc = [0] * H
        for p in n.preds(e):
            k = code.kernels.get((e, p))
            if k is None:
                continue
            out = apply_filter(F, k.num, k.den, y[p], H)
            acc = [F.add(a, b) for a, b in zip(acc, out)]
        y[e] = acc
    return Trace(F, H, xs, y)


def required_horizon(report: TransferReport, margin: int = DEFAULT_MARGIN) -> int:
    deg = 0
    for s in report.sinks:
        for row in s.M.rows:
            for v in row:
                if v.num:
                    deg = max(deg, len(v.num) - 1)
    return deg + margin


def decode_check(trace: Trace, report: TransferReport, n: Network, margin: int = DEFAULT_MARGIN) -> dict:
    """Per sink: do the observed outputs equal the demanded part of x(z) M_t(z)?"""
    need = required_horizon(report, margin)
    if trace.horizon < need:
        raise HorizonTooShortError(trace.horizon, need)
    F = trace.field
    H = trace.horizon
    result = {}
    for s in report.sinks:
        obs = trace.sink_outputs(n, s.sink)
        ok = True
        for j in range(len(obs)):
            expect = [0] * H
            for d in s.demands:
                m = s.M.rows[d - 1][j]
                if m.num:
                    part = apply_filter(F, m.num, m.den, trace.inputs[d - 1], H)
                    expect = [F.add(a, b) for a, b in zip(expect, part)]
            if expect != obs[j]:
                ok = False
                break
        result[s.sink] = ok
    return result


def convolve_vector(F: FieldSpec, vec, inputs, H: int):
    """Truncated sum_i x_i(z) * v_i(z) for a vector of polynomial entries."""
    out = [0] * H
    for v, x in zip(vec, inputs):
        for i, c in enumerate(v.num):
            if not c:
                continue
            for k in range(i, H):
                if x[k - i]:
                    out[k] = F.add(out[k], F.mul(c, x[k - i]))
    return out


