"""Explicit codes for the reference networks."""

from __future__ import annotations

import itertools

from .code import NetworkCode
from .field import make_field
from .netgen import example3_net, fig2_cascade, fig4_net
from .netgraph import Network
from .polyrat import RatMatrix, RationalFn

F2 = make_field(2)


def _edge(n: Network, tail, head):
    return next(e for e in n.topo_order() if n.real[e].tail == tail and n.real[e].head == head)


def _all_delay_kernels(n: Network, skip=()):
    """Kernel z on every adjacent pair of real edges except those in ``skip``."""
    z = RationalFn.monomial(F2, 1)
    out = {}
    for e in n.topo_order():
        for p in n.preds(e):
            if (e, p) not in skip:
                out[(e, p)] = z
    return out


def example2_code(n: Network | None = None) -> NetworkCode:
    """Binary unit-delay code on the butterfly/(4 choose 2) cascade.

    The butterfly stage routes x1 over s -> a and x2 over s -> b and adds
    at c.  v2 forwards a on e_1 and d on e_2; v3 forwards b on e_3 and the
    sum of b and d on e_4, giving (z^3, 0), (z^5, z^5), (0, z^3) and
    (z^5, z^5 + z^3).
    """
    n = n or fig2_cascade()
    E = lambda a, b: _edge(n, a, b)  # noqa: E731
    src_a, src_b = E("s", "a"), E("s", "b")
    a_v2, d_v2, d_v3, b_v3 = E("a", "v2"), E("d", "v2"), E("d", "v3"), E("b", "v3")
    e1, e2, e3, e4 = E("v2", "m1"), E("v2", "m2"), E("v3", "m3"), E("v3", "m4")
    skip = {(src_a, "x2"), (src_b, "x1"), (e1, d_v2), (e2, a_v2), (e3, d_v3)}
    return NetworkCode(F2, "ud", _all_delay_kernels(n, skip), n)


def example3_ud_code(n: Network | None = None) -> NetworkCode:
    """Binary unit-delay code with every kernel equal to z.

    Gives a = (z^2, z^2, z^2) on e_1, b = (0, z^2, z^3) on e_2 and
    e_3 = (z^4, 0, z^4 + z^5).
    """
    n = n or example3_net()
    return NetworkCode(F2, "ud", _all_delay_kernels(n), n)


def example3_inst_code(n: Network | None = None) -> NetworkCode:
    """Instantaneous binary code with a = (1, 1, 1), b = (0, 1, 1) and e_3 = a + b."""
    n = n or example3_net()
    one = RationalFn.one(F2)
    return NetworkCode(F2, "inst", {pair: one for pair in _all_delay_kernels(n)}, n)


def _independent(F, vecs):
    return RatMatrix(F, [list(v) for v in vecs]).rank() == len(vecs)


def fig4_code(q: int = 4, mode: str = "inst") -> NetworkCode:
    """A code on ``fig4_net`` over F_q (q = 4 by default).

    v1..v3 forward their own source, v4..v6 send vectors f4..f6 with every
    three of {e1, e2, e3, f4, f5, f6} independent, and v13 combines the
    relayed f4..f6 into a multiple of e1.  Raises ValueError if no such
    vectors exist over F_q (as for q < 4).
    """
    from .field import prime_power
    from .code import lift_to_unit_delay

    F = make_field(*prime_power(q))
    n = fig4_net()
    const = lambda c: RationalFn.const(F, c)  # noqa: E731
    units = [tuple(1 if i == j else 0 for j in range(3)) for i in range(3)]
    cands = [(1,) + rest for rest in itertools.product(range(1, F.q), repeat=2)]
    chosen = None
    for trio in itertools.combinations(cands, 3):
        vecs = units + list(trio)
        if all(_independent(F, [[const(x) for x in vecs[i]] for i in idx]) for idx in itertools.combinations(range(6), 3)):
            chosen = trio
            break
    if chosen is None:
        raise ValueError(f"no valid mixing vectors over F_{F.q}")
    kernels = {}
    E = lambda a, b: _edge(n, a, b)  # noqa: E731
    for i in (1, 2, 3):
        kernels[(E(f"s{i}", f"v{i}"), f"x{i}")] = const(1)
    for k, f in zip((4, 5, 6), chosen):
        for j in (1, 2, 3):
            kernels[(E(f"s{j}", f"v{k}"), f"x{j}")] = const(f[j - 1])
    for e in n.topo_order():
        tail = n.real[e].tail
        if tail in {f"v{i}" for i in range(1, 13)}:
            for p in n.preds(e):
                kernels[(e, p)] = const(1)
    # v13: solve sum c_k f_k = e1
    Fm = RatMatrix(F, [[const(chosen[k][r]) for k in range(3)] for r in range(3)])
    c = Fm.inverse() @ RatMatrix(F, [[const(1)], [const(0)], [const(0)]])
    out13 = E("v13", "t21")
    for k, relay in enumerate(("v10", "v11", "v12")):
        val = c.rows[k][0]
        if val.num:
            kernels[(out13, E(relay, "v13"))] = val
    code = NetworkCode(F, "inst", kernels, n)
    code.mixing_vectors = chosen
    return lift_to_unit_delay(n, code) if mode == "ud" else code
