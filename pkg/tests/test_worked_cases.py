"""Small hand-checkable cases across modules."""

import pytest

from netcode.code import NetworkCode, lift_to_unit_delay, propagate, transfer_matrices, verify
from netcode.convert import ud_to_inst
from netcode.delaycode import DelayCodeScheme, delayed_combine, materialize, uniform_construct
from netcode.errors import MincutError
from netcode.field import make_field
from netcode.netgen import butterfly, chain, combination, example1_net, fig2_cascade, random_acyclic
from netcode.netgraph import Network, flow_decompose
from netcode.polyrat import RationalFn, eval_at, rat_dot
from netcode.reference import example2_code
from netcode.sim import decode_check, random_inputs, simulate

F2 = make_field(2)
ONE, ZERO = RationalFn.one(F2), RationalFn.zero(F2)
z = lambda k: RationalFn.monomial(F2, k)  # noqa: E731


def _xor_butterfly():
    n = butterfly()
    k = {(1, "x1"): ONE, (2, "x2"): ONE, (3, 1): ONE, (6, 1): ONE, (4, 2): ONE, (7, 2): ONE,
         (5, 3): ONE, (5, 4): ONE, (8, 5): ONE, (9, 5): ONE}
    return n, NetworkCode(F2, "inst", k, n)


def test_relative_delay_of_one():
    # beta = 0 gives u = (0, 1), which misses y1; beta = 1 works
    x1, y1 = [ONE, ZERO], [ONE, ZERO]
    x2, y2 = [ONE, ONE], [ZERO, ONE]
    assert not rat_dot(F2, x1, y2).num
    u, alphas, betas = delayed_combine([(x1, y1), (x2, y2)])
    assert betas == [0, 1] and u == [ONE + z(1), z(1)]


def test_cascade_vectors_at_v2_inputs():
    n = fig2_cascade()
    b = propagate(n, example2_code(n))
    ins = {n.real[e].tail: b[e] for e in n.real_in("v2")}
    assert ins["a"] == [z(2), ZERO] and ins["d"] == [z(4), z(4)]


def test_evaluating_lift_at_one_recovers_constants():
    n, c = _xor_butterfly()
    lifted = lift_to_unit_delay(n, c)
    inst_rep, ud_rep = transfer_matrices(n, c), transfer_matrices(n, lifted)
    for s_inst, s_ud in zip(inst_rep.sinks, ud_rep.sinks):
        for r_i, r_u in zip(s_inst.M.rows, s_ud.M.rows):
            assert [int(eval_at(v, 1)) for v in r_u] == [x.constant_value() if x.num else 0 for x in r_i]
    conv = ud_to_inst(n, lifted)
    assert conv.z_Q == 1 and verify(n, conv.code).feasible


def test_zero_code_fails_everywhere():
    n = butterfly()
    v = verify(n, NetworkCode(F2, "ud", {}, n))
    assert set(v.invertibility_fail) == {"t1", "t2"}


def test_mincut_error_names_both_sinks():
    with pytest.raises(MincutError) as exc:
        flow_decompose(butterfly(), h_s_required=3)
    assert set(exc.value.sinks) == {"t1", "t2"}


def test_sink_with_no_demands():
    n = Network(["s", "t", "u"], [{"id": 1, "tail": "s", "head": "t"}, {"id": 2, "tail": "s", "head": "u"}],
                [{"node": "s", "h": 1}], [{"node": "t", "demands": [1]}, {"node": "u", "demands": []}])
    assert n.sink("u").h_t == 0
    c = NetworkCode(F2, "inst", {(1, "x1"): ONE}, n)
    assert verify(n, c).feasible


def test_materialize_without_memory_is_identity():
    n = combination(4, 2)
    g, c = materialize(n, uniform_construct(n, "ud"))
    assert g == n and verify(g, c).feasible
    g, _ = materialize(chain(3), uniform_construct(chain(3), "ud"))
    assert g == chain(3)


def test_impulse_reaches_e1_at_time_three():
    n = fig2_cascade()
    H = 12
    tr = simulate(n, example2_code(n), [[1] + [0] * (H - 1), [0] * H], H)
    e1 = next(e for e in n.real if n.real[e].label == "e_1")
    assert tr.edges[e1] == [0, 0, 0, 1] + [0] * (H - 4)


def test_interference_visible_in_trace():
    n = example1_net()
    inst = NetworkCode(F2, "inst", {(e, p): ONE for e in n.topo_order() for p in n.preds(e)}, n)
    lifted = lift_to_unit_delay(n, inst)
    rep = transfer_matrices(n, lifted)
    H = 30
    tr = simulate(n, lifted, random_inputs(F2, 2, H, 9), H)
    assert not all(decode_check(tr, rep, n).values())
    zero = simulate(n, lifted, [[0] * H, [0] * H], H)
    assert all(decode_check(zero, rep, n).values())


def test_random_generator_is_deterministic():
    a = random_acyclic(8, 14, 2, 2, seed=1)
    assert a == random_acyclic(8, 14, 2, 2, seed=1)
    assert len(a.real) == 14 and len(a.sinks) == 2


def test_scheme_serialization_fields():
    n = combination(4, 2)
    d = uniform_construct(n, "ud").to_dict()
    assert set(d["entries"][0]) == {"edge", "pred", "m", "delay"}
    assert DelayCodeScheme.from_dict(d).to_dict() == d
