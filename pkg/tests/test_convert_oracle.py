import pytest

from netcode.code import NetworkCode, lift_to_unit_delay, transfer_matrices, verify
from netcode.convert import determinant_product, ud_to_inst
from netcode.delaycode import nonuniform_construct
from netcode.errors import InfeasibleCodeError, SearchCapExceeded
from netcode.field import embed, make_field
from netcode.lif import lif_construct
from netcode.netgen import butterfly, combination, example1_net, example3_net, fig2_cascade
from netcode.oracle import exhaustive_search, min_field_size, table1_audit
from netcode.polyrat import RationalFn, eval_at
from netcode.reference import example2_code

F2 = make_field(2)


def _check_conversion(n, c):
    conv = ud_to_inst(n, c)
    assert conv.Q > conv.deg_gn + conv.deg_gd
    assert conv.code.mode == "inst" and conv.code.field.q == conv.Q
    assert verify(n, conv.code).feasible
    # each converted kernel is the original kernel evaluated at z_Q
    emb = embed(c.field, conv.field)
    full = transfer_matrices(n, c).code
    for pair, k in full.kernels.items():
        got = conv.code.kernels.get(pair, RationalFn.zero(conv.field))
        expect = int(eval_at(k, conv.z_Q, emb))
        assert expect == (got.constant_value() if got.num else 0)
    return conv


def test_convert_example2():
    n = fig2_cascade()
    conv = _check_conversion(n, example2_code(n))
    assert conv.Q == 64


def test_convert_lif_and_delay_codes():
    n = combination(4, 2)
    assert _check_conversion(n, lif_construct(n, make_field(3), "ud")).Q == 27
    _check_conversion(n, nonuniform_construct(n, "ud").to_code(n))
    _check_conversion(butterfly(), lif_construct(butterfly(), F2, "ud"))


def test_determinant_product_degree():
    n = fig2_cascade()
    g = determinant_product(transfer_matrices(n, example2_code(n)))
    assert g.den == (1,) and len(g.num) - 1 == 58


def test_convert_rejects_infeasible():
    n = butterfly()
    with pytest.raises(InfeasibleCodeError):
        ud_to_inst(n, NetworkCode(F2, "ud", {}, n))


def test_oracle_verdicts():
    assert not exhaustive_search(fig2_cascade(), 2, "inst").feasible
    r = exhaustive_search(fig2_cascade(), 3, "inst")
    assert r.feasible and verify(fig2_cascade(), r.code).feasible
    assert exhaustive_search(fig2_cascade(), 2, "ud").feasible
    assert not exhaustive_search(example3_net(), 2, "inst").feasible
    assert exhaustive_search(example3_net(), 3, "inst").feasible
    assert min_field_size(combination(5, 3), "inst", [2, 3, 4])["min"] == 4


def test_oracle_agrees_with_lif_on_small_fields():
    # LIF needs q >= |T| in general; the oracle's minimum is never above what LIF achieves
    for nk in ((4, 2), (5, 2)):
        n = combination(*nk)
        m = min_field_size(n, "inst", [2, 3, 4])["min"]
        r = exhaustive_search(n, m, "inst")
        assert r.feasible and verify(n, lift_to_unit_delay(n, r.code)).feasible


def test_oracle_cap():
    with pytest.raises(SearchCapExceeded):
        exhaustive_search(combination(6, 3), 4, "inst", cap=1000)
    res = min_field_size(combination(6, 3), "inst", [4], cap=1000)
    assert res["min"] is None and "cap_exceeded" in res["verdicts"][4]


def test_table1_audit_example1():
    audit = table1_audit(example1_net(), [2], source_deg_bound=1)
    assert audit["inst"] == {2: True} and audit["ud"] == {2: False}
    assert audit["consistent"] and not audit["equal_depth"]
