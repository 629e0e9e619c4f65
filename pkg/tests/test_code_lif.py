import pytest
from hypothesis import given, settings, strategies as st

from netcode.code import (
    NetworkCode,
    load_code,
    lift_to_unit_delay,
    propagate,
    transfer_matrices,
    verify,
)
from netcode.errors import FieldTooSmallError
from netcode.field import make_field
from netcode.lif import lemma2_combine, lif_construct
from netcode.netgen import butterfly, combination, example1_net, fig2_cascade, random_acyclic
from netcode.polyrat import RationalFn

F2 = make_field(2)
ONE = RationalFn.one(F2)


def butterfly_xor(mode="inst"):
    n = butterfly()
    k = {(1, "x1"): ONE, (2, "x2"): ONE}
    for e in (3, 6):
        k[(e, 1)] = ONE
    for e in (4, 7):
        k[(e, 2)] = ONE
    k[(5, 3)] = ONE
    k[(5, 4)] = ONE
    k[(8, 5)] = ONE
    k[(9, 5)] = ONE
    c = NetworkCode(F2, "inst", k, n)
    return n, (lift_to_unit_delay(n, c) if mode == "ud" else c)


def test_butterfly_vectors():
    n, c = butterfly_xor()
    b = propagate(n, c)
    as_ints = lambda v: tuple(x.constant_value() if x.num else 0 for x in v)  # noqa: E731
    assert as_ints(b[5]) == (1, 1)
    assert as_ints(b[6]) == (1, 0) and as_ints(b[7]) == (0, 1)
    assert verify(n, c).feasible


def test_lifted_butterfly_vectors():
    n, c = butterfly_xor("ud")
    b = propagate(n, c)
    z = lambda k: RationalFn.monomial(F2, k)  # noqa: E731
    assert b[5] == [z(3), z(3)]
    assert b[8] == [z(4), z(4)]
    assert verify(n, c).feasible


def test_broken_code_names_sink():
    n, c = butterfly_xor()
    k = dict(c.kernels)
    del k[(5, 4)]  # bottleneck carries only x1
    v = verify(n, NetworkCode(F2, "inst", k, n))
    assert not v.feasible and list(v.invertibility_fail) == ["t1"]
    assert "t1" in v.describe()


def test_interference_detected():
    # t2 demands only x2; on example1_net an all-ones lifted code leaks x1 into it
    n = example1_net()
    kernels = {(e, p): ONE for e in n.topo_order() for p in n.preds(e)}
    inst = NetworkCode(F2, "inst", kernels, n)
    assert verify(n, inst).feasible
    v = verify(n, lift_to_unit_delay(n, inst))
    assert set(v.interference_fail) == {"t1", "t2"}


def test_mode_constraints():
    n = butterfly()
    z = RationalFn.monomial(F2, 1)
    with pytest.raises(Exception):
        NetworkCode(F2, "inst", {(5, 3): z}, n).validate(n)
    with pytest.raises(Exception):
        NetworkCode(F2, "ud", {(5, 3): ONE}, n).validate(n)


def test_serialization_round_trip():
    n, c = butterfly_xor("ud")
    c2 = load_code(c.to_json(), n)
    assert c2 == c
    assert transfer_matrices(n, c2).g_list() == transfer_matrices(n, c).g_list()


@pytest.mark.parametrize("q", [2, 3, 4])
@pytest.mark.parametrize("mode", ["inst", "ud"])
def test_lif_butterfly(q, mode):
    F = make_field(*{2: (2, 1), 3: (3, 1), 4: (2, 2)}[q])
    n = butterfly()
    c = lif_construct(n, F, mode)
    assert verify(n, c).feasible


def test_lif_field_limits():
    with pytest.raises(FieldTooSmallError):
        lif_construct(combination(4, 2), F2, "inst")
    assert verify(combination(4, 2), lif_construct(combination(4, 2), make_field(3))).feasible
    assert verify(fig2_cascade(), lif_construct(fig2_cascade(), F2, "ud")).feasible


def test_lif_keeps_dual_invariant():
    F = make_field(5)
    n = combination(5, 3)
    seen = []

    def check(edge, states):
        seen.append(all(s.dual_ok(F) for s in states.values()))

    lif_construct(n, F, "inst", on_step=check)
    assert seen and all(seen)


@settings(max_examples=25, deadline=None)
@given(st.integers(0, 5000), st.sampled_from([(3, 1), (2, 2), (5, 1)]), st.sampled_from(["inst", "ud"]))
def test_lif_random(seed, pm, mode):
    n = random_acyclic(8, 18, 2, 3, seed)
    try:
        c = lif_construct(n, make_field(*pm), mode)
    except FieldTooSmallError:
        return
    assert verify(n, c).feasible
    if mode == "inst":
        assert verify(n, lift_to_unit_delay(n, c)).feasible


@settings(max_examples=100, deadline=None)
@given(st.data())
def test_lemma2_property(data):
    q = data.draw(st.sampled_from([5, 7]))
    F = make_field(q)
    d = data.draw(st.integers(1, 3))
    k = data.draw(st.integers(1, 4))
    pairs = []
    for _ in range(k):
        x = data.draw(st.lists(st.integers(0, q - 1), min_size=d, max_size=d))
        y = data.draw(st.lists(st.integers(0, q - 1), min_size=d, max_size=d))
        if sum(a * b for a, b in zip(x, y)) % q == 0:
            continue
        pairs.append(([RationalFn.const(F, a) for a in x], [RationalFn.const(F, b) for b in y]))
    if not pairs:
        return
    u, coeffs = lemma2_combine(pairs, F)
    for _x, y in pairs:
        dot = sum(int(a.constant_value() if a.num else 0) * int(b.constant_value() if b.num else 0) for a, b in zip(u, y))
        assert dot % q != 0


def test_lemma2_examples():
    F = make_field(3)
    c = lambda a: RationalFn.const(F, a)  # noqa: E731
    u, coeffs = lemma2_combine([([c(1), c(0)], [c(1), c(0)]), ([c(0), c(1)], [c(0), c(1)])], F)
    assert u == [c(1), c(1)] and coeffs == [1, 1]
    x = [c(2), c(1)]
    assert lemma2_combine([(x, [c(1), c(0)])], F)[0] == x
    with pytest.raises(FieldTooSmallError):
        lemma2_combine([([c(1)], [c(1)])] * 3, F)
    with pytest.raises(ValueError):
        lemma2_combine([([c(1), c(0)], [c(0), c(1)])], F)


def test_dual_update_matches_inversion():
    import random

    from netcode.lif import SinkState, update_sink_state
    from netcode.polyrat import RatMatrix, rat_dot

    F = make_field(5)
    rng = random.Random(2)
    c = lambda a: RationalFn.const(F, a)  # noqa: E731
    done = 0
    while done < 20:
        B = [[c(rng.randrange(5)) for _ in range(3)] for _ in range(3)]
        Bm = RatMatrix.from_columns(F, B)
        if Bm.rank() < 3:
            continue
        A = Bm.inverse().transpose().columns()
        state = SinkState("t", ["p0", "p1", "p2"], B, [list(a) for a in A])
        assert state.dual_ok(F)
        k = rng.randrange(3)
        b_e = [c(rng.randrange(5)) for _ in range(3)]
        if not rat_dot(F, b_e, state.A[k]).num:
            continue
        new = update_sink_state(F, state, "e", b_e, f"p{k}")
        direct = new.b_matrix(F).inverse().transpose()
        assert new.a_matrix(F) == direct and new.dual_ok(F)
        done += 1


def test_lif_final_basis_is_transfer_matrix():
    from netcode.netgraph import flow_decompose

    n = combination(5, 2)
    F = make_field(2, 2)
    code = lif_construct(n, F, "ud")
    b = propagate(n, code)
    fd = flow_decompose(n)
    for t, st_ in code.sink_states.items():
        assert [b[p[-2]] for p in fd.paths[t]] == st_.B
