import pytest
from hypothesis import given, settings, strategies as st

from netcode.code import propagate, verify
from netcode.delaycode import (
    DelayCodeScheme,
    budget_audit,
    delayed_combine,
    fig4_delay_code_search,
    materialize,
    nonuniform_construct,
    uniform_construct,
    uniformity_audit,
)
from netcode.errors import CodeError, NodeDisjointnessError
from netcode.field import make_field
from netcode.netgen import butterfly, combination, fig2_cascade, random_acyclic
from netcode.polyrat import RationalFn, rat_dot

F2 = make_field(2)
z = lambda k: RationalFn.monomial(F2, k)  # noqa: E731
ZERO = RationalFn.zero(F2)
ONE = RationalFn.one(F2)


def test_delayed_combine_needs_a_delay():
    # (1,0) must meet (1,0) and (1,1); (0,1) must meet (0,1).  Each of the
    # three undelayed binary sums misses one constraint.
    e1, e2 = [ONE, ZERO], [ZERO, ONE]
    pairs = [(e1, [e1, [ONE, ONE]]), (e2, e2)]
    ys = [e1, [ONE, ONE], e2]
    for u in (e1, e2, [ONE, ONE]):
        assert any(not rat_dot(F2, u, y).num for y in ys)
    u, alphas, betas = delayed_combine(pairs)
    for y in ys:
        assert rat_dot(F2, u, y).num
    used = [b for a, b in zip(alphas, betas) if a]
    assert len(set(used)) > 1 and max(used) <= len(ys) - 1


def test_delayed_combine_prefers_no_delay():
    pairs = [([ONE, ZERO], [ONE, ONE]), ([ONE, ONE], [ZERO, ONE])]
    u, _alphas, betas = delayed_combine(pairs)
    assert u == [ZERO, ONE]
    assert betas == [0, 0]


def test_delayed_combine_unit_delay_shift():
    pairs = [([ONE, ZERO], [ONE, ONE])]
    u, _a, _b = delayed_combine(pairs, mode="ud")
    assert u == [z(1), ZERO]


@settings(max_examples=60, deadline=None)
@given(st.data())
def test_delayed_combine_property(data):
    d = data.draw(st.integers(1, 3))
    k = data.draw(st.integers(1, 5))
    vec = st.lists(st.integers(0, 3), min_size=d, max_size=d).map(
        lambda es: [z(e - 1) if e else ZERO for e in es]
    )
    pairs = []
    for _ in range(k):
        x, y = data.draw(vec), data.draw(vec)
        if rat_dot(F2, x, y).num:
            pairs.append((x, y))
    if not pairs:
        return
    u, alphas, betas = delayed_combine(pairs)
    for _, y in pairs:
        assert rat_dot(F2, u, y).num
    assert all(0 <= b <= len(pairs) - 1 for a, b in zip(alphas, betas) if a)


@pytest.mark.parametrize("net", [butterfly, lambda: combination(4, 2), fig2_cascade, lambda: combination(5, 3)])
@pytest.mark.parametrize("mode", ["ud", "inst"])
def test_nonuniform(net, mode):
    n = net()
    s = nonuniform_construct(n, mode)
    assert verify(n, s.to_code(n)).feasible
    assert budget_audit(n, s)["ok"]


@pytest.mark.parametrize("nk", [(4, 2), (5, 2), (5, 3), (6, 3)])
def test_uniform(nk):
    n = combination(*nk)
    s = uniform_construct(n, "ud")
    assert uniformity_audit(n, s) and budget_audit(n, s)["ok"]
    assert verify(n, s.to_code(n)).feasible


def test_uniform_needs_node_disjoint_paths():
    with pytest.raises(NodeDisjointnessError):
        uniform_construct(fig2_cascade(), "ud")


@settings(max_examples=20, deadline=None)
@given(st.integers(0, 10_000))
def test_random_nonuniform(seed):
    n = random_acyclic(9, 20, 2, 4, seed)
    s = nonuniform_construct(n, "ud")
    assert verify(n, s.to_code(n)).feasible
    assert budget_audit(n, s)["max_memory"] <= len(n.sinks) - 1


def test_scheme_round_trip():
    n = combination(4, 2)
    s = nonuniform_construct(n, "ud")
    assert DelayCodeScheme.from_dict(s.to_dict()) == s


def _delayed_uniform():
    """Uniform scheme on combination(4,2) with one extra memory unit at m1."""
    n = combination(4, 2)
    s = uniform_construct(n, "ud")
    delays = dict(s.delays)
    for (e, p), a in s.delays.items():
        if p == 1:  # s -> m1 feeds every output of m1
            delays[(e, p)] = a + 1
    return n, DelayCodeScheme("uniform", "ud", delays, dict(s.sink_kernels))


def test_materialize_adds_forwarding_edges():
    n, s = _delayed_uniform()
    assert uniformity_audit(n, s) and verify(n, s.to_code(n)).feasible
    g, c = materialize(n, s)
    assert len(g.real) == len(n.real) + 1 and len(g.nodes) == len(n.nodes) + 1
    assert verify(g, c).feasible
    # memoryless: every non-source kernel is exactly z
    for (e, p), k in c.kernels.items():
        tail = g.edges[e].tail
        if tail is not None and not g.is_source(tail) and g.edges[e].head is not None:
            assert k == z(1)
    # the original edges carry the same global vectors in both networks
    b_old, b_new = propagate(n, s.to_code(n)), propagate(g, c)
    for e in n.real:
        assert b_old[e] == b_new[e]


def test_materialize_rejects_nonuniform():
    n = combination(4, 2)
    with pytest.raises(CodeError):
        materialize(n, nonuniform_construct(n, "ud"))


def test_fig4_search_small():
    res = fig4_delay_code_search(2)
    assert res["solutions"] == [] and res["triple_method"] == "enumerated"
    assert fig4_delay_code_search(2, allow_dependent=True)["solutions"]
