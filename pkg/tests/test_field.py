import itertools

import pytest
from hypothesis import given, settings, strategies as st

from netcode.errors import FieldError, FieldMismatchError
from netcode.field import (
    canonical_modulus,
    embed,
    extension_containing,
    make_field,
    parse_field,
    prime_power,
)

SMALL = [(2, 1), (3, 1), (5, 1), (2, 2), (2, 3), (3, 2), (2, 4), (7, 1)]


def _brute_irreducible(coeffs, p):
    """No monic factor of degree 1..deg/2, by polynomial long division."""
    m = len(coeffs) - 1
    for d in range(1, m // 2 + 1):
        for rest in itertools.product(range(p), repeat=d):
            div = list(rest) + [1]
            r = list(coeffs)
            for i in range(len(r) - 1, d - 1, -1):
                c = r[i] % p
                if c:
                    for j in range(d + 1):
                        r[i - d + j] = (r[i - d + j] - c * div[j]) % p
            if not any(x % p for x in r[:d]):
                return False
    return True


@pytest.mark.parametrize("p,m", [(2, 2), (2, 3), (2, 4), (3, 2), (3, 3), (5, 2)])
def test_canonical_modulus_is_least_irreducible(p, m):
    mod = canonical_modulus(p, m)
    assert len(mod) == m + 1 and mod[-1] == 1
    assert _brute_irreducible(mod, p)
    # every monic polynomial earlier in the order is reducible
    key = lambda c: tuple(reversed(c))  # noqa: E731
    for rest in itertools.product(range(p), repeat=m):
        cand = tuple(rest) + (1,)
        if key(cand) < key(mod):
            assert not _brute_irreducible(cand, p)


def test_known_moduli():
    assert canonical_modulus(2, 2) == (1, 1, 1)
    assert canonical_modulus(2, 3) == (1, 1, 0, 1)


@pytest.mark.parametrize("p,m", SMALL)
def test_multiplicative_group_is_cyclic(p, m):
    F = make_field(p, m)
    orders = []
    for a in range(1, F.q):
        x, k = a, 1
        while x != 1:
            x, k = F.mul(x, a), k + 1
        orders.append(k)
    assert max(orders) == F.q - 1
    assert all((F.q - 1) % k == 0 for k in orders)


@pytest.mark.parametrize("p,m", SMALL)
def test_inverse_table(p, m):
    F = make_field(p, m)
    for a in range(1, F.q):
        assert F.mul(a, F.inv(a)) == 1
    with pytest.raises(ZeroDivisionError):
        F.inv(0)


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(SMALL), st.data())
def test_field_axioms(pm, data):
    F = make_field(*pm)
    el = st.integers(0, F.q - 1)
    a, b, c = (F(data.draw(el)) for _ in range(3))
    assert a + b == b + a and a * b == b * a
    assert (a + b) + c == a + (b + c)
    assert (a * b) * c == a * (b * c)
    assert a * (b + c) == a * b + a * c
    assert a - a == F(0) and a + (-a) == F(0)
    if b:
        assert (a / b) * b == a


def test_parse_and_names():
    assert parse_field("2^3").q == 8
    assert parse_field("9").name == "3^2"
    assert prime_power(16) == (2, 4)
    for bad in ("6", "1", "2^0", "abc"):
        with pytest.raises(FieldError):
            parse_field(bad)


def test_size_cap():
    with pytest.raises(FieldError):
        make_field(2, 17)


def test_mixed_fields_rejected():
    with pytest.raises(FieldMismatchError):
        make_field(2)(1) + make_field(3)(1)


@pytest.mark.parametrize("base,target", [((2, 1), (2, 3)), ((2, 2), (2, 4)), ((3, 1), (3, 2))])
def test_embedding_is_homomorphism(base, target):
    B, T = make_field(*base), make_field(*target)
    f = embed(B, T)
    for a, b in itertools.product(range(B.q), repeat=2):
        assert f(B.add(a, b)) == T.add(f(a), f(b))
        assert f(B.mul(a, b)) == T.mul(f(a), f(b))
    assert f(1) == 1 and len({f(a) for a in range(B.q)}) == B.q


def test_embed_requires_subfield():
    with pytest.raises(FieldError):
        embed(make_field(2, 2), make_field(2, 3))


def test_extension_containing_is_smallest():
    F2 = make_field(2)
    T, emb = extension_containing(F2, 12)
    assert T.q == 16
    T, _ = extension_containing(make_field(3), 9)
    assert T.q == 27
    T, _ = extension_containing(make_field(2, 2), 5)
    assert T.q == 16
