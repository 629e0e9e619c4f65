"""Finite fields F_q, q = p^m, with table-driven arithmetic.

Elements are encoded as integers in [0, q): the residue polynomial
c_0 + c_1 x + ... + c_{m-1} x^{m-1} modulo the field modulus maps to
c_0 + c_1 p + ... + c_{m-1} p^{m-1}.  Hot loops in the rest of the
package work on these integer representatives through the bound
``add``/``mul``/``inv`` callables of a :class:`FieldSpec`;
:class:`FieldElement` is the user-facing wrapper that refuses to mix
fields.
"""

from __future__ import annotations

import functools
import operator
import re
from dataclasses import dataclass, field as dc_field

from .errors import FieldError, FieldMismatchError

MAX_FIELD_SIZE = 2**16
_FULL_TABLE_LIMIT = 256


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    d = 3
    while d * d <= n:
        if n % d == 0:
            return False
        d += 2
    return True


def _prime_factors(n: int) -> list[int]:
    out, d = [], 2
    while d * d <= n:
        if n % d == 0:
            out.append(d)
            while n % d == 0:
                n //= d
        d += 1
    if n > 1:
        out.append(n)
    return out


def _digits(a: int, p: int, m: int) -> list[int]:
    out = []
    for _ in range(m):
        a, r = divmod(a, p)
        out.append(r)
    return out


def _undigits(ds, p: int) -> int:
    v = 0
    for d in reversed(ds):
        v = v * p + d
    return v


# --- dense polynomials over the prime field F_p (ascending coefficient lists) ---

def _pp_trim(a: list[int]) -> list[int]:
    while a and a[-1] == 0:
        a.pop()
    return a


def _pp_mod(a: list[int], b: list[int], p: int) -> list[int]:
    a = _pp_trim(list(a))
    db = len(b) - 1
    inv_lead = pow(b[-1], p - 2, p)
    while len(a) - 1 >= db and a:
        shift = len(a) - 1 - db
        f = a[-1] * inv_lead % p
        for i, c in enumerate(b):
            a[i + shift] = (a[i + shift] - f * c) % p
        _pp_trim(a)
    return a


def _pp_mul(a: list[int], b: list[int], p: int) -> list[int]:
    if not a or not b:
        return []
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] = (out[i + j] + x * y) % p
    return _pp_trim(out)


def _monic_polys(p: int, degree: int):
    """Monic polynomials of exact degree ``degree`` in increasing integer encoding."""
    for low in range(p**degree):
        yield _digits(low, p, degree) + [1]


def is_irreducible(poly: list[int], p: int) -> bool:
    """Exhaustive trial division by every monic polynomial of degree <= deg/2."""
    poly = _pp_trim(list(poly))
    deg = len(poly) - 1
    if deg < 1:
        return False
    if deg == 1:
        return True
    for d in range(1, deg // 2 + 1):
        for cand in _monic_polys(p, d):
            if not _pp_mod(poly, cand, p):
                return False
    return True


def canonical_modulus(p: int, m: int) -> tuple[int, ...]:
    """Lexicographically least monic irreducible polynomial of degree ``m`` over F_p.

    For m == 1 this is ``x`` itself, whose residues are exactly F_p.
    """
    if m == 1:
        return (0, 1)
    for cand in _monic_polys(p, m):
        if is_irreducible(cand, p):
            return tuple(cand)
    raise FieldError(f"no irreducible polynomial of degree {m} over F_{p}")  # pragma: no cover


@dataclass(frozen=True)
class FieldSpec:
    """Descriptor of F_q with q = p^m and a fixed irreducible modulus."""

    p: int
    m: int
    modulus: tuple[int, ...]
    q: int = dc_field(init=False)

    def __post_init__(self):
        object.__setattr__(self, "q", self.p**self.m)
        self._build_tables()

    # tables are attached as plain attributes so the dataclass stays hashable
    def _build_tables(self):
        p, m, q = self.p, self.m, self.q
        mod = list(self.modulus)

        if p == 2:
            modint = _undigits(mod, 2)

            def slow_mul(a, b):
                r = 0
                while b:
                    if b & 1:
                        r ^= a
                    b >>= 1
                    a <<= 1
                    if a >> m & 1:
                        a ^= modint
                return r
        else:
            def slow_mul(a, b):
                prod = _pp_mul(_pp_trim(_digits(a, p, m)), _pp_trim(_digits(b, p, m)), p)
                if m == 1:
                    return prod[0] if prod else 0
                return _undigits(_pp_mod(prod, mod, p), p)

        def slow_pow(a, k):
            r = 1
            while k:
                if k & 1:
                    r = slow_mul(r, a)
                a = slow_mul(a, a)
                k >>= 1
            return r

        # primitive element: smallest representative of multiplicative order q-1
        order = q - 1
        factors = _prime_factors(order)
        g = 1
        for cand in range(1, q):
            if all(slow_pow(cand, order // r) != 1 for r in factors):
                g = cand
                break
        exp = [1]
        for _ in range(order - 1):
            exp.append(slow_mul(exp[-1], g))
        log = [0] * q
        for i, v in enumerate(exp):
            log[v] = i
        exp2 = exp + exp
        object.__setattr__(self, "_exp", exp2)
        object.__setattr__(self, "_log", log)
        object.__setattr__(self, "primitive", exp[1] if q > 2 else 1)

        if p == 2:
            add = operator.xor
            neg = _identity
        elif m == 1:
            add = _mod_add(p)
            neg = _mod_neg(p)
        else:
            digits = [_digits(a, p, m) for a in range(q)]
            pw = [p**i for i in range(m)]

            def add(a, b, _d=digits, _pw=pw, _p=p):
                da, db = _d[a], _d[b]
                return sum(((x + y) % _p) * w for x, y, w in zip(da, db, _pw))

            def neg(a, _d=digits, _pw=pw, _p=p):
                return sum(((-x) % _p) * w for x, w in zip(_d[a], _pw))

        if q <= _FULL_TABLE_LIMIT:
            mt = [[0] * q for _ in range(q)]
            for a in range(1, q):
                la = log[a]
                row = mt[a]
                for b in range(1, q):
                    row[b] = exp2[la + log[b]]
            at = [[add(a, b) for b in range(q)] for a in range(q)]
            mul = _table_op(mt)
            if p != 2:
                add = _table_op(at)
            object.__setattr__(self, "_mul_table", mt)
        else:
            def mul(a, b, _e=exp2, _l=log):
                if a == 0 or b == 0:
                    return 0
                return _e[_l[a] + _l[b]]
        inv_table = [0] * q
        for a in range(1, q):
            inv_table[a] = exp2[(order - log[a]) % order] if order else 1
        object.__setattr__(self, "add", add)
        object.__setattr__(self, "mul", mul)
        object.__setattr__(self, "neg", neg)
        object.__setattr__(self, "_inv", inv_table)

    # --- integer-representative API used by the polynomial layer ---

    def sub(self, a: int, b: int) -> int:
        return self.add(a, self.neg(b))

    def inv(self, a: int) -> int:
        if a == 0:
            raise ZeroDivisionError("inverse of zero in " + self.name)
        return self._inv[a]

    def div(self, a: int, b: int) -> int:
        return self.mul(a, self.inv(b))

    def pow(self, a: int, k: int) -> int:
        if a == 0:
            return 0 if k > 0 else 1
        order = self.q - 1
        return self._exp[(self._log[a] * k) % order] if order else 1

    def from_int(self, n: int) -> int:
        """Image of the integer n under Z -> F_p -> F_q."""
        return n % self.p

    @property
    def name(self) -> str:
        return f"{self.p}^{self.m}"

    def __repr__(self):
        return f"FieldSpec(F_{self.q} = {self.name}, modulus={list(self.modulus)})"

    def __call__(self, value: int) -> "FieldElement":
        return FieldElement(self, value)

    def elements(self):
        return [FieldElement(self, v) for v in range(self.q)]

    # pickling: tables are rebuilt
    def __reduce__(self):
        return (make_field, (self.p, self.m))


def _identity(a):
    return a


def _mod_add(p):
    def add(a, b):
        return (a + b) % p
    return add


def _mod_neg(p):
    def neg(a):
        return (-a) % p
    return neg


def _table_op(t):
    def op(a, b):
        return t[a][b]
    return op


@functools.lru_cache(maxsize=None)
def make_field(p: int, m: int = 1) -> FieldSpec:
    """Return F_{p^m} with its canonical modulus; cached so equal fields are identical."""
    if not isinstance(p, int) or not is_prime(p):
        raise FieldError(f"characteristic {p!r} is not prime")
    if not isinstance(m, int) or m < 1:
        raise FieldError(f"extension degree {m!r} must be a positive integer")
    if p**m > MAX_FIELD_SIZE:
        raise FieldError(f"field size {p}^{m} exceeds cap {MAX_FIELD_SIZE}")
    return FieldSpec(p, m, canonical_modulus(p, m))


_FIELD_RE = re.compile(r"^\s*(\d+)\s*(?:\^\s*(\d+))?\s*$")


def parse_field(text) -> FieldSpec:
    """Parse ``"p^m"`` or a prime power ``"q"`` (e.g. ``"4"`` -> F_{2^2})."""
    if isinstance(text, FieldSpec):
        return text
    mt = _FIELD_RE.match(str(text))
    if not mt:
        raise FieldError(f"cannot parse field {text!r}")
    base = int(mt.group(1))
    if mt.group(2) is not None:
        return make_field(base, int(mt.group(2)))
    return make_field(*prime_power(base))


def prime_power(q: int) -> tuple[int, int]:
    """Split q = p^m; raises FieldError if q is not a prime power."""
    if q < 2:
        raise FieldError(f"{q} is not a prime power")
    for p in range(2, q + 1):
        if q % p == 0:
            m, r = 0, q
            while r % p == 0:
                r //= p
                m += 1
            if r != 1 or not is_prime(p):
                raise FieldError(f"{q} is not a prime power")
            return p, m
    raise FieldError(f"{q} is not a prime power")  # pragma: no cover


class FieldElement:
    """An element of a specific finite field.

    Arithmetic between elements of different fields raises
    :class:`FieldMismatchError`; plain ints are lifted through Z -> F_p.
    """

    __slots__ = ("field", "value")

    def __init__(self, field: FieldSpec, value: int):
        if not 0 <= value < field.q:
            raise FieldError(f"representative {value} out of range for F_{field.q}")
        self.field = field
        self.value = value

    def _other(self, other) -> int:
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError(f"F_{self.field.q} vs F_{other.field.q}")
            return other.value
        if isinstance(other, int):
            return self.field.from_int(other)
        return NotImplemented

    def _wrap(self, v):
        return FieldElement(self.field, v)

    def __add__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.add(self.value, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(self.value, o))

    def __rsub__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.sub(o, self.value))

    def __mul__(self, other):
        o = self._other(other)
        return NotImplemented if o is NotImplemented else self._wrap(self.field.mul(self.value, o))

    __rmul__ = __mul__

    def __truediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        if o == 0:
            raise ZeroDivisionError("division by zero field element")
        return self._wrap(self.field.div(self.value, o))

    def __rtruediv__(self, other):
        o = self._other(other)
        if o is NotImplemented:
            return NotImplemented
        return self._wrap(self.field.div(o, self.value))

    def __neg__(self):
        return self._wrap(self.field.neg(self.value))

    def __pow__(self, k: int):
        if k < 0:
            return self._wrap(self.field.inv(self.value)) ** (-k)
        return self._wrap(self.field.pow(self.value, k))

    def inverse(self) -> "FieldElement":
        return self._wrap(self.field.inv(self.value))

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return self.value == self.field.from_int(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.p, self.field.m, self.value))

    def __bool__(self):
        return self.value != 0

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"F{self.field.q}({self.value})"


def field_arith(a: FieldElement, b: FieldElement, op: str) -> FieldElement:
    """Apply ``op`` in {'add', 'sub', 'mul', 'div'} to two elements of one field."""
    ops = {"add": operator.add, "sub": operator.sub, "mul": operator.mul, "div": operator.truediv}
    if op not in ops:
        raise ValueError(f"unknown field operation {op!r}")
    if not isinstance(a, FieldElement) or not isinstance(b, FieldElement):
        raise TypeError("field_arith expects FieldElement operands")
    if a.field != b.field:
        raise FieldMismatchError(f"F_{a.field.q} vs F_{b.field.q}")
    return ops[op](a, b)


@dataclass(frozen=True)
class Embedding:
    """Injective homomorphism from ``source`` into ``target`` (as integer maps)."""

    source: FieldSpec
    target: FieldSpec
    table: tuple[int, ...]

    def __call__(self, a):
        if isinstance(a, FieldElement):
            if a.field != self.source:
                raise FieldMismatchError("element not in the embedding's source field")
            return FieldElement(self.target, self.table[a.value])
        return self.table[a]


def identity_embedding(f: FieldSpec) -> Embedding:
    return Embedding(f, f, tuple(range(f.q)))


def embed(base: FieldSpec, target: FieldSpec) -> Embedding:
    """Embed F_{p^m} into F_{p^n} (m | n) by sending x to a root of base's modulus.

    The root is the smallest representative found by exhaustive search.
    """
    if base.p != target.p or target.m % base.m:
        raise FieldError(f"F_{base.q} is not a subfield of F_{target.q}")
    if base == target:
        return identity_embedding(base)
    p = base.p
    if base.m == 1:
        return Embedding(base, target, tuple(range(p)))
    mod = base.modulus
    root = None
    for r in range(target.q):
        acc = 0
        for c in reversed(mod):  # Horner
            acc = target.add(target.mul(acc, r), c)
        if acc == 0:
            root = r
            break
    if root is None:  # pragma: no cover - guaranteed by subfield theory
        raise FieldError("no root of base modulus in target field")
    powers = [1]
    for _ in range(base.m - 1):
        powers.append(target.mul(powers[-1], root))
    table = []
    for a in range(base.q):
        v = 0
        for d, w in zip(_digits(a, p, base.m), powers):
            if d:
                v = target.add(v, target.mul(d, w))
        table.append(v)
    return Embedding(base, target, tuple(table))


def extension_containing(base: FieldSpec, min_size: int) -> tuple[FieldSpec, Embedding]:
    """Smallest F_{p^{m k}} (k >= 1) with more than ``min_size`` elements, plus the embedding."""
    k = 1
    while base.p ** (base.m * k) <= min_size:
        k += 1
        if base.p ** (base.m * k) > MAX_FIELD_SIZE:
            raise FieldError(f"extension of F_{base.q} beyond {min_size} exceeds cap {MAX_FIELD_SIZE}")
    target = make_field(base.p, base.m * k)
    return target, embed(base, target)
