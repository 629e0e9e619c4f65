"""Polynomials and rational functions over F_q in the delay variable z.

Polynomials are dense tuples of integer representatives, ascending in z,
with no trailing zeros (the zero polynomial is ``()``).  The tuple-level
helpers (``padd``, ``pmul``, ...) are what the search and construction
code uses in inner loops; :class:`Poly`, :class:`RationalFn` and
:class:`RatMatrix` wrap them with field bookkeeping.
"""

from __future__ import annotations

from typing import Iterable, Sequence

from .errors import FieldMismatchError, PoleError
from .field import Embedding, FieldElement, FieldSpec, identity_embedding

NEG_INF = float("-inf")

# ---------------------------------------------------------------------------
# tuple-level polynomial arithmetic
# ---------------------------------------------------------------------------


def ptrim(c: list[int]) -> tuple[int, ...]:
    n = len(c)
    while n and c[n - 1] == 0:
        n -= 1
    return tuple(c[:n])


def padd(F: FieldSpec, a, b):
    if not a:
        return b
    if not b:
        return a
    add = F.add
    if len(a) < len(b):
        a, b = b, a
    out = list(a)
    for i, y in enumerate(b):
        out[i] = add(out[i], y)
    return ptrim(out)


def pneg(F: FieldSpec, a):
    neg = F.neg
    return tuple(neg(x) for x in a)


def psub(F: FieldSpec, a, b):
    return padd(F, a, pneg(F, b))


def pscale(F: FieldSpec, a, c: int):
    if c == 0 or not a:
        return ()
    if c == 1:
        return a
    mul = F.mul
    return tuple(mul(x, c) for x in a)


def pshift(a, k: int):
    """Multiply by z^k."""
    return (0,) * k + a if a else ()


def pmul(F: FieldSpec, a, b):
    if not a or not b:
        return ()
    if len(a) == 1:
        return pscale(F, b, a[0])
    if len(b) == 1:
        return pscale(F, a, b[0])
    add, mul = F.add, F.mul
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                if y:
                    out[i + j] = add(out[i + j], mul(x, y))
    return ptrim(out)


def pdivmod(F: FieldSpec, a, b):
    if not b:
        raise ZeroDivisionError("polynomial division by zero")
    if len(a) < len(b):
        return (), a
    add, mul, neg = F.add, F.mul, F.neg
    inv_lead = F.inv(b[-1])
    r = list(a)
    db = len(b) - 1
    qout = [0] * (len(a) - db)
    for k in range(len(a) - 1 - db, -1, -1):
        c = r[k + db]
        if c:
            f = mul(c, inv_lead)
            qout[k] = f
            nf = neg(f)
            for i, y in enumerate(b):
                if y:
                    r[k + i] = add(r[k + i], mul(nf, y))
    return ptrim(qout), ptrim(r[:db])


def pexact_div(F: FieldSpec, a, b):
    q, r = pdivmod(F, a, b)
    if r:
        raise ArithmeticError("inexact polynomial division")
    return q


def pmonic(F: FieldSpec, a):
    if not a or a[-1] == 1:
        return a
    return pscale(F, a, F.inv(a[-1]))


def pgcd(F: FieldSpec, a, b):
    while b:
        a, b = b, pdivmod(F, a, b)[1]
    return pmonic(F, a)


def peval(F: FieldSpec, a, x: int) -> int:
    add, mul = F.add, F.mul
    acc = 0
    for c in reversed(a):
        acc = add(mul(acc, x), c)
    return acc


def pdeg(a):
    return len(a) - 1 if a else NEG_INF


ONE = (1,)
Z = (0, 1)

# ---------------------------------------------------------------------------
# Poly
# ---------------------------------------------------------------------------


class Poly:
    """Polynomial over a finite field; immutable."""

    __slots__ = ("field", "coeffs")

    def __init__(self, field: FieldSpec, coeffs: Iterable[int] = ()):
        self.field = field
        self.coeffs = ptrim([int(c) for c in coeffs])
        for c in self.coeffs:
            if not 0 <= c < field.q:
                raise ValueError(f"coefficient {c} not in F_{field.q}")

    @classmethod
    def _raw(cls, field, coeffs):
        obj = cls.__new__(cls)
        obj.field = field
        obj.coeffs = coeffs
        return obj

    @classmethod
    def monomial(cls, field, k: int, c: int = 1):
        return cls._raw(field, pshift((c,), k) if c else ())

    @property
    def degree(self):
        return pdeg(self.coeffs)

    def is_zero(self):
        return not self.coeffs

    def _check(self, other):
        if isinstance(other, int):
            return ptrim([self.field.from_int(other)])
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError("polynomial/element field mismatch")
            return ptrim([other.value])
        if not isinstance(other, Poly):
            return NotImplemented
        if other.field != self.field:
            raise FieldMismatchError(f"F_{self.field.q}[z] vs F_{other.field.q}[z]")
        return other.coeffs

    def __add__(self, other):
        o = self._check(other)
        return NotImplemented if o is NotImplemented else Poly._raw(self.field, padd(self.field, self.coeffs, o))

    __radd__ = __add__

    def __sub__(self, other):
        o = self._check(other)
        return NotImplemented if o is NotImplemented else Poly._raw(self.field, psub(self.field, self.coeffs, o))

    def __rsub__(self, other):
        o = self._check(other)
        return NotImplemented if o is NotImplemented else Poly._raw(self.field, psub(self.field, o, self.coeffs))

    def __neg__(self):
        return Poly._raw(self.field, pneg(self.field, self.coeffs))

    def __mul__(self, other):
        o = self._check(other)
        return NotImplemented if o is NotImplemented else Poly._raw(self.field, pmul(self.field, self.coeffs, o))

    __rmul__ = __mul__

    def __divmod__(self, other):
        o = self._check(other)
        q, r = pdivmod(self.field, self.coeffs, o)
        return Poly._raw(self.field, q), Poly._raw(self.field, r)

    def __floordiv__(self, other):
        return divmod(self, other)[0]

    def __mod__(self, other):
        return divmod(self, other)[1]

    def __pow__(self, k: int):
        out = Poly._raw(self.field, ONE)
        for _ in range(k):
            out = out * self
        return out

    def gcd(self, other: "Poly") -> "Poly":
        return Poly._raw(self.field, pgcd(self.field, self.coeffs, self._check(other)))

    def __call__(self, x, embedding: Embedding | None = None):
        return _evaluate_tuple(self.field, self.coeffs, x, embedding)

    def __eq__(self, other):
        if isinstance(other, Poly):
            return self.field == other.field and self.coeffs == other.coeffs
        if isinstance(other, (int, FieldElement)):
            return self.coeffs == self._check(other)
        return NotImplemented

    def __hash__(self):
        return hash((self.field.q, self.coeffs))

    def __bool__(self):
        return bool(self.coeffs)

    def __repr__(self):
        return f"Poly({format_poly(self.coeffs)})"

    def __str__(self):
        return format_poly(self.coeffs)


def _evaluate_tuple(F: FieldSpec, coeffs, x, embedding):
    """Evaluate coefficients of F[z] at x, which may live in an extension via ``embedding``."""
    if isinstance(x, FieldElement):
        target = x.field
        xv = x.value
    else:
        target = embedding.target if embedding is not None else F
        xv = int(x)
    if embedding is None:
        if target != F:
            raise FieldMismatchError("evaluation point in a different field; pass an embedding")
        embedding = identity_embedding(F)
    elif embedding.source != F or embedding.target != target:
        raise FieldMismatchError("embedding does not match polynomial and point fields")
    T = target
    acc = 0
    for c in reversed(coeffs):
        acc = T.add(T.mul(acc, xv), embedding.table[c])
    return FieldElement(T, acc)


def format_poly(coeffs, var: str = "z") -> str:
    if not coeffs:
        return "0"
    terms = []
    for k, c in enumerate(coeffs):
        if not c:
            continue
        if k == 0:
            terms.append(str(c))
        else:
            mono = var if k == 1 else f"{var}^{k}"
            terms.append(mono if c == 1 else f"{c}*{mono}")
    return " + ".join(terms)


# ---------------------------------------------------------------------------
# RationalFn
# ---------------------------------------------------------------------------


class RationalFn:
    """num/den in lowest terms with a monic denominator."""

    __slots__ = ("field", "num", "den")

    def __init__(self, field: FieldSpec, num=(), den=ONE):
        num = num.coeffs if isinstance(num, Poly) else ptrim([int(c) for c in num])
        den = den.coeffs if isinstance(den, Poly) else ptrim([int(c) for c in den])
        if not den:
            raise ZeroDivisionError("rational function with zero denominator")
        self.field = field
        self.num, self.den = _normalize(field, num, den)

    @classmethod
    def _raw(cls, field, num, den):
        obj = cls.__new__(cls)
        obj.field = field
        obj.num = num
        obj.den = den
        return obj

    @classmethod
    def make(cls, field, num, den=ONE):
        """Canonicalize tuple-level num/den."""
        return cls._raw(field, *_normalize(field, num, den))

    @classmethod
    def const(cls, field, c: int):
        return cls._raw(field, (c,) if c else (), ONE)

    @classmethod
    def poly(cls, field, coeffs):
        return cls._raw(field, ptrim(list(coeffs)), ONE)

    @classmethod
    def zero(cls, field):
        return cls._raw(field, (), ONE)

    @classmethod
    def one(cls, field):
        return cls._raw(field, ONE, ONE)

    @classmethod
    def monomial(cls, field, k: int, c: int = 1):
        return cls._raw(field, pshift((c,), k) if c else (), ONE)

    def is_zero(self):
        return not self.num

    def is_constant(self):
        return len(self.num) <= 1 and self.den == ONE

    def is_polynomial(self):
        return self.den == ONE

    def constant_value(self) -> int:
        if not self.is_constant():
            raise ValueError(f"{self} is not constant")
        return self.num[0] if self.num else 0

    @property
    def numerator(self) -> Poly:
        return Poly._raw(self.field, self.num)

    @property
    def denominator(self) -> Poly:
        return Poly._raw(self.field, self.den)

    def _coerce(self, other):
        if isinstance(other, RationalFn):
            if other.field != self.field:
                raise FieldMismatchError(f"F_{self.field.q}(z) vs F_{other.field.q}(z)")
            return other
        if isinstance(other, Poly):
            if other.field != self.field:
                raise FieldMismatchError("rational/polynomial field mismatch")
            return RationalFn._raw(self.field, other.coeffs, ONE)
        if isinstance(other, int):
            return RationalFn.const(self.field, self.field.from_int(other))
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise FieldMismatchError("rational/element field mismatch")
            return RationalFn.const(self.field, other.value)
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return rat_add(self, o)

    __radd__ = __add__

    def __neg__(self):
        return RationalFn._raw(self.field, pneg(self.field, self.num), self.den)

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return rat_add(self, -o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return rat_add(o, -self)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return rat_mul(self, o)

    __rmul__ = __mul__

    def inverse(self) -> "RationalFn":
        if not self.num:
            raise ZeroDivisionError("inverse of the zero rational function")
        return RationalFn.make(self.field, self.den, self.num)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return rat_mul(self, o.inverse())

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return NotImplemented
        return rat_mul(o, self.inverse())

    def __pow__(self, k: int):
        base = self if k >= 0 else self.inverse()
        out = RationalFn.one(self.field)
        for _ in range(abs(k)):
            out = out * base
        return out

    def __eq__(self, other):
        if isinstance(other, RationalFn):
            return self.field == other.field and self.num == other.num and self.den == other.den
        o = self._coerce(other) if isinstance(other, (int, Poly, FieldElement)) else NotImplemented
        if o is NotImplemented:
            return NotImplemented
        return self == o

    def __hash__(self):
        return hash((self.field.q, self.num, self.den))

    def __bool__(self):
        return bool(self.num)

    def __repr__(self):
        return f"RationalFn({self})"

    def __str__(self):
        if self.den == ONE:
            return format_poly(self.num)
        return f"({format_poly(self.num)})/({format_poly(self.den)})"

    def degree_bound(self):
        return degree_bound(self)

    def evaluate(self, x, embedding: Embedding | None = None) -> FieldElement:
        return eval_at(self, x, embedding)

    def to_dict(self) -> dict:
        return {"num": list(self.num), "den": list(self.den)}

    @classmethod
    def from_dict(cls, field: FieldSpec, d) -> "RationalFn":
        if isinstance(d, dict):
            return cls(field, d.get("num", []), d.get("den", [1]))
        return cls(field, d)


def _normalize(F: FieldSpec, num, den):
    if not num:
        return (), ONE
    if den == ONE:
        return num, ONE
    if len(den) > 1 and len(num) > 0:
        g = pgcd(F, num, den)
        if g != ONE:
            num = pexact_div(F, num, g)
            den = pexact_div(F, den, g)
    lead = den[-1]
    if lead != 1:
        inv = F.inv(lead)
        num = pscale(F, num, inv)
        den = pscale(F, den, inv)
    return num, den


def rat_add(a: RationalFn, b: RationalFn) -> RationalFn:
    F = a.field
    if not a.num:
        return b
    if not b.num:
        return a
    if a.den == ONE and b.den == ONE:
        return RationalFn._raw(F, padd(F, a.num, b.num), ONE)
    if a.den == b.den:
        return RationalFn.make(F, padd(F, a.num, b.num), a.den)
    num = padd(F, pmul(F, a.num, b.den), pmul(F, b.num, a.den))
    return RationalFn.make(F, num, pmul(F, a.den, b.den))


def rat_mul(a: RationalFn, b: RationalFn) -> RationalFn:
    F = a.field
    if not a.num or not b.num:
        return RationalFn._raw(F, (), ONE)
    if a.den == ONE and b.den == ONE:
        return RationalFn._raw(F, pmul(F, a.num, b.num), ONE)
    return RationalFn.make(F, pmul(F, a.num, b.num), pmul(F, a.den, b.den))


def rat_arith(a: RationalFn, b: RationalFn, op: str) -> RationalFn:
    """Canonical result of ``a op b`` for op in {'add', 'sub', 'mul', 'div'}."""
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        return a / b
    raise ValueError(f"unknown operation {op!r}")


def eval_at(f: RationalFn, x, embedding: Embedding | None = None) -> FieldElement:
    """Value of ``f`` at ``x``; ``x`` may lie in an extension reached through ``embedding``."""
    den = _evaluate_tuple(f.field, f.den, x, embedding)
    if not den:
        raise PoleError(f"{f} has a pole at {x!r}")
    num = _evaluate_tuple(f.field, f.num, x, embedding)
    return num / den


def degree_bound(f: RationalFn):
    """(deg numerator, deg denominator) of the canonical form; zero numerator gives NEG_INF."""
    return pdeg(f.num), pdeg(f.den)


def rat_dot(F: FieldSpec, xs: Sequence[RationalFn], ys: Sequence[RationalFn]) -> RationalFn:
    acc = RationalFn.zero(F)
    for x, y in zip(xs, ys):
        if x.num and y.num:
            acc = rat_add(acc, rat_mul(x, y))
    return acc


# ---------------------------------------------------------------------------
# polynomial matrices (tuple level): fraction-free elimination
# ---------------------------------------------------------------------------


def poly_det(F: FieldSpec, rows) -> tuple:
    """Determinant of a square matrix over F[z] by Bareiss elimination."""
    n = len(rows)
    if n == 0:
        return ONE
    a = [list(r) for r in rows]
    sign = 1
    prev = ONE
    for k in range(n - 1):
        if not a[k][k]:
            for i in range(k + 1, n):
                if a[i][k]:
                    a[k], a[i] = a[i], a[k]
                    sign = -sign
                    break
            else:
                return ()
        akk = a[k][k]
        for i in range(k + 1, n):
            aik = a[i][k]
            for j in range(k + 1, n):
                v = psub(F, pmul(F, akk, a[i][j]), pmul(F, aik, a[k][j]))
                a[i][j] = pexact_div(F, v, prev) if prev != ONE else v
            a[i][k] = ()
        prev = akk
    d = a[n - 1][n - 1]
    return pneg(F, d) if sign < 0 else d


def poly_rank(F: FieldSpec, rows) -> int:
    """Rank over F(z) of a (possibly rectangular) matrix over F[z].

    Fraction-free elimination with previous-pivot exact division; the
    number of pivots found is the rank.
    """
    a = [list(r) for r in rows if any(r)]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    rank = 0
    prev = ONE
    for col in range(n):
        if rank == m:
            break
        piv = None
        for i in range(rank, m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        p = a[rank][col]
        for i in range(rank + 1, m):
            aic = a[i][col]
            row = a[i]
            prow = a[rank]
            for j in range(col + 1, n):
                v = psub(F, pmul(F, p, row[j]), pmul(F, aic, prow[j]))
                row[j] = pexact_div(F, v, prev) if prev != ONE else v
            row[col] = ()
            if aic == () and prev != ONE:
                pass
        prev = p
        rank += 1
    return rank


def const_rank(F: FieldSpec, rows) -> int:
    """Rank over F of a matrix of integer representatives."""
    a = [list(r) for r in rows]
    if not a:
        return 0
    m, n = len(a), len(a[0])
    add, mul, neg, inv = F.add, F.mul, F.neg, F.inv
    rank = 0
    for col in range(n):
        piv = None
        for i in range(rank, m):
            if a[i][col]:
                piv = i
                break
        if piv is None:
            continue
        a[rank], a[piv] = a[piv], a[rank]
        prow = a[rank]
        ip = inv(prow[col])
        for i in range(rank + 1, m):
            c = a[i][col]
            if c:
                f = neg(mul(c, ip))
                row = a[i]
                for j in range(col, n):
                    if prow[j]:
                        row[j] = add(row[j], mul(f, prow[j]))
        rank += 1
        if rank == m:
            break
    return rank


# ---------------------------------------------------------------------------
# RatMatrix
# ---------------------------------------------------------------------------


class RatMatrix:
    """Dense matrix of rational functions over one field."""

    __slots__ = ("field", "rows")

    def __init__(self, field: FieldSpec, rows):
        self.field = field
        conv = []
        width = None
        for r in rows:
            rr = [_as_rat(field, x) for x in r]
            if width is None:
                width = len(rr)
            elif len(rr) != width:
                raise ValueError("ragged matrix")
            conv.append(rr)
        self.rows = conv

    @classmethod
    def from_columns(cls, field, columns):
        columns = [list(c) for c in columns]
        if not columns:
            return cls(field, [])
        return cls(field, [list(r) for r in zip(*columns)])

    @classmethod
    def identity(cls, field, n):
        return cls(field, [[1 if i == j else 0 for j in range(n)] for i in range(n)])

    @property
    def shape(self):
        return len(self.rows), (len(self.rows[0]) if self.rows else 0)

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def column(self, j):
        return [r[j] for r in self.rows]

    def columns(self):
        return [self.column(j) for j in range(self.shape[1])]

    def transpose(self):
        return RatMatrix.from_columns(self.field, self.rows)

    def submatrix(self, rows=None, cols=None):
        rows = range(self.shape[0]) if rows is None else rows
        cols = range(self.shape[1]) if cols is None else cols
        return RatMatrix(self.field, [[self.rows[i][j] for j in cols] for i in rows])

    def __matmul__(self, other: "RatMatrix"):
        if self.shape[1] != other.shape[0]:
            raise ValueError("shape mismatch")
        F = self.field
        cols = other.columns()
        return RatMatrix(F, [[rat_dot(F, r, c) for c in cols] for r in self.rows])

    def __eq__(self, other):
        return isinstance(other, RatMatrix) and self.field == other.field and self.rows == other.rows

    def is_zero(self):
        return all(not x.num for r in self.rows for x in r)

    def _cleared(self):
        """Polynomial matrix P and scalar polynomial d with self = P / d (rows share one d)."""
        F = self.field
        d = ONE
        for r in self.rows:
            for x in r:
                if x.den != ONE:
                    g = pgcd(F, d, x.den)
                    d = pmul(F, d, pexact_div(F, x.den, g))
        if d == ONE:
            return [[x.num for x in r] for r in self.rows], d
        P = [[pmul(F, x.num, pexact_div(F, d, x.den)) for x in r] for r in self.rows]
        return P, d

    def det(self) -> RationalFn:
        return mat_det(self)

    def rank(self) -> int:
        return mat_rank(self)

    def inverse(self) -> "RatMatrix":
        """Gauss-Jordan inverse over F(z)."""
        n, m = self.shape
        if n != m:
            raise ValueError("inverse of a non-square matrix")
        F = self.field
        a = [list(r) + [RationalFn.const(F, 1 if i == j else 0) for j in range(n)] for i, r in enumerate(self.rows)]
        for col in range(n):
            piv = next((i for i in range(col, n) if a[i][col].num), None)
            if piv is None:
                raise ZeroDivisionError("singular matrix")
            a[col], a[piv] = a[piv], a[col]
            inv = a[col][col].inverse()
            a[col] = [x * inv for x in a[col]]
            for i in range(n):
                if i != col and a[i][col].num:
                    f = a[i][col]
                    a[i] = [x - f * y for x, y in zip(a[i], a[col])]
        return RatMatrix(F, [r[n:] for r in a])

    def evaluate(self, x, embedding: Embedding | None = None) -> list[list[FieldElement]]:
        return [[eval_at(v, x, embedding) for v in r] for r in self.rows]

    def map(self, fn):
        return RatMatrix(self.field, [[fn(v) for v in r] for r in self.rows])

    def __repr__(self):
        return "RatMatrix([" + ", ".join("[" + ", ".join(str(v) for v in r) + "]" for r in self.rows) + "])"


def _as_rat(F, x):
    if isinstance(x, RationalFn):
        if x.field != F:
            raise FieldMismatchError("matrix entry from a different field")
        return x
    if isinstance(x, Poly):
        if x.field != F:
            raise FieldMismatchError("matrix entry from a different field")
        return RationalFn._raw(F, x.coeffs, ONE)
    if isinstance(x, FieldElement):
        if x.field != F:
            raise FieldMismatchError("matrix entry from a different field")
        return RationalFn.const(F, x.value)
    if isinstance(x, int):
        return RationalFn.const(F, F.from_int(x))
    raise TypeError(f"cannot use {x!r} as a matrix entry")


def mat_det(M: RatMatrix) -> RationalFn:
    """Exact determinant: clear denominators, Bareiss over F[z], divide back out."""
    n, m = M.shape
    if n != m:
        raise ValueError("determinant of a non-square matrix")
    F = M.field
    rows = [[x.num for x in r] for r in M.rows]
    dens = ONE
    for i, r in enumerate(M.rows):
        rd = ONE
        for x in r:
            if x.den != ONE:
                g = pgcd(F, rd, x.den)
                rd = pmul(F, rd, pexact_div(F, x.den, g))
        if rd != ONE:
            rows[i] = [pmul(F, x.num, pexact_div(F, rd, x.den)) for x in r]
            dens = pmul(F, dens, rd)
    d = poly_det(F, rows)
    return RationalFn.make(F, d, dens)


def mat_rank(M: RatMatrix) -> int:
    """Rank over F(z); denominators are cleared row by row first."""
    F = M.field
    rows = []
    for r in M.rows:
        rd = ONE
        for x in r:
            if x.den != ONE:
                g = pgcd(F, rd, x.den)
                rd = pmul(F, rd, pexact_div(F, x.den, g))
        rows.append([x.num if rd == ONE else pmul(F, x.num, pexact_div(F, rd, x.den)) for x in r])
    return poly_rank(F, rows)


def nullspace(M: RatMatrix) -> list[list[RationalFn]]:
    """Basis of the right nullspace of M over F(z) (reduced row echelon)."""
    F = M.field
    n_rows, n_cols = M.shape
    a = [list(r) for r in M.rows]
    pivots = []
    r = 0
    for col in range(n_cols):
        piv = next((i for i in range(r, n_rows) if a[i][col].num), None)
        if piv is None:
            continue
        a[r], a[piv] = a[piv], a[r]
        inv = a[r][col].inverse()
        a[r] = [x * inv for x in a[r]]
        for i in range(n_rows):
            if i != r and a[i][col].num:
                f = a[i][col]
                a[i] = [x - f * y for x, y in zip(a[i], a[r])]
        pivots.append(col)
        r += 1
        if r == n_rows:
            break
    free = [c for c in range(n_cols) if c not in pivots]
    basis = []
    for fc in free:
        v = [RationalFn.zero(F) for _ in range(n_cols)]
        v[fc] = RationalFn.one(F)
        for i, pc in enumerate(pivots):
            v[pc] = -a[i][fc]
        basis.append(v)
    return basis
