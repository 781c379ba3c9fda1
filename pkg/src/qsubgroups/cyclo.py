"""Exact arithmetic in cyclotomic fields and finite subgroups of SL2.

A ``CycNum`` is a rational polynomial in ``z = zeta_m`` reduced modulo the
m-th cyclotomic polynomial.  Values with different conductors are compared
and combined by embedding both into the lcm conductor.  Hashing assumes a
common conductor, which is how every caller in this package uses them.
"""

from __future__ import annotations

import re
from collections import deque
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from math import gcd

from .errors import CapExceeded, ValidationError

CLOSURE_CAP = 10**4


# ---------------------------------------------------------------------------
# Polynomials over Q as coefficient lists, lowest degree first


def _trim(p):
    p = list(p)
    while p and p[-1] == 0:
        p.pop()
    return p


def _poly_divmod(a, b):
    a = [Fraction(x) for x in a]
    b = _trim(b)
    q = [Fraction(0)] * max(len(a) - len(b) + 1, 1)
    while len(_trim(a)) >= len(b):
        a = _trim(a)
        shift = len(a) - len(b)
        f = a[-1] / b[-1]
        q[shift] = f
        for i, c in enumerate(b):
            a[i + shift] -= f * c
    return _trim(q), _trim(a)


def _poly_mul(a, b):
    if not a or not b:
        return []
    out = [Fraction(0)] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        if x:
            for j, y in enumerate(b):
                out[i + j] += x * y
    return out


def _poly_sub(a, b):
    n = max(len(a), len(b))
    a = list(a) + [0] * (n - len(a))
    b = list(b) + [0] * (n - len(b))
    return _trim([x - y for x, y in zip(a, b)])


@lru_cache(maxsize=None)
def cyclotomic_poly(m):
    """Integer coefficients of Phi_m, lowest degree first."""
    if m < 1:
        raise ValidationError("conductor must be >= 1")
    p = [Fraction(-1)] + [Fraction(0)] * (m - 1) + [Fraction(1)]
    for d in range(1, m):
        if m % d == 0:
            p, r = _poly_divmod(p, cyclotomic_poly(d))
            assert not r
    return tuple(int(c) for c in p)


@lru_cache(maxsize=None)
def _power_table(m):
    """``z^k mod Phi_m`` for k in [0, m) as Fraction tuples of length deg Phi_m."""
    phi = cyclotomic_poly(m)
    deg = len(phi) - 1
    table = []
    cur = [Fraction(0)] * deg
    cur[0] = Fraction(1)
    for _ in range(m):
        table.append(tuple(cur))
        # multiply by z
        top = cur[-1]
        nxt = [Fraction(0)] + cur[:-1]
        if top:
            nxt = [c - top * phi[i] for i, c in enumerate(nxt)]
        cur = nxt
    return tuple(table)


def degree(m):
    return len(cyclotomic_poly(m)) - 1


def _lcm(a, b):
    return a * b // gcd(a, b)


class CycNum:
    __slots__ = ("m", "coeffs")

    def __init__(self, m, coeffs=()):
        m = int(m)
        if m < 1:
            raise ValidationError("conductor must be >= 1")
        deg = degree(m)
        c = [Fraction(x) for x in coeffs]
        if len(c) > deg:
            c = _reduce_long(m, c)
        c += [Fraction(0)] * (deg - len(c))
        self.m = m
        self.coeffs = tuple(c)

    # -- constructors
    @classmethod
    def rational(cls, q, m=1):
        return cls(m, [Fraction(q)])

    @classmethod
    def zeta(cls, m, k=1):
        return cls(m, _power_table(m)[k % m])

    @classmethod
    def parse(cls, text, m):
        return parse_cyc(text, m)

    # -- coercion
    def to_conductor(self, M):
        if M % self.m:
            raise ValidationError(f"cannot embed Q(zeta_{self.m}) in Q(zeta_{M})")
        if M == self.m:
            return self
        step = M // self.m
        table = _power_table(M)
        out = [Fraction(0)] * degree(M)
        for i, c in enumerate(self.coeffs):
            if c:
                row = table[(i * step) % M]
                for j, r in enumerate(row):
                    if r:
                        out[j] += c * r
        return CycNum(M, out)

    def _common(self, other):
        if not isinstance(other, CycNum):
            other = CycNum.rational(other, self.m)
        if other.m == self.m:
            return self, other
        M = _lcm(self.m, other.m)
        return self.to_conductor(M), other.to_conductor(M)

    # -- field operations
    def __add__(self, other):
        a, b = self._common(other)
        return CycNum(a.m, [x + y for x, y in zip(a.coeffs, b.coeffs)])

    __radd__ = __add__

    def __neg__(self):
        return CycNum(self.m, [-x for x in self.coeffs])

    def __sub__(self, other):
        a, b = self._common(other)
        return CycNum(a.m, [x - y for x, y in zip(a.coeffs, b.coeffs)])

    def __rsub__(self, other):
        return (-self) + other

    def __mul__(self, other):
        a, b = self._common(other)
        prod = _poly_mul(a.coeffs, b.coeffs)
        return CycNum(a.m, _reduce_long(a.m, prod))

    __rmul__ = __mul__

    def inv(self):
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero in a cyclotomic field")
        # extended Euclid: s*a + t*Phi = g (a nonzero constant)
        phi = [Fraction(c) for c in cyclotomic_poly(self.m)]
        r0, r1 = phi, _trim(self.coeffs)
        s0, s1 = [], [Fraction(1)]
        while len(r1) > 1:
            q, r = _poly_divmod(r0, r1)
            r0, r1 = r1, r
            s0, s1 = s1, _poly_sub(s0, _poly_mul(q, s1))
        g = r1[0]
        return CycNum(self.m, [c / g for c in s1])

    def __truediv__(self, other):
        a, b = self._common(other)
        return a * b.inv()

    def __rtruediv__(self, other):
        return CycNum.rational(other, self.m) * self.inv()

    def __pow__(self, k):
        if k < 0:
            return self.inv() ** (-k)
        result = CycNum.rational(1, self.m)
        base = self
        while k:
            if k & 1:
                result = result * base
            base = base * base
            k >>= 1
        return result

    def galois(self, j):
        """Image under ``z -> z^j`` (j coprime to m)."""
        if gcd(j, self.m) != 1:
            raise ValidationError("Galois exponent must be coprime to the conductor")
        table = _power_table(self.m)
        out = [Fraction(0)] * degree(self.m)
        for i, c in enumerate(self.coeffs):
            if c:
                for k, r in enumerate(table[(i * j) % self.m]):
                    if r:
                        out[k] += c * r
        return CycNum(self.m, out)

    def conj(self):
        """Complex conjugate, ``z -> z^{-1}``."""
        return self.galois(self.m - 1) if self.m > 2 else self

    # -- predicates
    def is_zero(self):
        return not any(self.coeffs)

    def is_rational(self):
        return not any(self.coeffs[1:])

    def as_rational(self):
        if not self.is_rational():
            raise ValidationError(f"{self} is not rational")
        return self.coeffs[0]

    def __eq__(self, other):
        if isinstance(other, (int, Fraction)):
            return self.is_rational() and self.coeffs[0] == other
        if not isinstance(other, CycNum):
            return NotImplemented
        a, b = self._common(other)
        return a.coeffs == b.coeffs

    def __hash__(self):
        if self.is_rational():
            return hash(self.coeffs[0])
        return hash((self.m, self.coeffs))

    def __bool__(self):
        return not self.is_zero()

    def __repr__(self):
        return f"CycNum({self.m}, {self})"

    def __str__(self):
        return format_cyc(self)


def _reduce_long(m, coeffs):
    table = _power_table(m)
    deg = degree(m)
    out = [Fraction(0)] * deg
    for i, c in enumerate(coeffs):
        if c:
            if i < deg:
                out[i] += c
            else:
                for k, r in enumerate(table[i % m]):
                    if r:
                        out[k] += c * r
    return out


def format_cyc(x: CycNum, var="z"):
    terms = []
    for i, c in enumerate(x.coeffs):
        if not c:
            continue
        mono = "" if i == 0 else (var if i == 1 else f"{var}^{i}")
        if not mono:
            terms.append(str(c))
        elif c == 1:
            terms.append(mono)
        elif c == -1:
            terms.append("-" + mono)
        else:
            terms.append(f"{c}*{mono}")
    if not terms:
        return "0"
    s = terms[0]
    for t in terms[1:]:
        s += " - " + t[1:] if t.startswith("-") else " + " + t
    return s


_TERM = re.compile(
    r"\s*(?P<coef>\d+(?:/\d+)?)?\s*(?P<star>\*)?\s*(?P<z>z(?:\s*\^\s*(?P<exp>-?\d+))?)?\s*")


class CycParseError(ValidationError):
    def __init__(self, message, column):
        self.column = column
        super().__init__(f"column {column}: {message}")


def parse_cyc(text, m):
    """Parse strings like ``"z^2 + 1/2"``, ``"-3/4*z^3"``, ``"z^-1"``."""
    s = str(text)
    pos = 0
    total = CycNum(m)
    sign = 1
    expect_term = True
    while pos < len(s):
        if s[pos].isspace():
            pos += 1
            continue
        if s[pos] in "+-":
            if s[pos] == "-":
                sign = -sign
            expect_term = True
            pos += 1
            continue
        if not expect_term:
            raise CycParseError(f"expected '+' or '-' in {s!r}", pos + 1)
        mt = _TERM.match(s, pos)
        if not mt or (mt.group("coef") is None and mt.group("z") is None):
            raise CycParseError(f"unexpected character {s[pos]!r} in {s!r}", pos + 1)
        if mt.group("star") and not (mt.group("coef") and mt.group("z")):
            raise CycParseError(f"dangling '*' in {s!r}", pos + 1)
        coef = Fraction(mt.group("coef")) if mt.group("coef") else Fraction(1)
        if mt.group("z"):
            exp = int(mt.group("exp")) if mt.group("exp") else 1
            term = CycNum.zeta(m, exp) * coef
        else:
            term = CycNum.rational(coef, m)
        total = total + (term if sign > 0 else -term)
        sign = 1
        expect_term = False
        pos = mt.end()
    if expect_term:
        raise CycParseError(f"incomplete expression {s!r}", len(s) + 1)
    return total


# ---------------------------------------------------------------------------
# SL2


def _as_cyc(x, m):
    if isinstance(x, CycNum):
        return x
    return CycNum.rational(Fraction(x), m)


class Sl2Elt:
    """A 2x2 matrix ``[[a, b], [c, d]]`` over a cyclotomic field with det 1."""

    __slots__ = ("a", "b", "c", "d", "_key")

    def __init__(self, a, b, c, d, check=True):
        m = 1
        for x in (a, b, c, d):
            if isinstance(x, CycNum):
                m = _lcm(m, x.m)
        a, b, c, d = (_as_cyc(x, m).to_conductor(m) for x in (a, b, c, d))
        self.a, self.b, self.c, self.d = a, b, c, d
        self._key = None
        if check and self.det() != 1:
            raise ValidationError(f"matrix {self} has determinant {self.det()}, expected 1")

    @property
    def m(self):
        return self.a.m

    @classmethod
    def identity(cls, m=1):
        return cls(CycNum.rational(1, m), 0, 0, CycNum.rational(1, m))

    @classmethod
    def diag(cls, x):
        return cls(x, 0, 0, x.inv())

    @classmethod
    def from_rows(cls, rows):
        (a, b), (c, d) = rows
        return cls(a, b, c, d)

    @classmethod
    def weyl(cls, m=1):
        """The representative ``n_s = [[0, 1], [-1, 0]]``."""
        return cls(0, CycNum.rational(1, m), CycNum.rational(-1, m), 0)

    def det(self):
        return self.a * self.d - self.b * self.c

    def to_conductor(self, M):
        return Sl2Elt(*(x.to_conductor(M) for x in self.entries()), check=False)

    def entries(self):
        return (self.a, self.b, self.c, self.d)

    def rows(self):
        return ((self.a, self.b), (self.c, self.d))

    def __mul__(self, o):
        return Sl2Elt(self.a * o.a + self.b * o.c, self.a * o.b + self.b * o.d,
                      self.c * o.a + self.d * o.c, self.c * o.b + self.d * o.d, check=False)

    def inverse(self):
        return Sl2Elt(self.d, -self.b, -self.c, self.a, check=False)

    def __neg__(self):
        return Sl2Elt(-self.a, -self.b, -self.c, -self.d, check=False)

    def conjugate_by(self, g):
        """``g self g^{-1}``."""
        return g * self * g.inverse()

    def __eq__(self, o):
        if not isinstance(o, Sl2Elt):
            return NotImplemented
        return all(x == y for x, y in zip(self.entries(), o.entries()))

    def __hash__(self):
        if self._key is None:
            self._key = hash(tuple(hash(x) for x in self.entries()))
        return self._key

    def is_identity(self):
        return self.a == 1 and self.d == 1 and self.b.is_zero() and self.c.is_zero()

    def is_diagonal(self):
        return self.b.is_zero() and self.c.is_zero()

    def is_antidiagonal(self):
        return self.a.is_zero() and self.d.is_zero()

    def is_monomial(self):
        return self.is_diagonal() or self.is_antidiagonal()

    def is_central(self):
        return self.is_diagonal() and self.a == self.d and (self.a == 1 or self.a == -1)

    def is_upper(self):
        return self.c.is_zero()

    def is_lower(self):
        return self.b.is_zero()

    def order(self, cap=CLOSURE_CAP):
        g = self
        for k in range(1, cap + 1):
            if g.is_identity():
                return k
            g = g * self
        raise CapExceeded("element_order", cap)

    def __repr__(self):
        return f"[[{self.a}, {self.b}], [{self.c}, {self.d}]]"


@dataclass(frozen=True)
class TorusPredicates:
    in_T: bool
    in_N_T: bool
    is_central: bool


def torus_predicates(g: Sl2Elt) -> TorusPredicates:
    return TorusPredicates(g.is_diagonal(), g.is_monomial(), g.is_central())


@dataclass
class FinMatrixGroup:
    generators: list
    elements: list
    table: list  # table[i][j] = index of elements[i] * elements[j]
    words: list  # words[i] = tuple of generator indices, product left to right

    @property
    def order(self):
        return len(self.elements)

    def index(self, g):
        return self._index[g]

    def __post_init__(self):
        self._index = {g: i for i, g in enumerate(self.elements)}

    def abstract(self):
        """The multiplication table as a ``cohom.FiniteGroup``."""
        from .cohom import FiniteGroup
        return FiniteGroup(self.table, identity=0, check=False)

    def inverse_index(self, i):
        row = self.table[i]
        return row.index(0)


def generate_group(gens, cap=CLOSURE_CAP) -> FinMatrixGroup:
    gens = list(gens)
    m = 1
    for g in gens:
        if g.det() != 1:
            raise ValidationError(f"generator {g} does not have determinant 1")
        m = _lcm(m, g.m)
    gens = [g.to_conductor(m) for g in gens]
    ident = Sl2Elt.identity(m).to_conductor(m)
    elements = [ident]
    words = [()]
    index = {ident: 0}
    queue = deque([0])
    while queue:
        i = queue.popleft()
        for k, g in enumerate(gens):
            h = elements[i] * g
            if h not in index:
                if len(elements) >= cap:
                    raise CapExceeded("closure", cap, note="group not verified finite at this cap")
                index[h] = len(elements)
                elements.append(h)
                words.append(words[i] + (k,))
                queue.append(index[h])
    n = len(elements)
    # right multiplication by generators is known; fill the table by words
    right = [[index[elements[i] * g] for g in gens] for i in range(n)]
    table = []
    for i in range(n):
        row = [0] * n
        for j in range(n):
            cur = i
            for k in words[j]:
                cur = right[cur][k]
            row[j] = cur
        table.append(row)
    return FinMatrixGroup(gens, elements, table, words)
