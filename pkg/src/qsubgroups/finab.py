"""Finite abelian groups in invariant-factor form.

Everything here is exact integer arithmetic.  Elements of a group
``Z/d_1 + ... + Z/d_k`` are tuples of ints with the i-th entry in ``[0, d_i)``.
Subgroups of an ambient ``Z/m_1 + ... + Z/m_u`` (moduli need not form a
divisibility chain) are stored as lattices in ``Z^u`` containing
``diag(m) Z^u``, kept in Hermite form so equality is tuple equality.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from functools import reduce
from math import gcd, prod

from .errors import CapExceeded, ValidationError

DEFAULT_HOM_CAP = 10**6
DEFAULT_AUT_CAP = 10**3
DEFAULT_SUBGROUP_CAP = 10**4


def lcm(*xs):
    return reduce(lambda a, b: a * b // gcd(a, b) if a and b else 0, xs, 1)


def identity_matrix(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def mat_mul(A, B):
    if not A:
        return []
    inner = len(B)
    cols = len(B[0]) if B else 0
    return [[sum(A[i][t] * B[t][j] for t in range(inner)) for j in range(cols)]
            for i in range(len(A))]


def mat_vec(A, x):
    return [sum(a * b for a, b in zip(row, x)) for row in A]


def determinant(M):
    """Exact integer determinant by fraction-free (Bareiss) elimination."""
    n = len(M)
    if n == 0:
        return 1
    A = [row[:] for row in M]
    sign, prev = 1, 1
    for k in range(n - 1):
        if A[k][k] == 0:
            for i in range(k + 1, n):
                if A[i][k]:
                    A[k], A[i] = A[i], A[k]
                    sign = -sign
                    break
            else:
                return 0
        for i in range(k + 1, n):
            for j in range(k + 1, n):
                A[i][j] = (A[i][j] * A[k][k] - A[i][k] * A[k][j]) // prev
        prev = A[k][k]
    return sign * A[n - 1][n - 1]


# ---------------------------------------------------------------------------
# Normal forms


def smith_normal_form(M):
    """Return ``(U, D, V)`` with ``U M V = D`` over the integers.

    ``D`` is diagonal with non-negative entries forming a divisibility
    chain (zeros last); ``U`` and ``V`` are unimodular.
    """
    m = len(M)
    n = len(M[0]) if m else 0
    A = [list(map(int, row)) for row in M]
    U = identity_matrix(m)
    V = identity_matrix(n)

    def swap_rows(i, j):
        A[i], A[j] = A[j], A[i]
        U[i], U[j] = U[j], U[i]

    def swap_cols(i, j):
        for R in (A, V):
            for row in R:
                row[i], row[j] = row[j], row[i]

    def add_row(dst, src, q):  # row_dst += q row_src
        A[dst] = [a + q * b for a, b in zip(A[dst], A[src])]
        U[dst] = [a + q * b for a, b in zip(U[dst], U[src])]

    def add_col(dst, src, q):
        for R in (A, V):
            for row in R:
                row[dst] += q * row[src]

    for t in range(min(m, n)):
        while True:
            piv = None
            best = 0
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    a = abs(row[j])
                    if a and (piv is None or a < best):
                        piv, best = (i, j), a
            if piv is None:
                break
            swap_rows(t, piv[0])
            swap_cols(t, piv[1])
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    add_row(i, t, -(A[i][t] // p))
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    add_col(j, t, -(A[t][j] // p))
                    if A[t][j]:
                        clean = False
            if not clean:
                continue
            bad = next((i for i in range(t + 1, m)
                        if any(A[i][j] % p for j in range(t + 1, n))), None)
            if bad is None:
                break
            add_row(t, bad, 1)
        if t < m and t < n and A[t][t] < 0:
            A[t] = [-a for a in A[t]]
            U[t] = [-a for a in U[t]]
    return U, A, V


def hermite_rows(rows, ncols):
    """Row Hermite normal form of the lattice spanned by ``rows``.

    Output rows are nonzero, pivots positive and strictly increasing in
    column, entries above each pivot reduced into ``[0, pivot)``.
    """
    A = [list(map(int, r)) for r in rows if any(r)]
    r = 0
    pivots = []
    for col in range(ncols):
        while True:
            nz = [i for i in range(r, len(A)) if A[i][col]]
            if not nz:
                break
            p = min(nz, key=lambda i: abs(A[i][col]))
            A[r], A[p] = A[p], A[r]
            pv = A[r][col]
            done = True
            for i in range(r + 1, len(A)):
                if A[i][col]:
                    q = A[i][col] // pv
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
                    if A[i][col]:
                        done = False
            if done:
                break
        if r < len(A) and A[r][col]:
            if A[r][col] < 0:
                A[r] = [-a for a in A[r]]
            pv = A[r][col]
            for i in range(r):
                q = A[i][col] // pv
                if q:
                    A[i] = [a - q * b for a, b in zip(A[i], A[r])]
            pivots.append(col)
            r += 1
            A = A[:r] + [row for row in A[r:] if any(row)]
    return A[:r]


def diagonalize_mod(M, e, ncols=None):
    """Diagonalize ``M`` over ``Z/e`` by invertible row and column moves.

    Returns ``(diag, V, Vinv)``: ``diag[i]`` is the i-th diagonal entry
    (length ``min(rows, cols)``), and ``U M V = D (mod e)`` for some
    invertible ``U`` we do not need.  Entries stay in ``(-e, e)``, which is
    what keeps large kernel computations cheap.
    """
    n = ncols if ncols is not None else (len(M[0]) if M else 0)
    A = [[x % e for x in row] for row in M if any(x % e for x in row)]
    m = len(A)
    V = identity_matrix(n)
    Vinv = identity_matrix(n)
    half = e // 2

    def red(x):
        x %= e
        return x - e if x > half else x

    diag = []
    t = 0
    while t < min(m, n):
        while True:
            piv, best = None, 0
            for i in range(t, m):
                row = A[i]
                for j in range(t, n):
                    a = abs(row[j])
                    if a and (piv is None or a < best):
                        piv, best = (i, j), a
            if piv is None:
                return diag + [0] * (min(m, n) - t), V, Vinv
            i0, j0 = piv
            A[t], A[i0] = A[i0], A[t]
            if j0 != t:
                for row in A:
                    row[t], row[j0] = row[j0], row[t]
                for row in V:
                    row[t], row[j0] = row[j0], row[t]
                Vinv[t], Vinv[j0] = Vinv[j0], Vinv[t]
            p = A[t][t]
            clean = True
            for i in range(t + 1, m):
                if A[i][t]:
                    q = A[i][t] // p
                    A[i] = [red(a - q * b) for a, b in zip(A[i], A[t])]
                    if A[i][t]:
                        clean = False
            for j in range(t + 1, n):
                if A[t][j]:
                    q = A[t][j] // p
                    # column j -= q column t ; inverse: row t of Vinv += q row j
                    for row in A:
                        row[j] = red(row[j] - q * row[t])
                    for row in V:
                        row[j] = (row[j] - q * row[t]) % e
                    Vinv[t] = [(a + q * b) % e for a, b in zip(Vinv[t], Vinv[j])]
                    if A[t][j]:
                        clean = False
            if clean:
                break
        diag.append(A[t][t])
        t += 1
    return diag + [0] * (min(m, n) - t), V, Vinv


def kernel_rows(matrix, dom_moduli, cod_moduli):
    """Generators of the kernel of ``x -> matrix x`` from ``Z^u`` to
    ``+ Z/cod_moduli``, reduced modulo the domain moduli.

    The map is assumed well defined on the domain.
    """
    u = len(dom_moduli)
    if u == 0:
        return []
    if not cod_moduli:
        return identity_matrix(u)
    e = lcm(*cod_moduli)
    scaled = [[a * (e // c) for a in row] for row, c in zip(matrix, cod_moduli)]
    diag, V, _ = diagonalize_mod(scaled, e, ncols=u)
    gens = []
    for j in range(u):
        d = diag[j] if j < len(diag) else 0
        s = e // gcd(d, e)
        col = [V[i][j] * s for i in range(u)]
        gens.append([c % m if m else c for c, m in zip(col, dom_moduli)])
    for i, m in enumerate(dom_moduli):
        if m == 0:  # the kernel also contains e Z^u
            gens.append([e if t == i else 0 for t in range(u)])
    return gens


def solve_triangular(basis, x):
    """Coefficients ``c`` with ``c . basis = x`` for a Hermite basis, or None."""
    x = list(x)
    coeffs = []
    for row in basis:
        col = next(j for j, a in enumerate(row) if a)
        q, r = divmod(x[col], row[col])
        if r:
            return None
        coeffs.append(q)
        if q:
            x = [a - q * b for a, b in zip(x, row)]
    if any(x):
        return None
    return coeffs


def _cyclic_decomposition(orders):
    """Invariant factors of ``+ Z/o`` via primary parts."""
    primes = {}
    for o in orders:
        o = abs(o)
        p = 2
        while o > 1:
            if p * p > o:
                primes.setdefault(o, []).append(o)
                break
            if o % p == 0:
                q = 1
                while o % p == 0:
                    o //= p
                    q *= p
                primes.setdefault(p, []).append(q)
            p += 1
    if not primes:
        return ()
    k = max(len(v) for v in primes.values())
    out = [1] * k
    for powers in primes.values():
        powers.sort()
        for i, q in enumerate(powers):
            out[k - len(powers) + i] *= q
    return tuple(d for d in out if d > 1)


# ---------------------------------------------------------------------------
# Groups


@dataclass(frozen=True)
class FinAbGroup:
    invariant_factors: tuple = ()

    def __post_init__(self):
        d = tuple(int(x) for x in self.invariant_factors)
        object.__setattr__(self, "invariant_factors", d)
        bad = [x for x in d if x < 2]
        if bad:
            raise ValidationError(f"invariant factors must be >= 2, got {list(d)}")
        for a, b in zip(d, d[1:]):
            if b % a:
                raise ValidationError(f"invariant factors {list(d)} do not form a divisibility chain")

    @classmethod
    def from_cyclic_orders(cls, orders):
        """Normalize ``Z/o_1 + ... + Z/o_k`` (any positive o_i)."""
        if any(o <= 0 for o in orders):
            raise ValidationError("cyclic orders must be positive")
        return cls(_cyclic_decomposition(orders))

    @classmethod
    def from_element_orders(cls, order_counts):
        """Recover the group from the multiset of element orders.

        ``order_counts`` maps order -> number of elements of that order; a
        finite abelian group is determined by these counts.
        """
        n = sum(order_counts.values())
        factors = []
        for p in _prime_factors(n):
            def count(j):
                return sum(c for o, c in order_counts.items() if _p_part(o, p) <= p**j)
            ranks = []  # ranks[j-1] = number of cyclic p-factors of exponent >= j
            j = 1
            while count(j - 1) < n:
                ranks.append(_log(count(j) // count(j - 1), p))
                j += 1
            for j, r in enumerate(ranks, start=1):
                nxt = ranks[j] if j < len(ranks) else 0
                factors.extend([p**j] * (r - nxt))
        return cls.from_cyclic_orders(factors)

    @property
    def rank(self):
        return len(self.invariant_factors)

    @property
    def order(self):
        return prod(self.invariant_factors)

    @property
    def exponent(self):
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_trivial(self):
        return not self.invariant_factors

    @property
    def zero(self):
        return (0,) * self.rank

    def reduce(self, x):
        if len(x) != self.rank:
            raise ValidationError(f"element {tuple(x)} has wrong length for group {list(self.invariant_factors)}")
        return tuple(int(a) % d for a, d in zip(x, self.invariant_factors))

    def add(self, x, y):
        return tuple((a + b) % d for a, b, d in zip(x, y, self.invariant_factors))

    def neg(self, x):
        return tuple((-a) % d for a, d in zip(x, self.invariant_factors))

    def scale(self, k, x):
        return tuple((k * a) % d for a, d in zip(x, self.invariant_factors))

    def element_order(self, x):
        return lcm(*(d // gcd(a, d) for a, d in zip(x, self.invariant_factors)))

    def elements(self, cap=None):
        if cap is not None and self.order > cap:
            raise CapExceeded("elements", cap, self.order)
        return itertools.product(*(range(d) for d in self.invariant_factors))

    def basis(self):
        return [tuple(int(i == j) for j in range(self.rank)) for i in range(self.rank)]

    def dual(self):
        """The character group, identified with the same invariant factors."""
        return self

    def pairing(self, z, x):
        """Value of the character ``z`` at ``x`` as a Fraction in [0, 1)."""
        from fractions import Fraction
        s = sum(Fraction(a * b, d) for a, b, d in zip(z, x, self.invariant_factors))
        return s - (s.numerator // s.denominator)

    def direct_sum(self, other):
        return FinAbGroup.from_cyclic_orders(self.invariant_factors + other.invariant_factors)

    def is_isomorphic(self, other):
        return self.invariant_factors == other.invariant_factors

    def __str__(self):
        if not self.invariant_factors:
            return "1"
        return " + ".join(f"Z/{d}" for d in self.invariant_factors)


def _prime_factors(n):
    out, p = [], 2
    while n > 1:
        if p * p > n:
            out.append(n)
            break
        if n % p == 0:
            out.append(p)
            while n % p == 0:
                n //= p
        p += 1
    return out


def _p_part(n, p):
    q = 1
    while n % p == 0 and n:
        n //= p
        q *= p
    return q


def _log(n, p):
    k = 0
    while n > 1:
        n //= p
        k += 1
    return k


# ---------------------------------------------------------------------------
# Subgroups


@dataclass(frozen=True)
class Subgroup:
    """Subgroup of ``+ Z/moduli`` generated by ``generators``."""

    moduli: tuple
    generators: tuple = ()
    lattice: tuple = field(init=False, compare=False, repr=False)

    def __post_init__(self):
        moduli = tuple(int(m) for m in self.moduli)
        object.__setattr__(self, "moduli", moduli)
        u = len(moduli)
        gens = []
        for g in self.generators:
            if len(g) != u:
                raise ValidationError(f"generator {tuple(g)} has length {len(g)}, expected {u}")
            gens.append(tuple(int(a) % m for a, m in zip(g, moduli)))
        object.__setattr__(self, "generators", tuple(gens))
        rows = [list(g) for g in gens]
        rows += [[m if i == j else 0 for j in range(u)] for i, m in enumerate(moduli)]
        object.__setattr__(self, "lattice", tuple(tuple(r) for r in hermite_rows(rows, u)))

    @classmethod
    def whole(cls, moduli):
        u = len(moduli)
        return cls(moduli, tuple(tuple(int(i == j) for j in range(u)) for i in range(u)))

    @property
    def key(self):
        return (self.moduli, self.lattice)

    def __eq__(self, other):
        return isinstance(other, Subgroup) and self.key == other.key

    def __hash__(self):
        return hash(self.key)

    @property
    def order(self):
        return prod(self.moduli) // prod(r[i] for i, r in enumerate(self.lattice))

    def contains(self, x):
        return solve_triangular(self.lattice, [int(a) % m for a, m in zip(x, self.moduli)]) is not None

    def contains_subgroup(self, other):
        return all(self.contains(g) for g in other.generators)

    def _structure(self):
        # Lambda / diag(moduli) Z^u, computed in lattice coordinates mod e
        u = len(self.moduli)
        if u == 0:
            return [], [], []
        e = lcm(*self.moduli)
        C = [solve_triangular(self.lattice, [m if i == j else 0 for j in range(u)])
             for i, m in enumerate(self.moduli)]
        diag, _, Vinv = diagonalize_mod(C, e, ncols=u)
        orders = [gcd(d, e) for d in diag] + [e] * (u - len(diag))
        gens = []
        for i, o in enumerate(orders):
            if o > 1:
                coords = mat_vec(list(zip(*self.lattice)), Vinv[i])
                gens.append(tuple(c % m for c, m in zip(coords, self.moduli)))
        return [o for o in orders if o > 1], gens, None

    def structure(self):
        orders, _, _ = self._structure()
        return FinAbGroup.from_cyclic_orders(orders)

    def cyclic_generators(self):
        """Pairs ``(g, order)`` giving a direct-sum decomposition into cyclic groups."""
        orders, gens, _ = self._structure()
        return list(zip(gens, orders))

    def elements(self, cap=DEFAULT_SUBGROUP_CAP):
        if self.order > cap:
            raise CapExceeded("subgroup_elements", cap, self.order)
        cyc = self.cyclic_generators()
        zero = (0,) * len(self.moduli)
        out = []
        for coeffs in itertools.product(*(range(o) for _, o in cyc)):
            x = zero
            for c, (g, _) in zip(coeffs, cyc):
                x = tuple((a + c * b) % m for a, b, m in zip(x, g, self.moduli))
            out.append(x)
        return sorted(out)

    def join(self, other):
        return Subgroup(self.moduli, self.generators + other.generators)

    def quotient_by(self, sub):
        """Invariant factors of ``self / sub`` (``sub`` must be contained)."""
        if not self.contains_subgroup(sub):
            raise ValidationError("quotient_by: not a subgroup")
        return quotient_structure(self, sub)[0]


def quotient_structure(big, small):
    """``(FinAbGroup, generators)`` for ``big / small``.

    Generators are elements of ``big`` whose classes give a cyclic
    decomposition, listed with their orders.
    """
    u = len(big.moduli)
    if u == 0:
        return FinAbGroup(()), []
    e = lcm(*big.moduli)
    C = [solve_triangular(big.lattice, r) for r in small.lattice]
    diag, _, Vinv = diagonalize_mod(C, e, ncols=u)
    orders = [gcd(d, e) for d in diag] + [e] * (u - len(diag))
    basisT = list(zip(*big.lattice))
    gens = []
    for i, o in enumerate(orders):
        if o > 1:
            coords = mat_vec(basisT, Vinv[i])
            gens.append((tuple(c % m for c, m in zip(coords, big.moduli)), o))
    return FinAbGroup.from_cyclic_orders([o for o in orders if o > 1]), gens


def subgroup_of(group: FinAbGroup, generators=()):
    return Subgroup(group.invariant_factors, tuple(tuple(g) for g in generators))


# ---------------------------------------------------------------------------
# Homomorphisms


@dataclass(frozen=True)
class GroupHom:
    domain: FinAbGroup
    codomain: FinAbGroup
    matrix: tuple  # codomain.rank rows, domain.rank columns

    def __post_init__(self):
        k, r = self.domain.rank, self.codomain.rank
        M = tuple(tuple(int(a) for a in row) for row in self.matrix)
        if len(M) != r or any(len(row) != k for row in M):
            raise ValidationError(f"hom matrix must be {r}x{k}")
        M = tuple(tuple(a % e for a in row) for row, e in zip(M, self.codomain.invariant_factors))
        object.__setattr__(self, "matrix", M)
        for i, d in enumerate(self.domain.invariant_factors):
            for j, e in enumerate(self.codomain.invariant_factors):
                if (d * M[j][i]) % e:
                    raise ValidationError(
                        f"matrix does not respect relations: generator {i + 1} of order {d} "
                        f"maps to an element of order not dividing {d}")

    @classmethod
    def from_images(cls, domain, codomain, images):
        """Build from the images of the domain's standard generators."""
        cols = [codomain.reduce(im) for im in images]
        if len(cols) != domain.rank:
            raise ValidationError("need one image per generator")
        rows = tuple(tuple(c[j] for c in cols) for j in range(codomain.rank))
        return cls(domain, codomain, rows)

    @classmethod
    def identity(cls, A):
        return cls(A, A, tuple(tuple(identity_matrix(A.rank)[i]) for i in range(A.rank)))

    def __call__(self, x):
        return self.codomain.reduce(mat_vec(self.matrix, x))

    def images(self):
        return [tuple(row[i] for row in self.matrix) for i in range(self.domain.rank)]

    def compose(self, other):
        """``self o other``."""
        if other.codomain != self.domain:
            raise ValidationError("compose: codomain/domain mismatch")
        M = mat_mul([list(r) for r in self.matrix], [list(r) for r in other.matrix]) \
            if self.matrix and other.matrix else [[0] * other.domain.rank for _ in range(self.codomain.rank)]
        if not M:
            M = []
        return GroupHom(other.domain, self.codomain, tuple(tuple(r) for r in M))

    def kernel(self):
        rows = kernel_rows([list(r) for r in self.matrix], self.domain.invariant_factors,
                           self.codomain.invariant_factors)
        return Subgroup(self.domain.invariant_factors, tuple(tuple(r) for r in rows))

    def image(self):
        return Subgroup(self.codomain.invariant_factors, tuple(self.images()))

    def is_injective(self):
        return self.kernel().order == 1

    def is_surjective(self):
        return self.image().order == self.codomain.order

    def is_bijective(self):
        if self.domain.order != self.codomain.order:
            return False
        return self.is_surjective()


# ---------------------------------------------------------------------------
# Hom, Aut, annihilators, subgroup lattices


@dataclass(frozen=True)
class HomGroup:
    domain: FinAbGroup
    codomain: FinAbGroup
    group: FinAbGroup
    cap: int = DEFAULT_HOM_CAP

    @property
    def order(self):
        return self.group.order

    def elements(self):
        """Every homomorphism, as GroupHom, in a fixed order."""
        if self.order > self.cap:
            raise CapExceeded("hom_elements", self.cap, self.order)
        A, B = self.domain, self.codomain
        slots = []
        for j, e in enumerate(B.invariant_factors):
            for i, d in enumerate(A.invariant_factors):
                step = e // gcd(d, e)
                slots.append([step * t for t in range(gcd(d, e))])
        out = []
        for vals in itertools.product(*slots):
            rows = tuple(tuple(vals[j * A.rank:(j + 1) * A.rank]) for j in range(B.rank))
            out.append(GroupHom(A, B, rows))
        return tuple(out)


def hom_group(A: FinAbGroup, B: FinAbGroup, cap=DEFAULT_HOM_CAP) -> HomGroup:
    orders = [gcd(d, e) for d in A.invariant_factors for e in B.invariant_factors]
    return HomGroup(A, B, FinAbGroup.from_cyclic_orders(orders), cap)


def _det_mod_p(M, p):
    n = len(M)
    A = [[x % p for x in row] for row in M]
    det = 1
    for c in range(n):
        r = next((i for i in range(c, n) if A[i][c]), None)
        if r is None:
            return 0
        if r != c:
            A[c], A[r] = A[r], A[c]
            det = -det
        det = det * A[c][c] % p
        inv = pow(A[c][c], -1, p)
        for i in range(c + 1, n):
            if A[i][c]:
                f = A[i][c] * inv % p
                A[i] = [(a - f * b) % p for a, b in zip(A[i], A[c])]
    return det % p


def is_automorphism(h: GroupHom) -> bool:
    """An endomorphism is invertible iff it is onto every ``A/pA``."""
    A = h.domain
    if h.codomain != A:
        return False
    for p in _prime_factors(A.order):
        idx = [i for i, d in enumerate(A.invariant_factors) if d % p == 0]
        sub = [[h.matrix[j][i] for i in idx] for j in idx]
        if _det_mod_p(sub, p) == 0:
            return False
    return True


def aut_group(A: FinAbGroup, cap=DEFAULT_AUT_CAP, hom_cap=DEFAULT_HOM_CAP):
    if A.order > cap:
        raise CapExceeded("aut_group_order", cap, A.order)
    ends = hom_group(A, A, cap=hom_cap).elements()
    return [h for h in ends if is_automorphism(h)]


def inverse_automorphism(h: GroupHom) -> GroupHom:
    """Inverse by searching the cyclic group generated by ``h``."""
    ident = GroupHom.identity(h.domain)
    cur = h
    prev = ident
    for _ in range(h.domain.order ** 2 + 2):
        if cur == ident:
            return prev
        prev = cur
        cur = cur.compose(h)
    raise ValidationError("not an automorphism")


def annihilator(N, T: FinAbGroup) -> Subgroup:
    """``N^perp`` inside ``T`` for characters ``N`` given as a Subgroup or generator list.

    Characters are vectors ``z`` with ``<z, x> = sum z_i x_i / d_i``.
    """
    gens = N.generators if isinstance(N, Subgroup) else N
    issues = []
    clean = []
    for z in gens:
        if len(z) != T.rank:
            issues.append(f"character {tuple(z)} has length {len(z)}, expected {T.rank}")
            continue
        if any(not isinstance(a, int) or isinstance(a, bool) for a in z):
            issues.append(f"character {tuple(z)} must have integer entries")
            continue
        clean.append(tuple(z))
    if issues:
        raise ValidationError(issues)
    if T.rank == 0:
        return Subgroup((), ())
    e = T.exponent
    M = [[z[i] * (e // d) for i, d in enumerate(T.invariant_factors)] for z in clean]
    if not M:
        return Subgroup.whole(T.invariant_factors)
    rows = kernel_rows(M, T.invariant_factors, [e] * len(M))
    return Subgroup(T.invariant_factors, tuple(tuple(r) for r in rows))


def all_subgroups(G: FinAbGroup, cap=DEFAULT_SUBGROUP_CAP):
    """Every subgroup of ``G``; cyclic subgroups closed under joins."""
    moduli = G.invariant_factors
    cyclic = {Subgroup(moduli, (x,)) for x in G.elements(cap=cap)}
    found = set(cyclic)
    frontier = list(cyclic)
    while frontier:
        nxt = []
        for S in frontier:
            for C in cyclic:
                J = S.join(C)
                if J not in found:
                    found.add(J)
                    nxt.append(J)
                    if len(found) > cap:
                        raise CapExceeded("subgroups", cap)
        frontier = nxt
    return sorted(found, key=lambda S: (S.order, S.lattice))
