"""Root systems of simple Lie types, parabolic selections and Weyl groups.

Conventions: ``A[i][j] = <alpha_i, alpha_j^vee>`` with Bourbaki numbering
(so for B_n the short root is alpha_n and ``A[n-2][n-1] = -2``).  Roots are
integer coefficient vectors over the simple roots.  Indices in the public
API are 1-based, matching how data files name simple roots.
"""

from __future__ import annotations

import re
from fractions import Fraction
from dataclasses import dataclass, field
from functools import cached_property
from math import factorial

from .errors import CapExceeded, ValidationError
from .finab import determinant

WEYL_CAP = 10**7

_MIN_RANK = {"A": 1, "B": 2, "C": 3, "D": 4}
_EXCEPTIONAL = {"E": (6, 7, 8), "F": (4,), "G": (2,)}


def check_type(series, rank):
    series = str(series).upper()
    if series in _MIN_RANK:
        if rank < _MIN_RANK[series]:
            raise ValidationError(
                f"invalid type {series}{rank}: {series}_n needs n >= {_MIN_RANK[series]}")
    elif series in _EXCEPTIONAL:
        if rank not in _EXCEPTIONAL[series]:
            raise ValidationError(f"invalid type {series}{rank}: no such exceptional type")
    else:
        raise ValidationError(f"unknown series {series!r}")
    return series


def parse_type(code):
    """``"A2"`` -> ``("A", 2)``."""
    m = re.fullmatch(r"\s*([A-Ga-g])\s*_?(\d+)\s*", str(code))
    if not m:
        raise ValidationError(f"cannot parse Lie type {code!r}")
    series, rank = m.group(1).upper(), int(m.group(2))
    check_type(series, rank)
    return series, rank


def cartan_matrix(series, rank):
    series = check_type(series, rank)
    n = rank
    A = [[2 if i == j else 0 for j in range(n)] for i in range(n)]

    def link(i, j):  # 1-based simply laced edge
        A[i - 1][j - 1] = A[j - 1][i - 1] = -1

    if series in "ABC":
        for i in range(1, n):
            link(i, i + 1)
        if series == "B":
            A[n - 2][n - 1] = -2
        elif series == "C":
            A[n - 1][n - 2] = -2
    elif series == "D":
        for i in range(1, n - 1):
            link(i, i + 1)
        A[n - 2][n - 1] = A[n - 1][n - 2] = 0
        link(n - 2, n)
    elif series == "E":
        link(1, 3)
        link(2, 4)
        for i in range(3, n):
            link(i, i + 1)
    elif series == "F":
        link(1, 2)
        link(3, 4)
        A[1][2] = -2
        A[2][1] = -1
    elif series == "G":
        A[0][1] = -1
        A[1][0] = -3
    return A


def _mat_mul(A, B):
    return tuple(tuple(sum(a * b for a, b in zip(row, col)) for col in zip(*B)) for row in A)


def _identity(n):
    return tuple(tuple(int(i == j) for j in range(n)) for i in range(n))


def _reflection_matrix(A, j):
    """Matrix of s_j on root coordinates (column vector convention)."""
    n = len(A)
    M = [list(r) for r in _identity(n)]
    for i in range(n):
        M[j][i] -= A[i][j]
    return tuple(tuple(r) for r in M)


def _diagram_automorphisms(A):
    n = len(A)
    found = []

    def extend(perm, used):
        k = len(perm)
        if k == n:
            found.append(tuple(p + 1 for p in perm))
            return
        for c in range(n):
            if c in used:
                continue
            if A[k][k] != A[c][c]:
                continue
            if all(A[k][i] == A[c][perm[i]] and A[i][k] == A[perm[i]][c] for i in range(k)):
                extend(perm + [c], used | {c})

    extend([], frozenset())
    return sorted(found)


@dataclass(frozen=True)
class RootSystem:
    series: str
    rank: int
    cartan_matrix: tuple = field(init=False)
    positive_roots: tuple = field(init=False)
    simple_reflections: tuple = field(init=False)
    diagram_autos: tuple = field(init=False)

    def __post_init__(self):
        series = check_type(self.series, self.rank)
        object.__setattr__(self, "series", series)
        A = tuple(tuple(r) for r in cartan_matrix(series, self.rank))
        object.__setattr__(self, "cartan_matrix", A)
        n = self.rank
        refl = tuple(_reflection_matrix(A, j) for j in range(n))
        object.__setattr__(self, "simple_reflections", refl)
        object.__setattr__(self, "positive_roots", self._close_roots())
        object.__setattr__(self, "diagram_autos", tuple(_diagram_automorphisms(A)))

    def _close_roots(self):
        n = self.rank
        A = self.cartan_matrix
        simple = [tuple(int(i == j) for j in range(n)) for i in range(n)]
        seen = set(simple)
        frontier = list(simple)
        while frontier:
            nxt = []
            for beta in frontier:
                for j in range(n):
                    c = sum(beta[i] * A[i][j] for i in range(n))
                    gamma = tuple(b - (c if i == j else 0) for i, b in enumerate(beta))
                    if any(x < 0 for x in gamma):
                        gamma = tuple(-x for x in gamma)
                    if any(gamma) and gamma not in seen:
                        seen.add(gamma)
                        nxt.append(gamma)
            frontier = nxt
        return tuple(sorted(seen, key=lambda r: (sum(r), tuple(-x for x in r))))

    @property
    def code(self):
        return f"{self.series}{self.rank}"

    @property
    def dim(self):
        return self.rank + 2 * len(self.positive_roots)

    @property
    def simple_indices(self):
        return tuple(range(1, self.rank + 1))

    def reflect(self, j, beta):
        """``s_j(beta)`` with 1-based ``j``."""
        A = self.cartan_matrix
        c = sum(b * A[i][j - 1] for i, b in enumerate(beta))
        return tuple(b - (c if i == j - 1 else 0) for i, b in enumerate(beta))

    def torus_reflection(self, j, x):
        """``s_j`` acting on a torus point given in coroot coordinates."""
        A = self.cartan_matrix
        c = sum(x[i] * A[j - 1][i] for i in range(self.rank))
        return tuple(xi - (c if i == j - 1 else 0) for i, xi in enumerate(x))

    def support(self, beta):
        return frozenset(i + 1 for i, c in enumerate(beta) if c)

    @cached_property
    def symmetrizer(self):
        """``d_i = (alpha_i, alpha_i)/2`` normalized so short roots have 1."""
        n = self.rank
        A = self.cartan_matrix
        # propagate length ratios along the (connected) diagram
        d = [None] * n
        d[0] = Fraction(1)
        stack = [0]
        while stack:
            i = stack.pop()
            for j in range(n):
                if A[i][j] and d[j] is None:
                    # A[i][j] d_j = A[j][i] d_i
                    d[j] = d[i] * A[j][i] / A[i][j]
                    stack.append(j)
        m = min(d)
        return tuple(int(x / m) for x in d)

    @cached_property
    def det_dc(self):
        """Determinant of the symmetrized Cartan matrix ``(A_ij d_j)``."""
        n = self.rank
        A = self.cartan_matrix
        d = self.symmetrizer
        DC = [[A[i][j] * d[j] for j in range(n)] for i in range(n)]
        return determinant(DC)

    def weyl_order_formula(self):
        n, s = self.rank, self.series
        if s == "A":
            return factorial(n + 1)
        if s in "BC":
            return 2**n * factorial(n)
        if s == "D":
            return 2 ** (n - 1) * factorial(n)
        return {("E", 6): 51840, ("E", 7): 2903040, ("E", 8): 696729600,
                ("F", 4): 1152, ("G", 2): 12}[(s, n)]


def build_root_system(series, rank=None):
    """Accepts ``("A", 2)`` or a code like ``"A2"``."""
    if rank is None:
        series, rank = parse_type(series)
    return RootSystem(str(series).upper(), int(rank))


# ---------------------------------------------------------------------------
# Weyl groups


@dataclass(frozen=True)
class WeylGroup:
    root_system: RootSystem
    elements: tuple

    @property
    def order(self):
        return len(self.elements)

    @property
    def automorphism_slice_bound(self):
        """|W| * |D|: the number of (w, diagram) pairs modeling qAut(G)/T."""
        return self.order * len(self.root_system.diagram_autos)


def _closure(reflections, cap):
    n = len(reflections)
    rows = [s[j] for j, s in enumerate(reflections)]
    ident = _identity(n)
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for g in frontier:
            for j in range(n):
                # s_j differs from the identity only in row j
                r = rows[j]
                new = tuple(sum(r[i] * g[i][c] for i in range(n) if r[i]) for c in range(n))
                h = g[:j] + (new,) + g[j + 1:]
                if h not in seen:
                    seen.add(h)
                    if len(seen) > cap:
                        raise CapExceeded("weyl", cap)
                    nxt.append(h)
        frontier = nxt
    return tuple(sorted(seen))


def weyl_group(rs: RootSystem, cap=WEYL_CAP) -> WeylGroup:
    """Closure of the simple reflections (root coordinates), hash-set based."""
    return WeylGroup(rs, _closure(rs.simple_reflections, cap))


def weyl_orbit_size(rs: RootSystem, cap=WEYL_CAP):
    """|W| as the orbit size of rho in fundamental-weight coordinates.

    Shares no code with ``weyl_group``; rho is regular so its stabilizer
    is trivial.
    """
    A = rs.cartan_matrix
    n = rs.rank
    start = (1,) * n
    seen = {start}
    frontier = [start]
    while frontier:
        nxt = []
        for x in frontier:
            for j in range(n):
                y = tuple(x[i] - x[j] * A[j][i] for i in range(n))
                if y not in seen:
                    seen.add(y)
                    if len(seen) > cap:
                        raise CapExceeded("weyl", cap)
                    nxt.append(y)
        frontier = nxt
    return len(seen)


def weyl_torus_elements(rs: RootSystem, cap=WEYL_CAP):
    """The Weyl group acting on coroot coordinates (torus points).

    ``s_j`` sends ``alpha_i^vee`` to ``alpha_i^vee - A[j][i] alpha_j^vee``, the
    root-coordinate reflection of the transposed Cartan matrix.
    """
    At = tuple(zip(*rs.cartan_matrix))
    refl = tuple(_reflection_matrix(At, j) for j in range(rs.rank))
    return _closure(refl, cap)


# ---------------------------------------------------------------------------
# Parabolic selections


@dataclass(frozen=True)
class ParabolicSelection:
    root_system: RootSystem
    iplus: frozenset
    iminus: frozenset  # simple-root indices; the roots are -alpha_i

    def __post_init__(self):
        n = self.root_system.rank
        ip = frozenset(int(i) for i in self.iplus)
        im = frozenset(int(i) for i in self.iminus)
        bad = sorted(i for i in ip | im if not 1 <= i <= n)
        if bad:
            raise ValidationError(f"simple root index out of range 1..{n}: {bad}")
        object.__setattr__(self, "iplus", ip)
        object.__setattr__(self, "iminus", im)

    def _psi(self, subset):
        rs = self.root_system
        return tuple(b for b in rs.positive_roots if rs.support(b) <= subset)

    @cached_property
    def psi_plus(self):
        return self._psi(self.iplus)

    @cached_property
    def psi_minus(self):
        """Stored as positive roots; the actual roots are their negatives."""
        return self._psi(self.iminus)

    @property
    def I(self):
        return self.iplus | self.iminus

    @property
    def I_c(self):
        return frozenset(self.root_system.simple_indices) - self.I

    @property
    def meet(self):
        """``I_+ cap -I_-`` as simple-root indices."""
        return self.iplus & self.iminus

    @property
    def dim_l(self):
        return self.root_system.rank + len(self.psi_plus) + len(self.psi_minus)

    @property
    def dim_l0(self):
        return len(self.I) + len(self.psi_plus) + len(self.psi_minus)

    @property
    def is_full(self):
        full = frozenset(self.root_system.simple_indices)
        return self.iplus == full and self.iminus == full


def parabolic(rs: RootSystem, iplus=(), iminus=()) -> ParabolicSelection:
    return ParabolicSelection(rs, frozenset(iplus), frozenset(iminus))


def all_parabolics(rs: RootSystem):
    n = rs.rank
    subsets = [frozenset(i + 1 for i in range(n) if mask >> i & 1) for mask in range(2**n)]
    return [parabolic(rs, a, b) for a in subsets for b in subsets]


def dynkin_components(rs: RootSystem, subset):
    """Connected components of the sub-diagram on ``subset``, each with its type code."""
    A = rs.cartan_matrix
    todo = set(subset)
    comps = []
    while todo:
        start = todo.pop()
        comp = {start}
        stack = [start]
        while stack:
            i = stack.pop()
            for j in list(todo):
                if A[i - 1][j - 1]:
                    todo.discard(j)
                    comp.add(j)
                    stack.append(j)
        comps.append(sorted(comp))
    return sorted((_classify_component(rs, c), tuple(c)) for c in comps)


def _classify_component(rs, comp):
    A = rs.cartan_matrix
    k = len(comp)
    sub = [[A[i - 1][j - 1] for j in comp] for i in comp]
    for series in "ABCDEFG":
        for rank in ([k] if series not in _EXCEPTIONAL else [k] if k in _EXCEPTIONAL[series] else []):
            try:
                ref = cartan_matrix(series, rank)
            except ValidationError:
                continue
            if _same_up_to_relabel(sub, ref):
                # B2 and C2 coincide; keep the B name
                return f"{series}{rank}"
    raise AssertionError(f"unclassified component {comp}")  # pragma: no cover


def _same_up_to_relabel(X, Y):
    n = len(X)
    if n != len(Y):
        return False

    def extend(perm, used):
        k = len(perm)
        if k == n:
            return True
        for c in range(n):
            if c in used or X[k][k] != Y[c][c]:
                continue
            if all(X[k][i] == Y[c][perm[i]] and X[i][k] == Y[perm[i]][c] for i in range(k)):
                if extend(perm + [c], used | {c}):
                    return True
        return False

    return extend([], frozenset())
