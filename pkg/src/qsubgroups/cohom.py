"""Finite groups by multiplication table and degree-one cohomology.

Modules are written additively.  The action is a right action, so the
matrices satisfy ``A_{xy} = A_y A_x``; with that convention

    d0(g)(x)     = A_x g - g
    d1(v)(x, y)  = A_y v(x) + v(y) - v(xy)

and ``v`` is a cocycle iff ``d1(v) = 0``.
"""

from __future__ import annotations

import itertools
from collections import Counter, deque
from dataclasses import dataclass, field
from functools import cached_property

from .errors import CapExceeded, ValidationError
from .finab import (FinAbGroup, GroupHom, Subgroup, identity_matrix, is_automorphism,
                    kernel_rows, quotient_structure, smith_normal_form)

H1_CAP = 10**7
BRUTE_THRESHOLD = 10**5
REP_CAP = 10**4


# ---------------------------------------------------------------------------
# Finite groups


class FiniteGroup:
    """Group on ``0..n-1`` given by its multiplication table."""

    def __init__(self, table, identity=0, check=True, labels=None):
        self.table = [list(r) for r in table]
        self.identity = identity
        self.labels = labels
        n = len(self.table)
        if check:
            issues = []
            if any(len(r) != n for r in self.table) or not all(
                    0 <= x < n for r in self.table for x in r):
                raise ValidationError("multiplication table must be square with entries in 0..n-1")
            T = self.table
            if any(T[identity][x] != x or T[x][identity] != x for x in range(n)):
                issues.append(f"element {identity} is not a two-sided identity")
            for x in range(n):
                if identity not in T[x]:
                    issues.append(f"element {x} has no inverse")
                    break
            if not issues:
                for a in range(n):
                    Ta = T[a]
                    for b in range(n):
                        ab = Ta[b]
                        Tab = T[ab]
                        Tb = T[b]
                        for c in range(n):
                            if Tab[c] != Ta[Tb[c]]:
                                issues.append(f"not associative at ({a}, {b}, {c})")
                                break
                        if issues:
                            break
                    if issues:
                        break
            if issues:
                raise ValidationError(issues)
        self._inv = [self.table[x].index(identity) for x in range(n)]

    # -- constructors
    @classmethod
    def cyclic(cls, n):
        return cls([[(i + j) % n for j in range(n)] for i in range(n)], check=False,
                   labels=[(i,) for i in range(n)])

    @classmethod
    def from_abelian(cls, A: FinAbGroup):
        elems = list(A.elements())
        index = {x: i for i, x in enumerate(elems)}
        table = [[index[A.add(x, y)] for y in elems] for x in elems]
        return cls(table, identity=index[A.zero], check=False, labels=elems)

    @classmethod
    def direct_product(cls, G, H):
        n, m = G.order, H.order
        table = [[G.table[a // m][b // m] * m + H.table[a % m][b % m]
                  for b in range(n * m)] for a in range(n * m)]
        return cls(table, identity=G.identity * m + H.identity, check=False)

    @classmethod
    def dihedral(cls, n):
        """Order 2n; element (k, f) -> r^k s^f stored as 2k + f."""
        def mul(a, b):
            k1, f1 = divmod(a, 2)
            k2, f2 = divmod(b, 2)
            k = (k1 + (-k2 if f1 else k2)) % n
            return 2 * k + (f1 ^ f2)
        return cls([[mul(a, b) for b in range(2 * n)] for a in range(2 * n)], check=False)

    @classmethod
    def quaternion(cls):
        # units +-1, +-i, +-j, +-k encoded as 2*unit + sign
        mult = {("1", u): (1, u) for u in "1ijk"}
        mult.update({(u, "1"): (1, u) for u in "1ijk"})
        for u in "ijk":
            mult[(u, u)] = (-1, "1")
        mult.update({("i", "j"): (1, "k"), ("j", "k"): (1, "i"), ("k", "i"): (1, "j"),
                     ("j", "i"): (-1, "k"), ("k", "j"): (-1, "i"), ("i", "k"): (-1, "j")})
        units = "1ijk"

        def enc(s, u):
            return 2 * units.index(u) + (0 if s > 0 else 1)

        def mul(a, b):
            ua, sa = units[a // 2], (1 if a % 2 == 0 else -1)
            ub, sb = units[b // 2], (1 if b % 2 == 0 else -1)
            s, u = mult[(ua, ub)]
            return enc(s * sa * sb, u)
        return cls([[mul(a, b) for b in range(8)] for a in range(8)], check=False)

    @classmethod
    def symmetric(cls, n):
        perms = list(itertools.permutations(range(n)))
        index = {p: i for i, p in enumerate(perms)}
        # (p q)(i) = p(q(i))
        table = [[index[tuple(p[q[i]] for i in range(n))] for q in perms] for p in perms]
        return cls(table, identity=index[tuple(range(n))], check=False)

    # -- basics
    @property
    def order(self):
        return len(self.table)

    @property
    def elements(self):
        return range(len(self.table))

    def mul(self, a, b):
        return self.table[a][b]

    def inv(self, a):
        return self._inv[a]

    def power(self, a, k):
        if k < 0:
            a, k = self.inv(a), -k
        r = self.identity
        for _ in range(k):
            r = self.table[r][a]
        return r

    def element_order(self, a):
        k, x = 1, a
        while x != self.identity:
            x = self.table[x][a]
            k += 1
        return k

    @cached_property
    def is_abelian(self):
        T = self.table
        n = self.order
        return all(T[a][b] == T[b][a] for a in range(n) for b in range(a + 1, n))

    def closure(self, gens):
        seen = {self.identity}
        frontier = [self.identity]
        while frontier:
            nxt = []
            for x in frontier:
                for g in gens:
                    y = self.table[x][g]
                    if y not in seen:
                        seen.add(y)
                        nxt.append(y)
            frontier = nxt
        return seen

    @cached_property
    def generators(self):
        """A small generating set, chosen greedily by element order."""
        gens = []
        span = {self.identity}
        by_order = sorted(self.elements, key=lambda x: (-self.element_order(x), x))
        while len(span) < self.order:
            g = next(x for x in by_order if x not in span)
            gens.append(g)
            span = self.closure(gens)
        # drop redundant generators
        for g in list(gens):
            rest = [h for h in gens if h != g]
            if len(self.closure(rest)) == self.order:
                gens = rest
        return tuple(gens)

    @cached_property
    def cayley_tree(self):
        """BFS spanning tree: list of ``(x, k, x*g_k)`` in discovery order."""
        gens = self.generators
        seen = {self.identity}
        order = []
        queue = deque([self.identity])
        while queue:
            x = queue.popleft()
            for k, g in enumerate(gens):
                y = self.table[x][g]
                if y not in seen:
                    seen.add(y)
                    order.append((x, k, y))
                    queue.append(y)
        return order

    def extend(self, gen_values, step, start, eq=None):
        """Propagate values along ``value(x g_k) = step(value(x), k)``.

        Returns the full list of values, or None when some Cayley edge is
        inconsistent.  This single routine serves homomorphisms,
        anti-homomorphisms and cocycles.
        """
        del gen_values  # the caller bakes generator data into ``step``
        eq = eq or (lambda a, b: a == b)
        vals = [None] * self.order
        vals[self.identity] = start
        for x, k, y in self.cayley_tree:
            vals[y] = step(vals[x], k)
        gens = self.generators
        for x in self.elements:
            for k, g in enumerate(gens):
                if not eq(vals[self.table[x][g]], step(vals[x], k)):
                    return None
        return vals

    def center(self):
        T = self.table
        return [z for z in self.elements if all(T[z][x] == T[x][z] for x in self.elements)]

    def conjugacy_class_count(self):
        seen, count = set(), 0
        for x in self.elements:
            if x in seen:
                continue
            count += 1
            for g in self.elements:
                seen.add(self.mul(self.mul(g, x), self.inv(g)))
        return count

    def commutator_subgroup(self):
        comms = {self.mul(self.mul(a, b), self.mul(self.inv(a), self.inv(b)))
                 for a in self.elements for b in self.elements}
        return self.closure(sorted(comms))

    def abelianization(self):
        """``(FinAbGroup, coset_of)``: invariants of G/[G,G] and the quotient map on labels."""
        K = self.commutator_subgroup()
        coset_of = {}
        reps = []
        for x in self.elements:
            if x in coset_of:
                continue
            idx = len(reps)
            reps.append(x)
            for k in K:
                coset_of[self.mul(x, k)] = idx
        q = len(reps)
        qtable = [[coset_of[self.mul(reps[a], reps[b])] for b in range(q)] for a in range(q)]
        Q = FiniteGroup(qtable, identity=coset_of[self.identity], check=False)
        counts = Counter(Q.element_order(x) for x in Q.elements)
        return FinAbGroup.from_element_orders(counts), coset_of

    def abelian_invariants(self):
        if not self.is_abelian:
            raise ValidationError("group is not abelian")
        return FinAbGroup.from_element_orders(Counter(self.element_order(x) for x in self.elements))

    def abelian_coordinates(self):
        """For abelian groups: an isomorphism to invariant-factor form.

        Returns ``(A, to_vec)`` where ``to_vec[x]`` is the coordinate tuple of x.
        """
        A = self.abelian_invariants()
        for images in self._candidate_bases(A):
            vals = self._hom_from_abelian(A, images)
            if vals is not None and len(set(vals)) == self.order:
                to_vec = [None] * self.order
                for vec, x in zip(A.elements(), vals):
                    to_vec[x] = vec
                return A, to_vec
        raise AssertionError("no abelian basis found")  # pragma: no cover

    def _candidate_bases(self, A):
        pools = [[x for x in self.elements if self.element_order(x) == d]
                 for d in A.invariant_factors]
        return itertools.product(*pools)

    def _hom_from_abelian(self, A, images):
        vals = []
        for vec in A.elements():
            x = self.identity
            for c, g in zip(vec, images):
                x = self.mul(x, self.power(g, c))
            vals.append(x)
        return vals

    # -- homomorphisms between tables
    def hom_from_generator_images(self, other, images):
        """Extend ``g_k -> images[k]`` to a homomorphism into ``other``, or None."""
        return self.extend(images, lambda v, k: other.mul(v, images[k]), other.identity)

    def isomorphisms_to(self, other, limit=None):
        if self.order != other.order:
            return
        gens = self.generators
        orders = [self.element_order(g) for g in gens]
        pools = [[y for y in other.elements if other.element_order(y) == o] for o in orders]
        found = 0
        for images in itertools.product(*pools):
            vals = self.hom_from_generator_images(other, list(images))
            if vals is not None and len(set(vals)) == self.order:
                yield tuple(vals)
                found += 1
                if limit is not None and found >= limit:
                    return

    def is_isomorphic(self, other):
        return next(self.isomorphisms_to(other, limit=1), None) is not None

    def automorphisms(self, cap=10**5):
        out = list(itertools.islice(self.isomorphisms_to(self), cap + 1))
        if len(out) > cap:
            raise CapExceeded("automorphisms", cap)
        return sorted(out)

    def fingerprint(self):
        """Cheap isomorphism invariants: order, element-order histogram, |Z|, class count."""
        hist = Counter(self.element_order(x) for x in self.elements)
        ab, _ = self.abelianization()
        return {
            "order": self.order,
            "element_orders": dict(sorted(hist.items())),
            "abelianization": list(ab.invariant_factors),
            "center_order": len(self.center()),
            "classes": self.conjugacy_class_count(),
        }


def hom_to_abelian(gamma: FiniteGroup, A: FinAbGroup, gen_images):
    """Extend generator images in an abelian group to a homomorphism, or None."""
    gen_images = [A.reduce(v) for v in gen_images]
    return gamma.extend(gen_images, lambda v, k: A.add(v, gen_images[k]), A.zero)


def all_homs_to_abelian(gamma: FiniteGroup, A: FinAbGroup, cap=H1_CAP):
    r = len(gamma.generators)
    if A.order ** r > cap:
        raise CapExceeded("hom_enumeration", cap, A.order ** r)
    out = []
    for imgs in itertools.product(list(A.elements()), repeat=r):
        vals = hom_to_abelian(gamma, A, imgs)
        if vals is not None:
            out.append(tuple(vals))
    return out


# ---------------------------------------------------------------------------
# Modules


def _mat_mod(A, moduli):
    return tuple(tuple(a % m for a in row) for row, m in zip(A, moduli))


def _matmul_mod(A, B, moduli):
    k = len(moduli)
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k)) % moduli[i]
                       for j in range(k)) for i in range(k))


class GammaModule:
    """Finite abelian ``M`` with a right action of ``gamma`` by automorphisms.

    ``action`` gives one integer matrix per group element (or per generator
    with ``on_generators=True``, extended by ``A_{x g} = A_g A_x``).
    """

    def __init__(self, gamma: FiniteGroup, M: FinAbGroup, action=None, on_generators=False):
        self.gamma = gamma
        self.M = M
        k = M.rank
        mods = M.invariant_factors
        ident = _mat_mod(identity_matrix(k), mods)
        if action is None:
            mats = [ident] * gamma.order
        elif on_generators:
            gens = [_mat_mod(A, mods) for A in action]
            if len(gens) != len(gamma.generators):
                raise ValidationError("need one action matrix per generator")
            mats = gamma.extend(gens, lambda X, i: _matmul_mod(gens[i], X, mods), ident)
            if mats is None:
                raise ValidationError("generator matrices do not define a right action")
        else:
            if len(action) != gamma.order:
                raise ValidationError(f"need {gamma.order} action matrices, got {len(action)}")
            mats = [_mat_mod(A, mods) for A in action]
        issues = []
        for x, A in enumerate(mats):
            if len(A) != k or any(len(r) != k for r in A):
                raise ValidationError(f"action matrix for element {x} must be {k}x{k}")
            try:
                h = GroupHom(M, M, A)
            except ValidationError as e:
                issues.append(f"action of element {x}: {e}")
                continue
            if not is_automorphism(h):
                issues.append(f"action of element {x} is not an automorphism of M")
        if issues:
            raise ValidationError(issues)
        self.action = mats
        T = gamma.table
        if mats[gamma.identity] != ident:
            raise ValidationError("identity must act trivially")
        for x in gamma.elements:
            for y in gamma.elements:
                if mats[T[x][y]] != _matmul_mod(mats[y], mats[x], mods):
                    raise ValidationError(
                        f"action is not a right action: A_(x y) != A_y A_x at x={x}, y={y}")

    @classmethod
    def trivial(cls, gamma, M):
        return cls(gamma, M)

    def act(self, m, x):
        """``m <- x`` (right action)."""
        A = self.action[x]
        return tuple(sum(a * b for a, b in zip(row, m)) % d
                     for row, d in zip(A, self.M.invariant_factors))

    def is_trivial_action(self):
        ident = _mat_mod(identity_matrix(self.M.rank), self.M.invariant_factors)
        return all(A == ident for A in self.action)

    @property
    def cochain_moduli(self):
        return tuple(self.M.invariant_factors) * self.gamma.order

    def flatten(self, values):
        return tuple(a for v in values for a in v)

    def unflatten(self, flat):
        k = self.M.rank
        return tuple(tuple(flat[i * k:(i + 1) * k]) for i in range(self.gamma.order))


@dataclass(frozen=True)
class Cochain1:
    module: GammaModule = field(compare=False, hash=False, repr=False)
    values: tuple

    def __call__(self, x):
        return self.values[x]

    @property
    def is_cocycle(self):
        return all(not any(v) for v in d1(self, self.module).values())

    @property
    def is_coboundary(self):
        mod = self.module
        if mod.M.order <= REP_CAP:
            return any(d0(g, mod).values == self.values for g in mod.M.elements())
        B = coboundary_subgroup(mod)
        return B.contains(mod.flatten(self.values))

    def __add__(self, other):
        M = self.module.M
        return Cochain1(self.module, tuple(M.add(a, b) for a, b in zip(self.values, other.values)))

    def scale(self, k):
        M = self.module.M
        return Cochain1(self.module, tuple(M.scale(k, a) for a in self.values))


def d0(g, mod: GammaModule) -> Cochain1:
    g = mod.M.reduce(g)
    M = mod.M
    return Cochain1(mod, tuple(M.add(mod.act(g, x), M.neg(g)) for x in mod.gamma.elements))


def d1(v: Cochain1, mod: GammaModule):
    M, G = mod.M, mod.gamma
    vals = v.values if isinstance(v, Cochain1) else tuple(v)
    out = {}
    for x in G.elements:
        for y in G.elements:
            out[(x, y)] = M.add(M.add(mod.act(vals[x], y), vals[y]), M.neg(vals[G.mul(x, y)]))
    return out


def is_cocycle_generic(gamma: FiniteGroup, values, act, op, eq=None):
    """``v(xy) == op(act(v(x), y), v(y))`` for all x, y; works for any coefficient group."""
    eq = eq or (lambda a, b: a == b)
    T = gamma.table
    return all(eq(values[T[x][y]], op(act(values[x], y), values[y]))
               for x in gamma.elements for y in gamma.elements)


def extend_cocycle_generic(gamma: FiniteGroup, gen_values, act, op, identity, eq=None):
    """Cocycle with prescribed generator values, or None if none exists."""
    gens = gamma.generators

    def step(vx, k):
        return op(act(vx, gens[k]), gen_values[k])
    vals = gamma.extend(gen_values, step, identity, eq=eq)
    if vals is None:
        return None
    if not is_cocycle_generic(gamma, vals, act, op, eq=eq):
        return None
    return vals


# ---------------------------------------------------------------------------
# H^1


@dataclass
class H1Result:
    method: str
    z1_order: int
    b1_order: int
    group: FinAbGroup
    representatives: list
    z1: list | None = None
    b1: list | None = None

    @property
    def order(self):
        return self.group.order


def coboundary_subgroup(mod: GammaModule) -> Subgroup:
    M = mod.M
    gens = [mod.flatten(d0(e, mod).values) for e in M.basis()]
    return Subgroup(mod.cochain_moduli, tuple(gens))


def cocycle_subgroup(mod: GammaModule) -> Subgroup:
    """Z^1 as the kernel of the integer system given by the cocycle identity."""
    G, M = mod.gamma, mod.M
    k = M.rank
    n = G.order
    moduli = mod.cochain_moduli
    if k == 0:
        return Subgroup(moduli, ())
    rows, row_mod = [], []
    for j in range(k):  # v(1) = 0; needed when the group is trivial
        r = [0] * (n * k)
        r[G.identity * k + j] = 1
        rows.append(r)
        row_mod.append(M.invariant_factors[j])
    for x in G.elements:
        for g in G.generators:
            xg = G.mul(x, g)
            A = mod.action[g]
            for j in range(k):
                r = [0] * (n * k)
                r[xg * k + j] += 1
                r[g * k + j] -= 1
                for i in range(k):
                    r[x * k + i] -= A[j][i]
                rows.append(r)
                row_mod.append(M.invariant_factors[j])
    gens = kernel_rows(rows, moduli, row_mod)
    return Subgroup(moduli, tuple(tuple(g) for g in gens))


def _canonical(flat_v, B_elems, moduli):
    return min(tuple((a + b) % m for a, b, m in zip(flat_v, bb, moduli)) for bb in B_elems)


def _h1_brute(mod: GammaModule, cap):
    G, M = mod.gamma, mod.M
    r = len(G.generators)
    need = M.order ** r
    if need > cap:
        raise CapExceeded("h1_enumeration", cap, need)

    def op(a, b):
        return M.add(a, b)
    z1 = []
    for gv in itertools.product(list(M.elements()), repeat=r):
        vals = extend_cocycle_generic(G, list(gv), mod.act, op, M.zero)
        if vals is not None:
            z1.append(tuple(vals))
    b1 = sorted({d0(g, mod).values for g in M.elements()})
    moduli = mod.cochain_moduli
    flat_b = [mod.flatten(b) for b in b1]
    bset = set(flat_b)
    classes = {}
    for v in z1:
        rep = _canonical(mod.flatten(v), flat_b, moduli)
        classes.setdefault(rep, v)
    reps = sorted(classes)
    # class orders give the group structure
    counts = Counter()
    for rep in reps:
        k, cur = 1, rep
        while cur not in bset:
            cur = tuple((a + b) % m for a, b, m in zip(cur, rep, moduli))
            k += 1
        counts[k] += 1
    group = FinAbGroup.from_element_orders(counts)
    return H1Result("brute", len(z1), len(b1), group,
                    [Cochain1(mod, mod.unflatten(f)) for f in reps],
                    z1=sorted(z1), b1=b1)


def _h1_linear(mod: GammaModule, cap, listing=True):
    Z = cocycle_subgroup(mod)
    B = coboundary_subgroup(mod)
    group, gens = quotient_structure(Z, B)
    moduli = mod.cochain_moduli
    reps = []
    if group.order <= REP_CAP:
        flat = []
        for coeffs in itertools.product(*(range(o) for _, o in gens)):
            x = tuple(0 for _ in moduli)
            for c, (g, _) in zip(coeffs, gens):
                x = tuple((a + c * b) % m for a, b, m in zip(x, g, moduli))
            flat.append(x)
        if B.order <= REP_CAP:
            b_elems = B.elements(cap=REP_CAP)
            flat = [_canonical(f, b_elems, moduli) for f in flat]
        reps = [Cochain1(mod, mod.unflatten(f)) for f in sorted(set(flat))]
    z1 = b1 = None
    if listing and Z.order <= min(cap, REP_CAP):
        z1 = [mod.unflatten(f) for f in Z.elements(cap=REP_CAP)]
        b1 = [mod.unflatten(f) for f in B.elements(cap=REP_CAP)]
    return H1Result("linear", Z.order, B.order, group, reps, z1=z1, b1=b1)


def h1(mod: GammaModule, method="auto", cap=H1_CAP, listing=True) -> H1Result:
    """H^1(gamma, M) with class representatives.

    ``method`` is ``"brute"`` (cocycles enumerated from generator values),
    ``"linear"`` (kernel/image computation over Z) or ``"auto"``.  With
    ``listing=False`` the linear path skips listing Z^1 and B^1.
    """
    if method == "auto":
        need = mod.M.order ** len(mod.gamma.generators)
        method = "brute" if need <= BRUTE_THRESHOLD else "linear"
    if method == "brute":
        return _h1_brute(mod, cap)
    if method == "linear":
        return _h1_linear(mod, cap, listing)
    raise ValidationError(f"unknown h1 method {method!r}")


# ---------------------------------------------------------------------------
# Torsion tori


def _int_right_action(gamma, action, on_generators):
    n = len(action[0]) if action else 0
    ident = tuple(tuple(r) for r in identity_matrix(n))

    def mm(A, B):
        return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(n)) for j in range(n))
                     for i in range(n))
    if on_generators:
        gens = [tuple(tuple(int(a) for a in r) for r in A) for A in action]
        mats = gamma.extend(gens, lambda X, i: mm(gens[i], X), ident)
        if mats is None:
            raise ValidationError("generator matrices do not define a right action on the lattice")
    else:
        mats = [tuple(tuple(int(a) for a in r) for r in A) for A in action]
    from .finab import determinant
    for x, A in enumerate(mats):
        if abs(determinant([list(r) for r in A])) != 1:
            raise ValidationError(f"action of element {x} is not an automorphism of the lattice")
    T = gamma.table
    for x in gamma.elements:
        for y in gamma.elements:
            if mats[T[x][y]] != mm(mats[y], mats[x]):
                raise ValidationError("lattice action is not a right action")
    return mats


@dataclass
class TorsionH1Result:
    level: int
    level_h1: H1Result  # H^1(gamma, D_level)
    kernel_order: int  # level classes that die on the divisible torus
    torus_group: FinAbGroup  # H^1 of the full torsion torus
    torus_representatives: list  # cochains with values in (1/level)Z^n / Z^n

    @property
    def torus_order(self):
        return self.torus_group.order


def torsion_h1_at_level(gamma: FiniteGroup, action, level, on_generators=False,
                        method="auto", cap=H1_CAP) -> TorsionH1Result:
    """H^1 over ``D_N = ((1/N)Z/Z)^n`` and its image in H^1 of the torsion torus.

    A level cocycle ``v`` (integer lift ``w = N v``) is a coboundary over
    the divisible torus iff ``S g = v (mod Z)`` has a rational solution,
    ``S`` the stacked ``A_x - I``.  With ``U S V = D`` of rank r this is the
    condition ``(U w)_i = 0 (mod N)`` for every row i >= r.
    """
    mats = _int_right_action(gamma, action, on_generators)
    n = len(mats[0]) if mats else 0
    N = int(level)
    M = FinAbGroup((N,) * n) if N > 1 else FinAbGroup(())
    mod = GammaModule(gamma, M, [[list(r) for r in A] for A in mats] if n and N > 1 else None)
    res = h1(mod, method=method, cap=cap, listing=False)
    if n == 0 or N == 1:
        return TorsionH1Result(N, res, 1, FinAbGroup(()), [])
    S = []
    for x in gamma.elements:
        for i in range(n):
            S.append([mats[x][i][j] - (i == j) for j in range(n)])
    U, D, _ = smith_normal_form(S)
    rank = sum(1 for i in range(min(len(D), n)) if D[i][i])
    psi_rows = U[rank:]
    Z = cocycle_subgroup(mod)

    def psi(flat):
        return tuple(sum(a * b for a, b in zip(row, flat)) % N for row in psi_rows)
    image = Subgroup((N,) * len(psi_rows), tuple(psi(g) for g in Z.generators))
    torus_group = image.structure()
    kernel_order = res.order // torus_group.order
    reps, seen = [], set()
    for rep in res.representatives:
        key = psi(mod.flatten(rep.values))
        if key not in seen:
            seen.add(key)
            reps.append(rep)
    return TorsionH1Result(N, res, kernel_order, torus_group, reps)


def h1_torsion_reduction(gamma: FiniteGroup, torus_rank, action, m_cap=None,
                         on_generators=False, method="auto") -> TorsionH1Result:
    """H^1 of ``gamma`` acting on the torsion of ``(Q/Z)^n`` via the level ``m = |gamma|``."""
    m = gamma.order
    if m_cap is not None and m > m_cap:
        raise CapExceeded("torsion_level", m_cap, m)
    if action is None:
        action = [identity_matrix(torus_rank)] * (len(gamma.generators) if on_generators else gamma.order)
    if any(len(A) != torus_rank for A in action):
        raise ValidationError(f"action matrices must be {torus_rank}x{torus_rank}")
    return torsion_h1_at_level(gamma, action, m, on_generators=on_generators, method=method)
