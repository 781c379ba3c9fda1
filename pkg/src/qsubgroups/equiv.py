"""Equivalence of embeddings of a finite group, decided through 1-cocycles.

Two embeddings are equivalent when ``sigma1(tau(x)) = f(sigma2(x)) v(x)``
for some automorphism tau of Gamma, some f in the modeled automorphism
slice, and a cocycle v with values in ``T^{f sigma2}``.

For SL2 the slice is ``{Int(t) Int(n_w)}`` with ``t = diag(a, 1/a)`` in T
and ``w`` in the Weyl group {1, s}; the diagram automorphism group of A1
is trivial.  ``Int(t)`` is recorded by ``lam = a^2``; it fixes diagonal
entries and scales the (1,2) entry by ``lam`` and the (2,1) entry by
``1/lam``.  In the torus slice (any Lie type, embeddings into T) the slice
is ``W x D`` acting on coroot coordinates.
"""

from __future__ import annotations

import hashlib
import itertools
import json
import random
from dataclasses import dataclass, field
from fractions import Fraction

from .cartan import RootSystem, weyl_torus_elements
from .cohom import (FiniteGroup, GammaModule, all_homs_to_abelian, extend_cocycle_generic, h1,
                    is_cocycle_generic)
from .cyclo import CycNum, Sl2Elt, generate_group
from .errors import CapExceeded, ValidationError
from .finab import FinAbGroup

EQUIVALENT = "EQUIVALENT"
NOT_EQUIVALENT = "NOT_EQUIVALENT"
NOT_APPLICABLE = "NOT_APPLICABLE"

SLICE_NOTE = "relative to the modeled automorphism slice Int(N_G(T)) x D"
TORUS_SLICE_CAP = 10**5
FAMILY_BUDGET = 20000


# ---------------------------------------------------------------------------
# Embeddings


def _frac_mod1(x):
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass
class TorusEmbedding:
    """Map Gamma -> T, torus points in coroot coordinates mod 1."""

    gamma: FiniteGroup
    rs: RootSystem
    images: tuple
    check: bool = True

    def __post_init__(self):
        self.images = tuple(tuple(_frac_mod1(c) for c in p) for p in self.images)
        if self.check:
            self.verify()

    @classmethod
    def from_generators(cls, gamma, rs, gen_images):
        gen_images = [tuple(_frac_mod1(c) for c in p) for p in gen_images]
        zero = (Fraction(0),) * rs.rank
        vals = gamma.extend(gen_images, lambda v, k: tuple(
            _frac_mod1(a + b) for a, b in zip(v, gen_images[k])), zero)
        if vals is None:
            raise ValidationError("torus images do not define a homomorphism")
        return cls(gamma, rs, tuple(vals))

    def verify(self):
        G = self.gamma
        if len(self.images) != G.order or any(len(p) != self.rs.rank for p in self.images):
            raise ValidationError("torus embedding needs one rank-n point per group element")
        for x in G.elements:
            for y in G.elements:
                s = tuple(_frac_mod1(a + b) for a, b in zip(self.images[x], self.images[y]))
                if s != self.images[G.mul(x, y)]:
                    raise ValidationError("torus map is not a homomorphism")

    @property
    def is_injective(self):
        return len(set(self.images)) == self.gamma.order


@dataclass
class Sl2Embedding:
    """Map Gamma -> SL2 given by one matrix per group element."""

    gamma: FiniteGroup
    images: tuple
    check: bool = True

    def __post_init__(self):
        m = 1
        for g in self.images:
            m = m * g.m // _gcd(m, g.m)
        self.images = tuple(g.to_conductor(m) for g in self.images)
        if self.check:
            self.verify()

    @classmethod
    def from_matrix_generators(cls, gens, cap=None):
        mg = generate_group(gens) if cap is None else generate_group(gens, cap=cap)
        emb = cls(mg.abstract(), tuple(mg.elements), check=False)
        emb.generator_images = list(mg.generators)
        return emb

    @classmethod
    def from_generator_images(cls, gamma, gen_images):
        """Images of ``gamma.generators``, extended multiplicatively."""
        m = 1
        for X in gen_images:
            m = m * X.m // _gcd(m, X.m)
        gen_images = [X.to_conductor(m) for X in gen_images]
        vals = gamma.extend(gen_images, lambda X, k: X * gen_images[k], Sl2Elt.identity(m))
        if vals is None:
            raise ValidationError("matrices do not define a homomorphism")
        return cls(gamma, tuple(vals))

    @property
    def m(self):
        return self.images[0].m if self.images else 1

    def verify(self):
        G = self.gamma
        if len(self.images) != G.order:
            raise ValidationError("SL2 embedding needs one matrix per group element")
        for x in G.elements:
            for y in G.elements:
                if self.images[x] * self.images[y] != self.images[G.mul(x, y)]:
                    raise ValidationError("matrix map is not a homomorphism")

    @property
    def is_injective(self):
        return len(set(self.images)) == self.gamma.order

    def conjugate(self, g):
        """``Int(g) o sigma``."""
        return Sl2Embedding(self.gamma, tuple(X.conjugate_by(g) for X in self.images))

    def is_monomial(self):
        return all(X.is_monomial() for X in self.images)

    def is_diagonal(self):
        return all(X.is_diagonal() for X in self.images)


def _gcd(a, b):
    while b:
        a, b = b, a % b
    return a


def to_sl2(emb: TorusEmbedding) -> Sl2Embedding:
    """A1 torus points ``c`` -> ``diag(zeta^c, zeta^-c)``."""
    if emb.rs.code != "A1":
        raise ValidationError("only A1 torus embeddings correspond to SL2 matrices")
    mats = []
    for p in emb.images:
        c = p[0]
        mats.append(Sl2Elt.diag(CycNum.zeta(c.denominator, c.numerator)))
    return Sl2Embedding(emb.gamma, tuple(mats))


# ---------------------------------------------------------------------------
# Automorphism slices


@dataclass(frozen=True)
class SliceAut:
    """``Int(t) o Int(n_w)`` on SL2 with ``lam = a^2`` for ``t = diag(a, 1/a)``."""

    w: int = 0  # 0 = identity, 1 = s
    lam: CycNum = field(default_factory=lambda: CycNum.rational(1))

    def apply(self, X: Sl2Elt) -> Sl2Elt:
        a, b, c, d = X.entries()
        if self.w:
            # n_s X n_s^{-1} with n_s = [[0, 1], [-1, 0]]
            a, b, c, d = d, -c, -b, a
        return Sl2Elt(a, self.lam * b, c / self.lam, d, check=False)

    def compose(self, other: "SliceAut") -> "SliceAut":
        """``self o other``: n_w t n_w^{-1} inverts t when w = s."""
        lam2 = other.lam.inv() if self.w else other.lam
        return SliceAut((self.w + other.w) % 2, self.lam * lam2)

    def inverse(self) -> "SliceAut":
        if self.w:
            return self
        return SliceAut(0, self.lam.inv())

    def describe(self):
        return {"w": "s" if self.w else "1", "lambda": str(self.lam),
                "lambda_conductor": self.lam.m}


@dataclass(frozen=True)
class TorusSliceAut:
    """Weyl element (coroot-coordinate matrix) followed by a diagram permutation."""

    w: tuple
    perm: tuple

    def apply(self, x):
        y = [sum(a * b for a, b in zip(row, x)) for row in self.w]
        out = [None] * len(y)
        for i, p in enumerate(self.perm):
            out[p - 1] = y[i]
        return tuple(_frac_mod1(c) for c in out)

    @classmethod
    def identity(cls, n):
        return cls(tuple(tuple(int(i == j) for j in range(n)) for i in range(n)),
                   tuple(range(1, n + 1)))

    def describe(self):
        return {"w": [list(r) for r in self.w], "diagram": list(self.perm)}


def torus_slice(rs: RootSystem, cap=TORUS_SLICE_CAP):
    W = weyl_torus_elements(rs)
    D = rs.diagram_autos
    if len(W) * len(D) > cap:
        raise CapExceeded("torus_slice", cap, len(W) * len(D))
    return [TorusSliceAut(w, p) for w in W for p in D]


def sl2_slice():
    """The Weyl part of the SL2 slice; |W(A1)| * |D(A1)| = 2."""
    return [0, 1]


# ---------------------------------------------------------------------------
# T^{f sigma}


@dataclass(frozen=True)
class TfSigma:
    kind: str  # "full_torus" (torus slice), "full_T" or "center_only" (SL2)
    witnesses: tuple = ()

    def contains(self, t) -> bool:
        if self.kind in ("full_torus",):
            return True
        if self.kind == "full_T":
            return t.is_diagonal()
        return t.is_central()


def t_f_sigma(f, sigma) -> TfSigma:
    if isinstance(sigma, TorusEmbedding):
        return TfSigma("full_torus")
    images = [f.apply(X) for X in sigma.images]
    if all(X.is_monomial() for X in images):
        return TfSigma("full_T")
    return TfSigma("center_only", (Sl2Elt.identity(), -Sl2Elt.identity()))


def conjugation_action(f, sigma: Sl2Embedding):
    """``t <- y = (f sigma(y))^{-1} t (f sigma(y))``."""
    fs = [f.apply(X) for X in sigma.images]
    fs_inv = [X.inverse() for X in fs]

    def act(t, y):
        return fs_inv[y] * t * fs[y]
    return act


def _matmul(a, b):
    return a * b


# ---------------------------------------------------------------------------
# Witnesses and certificates


@dataclass
class EquivalenceWitness:
    tau: tuple  # tau[x] = image in sigma1's group of x in sigma2's group
    f: object  # SliceAut or TorusSliceAut
    v: tuple  # one value per element of sigma2's group
    slice_element: dict = field(default_factory=dict)

    def replay(self, sigma1, sigma2) -> bool:
        G = sigma2.gamma
        if isinstance(sigma2, TorusEmbedding):
            for x in G.elements:
                lhs = sigma1.images[self.tau[x]]
                rhs = tuple(_frac_mod1(a + b) for a, b in zip(self.f.apply(sigma2.images[x]), self.v[x]))
                if lhs != rhs:
                    return False
            # trivial action on the torus: cocycle = homomorphism
            return is_cocycle_generic(G, self.v, lambda t, y: t,
                                      lambda a, b: tuple(_frac_mod1(p + q) for p, q in zip(a, b)))
        for x in G.elements:
            if sigma1.images[self.tau[x]] != self.f.apply(sigma2.images[x]) * self.v[x]:
                return False
        tf = t_f_sigma(self.f, sigma2)
        if not all(tf.contains(t) for t in self.v):
            return False
        act = conjugation_action(self.f, sigma2)
        return is_cocycle_generic(G, self.v, act, _matmul)

    def inverse(self, sigma1, sigma2) -> "EquivalenceWitness":
        """Witness for ``sigma2 ~ sigma1``."""
        tau_inv = [None] * len(self.tau)
        for x, y in enumerate(self.tau):
            tau_inv[y] = x
        if isinstance(sigma2, TorusEmbedding):
            # sigma2(tau^-1 y) = f^-1(sigma1(y) - v(tau^-1 y)), f linear
            finv = _torus_inverse(self.f, sigma2.rs)
            v = tuple(tuple(_frac_mod1(-c) for c in finv.apply(self.v[tau_inv[y]]))
                      for y in sigma1.gamma.elements)
            return EquivalenceWitness(tuple(tau_inv), finv, v, finv.describe())
        finv = self.f.inverse()
        v = tuple(finv.apply(self.v[tau_inv[y]]).inverse() for y in sigma1.gamma.elements)
        return EquivalenceWitness(tuple(tau_inv), finv, v, finv.describe())

    def compose(self, other: "EquivalenceWitness") -> "EquivalenceWitness":
        """``self`` proves sigma1 ~ sigma2 and ``other`` sigma2 ~ sigma3; returns sigma1 ~ sigma3."""
        tau = tuple(self.tau[other.tau[x]] for x in range(len(other.tau)))
        if isinstance(self.f, TorusSliceAut):
            f = _torus_compose(self.f, other.f)
            v = tuple(tuple(_frac_mod1(a + b) for a, b in zip(self.f.apply(other.v[y]), self.v[other.tau[y]]))
                      for y in range(len(other.tau)))
            return EquivalenceWitness(tau, f, v, f.describe())
        f = self.f.compose(other.f)
        v = tuple(self.f.apply(other.v[y]) * self.v[other.tau[y]] for y in range(len(other.tau)))
        return EquivalenceWitness(tau, f, v, f.describe())

    def as_dict(self):
        vals = [list(map(str, t)) if isinstance(t, tuple) else [[str(e) for e in r] for r in t.rows()]
                for t in self.v]
        return {"tau": list(self.tau), "slice_element": self.slice_element, "v": vals}


def _torus_inverse(f: TorusSliceAut, rs):
    # brute force inside the finite slice: find g with g o f = id
    n = rs.rank
    basis = [tuple(Fraction(int(i == j), 7) for j in range(n)) for i in range(n)]
    for g in torus_slice(rs):
        if all(g.apply(f.apply(b)) == b for b in basis):
            return g
    raise AssertionError("slice element without inverse")  # pragma: no cover


def _torus_compose(f1: TorusSliceAut, f2: TorusSliceAut):
    n = len(f1.perm)
    # both are linear maps; build the product matrix on the standard basis
    cols = []
    for i in range(n):
        e = tuple(int(i == j) for j in range(n))
        y = [sum(a * b for a, b in zip(row, e)) for row in f2.w]
        out = [None] * n
        for k, p in enumerate(f2.perm):
            out[p - 1] = y[k]
        y = [sum(a * b for a, b in zip(row, out)) for row in f1.w]
        out2 = [None] * n
        for k, p in enumerate(f1.perm):
            out2[p - 1] = y[k]
        cols.append(out2)
    M = tuple(tuple(cols[j][i] for j in range(n)) for i in range(n))
    return TorusSliceAut(M, tuple(range(1, n + 1)))


@dataclass
class Certificate:
    """Exhaustion record for a NOT_EQUIVALENT answer."""

    reason: str
    tau_count: int
    slice_count: int
    v_count: int
    combinations: int
    digest: str
    note: str = SLICE_NOTE

    def as_dict(self):
        return {"reason": self.reason, "tau_count": self.tau_count, "slice_count": self.slice_count,
                "v_count": self.v_count, "combinations": self.combinations, "digest": self.digest,
                "note": self.note}


@dataclass
class EquivalenceResult:
    verdict: str
    witness: EquivalenceWitness | None = None
    certificate: Certificate | None = None
    detail: str = ""

    @property
    def equivalent(self):
        return self.verdict == EQUIVALENT

    def as_dict(self):
        out = {"verdict": self.verdict, "detail": self.detail}
        if self.witness is not None:
            out["witness"] = self.witness.as_dict()
        if self.certificate is not None:
            out["certificate"] = self.certificate.as_dict()
        return out


def _digest(parts):
    h = hashlib.sha256()
    h.update(json.dumps(parts, sort_keys=True, default=str).encode())
    return h.hexdigest()


def _emit(witness, sigma1, sigma2):
    if not witness.replay(sigma1, sigma2):
        raise AssertionError("internal: witness failed to replay")  # never emit a bad witness
    return EquivalenceResult(EQUIVALENT, witness=witness, detail=SLICE_NOTE)


# ---------------------------------------------------------------------------
# Deciders


def _isomorphisms(G2: FiniteGroup, G1: FiniteGroup):
    return list(G2.isomorphisms_to(G1))


def decide_equivalence_torus(sigma1: TorusEmbedding, sigma2: TorusEmbedding,
                             rs: RootSystem | None = None, slice_cap=TORUS_SLICE_CAP) -> EquivalenceResult:
    rs = rs or sigma2.rs
    G1, G2 = sigma1.gamma, sigma2.gamma
    if G1.table == G2.table:
        taus = [tuple(G2.elements)]
    else:
        first = next(G2.isomorphisms_to(G1), None)
        taus = [first] if first is not None else []
    if not taus:
        cert = Certificate("abstract groups are not isomorphic", 0, 0, 0, 0,
                           _digest(["torus", G1.order, G2.order]))
        return EquivalenceResult(NOT_EQUIVALENT, certificate=cert)
    tau = taus[0]
    zero = (Fraction(0),) * rs.rank
    # prefer an exact slice match (v trivial) when one exists
    for f in torus_slice(rs, slice_cap):
        if all(sigma1.images[tau[x]] == f.apply(sigma2.images[x]) for x in G2.elements):
            w = EquivalenceWitness(tau, f, tuple(zero for _ in G2.elements), f.describe())
            return _emit(w, sigma1, sigma2)
    f = TorusSliceAut.identity(rs.rank)
    v = tuple(tuple(_frac_mod1(a - b) for a, b in zip(sigma1.images[tau[x]], sigma2.images[x]))
              for x in G2.elements)
    return _emit(EquivalenceWitness(tau, f, v, f.describe()), sigma1, sigma2)


def _diag_type(X):
    return "T" if X.is_diagonal() else "antidiag"


def _solve_lambda(pairs):
    """Common ``lam`` with ``X12 = lam Y12`` and ``X21 = Y21 / lam`` for all pairs, or None."""
    lam = None
    for X, Y in pairs:
        for xv, yv, up in ((X.b, Y.b, True), (X.c, Y.c, False)):
            if xv.is_zero() != yv.is_zero():
                return None
            if xv.is_zero():
                continue
            cand = xv / yv if up else yv / xv
            if lam is None:
                lam = cand
            elif lam != cand:
                return None
    return lam if lam is not None else CycNum.rational(1)


def decide_equivalence_sl2(sigma1: Sl2Embedding, sigma2: Sl2Embedding) -> EquivalenceResult:
    G1, G2 = sigma1.gamma, sigma2.gamma
    m = sigma1.m * sigma2.m // _gcd(sigma1.m, sigma2.m)
    if sigma1.m != m:
        sigma1 = Sl2Embedding(G1, tuple(X.to_conductor(m) for X in sigma1.images), check=False)
    if sigma2.m != m:
        sigma2 = Sl2Embedding(G2, tuple(X.to_conductor(m) for X in sigma2.images), check=False)
    taus = _isomorphisms(G2, G1)
    digest_base = ["sl2", [str(X) for X in sigma1.images], [str(X) for X in sigma2.images]]
    if not taus:
        cert = Certificate("abstract groups are not isomorphic", 0, 2, 0, 0, _digest(digest_base))
        return EquivalenceResult(NOT_EQUIVALENT, certificate=cert)
    mono1, mono2 = sigma1.is_monomial(), sigma2.is_monomial()
    ws = sl2_slice()
    assert len(ws) * 1 == 2  # |W(A1)| * |D(A1)|
    if mono1 != mono2:
        cert = Certificate("T^{f sigma} types differ: one image is monomial, the other is not",
                           len(taus), len(ws), 0, 0, _digest(digest_base + ["mixed"]))
        return EquivalenceResult(NOT_EQUIVALENT, certificate=cert)
    if mono2:
        # full_T: v absorbs every diagonal factor, only the image in N(T)/T matters
        for tau in taus:
            if all(_diag_type(sigma1.images[tau[x]]) == _diag_type(sigma2.images[x]) for x in G2.elements):
                f = SliceAut(0, CycNum.rational(1, m))
                v = tuple(sigma2.images[x].inverse() * sigma1.images[tau[x]] for x in G2.elements)
                return _emit(EquivalenceWitness(tau, f, v, f.describe()), sigma1, sigma2)
        cert = Certificate("no automorphism of Gamma matches the induced maps to N(T)/T",
                           len(taus), len(ws), 1, len(taus), _digest(digest_base + ["full_T"]))
        return EquivalenceResult(NOT_EQUIVALENT, certificate=cert)
    # center_only: v in Hom(Gamma, {+-1})
    signs = all_homs_to_abelian(G2, FinAbGroup((2,)))
    ident = Sl2Elt.identity().to_conductor(m)
    minus = -ident
    tried = 0
    for tau in taus:
        for w in ws:
            nw = SliceAut(w, CycNum.rational(1, m))
            Y = [nw.apply(sigma2.images[x]) for x in G2.elements]
            for sgn in signs:
                tried += 1
                vmat = [minus if s[0] else ident for s in sgn]
                X = [sigma1.images[tau[x]] * vmat[x] for x in G2.elements]
                if any(Xx.a != Yx.a or Xx.d != Yx.d for Xx, Yx in zip(X, Y)):
                    continue
                lam = _solve_lambda(list(zip(X, Y)))
                if lam is None:
                    continue
                f = SliceAut(w, lam)
                return _emit(EquivalenceWitness(tau, f, tuple(vmat), f.describe()), sigma1, sigma2)
    cert = Certificate("exhausted tau x w x Hom(Gamma, +-1) with exact lambda solving",
                       len(taus), len(ws), len(signs), tried, _digest(digest_base + [tried]))
    return EquivalenceResult(NOT_EQUIVALENT, certificate=cert)


def decide_equivalence(sigma1, sigma2, rs=None):
    if isinstance(sigma1, TorusEmbedding) and isinstance(sigma2, TorusEmbedding):
        return decide_equivalence_torus(sigma1, sigma2, rs)
    if isinstance(sigma1, TorusEmbedding):
        sigma1 = to_sl2(sigma1)
    if isinstance(sigma2, TorusEmbedding):
        sigma2 = to_sl2(sigma2)
    return decide_equivalence_sl2(sigma1, sigma2)


# ---------------------------------------------------------------------------
# Data-level wrapper


def embedding_of_datum(d):
    """The embedding sigma of a finite datum, as a torus or SL2 embedding."""
    if d.gamma_kind == "matrix":
        return Sl2Embedding.from_matrix_generators(d.sigma_matrices)
    if d.gamma_kind == "abelian":
        G = d.gamma_group
        # from_abelian labels elements by coordinate vectors
        images = []
        for vec in G.labels:
            p = [Fraction(0)] * d.root_system.rank
            for c, pt in zip(vec, d.sigma_torus):
                p = [a + c * b for a, b in zip(p, pt)]
            images.append(tuple(p))
        return TorusEmbedding(G, d.root_system, tuple(images))
    raise ValidationError("only finite data have embeddings to compare")


def decide_datum_equivalence(d1, d2) -> EquivalenceResult:
    """Equivalence of full data (I+ = Pi, I- = -Pi, N = 1) through their embeddings.

    Other data, and types where ell shares a factor with det(DC), are
    outside what the embedding criterion covers.
    """
    for d in (d1, d2):
        d.validate()
    same = d1.root_system.code == d2.root_system.code and d1.ell == d2.ell
    full = all(d.parabolic.is_full and d.N.order == 1 and d.is_finite for d in (d1, d2))
    if not (same and full):
        return EquivalenceResult(NOT_APPLICABLE, detail="criterion applies to full data of equal type and ell")
    if not (d1.ell_coprime_det and d2.ell_coprime_det):
        return EquivalenceResult(NOT_APPLICABLE, detail="ell and det(DC) are not coprime")
    s1, s2 = embedding_of_datum(d1), embedding_of_datum(d2)
    return decide_equivalence(s1, s2, d1.root_system)


# ---------------------------------------------------------------------------
# Twist invariance and the orbit / H^1 bijection


def _torsion_diag(level, k, m):
    return Sl2Elt.diag(CycNum.zeta(level, k).to_conductor(m))


def _cocycles_sl2(sigma: Sl2Embedding, f: SliceAut, level: int, fs_override=None):
    """Z^1_{f, sigma} valued in T^{f sigma}, at torsion level ``level`` when that group is T."""
    G = sigma.gamma
    fs = fs_override or [f.apply(X) for X in sigma.images]
    m = level
    for X in fs:
        m = m * X.m // _gcd(m, X.m)
    fs = [X.to_conductor(m) for X in fs]
    fs_inv = [X.inverse() for X in fs]
    kind = "full_T" if all(X.is_monomial() for X in fs) else "center_only"
    ident = Sl2Elt.identity().to_conductor(m)
    if kind == "full_T":
        values = [_torsion_diag(level, k, m) for k in range(level)]
    else:
        values = [ident, -ident]

    def act(t, y):
        return fs_inv[y] * t * fs[y]
    out = []
    for gv in itertools.product(values, repeat=len(G.generators)):
        vals = extend_cocycle_generic(G, list(gv), act, _matmul, ident)
        if vals is not None and all(
                (t.is_diagonal() if kind == "full_T" else t.is_central()) for t in vals):
            out.append(tuple(vals))
    return kind, out


def twist_invariance_check(f, t, sigma, level=None) -> bool:
    """Compare ``Z^1_{f,sigma}`` with ``Z^1_{t.f, sigma}`` at a torsion level.

    ``t`` is a torus element: an Sl2Elt ``diag(a, 1/a)`` for SL2 or a
    coroot-coordinate vector for the torus slice.  Both sets are computed
    from actual conjugation, not from the lemma.
    """
    if isinstance(sigma, TorusEmbedding):
        G = sigma.gamma
        level = level or G.order
        n = sigma.rs.rank
        pts = [tuple(Fraction(c, level) for c in v) for v in itertools.product(range(level), repeat=n)]

        def op(a, b):
            return tuple(_frac_mod1(p + q) for p, q in zip(a, b))
        zero = (Fraction(0),) * n
        # f sigma(y) and t (f sigma(y)) t^{-1} are both in T, which is abelian
        sets = []
        for _ in range(2):
            found = set()
            for gv in itertools.product(pts, repeat=len(G.generators)):
                vals = extend_cocycle_generic(G, list(gv), lambda s, y: s, op, zero)
                if vals is not None:
                    found.add(tuple(vals))
            sets.append(found)
        del t, f
        return sets[0] == sets[1]
    level = level or sigma.gamma.order
    if not t.is_diagonal():
        raise ValidationError("t must be a torus element")
    fs = [f.apply(X) for X in sigma.images]
    m = t.m * fs[0].m // _gcd(t.m, fs[0].m)
    tt = t.to_conductor(m)
    tfs = [X.to_conductor(m).conjugate_by(tt) for X in fs]
    k1, z1 = _cocycles_sl2(sigma, f, level, fs_override=[X.to_conductor(m) for X in fs])
    k2, z2 = _cocycles_sl2(sigma, f, level, fs_override=tfs)
    return k1 == k2 and set(z1) == set(z2)


@dataclass
class BijectionReport:
    orbit_count: int
    h1_order: int
    c_size: int
    injective_in_c: int
    kind: str
    level: int

    @property
    def equal(self):
        return self.orbit_count == self.h1_order


def orbit_h1_bijection_check(sigma, f=None, tau=None, level=None) -> BijectionReport:
    """Count ``C_{sigma,f,tau} / T^{f sigma}`` and ``|H^1|`` independently.

    The left side is enumerated from matrices (or torus points) and orbits
    are taken under actual conjugation by the finite group standing in for
    ``T^{f sigma}`` (``{+-1}`` or ``D_level``).  The right side comes from
    ``cohom.h1`` on the corresponding integer module.  Every cocycle is
    allowed, so C may contain non-injective maps; their number is
    reported separately.
    """
    G = sigma.gamma
    tau = tuple(tau) if tau is not None else tuple(G.elements)
    if isinstance(sigma, TorusEmbedding):
        f = f or TorusSliceAut.identity(sigma.rs.rank)
        level = level or G.order
        n = sigma.rs.rank
        pts = [tuple(Fraction(c, level) for c in v) for v in itertools.product(range(level), repeat=n)]
        zero = (Fraction(0),) * n

        def op(a, b):
            return tuple(_frac_mod1(p + q) for p, q in zip(a, b))
        fs = [f.apply(p) for p in sigma.images]
        C = set()
        for gv in itertools.product(pts, repeat=len(G.generators)):
            vals = extend_cocycle_generic(G, list(gv), lambda s, y: s, op, zero)
            if vals is None:
                continue
            eta = [None] * G.order
            for x in G.elements:
                eta[tau[x]] = op(fs[x], vals[x])
            C.add(tuple(eta))
        # T is abelian, so conjugation is trivial and every orbit is a point
        orbits = len(C)
        inj = sum(1 for eta in C if len(set(eta)) == G.order)
        mod = GammaModule(G, FinAbGroup((level,) * n) if level > 1 else FinAbGroup(()))
        return BijectionReport(orbits, h1(mod).order, len(C), inj, "full_torus", level)
    f = f or SliceAut(0, CycNum.rational(1))
    level = level or G.order
    kind, Z = _cocycles_sl2(sigma, f, level)
    fs = [f.apply(X) for X in sigma.images]
    m = level
    for X in fs:
        m = m * X.m // _gcd(m, X.m)
    fs = [X.to_conductor(m) for X in fs]
    C = set()
    for v in Z:
        eta = [None] * G.order
        for x in G.elements:
            eta[tau[x]] = fs[x] * v[x]
        C.add(tuple(eta))
    ident = Sl2Elt.identity().to_conductor(m)
    acting = [ident, -ident] if kind == "center_only" else [_torsion_diag(level, k, m) for k in range(level)]
    remaining = set(C)
    orbits = 0
    while remaining:
        eta = remaining.pop()
        orbits += 1
        for t in acting:
            remaining.discard(tuple(X.conjugate_by(t) for X in eta))
    inj = sum(1 for eta in C if len(set(eta)) == G.order)
    if kind == "center_only":
        mod = GammaModule(G, FinAbGroup((2,)))
    else:
        # t <- y on D_level: identity for diagonal f sigma(y), inversion for antidiagonal
        mats = [[[1 if X.is_diagonal() else -1]] for X in fs]
        mod = GammaModule(G, FinAbGroup((level,)) if level > 1 else FinAbGroup(()),
                          mats if level > 1 else None)
    return BijectionReport(orbits, h1(mod).order, len(C), inj, kind, level)


# ---------------------------------------------------------------------------
# Infinite family


def _rationals_of_height(h):
    """Nonzero rationals p/q in lowest terms with max(|p|, q) == h."""
    out = set()
    for q in range(1, h + 1):
        for p in range(-h, h + 1):
            if p and _gcd(abs(p), q) == 1 and max(abs(p), q) == h:
                out.add(Fraction(p, q))
    return sorted(out)


def conjugator_walk(seed=0):
    """Deterministic spiral over ``g = [[1, b], [c, 1 + b c]]`` by height shells."""
    rng = random.Random(seed)
    seen = set()
    h = 1
    while True:
        rs = [r for k in range(1, h + 1) for r in _rationals_of_height(k)]
        shell = [(b, c) for b in rs for c in rs if (b, c) not in seen]
        rng.shuffle(shell)
        for bc in shell:
            seen.add(bc)
            b, c = bc
            yield Sl2Elt(1, b, c, 1 + b * c)
        h += 1


@dataclass
class FamilyReport:
    members: list
    conjugators: list
    certificates: dict  # (i, j) -> Certificate
    classifications: list
    examined: int
    budget: int
    complete: bool

    def as_dict(self):
        return {
            "count": len(self.members),
            "complete": self.complete,
            "examined": self.examined,
            "budget": self.budget,
            "conjugators": [[[str(e) for e in r] for r in g.rows()] for g in self.conjugators],
            "generator_images": [[[str(e) for e in r] for r in s.generator_images[0].rows()]
                                 if getattr(s, "generator_images", None) else None
                                 for s in self.members],
            "classifications": [c.as_dict() for c in self.classifications],
            "pairs": {f"{i},{j}": c.as_dict() for (i, j), c in sorted(self.certificates.items())},
        }


def infinite_family(sigma0_gens, k, ell=5, seed=0, budget=FAMILY_BUDGET, workers=1) -> FamilyReport:
    """Pairwise non-equivalent conjugates ``g sigma0 g^{-1}`` with non-monomial image."""
    from .cartan import build_root_system
    from .datum import SubgroupDatum, classify

    base = Sl2Embedding.from_matrix_generators(sigma0_gens)
    if all(X.is_central() for X in base.images):
        raise ValidationError("sigma0(Gamma) must not be central")
    members, conjs, certs = [], [], {}
    examined = 0
    walk = conjugator_walk(seed)
    while len(members) < k and examined < budget:
        g = next(walk)
        examined += 1
        cand = base.conjugate(g)
        cand.generator_images = [X.conjugate_by(g) for X in base.generator_images]
        if cand.is_monomial():
            continue
        new_certs = {}
        ok = True
        for i, other in enumerate(members):
            res = decide_equivalence_sl2(other, cand)
            if res.equivalent:
                ok = False
                break
            new_certs[(i, len(members))] = res.certificate
        if ok:
            certs.update(new_certs)
            members.append(cand)
            conjs.append(g)
    rs = build_root_system("A1")
    reports = []
    for s in members:
        d = SubgroupDatum(rs, ell, {1}, {1}, (), "matrix", sigma_matrices=tuple(s.generator_images))
        reports.append(classify(d))
    return FamilyReport(members, conjs, certs, reports, examined, budget, len(members) >= k)
