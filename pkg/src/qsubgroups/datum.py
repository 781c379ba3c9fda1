"""Subgroup data (I+, I-, N, Gamma, sigma, delta) and what can be computed from them.

Conventions
-----------
* ``iplus`` and ``iminus`` are sets of simple-root indices (1-based); the
  roots in I- are the negatives of the named simple roots.
* N lives in the character group of ``T_{I^c} = (Z/ell)^{|I^c|}``; character
  coordinates follow the increasing order of the indices in ``I^c``.
* Torus points are vectors in ``(Q/Z)^n`` in coroot coordinates: the vector
  ``c`` stands for ``prod_j alpha_j^vee(exp(2 pi i c_j))``.
* Characters of Gamma (for delta) are given by their values in ``Q/Z`` on
  the generators of Gamma.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from functools import cached_property
from math import gcd

from .cartan import ParabolicSelection, RootSystem, dynkin_components, parabolic
from .cohom import FiniteGroup
from .cyclo import CLOSURE_CAP, CycNum, FinMatrixGroup, Sl2Elt, generate_group
from .errors import ValidationError
from .finab import FinAbGroup, GroupHom, Subgroup, annihilator, kernel_rows, lcm

GAMMA_KINDS = ("abelian", "matrix", "torus")


def frac_mod1(x):
    x = Fraction(x)
    return x - (x.numerator // x.denominator)


@dataclass
class SubgroupDatum:
    root_system: RootSystem
    ell: int
    iplus: frozenset = frozenset()
    iminus: frozenset = frozenset()
    N_generators: tuple = ()
    gamma_kind: str = "abelian"
    gamma_factors: tuple = ()  # abelian Gamma, invariant factors
    sigma_torus: tuple = ()  # abelian: one torus point per generator
    sigma_matrices: tuple = ()  # matrix: Sl2Elt generators
    delta_images: tuple = ()  # per N generator: Q/Z values on Gamma generators
    closure_cap: int = CLOSURE_CAP
    name: str = ""

    def __post_init__(self):
        self.iplus = frozenset(self.iplus)
        self.iminus = frozenset(self.iminus)
        self.N_generators = tuple(tuple(int(a) for a in g) for g in self.N_generators)
        self.gamma_factors = tuple(self.gamma_factors)
        self.sigma_torus = tuple(tuple(frac_mod1(c) for c in p) for p in self.sigma_torus)
        self.sigma_matrices = tuple(self.sigma_matrices)
        self.delta_images = tuple(tuple(frac_mod1(c) for c in d) for d in self.delta_images)

    # -- derived structure (valid after validate())
    @cached_property
    def parabolic(self) -> ParabolicSelection:
        return parabolic(self.root_system, self.iplus, self.iminus)

    @property
    def I_c(self):
        return sorted(self.parabolic.I_c)

    @cached_property
    def torus_Ic(self) -> FinAbGroup:
        return FinAbGroup((self.ell,) * len(self.I_c))

    @cached_property
    def N(self) -> Subgroup:
        return Subgroup(self.torus_Ic.invariant_factors, self.N_generators)

    @cached_property
    def N_perp(self) -> Subgroup:
        return annihilator(self.N, self.torus_Ic)

    @property
    def is_finite(self):
        return self.gamma_kind != "torus"

    @cached_property
    def matrix_group(self) -> FinMatrixGroup:
        return generate_group(self.sigma_matrices, cap=self.closure_cap)

    @cached_property
    def gamma_abelian(self) -> FinAbGroup:
        return FinAbGroup(self.gamma_factors)

    @cached_property
    def gamma_group(self) -> FiniteGroup:
        """Gamma as a multiplication table."""
        if self.gamma_kind == "abelian":
            return FiniteGroup.from_abelian(self.gamma_abelian)
        if self.gamma_kind == "matrix":
            return self.matrix_group.abstract()
        raise ValidationError("Gamma is infinite")

    @property
    def gamma_order(self):
        if self.gamma_kind == "abelian":
            return self.gamma_abelian.order
        if self.gamma_kind == "matrix":
            return self.matrix_group.order
        return None

    @property
    def gamma_is_abelian(self):
        if self.gamma_kind == "abelian":
            return True
        if self.gamma_kind == "matrix":
            return self.gamma_group.is_abelian
        return True

    @property
    def gamma_generator_count(self):
        if self.gamma_kind == "abelian":
            return len(self.gamma_factors)
        if self.gamma_kind == "matrix":
            return len(self.sigma_matrices)
        return 0

    def sigma_in_T(self):
        """Syntactic test: torus-valued data and diagonal generators lie in T."""
        if self.gamma_kind == "matrix":
            return all(g.is_diagonal() for g in self.sigma_matrices)
        return True

    def sigma_matrix_images(self):
        """SL2 images of the Gamma generators (type A1 only)."""
        if self.gamma_kind == "matrix":
            return list(self.sigma_matrices)
        if self.gamma_kind == "abelian" and self.root_system.code == "A1":
            return [torus_point_to_sl2(p) for p in self.sigma_torus]
        raise ValidationError("SL2 images exist only for type A1")

    # -- validation
    def issues(self):
        out = []
        rs = self.root_system
        ell = self.ell
        if not isinstance(ell, int) or ell < 3 or ell % 2 == 0:
            out.append("ℓ must be odd ≥ 3")
        elif rs.series == "G" and ell % 3 == 0:
            out.append("ℓ must not be divisible by 3 for type G2")
        n = rs.rank
        bad = sorted(i for i in self.iplus | self.iminus if not (isinstance(i, int) and 1 <= i <= n))
        if bad:
            out.append(f"simple root index out of range 1..{n}: {bad}")
            return out
        if self.gamma_kind not in GAMMA_KINDS:
            out.append(f"unknown gamma kind {self.gamma_kind!r}")
            return out
        if out:
            return out
        out += self._check_N()
        if self.gamma_kind == "abelian":
            out += self._check_sigma_torus()
        elif self.gamma_kind == "matrix":
            out += self._check_sigma_matrix()
        if not out:
            out += self._check_delta()
        return out

    def validate(self):
        problems = self.issues()
        if problems:
            raise ValidationError(problems)
        return self

    def _check_N(self):
        k = len(self.I_c)
        out = []
        for g in self.N_generators:
            if len(g) != k:
                out.append(f"N generator {list(g)} must have length |I^c| = {k}")
        return out

    def _check_sigma_torus(self):
        out = []
        try:
            A = self.gamma_abelian
        except ValidationError as e:
            return [f"gamma: {e}"]
        n = self.root_system.rank
        if len(self.sigma_torus) != A.rank:
            return [f"sigma needs one torus point per Gamma generator ({A.rank}), got {len(self.sigma_torus)}"]
        for k, (p, d) in enumerate(zip(self.sigma_torus, A.invariant_factors)):
            if len(p) != n:
                out.append(f"sigma image {k + 1} must have {n} coordinates")
            elif any((d * c).denominator != 1 for c in p):
                out.append(f"sigma image {k + 1} has order not dividing {d}: not a homomorphism")
        if out:
            return out
        h = self.sigma_hom()
        if h is not None and not h.is_injective():
            out.append("σ not injective")
        return out

    def sigma_hom(self):
        """sigma as a GroupHom Gamma -> (Z/E)^n, E the common denominator."""
        A = self.gamma_abelian
        n = self.root_system.rank
        E = lcm(A.exponent, *(c.denominator for p in self.sigma_torus for c in p))
        if E == 1:
            return None
        cod = FinAbGroup((E,) * n)
        images = [tuple(int(c * E) for c in p) for p in self.sigma_torus]
        return GroupHom.from_images(A, cod, images)

    def _check_sigma_matrix(self):
        if self.root_system.code != "A1":
            return ["matrix-valued sigma is supported only for type A1 (G = SL2)"]
        if not self.sigma_matrices:
            return ["matrix gamma needs at least one generator"]
        out = []
        for k, g in enumerate(self.sigma_matrices):
            if g.det() != 1:
                out.append(f"generator {k + 1} does not have determinant 1")
        if out:
            return out
        up, down = 1 in self.iplus, 1 in self.iminus
        for k, g in enumerate(self.sigma_matrices):
            if not up and not down and not g.is_diagonal():
                out.append(f"generator {k + 1} is not in L = T")
            elif up and not down and not g.is_upper():
                out.append(f"generator {k + 1} is not in L = B+ (upper triangular)")
            elif down and not up and not g.is_lower():
                out.append(f"generator {k + 1} is not in L = B- (lower triangular)")
        if out:
            return out
        self.matrix_group  # a cap hit propagates: finiteness is undecided, not invalid
        return out

    def _check_delta(self):
        out = []
        if not self.delta_images:
            return out
        if len(self.delta_images) != len(self.N_generators):
            return [f"delta needs one character per N generator ({len(self.N_generators)}), "
                    f"got {len(self.delta_images)}"]
        if not self.is_finite:
            return ["delta for infinite Gamma is not supported"]
        r = self.gamma_generator_count
        for j, chi in enumerate(self.delta_images):
            if len(chi) != r:
                out.append(f"delta image {j + 1} needs {r} values, one per Gamma generator")
            elif not self._is_character(chi):
                out.append(f"delta image {j + 1} does not define a character of Gamma")
        if out:
            return out
        # delta must kill the relations among the N generators
        gens = self.N_generators
        if gens and self.I_c:
            M = [[g[i] for g in gens] for i in range(len(self.I_c))]
            rels = kernel_rows(M, (0,) * len(gens), (self.ell,) * len(self.I_c))
            for rel in rels:
                for k in range(r):
                    s = sum(a * chi[k] for a, chi in zip(rel, self.delta_images))
                    if frac_mod1(s) != 0:
                        out.append("δ ill-defined: images do not respect the relations of N")
                        return out
        return out

    def _is_character(self, chi):
        if self.gamma_kind == "abelian":
            return all((d * c).denominator == 1 for d, c in zip(self.gamma_factors, chi))
        # nonabelian finite: extend along the Cayley graph of the matrix generators
        mg = self.matrix_group
        E = lcm(*(c.denominator for c in chi))
        vals = [int(c * E) % E for c in chi]
        right = {}
        for i, g in enumerate(mg.elements):
            for k, h in enumerate(mg.generators):
                right[(i, k)] = mg.index(g * h)
        value = {0: 0}
        stack = [0]
        while stack:
            i = stack.pop()
            for k in range(len(vals)):
                j = right[(i, k)]
                v = (value[i] + vals[k]) % E
                if j in value:
                    if value[j] != v:
                        return False
                else:
                    value[j] = v
                    stack.append(j)
        return True

    @property
    def ell_coprime_det(self):
        return gcd(self.ell, self.root_system.det_dc) == 1


def torus_point_to_sl2(p):
    """A1 torus point ``c`` -> ``diag(zeta_q^a, zeta_q^-a)`` with ``c = a/q``."""
    c = frac_mod1(p[0])
    q = c.denominator
    z = CycNum.zeta(q, c.numerator)
    return Sl2Elt.diag(z)


# ---------------------------------------------------------------------------
# Reports


@dataclass(frozen=True)
class GammaTilde:
    """Isomorphism data for ``Gamma x N^perp``.

    For abelian Gamma the invariant factors are a complete invariant.  For
    nonabelian Gamma we record a fingerprint of Gamma (complete for the
    small orders met here only in the sense of distinguishing, never of
    identifying) together with the invariants of N^perp.
    """

    order: int | None
    abelian: bool
    invariant_factors: tuple | None = None
    gamma_fingerprint: tuple | None = None
    n_perp_factors: tuple = ()

    def key(self):
        if self.abelian:
            return (self.order, True, self.invariant_factors, self.gamma_fingerprint)
        return (self.order, False, self.gamma_fingerprint, self.n_perp_factors)

    def as_dict(self):
        return {
            "order": self.order,
            "abelian": self.abelian,
            "invariant_factors": list(self.invariant_factors) if self.invariant_factors is not None else None,
            "gamma_fingerprint": [list(x) if isinstance(x, tuple) else x
                                  for x in self.gamma_fingerprint] if self.gamma_fingerprint else None,
            "n_perp_factors": list(self.n_perp_factors),
        }


@dataclass(frozen=True)
class L0Descriptor:
    """Isomorphism invariants of the Lie algebra l_0 plus informational index sets."""

    lie_type: str
    dim_l0: int
    derived_dim: int
    levi_type: tuple
    radical_dim: int
    iplus: tuple = field(compare=False, default=())
    iminus: tuple = field(compare=False, default=())
    psi_plus: int = field(compare=False, default=0)
    psi_minus: int = field(compare=False, default=0)

    def key(self):
        return (self.dim_l0, self.derived_dim, self.levi_type, self.radical_dim)

    def as_dict(self):
        return {
            "lie_type": self.lie_type,
            "dim_l0": self.dim_l0,
            "derived_dim": self.derived_dim,
            "levi_type": list(self.levi_type),
            "radical_dim": self.radical_dim,
            "iplus": list(self.iplus),
            "iminus": list(self.iminus),
            "psi_plus": self.psi_plus,
            "psi_minus": self.psi_minus,
        }


@dataclass
class ClassificationReport:
    semisimple: bool
    pointed_excluded: bool
    dual_pointed_excluded: bool
    genuinely_new: bool
    dim_A: int | str
    dim_H: int
    gamma_tilde: GammaTilde
    l0: L0Descriptor
    ell_coprime_det: bool

    def as_dict(self):
        return {
            "semisimple": self.semisimple,
            "pointed_excluded": self.pointed_excluded,
            "dual_pointed_excluded": self.dual_pointed_excluded,
            "genuinely_new": self.genuinely_new,
            "dim_A": self.dim_A,
            "dim_H": self.dim_H,
            "gamma_tilde": self.gamma_tilde.as_dict(),
            "l0": self.l0.as_dict(),
            "ell_coprime_det": self.ell_coprime_det,
        }


def validate(d: SubgroupDatum) -> SubgroupDatum:
    return d.validate()


def dimension(d: SubgroupDatum):
    """``(dim_H, dim_A)`` with ``dim_H = ell^dim_l / |N|`` and ``dim_A = |Gamma| dim_H``."""
    num = d.ell ** d.parabolic.dim_l
    n_order = d.N.order
    if num % n_order:
        raise AssertionError(f"internal: |N| = {n_order} does not divide {num}")  # bug sentinel
    dim_H = num // n_order
    if not d.is_finite:
        return dim_H, "infinite"
    return dim_H, d.gamma_order * dim_H


def gamma_tilde(d: SubgroupDatum) -> GammaTilde:
    perp = d.N_perp.structure()
    if not d.is_finite:
        return GammaTilde(None, True, None, ("torus", d.root_system.rank), perp.invariant_factors)
    order = d.gamma_order * d.N_perp.order
    if d.gamma_is_abelian:
        G = d.gamma_abelian if d.gamma_kind == "abelian" else d.gamma_group.abelian_invariants()
        full = G.direct_sum(perp)
        return GammaTilde(order, True, full.invariant_factors, None, perp.invariant_factors)
    fp = d.gamma_group.fingerprint()
    fingerprint = (fp["order"], tuple(sorted(fp["element_orders"].items())),
                   tuple(fp["abelianization"]), fp["center_order"], fp["classes"])
    return GammaTilde(order, False, None, fingerprint, perp.invariant_factors)


def l0_descriptor(d: SubgroupDatum) -> L0Descriptor:
    p = d.parabolic
    rs = d.root_system
    J = p.meet
    derived = len(p.psi_plus) + len(p.psi_minus) + len(J)
    comps = dynkin_components(rs, J)
    levi_type = tuple(sorted(t for t, _ in comps))
    levi_dim = sum(_dim_of_type(t) for t in levi_type)
    return L0Descriptor(
        lie_type=rs.code,
        dim_l0=p.dim_l0,
        derived_dim=derived,
        levi_type=levi_type,
        radical_dim=p.dim_l0 - levi_dim,
        iplus=tuple(sorted(p.iplus)),
        iminus=tuple(sorted(p.iminus)),
        psi_plus=len(p.psi_plus),
        psi_minus=len(p.psi_minus),
    )


def _dim_of_type(code):
    from .cartan import build_root_system
    return build_root_system(code).dim


def invariants(d: SubgroupDatum):
    return gamma_tilde(d), l0_descriptor(d)


def classify(d: SubgroupDatum) -> ClassificationReport:
    d.validate()
    p = d.parabolic
    finite = d.is_finite
    meet = bool(p.meet)
    in_T = d.sigma_in_T()
    semisimple = not p.iplus and not p.iminus and finite
    pointed_excluded = meet or (finite and not d.gamma_is_abelian)
    dual_excluded = finite and not in_T
    new = finite and meet and not in_T
    dim_H, dim_A = dimension(d)
    gt, l0 = invariants(d)
    return ClassificationReport(semisimple, pointed_excluded, dual_excluded, new,
                                dim_A, dim_H, gt, l0, d.ell_coprime_det)


def consistency_dim(d: SubgroupDatum):
    """``|Gamma~| * ell^dim_l0`` computed independently of ``dimension``."""
    gt = gamma_tilde(d)
    return gt.order * d.ell ** d.parabolic.dim_l0
