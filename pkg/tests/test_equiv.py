from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qsubgroups.cartan import build_root_system
from qsubgroups.cohom import FiniteGroup
from qsubgroups.cyclo import CycNum, Sl2Elt
from qsubgroups.datum import SubgroupDatum
from qsubgroups.equiv import (EQUIVALENT, NOT_APPLICABLE, NOT_EQUIVALENT, SLICE_NOTE, SliceAut, Sl2Embedding,
                              TorusEmbedding, conjugator_walk, decide_datum_equivalence, decide_equivalence_sl2,
                              decide_equivalence_torus, infinite_family, orbit_h1_bijection_check, t_f_sigma,
                              to_sl2, torus_slice, twist_invariance_check)
from qsubgroups.errors import ValidationError

F = Fraction
rationals = st.fractions(min_value=-4, max_value=4, max_denominator=3).filter(lambda x: x != 0)


def emb(*gens):
    return Sl2Embedding.from_matrix_generators(list(gens))


def conj_family(q, b, c):
    g = Sl2Elt(1, b, c, 1 + b * c)
    return emb(Sl2Elt.diag(CycNum.zeta(q)).conjugate_by(g))


@settings(max_examples=60, deadline=None)
@given(st.integers(0, 1), rationals, st.integers(0, 1), rationals, rationals, rationals)
def test_slice_aut_algebra(w1, l1, w2, l2, b, c):
    f1, f2 = SliceAut(w1, CycNum.rational(l1)), SliceAut(w2, CycNum.rational(l2))
    X = Sl2Elt(1, b, c, 1 + b * c)
    assert f1.compose(f2).apply(X) == f1.apply(f2.apply(X))
    assert f1.inverse().apply(f1.apply(X)) == X
    n = Sl2Elt.weyl()
    assert SliceAut(1).apply(X) == X.conjugate_by(n)


def test_slice_aut_is_torus_conjugation():
    a = CycNum.zeta(8) * 3
    t = Sl2Elt.diag(a)
    X = Sl2Elt(2, 3, 5, 8)
    assert SliceAut(0, a * a).apply(X) == X.conjugate_by(t)


def test_t_f_sigma_kinds():
    mono = emb(Sl2Elt.diag(CycNum.zeta(4)), Sl2Elt.weyl())
    assert t_f_sigma(SliceAut(), mono).kind == "full_T"
    off = conj_family(3, F(1), F(1))
    kind = t_f_sigma(SliceAut(), off)
    assert kind.kind == "center_only" and len(kind.witnesses) == 2
    e = TorusEmbedding.from_generators(FiniteGroup.cyclic(3), build_root_system("A2"), [(F(1, 3), F(1, 3))])
    assert t_f_sigma(None, e).kind == "full_torus"


def test_conjugate_by_torus_is_equivalent_and_witness_algebra():
    s1 = conj_family(5, F(2), F(-1, 3))
    s2 = s1.conjugate(Sl2Elt.diag(CycNum.zeta(12) * 2))
    s3 = s2.conjugate(Sl2Elt.weyl())
    r12, r23 = decide_equivalence_sl2(s1, s2), decide_equivalence_sl2(s2, s3)
    assert r12.verdict == r23.verdict == EQUIVALENT
    assert r12.detail == SLICE_NOTE
    assert r12.witness.replay(s1, s2) and r23.witness.replay(s2, s3)
    inv = r12.witness.inverse(s1, s2)
    assert inv.replay(s2, s1)
    comp = r12.witness.compose(r23.witness)
    assert comp.replay(s1, s3)


def test_sign_twist_by_central_character():
    # x has order 4, so g -> -x is sigma twisted by the character Z/4 -> {+-1}
    x = Sl2Elt.diag(CycNum.zeta(4)).conjugate_by(Sl2Elt(1, 1, 1, 2))
    s1, s2 = emb(x), emb(-x)
    res = decide_equivalence_sl2(s1, s2)
    assert res.equivalent and res.witness.replay(s1, s2)
    # order 6: -x has order 3, so the abstract groups already differ
    y = Sl2Elt.diag(CycNum.zeta(6)).conjugate_by(Sl2Elt(1, 1, 1, 2))
    res = decide_equivalence_sl2(emb(y), emb(-y))
    assert res.verdict == NOT_EQUIVALENT and "isom" in res.certificate.reason


def test_not_equivalent_certificates():
    a, b = conj_family(3, F(1), F(1)), conj_family(3, F(2), F(1))
    res = decide_equivalence_sl2(a, b)
    assert res.verdict == NOT_EQUIVALENT
    c = res.certificate
    assert c.slice_count == 2 and c.tau_count == 2 and c.v_count == 1 and c.combinations == 4
    assert len(c.digest) == 64 and "modeled automorphism slice" in c.note
    # deterministic digest
    assert decide_equivalence_sl2(a, b).certificate.digest == c.digest
    diag = emb(Sl2Elt.diag(CycNum.zeta(3)))
    assert decide_equivalence_sl2(a, diag).verdict == NOT_EQUIVALENT
    other = emb(Sl2Elt.diag(CycNum.zeta(5)))
    assert decide_equivalence_sl2(diag, other).certificate.tau_count == 0


def test_full_T_cases():
    q8 = emb(Sl2Elt.diag(CycNum.zeta(4)), Sl2Elt.weyl())
    q8b = emb(Sl2Elt.diag(CycNum.zeta(4)), Sl2Elt.weyl() * Sl2Elt.diag(CycNum.zeta(8)))
    res = decide_equivalence_sl2(q8, q8b)
    assert res.equivalent and res.witness.replay(q8, q8b)
    d3 = emb(Sl2Elt.diag(CycNum.zeta(3)))
    d3inv = emb(Sl2Elt.diag(CycNum.zeta(3, 2)))
    assert decide_equivalence_sl2(d3, d3inv).equivalent


def test_torus_decider():
    rs = build_root_system("A2")
    G = FiniteGroup.cyclic(3)
    e1 = TorusEmbedding.from_generators(G, rs, [(F(1, 3), F(2, 3))])
    e2 = TorusEmbedding.from_generators(G, rs, [(F(2, 3), F(1, 3))])
    e3 = TorusEmbedding.from_generators(G, rs, [(F(1, 3), F(0))])
    for a, b in ((e1, e2), (e1, e3), (e2, e3)):
        res = decide_equivalence_torus(a, b)
        assert res.equivalent and res.witness.replay(a, b)
        assert res.witness.inverse(a, b).replay(b, a)
    r12, r23 = decide_equivalence_torus(e1, e2), decide_equivalence_torus(e2, e3)
    assert r12.witness.compose(r23.witness).replay(e1, e3)
    H = FiniteGroup.cyclic(2)
    e4 = TorusEmbedding.from_generators(H, rs, [(F(1, 2), F(0))])
    assert decide_equivalence_torus(e1, e4).verdict == NOT_EQUIVALENT
    assert len(torus_slice(rs)) == 12
    with pytest.raises(ValidationError):
        TorusEmbedding.from_generators(G, rs, [(F(1, 2), F(0))])


def test_to_sl2():
    e = TorusEmbedding.from_generators(FiniteGroup.cyclic(5), build_root_system("A1"), [(F(2, 5),)])
    s = to_sl2(e)
    assert s.images[1] == Sl2Elt.diag(CycNum.zeta(5, 2))


def test_datum_equivalence_applicability():
    A1 = build_root_system("A1")
    d1 = SubgroupDatum(A1, 5, {1}, {1}, (), "abelian", (3,), [(F(1, 3),)])
    d2 = SubgroupDatum(A1, 5, {1}, {1}, (), "abelian", (3,), [(F(2, 3),)])
    assert decide_datum_equivalence(d1, d2).equivalent
    borel = SubgroupDatum(A1, 5, {1}, (), (), "abelian", (3,), [(F(1, 3),)])
    assert decide_datum_equivalence(d1, borel).verdict == NOT_APPLICABLE
    A2 = build_root_system("A2")
    e = SubgroupDatum(A2, 3, {1, 2}, {1, 2}, (), "abelian", (3,), [(F(1, 3), F(0))])
    assert decide_datum_equivalence(e, e).verdict == NOT_APPLICABLE  # 3 | det DC


def test_twist_invariance():
    t = Sl2Elt.diag(CycNum.zeta(8) * 2)
    assert twist_invariance_check(SliceAut(), t, conj_family(3, F(1), F(1)), 3)
    assert twist_invariance_check(SliceAut(1, CycNum.zeta(5)), t, emb(Sl2Elt.diag(CycNum.zeta(4)), Sl2Elt.weyl()), 4)
    e = TorusEmbedding.from_generators(FiniteGroup.cyclic(2), build_root_system("A2"), [(F(1, 2), F(0))])
    assert twist_invariance_check(None, (F(1, 3), F(0)), e, 2)
    with pytest.raises(ValidationError):
        twist_invariance_check(SliceAut(), Sl2Elt.weyl(), conj_family(3, F(1), F(1)), 3)


def test_bijection_examples():
    assert orbit_h1_bijection_check(conj_family(3, F(1), F(1))).orbit_count == 1
    rep = orbit_h1_bijection_check(conj_family(4, F(1), F(1)))
    assert rep.kind == "center_only" and rep.orbit_count == rep.h1_order == 2
    rep = orbit_h1_bijection_check(emb(Sl2Elt.diag(CycNum.zeta(4)), Sl2Elt.weyl()), level=4)
    assert rep.equal and rep.c_size >= rep.orbit_count


def test_conjugator_walk_is_deterministic():
    a = [next(w) for w in [conjugator_walk(3)] for _ in range(20)]
    w1, w2 = conjugator_walk(3), conjugator_walk(3)
    assert [next(w1) for _ in range(20)] == [next(w2) for _ in range(20)]
    assert all(g.det() == 1 for g in a)


def test_family_small_and_budget():
    fam = infinite_family([Sl2Elt.diag(CycNum.zeta(3))], 4, ell=5, seed=1)
    assert fam.complete and len(fam.certificates) == 6
    again = infinite_family([Sl2Elt.diag(CycNum.zeta(3))], 4, ell=5, seed=1)
    assert [g.entries() for g in fam.conjugators] == [g.entries() for g in again.conjugators]
    short = infinite_family([Sl2Elt.diag(CycNum.zeta(3))], 4, ell=5, seed=1, budget=1)
    assert not short.complete and short.examined == 1
    with pytest.raises(ValidationError):
        infinite_family([-Sl2Elt.identity()], 2)
