from fractions import Fraction

import pytest

from qsubgroups.cartan import build_root_system
from qsubgroups.cyclo import CycNum, Sl2Elt
from qsubgroups.datum import SubgroupDatum, classify, consistency_dim, dimension, gamma_tilde, l0_descriptor
from qsubgroups.errors import ValidationError

A1, A2 = build_root_system("A1"), build_root_system("A2")
F = Fraction


def sl2_full(order, point=None):
    return SubgroupDatum(A1, 5, {1}, {1}, (), "abelian", (order,), [(point or F(1, order),)])


def test_dimension_values():
    assert dimension(sl2_full(5)) == (125, 625)
    assert dimension(sl2_full(3)) == (125, 375)
    d = SubgroupDatum(A2, 3, (), (), ((1, 0),), "abelian", (3,), [(F(0), F(1, 3))])
    # dim l = 2 (torus), |N| = 3
    assert dimension(d) == (3, 9)
    assert consistency_dim(d) == 9


def test_gamma_tilde_with_n_perp():
    d = SubgroupDatum(A2, 3, (), (), ((1, 0),), "abelian", (2,), [(F(1, 2), F(0))])
    gt = gamma_tilde(d)
    assert gt.order == 6 and gt.invariant_factors == (6,)
    full = SubgroupDatum(A2, 3, (), (), ((1, 0), (0, 1)), "abelian", (2,), [(F(1, 2), F(0))])
    assert gamma_tilde(full).order == 2


def test_flags():
    r = classify(sl2_full(5))
    assert r.pointed_excluded and not r.dual_pointed_excluded and not r.genuinely_new and not r.semisimple
    g = Sl2Elt(1, 1, 1, 2)
    x = Sl2Elt.diag(CycNum.zeta(3)).conjugate_by(g)
    d = SubgroupDatum(A1, 5, {1}, {1}, (), "matrix", sigma_matrices=(x,))
    r = classify(d)
    assert r.genuinely_new and r.dual_pointed_excluded and r.dim_A == 375
    semi = SubgroupDatum(A1, 5, (), (), (), "abelian", (5,), [(F(1, 5),)])
    assert classify(semi).semisimple
    q8 = SubgroupDatum(A1, 5, {1}, {1}, (), "matrix",
                       sigma_matrices=(Sl2Elt.diag(CycNum.zeta(4)), Sl2Elt.weyl()))
    r = classify(q8)
    assert r.pointed_excluded and r.dim_A == 8 * 125 and not r.gamma_tilde.abelian


def test_torus_gamma_is_infinite():
    d = SubgroupDatum(A1, 5, {1}, (), (), "torus")
    r = classify(d)
    assert r.dim_A == "infinite" and not r.semisimple


def test_l0_descriptor():
    rs = build_root_system("A3")
    d = SubgroupDatum(rs, 5, {1, 2}, {2, 3}, (), "abelian", (), [])
    l0 = l0_descriptor(d)
    assert l0.levi_type == ("A1",)
    assert l0.derived_dim == 3 + 3 + 1
    assert l0.radical_dim == l0.dim_l0 - 3


@pytest.mark.parametrize("kwargs,needle", [
    (dict(ell=4), "odd"),
    (dict(ell=5, sigma=[(F(1, 3),)]), "not dividing"),
    (dict(ell=5, sigma=[(F(0),)]), "σ not injective"),
    (dict(ell=5, iplus={2}), "out of range"),
])
def test_validation_messages(kwargs, needle):
    sigma = kwargs.pop("sigma", [(F(1, 5),)])
    iplus = kwargs.pop("iplus", {1})
    d = SubgroupDatum(A1, kwargs["ell"], iplus, {1}, (), "abelian", (5,), sigma)
    with pytest.raises(ValidationError) as e:
        d.validate()
    assert any(needle in msg for msg in e.value.issues)


def test_matrix_sigma_must_lie_in_L():
    up = Sl2Elt.diag(CycNum.zeta(3)).conjugate_by(Sl2Elt(1, 1, 0, 1))
    low = Sl2Elt.diag(CycNum.zeta(3)).conjugate_by(Sl2Elt(1, 0, 1, 1))
    SubgroupDatum(A1, 5, {1}, (), (), "matrix", sigma_matrices=(up,)).validate()
    with pytest.raises(ValidationError):
        SubgroupDatum(A1, 5, {1}, (), (), "matrix", sigma_matrices=(low,)).validate()
    with pytest.raises(ValidationError):
        SubgroupDatum(A2, 5, {1}, (), (), "matrix", sigma_matrices=(up,)).validate()


def test_delta_relations():
    # N = <(1, 0), (2, 0)> in (Z/3)^2: the relation 2*g1 - g2 = 0 must be respected
    d = SubgroupDatum(A2, 3, (), (), ((1, 0), (2, 0)), "abelian", (3,), [(F(1, 3), F(0))],
                      delta_images=((F(1, 3),), (F(1, 3),)))
    with pytest.raises(ValidationError) as e:
        d.validate()
    assert any("δ ill-defined" in m for m in e.value.issues)
    ok = SubgroupDatum(A2, 3, (), (), ((1, 0), (2, 0)), "abelian", (3,), [(F(1, 3), F(0))],
                       delta_images=((F(1, 3),), (F(2, 3),)))
    ok.validate()


def test_coprimality_flag():
    assert sl2_full(5).ell_coprime_det
    assert not SubgroupDatum(A2, 3, {1, 2}, {1, 2}, (), "abelian", (), []).ell_coprime_det
    g2 = build_root_system("G2")
    with pytest.raises(ValidationError):
        SubgroupDatum(g2, 9, (), (), (), "abelian", (), []).validate()
