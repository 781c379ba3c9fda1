import itertools
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from qsubgroups.cohom import (Cochain1, FiniteGroup, GammaModule, all_homs_to_abelian, d0, d1, h1,
                              h1_torsion_reduction, torsion_h1_at_level)
from qsubgroups.errors import CapExceeded, ValidationError
from qsubgroups.finab import FinAbGroup


def test_group_constructors():
    assert FiniteGroup.dihedral(4).order == 8 and not FiniteGroup.dihedral(4).is_abelian
    Q = FiniteGroup.quaternion()
    assert Q.order == 8 and len(Q.center()) == 2
    assert sorted(Q.element_order(x) for x in Q.elements) == [1, 2, 4, 4, 4, 4, 4, 4]
    S3 = FiniteGroup.symmetric(3)
    assert S3.conjugacy_class_count() == 3
    assert S3.is_isomorphic(FiniteGroup.dihedral(3))
    assert not FiniteGroup.dihedral(4).is_isomorphic(Q)
    with pytest.raises(ValidationError):
        FiniteGroup([[0, 1], [0, 1]])


def test_automorphism_counts():
    assert len(FiniteGroup.quaternion().automorphisms()) == 24
    assert len(FiniteGroup.dihedral(4).automorphisms()) == 8
    assert len(FiniteGroup.cyclic(8).automorphisms()) == 4
    assert len(FiniteGroup.symmetric(3).automorphisms()) == 6


def test_abelianization():
    ab, _ = FiniteGroup.quaternion().abelianization()
    assert ab.invariant_factors == (2, 2)
    ab, _ = FiniteGroup.symmetric(3).abelianization()
    assert ab.invariant_factors == (2,)
    assert len(all_homs_to_abelian(FiniteGroup.dihedral(4), FinAbGroup((2,)))) == 4


@pytest.mark.parametrize("k,n", [(k, n) for k in range(1, 9) for n in range(1, 9)])
def test_trivial_cyclic_h1_is_gcd(k, n):
    mod = GammaModule(FiniteGroup.cyclic(k), FinAbGroup((n,)) if n > 1 else FinAbGroup(()))
    b, lin = h1(mod, method="brute"), h1(mod, method="linear")
    assert b.order == lin.order == gcd(k, n)
    assert sorted(r.values for r in b.representatives) == sorted(r.values for r in lin.representatives)


def test_inversion_action():
    mod = GammaModule(FiniteGroup.cyclic(2), FinAbGroup((3,)), [[[-1]]], on_generators=True)
    assert h1(mod).order == 1
    mod4 = GammaModule(FiniteGroup.cyclic(2), FinAbGroup((4,)), [[[-1]]], on_generators=True)
    # Z^1 = {v(g) with v(g) - v(g) = 0} = Z/4, B^1 = 2Z/4
    res = h1(mod4, method="brute")
    assert (res.z1_order, res.b1_order, res.order) == (4, 2, 2)


def test_action_validation():
    with pytest.raises(ValidationError):
        GammaModule(FiniteGroup.cyclic(3), FinAbGroup((5,)), [[[2]]], on_generators=True)  # 2^3 != 1 mod 5
    with pytest.raises(ValidationError):
        GammaModule(FiniteGroup.cyclic(2), FinAbGroup((4,)), [[[2]]], on_generators=True)


def test_coboundaries_are_cocycles():
    G = FiniteGroup.dihedral(3)
    mod = GammaModule(G, FinAbGroup((3,)), [[[-1]] if G.element_order(g) == 2 else [[1]] for g in G.generators],
                      on_generators=True)
    for g in mod.M.elements():
        v = d0(g, mod)
        assert v.is_cocycle and v.is_coboundary
        assert all(not any(x) for x in d1(v, mod).values())
    res = h1(mod)
    for r in res.representatives:
        assert r.is_cocycle


@settings(max_examples=40, deadline=None)
@given(st.integers(1, 6), st.integers(2, 9), st.integers(0, 8))
def test_cocycle_sums(k, n, a):
    mod = GammaModule(FiniteGroup.cyclic(k), FinAbGroup((n,)))
    res = h1(mod, method="brute")
    z = res.z1
    u, v = Cochain1(mod, z[a % len(z)]), Cochain1(mod, z[(a * 7 + 1) % len(z)])
    assert (u + v).is_cocycle and u.scale(3).is_cocycle


def test_brute_cap():
    mod = GammaModule(FiniteGroup.from_abelian(FinAbGroup((2, 2))), FinAbGroup((16, 16)))
    with pytest.raises(CapExceeded):
        h1(mod, method="brute", cap=1000)
    assert h1(mod, method="linear").group.invariant_factors == (2, 2, 2, 2)


def test_torsion_reduction_sign_action():
    G = FiniteGroup.cyclic(2)
    res = h1_torsion_reduction(G, 1, [[[-1]]], on_generators=True)
    assert res.level == 2
    assert res.level_h1.order == 2  # H^1(Z/2, D_2) = Z/2
    assert res.torus_order == 1  # but 1/2 = d0(1/4) on the torus
    triv = h1_torsion_reduction(FiniteGroup.cyclic(3), 2, None)
    assert triv.torus_group.invariant_factors == (3, 3)  # Hom(Z/3, T) for rank 2


def test_torsion_levels_stabilise():
    G = FiniteGroup.dihedral(4)
    chars = all_homs_to_abelian(G, FinAbGroup((2,)))
    for chi in chars:
        action = [[[(-1) ** chi[x][0]]] for x in G.elements]
        ref = torsion_h1_at_level(G, action, 8).torus_group.invariant_factors
        for N in (16, 24):
            assert torsion_h1_at_level(G, action, N).torus_group.invariant_factors == ref


def test_fingerprint_and_isomorphisms():
    fp = FiniteGroup.quaternion().fingerprint()
    assert fp["order"] == 8 and fp["center_order"] == 2
    G, H = FiniteGroup.cyclic(6), FiniteGroup.from_abelian(FinAbGroup((6,)))
    isos = list(G.isomorphisms_to(H))
    assert len(isos) == 2
    for tau in isos:
        for x, y in itertools.product(G.elements, repeat=2):
            assert tau[G.mul(x, y)] == H.mul(tau[x], tau[y])
