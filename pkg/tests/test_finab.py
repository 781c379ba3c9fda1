from fractions import Fraction
from math import gcd

import pytest
from hypothesis import given, settings, strategies as st

from qsubgroups.errors import CapExceeded, ValidationError
from qsubgroups.finab import (FinAbGroup, GroupHom, Subgroup, all_subgroups, annihilator, aut_group,
                              determinant, hom_group, inverse_automorphism, mat_mul,
                              quotient_structure, smith_normal_form)

small_matrices = st.integers(1, 4).flatmap(
    lambda r: st.integers(1, 4).flatmap(
        lambda c: st.lists(st.lists(st.integers(-9, 9), min_size=c, max_size=c), min_size=r, max_size=r)))


@settings(max_examples=150, deadline=None)
@given(small_matrices)
def test_smith_normal_form_properties(M):
    U, D, V = smith_normal_form(M)
    assert mat_mul(mat_mul(U, M), V) == D
    assert abs(determinant(U)) == 1 and abs(determinant(V)) == 1
    diag = [D[i][i] for i in range(min(len(D), len(D[0])))]
    assert all(D[i][j] == 0 for i in range(len(D)) for j in range(len(D[0])) if i != j)
    assert all(x >= 0 for x in diag)
    for a, b in zip(diag, diag[1:]):
        assert (b == 0) or (a != 0 and b % a == 0)


def test_smith_small_cases():
    _, D, _ = smith_normal_form([[2, 4], [4, 2]])
    assert D == [[2, 0], [0, 6]]
    U, D, V = smith_normal_form([[0]])
    assert D == [[0]] and U == [[1]] and V == [[1]]


def test_group_normalisation_and_orders():
    G = FinAbGroup.from_cyclic_orders([4, 6])
    assert G.invariant_factors == (2, 12)
    assert G.order == 24 and G.exponent == 12
    assert FinAbGroup.from_cyclic_orders([1, 1]).order == 1
    with pytest.raises(ValidationError):
        FinAbGroup((4, 6))


@settings(max_examples=60, deadline=None)
@given(st.lists(st.integers(1, 12), min_size=1, max_size=3))
def test_element_order_histogram_recovers_group(orders):
    G = FinAbGroup.from_cyclic_orders(orders)
    from collections import Counter
    if G.order > 2000:
        return
    hist = Counter(G.element_order(x) for x in G.elements())
    assert FinAbGroup.from_element_orders(hist).invariant_factors == G.invariant_factors


def test_hom_counts_are_gcds():
    for a in range(1, 9):
        for b in range(1, 9):
            A = FinAbGroup.from_cyclic_orders([a])
            B = FinAbGroup.from_cyclic_orders([b])
            assert hom_group(A, B).order == gcd(a, b)


def test_aut_orders():
    assert len(aut_group(FinAbGroup((2, 2)))) == 6
    assert len(aut_group(FinAbGroup((3,)))) == 2
    assert len(aut_group(FinAbGroup(()))) == 1
    assert len(aut_group(FinAbGroup((2, 4)))) == 8


def test_inverse_automorphism():
    A = FinAbGroup((2, 4))
    for h in aut_group(A):
        assert h.compose(inverse_automorphism(h)) == GroupHom.identity(A)


def test_subgroup_lattice_counts():
    # (Z/p)^2 has p + 3 subgroups
    for p in (2, 3, 5):
        assert len(all_subgroups(FinAbGroup((p, p)))) == p + 3
    # Z/12: one subgroup per divisor
    assert sorted(S.order for S in all_subgroups(FinAbGroup((12,)))) == [1, 2, 3, 4, 6, 12]


def test_quotients_and_annihilators():
    T = FinAbGroup((5, 5))
    for N in all_subgroups(T):
        perp = annihilator(N, T)
        assert N.order * perp.order == T.order
        assert annihilator(perp, T) == N
        for z in N.elements():
            for x in perp.elements():
                assert T.pairing(z, x) % 1 == 0
    big = Subgroup.whole((4, 4))
    small = Subgroup((4, 4), ((2, 0),))
    Q, _ = quotient_structure(big, small)
    assert Q.invariant_factors == (2, 4)


def test_hom_kernel_image():
    A, B = FinAbGroup((12,)), FinAbGroup((4,))
    h = GroupHom.from_images(A, B, [(1,)])
    assert h.kernel().order == 3 and h.image().order == 4
    assert h.is_surjective() and not h.is_injective()
    with pytest.raises(ValidationError):
        GroupHom.from_images(FinAbGroup((3,)), FinAbGroup((2,)), [(1,)])


def test_caps_raise():
    with pytest.raises(CapExceeded):
        list(FinAbGroup((1000, 1000)).elements(cap=10))


def test_pairing_values():
    T = FinAbGroup((3, 9))
    assert T.pairing((1, 1), (1, 2)) == Fraction(1, 3) + Fraction(2, 9)
