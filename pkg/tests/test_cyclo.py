import cmath
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from qsubgroups.cyclo import (CycNum, CycParseError, Sl2Elt, cyclotomic_poly, degree, format_cyc,
                              generate_group, parse_cyc)
from qsubgroups.errors import CapExceeded, ValidationError

CONDUCTORS = [1, 3, 4, 5, 8, 12]


def to_complex(x: CycNum):
    z = cmath.exp(2j * cmath.pi / x.m)
    return sum(complex(c) * z ** k for k, c in enumerate(x.coeffs))


def cyc(m):
    coeffs = st.lists(st.fractions(min_value=-5, max_value=5, max_denominator=4), min_size=1, max_size=degree(m))
    return coeffs.map(lambda cs: CycNum(m, cs))


@st.composite
def pair(draw):
    m = draw(st.sampled_from(CONDUCTORS))
    return draw(cyc(m)), draw(cyc(m))


def test_cyclotomic_polynomials():
    assert list(cyclotomic_poly(1)) == [-1, 1]
    assert list(cyclotomic_poly(4)) == [1, 0, 1]
    assert list(cyclotomic_poly(6)) == [1, -1, 1]
    assert [degree(m) for m in (1, 2, 5, 8, 12)] == [1, 1, 4, 4, 4]


@settings(max_examples=200, deadline=None)
@given(pair())
def test_field_axioms_against_complex_numbers(ab):
    a, b = ab
    assert abs(to_complex(a + b) - (to_complex(a) + to_complex(b))) < 1e-9
    assert abs(to_complex(a * b) - to_complex(a) * to_complex(b)) < 1e-9
    assert a * b == b * a
    assert (a + b) - b == a
    if not b.is_zero():
        assert (a / b) * b == a
        assert b * b.inv() == 1


@settings(max_examples=100, deadline=None)
@given(pair(), st.sampled_from([1, 5, 7, 11]))
def test_galois_is_ring_hom(ab, j):
    a, b = ab
    from math import gcd
    if gcd(j, a.m) != 1:
        return
    assert (a * b).galois(j) == a.galois(j) * b.galois(j)
    assert (a + b).galois(j) == a.galois(j) + b.galois(j)


def test_roots_of_unity():
    for m in (3, 4, 5, 12):
        z = CycNum.zeta(m)
        assert z ** m == 1
        assert all(z ** k != 1 for k in range(1, m))
        assert z.inv() == z ** (m - 1)
    assert CycNum.zeta(4) ** 2 == -1
    # conductor changes preserve values
    assert CycNum.zeta(3).to_conductor(12) == CycNum.zeta(12, 4)


def test_parse_and_format_round_trip():
    for text in ("z^2 + 1/2", "-3/4*z^3", "z^-1", "1", "0", "2*z - z^2"):
        x = parse_cyc(text, 5)
        assert parse_cyc(format_cyc(x), 5) == x
    assert parse_cyc("z^-1", 5) == CycNum.zeta(5, 4)
    with pytest.raises(CycParseError) as e:
        parse_cyc("z ^", 3)
    assert e.value.column == 3
    assert parse_cyc("2 z", 3) == parse_cyc("2*z", 3)
    for bad in ("z z", "1 +", "*z", "y"):
        with pytest.raises(CycParseError):
            parse_cyc(bad, 3)


def test_sl2_basics():
    z = CycNum.zeta(8)
    t = Sl2Elt.diag(z)
    n = Sl2Elt.weyl()
    assert t.det() == 1 and n * n == -Sl2Elt.identity()
    assert t.conjugate_by(n) == Sl2Elt.diag(z.inv())
    assert t.order() == 8 and n.order() == 4
    assert t.is_diagonal() and n.is_antidiagonal() and (t * n).is_monomial()
    assert (-Sl2Elt.identity()).is_central()
    with pytest.raises(ValidationError):
        Sl2Elt(1, 1, 1, 1)


def test_group_closure():
    assert generate_group([Sl2Elt.diag(CycNum.zeta(5))]).order == 5
    assert generate_group([Sl2Elt.diag(CycNum.zeta(4)), Sl2Elt.weyl()]).order == 8
    assert generate_group([Sl2Elt.diag(CycNum.zeta(6)), Sl2Elt.weyl()]).order == 12
    g = generate_group([Sl2Elt.diag(CycNum.zeta(6)), Sl2Elt.weyl()])
    G = g.abstract()
    assert G.order == 12 and not G.is_abelian
    for i, x in enumerate(g.elements):
        for j, y in enumerate(g.elements):
            assert g.elements[g.table[i][j]] == x * y


def test_infinite_group_hits_cap():
    with pytest.raises(CapExceeded) as e:
        generate_group([Sl2Elt(1, 1, 0, 1)], cap=50)
    assert "not verified finite" in str(e.value)


def test_rational_helpers():
    x = CycNum.rational(Fraction(3, 4), 5)
    assert x.is_rational() and x.as_rational() == Fraction(3, 4)
    assert not CycNum.zeta(5).is_rational()
