from math import comb

import pytest
from hypothesis import given, settings

from lechlab.explorer import random_ideal
from lechlab.monomial import (
    MonomialIdeal,
    NotMPrimary,
    UnsupportedDimension,
    colon,
    delete_variable,
    maximal_ideal,
    order,
    parse_ideal,
    power,
    product,
    unit_vector,
)
from lechlab.newton import integral_closure
from lechlab.invariants import (
    NotStabilized,
    colength,
    mixed_multiplicities,
    multiplicity,
    multiplicity_by_asymptotics,
    r_invariant,
    report,
)

from conftest import box_complement, m_primary_ideals

SEED = parse_ideal("x^3, y^4, z^5, x*y*z")
FAMILY = integral_closure(SEED)


def m(d, n=1):
    return power(maximal_ideal(d), n)


class TestColength:
    def test_examples(self):
        assert colength(m(3, 3)) == 10
        assert colength(m(4)) == 1
        assert colength(FAMILY) == 23
        assert colength(SEED) == 36
        assert colength(MonomialIdeal(1, ((6,),))) == 6

    @settings(max_examples=80, deadline=None)
    @given(m_primary_ideals(dims=(2, 3, 4), max_exp=5))
    def test_matches_enumeration(self, I):
        assert colength(I) == len(box_complement(I))

    def test_rejects_non_primary(self):
        with pytest.raises(NotMPrimary):
            colength(parse_ideal("x^2, x*y"))


class TestMultiplicity:
    def test_examples(self):
        for d in (2, 3, 4):
            for n in (1, 2, 3):
                assert multiplicity(m(d, n)) == n ** d
        assert multiplicity(FAMILY) == 47
        assert multiplicity(SEED) == 47
        assert multiplicity(parse_ideal("x^2, x*y, y^3")) == 5

    def test_asymptotic_examples(self):
        assert multiplicity_by_asymptotics(m(2, 2)) == 4
        assert multiplicity_by_asymptotics(parse_ideal("x^2, x*y, y^3")) == 5
        assert multiplicity_by_asymptotics(FAMILY) == 47
        assert multiplicity_by_asymptotics(m(5)) == 1

    def test_window_cap(self):
        with pytest.raises(NotStabilized):
            multiplicity_by_asymptotics(SEED, max_start=0)

    @settings(max_examples=40, deadline=None)
    @given(m_primary_ideals(dims=(2, 3), max_exp=5))
    def test_two_routes_agree(self, I):
        assert multiplicity(I) == multiplicity_by_asymptotics(I)

    @settings(max_examples=30, deadline=None)
    @given(m_primary_ideals(dims=(2, 3), max_exp=4))
    def test_closure_and_powers(self, I):
        e = multiplicity(I)
        assert multiplicity(integral_closure(I)) == e
        assert multiplicity(power(I, 2)) == 2 ** I.dim * e
        assert e <= colength(I) * {2: 2, 3: 6}[I.dim]


class TestMixed:
    def test_examples(self):
        assert mixed_multiplicities(FAMILY).e == (47, 10, 3, 1)
        assert mixed_multiplicities(SEED).e == (47, 10, 3, 1)
        for d in (2, 3, 4):
            assert mixed_multiplicities(m(d)).e == (1,) * (d + 1)
            for n in (2, 3):
                assert mixed_multiplicities(m(d, n)).e == tuple(n ** (d - i) for i in range(d + 1))

    def test_experimental_dimension(self):
        assert mixed_multiplicities(m(5)).e == (1,) * 6

    @settings(max_examples=30, deadline=None)
    @given(m_primary_ideals(dims=(2, 3, 4), max_exp=4, max_extra=3))
    def test_structure(self, I):
        d, e = I.dim, mixed_multiplicities(I).e
        assert e[0] == multiplicity(I)
        assert e[d - 1] == order(I)
        assert e[d] == 1
        assert sum(comb(d, i) * x for i, x in enumerate(e)) == multiplicity(product(maximal_ideal(d), I))
        # Rees-Sharp: e_i^d <= e_0^(d-i)
        assert all(x ** d <= e[0] ** (d - i) for i, x in enumerate(e))

    @settings(max_examples=20, deadline=None)
    @given(m_primary_ideals(dims=(2, 3), max_exp=4, max_extra=3))
    def test_square_scaling(self, I):
        d, e = I.dim, mixed_multiplicities(I).e
        assert mixed_multiplicities(power(I, 2)).e == tuple(2 ** (d - i) * x for i, x in enumerate(e))


class TestColonIdentities:
    """Coordinate variables are nonzerodivisors; compare I with I : x_k and I mod x_k."""

    @pytest.mark.parametrize("seed", range(40))
    def test_axes(self, seed):
        d = 2 + seed % 3
        I = random_ideal(d, 5, seed)
        for k in range(d):
            J = colon(I, MonomialIdeal(d, (unit_vector(d, k),)))
            I1 = delete_variable(I, k)
            lam_J = 0 if J.is_unit else colength(J)
            assert colength(I) == lam_J + colength(I1)
            e_J = 0 if J.is_unit else multiplicity(J)
            assert multiplicity(I) <= e_J + d * multiplicity(I1)


class TestR:
    def test_examples(self):
        for n in range(1, 5):
            assert r_invariant(m(2, n)) == n
            assert r_invariant(m(3, n)) == n
        assert r_invariant(parse_ideal("x^2, y^2")) == 0
        assert r_invariant(product(maximal_ideal(2), parse_ideal("x^2, y^3"))) >= 1
        assert r_invariant(FAMILY) == 0

    @settings(max_examples=30, deadline=None)
    @given(m_primary_ideals(dims=(2, 3), max_exp=4))
    def test_bounded_by_order(self, I):
        assert r_invariant(I) <= order(I)
        assert r_invariant(product(maximal_ideal(I.dim), I)) >= 1


class TestReport:
    def test_maximal_ideal_d4(self):
        rep = report(m(4))
        assert (rep.colength, rep.multiplicity, rep.mu, rep.ord, rep.r) == (1, 1, 4, 1, 1)
        assert rep.mixed.e == (1, 1, 1, 1, 1)
        assert rep.e_of_mI == 16

    @pytest.mark.parametrize("abc,expected", [
        ((3, 3, 3), (10, 27, 10, 9, 3)),
        ((3, 4, 5), (23, 47, 11, 10, 3)),
    ])
    def test_family(self, abc, expected):
        a, b, c = abc
        rep = report(integral_closure(parse_ideal(f"x^{a}, y^{b}, z^{c}, x*y*z")))
        assert (rep.colength, rep.multiplicity, rep.mu, rep.mixed[1], rep.mixed[2]) == expected
        assert rep.is_closed

    def test_json_keys(self):
        data = report(SEED).to_json()
        assert set(data) == {"dim", "gens", "isClosed", "colength", "multiplicity", "mu", "ord", "r", "mixed", "eOfMI"}
        assert data["isClosed"] is False and data["eOfMI"] == 87

    def test_dimension_gate(self):
        with pytest.raises(UnsupportedDimension):
            report(m(5))
        assert report(m(5), allow_experimental=True).e_of_mI == 32
