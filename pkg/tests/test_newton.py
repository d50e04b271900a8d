import itertools
from fractions import Fraction
from math import factorial

import pytest
from hypothesis import given, settings

from lechlab.monomial import (
    NotMPrimary,
    UnsupportedDimension,
    contains,
    is_subideal,
    maximal_ideal,
    order,
    parse_ideal,
    power,
    pure_powers,
)
from lechlab.newton import (
    box_covolume_oracle,
    build_polyhedron,
    covolume,
    dominates_convex_combination,
    in_polyhedron,
    integral_closure,
    is_integrally_closed,
    normalized_covolume,
)

from conftest import m_primary_ideals

SEED = parse_ideal("x^3, y^4, z^5, x*y*z")


def compact(I):
    return sorted((f.normal, f.offset) for f in build_polyhedron(I).compact_facets)


class TestFacets:
    def test_segment(self):
        assert compact(parse_ideal("x^3, y^3")) == [((1, 1), 3)]
        assert compact(parse_ideal("x^4, y^2")) == [((1, 2), 4)]

    @pytest.mark.parametrize("d,n", [(2, 1), (2, 4), (3, 2), (4, 3)])
    def test_powers_of_m(self, d, n):
        assert compact(power(maximal_ideal(d), n)) == [((1,) * d, n)]

    def test_family_seed(self):
        # hand-checked: each plane passes through (1,1,1) and two pure powers
        assert compact(SEED) == [((4, 3, 5), 12), ((5, 7, 3), 15), ((11, 5, 4), 20)]

    def test_coordinate_facets_present(self):
        P = build_polyhedron(SEED)
        assert sum(f.is_coordinate for f in P.facets) == 3

    def test_compact_normals_positive(self):
        for d in (2, 3, 4):
            P = build_polyhedron(parse_ideal(", ".join(["x^5", "y^3", "z^4", "w^2"][:d] + ["x*y"])))
            assert all(min(f.normal) > 0 for f in P.compact_facets)

    def test_rejects(self):
        with pytest.raises(NotMPrimary):
            build_polyhedron(parse_ideal("x^2, x*y"))
        with pytest.raises(UnsupportedDimension):
            build_polyhedron(power(maximal_ideal(5), 2))


def test_membership_examples():
    P = build_polyhedron(power(maximal_ideal(2), 3))
    assert in_polyhedron(P, (1, 2))
    assert not in_polyhedron(build_polyhedron(parse_ideal("x^3, y^3")), (1, 1))
    assert in_polyhedron(build_polyhedron(parse_ideal("x^4, y^2")), (2, 1))
    assert in_polyhedron(P, (Fraction(3, 2), Fraction(3, 2)))


@settings(max_examples=40, deadline=None)
@given(m_primary_ideals(dims=(2, 3, 4), max_exp=4, max_extra=4))
def test_facets_agree_with_lp(I):
    P = build_polyhedron(I)
    for v in itertools.product(*(range(p + 1) for p in pure_powers(I))):
        assert in_polyhedron(P, v) == dominates_convex_combination(I.gens, v)


class TestClosure:
    def test_examples(self):
        assert integral_closure(parse_ideal("x^3, y^3")) == power(maximal_ideal(2), 3)
        assert len(integral_closure(parse_ideal("x^3, y^3")).gens) == 4
        assert integral_closure(parse_ideal("x^4, y^2")) == parse_ideal("x^4, x^2*y, y^2")
        assert len(integral_closure(SEED).gens) == 11

    def test_closed_predicate(self):
        assert is_integrally_closed(power(maximal_ideal(3), 3))
        assert not is_integrally_closed(parse_ideal("x^3, y^3"))

    @settings(max_examples=40, deadline=None)
    @given(m_primary_ideals(dims=(2, 3), max_exp=5))
    def test_closure_laws(self, I):
        C = integral_closure(I)
        assert is_subideal(I, C)
        assert integral_closure(C) == C
        assert order(C) == order(I)

    @settings(max_examples=25, deadline=None)
    @given(m_primary_ideals(dims=(2,), max_exp=4, max_extra=3))
    def test_closure_contains_roots_of_powers(self, I):
        # x^v in I-bar whenever x^(n v) in I^n: a one-sided oracle from the definition
        C = integral_closure(I)
        powers = {n: power(I, n) for n in (2, 3, 4)}
        for v in itertools.product(*(range(p) for p in pure_powers(I))):
            if any(contains(J, tuple(n * x for x in v)) for n, J in powers.items()):
                assert contains(C, v)


class TestCovolume:
    def test_examples(self):
        for n in range(1, 5):
            assert covolume(power(maximal_ideal(2), n)) == Fraction(n * n, 2)
        assert covolume(parse_ideal("x^3, y^5")) == Fraction(15, 2)
        assert covolume(SEED) == Fraction(47, 6)

    @settings(max_examples=40, deadline=None)
    @given(m_primary_ideals(dims=(2, 3, 4), max_exp=5, max_extra=4))
    def test_matches_box_oracle(self, I):
        P = build_polyhedron(I)
        assert Fraction(normalized_covolume(P), factorial(I.dim)) == box_covolume_oracle(I)
        assert isinstance(normalized_covolume(P), int)

    @settings(max_examples=20, deadline=None)
    @given(m_primary_ideals(dims=(2, 3), max_exp=4, max_extra=3))
    def test_scales_like_volume(self, I):
        for n in (2, 3):
            assert covolume(power(I, n)) == n ** I.dim * covolume(I)

    def test_closure_invariant(self):
        assert covolume(integral_closure(SEED)) == covolume(SEED)
