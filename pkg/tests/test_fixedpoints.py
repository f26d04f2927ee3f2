from collections import Counter

import pytest

from examples43 import M1, build
from slantsum import (Chamber, FixedPointData, FixedPointError, Monomial, SlantSumSpec, a_type,
                      builder_paper_examples, builder_tstar_flag, builder_tstar_grassmannian,
                      builder_zero_dim, chamber_weights, is_split, is_valid, relabel_point,
                      single_node, slant_sum_fixed_point, tangent_character)

h = Monomial.h(2)


def test_a3_point_from_builder_matches_named_point(a3_point):
    assert builder_zero_dim(a3_point.theory) == a3_point
    a = Monomial.a("2", 1)
    assert a3_point.at("2") == (a, a * h)
    assert not tangent_character(a3_point)


def test_split_and_chamber_weights(a3_point, gr22_point):
    assert is_split(a3_point, "2")
    spec = SlantSumSpec(a3_point.theory, "2", gr22_point.theory, "1")
    a = Monomial.a("1.2", 1)
    assert chamber_weights(spec, a3_point, None) == [a, a * h]
    assert chamber_weights(spec, a3_point, Chamber((1, 0))) == [a * h, a]


def test_d4_point_and_chamber_dependence(a3_point, gr22_point):
    spec = SlantSumSpec(a3_point.theory, "2", gr22_point.theory, "1")
    p = slant_sum_fixed_point(spec, a3_point, None, gr22_point)
    a = Monomial.a("1.2", 1)
    assert p.at("2.1") == (a, a * h)
    assert not tangent_character(p)
    assert is_valid(p)
    # T*Gr(1,2) glued to a split Gr(2,2)-type vertex: the chamber picks the weight
    T2 = single_node(1, 2)
    p2 = builder_tstar_grassmannian(1, 2, [1], T2)
    spec2 = SlantSumSpec(a3_point.theory, "2", T2, "1")
    left = slant_sum_fixed_point(spec2, a3_point, None, p2)
    right = slant_sum_fixed_point(spec2, a3_point, Chamber((1, 0)), p2)
    assert left.at("2.1") == (a,) and right.at("2.1") == (a * h,)


def test_unsplit_points_are_rejected():
    T = single_node(2, 2)
    p = FixedPointData.make(T, {"1": [Monomial.a("1", 1), Monomial.a("1", 1)]})
    assert not is_split(p, "1")
    spec = SlantSumSpec(T, "1", single_node(1, 2), "1")
    with pytest.raises(FixedPointError):
        slant_sum_fixed_point(spec, p, None, builder_tstar_grassmannian(1, 2, [1]))


def test_tangent_character_of_tstar_p1():
    p = builder_tstar_grassmannian(1, 2, [1])
    a1, a2 = Monomial.a("1", 1), Monomial.a("1", 2)
    assert tangent_character(p) == Counter({a1 / a2: 1, Monomial.h(-2) * a2 / a1: 1})


def test_flag_point():
    p = builder_tstar_flag(3)
    # framing C^3 sits at the last gauge vertex
    b1, b2 = Monomial.a("2", 1), Monomial.a("2", 2)
    assert p.at("1") == (b1,) and p.at("2") == (b1, b2)
    with pytest.raises(FixedPointError):
        builder_tstar_flag(3, [1, 1, 2])


def test_indefinite_first_theory_uses_the_reflection_rule():
    p = builder_zero_dim(M1)
    a = Monomial.a("7", 1)
    assert sorted(p.at("7"), key=str) == sorted([a, a * h ** 2], key=str)
    assert not tangent_character(p)
    *_, pb = build()
    assert not tangent_character(pb) and is_valid(pb)


def test_validation_flags_bad_weights():
    T = single_node(1, 2)
    p = FixedPointData.make(T, {"1": [Monomial.a("1", 1) * Monomial.h(-2)]})
    assert not is_valid(p)
    with pytest.raises(FixedPointError):
        FixedPointData.make(T, {"1": []})
    with pytest.raises(FixedPointError):
        FixedPointData.make(T, {"9": [Monomial.a("1", 1)]})


def test_relabel_point(a3_point):
    r = relabel_point(a3_point, "1.")
    assert r.theory.vertices == ("1.1", "1.2", "1.3")
    assert r.at("1.3") == (Monomial.a("1.2", 1),)


def test_zero_dim_builder_rejects_positive_dimension():
    with pytest.raises(FixedPointError):
        builder_zero_dim(a_type([1], [2]))
