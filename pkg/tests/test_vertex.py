from fractions import Fraction

import pytest

from oracles import a3_rpp_sum, gr22_sum, phi_product, rpp_indices
from slantsum import (DegenerateLocusError, Descendant, Monomial, SamplePoint, UsageError,
                      builder_paper_examples, builder_tstar_grassmannian, degree_tuples,
                      make_engine, shift_data, single_node, twisted_vs_shift_check, vertex,
                      weight_table)


def test_degree_tuples_count():
    assert len(list(degree_tuples(2, 3))) == 10
    assert list(degree_tuples(0, 3)) == [()]


@pytest.mark.parametrize("seed", [1, 2, 3])
def test_a3_vertex_equals_explicit_sum_and_product(a3_point, seed):
    T = a3_point.theory
    pt = SamplePoint.from_seed(seed, T.framing_slots())
    V = vertex(T, a3_point, 6, pt, normalized=True)
    assert V.terms == a3_rpp_sum(6, pt.q, pt.hbar)
    k = pt.q / pt.hbar
    prod = phi_product([(k, (0, 1, 0)), (1, (1, 1, 0)), (k * k, (0, 1, 1)), (k, (1, 1, 1))],
                       3, 6, pt.q, pt.hbar)
    assert V.terms == prod


def test_a3_support_is_reverse_plane_partitions(a3_point):
    T = a3_point.theory
    eng = make_engine(T, a3_point, SamplePoint.from_seed(5, T.framing_slots()))
    rpp = set(rpp_indices(6))
    support = {d for d in degree_tuples(4, 6) if eng.term(d).value}
    assert support == rpp


def test_gr22_vertex_equals_explicit_sum_and_is_framing_free(gr22_point):
    T = gr22_point.theory
    seen = []
    for seed in (1, 2, 3):
        pt = SamplePoint.from_seed(seed, T.framing_slots())
        V = vertex(T, gr22_point, 8, pt, normalized=True)
        assert V.terms == gr22_sum(8, pt.q, pt.hbar, pt.a[("1", 1)], pt.a[("1", 2)])
        moved = pt.with_framing({("1", 1): pt.a[("1", 1)] * 7, ("1", 2): Fraction(2, 9)})
        assert vertex(T, gr22_point, 8, moved, normalized=True) == V
        seen.append((pt.a[("1", 1)], pt.a[("1", 2)]))
    assert len(set(seen)) == 3


def test_normalization_only_rescales_z(a3_point):
    T = a3_point.theory
    pt = SamplePoint.from_seed(2, T.framing_slots())
    raw = vertex(T, a3_point, 3, pt)
    norm = vertex(T, a3_point, 3, pt, normalized=True)
    # z_i -> z_i (-hbar^(-1/2))^{a_i}, a = (-2, 1, 2)
    for e, c in raw.terms.items():
        f = (-1 / pt.hh) ** (-2 * e[0] + e[1] + 2 * e[2])
        assert norm.coefficient(e) == c * f


def test_d4_direct_localization_is_degenerate():
    p = builder_paper_examples("D4")
    pt = SamplePoint.from_seed(1, p.theory.framing_slots())
    with pytest.raises(DegenerateLocusError):
        vertex(p.theory, p, 2, pt)


def test_weight_table_of_tstar_p1():
    p = builder_tstar_grassmannian(1, 2, [1])
    table = weight_table(p.theory, p)
    a1, a2 = Monomial.a("1", 1), Monomial.a("1", 2)
    # V/W_1 + V/W_2 - V/V at V = a1
    assert [(w.value, w.mult) for w in table] == [(Monomial.one(), 1), (a1 / a2, 1),
                                                  (Monomial.one(), -1)]
    assert table[0].degree((2,), {("1", 1): 1}) == 1


@pytest.mark.parametrize("k,n,subset,sigma", [
    (1, 2, [1], {("1", 2): 1}),
    (1, 2, [1], {("1", 1): 1}),
    (2, 3, [1, 2], {("1", 3): 1}),
    (2, 3, [1, 2], {("1", 1): 1}),
])
def test_twisted_vertex_is_the_conjugated_shift(k, n, subset, sigma):
    p = builder_tstar_grassmannian(k, n, subset)
    res = twisted_vs_shift_check(p.theory, p, sigma, 4, SamplePoint.from_seed(3, p.theory.framing_slots()))
    assert res["mismatches"] == []


def test_twisted_vertex_with_descendant():
    p = builder_tstar_grassmannian(2, 3, [1, 2])
    res = twisted_vs_shift_check(p.theory, p, {("1", 1): 1}, 3,
                                 SamplePoint.from_seed(1, p.theory.framing_slots()),
                                 Descendant.det("1", 2))
    assert res["mismatches"] == []


def test_shift_data_pieces():
    p = builder_tstar_grassmannian(1, 2, [1])
    pt = SamplePoint.from_seed(1, p.theory.framing_slots())
    ratio, c, L, shifted = shift_data(p.theory, p, {("1", 1): 1}, pt)
    assert L == (1,)
    assert shifted.a[("1", 1)] == pt.a[("1", 1)] * pt.q
    assert shifted.a[("1", 2)] == pt.a[("1", 2)]


def test_trivial_descendant_changes_nothing(a3_point):
    T = a3_point.theory
    pt = SamplePoint.from_seed(1, T.framing_slots())
    one = Descendant.make({"2": [(1, (0, 0))]})
    assert vertex(T, a3_point, 3, pt, one) == vertex(T, a3_point, 3, pt)


def test_descendant_sign_enters_through_q_powers():
    p = builder_tstar_grassmannian(1, 2, [1])
    T = p.theory
    pt = SamplePoint.from_seed(1, T.framing_slots())
    tau = Descendant.det("1", 1)
    plain = vertex(T, p, 3, pt)
    up = vertex(T, p, 3, pt, tau, descendant_sign=1)
    down = vertex(T, p, 3, pt, tau, descendant_sign=-1)
    x = pt.a[("1", 1)]
    for d in range(4):
        assert up.coefficient((d,)) == plain.coefficient((d,)) * x * pt.q ** d
        assert down.coefficient((d,)) == plain.coefficient((d,)) * x * pt.q ** -d


def test_negative_stability_is_refused():
    from slantsum import QuiverGaugeTheory, FixedPointData
    T = QuiverGaugeTheory(["1"], [], [1], [2], theta=-1)
    p = FixedPointData.make(T, {"1": [Monomial.a("1", 1)]})
    with pytest.raises(UsageError):
        vertex(T, p, 2, SamplePoint.from_seed(1, T.framing_slots()))


def test_jobs_do_not_change_coefficients(a3_point):
    T = a3_point.theory
    pt = SamplePoint.from_seed(4, T.framing_slots())
    assert vertex(T, a3_point, 6, pt, jobs=1) == vertex(T, a3_point, 6, pt, jobs=3)


def test_q_equals_hbar_limit_of_tstar_p1():
    p = builder_tstar_grassmannian(1, 2, [1])
    T = p.theory
    pt = SamplePoint.from_seed(2, T.framing_slots(), q_equals_hbar=True)
    V = vertex(T, p, 3, pt)
    # at q = hbar every factor (hbar x)_d/(q x)_d is 1, so only (-q hbar^-1/2)^{d (deg)} remains
    assert V.coefficient((0,)) == 1
    assert all(c != 0 for c in V.terms.values())
