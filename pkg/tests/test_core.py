import itertools
import threading

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import (
    E01,
    E12,
    E20,
    any_matroid,
    brute_family,
    brute_rank,
    brute_span,
    catalog_matroids,
    full,
    gf2_independent,
    graphic_matroids,
    triangle,
)
from matroid_forge.bits import bits, members, popcount, submasks
from matroid_forge.core import (
    DirectSum,
    ExplicitMatroid,
    Minor,
    check_axioms,
    circuits,
    direct_sum,
    dual,
    is_independent,
    max_independent_subset,
    minor,
    rank,
    span,
)
from matroid_forge.errors import ArgumentError, CapacityError, DomainError, InvalidMatroidError
from matroid_forge.zoo import LinearMatroidGF2, UniformMatroid, free_matroid


def U(n, r):
    return UniformMatroid(full(n), r)


def predicate(m):
    return frozenset(s for s in submasks(m.ground_mask) if m.is_independent(s))


# -- is_independent ---------------------------------------------------------------


def test_uniform_small_set_is_independent():
    assert is_independent(U(4, 2), {0, 1})


def test_triangle_cycle_is_dependent():
    assert not is_independent(triangle(), {E01, E12, E20})


def test_gf2_dependent_triple_matches_elimination_free_oracle():
    cols = [(1, 0), (0, 1), (1, 1)]
    m = LinearMatroidGF2(2, enumerate(cols))
    assert is_independent(m, {0, 1, 2}) == gf2_independent(cols) == False  # noqa: E712
    for s in submasks(full(3)):
        assert m.is_independent(s) == gf2_independent([cols[e] for e in members(s)])


def test_outside_ground_is_a_domain_error():
    with pytest.raises(DomainError):
        U(3, 1).is_independent({5})


@given(any_matroid(7))
@settings(max_examples=60, deadline=None)
def test_independence_is_downward_closed(m):
    fam = brute_family(m)
    assert 0 in fam
    for s in fam:
        assert all(s ^ b in fam for b in (1 << e for e in members(s)))


# -- rank and greedy ----------------------------------------------------------------


def test_rank_examples():
    assert rank(U(5, 2)) == 2
    assert rank(U(5, 2), 0) == 0
    assert rank(triangle()) == brute_rank(triangle(), full(3)) == 2


def test_greedy_ascending_tie_break():
    m = UniformMatroid(bits([0, 1, 2, 3, 4, 5]), 1)
    assert members(max_independent_subset(m, {2, 5})) == [2]
    assert max_independent_subset(m, 0) == 0
    assert members(max_independent_subset(triangle())) == [E01, E12]


@given(any_matroid(7))
@settings(max_examples=60, deadline=None)
def test_rank_matches_brute_force(m):
    for x in submasks(m.ground_mask):
        assert m.rank(x) == brute_rank(m, x)
        g = m.max_independent_subset(x)
        assert m.is_independent(g) and popcount(g) == brute_rank(m, x) and g & ~x == 0


# -- span ------------------------------------------------------------------------


def test_span_examples():
    assert span(U(4, 2), {0, 1}) == full(4)
    assert span(U(4, 1), 0) == 0
    assert span(triangle(), {E01, E12}) == full(3) == brute_span(triangle(), bits([E01, E12]))


@given(any_matroid(7))
@settings(max_examples=60, deadline=None)
def test_span_closure_axioms(m):
    subsets = list(submasks(m.ground_mask))
    for x in subsets:
        sx = m.span(x)
        assert sx == brute_span(m, x)
        assert sx & x == x and m.span(sx) == sx
    for x, y in itertools.product(subsets[:32], repeat=2):
        if x & y == x:
            assert m.span(x) & m.span(y) == m.span(x)


@given(any_matroid(7))
@settings(max_examples=40, deadline=None)
def test_span_agrees_with_contraction_definition(m):
    for x in submasks(m.ground_mask):
        contracted = Minor(m, x, 0)
        literal = x | sum(1 << e for e in members(m.ground_mask & ~x) if not contracted.is_independent(1 << e))
        assert m.span(x) == literal


# -- minors ------------------------------------------------------------------------


def test_contracting_one_element_of_u42():
    c = minor(U(4, 2), {0}, 0)
    assert c.is_independent({1}) and not c.is_independent({1, 2})
    assert c.ground == (1, 2, 3)


def test_deleting_a_triangle_edge_leaves_a_forest():
    d = minor(triangle(), 0, {E20})
    assert predicate(d) == frozenset(submasks(bits([E01, E12])))


def test_overlapping_minor_is_rejected():
    with pytest.raises(ArgumentError):
        minor(U(4, 2), {0, 1}, {1})


def test_bad_contracted_basis_is_rejected():
    with pytest.raises(ArgumentError):
        Minor(U(4, 2), {0, 1, 2}, 0, contracted_basis={0})


@given(graphic_matroids(7), st.data())
@settings(max_examples=60, deadline=None)
def test_contraction_and_deletion_commute(m, data):
    g = m.ground_mask
    x = data.draw(st.sampled_from(list(submasks(g))))
    y = data.draw(st.sampled_from(list(submasks(g & ~x))))
    a = predicate(Minor(Minor(m, x, 0), 0, y))
    b = predicate(Minor(Minor(m, 0, y), x, 0))
    assert a == b == predicate(minor(m, x, y))


@given(catalog_matroids(6), st.data())
@settings(max_examples=60, deadline=None)
def test_contraction_is_independent_of_the_basis(m, data):
    x = data.draw(st.sampled_from(list(submasks(m.ground_mask))))
    r = m.rank(x)
    bases = [b for b in submasks(x) if m.is_independent(b) and popcount(b) == r]
    preds = {predicate(Minor(m, x, 0, contracted_basis=b)) for b in bases}
    assert len(preds) == 1


# -- direct sums ----------------------------------------------------------------------


def test_direct_sum_of_two_rank_one_parts():
    s = direct_sum([UniformMatroid({0, 1}, 1), UniformMatroid({2, 3}, 1)])
    assert s.is_independent({0, 2}) and not s.is_independent({0, 1})


def test_empty_direct_sum_is_trivial():
    s = direct_sum([])
    assert s.ground == () and s.rank() == 0 and s.is_independent(0)


def test_overlapping_summands_are_rejected():
    with pytest.raises(ArgumentError):
        DirectSum([U(2, 1), U(3, 1)])


@given(st.lists(st.tuples(st.integers(1, 3), st.integers(0, 3)), min_size=1, max_size=3))
def test_direct_sum_rank_is_additive(shapes):
    parts, offset = [], 0
    for size, r in shapes:
        parts.append(UniformMatroid(full(size) << offset, min(r, size)))
        offset += size
    s = direct_sum(parts)
    for x in submasks(s.ground_mask):
        assert s.rank(x) == sum(brute_rank(p, x & p.ground_mask) for p in parts)


# -- duals --------------------------------------------------------------------------


def explicit(m):
    return ExplicitMatroid.from_matroid(m)


def test_dual_of_u41_is_u43():
    assert dual(explicit(U(4, 1))) == explicit(U(4, 3))


def test_dual_of_free_is_rank_zero():
    assert dual(explicit(free_matroid(full(3)))) == explicit(U(3, 0))


def test_double_dual_of_triangle():
    t = explicit(triangle())
    assert dual(dual(t)) == t
    assert predicate(dual(dual(t))) == predicate(triangle())


def test_dual_rejects_non_matroids():
    bad = ExplicitMatroid(full(2), [0, 1, 3], validate=False)
    with pytest.raises(InvalidMatroidError):
        dual(bad)


def test_dual_needs_an_explicit_matroid():
    with pytest.raises(TypeError):
        dual(U(3, 1))


@given(catalog_matroids(6))
@settings(max_examples=60, deadline=None)
def test_dual_bases_are_complements(m):
    d = dual(m)
    assert {m.ground_mask & ~b for b in d.bases()} == set(m.bases())
    assert dual(d) == m


# -- circuits -----------------------------------------------------------------------


def test_uniform_circuits_are_the_next_size_up():
    assert circuits(U(5, 2)) == [bits(c) for c in itertools.combinations(range(5), 3)]


def test_triangle_has_one_circuit():
    assert circuits(triangle()) == [full(3)]


def test_free_matroid_has_no_circuits():
    assert circuits(free_matroid(full(4))) == []


def test_circuit_enumeration_has_a_capacity_limit():
    with pytest.raises(CapacityError):
        circuits(U(17, 3))
    assert len(circuits(U(5, 4), threshold=None)) == 1


@given(any_matroid(7))
@settings(max_examples=40, deadline=None)
def test_circuits_are_minimal_dependent_sets(m):
    found = circuits(m)
    fam = brute_family(m)
    expected = [s for s in submasks(m.ground_mask) if s not in fam and all(s ^ (1 << e) in fam for e in members(s))]
    assert sorted(found) == sorted(expected)
    assert len(set(found)) == len(found)


# -- axiom checking ---------------------------------------------------------------------


def test_singletons_on_two_elements_pass():
    assert check_axioms([0, 1, 2], full(2)).ok


def test_missing_subset_violates_downward_closure():
    report = check_axioms([0, bits([0]), bits([0, 1])], full(2))
    assert report.violated() == ["ii"]
    w = report.violations[0].witness
    assert w == {"subset": bits([1]), "superset": bits([0, 1])}


def test_u52_passes():
    assert check_axioms(brute_family(U(5, 2)), full(5)).ok


def test_missing_empty_set_violates_axiom_i():
    assert "i" in check_axioms([1], full(1)).violated()


def test_augmentation_failure_violates_axiom_iii():
    # {0} and {1,2} are both maximal but of different sizes
    fam = [0, 1, 2, 4, 6]
    report = check_axioms(fam, full(3))
    assert report.violated() == ["iii"]
    w = report.violations[0].witness
    i, j = w["I"], w["J"]
    # I can grow, J cannot, and nothing from J extends I
    assert i in fam and j in fam
    assert any(i | 1 << e in fam for e in members(full(3) & ~i))
    assert not any(j | 1 << e in fam for e in members(full(3) & ~j))
    assert not any(i | 1 << e in fam for e in members(j & ~i))


def test_axiom_check_capacity_limit():
    with pytest.raises(CapacityError):
        check_axioms([0], full(9))
    assert check_axioms([0], full(9), threshold=None).ok


@given(any_matroid(8))
@settings(max_examples=60, deadline=None)
def test_every_constructor_passes_the_axioms(m):
    assert check_axioms(brute_family(m), m.ground_mask).ok


def brute_is_matroid(fam: set[int], ground: int) -> bool:
    if 0 not in fam:
        return False
    for s in fam:
        if any(t not in fam for t in submasks(s)):
            return False
    for i, j in itertools.product(fam, repeat=2):
        if popcount(i) < popcount(j) and not any(i | 1 << e in fam for e in members(j & ~i)):
            return False
    return True


@pytest.mark.parametrize("n", range(4))
def test_axiom_check_agrees_with_definition_on_every_family(n):
    subsets = list(submasks(full(n)))
    for code in range(1 << len(subsets)):
        fam = {s for k, s in enumerate(subsets) if code >> k & 1}
        assert check_axioms(fam, full(n)).ok == brute_is_matroid(fam, full(n)), fam


# -- memo under threads -----------------------------------------------------------


def test_concurrent_rank_queries_agree():
    m = explicit(triangle())
    expected = {x: brute_rank(m, x) for x in submasks(m.ground_mask)}
    errors = []

    def worker():
        for _ in range(200):
            for x, r in expected.items():
                if m.rank(x) != r:
                    errors.append(x)

    threads = [threading.Thread(target=worker) for _ in range(4)]
    for t in threads:
        t.start()
    for t in threads:
        t.join()
    assert not errors
