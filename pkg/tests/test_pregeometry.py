"""Pregeometry instances and axiom checkers."""

import pytest

from ddlab import pregeometry as pg
from ddlab.errors import NoIndependentSet, SearchBudgetExceeded


def brute_affine_hull(points, dim):
    """Oracle: closure under all odd-cardinality XOR sums.

    Odd sums over multisets reduce to odd sums over plain subsets, so
    enumerating subset masks is exhaustive.
    """
    points = sorted(points)
    out = set()
    for mask in range(1, 1 << len(points)):
        if bin(mask).count("1") % 2 == 1:
            acc = 0
            for i, p in enumerate(points):
                if mask >> i & 1:
                    acc ^= p
            out.add(acc)
    return out


def test_linear_operator_basics():
    op = pg.linear_operator(3)
    assert op.cl(frozenset()) == {0}
    assert op.cl({1, 2}) == {0, 1, 2, 3}
    assert op.is_closed({0, 1})
    assert not op.is_closed({1})


def test_affine_operator_matches_odd_sum_oracle():
    import random

    op = pg.affine_operator(4)
    rng = random.Random(21)
    assert op.cl(frozenset()) == frozenset()
    for _ in range(60):
        pts = frozenset(rng.getrandbits(4) for _ in range(rng.randint(0, 5)))
        expect = brute_affine_hull(pts, 4) if pts else set()
        assert op.cl(pts) == expect
    # two points are affinely closed over GF(2)
    assert op.cl({3, 5}) == {3, 5}
    assert op.cl({1, 2, 4}) == {1, 2, 4, 7}


def test_degenerate_operator():
    op = pg.degenerate_operator([[0, 1], [2]])
    assert op.cl({0}) == {0, 1}
    assert op.cl({2}) == {2}
    assert op.cl(frozenset()) == frozenset()
    with pytest.raises(ValueError):
        pg.degenerate_operator([[0, 1], [1, 2]])
    with pytest.raises(ValueError):
        pg.degenerate_operator([[0], [2]])


def test_degenerate_union_law_exhaustive():
    # closure of any non-empty set is the union of its pointwise closures,
    # over every subset of an 8-point ground set
    op = pg.degenerate_operator([[0, 1, 2], [3, 4], [5], [6, 7]])
    for mask in range(1, 1 << 8):
        s = frozenset(x for x in range(8) if mask >> x & 1)
        union = frozenset().union(*(op.cl({a}) for a in s))
        assert op.cl(s) == union


def test_closure_axioms_pass_on_real_geometries():
    assert pg.check_closure_axioms(pg.linear_operator(3), 3).status == "PASS"
    assert pg.check_closure_axioms(pg.identity_operator(5), 3).status == "PASS"
    assert pg.check_closure_axioms(pg.affine_operator(3), 3).status == "PASS"


def test_closure_axioms_catch_broken_operator():
    def drop_min(s):
        return frozenset(s - {min(s)}) if s else frozenset()

    broken = pg.ClosureOperator(range(4), "broken", drop_min)
    report = pg.check_closure_axioms(broken, 2)
    assert report.status == "FAIL"
    first = report.counterexamples[0]
    assert first["clause"] == "extensivity" and first["set"] == [0]


def test_exchange_passes_on_linear_and_affine():
    assert pg.check_exchange(pg.linear_operator(3), 2).status == "PASS"
    assert pg.check_exchange(pg.affine_operator(3), 2).status == "PASS"


def test_exchange_catches_initial_segment_operator():
    # cl(S) = {0..max(S)} is a closure operator without exchange
    def initial_segment(s):
        return frozenset(range(max(s) + 1)) if s else frozenset()

    broken = pg.ClosureOperator(range(4), "segment", initial_segment)
    assert pg.check_closure_axioms(broken, 2).status == "PASS"
    report = pg.check_exchange(broken, 2)
    assert report.status == "FAIL"
    first = report.counterexamples[0]
    assert first["set"] == [] and (first["a"], first["b"]) == (0, 1)


def test_local_homogeneity_bounded_pass():
    r = pg.check_local_homogeneity(pg.linear_operator(3), 4, 8)
    assert r.status == "BOUNDED-PASS"
    r = pg.check_local_homogeneity(pg.identity_operator(4), 3, 4)
    assert r.status == "BOUNDED-PASS"
    r = pg.check_local_homogeneity(pg.degenerate_operator([[0, 1], [2, 3]]),
                                   4, 4)
    assert r.status == "BOUNDED-PASS"


def test_local_homogeneity_fails_on_unequal_blocks():
    # moving a point of a 2-block onto a 1-block cannot preserve closures
    op = pg.degenerate_operator([[0, 1], [2]])
    r = pg.check_local_homogeneity(op, 3, 3)
    assert r.status == "FAIL"
    witness = r.counterexamples[0]
    assert witness["ambient"] == [0, 1, 2]


def test_local_homogeneity_budget():
    with pytest.raises(SearchBudgetExceeded):
        pg.check_local_homogeneity(pg.identity_operator(6), 5, 6,
                                   perm_budget=10)


def test_is_independent_examples():
    op = pg.linear_operator(3)
    assert pg.is_independent(op, {1, 2})
    assert not pg.is_independent(op, {1, 2, 3})
    assert not pg.is_independent(op, {2}, over={2})


def test_is_independent_monotone_in_base():
    # independence over a superset base implies it over any subset base
    from itertools import combinations

    op = pg.degenerate_operator([[0, 1], [2, 3], [4, 5]])
    labels = range(6)
    for s_size in range(3):
        for s in combinations(labels, s_size):
            for t_size in range(3):
                for big in combinations(labels, t_size):
                    if not pg.is_independent(op, s, over=big):
                        continue
                    for small_size in range(t_size):
                        for small in combinations(big, small_size):
                            assert pg.is_independent(op, s, over=small)


def test_verify_closure_cardinality():
    r = pg.verify_closure_cardinality(pg.linear_operator(4), 2)
    assert r.status == "PASS" and r.common_value == 4
    r = pg.verify_closure_cardinality(pg.affine_operator(3), 2)
    assert r.status == "PASS" and r.common_value == 2
    r = pg.verify_closure_cardinality(pg.identity_operator(5), 3)
    assert r.status == "PASS" and r.common_value == 3
    r = pg.verify_closure_cardinality(pg.linear_operator(3), 2,
                                      mode="sample", samples=10, seed=1)
    assert r.status == "PASS" and r.common_value == 4
    with pytest.raises(NoIndependentSet):
        pg.verify_closure_cardinality(pg.linear_operator(2), 3)


def test_closed_sets_upto():
    op = pg.linear_operator(3)
    closed = op.closed_sets_upto(8)
    assert len(closed) == 16  # all subspaces of GF(2)^3
    assert all(op.is_closed(c) for c in closed)
    affine = pg.affine_operator(3)
    small = affine.closed_sets_upto(2)
    # empty set, 8 singletons, all 28 pairs
    assert len(small) == 1 + 8 + 28
