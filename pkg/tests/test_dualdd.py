"""The subset surjections, their preimages, and collision witnesses."""

from itertools import combinations

import pytest

from ddlab import dualdd, gf2core
from ddlab import pregeometry as pg
from ddlab.errors import (
    CacheIncomplete,
    DegenerateGeometry,
    DimensionExhausted,
    GroundExhausted,
)


def oracle_strip_max_subspaces(s, dim):
    """Independent evaluation of the zero-branch via full enumeration."""
    inside = [w.members for w in gf2core.enumerate_subspaces(dim)
              if w.members <= s]
    top = max(len(w) for w in inside)
    union = frozenset().union(*(w for w in inside if len(w) == top))
    return frozenset(s) - union


def test_surject_linear_examples():
    assert dualdd.surject_linear({0}, 1) == frozenset()
    assert dualdd.surject_linear({1}, 3) == {0, 1}
    # maximal subspaces inside {0,1,2} are the lines {0,1} and {0,2}
    assert dualdd.surject_linear({0, 1, 2}, 2) == frozenset()
    assert dualdd.surject_linear(set(), 2) == {0}


def test_surject_linear_matches_enumeration_oracle():
    for dim in (2, 3):
        for mask in range(1 << (1 << dim)):
            s = frozenset(v for v in range(1 << dim) if mask >> v & 1)
            if 0 not in s:
                continue
            assert dualdd.surject_linear(s, dim) \
                == oracle_strip_max_subspaces(s, dim)


def test_preimage_linear_examples():
    trace = dualdd.preimage_linear_trace({1}, 3)
    assert trace.picked == (2, 4)
    assert trace.source == {0, 1, 2, 4, 6}
    assert dualdd.surject_linear(trace.source, 3) == {1}

    assert dualdd.preimage_linear({0, 3}, 2) == {3}

    with pytest.raises(DimensionExhausted):
        dualdd.preimage_linear({1, 2}, 3)


def test_preimage_linear_cardinality_identity():
    for dim, max_t in ((4, 1), (5, 2)):
        nonzero = range(1, 1 << dim)
        for size in range(max_t + 1):
            for combo in combinations(nonzero, size):
                trace = dualdd.preimage_linear_trace(frozenset(combo), dim)
                assert trace.cardinality_identity
                assert len(trace.spanned) == 1 << (size + 1)


def test_minimal_nondegenerate_sizes():
    assert len(dualdd.minimal_nondegenerate_set(pg.linear_operator(3))) == 2
    assert len(dualdd.minimal_nondegenerate_set(pg.affine_operator(3))) == 3
    with pytest.raises(DegenerateGeometry):
        dualdd.minimal_nondegenerate_set(pg.identity_operator(5))
    with pytest.raises(DegenerateGeometry):
        dualdd.minimal_nondegenerate_set(
            pg.degenerate_operator([[0, 1], [2, 3]]))


def test_general_instance_layout():
    inst = dualdd.GeneralSurjection.build(pg.linear_operator(4))
    assert inst.anchor == frozenset()
    assert inst.anchor_closure == {0}
    assert len(inst.closed_family) == 67  # all subspaces contain cl(empty)

    aff = dualdd.GeneralSurjection.build(pg.affine_operator(4))
    assert len(aff.witness) == 3 and len(aff.anchor) == 1
    for w in aff.closed_family:
        assert aff.op.is_closed(w) and aff.anchor_closure <= w


def test_surject_general_cases():
    inst = dualdd.GeneralSurjection.build(pg.linear_operator(4))
    # the deleted-zero side of a line collapses to empty
    assert dualdd.surject_general(inst, {1}) == frozenset()
    # sets meeting cl(anchor) pass through unchanged
    assert dualdd.surject_general(inst, {0, 1}) == {0, 1}
    assert dualdd.surject_general(inst, {0, 3}) == {0, 3}
    for w in inst.closed_family:
        assert dualdd.surject_general(inst, w - inst.anchor_closure) \
            == frozenset()


def test_surject_general_specializes_to_linear():
    # zero-free sets: strip the union of maximal subspaces W with
    # W - {0} inside the set, computed independently by enumeration
    inst = dualdd.GeneralSurjection.build(pg.linear_operator(3))
    subs = [w.members for w in gf2core.enumerate_subspaces(3)]
    nonzero = range(1, 8)
    for size in range(5):
        for combo in combinations(nonzero, size):
            s = frozenset(combo)
            inside = [w for w in subs if w - {0} <= s]
            top = max(len(w) for w in inside)
            union = frozenset().union(
                *(w for w in inside if len(w) == top))
            assert dualdd.surject_general(inst, s) == s - union


def test_preimage_general_linear_and_affine():
    inst = dualdd.GeneralSurjection.build(pg.linear_operator(4))
    trace = dualdd.preimage_general_trace(inst, {1})
    assert trace.intersection_ok and trace.unique_max_ok
    assert dualdd.surject_general(inst, trace.source) == {1}
    assert dualdd.preimage_general(inst, {0}) == {0}

    aff = dualdd.GeneralSurjection.build(pg.affine_operator(4))
    outside = sorted(aff.op.ground - aff.anchor_closure)
    target = frozenset([outside[0]])
    trace = dualdd.preimage_general_trace(aff, target)
    assert trace.intersection_ok and trace.unique_max_ok
    assert dualdd.surject_general(aff, trace.source) == target


def test_preimage_general_ground_exhausted():
    inst = dualdd.GeneralSurjection.build(pg.linear_operator(3))
    with pytest.raises(GroundExhausted):
        dualdd.preimage_general(inst, {1, 2, 4})


def test_cache_incomplete():
    op = pg.linear_operator(3)
    witness = dualdd.minimal_nondegenerate_set(op)
    inst = dualdd.GeneralSurjection(op, witness, frozenset(), max_card=2)
    with pytest.raises(CacheIncomplete):
        dualdd.surject_general(inst, {1, 2, 3})
    with pytest.raises(CacheIncomplete):
        dualdd.GeneralSurjection(op, witness, frozenset(), max_card=0)


def test_collision_pairs_linear():
    assert dualdd.collision_pairs(2, 1) \
        == [(frozenset({0}), frozenset({0, 1}))]
    pairs = dualdd.collision_pairs(1, 2)
    assert pairs == [(frozenset({0}), frozenset({0, 1})),
                     (frozenset({0, 1}), frozenset({0}))]
    for first, second in dualdd.collision_pairs(3, 10):
        assert first != second
        assert dualdd.surject_linear(first, 3) \
            == dualdd.surject_linear(second, 3)


def test_collision_pairs_general():
    inst = dualdd.GeneralSurjection.build(pg.linear_operator(3))
    pairs = dualdd.collision_pairs(inst, 1)
    assert pairs == [(frozenset({1}), frozenset({2}))]
    for first, second in dualdd.collision_pairs(inst, 6):
        assert dualdd.surject_general(inst, first) \
            == dualdd.surject_general(inst, second)
