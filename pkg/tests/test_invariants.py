import itertools

import pytest
from hypothesis import given, settings

from conftest import labeled_posets, oriented_posets, relation
from kpo import gallery
from kpo.invariants import (
    antichain_sequence,
    filter_battery,
    greedy_partition,
    jump,
    jump_sequence,
    largest_strict_convex,
    largest_weak_convex,
    max_chain_length,
    profile,
    width,
)
from kpo.poset import Kind, OrientedPoset, SizeLimitExceeded, weak_floor_mask
from kpo.transforms import bar, skew_to_poset


def brute_jump(P, b):
    if not P.lower_covers[b]:
        return 0
    return max(brute_jump(P, a) + (k is Kind.STRICT) for a, k in P.lower_covers[b])


def brute_subsets(P):
    for r in range(1, P.n + 1):
        yield from itertools.combinations(range(P.n), r)


def brute_largest_convex(P, kind):
    rel = relation(P)
    best = 0
    for S in brute_subsets(P):
        s = set(S)
        convex = all(y in s for x in S for z in S for y in range(P.n) if (x, y) in rel and (y, z) in rel)
        if convex and all(k is kind for a, b, k in P.covers if a in s and b in s):
            best = max(best, len(S))
    return best


def brute_antichains(P):
    rel = relation(P)
    counts = {}
    for S in brute_subsets(P):
        if all((a, b) not in rel and (b, a) not in rel for a, b in itertools.combinations(S, 2)):
            counts[len(S)] = counts.get(len(S), 0) + 1
    return tuple(counts[i] for i in sorted(counts))


def brute_chain(P):
    rel = relation(P)
    return max(
        (len(S) for S in brute_subsets(P) if all((a, b) in rel or (b, a) in rel for a, b in itertools.combinations(S, 2))),
        default=0,
    )


def test_jump_examples():
    strict3 = OrientedPoset(3, ((0, 1, "s"), (1, 2, "s")))
    assert jump(strict3, 2) == 2 and jump(strict3, 0) == 0
    # top element of the left jump-pair poset
    assert jump(gallery.JUMP_LEFT, 4) == 1
    assert jump_sequence(gallery.JUMP_LEFT) == jump_sequence(gallery.JUMP_RIGHT) == (3, 2)
    assert jump_sequence(bar(gallery.JUMP_LEFT)) == jump_sequence(bar(gallery.JUMP_RIGHT)) == (2, 2, 1)
    assert jump_sequence(gallery.FILTER_MISS_LEFT) == (5,)
    assert jump_sequence(OrientedPoset(0)) == ()


@settings(max_examples=200, deadline=None)
@given(oriented_posets(max_n=6))
def test_jump_sequence_is_greedy_partition(P):
    assert jump_sequence(P) == greedy_partition(P)
    assert sum(jump_sequence(P)) == P.n
    assert all(j >= 1 for j in jump_sequence(P))
    assert [jump(P, v) for v in range(P.n)] == [brute_jump(P, v) for v in range(P.n)]
    if P.n:
        assert jump_sequence(P)[0] == bin(weak_floor_mask(P)).count("1")


@settings(max_examples=120, deadline=None)
@given(oriented_posets(max_n=6))
def test_subset_invariants_against_brute_force(P):
    assert largest_weak_convex(P) == brute_largest_convex(P, Kind.WEAK)
    assert largest_strict_convex(P) == brute_largest_convex(P, Kind.STRICT)
    assert antichain_sequence(P) == brute_antichains(P)
    assert width(P) == len(brute_antichains(P))
    assert max_chain_length(P) == brute_chain(P)


@settings(max_examples=100, deadline=None)
@given(labeled_posets(max_n=6, min_n=1))
def test_natural_mechanisms(P):
    N = P.skeleton()
    assert len(jump_sequence(bar(N))) == max_chain_length(N)
    assert largest_strict_convex(N) == width(N)
    assert jump_sequence(N) == (N.n,)
    assert largest_weak_convex(N) == N.n


def test_convex_examples():
    strict2 = OrientedPoset(2, ((0, 1, "s"),))
    assert largest_weak_convex(strict2) == 1
    assert largest_weak_convex(strict2.skeleton()) == 2
    with pytest.raises(SizeLimitExceeded):
        largest_weak_convex(OrientedPoset(13))
    with pytest.raises(SizeLimitExceeded):
        antichain_sequence(OrientedPoset(13))


def test_antichain_and_width_anchors():
    assert antichain_sequence(gallery.ANTICHAIN_LEFT) == antichain_sequence(gallery.ANTICHAIN_RIGHT) == (7, 11, 3)
    assert [width(skew_to_poset(s)) for s in gallery.RIBBON_SHAPES] == [4, 5]
    chain = OrientedPoset(4, ((0, 1, "w"), (1, 2, "s"), (2, 3, "w")))
    assert antichain_sequence(chain) == (4,)


def test_filter_battery_examples():
    assert filter_battery(gallery.FILTER_MISS_LEFT, gallery.FILTER_MISS_RIGHT).maybe_equal
    assert filter_battery(gallery.JUMP_LEFT, gallery.JUMP_RIGHT).maybe_equal
    v = filter_battery(OrientedPoset(2, ((0, 1, "w"),)), OrientedPoset(2))
    assert not v.maybe_equal and "linext_count" in v.distinguished_by
    assert v.to_json()["verdict"] == "DistinguishedBy"
    # sizes differ
    assert filter_battery(OrientedPoset(1), OrientedPoset(2)).distinguished_by[0] == "n"


def test_filter_natural_clauses():
    # two naturally labeled posets with the same number of linear extensions
    # but different minimal counts are separated only by the natural clause
    A = OrientedPoset(3, ((0, 2, "w"), (1, 2, "w")))
    B = OrientedPoset(3, ((0, 1, "w"), (0, 2, "w")))
    v = filter_battery(A, B)
    assert "minimal_count" in v.distinguished_by and "maximal_count" in v.distinguished_by
    # outside the natural case these counts certify nothing
    assert "minimal_count" not in filter_battery(bar(A), bar(B)).distinguished_by


def test_profile_json_fields():
    d = profile(gallery.V21).to_json()
    assert list(d) == [
        "n",
        "linext_count",
        "jump",
        "jump_bar",
        "jump_star",
        "jump_bar_star",
        "largest_weak_convex",
        "largest_strict_convex",
        "max_chain_length",
        "width",
        "antichain_sequence",
        "minimal_count",
        "maximal_count",
        "naturally_labeled",
    ]
    assert d["jump"] == [2, 1] and d["linext_count"] == 2
