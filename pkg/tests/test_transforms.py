import itertools
import math
from collections import Counter

import pytest
from hypothesis import given, settings

from conftest import labeled_posets, oriented_posets
from kpo import gallery
from kpo.census import canon_text, run_census
from kpo.kgen import k_equal, k_f_route, k_m_route
from kpo.poset import Kind, OrientedPoset, count_linear_extensions, realize_labeling
from kpo.qsym import FExpansion, composition_of, f_to_m, quasi_shuffle, subset_of
from kpo.transforms import (
    EMPTY,
    LAYER_KINDS,
    LAYER_LABEL_ORDER,
    POINT,
    InvalidShape,
    PreconditionViolated,
    SkewShape,
    add_bottom,
    add_top,
    bar,
    combine,
    disjoint_union,
    layered_compose,
    layered_labeling,
    ordinal_sum,
    parse_shape,
    remove_jump0,
    skew_to_poset,
    star,
)

W2 = OrientedPoset(2, ((0, 1, "w"),))
S2 = OrientedPoset(2, ((0, 1, "s"),))


def iso(P, Q):
    return canon_text(P) == canon_text(Q)


def small_labeled(max_n=3):
    out = [EMPTY]
    for n in range(1, max_n + 1):
        out += [parse for r in run_census(n) for parse in r.posets()]
    return out


@settings(max_examples=100, deadline=None)
@given(oriented_posets(max_n=6))
def test_involutions(P):
    assert bar(bar(P)) == P
    assert star(star(P)) == P
    assert iso(bar(star(P)), star(bar(P)))


def test_bar_and_star_examples():
    assert bar(W2) == S2
    assert iso(star(gallery.V21), gallery.LAMBDA21)
    comp = {(1 << 2) - 1 - S: c for S, c in k_f_route(gallery.V21).multiset.items()}
    assert dict(k_f_route(bar(gallery.V21)).multiset) == comp


@settings(max_examples=100, deadline=None)
@given(labeled_posets(max_n=6))
def test_descent_laws(P):
    n = P.n
    full = (1 << (n - 1)) - 1 if n else 0
    F = k_f_route(P).multiset
    assert k_f_route(bar(P)).multiset == Counter({full & ~S: c for S, c in F.items()})
    rev = Counter({subset_of(tuple(reversed(composition_of(S, n)))) if n else 0: c for S, c in F.items()})
    assert k_f_route(star(P)).multiset == rev
    assert f_to_m(FExpansion(n, rev)) == k_m_route(star(P))


def test_disjoint_union_and_product():
    assert disjoint_union(gallery.V21, EMPTY) == gallery.V21
    A, B = gallery.V21, W2
    assert k_m_route(disjoint_union(A, B)).to_poly() == quasi_shuffle(k_m_route(A), k_m_route(B))
    c3 = OrientedPoset(3, ((0, 1, "w"), (1, 2, "s")))
    assert count_linear_extensions(disjoint_union(c3, W2)) == math.comb(5, 2)


def test_ordinal_sum():
    assert ordinal_sum(POINT, POINT, "s") == S2
    assert ordinal_sum(POINT, POINT, Kind.WEAK) == W2
    P = ordinal_sum(gallery.V21, gallery.LAMBDA21, "s")
    assert P.n == 6 and len(P.covers) == 2 + 2 + 2 * 2


def test_layered_examples():
    assert layered_compose(gallery.V21, EMPTY, EMPTY, EMPTY, EMPTY) == gallery.V21
    assert iso(layered_compose(gallery.V21, EMPTY, EMPTY, POINT, POINT), gallery.TRIPLE_LEFT)
    assert iso(layered_compose(gallery.LAMBDA21, EMPTY, EMPTY, POINT, POINT), gallery.TRIPLE_RIGHT)
    assert iso(layered_compose(POINT, EMPTY, EMPTY, EMPTY, gallery.V21), ordinal_sum(gallery.V21, POINT, "s"))


def test_layered_kinds_match_label_order():
    # the edge-kind table and the block label order must encode the same rule
    rank = {b: i for i, b in enumerate(LAYER_LABEL_ORDER)}
    for (lo, hi), kind in LAYER_KINDS.items():
        assert (rank[lo] < rank[hi]) == (kind is Kind.WEAK)


def test_layered_always_realizable():
    pool = small_labeled(2)
    for blocks in itertools.product(pool[:4], repeat=5):
        R = layered_compose(*blocks)
        labs = [realize_labeling(B) for B in blocks]
        assert layered_labeling(blocks, labs).consistent_with(R)


def test_layered_preserves_equality():
    pairs = [(gallery.V21, gallery.LAMBDA21), (POINT, POINT), (EMPTY, EMPTY), (W2, W2), (S2, S2)]
    for choice in itertools.product(range(len(pairs)), repeat=5):
        if sum(pairs[i][0].n for i in choice) > 7 or 0 not in choice:
            continue
        P = layered_compose(*(pairs[i][0] for i in choice))
        Q = layered_compose(*(pairs[i][1] for i in choice))
        assert k_equal(P, Q)


def test_combine_examples():
    assert combine("ne", POINT, POINT) == W2
    assert combine("Ne", POINT, POINT) == S2
    R = combine("NeNw", W2, W2)
    assert not R.realizable
    with pytest.raises(PreconditionViolated):
        combine("ne", OrientedPoset(2), POINT)
    with pytest.raises(PreconditionViolated):
        combine("nenw", gallery.V21, gallery.LAMBDA21)
    with pytest.raises(ValueError):
        combine("sw", POINT, POINT)


def test_combine_drops_implied_covers():
    # a single-point first argument makes the second poset's weak cover redundant
    R = combine("nenw", POINT, W2)
    assert R.n == 3 and len(R.covers) == 2
    with pytest.raises(PreconditionViolated):
        combine("nenw", POINT, S2)


def _unique(P, side):
    return len(P.minimal if side == "min" else P.maximal) == 1


def test_disjoint_union_splits():
    pool = [P for P in small_labeled(3) if P.n]
    checked = 0
    for A, B in itertools.product(pool, repeat=2):
        if not (_unique(A, "min") and _unique(B, "max")):
            continue
        du = k_m_route(disjoint_union(A, B))
        assert du == k_m_route(ordinal_sum(B, A, "s")) + k_m_route(combine("ne", A, B))
        assert du == k_m_route(ordinal_sum(B, A, "w")) + k_m_route(combine("Ne", A, B))
        checked += 1
    assert checked > 50


def _capped(P):
    return ordinal_sum(ordinal_sum(POINT, P, "w"), POINT, "w")


def test_combination_operators_preserve_equality():
    left, right = _capped(gallery.V21), _capped(gallery.LAMBDA21)
    others = [POINT, W2, S2]
    for op in ("ne", "Ne", "nenw", "NeNw", "neNw"):
        for other in others:
            for a, b in ((left, other), (other, left)):
                a2 = right if a is left else a
                b2 = right if b is left else b
                try:
                    P = combine(op, a, b)
                except PreconditionViolated:
                    continue
                assert k_equal(P, combine(op, a2, b2))
        assert k_equal(combine(op, left, left), combine(op, right, right))


def test_remove_jump0():
    assert remove_jump0(gallery.FILTER_MISS_LEFT) == EMPTY
    strict3 = OrientedPoset(3, ((0, 1, "s"), (1, 2, "s")))
    assert iso(remove_jump0(strict3), S2)
    for A, B in (gallery.JUMP_LEFT, gallery.JUMP_RIGHT), (gallery.CHAIN_EXT_LEFT, gallery.CHAIN_EXT_RIGHT):
        assert k_equal(remove_jump0(A), remove_jump0(B))
    # jump-0 removal after both involutions gives the s21 pair
    assert iso(remove_jump0(bar(star(gallery.JUMP_LEFT))), gallery.V21)
    assert iso(remove_jump0(bar(star(gallery.JUMP_RIGHT))), gallery.LAMBDA21)


def test_chain_extension_helpers():
    assert add_top(EMPTY, "w") == POINT
    assert iso(add_bottom(POINT, "s"), S2)
    P = gallery.V21
    assert iso(ordinal_sum(ordinal_sum(ordinal_sum(POINT, P, "w"), POINT, "w"), POINT, "s"), gallery.CHAIN_EXT_LEFT)
    assert k_equal(gallery.CHAIN_EXT_LEFT, gallery.CHAIN_EXT_RIGHT)


def test_skew_shapes():
    assert iso(skew_to_poset("21"), gallery.V21)
    P = skew_to_poset("443/21")
    assert P.n == 8 and P.realizable
    assert parse_shape("10,9,2/3") == SkewShape((10, 9, 2), (3,))
    assert str(SkewShape((4, 4, 3), (2, 1))) == "443/21"
    assert str(parse_shape("10,2/1")) == "10,2/1"
    for bad in ("", "12", "3/4", "2/2", "a1"):
        with pytest.raises(InvalidShape):
            parse_shape(bad)


def test_skew_rotation_is_star():
    for shape in ("21", "443/21", "211", "54221/311", "333/21", "4"):
        S = parse_shape(shape)
        assert iso(skew_to_poset(S.rotated()), star(skew_to_poset(S)))


def test_s211_pair():
    assert iso(skew_to_poset("211"), gallery.S211_LEFT)
    assert k_equal(gallery.S211_LEFT, gallery.S211_RIGHT)
    assert count_linear_extensions(gallery.S211_LEFT) == 3


@settings(max_examples=100, deadline=None)
@given(oriented_posets(max_n=6))
def test_strict_bottom_is_the_whole_floor(P):
    assert iso(remove_jump0(add_bottom(P, "s")), P)
