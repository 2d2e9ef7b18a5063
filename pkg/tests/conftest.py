"""Shared brute-force oracles and hypothesis strategies.

The oracles work from the bare definitions (permutations, all maps into a
finite set of values) and deliberately share no code with the package
beyond the poset container.
"""

from __future__ import annotations

import itertools
from collections import Counter

import pytest
from hypothesis import strategies as st

from kpo.poset import Kind, OrientedPoset, from_relation

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


def relation(P: OrientedPoset) -> set[tuple[int, int]]:
    """Strict order relation by closing the covers."""
    rel = {(a, b) for a, b, _ in P.covers}
    changed = True
    while changed:
        changed = False
        for (a, b), (c, d) in itertools.product(list(rel), repeat=2):
            if b == c and (a, d) not in rel:
                rel.add((a, d))
                changed = True
    return rel


def brute_linear_extensions(P: OrientedPoset) -> list[tuple[int, ...]]:
    out = []
    for perm in itertools.permutations(range(P.n)):
        pos = {v: i for i, v in enumerate(perm)}
        if all(pos[a] < pos[b] for a, b, _ in P.covers):
            out.append(perm)
    return out


def brute_labelings(P: OrientedPoset) -> list[tuple[int, ...]]:
    """Bijections to 1..n inducing exactly P's edge kinds."""
    out = []
    for labels in itertools.permutations(range(1, P.n + 1)):
        if all((labels[a] < labels[b]) == (k is Kind.WEAK) for a, b, k in P.covers):
            out.append(labels)
    return out


def brute_k_monomials(P: OrientedPoset, nvars: int) -> Counter:
    """Monomials of K in x_1..x_nvars, one per P-partition with values <= nvars."""
    out: Counter = Counter()
    for f in itertools.product(range(1, nvars + 1), repeat=P.n):
        if all(f[a] < f[b] if k is Kind.STRICT else f[a] <= f[b] for a, b, k in P.covers):
            exps = [0] * nvars
            for v in f:
                exps[v - 1] += 1
            out[tuple(exps)] += 1
    return out


def brute_fundamental_monomials(S: frozenset[int], n: int, nvars: int) -> Counter:
    """F_{S,n}: weakly increasing index words, strict at positions in S."""
    out: Counter = Counter()
    for idx in itertools.combinations_with_replacement(range(nvars), n):
        if all(idx[i - 1] < idx[i] for i in S):
            exps = [0] * nvars
            for i in idx:
                exps[i] += 1
            out[tuple(exps)] += 1
    return out


def brute_iso_key(P: OrientedPoset) -> tuple:
    """Lexicographically least relabeled cover list over all permutations."""
    return min(
        tuple(sorted((perm[a], perm[b], k.value) for a, b, k in P.covers))
        for perm in itertools.permutations(range(P.n))
    )


def brute_poset_count(n: int) -> int:
    """Unlabeled posets on n elements from all transitive upper-triangular relations."""
    slots = list(itertools.combinations(range(n), 2))
    keys = set()
    for bits in range(1 << len(slots)):
        rel = {slots[i] for i in range(len(slots)) if (bits >> i) & 1}
        if any((a, c) not in rel for (a, b) in rel for (b2, c) in rel if b == b2):
            continue
        P = from_relation(n, rel)
        keys.add(brute_iso_key(P))
    return len(keys)


@st.composite
def oriented_posets(draw, max_n: int = 6, min_n: int = 0):
    n = draw(st.integers(min_n, max_n))
    slots = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(slots), max_size=len(slots)))
    skel = from_relation(n, [s for s, c in zip(slots, chosen) if c])
    kinds = draw(st.lists(st.sampled_from([Kind.WEAK, Kind.STRICT]), min_size=len(skel.covers), max_size=len(skel.covers)))
    P = OrientedPoset(n, tuple((a, b, k) for (a, b, _), k in zip(skel.covers, kinds)))
    perm = draw(st.permutations(range(n)))
    return P.relabel(perm)


@st.composite
def labeled_posets(draw, max_n: int = 6, min_n: int = 0):
    """Realizable posets, built from an ordering and a random labeling."""
    n = draw(st.integers(min_n, max_n))
    slots = list(itertools.combinations(range(n), 2))
    chosen = draw(st.lists(st.booleans(), min_size=len(slots), max_size=len(slots)))
    skel = from_relation(n, [s for s, c in zip(slots, chosen) if c])
    labels = draw(st.permutations(range(1, n + 1)))
    covers = tuple((a, b, Kind.WEAK if labels[a] < labels[b] else Kind.STRICT) for a, b, _ in skel.covers)
    perm = draw(st.permutations(range(n)))
    return OrientedPoset(n, covers).relabel(perm)


@pytest.fixture(scope="session")
def census5():
    from kpo.census import run_census, tag_explanations

    return tag_explanations(run_census(5))
