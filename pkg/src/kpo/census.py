"""Exhaustive small-n census of K-equivalence classes.

The census unit is a realizable oriented poset up to isomorphism.  Work is
sharded by unlabeled skeleton; shards are merged by sorting, so the output
does not depend on the number of workers.
"""

from __future__ import annotations

import itertools
import json
import math
from collections import Counter, defaultdict
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Iterator, Sequence

from .invariants import SOUND_FIELDS, profile
from .kgen import k_m_route
from .poset import (
    CycleDetected,
    Kind,
    OrientedPoset,
    SizeLimitExceeded,
    _bits,
    canonical_form,
    count_linear_extensions,
    parse_poset,
)
from .transforms import (
    COMBINE_OPS,
    EMPTY,
    PreconditionViolated,
    SkewShape,
    bar,
    combine,
    disjoint_union,
    layered_compose,
    skew_to_poset,
    star,
)

MAX_ENUM_N = 7

SINGLETON = "SINGLETON"
STAR_PAIR = "STAR_PAIR"
BAR_CLOSED = "BAR_CLOSED"
CHAIN_EXT_S21 = "CHAIN_EXT_S21"
CHAIN_EXT_S211 = "CHAIN_EXT_S211"
CHAIN_EXT_S211_BAR = "CHAIN_EXT_S211_BAR"
SKEW_MEMBERS = "SKEW_MEMBERS"
SELF_STAR = "SELF_STAR"
SELF_BAR_STAR = "SELF_BAR_STAR"
UNEXPLAINED = "UNEXPLAINED"
# construction families that generate explained equalities
DISJOINT_UNION = "DISJOINT_UNION"
LAYERED = "LAYERED"
COMBINED = "COMBINED"
INVOLUTION_IMAGE = "INVOLUTION_IMAGE"


def canon_text(P: OrientedPoset) -> str:
    return canonical_form(P).key.decode()


# -- enumeration ------------------------------------------------------------------


def _ideals(P: OrientedPoset) -> Iterator[int]:
    down = P.down_masks
    for S in range(1 << P.n):
        if all(down[v] & ~S == 0 for v in _bits(S)):
            yield S


def _add_maximal(P: OrientedPoset, ideal: int) -> OrientedPoset:
    below = [v for v in _bits(ideal) if not (P.up_masks[v] & ideal)]
    return OrientedPoset(P.n + 1, tuple(P.covers) + tuple((v, P.n, Kind.WEAK) for v in below))


@lru_cache(maxsize=None)
def _skeletons(n: int) -> tuple[OrientedPoset, ...]:
    if n == 0:
        return (EMPTY,)
    seen: dict[str, OrientedPoset] = {}
    for P in _skeletons(n - 1):
        for ideal in _ideals(P):
            Q = _add_maximal(P, ideal)
            seen.setdefault(canon_text(Q), Q)
    return tuple(parse_poset(t) for t in sorted(seen))


def enumerate_posets(n: int) -> list[OrientedPoset]:
    """One all-weak representative per unlabeled poset on n elements.

    A poset on n elements is a poset on n-1 elements plus a new maximal
    element whose down-set is an order ideal, so adding a maximal element
    in every possible way to every smaller representative reaches them all.
    """
    if n > MAX_ENUM_N:
        raise SizeLimitExceeded(f"poset enumeration limited to n <= {MAX_ENUM_N}")
    if n < 0:
        raise ValueError("n must be nonnegative")
    return list(_skeletons(n))


def enumerate_orientations(skeleton: OrientedPoset) -> list[OrientedPoset]:
    """Realizable kind assignments of ``skeleton``, one per isomorphism class."""
    pairs = [(a, b) for a, b, _ in skeleton.covers]
    seen: dict[str, OrientedPoset] = {}
    for kinds in itertools.product((Kind.WEAK, Kind.STRICT), repeat=len(pairs)):
        P = OrientedPoset(skeleton.n, tuple((a, b, k) for (a, b), k in zip(pairs, kinds)))
        if not P.realizable:
            continue
        key = canon_text(P)
        if key not in seen:
            seen[key] = parse_poset(key)
    return [seen[k] for k in sorted(seen)]


# -- records ------------------------------------------------------------------------


@dataclass
class CensusRecord:
    fingerprint: bytes
    n: int
    members: list[str]
    profile: dict
    tags: list[str] = field(default_factory=list)

    @property
    def size(self) -> int:
        return len(self.members)

    def posets(self) -> list[OrientedPoset]:
        return [parse_poset(m) for m in self.members]

    def to_json(self) -> dict:
        return {
            "fp": self.fingerprint.hex(),
            "n": self.n,
            "members": self.members,
            "size": self.size,
            "profile": self.profile,
            "tags": self.tags,
        }

    @classmethod
    def from_json(cls, data: dict) -> "CensusRecord":
        return cls(bytes.fromhex(data["fp"]), data["n"], list(data["members"]), data["profile"], list(data["tags"]))


def merge_profiles(profiles: Sequence[dict]) -> dict:
    """Field-wise agreement of member profiles; disagreeing fields become None."""
    out = {}
    for key in profiles[0]:
        vals = [p[key] for p in profiles]
        out[key] = vals[0] if all(v == vals[0] for v in vals) else None
    return out


def _shard(args: tuple[OrientedPoset, bool]) -> list[tuple[bytes, str, dict]]:
    skel, natural = args
    posets = [skel] if natural else enumerate_orientations(skel)
    out = []
    for P in posets:
        out.append((k_m_route(P).fingerprint(), canon_text(P), profile(P).to_json()))
    return out


def census_entries(n: int, natural: bool = False, jobs: int = 1) -> list[tuple[bytes, str, dict]]:
    skeletons = enumerate_posets(n)
    work = [(s, natural) for s in skeletons]
    if jobs <= 1:
        parts = list(map(_shard, work))
    else:
        with ProcessPoolExecutor(max_workers=jobs) as ex:
            parts = list(ex.map(_shard, work, chunksize=max(1, len(work) // (4 * jobs))))
    entries = [e for part in parts for e in part]
    entries.sort(key=lambda e: (e[0], e[1]))
    return entries


def run_census(n: int, natural: bool = False, jobs: int = 1) -> list[CensusRecord]:
    """Group realizable oriented posets on n elements by K; records sorted by fingerprint."""
    if n > MAX_ENUM_N:
        raise SizeLimitExceeded(f"census limited to n <= {MAX_ENUM_N}")
    records = []
    for fp, group in itertools.groupby(census_entries(n, natural, jobs), key=lambda e: e[0]):
        group = list(group)
        records.append(CensusRecord(fp, n, [g[1] for g in group], merge_profiles([g[2] for g in group])))
    return records


@lru_cache(maxsize=None)
def _full_census(n: int) -> tuple[CensusRecord, ...]:
    return tuple(run_census(n))


# -- chain extensions ---------------------------------------------------------------


def _strip_options(P: OrientedPoset) -> list[tuple[str, Kind, OrientedPoset]]:
    """Ways to undo one chain-extension step: remove a unique top or bottom
    whose covers all have one kind."""
    out = []
    for side, ext, covers in (("top", P.maximal, P.lower_covers), ("bottom", P.minimal, P.upper_covers)):
        if len(ext) != 1 or P.n < 2:
            continue
        kinds = {k for _, k in covers[ext[0]]}
        if len(kinds) == 1:
            out.append((side, kinds.pop(), P.induced(P.full_mask & ~(1 << ext[0]))[0]))
    return out


def _pair_key(P: OrientedPoset, Q: OrientedPoset) -> frozenset:
    return frozenset((canon_text(P), canon_text(Q)))


S21_PAIR = _pair_key(skew_to_poset("21"), skew_to_poset("22/1"))
S211_PAIR = _pair_key(skew_to_poset("211"), skew_to_poset("222/11"))
S211_BAR_PAIR = _pair_key(bar(skew_to_poset("211")), bar(skew_to_poset("222/11")))
CHAIN_BASES = {CHAIN_EXT_S21: S21_PAIR, CHAIN_EXT_S211: S211_PAIR, CHAIN_EXT_S211_BAR: S211_BAR_PAIR}


def chain_extension_base(P: OrientedPoset, Q: OrientedPoset) -> str | None:
    """Name of the basic equivalence that the pair (P, Q) is a chain extension of.

    Both posets are stripped in lockstep: the same side, the same edge kind.
    """
    bases = {v: k for k, v in CHAIN_BASES.items()}
    seen: set = set()

    def dfs(P: OrientedPoset, Q: OrientedPoset) -> str | None:
        key = _pair_key(P, Q)
        if key in bases:
            return bases[key]
        if key in seen or P.n <= 3:
            return None
        seen.add(key)
        qopts = {(s, k): R for s, k, R in _strip_options(Q)}
        for side, kind, Pr in _strip_options(P):
            Qr = qopts.get((side, kind))
            if Qr is not None:
                found = dfs(Pr, Qr)
                if found:
                    return found
        return None

    if P.n != Q.n or canon_text(P) == canon_text(Q):
        return None
    return dfs(P, Q)


def is_chain_extension_of(P: OrientedPoset, base: OrientedPoset) -> bool:
    """Unlabeled test: can ``base`` be reached by deleting unique tops/bottoms?"""
    target = canon_text(base.skeleton())

    @lru_cache(maxsize=None)
    def rec(text: str) -> bool:
        if text == target:
            return True
        S = parse_poset(text)
        if S.n <= base.n:
            return False
        for ext in (S.maximal, S.minimal):
            if len(ext) == 1:
                if rec(canon_text(S.induced(S.full_mask & ~(1 << ext[0]))[0])):
                    return True
        return False

    return rec(canon_text(P.skeleton()))


# -- skew posets --------------------------------------------------------------------


def _connected(P: OrientedPoset) -> bool:
    return len(components(P)) <= 1


def components(P: OrientedPoset) -> list[OrientedPoset]:
    parent = list(range(P.n))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for a, b, _ in P.covers:
        parent[find(a)] = find(b)
    groups: dict[int, int] = defaultdict(int)
    for v in range(P.n):
        groups[find(v)] |= 1 << v
    return [P.induced(m)[0] for m in sorted(groups.values())]


@lru_cache(maxsize=None)
def connected_skew_posets(n: int) -> frozenset[str]:
    """Canonical texts of posets of connected skew shapes with n cells."""
    out = set()
    for rows in range(1, n + 1):
        for outer in _partitions_fitting(rows, n):
            for inner in _inner_shapes(outer):
                if sum(outer) - sum(inner) != n or inner[-1] == outer[-1]:
                    continue
                P = skew_to_poset(SkewShape(outer, inner))
                if _connected(P):
                    out.add(canon_text(P))
    return frozenset(out)


def _partitions_fitting(rows: int, n: int) -> Iterator[tuple[int, ...]]:
    """Weakly decreasing sequences of ``rows`` positive parts, each at most n."""
    def rec(k: int, cap: int) -> Iterator[tuple[int, ...]]:
        if k == 0:
            yield ()
            return
        for p in range(cap, 0, -1):
            for rest in rec(k - 1, p):
                yield (p,) + rest

    # a connected shape with n cells and r rows has width at most n - r + 1
    yield from rec(rows, n - rows + 1)


def _inner_shapes(outer: tuple[int, ...]) -> Iterator[tuple[int, ...]]:
    def rec(i: int, cap: int) -> Iterator[tuple[int, ...]]:
        if i == len(outer):
            yield ()
            return
        for m in range(min(cap, outer[i] - 1) if i == 0 else min(cap, outer[i]), -1, -1):
            for rest in rec(i + 1, m):
                yield (m,) + rest

    yield from rec(0, outer[0])


@lru_cache(maxsize=None)
def skew_posets(n: int) -> frozenset[str]:
    """Canonical texts of all skew-shape posets with n cells.

    Any skew shape is a disjoint union of connected ones, and any disjoint
    union of skew shapes is again a skew shape.
    """
    out = set()
    for parts in _partitions(n):
        pools = [sorted(connected_skew_posets(p)) for p in parts]
        for combo in itertools.product(*pools):
            P = EMPTY
            for t in combo:
                P = disjoint_union(P, parse_poset(t))
            out.add(canon_text(P))
    return frozenset(out)


def _partitions(n: int, cap: int | None = None) -> Iterator[tuple[int, ...]]:
    cap = n if cap is None else cap
    if n == 0:
        yield ()
        return
    for p in range(min(n, cap), 0, -1):
        for rest in _partitions(n - p, p):
            yield (p,) + rest


# -- explanations -------------------------------------------------------------------


class _UnionFind:
    def __init__(self, items: Iterable[str]):
        self.parent = {x: x for x in items}

    def find(self, x: str) -> str:
        root = x
        while self.parent[root] != root:
            root = self.parent[root]
        while self.parent[x] != root:
            self.parent[x], x = root, self.parent[x]
        return root

    def union(self, a: str, b: str) -> bool:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return False
        if rb < ra:
            ra, rb = rb, ra
        self.parent[rb] = ra
        return True


@dataclass
class Explanation:
    """Union-find over all census posets of one size, joined by constructions."""

    uf: _UnionFind
    sources: dict[str, set[str]]

    def explained(self, members: Sequence[str]) -> bool:
        return len({self.uf.find(m) for m in members}) == 1


def _classes_below(n: int) -> dict[int, list[list[OrientedPoset]]]:
    out = {0: [[EMPTY]]}
    for k in range(1, n):
        out[k] = [r.posets() for r in _full_census(k)]
    return out


def _fp_of(census: Sequence[CensusRecord]) -> dict[str, bytes]:
    return {m: r.fingerprint for r in census for m in r.members}


def explain(n: int) -> Explanation:
    """Join census posets on n elements whenever a construction from smaller
    K-equal pieces forces their equality; close under bar, star and
    transitivity."""
    census = _full_census(n)
    fp = _fp_of(census)
    uf = _UnionFind(fp)
    sources: dict[str, set[str]] = defaultdict(set)

    def join(texts: Iterable[str], family: str) -> None:
        texts = [t for t in texts if t in fp]
        for t in texts:
            if fp[t] != fp[texts[0]]:
                raise AssertionError(f"{family} joined posets with different K")
        if len(set(texts)) > 1:
            for t in texts:
                sources[t].add(family)
            for t in texts[1:]:
                uf.union(texts[0], t)

    classes = _classes_below(n)

    # products of smaller pieces
    buckets: dict[tuple, list[str]] = defaultdict(list)
    small_fp = {t: f for k in range(1, n) for t, f in _fp_of(_full_census(k)).items()}
    for t in fp:
        comps = components(parse_poset(t))
        if len(comps) > 1:
            buckets[tuple(sorted(small_fp[canon_text(c)] for c in comps))].append(t)
    for group in buckets.values():
        join(group, DISJOINT_UNION)

    # five-block layered construction with at least one nontrivial block class
    for sizes in _weak_compositions(n, 5):
        if not any(sizes[:3]) or not any(sizes[3:]):
            continue
        for blocks in itertools.product(*(classes[s] for s in sizes)):
            if all(len(b) == 1 for b in blocks):
                continue
            join({canon_text(layered_compose(*choice)) for choice in itertools.product(*blocks)}, LAYERED)

    # two-block combinations
    for k1 in range(1, n):
        for op in COMBINE_OPS:
            for c1 in classes[k1]:
                for c2 in classes[n - k1]:
                    if len(c1) == 1 and len(c2) == 1:
                        continue
                    outs = set()
                    for P1, P2 in itertools.product(c1, c2):
                        try:
                            R = combine(op, P1, P2)
                        except (PreconditionViolated, CycleDetected):
                            continue
                        if R.realizable:
                            outs.add(canon_text(R))
                    join(outs, COMBINED)

    # skew Schur equalities
    by_fp: dict[bytes, list[str]] = defaultdict(list)
    for t in skew_posets(n):
        by_fp[fp[t]].append(t)
    for group in by_fp.values():
        join(group, SKEW_MEMBERS)

    # images of explained equalities under the involutions
    images = {}
    for t in fp:
        P = parse_poset(t)
        images[t] = (canon_text(bar(P)), canon_text(star(P)))
    changed = True
    while changed:
        changed = False
        groups: dict[str, list[str]] = defaultdict(list)
        for t in fp:
            groups[uf.find(t)].append(t)
        for group in groups.values():
            if len(group) < 2:
                continue
            for i in range(2):
                imgs = [images[t][i] for t in group]
                root = uf.find(imgs[0])
                if any(uf.find(x) != root for x in imgs):
                    join(imgs, INVOLUTION_IMAGE)
                    changed = True
    return Explanation(uf, sources)


def _weak_compositions(n: int, parts: int) -> Iterator[tuple[int, ...]]:
    if parts == 1:
        yield (n,)
        return
    for first in range(n + 1):
        for rest in _weak_compositions(n - first, parts - 1):
            yield (first,) + rest


def tag_explanations(records: Sequence[CensusRecord]) -> list[CensusRecord]:
    """Attach descriptive and explanation tags to each record (in place)."""
    by_n: dict[int, Explanation] = {}
    for rec in records:
        if rec.size > 1 and rec.n not in by_n:
            by_n[rec.n] = explain(rec.n)
    for rec in records:
        tags: set[str] = set()
        members = set(rec.members)
        posets = rec.posets()
        if rec.size == 1:
            tags.add(SINGLETON)
        if members <= skew_posets(rec.n):
            tags.add(SKEW_MEMBERS)
        bars = [canon_text(bar(P)) for P in posets]
        stars = [canon_text(star(P)) for P in posets]
        bar_stars = [canon_text(bar(star(P))) for P in posets]
        if set(bars) == members:
            tags.add(BAR_CLOSED)
        if any(s != m and s in members for m, s in zip(rec.members, stars)):
            tags.add(SELF_STAR)
            if rec.size == 2:
                tags.add(STAR_PAIR)
        if any(s != m and s in members for m, s in zip(rec.members, bar_stars)):
            tags.add(SELF_BAR_STAR)
        if rec.size > 1:
            for P, Q in itertools.combinations(posets, 2):
                base = chain_extension_base(P, Q)
                if base:
                    tags.add(base)
            ex = by_n[rec.n]
            for m in rec.members:
                tags |= ex.sources.get(m, set()) - {SKEW_MEMBERS}
            if not ex.explained(rec.members):
                tags.add(UNEXPLAINED)
        rec.tags = sorted(tags)
    return list(records)


# -- bar/star quotient --------------------------------------------------------------


def quotient_bar_star(records: Sequence[CensusRecord]) -> list[list[CensusRecord]]:
    """Orbits of records under bar, star and their composite, in record order."""
    where = {m: i for i, r in enumerate(records) for m in r.members}
    parent = list(range(len(records)))

    def find(x: int) -> int:
        while parent[x] != x:
            x = parent[x]
        return x

    for i, r in enumerate(records):
        P = parse_poset(r.members[0])
        for img in (bar(P), star(P), bar(star(P))):
            j = where.get(canon_text(img))
            if j is not None:
                a, b = find(i), find(j)
                if a != b:
                    parent[max(a, b)] = min(a, b)
    orbits: dict[int, list[CensusRecord]] = defaultdict(list)
    for i, r in enumerate(records):
        orbits[find(i)].append(r)
    return [orbits[k] for k in sorted(orbits)]


def orbit_counts(records: Sequence[CensusRecord]) -> dict[str, int]:
    """Nontrivial orbit counts under the several readings of "equalities up to bar and star"."""
    orbits = [o for o in quotient_bar_star(records) if o[0].size > 1]
    skew = skew_posets(records[0].n) if records else frozenset()

    def all_skew(o):
        return all(set(r.members) <= skew for r in o)

    def any_skew(o):
        return any(set(r.members) & skew for r in o)

    def pairs(o):
        return math.comb(o[0].size, 2)

    return {
        "nontrivial_orbits": len(orbits),
        "orbits_not_all_skew": sum(1 for o in orbits if not all_skew(o)),
        "orbits_without_skew_member": sum(1 for o in orbits if not any_skew(o)),
        "pairs_not_all_skew": sum(pairs(o) for o in orbits if not all_skew(o)),
        "pairs_without_skew_member": sum(pairs(o) for o in orbits if not any_skew(o)),
        "spanning_equalities_not_all_skew": sum(o[0].size - 1 for o in orbits if not all_skew(o)),
        "unexplained_orbits": sum(1 for o in orbits if any(UNEXPLAINED in r.tags for r in o)),
    }


# -- classification check -----------------------------------------------------------


@dataclass
class ClassificationReport:
    n_max: int
    pairs_checked: int = 0
    posets_checked: int = 0
    violations: list[str] = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.violations

    def to_json(self) -> dict:
        return {
            "n_max": self.n_max,
            "pairs_checked": self.pairs_checked,
            "posets_checked": self.posets_checked,
            "violations": self.violations,
            "ok": self.ok,
        }


ONE_PLUS_ONE = OrientedPoset(2)
TWO_PLUS_ONE = OrientedPoset(3, ((0, 1, "w"),))


def verify_classification(n_max: int, jobs: int = 1) -> ClassificationReport:
    """Check the few-linear-extension classification on every census up to n_max."""
    if n_max > 6:
        raise SizeLimitExceeded("classification check limited to n <= 6")
    rep = ClassificationReport(n_max)
    for n in range(1, n_max + 1):
        for skel in enumerate_posets(n):
            rep.posets_checked += 1
            L = count_linear_extensions(skel)
            for size, base in ((2, ONE_PLUS_ONE), (3, TWO_PLUS_ONE)):
                if (L == size) != is_chain_extension_of(skel, base):
                    rep.violations.append(f"|L|={L} but chain-extension-of-{base.n}pt={L != size}: {canon_text(skel)!r}")
        for rec in run_census(n, jobs=jobs):
            if rec.size < 2:
                continue
            L = rec.profile["linext_count"]
            if L not in (2, 3):
                continue
            allowed = {CHAIN_EXT_S21} if L == 2 else {CHAIN_EXT_S211, CHAIN_EXT_S211_BAR}
            for P, Q in itertools.combinations(rec.posets(), 2):
                rep.pairs_checked += 1
                base = chain_extension_base(P, Q)
                if base not in allowed:
                    rep.violations.append(f"|L|={L} pair not a chain extension of {sorted(allowed)}: {rec.fingerprint.hex()}")
                if n >= 5:
                    umin = len(P.minimal) == 1 and len(Q.minimal) == 1
                    umax = len(P.maximal) == 1 and len(Q.maximal) == 1
                    if not (umin or umax):
                        rep.violations.append(f"pair without shared unique extremum: {rec.fingerprint.hex()}")
    return rep


# -- persistence and reports --------------------------------------------------------


def write_jsonl(records: Iterable[CensusRecord], fh) -> None:
    for r in records:
        fh.write(json.dumps(r.to_json(), separators=(",", ":")) + "\n")


def read_jsonl(fh) -> list[CensusRecord]:
    return [CensusRecord.from_json(json.loads(line)) for line in fh if line.strip()]


def summary(records: Sequence[CensusRecord]) -> dict:
    hist = Counter(t for r in records for t in r.tags)
    n = records[0].n if records else 0
    natural_pairs = [r for r in records if r.size > 1 and r.profile.get("naturally_labeled")]
    antichain_breaks = [r.fingerprint.hex() for r in natural_pairs if r.profile.get("antichain_sequence") is None]
    return {
        "n": n,
        "posets": sum(r.size for r in records),
        "records": len(records),
        "nontrivial_records": sum(1 for r in records if r.size > 1),
        "orbit_counts": orbit_counts(records) if records else {},
        "tag_histogram": dict(sorted(hist.items())),
        "sound_fields_shared": all(all(r.profile[f] is not None for f in SOUND_FIELDS) for r in records),
        "antichain_counterexamples": antichain_breaks,
    }
