"""Oriented posets: Hasse diagrams whose cover edges are marked weak or strict.

Elements are dense ids ``0..n-1``.  A labeling is kept separately as a
witness that an orientation comes from an honest labeled poset.
"""

from __future__ import annotations

import heapq
import json
from dataclasses import dataclass
from enum import Enum
from functools import cached_property
from typing import Iterable, Iterator, Sequence

MAX_CANONICAL_N = 10


class PosetError(ValueError):
    pass


class CycleDetected(PosetError):
    pass


class NotReduced(PosetError):
    pass


class DuplicateEdge(PosetError):
    pass


class IdOutOfRange(PosetError):
    pass


class SizeLimitExceeded(PosetError):
    pass


class ParseError(PosetError):
    pass


class Kind(str, Enum):
    WEAK = "w"
    STRICT = "s"

    @property
    def flipped(self) -> "Kind":
        return Kind.STRICT if self is Kind.WEAK else Kind.WEAK


WEAK = Kind.WEAK
STRICT = Kind.STRICT

Cover = tuple[int, int, Kind]


def _bits(mask: int) -> Iterator[int]:
    while mask:
        low = mask & -mask
        yield low.bit_length() - 1
        mask ^= low


@dataclass(frozen=True)
class OrientedPoset:
    """A finite poset given by its cover relations, each tagged weak or strict.

    Construction validates: ids in range, no self loops or duplicate pairs,
    acyclic, and transitively reduced.  Covers are stored sorted.
    """

    n: int
    covers: tuple[Cover, ...] = ()

    def __post_init__(self) -> None:
        if self.n < 0:
            raise IdOutOfRange(f"negative size {self.n}")
        seen: set[tuple[int, int]] = set()
        norm = []
        for edge in self.covers:
            try:
                a, b, k = edge
            except (TypeError, ValueError):
                raise PosetError(f"malformed cover {edge!r}") from None
            a, b, k = int(a), int(b), Kind(k)
            if not (0 <= a < self.n and 0 <= b < self.n):
                raise IdOutOfRange(f"cover ({a},{b}) outside 0..{self.n - 1}")
            if a == b:
                raise CycleDetected(f"self loop at {a}")
            if (a, b) in seen:
                raise DuplicateEdge(f"repeated pair ({a},{b})")
            if (b, a) in seen:
                raise CycleDetected(f"covers in both directions between {a} and {b}")
            seen.add((a, b))
            norm.append((a, b, k))
        object.__setattr__(self, "covers", tuple(sorted(norm)))
        # topo_order raises CycleDetected on a cycle
        self.topo_order
        up = self.up_masks
        for a, b, _ in self.covers:
            # a cover a<b is implied if some other upper cover c of a has b above it
            for c, _k in self.upper_covers[a]:
                if c != b and (up[c] >> b) & 1:
                    raise NotReduced(f"cover ({a},{b}) implied via {c}")

    # -- adjacency -----------------------------------------------------------

    @cached_property
    def upper_covers(self) -> tuple[tuple[tuple[int, Kind], ...], ...]:
        ups: list[list[tuple[int, Kind]]] = [[] for _ in range(self.n)]
        for a, b, k in self.covers:
            ups[a].append((b, k))
        return tuple(tuple(x) for x in ups)

    @cached_property
    def lower_covers(self) -> tuple[tuple[tuple[int, Kind], ...], ...]:
        downs: list[list[tuple[int, Kind]]] = [[] for _ in range(self.n)]
        for a, b, k in self.covers:
            downs[b].append((a, k))
        return tuple(tuple(x) for x in downs)

    @cached_property
    def topo_order(self) -> tuple[int, ...]:
        """Kahn order with ties broken by smallest id."""
        return _topo(self.n, [(a, b) for a, b, _ in self.covers], "cover digraph")

    @cached_property
    def up_masks(self) -> tuple[int, ...]:
        """``up_masks[v]``: bitmask of elements strictly above v."""
        masks = [0] * self.n
        for v in reversed(self.topo_order):
            m = 0
            for b, _ in self.upper_covers[v]:
                m |= (1 << b) | masks[b]
            masks[v] = m
        return tuple(masks)

    @cached_property
    def down_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for v in self.topo_order:
            m = 0
            for a, _ in self.lower_covers[v]:
                m |= (1 << a) | masks[a]
            masks[v] = m
        return tuple(masks)

    @cached_property
    def lower_cover_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for a, b, _ in self.covers:
            masks[b] |= 1 << a
        return tuple(masks)

    @cached_property
    def strict_lower_cover_masks(self) -> tuple[int, ...]:
        masks = [0] * self.n
        for a, b, k in self.covers:
            if k is Kind.STRICT:
                masks[b] |= 1 << a
        return tuple(masks)

    @property
    def full_mask(self) -> int:
        return (1 << self.n) - 1

    def less(self, a: int, b: int) -> bool:
        return bool((self.up_masks[a] >> b) & 1)

    def comparable(self, a: int, b: int) -> bool:
        return a == b or self.less(a, b) or self.less(b, a)

    @cached_property
    def minimal(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if not self.lower_covers[v])

    @cached_property
    def maximal(self) -> tuple[int, ...]:
        return tuple(v for v in range(self.n) if not self.upper_covers[v])

    @property
    def naturally_labeled(self) -> bool:
        return all(k is Kind.WEAK for _, _, k in self.covers)

    @cached_property
    def realizable(self) -> bool:
        return realize_labeling(self) is not None

    def kind(self, a: int, b: int) -> Kind | None:
        for c, k in self.upper_covers[a]:
            if c == b:
                return k
        return None

    def skeleton(self) -> "OrientedPoset":
        """The same poset with every cover weak (edge kinds forgotten)."""
        return OrientedPoset(self.n, tuple((a, b, Kind.WEAK) for a, b, _ in self.covers))

    def relabel(self, perm: Sequence[int]) -> "OrientedPoset":
        """Move element ``v`` to id ``perm[v]``."""
        return OrientedPoset(self.n, tuple((perm[a], perm[b], k) for a, b, k in self.covers))

    def induced(self, mask: int) -> tuple["OrientedPoset", tuple[int, ...]]:
        """Subposet on a convex (or up/down-closed) element set, keeping covers.

        Returns the subposet and the old ids in their new order.  Only covers
        of the parent are retained, which is correct for convex subsets.
        """
        keep = tuple(_bits(mask))
        new = {v: i for i, v in enumerate(keep)}
        covers = tuple((new[a], new[b], k) for a, b, k in self.covers if a in new and b in new)
        return OrientedPoset(len(keep), covers), keep

    def __str__(self) -> str:
        return format_poset(self)


def _topo(n: int, arcs: Iterable[tuple[int, int]], what: str) -> tuple[int, ...]:
    succ: list[list[int]] = [[] for _ in range(n)]
    indeg = [0] * n
    for a, b in arcs:
        succ[a].append(b)
        indeg[b] += 1
    heap = [v for v in range(n) if indeg[v] == 0]
    heapq.heapify(heap)
    out = []
    while heap:
        v = heapq.heappop(heap)
        out.append(v)
        for w in succ[v]:
            indeg[w] -= 1
            if indeg[w] == 0:
                heapq.heappush(heap, w)
    if len(out) != n:
        raise CycleDetected(f"{what} has a cycle")
    return tuple(out)


def validate(n: int, covers: Iterable[Sequence]) -> OrientedPoset:
    return OrientedPoset(n, tuple(tuple(c) for c in covers))  # type: ignore[arg-type]


def from_relation(n: int, less: Iterable[tuple[int, int]], kind: Kind = Kind.WEAK) -> OrientedPoset:
    """Build a poset from any generating set of strict comparabilities."""
    up = [0] * n
    pairs = list(less)
    order = _topo(n, pairs, "relation")
    direct = [0] * n
    for a, b in pairs:
        direct[a] |= 1 << b
    for v in reversed(order):
        m = direct[v]
        for b in _bits(direct[v]):
            m |= up[b]
        up[v] = m
    covers = []
    for a in range(n):
        for b in _bits(up[a]):
            if not any((up[c] >> b) & 1 for c in _bits(up[a]) if c != b):
                covers.append((a, b, kind))
    return OrientedPoset(n, tuple(covers))


# -- labelings and linear extensions --------------------------------------------


@dataclass(frozen=True)
class Labeling:
    labels: tuple[int, ...]

    def __post_init__(self) -> None:
        if sorted(self.labels) != list(range(1, len(self.labels) + 1)):
            raise PosetError(f"labels {self.labels} are not a bijection onto 1..n")

    def consistent_with(self, P: OrientedPoset) -> bool:
        if len(self.labels) != P.n:
            return False
        lab = self.labels
        for a, b, k in P.covers:
            if (lab[a] < lab[b]) != (k is Kind.WEAK):
                return False
        return True

    def element_of(self) -> tuple[int, ...]:
        inv = [0] * len(self.labels)
        for v, l in enumerate(self.labels):
            inv[l - 1] = v
        return tuple(inv)


@dataclass(frozen=True)
class LinearExtension:
    word: tuple[int, ...]
    elements: tuple[int, ...]


def realize_labeling(P: OrientedPoset) -> Labeling | None:
    """A labeling inducing P's edge kinds, or None when none exists.

    Weak covers force ``label(a) < label(b)``, strict covers the reverse;
    labels are handed out along the smallest-id topological order of that
    constraint digraph.
    """
    arcs = [(a, b) if k is Kind.WEAK else (b, a) for a, b, k in P.covers]
    try:
        order = _topo(P.n, arcs, "constraint digraph")
    except CycleDetected:
        return None
    labels = [0] * P.n
    for i, v in enumerate(order):
        labels[v] = i + 1
    return Labeling(tuple(labels))


def linear_extensions(P: OrientedPoset, lab: Labeling | None = None) -> Iterator[LinearExtension]:
    """Every linear extension, in lexicographic order of the label word."""
    if lab is None:
        lab = realize_labeling(P)
        if lab is None:
            lab = Labeling(tuple(range(1, P.n + 1)))
    labels = lab.labels
    lower = P.lower_cover_masks
    by_label = sorted(range(P.n), key=lambda v: labels[v])
    elems: list[int] = []

    def rec(placed: int) -> Iterator[LinearExtension]:
        if len(elems) == P.n:
            yield LinearExtension(tuple(labels[v] for v in elems), tuple(elems))
            return
        for v in by_label:
            if not (placed >> v) & 1 and lower[v] & ~placed == 0:
                elems.append(v)
                yield from rec(placed | (1 << v))
                elems.pop()

    yield from rec(0)


def count_linear_extensions(P: OrientedPoset) -> int:
    """Count via dynamic programming over order ideals."""
    lower = P.lower_cover_masks
    counts = {0: 1}
    for _ in range(P.n):
        nxt: dict[int, int] = {}
        for ideal, c in counts.items():
            for v in range(P.n):
                if not (ideal >> v) & 1 and lower[v] & ~ideal == 0:
                    key = ideal | (1 << v)
                    nxt[key] = nxt.get(key, 0) + c
        counts = nxt
    return sum(counts.values())


def descent_set(ext: LinearExtension | Sequence[int]) -> frozenset[int]:
    word = ext.word if isinstance(ext, LinearExtension) else tuple(ext)
    return frozenset(i + 1 for i in range(len(word) - 1) if word[i] > word[i + 1])


def dual(P: OrientedPoset) -> OrientedPoset:
    return OrientedPoset(P.n, tuple((b, a, k) for a, b, k in P.covers))


def weak_floor_mask(P: OrientedPoset, within: int | None = None) -> int:
    """Largest order ideal of the subposet on ``within`` whose internal covers are all weak.

    ``within`` must be an up-set so the induced order is given by P's covers
    restricted to it.  This is the set of jump-0 elements of that subposet.
    """
    if within is None:
        within = P.full_mask
    floor = 0
    lower = P.lower_cover_masks
    strict = P.strict_lower_cover_masks
    for v in P.topo_order:
        if not (within >> v) & 1:
            continue
        below = lower[v] & within
        if below & ~floor == 0 and strict[v] & within == 0:
            floor |= 1 << v
    return floor


# -- canonical form -------------------------------------------------------------


@dataclass(frozen=True)
class CanonicalForm:
    key: bytes

    def __str__(self) -> str:
        return self.key.decode()


def _initial_colors(P: OrientedPoset) -> list[tuple]:
    up, down = P.up_masks, P.down_masks
    jumps = [0] * P.n
    for v in P.topo_order:
        jumps[v] = max((jumps[a] + (k is Kind.STRICT) for a, k in P.lower_covers[v]), default=0)
    cols = []
    for v in range(P.n):
        uk = [k for _, k in P.upper_covers[v]]
        dk = [k for _, k in P.lower_covers[v]]
        cols.append(
            (
                dk.count(Kind.WEAK),
                dk.count(Kind.STRICT),
                uk.count(Kind.WEAK),
                uk.count(Kind.STRICT),
                bin(down[v]).count("1"),
                bin(up[v]).count("1"),
                jumps[v],
            )
        )
    return cols


def _refine(P: OrientedPoset, cell_of: list[int]) -> list[int]:
    """Equitable refinement; cell ids are ranks of invariant signatures."""
    ncells = len(set(cell_of))
    while True:
        sigs = []
        for v in range(P.n):
            ups = sorted((cell_of[b], k.value) for b, k in P.upper_covers[v])
            downs = sorted((cell_of[a], k.value) for a, k in P.lower_covers[v])
            sigs.append((cell_of[v], tuple(ups), tuple(downs)))
        ranks = {s: i for i, s in enumerate(sorted(set(sigs)))}
        new = [ranks[s] for s in sigs]
        if len(ranks) == ncells:
            return new
        cell_of, ncells = new, len(ranks)


def canonical_labeling(P: OrientedPoset) -> tuple[int, ...]:
    """Permutation ``perm`` (old id -> new id) giving the canonical relabeling.

    Individualization/refinement search; the leaf with the smallest sorted
    cover list wins.  Branches on interchangeable twins (identical upper and
    lower covers with identical kinds) are skipped since a transposition of
    twins is an automorphism.
    """
    if P.n > MAX_CANONICAL_N:
        raise SizeLimitExceeded(f"canonical form limited to n <= {MAX_CANONICAL_N}")
    if P.n == 0:
        return ()
    init = _initial_colors(P)
    ranks = {c: i for i, c in enumerate(sorted(set(init)))}
    start = _refine(P, [ranks[c] for c in init])
    twin_key = [
        (frozenset((b, k) for b, k in P.upper_covers[v]), frozenset((a, k) for a, k in P.lower_covers[v]))
        for v in range(P.n)
    ]
    best: list = [None, None]

    def search(cell_of: list[int]) -> None:
        if len(set(cell_of)) == P.n:
            enc = tuple(sorted((cell_of[a], cell_of[b], k.value) for a, b, k in P.covers))
            if best[0] is None or enc < best[0]:
                best[0], best[1] = enc, tuple(cell_of)
            return
        sizes: dict[int, int] = {}
        for c in cell_of:
            sizes[c] = sizes.get(c, 0) + 1
        target = min(c for c, s in sizes.items() if s > 1)
        tried: list = []
        for v in range(P.n):
            if cell_of[v] != target:
                continue
            if twin_key[v] in tried:
                continue
            tried.append(twin_key[v])
            # individualize v: it gets the lower half of its cell
            nxt = [2 * c + (1 if (c == target and u != v) else 0) for u, c in enumerate(cell_of)]
            r = {c: i for i, c in enumerate(sorted(set(nxt)))}
            search(_refine(P, [r[c] for c in nxt]))

    search(start)
    return best[1]


def canonical_poset(P: OrientedPoset) -> OrientedPoset:
    return P.relabel(canonical_labeling(P))


def canonical_form(P: OrientedPoset) -> CanonicalForm:
    return CanonicalForm(format_poset(canonical_poset(P)).encode())


# -- text / JSON formats ----------------------------------------------------------


def format_poset(P: OrientedPoset) -> str:
    lines = [f"poset {P.n}"]
    lines.extend(f"edge {a} {b} {k.value}" for a, b, k in P.covers)
    return "\n".join(lines) + "\n"


def poset_to_json(P: OrientedPoset) -> dict:
    return {"n": P.n, "covers": [[a, b, k.value] for a, b, k in P.covers]}


def poset_from_json(data) -> OrientedPoset:
    if isinstance(data, str):
        data = json.loads(data)
    try:
        n = data["n"]
        covers = data.get("covers", [])
        if not isinstance(n, int) or isinstance(n, bool):
            raise ParseError("'n' must be an integer")
        return validate(n, [(int(a), int(b), Kind(k)) for a, b, k in covers])
    except (KeyError, TypeError, ValueError) as exc:
        if isinstance(exc, PosetError):
            raise
        raise ParseError(f"bad poset JSON: {exc}") from None


def parse_poset(text: str) -> OrientedPoset:
    """Parse the line format (``poset n`` / ``edge a b w|s``) or its JSON form."""
    if text.lstrip().startswith("{"):
        try:
            return poset_from_json(json.loads(text))
        except json.JSONDecodeError as exc:
            raise ParseError(f"bad JSON: {exc}") from None
    n = None
    covers = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if parts[0] == "poset" and len(parts) == 2 and n is None:
            try:
                n = int(parts[1])
            except ValueError:
                raise ParseError(f"line {lineno}: bad size {parts[1]!r}") from None
        elif parts[0] == "edge" and len(parts) == 4 and n is not None:
            try:
                covers.append((int(parts[1]), int(parts[2]), Kind(parts[3])))
            except ValueError:
                raise ParseError(f"line {lineno}: bad edge {line!r}") from None
        else:
            raise ParseError(f"line {lineno}: unexpected {line!r}")
    if n is None:
        raise ParseError("missing 'poset <n>' header")
    return validate(n, covers)
