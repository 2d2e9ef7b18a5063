"""Constructions on oriented posets that preserve K-equality.

Every constructor is pure and returns a fresh, validated ``OrientedPoset``.
Combined posets keep the ids of the first argument and shift the second.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Iterable, Sequence

from .poset import (
    Kind,
    Labeling,
    OrientedPoset,
    PosetError,
    _topo,
    dual,
    weak_floor_mask,
)


class PreconditionViolated(PosetError):
    pass


class InvalidShape(PosetError):
    pass


EMPTY = OrientedPoset(0)
POINT = OrientedPoset(1)


def bar(P: OrientedPoset) -> OrientedPoset:
    return OrientedPoset(P.n, tuple((a, b, k.flipped) for a, b, k in P.covers))


def star(P: OrientedPoset) -> OrientedPoset:
    return dual(P)


def _shifted(P: OrientedPoset, offset: int) -> list[tuple[int, int, Kind]]:
    return [(a + offset, b + offset, k) for a, b, k in P.covers]


def disjoint_union(A: OrientedPoset, B: OrientedPoset) -> OrientedPoset:
    return OrientedPoset(A.n + B.n, tuple(A.covers) + tuple(_shifted(B, A.n)))


def ordinal_sum(lower: OrientedPoset, upper: OrientedPoset, kind: Kind | str) -> OrientedPoset:
    """``lower`` below ``upper``, each maximal of lower joined to each minimal of upper."""
    kind = Kind(kind)
    off = lower.n
    edges = list(lower.covers) + _shifted(upper, off)
    edges += [(a, b + off, kind) for a in lower.maximal for b in upper.minimal]
    return OrientedPoset(lower.n + upper.n, tuple(edges))


# lower block, upper block -> kind of the joining edges
LAYER_KINDS = {
    (4, 1): Kind.WEAK,
    (4, 2): Kind.WEAK,
    (4, 3): Kind.STRICT,
    (5, 1): Kind.STRICT,
    (5, 2): Kind.WEAK,
    (5, 3): Kind.STRICT,
}
# label blocks in this order to get a witnessing global labeling
LAYER_LABEL_ORDER = (3, 4, 1, 5, 2)


def _layer_offsets(blocks: Sequence[OrientedPoset]) -> list[int]:
    offs, acc = [], 0
    for B in blocks:
        offs.append(acc)
        acc += B.n
    return offs


def layered_compose(
    P1: OrientedPoset, P2: OrientedPoset, P3: OrientedPoset, P4: OrientedPoset, P5: OrientedPoset
) -> OrientedPoset:
    """Place P4, P5 below P1, P2, P3 and join maxima to minima per ``LAYER_KINDS``.

    Ids follow block order P1..P5.  Any block may be empty.
    """
    blocks = (P1, P2, P3, P4, P5)
    offs = _layer_offsets(blocks)
    edges: list[tuple[int, int, Kind]] = []
    for B, off in zip(blocks, offs):
        edges += _shifted(B, off)
    for (lo, hi), kind in LAYER_KINDS.items():
        L, U = blocks[lo - 1], blocks[hi - 1]
        edges += [(a + offs[lo - 1], b + offs[hi - 1], kind) for a in L.maximal for b in U.minimal]
    return OrientedPoset(sum(B.n for B in blocks), tuple(edges))


def layered_labeling(blocks: Sequence[OrientedPoset], block_labelings: Sequence[Labeling]) -> Labeling:
    """Global labeling of ``layered_compose(*blocks)`` built from per-block witnesses."""
    offs = _layer_offsets(blocks)
    labels = [0] * sum(B.n for B in blocks)
    shift = 0
    for i in LAYER_LABEL_ORDER:
        B, lab = blocks[i - 1], block_labelings[i - 1]
        for v in range(B.n):
            labels[offs[i - 1] + v] = lab.labels[v] + shift
        shift += B.n
    return Labeling(tuple(labels))


def _reduce(n: int, edges: Iterable[tuple[int, int, Kind]]) -> OrientedPoset:
    """Drop covers whose constraint is implied by longer paths.

    A weak cover is redundant whenever another path joins its ends; a strict
    one only if such a path carries a strict edge.  A strict cover made
    order-redundant by weak paths alone cannot be expressed on a Hasse
    diagram and is rejected.
    """
    edges = list(edges)
    ups: list[list[tuple[int, Kind]]] = [[] for _ in range(n)]
    for a, b, k in edges:
        ups[a].append((b, k))
    order = _topo(n, [(a, b) for a, b, _ in edges], "combined digraph")
    reach = [0] * n
    sreach = [0] * n
    for v in reversed(order):
        r = s = 0
        for b, k in ups[v]:
            r |= (1 << b) | reach[b]
            s |= ((1 << b) | reach[b]) if k is Kind.STRICT else sreach[b]
        reach[v], sreach[v] = r, s
    keep = []
    for a, b, k in edges:
        any_path = strict_path = False
        for c, kc in ups[a]:
            if c == b:
                continue
            if (reach[c] >> b) & 1:
                any_path = True
                if kc is Kind.STRICT or (sreach[c] >> b) & 1:
                    strict_path = True
        if not any_path:
            keep.append((a, b, k))
        elif k is Kind.STRICT and not strict_path:
            raise PreconditionViolated(f"strict cover ({a},{b}) absorbed by a weak path")
    return OrientedPoset(n, tuple(keep))


COMBINE_OPS = ("ne", "Ne", "nenw", "NeNw", "neNw")


def _unique(elems: Sequence[int], what: str) -> int:
    if len(elems) != 1:
        raise PreconditionViolated(f"{what} is not unique")
    return elems[0]


def combine(op: str, P1: OrientedPoset, P2: OrientedPoset) -> OrientedPoset:
    """Join the unique minimum of P1 up to the unique maximum of P2 (and, for
    the two-edge operators, the minimum of P2 up to the maximum of P1).

    The result may be unrealizable; check ``.realizable``.
    """
    if op not in COMBINE_OPS:
        raise ValueError(f"unknown operator {op!r}")
    off = P1.n
    lo1 = _unique(P1.minimal, "minimum of P1")
    hi2 = _unique(P2.maximal, "maximum of P2") + off
    first = Kind.WEAK if op in ("ne", "nenw", "neNw") else Kind.STRICT
    edges = list(P1.covers) + _shifted(P2, off) + [(lo1, hi2, first)]
    if op in ("nenw", "NeNw", "neNw"):
        hi1 = _unique(P1.maximal, "maximum of P1")
        lo2 = _unique(P2.minimal, "minimum of P2") + off
        second = Kind.STRICT if op in ("NeNw", "neNw") else Kind.WEAK
        edges.append((lo2, hi1, second))
    return _reduce(P1.n + P2.n, edges)


def remove_jump0(P: OrientedPoset) -> OrientedPoset:
    return P.induced(P.full_mask & ~weak_floor_mask(P))[0]


def add_bottom(P: OrientedPoset, kind: Kind | str) -> OrientedPoset:
    """New element ``P.n`` below every minimal element."""
    kind = Kind(kind)
    return OrientedPoset(P.n + 1, tuple(P.covers) + tuple((P.n, b, kind) for b in P.minimal))


def add_top(P: OrientedPoset, kind: Kind | str) -> OrientedPoset:
    kind = Kind(kind)
    return OrientedPoset(P.n + 1, tuple(P.covers) + tuple((a, P.n, kind) for a in P.maximal))


# -- skew diagrams -----------------------------------------------------------------


@dataclass(frozen=True)
class SkewShape:
    """``outer / inner`` in French notation; row 1 is the bottom row."""

    outer: tuple[int, ...]
    inner: tuple[int, ...] = ()

    def __post_init__(self) -> None:
        outer = tuple(int(x) for x in self.outer)
        inner = tuple(int(x) for x in self.inner)
        if len(inner) > len(outer):
            raise InvalidShape("inner shape has more rows than outer")
        inner = inner + (0,) * (len(outer) - len(inner))
        if any(x < 1 for x in outer) or any(x < 0 for x in inner):
            raise InvalidShape("parts must be positive (outer) / nonnegative (inner)")
        if any(outer[i] < outer[i + 1] for i in range(len(outer) - 1)):
            raise InvalidShape(f"outer {outer} is not weakly decreasing")
        if any(inner[i] < inner[i + 1] for i in range(len(inner) - 1)):
            raise InvalidShape(f"inner {inner} is not weakly decreasing")
        if any(m > l for m, l in zip(inner, outer)):
            raise InvalidShape("inner shape does not fit inside outer")
        if sum(outer) - sum(inner) < 1:
            raise InvalidShape("shape has no cells")
        object.__setattr__(self, "outer", outer)
        object.__setattr__(self, "inner", inner)

    @property
    def size(self) -> int:
        return sum(self.outer) - sum(self.inner)

    def cells(self) -> list[tuple[int, int]]:
        """(row, column), 1-based, bottom row first, left to right."""
        return [(i + 1, j) for i, (l, m) in enumerate(zip(self.outer, self.inner)) for j in range(m + 1, l + 1)]

    def rotated(self) -> "SkewShape":
        """The 180 degree rotation of the diagram."""
        w, rows = self.outer[0], len(self.outer)
        outer = [w - self.inner[rows - 1 - r] for r in range(rows)]
        inner = [w - self.outer[rows - 1 - r] for r in range(rows)]
        while outer and outer[-1] == inner[-1]:
            outer.pop()
            inner.pop()
        return SkewShape(tuple(outer), tuple(inner))

    def __str__(self) -> str:
        def fmt(parts):
            parts = [p for p in parts if p]
            sep = "," if any(p >= 10 for p in parts) else ""
            return sep.join(map(str, parts))

        return fmt(self.outer) + ("/" + fmt(self.inner) if any(self.inner) else "")


_SHAPE_RE = re.compile(r"^\s*([0-9,]+)\s*(?:/\s*([0-9,]*))?\s*$")


def parse_shape(text: str) -> SkewShape:
    m = _SHAPE_RE.match(text)
    if not m:
        raise InvalidShape(f"cannot parse shape {text!r}")

    def parts(s: str | None) -> tuple[int, ...]:
        if not s:
            return ()
        if "," in s:
            return tuple(int(p) for p in s.split(",") if p)
        return tuple(int(c) for c in s)

    return SkewShape(parts(m.group(1)), parts(m.group(2)))


def skew_to_poset(shape: SkewShape | str) -> OrientedPoset:
    """Cells become elements; a cell is weakly below its right neighbour and
    strictly below the cell above it."""
    if isinstance(shape, str):
        shape = parse_shape(shape)
    cells = shape.cells()
    ids = {c: i for i, c in enumerate(cells)}
    edges = []
    for (r, c), i in ids.items():
        if (r, c + 1) in ids:
            edges.append((i, ids[(r, c + 1)], Kind.WEAK))
        if (r + 1, c) in ids:
            edges.append((i, ids[(r + 1, c)], Kind.STRICT))
    return OrientedPoset(len(cells), tuple(edges))
