"""The (P, w)-partition generating function K, by two independent routes.

The F-route sums fundamental functions over descent sets of linear
extensions and needs a witnessing labeling.  The M-route counts
P-partitions level by level and works for any oriented poset.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from typing import Iterator

from .poset import (
    IdOutOfRange,
    Kind,
    Labeling,
    OrientedPoset,
    PosetError,
    descent_set,
    linear_extensions,
    realize_labeling,
)
from .qsym import FExpansion, MExpansion, f_to_m, mexp_equal, subset_from_elements


class NotRealizable(PosetError):
    pass


@dataclass(frozen=True)
class PPartition:
    values: tuple[int, ...]

    def histogram(self) -> tuple[int, ...]:
        """``h[i-1]`` = number of elements sent to ``i``."""
        top = max(self.values, default=0)
        h = [0] * top
        for v in self.values:
            h[v - 1] += 1
        return tuple(h)


def is_p_partition(P: OrientedPoset, f: PPartition | tuple[int, ...]) -> bool:
    values = f.values if isinstance(f, PPartition) else tuple(f)
    if len(values) != P.n:
        raise IdOutOfRange(f"expected {P.n} values, got {len(values)}")
    if any(v < 1 for v in values):
        return False
    for a, b, k in P.covers:
        if values[a] > values[b] or (k is Kind.STRICT and values[a] == values[b]):
            return False
    return True


def enumerate_p_partitions(P: OrientedPoset, max_part: int) -> Iterator[PPartition]:
    if max_part < 1:
        raise ValueError("max_part must be at least 1")
    order = P.topo_order
    vals = [0] * P.n

    def rec(i: int) -> Iterator[PPartition]:
        if i == len(order):
            yield PPartition(tuple(vals))
            return
        v = order[i]
        lo = 1
        for a, k in P.lower_covers[v]:
            lo = max(lo, vals[a] + (k is Kind.STRICT))
        for x in range(lo, max_part + 1):
            vals[v] = x
            yield from rec(i + 1)
        vals[v] = 0

    yield from rec(0)


def k_f_route(P: OrientedPoset, lab: Labeling | None = None) -> FExpansion:
    if lab is None:
        lab = realize_labeling(P)
        if lab is None:
            raise NotRealizable("edge kinds do not come from any labeling")
    elif not lab.consistent_with(P):
        raise NotRealizable("labeling does not induce the poset's edge kinds")
    ms: Counter = Counter()
    for ext in linear_extensions(P, lab):
        ms[subset_from_elements(descent_set(ext))] += 1
    return FExpansion(P.n, ms)


def k_m_route(P: OrientedPoset) -> MExpansion:
    """Coefficient of M_alpha = number of P-partitions with level sizes alpha.

    The first level is an order ideal with only weak internal covers; what
    remains is an up-set, whose induced covers are P's covers among it.
    """
    n = P.n
    lower = P.lower_cover_masks
    strict = P.strict_lower_cover_masks
    memo: dict[int, list[int]] = {0: [1]}

    def first_levels(rest: int) -> Iterator[int]:
        sub = rest
        while sub:
            ok = True
            m = sub
            while m:
                low = m & -m
                v = low.bit_length() - 1
                m ^= low
                if lower[v] & rest & ~sub or strict[v] & sub:
                    ok = False
                    break
            if ok:
                yield sub
            sub = (sub - 1) & rest

    def solve(rest: int) -> list[int]:
        if rest in memo:
            return memo[rest]
        size = bin(rest).count("1")
        out = [0] * (1 << (size - 1))
        for level in first_levels(rest):
            k = bin(level).count("1")
            tail = solve(rest & ~level)
            if k == size:
                out[0] += tail[0]
            else:
                head = 1 << (k - 1)
                for bits, c in enumerate(tail):
                    if c:
                        out[head | (bits << k)] += c
        memo[rest] = out
        return out

    return MExpansion(n, tuple(solve(P.full_mask)))


def k_equal(A: OrientedPoset, B: OrientedPoset, cross_check: bool = True) -> bool:
    ka, kb = k_m_route(A), k_m_route(B)
    if cross_check:
        for P, k in ((A, ka), (B, kb)):
            if P.realizable and not mexp_equal(f_to_m(k_f_route(P)), k):
                raise AssertionError(f"F-route and M-route disagree on\n{P}")
    return mexp_equal(ka, kb)
