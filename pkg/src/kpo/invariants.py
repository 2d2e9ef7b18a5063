"""Necessary conditions for K-equality and the filter battery built from them."""

from __future__ import annotations

from dataclasses import asdict, dataclass, field

from .poset import OrientedPoset, SizeLimitExceeded, _bits, count_linear_extensions, weak_floor_mask
from .transforms import bar, star

MAX_SUBSET_N = 12


def _check_size(P: OrientedPoset) -> None:
    if P.n > MAX_SUBSET_N:
        raise SizeLimitExceeded(f"subset enumeration limited to n <= {MAX_SUBSET_N}")


def jump_values(P: OrientedPoset) -> tuple[int, ...]:
    out = [0] * P.n
    for v in P.topo_order:
        out[v] = max((out[a] + (k.value == "s") for a, k in P.lower_covers[v]), default=0)
    return tuple(out)


def jump(P: OrientedPoset, b: int) -> int:
    """Most strict edges on any saturated chain from ``b`` down to a minimal element."""
    return jump_values(P)[b]


def jump_sequence(P: OrientedPoset) -> tuple[int, ...]:
    vals = jump_values(P)
    if not vals:
        return ()
    return tuple(vals.count(i) for i in range(max(vals) + 1))


def greedy_partition(P: OrientedPoset) -> tuple[int, ...]:
    """Sizes of the levels of the lexicographically greatest P-partition."""
    rest, sizes = P.full_mask, []
    while rest:
        level = weak_floor_mask(P, rest)
        sizes.append(bin(level).count("1"))
        rest &= ~level
    return tuple(sizes)


def _convex(P: OrientedPoset, S: int) -> bool:
    up = down = 0
    for v in _bits(S):
        up |= P.up_masks[v]
        down |= P.down_masks[v]
    return up & down & ~S == 0


def largest_weak_convex(P: OrientedPoset) -> int:
    """Size of the largest convex subset whose internal covers are all weak."""
    _check_size(P)
    if P.n == 0:
        return 0
    strict = P.strict_lower_cover_masks
    best = 1
    for S in range(1, 1 << P.n):
        k = bin(S).count("1")
        if k <= best:
            continue
        if any(strict[v] & S for v in _bits(S)):
            continue
        if _convex(P, S):
            best = k
    return best


def largest_strict_convex(P: OrientedPoset) -> int:
    return largest_weak_convex(bar(P))


def antichain_sequence(P: OrientedPoset) -> tuple[int, ...]:
    _check_size(P)
    comp = [P.up_masks[v] | P.down_masks[v] for v in range(P.n)]
    counts = [0] * (P.n + 1)

    def rec(start: int, allowed: int, size: int) -> None:
        for v in range(start, P.n):
            if (allowed >> v) & 1:
                counts[size + 1] += 1
                rec(v + 1, allowed & ~comp[v], size + 1)

    rec(0, P.full_mask, 0)
    w = max((i for i, c in enumerate(counts) if c), default=0)
    return tuple(counts[1 : w + 1])


def width(P: OrientedPoset) -> int:
    return len(antichain_sequence(P))


def max_chain_length(P: OrientedPoset) -> int:
    """Number of elements in a longest chain."""
    depth = [0] * P.n
    for v in P.topo_order:
        depth[v] = 1 + max((depth[a] for a, _ in P.lower_covers[v]), default=0)
    return max(depth, default=0)


@dataclass(frozen=True)
class InvariantProfile:
    n: int
    linext_count: int
    jump: tuple[int, ...]
    jump_bar: tuple[int, ...]
    jump_star: tuple[int, ...]
    jump_bar_star: tuple[int, ...]
    largest_weak_convex: int
    largest_strict_convex: int
    max_chain_length: int
    width: int
    antichain_sequence: tuple[int, ...]
    minimal_count: int
    maximal_count: int
    naturally_labeled: bool

    def to_json(self) -> dict:
        return {k: list(v) if isinstance(v, tuple) else v for k, v in asdict(self).items()}


# fields every K-equal pair must share
SOUND_FIELDS = (
    "n",
    "linext_count",
    "naturally_labeled",
    "jump",
    "jump_bar",
    "jump_star",
    "jump_bar_star",
    "largest_weak_convex",
    "largest_strict_convex",
)
# shared when both posets are naturally labeled
NATURAL_FIELDS = ("minimal_count", "maximal_count", "max_chain_length", "width")


def profile(P: OrientedPoset) -> InvariantProfile:
    b, s = bar(P), star(P)
    anti = antichain_sequence(P)
    return InvariantProfile(
        n=P.n,
        linext_count=count_linear_extensions(P),
        jump=jump_sequence(P),
        jump_bar=jump_sequence(b),
        jump_star=jump_sequence(s),
        jump_bar_star=jump_sequence(bar(s)),
        largest_weak_convex=largest_weak_convex(P),
        largest_strict_convex=largest_weak_convex(b),
        max_chain_length=max_chain_length(P),
        width=len(anti),
        antichain_sequence=anti,
        minimal_count=len(P.minimal),
        maximal_count=len(P.maximal),
        naturally_labeled=P.naturally_labeled,
    )


@dataclass
class Verdict:
    """``distinguished_by`` empty means the battery cannot separate the pair.

    ``advisory`` lists disagreements in invariants that are only conjectured
    (antichain sequence for natural pairs) or open (chain length in general);
    they never certify inequality.
    """

    distinguished_by: list[str] = field(default_factory=list)
    advisory: list[str] = field(default_factory=list)

    @property
    def maybe_equal(self) -> bool:
        return not self.distinguished_by

    def to_json(self) -> dict:
        return {
            "verdict": "MaybeEqual" if self.maybe_equal else "DistinguishedBy",
            "distinguished_by": self.distinguished_by,
            "advisory": self.advisory,
        }


def compare_profiles(pa: InvariantProfile, pb: InvariantProfile) -> Verdict:
    v = Verdict()
    for name in SOUND_FIELDS:
        if getattr(pa, name) != getattr(pb, name):
            v.distinguished_by.append(name)
    if pa.n != pb.n:
        return v
    both_natural = pa.naturally_labeled and pb.naturally_labeled
    if both_natural:
        v.distinguished_by += [f for f in NATURAL_FIELDS if getattr(pa, f) != getattr(pb, f)]
        if pa.antichain_sequence != pb.antichain_sequence:
            v.advisory.append("antichain_sequence")
    elif pa.max_chain_length != pb.max_chain_length:
        v.advisory.append("max_chain_length")
    return v


def filter_battery(A: OrientedPoset, B: OrientedPoset) -> Verdict:
    return compare_profiles(profile(A), profile(B))
