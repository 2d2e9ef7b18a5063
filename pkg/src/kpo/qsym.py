"""Compositions, the monomial and fundamental bases, and the quasi-shuffle product.

A composition of n is identified with the subset of [n-1] of its partial
sums; subsets are bitmasks with bit ``i-1`` standing for ``i``.
"""

from __future__ import annotations

import itertools
import struct
from collections import Counter
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping


class Composition(tuple):
    """A tuple of positive parts."""

    def __new__(cls, parts: Iterable[int] = ()):
        parts = tuple(int(p) for p in parts)
        if any(p < 1 for p in parts):
            raise ValueError(f"composition parts must be positive: {parts}")
        return super().__new__(cls, parts)

    @property
    def degree(self) -> int:
        return sum(self)

    def __repr__(self) -> str:
        return f"Composition({tuple(self)})"

    def key(self) -> str:
        """Part string as used in JSON keys: ``"12"`` or ``"10,2"``."""
        if any(p >= 10 for p in self):
            return ",".join(map(str, self))
        return "".join(map(str, self))


def compositions(n: int) -> list[Composition]:
    """All compositions of n, ordered by subset bitmask."""
    if n == 0:
        return [Composition()]
    return [composition_of(bits, n) for bits in range(1 << (n - 1))]


def subset_of(alpha: Iterable[int]) -> int:
    alpha = Composition(alpha)
    bits, s = 0, 0
    for p in alpha[:-1]:
        s += p
        bits |= 1 << (s - 1)
    return bits


def composition_of(bits: int, n: int) -> Composition:
    if n == 0:
        if bits:
            raise ValueError("degree 0 has only the empty subset")
        return Composition()
    if bits >> (n - 1):
        raise ValueError(f"subset {bits:b} not inside [{n - 1}]")
    parts, last = [], 0
    for i in range(1, n):
        if (bits >> (i - 1)) & 1:
            parts.append(i - last)
            last = i
    parts.append(n - last)
    return Composition(parts)


def subset_elements(bits: int) -> tuple[int, ...]:
    return tuple(i + 1 for i in range(bits.bit_length()) if (bits >> i) & 1)


def subset_from_elements(elems: Iterable[int]) -> int:
    bits = 0
    for i in elems:
        bits |= 1 << (i - 1)
    return bits


def _ncoeffs(n: int) -> int:
    return 1 << (n - 1) if n > 0 else 1


@dataclass
class FExpansion:
    """Multiset of descent sets: ``sum multiplicity * F_{S,n}``."""

    n: int
    multiset: Counter = field(default_factory=Counter)

    @property
    def total(self) -> int:
        return sum(self.multiset.values())

    def __add__(self, other: "FExpansion") -> "FExpansion":
        if self.n != other.n:
            raise ValueError("degree mismatch")
        return FExpansion(self.n, self.multiset + other.multiset)

    def to_json(self) -> dict:
        coeffs = {
            "S{" + ",".join(map(str, subset_elements(b))) + "}": c
            for b, c in sorted(self.multiset.items())
            if c
        }
        return {"n": self.n, "basis": "F", "coeffs": dict(sorted(coeffs.items()))}


@dataclass(frozen=True)
class MExpansion:
    """Coefficients on ``M_{S,n}``, indexed by subset bitmask ascending."""

    n: int
    coeffs: tuple[int, ...]

    def __post_init__(self) -> None:
        if len(self.coeffs) != _ncoeffs(self.n):
            raise ValueError(f"degree {self.n} needs {_ncoeffs(self.n)} coefficients")

    @classmethod
    def zero(cls, n: int) -> "MExpansion":
        return cls(n, (0,) * _ncoeffs(n))

    def __getitem__(self, alpha: Iterable[int]) -> int:
        alpha = Composition(alpha)
        if alpha.degree != self.n:
            return 0
        return self.coeffs[subset_of(alpha)]

    def __add__(self, other: "MExpansion") -> "MExpansion":
        if self.n != other.n:
            raise ValueError("degree mismatch")
        return MExpansion(self.n, tuple(a + b for a, b in zip(self.coeffs, other.coeffs)))

    def terms(self) -> dict[Composition, int]:
        return {composition_of(b, self.n): c for b, c in enumerate(self.coeffs) if c}

    def to_poly(self) -> "QSymPoly":
        return QSymPoly(self.terms())

    def fingerprint(self) -> bytes:
        return fingerprint(self)

    def to_json(self) -> dict:
        coeffs = {alpha.key(): c for alpha, c in self.terms().items()}
        return {"n": self.n, "basis": "M", "coeffs": dict(sorted(coeffs.items()))}


class QSymPoly:
    """Finite integer combination of monomial quasisymmetric functions of mixed degree."""

    def __init__(self, terms: Mapping[Iterable[int], int] | None = None):
        self.terms: dict[Composition, int] = {}
        for alpha, c in (terms or {}).items():
            if c:
                a = Composition(alpha)
                self.terms[a] = self.terms.get(a, 0) + c
        self.terms = {a: c for a, c in self.terms.items() if c}

    @classmethod
    def one(cls) -> "QSymPoly":
        return cls({Composition(): 1})

    def __eq__(self, other) -> bool:
        if isinstance(other, MExpansion):
            other = other.to_poly()
        if not isinstance(other, QSymPoly):
            return NotImplemented
        return self.terms == other.terms

    def __add__(self, other: "QSymPoly") -> "QSymPoly":
        out = dict(self.terms)
        for a, c in other.terms.items():
            out[a] = out.get(a, 0) + c
        return QSymPoly(out)

    def __mul__(self, other: "QSymPoly") -> "QSymPoly":
        return quasi_shuffle(self, other)

    def __repr__(self) -> str:
        body = " + ".join(f"{c}*M{a.key() or '()'}" for a, c in sorted(self.terms.items()))
        return f"QSymPoly({body or '0'})"

    def homogeneous(self, n: int) -> MExpansion:
        coeffs = [0] * _ncoeffs(n)
        for a, c in self.terms.items():
            if a.degree == n:
                coeffs[subset_of(a) if n else 0] = c
            elif a.degree != n and c:
                raise ValueError(f"term {a} is not of degree {n}")
        return MExpansion(n, tuple(coeffs))


def f_to_m(F: FExpansion) -> MExpansion:
    n = F.n
    coeffs = [0] * _ncoeffs(n)
    full = (1 << (n - 1)) - 1 if n > 0 else 0
    for S, c in F.multiset.items():
        rest = full & ~S
        sub = rest
        while True:
            coeffs[S | sub] += c
            if sub == 0:
                break
            sub = (sub - 1) & rest
    return MExpansion(n, tuple(coeffs))


@lru_cache(maxsize=None)
def _qsh(a: tuple[int, ...], b: tuple[int, ...]) -> tuple[tuple[tuple[int, ...], int], ...]:
    if not a:
        return ((b, 1),)
    if not b:
        return ((a, 1),)
    out: Counter = Counter()
    for w, c in _qsh(a[1:], b):
        out[(a[0],) + w] += c
    for w, c in _qsh(a, b[1:]):
        out[(b[0],) + w] += c
    for w, c in _qsh(a[1:], b[1:]):
        out[(a[0] + b[0],) + w] += c
    return tuple(sorted(out.items()))


def quasi_shuffle(A: MExpansion | QSymPoly, B: MExpansion | QSymPoly) -> QSymPoly:
    """Product in the monomial basis: interleave parts, optionally merging a pair."""
    ta = A.terms() if isinstance(A, MExpansion) else A.terms
    tb = B.terms() if isinstance(B, MExpansion) else B.terms
    out: Counter = Counter()
    for a, ca in ta.items():
        for b, cb in tb.items():
            for w, c in _qsh(tuple(a), tuple(b)):
                out[w] += ca * cb * c
    return QSymPoly(out)


def mexp_equal(A: MExpansion, B: MExpansion) -> bool:
    return A.n == B.n and A.coeffs == B.coeffs


def fingerprint(A: MExpansion) -> bytes:
    """Degree byte followed by big-endian 32-bit coefficients."""
    if not 0 <= A.n < 256:
        raise OverflowError("degree out of range for fingerprint")
    try:
        return struct.pack(f">B{len(A.coeffs)}I", A.n, *A.coeffs)
    except struct.error:
        raise OverflowError("coefficient exceeds 32 bits") from None


def expand_monomials(poly: MExpansion | QSymPoly, nvars: int) -> Counter:
    """Explicit monomials in ``x_1..x_nvars`` as exponent tuples."""
    terms = poly.terms() if isinstance(poly, MExpansion) else poly.terms
    out: Counter = Counter()
    for alpha, c in terms.items():
        for idx in itertools.combinations(range(nvars), len(alpha)):
            exps = [0] * nvars
            for i, p in zip(idx, alpha):
                exps[i] = p
            out[tuple(exps)] += c
    return out
