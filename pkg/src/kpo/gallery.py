"""Named small posets used in tests, the acceptance suite and the CLI docs.

Ids are 0-based; a cover ``(a, b, k)`` puts ``a`` below ``b``.
"""

from __future__ import annotations

from .poset import OrientedPoset
from .transforms import POINT, ordinal_sum, skew_to_poset, star


def _p(n: int, text: str) -> OrientedPoset:
    covers = []
    for tok in text.split():
        a, b, k = tok.split(",")
        covers.append((int(a), int(b), k))
    return OrientedPoset(n, tuple(covers))


# smallest equal pair: shapes 21 and 22/1
V21 = skew_to_poset("21")
LAMBDA21 = skew_to_poset("22/1")

# basic pair with three linear extensions: shapes 211 and 222/11
S211_LEFT = skew_to_poset("211")
S211_RIGHT = skew_to_poset("222/11")

# equal pair with jump sequence (3,2); also the first of the open pairs below
JUMP_LEFT = _p(5, "0,2,w 0,3,w 1,2,w 1,3,s 3,4,w")
JUMP_RIGHT = _p(5, "0,1,s 0,2,w 1,3,w 2,4,w")

# two-element antichain glued below the s21 pair; its class has size three
TRIPLE_LEFT = _p(5, "0,2,w 2,3,w 4,2,s 2,1,s")
TRIPLE_RIGHT = _p(5, "4,1,s 4,3,s 3,2,s 0,1,w 0,3,w 1,2,w")

# chain extension of the s21 pair: one weak bottom, a weak top, then a strict top
def _chain_ext(P: OrientedPoset) -> OrientedPoset:
    return ordinal_sum(ordinal_sum(ordinal_sum(POINT, P, "w"), POINT, "w"), POINT, "s")


CHAIN_EXT_LEFT = _chain_ext(V21)
CHAIN_EXT_RIGHT = _chain_ext(LAMBDA21)

# naturally labeled pair passing every filter yet unequal (differ at M_32)
FILTER_MISS_LEFT = _p(5, "0,2,w 2,4,w 1,3,w 1,4,w")
FILTER_MISS_RIGHT = _p(5, "0,2,w 2,4,w 0,3,w 1,3,w")

# naturally labeled pair with antichain sequence (7,11,3)
ANTICHAIN_LEFT = _p(7, "0,2,w 0,3,w 0,6,w 1,4,w 1,5,w 2,5,w 3,5,w 4,6,w")
ANTICHAIN_RIGHT = _p(7, "0,2,w 0,4,w 1,3,w 1,6,w 2,5,w 3,5,w 4,6,w")

# ribbons with equal skew Schur functions but widths 4 and 5
RIBBON_SHAPES = ("54221/311", "54431/332")

# shape with 8 cells
SHAPE_443_21 = "443/21"

# the four five-element equalities not produced by the standard constructions
_OPEN_Q = _p(5, "0,3,s 1,3,w 2,3,s 0,4,s 1,4,w 2,4,w")
OPEN_PAIRS = (
    (JUMP_LEFT, JUMP_RIGHT),
    (star(_OPEN_Q), _OPEN_Q),
    (_p(5, "0,2,s 1,2,w 0,3,w 3,4,s 1,4,s"), _p(5, "1,2,s 3,4,s 0,2,w 0,3,w 1,4,w")),
    (_p(5, "1,2,s 1,3,s 3,4,s 0,2,w 2,4,w"), _p(5, "0,1,s 1,3,s 0,2,w 1,4,w 2,4,w")),
)

NAMED: dict[str, OrientedPoset] = {
    "v21": V21,
    "lambda21": LAMBDA21,
    "s211-left": S211_LEFT,
    "s211-right": S211_RIGHT,
    "jump-left": JUMP_LEFT,
    "jump-right": JUMP_RIGHT,
    "triple-left": TRIPLE_LEFT,
    "triple-right": TRIPLE_RIGHT,
    "chain-ext-left": CHAIN_EXT_LEFT,
    "chain-ext-right": CHAIN_EXT_RIGHT,
    "filter-miss-left": FILTER_MISS_LEFT,
    "filter-miss-right": FILTER_MISS_RIGHT,
    "antichain-left": ANTICHAIN_LEFT,
    "antichain-right": ANTICHAIN_RIGHT,
}
