"""P-partition generating functions of labeled posets and their equalities."""

from .kgen import k_equal, k_f_route, k_m_route
from .poset import Kind, OrientedPoset, canonical_form, parse_poset

__all__ = ["Kind", "OrientedPoset", "canonical_form", "parse_poset", "k_equal", "k_f_route", "k_m_route"]
__version__ = "0.1.0"
