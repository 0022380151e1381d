"""Exact verification of EKR-type bounds for subsets of a perfect matching."""

from .family import MatchingParams, enumerate_family, family_size, star, star_size_closed_form
from .search import max_clique, max_intersecting, naive_max_clique, verify_ekr_instance

__all__ = [
    "MatchingParams",
    "enumerate_family",
    "family_size",
    "max_clique",
    "max_intersecting",
    "naive_max_clique",
    "star",
    "star_size_closed_form",
    "verify_ekr_instance",
]
