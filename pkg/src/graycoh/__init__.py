"""Coherence engine and proof checker for free (braided) Gray monoids."""
from .freecat import BRAIDED, PLAIN, Crossing, Multiarrow, OneCell
from .signature import Multigraph, Theory, builtin_theory, parse_theory
from .syntax import format_term, parse_term

__all__ = [
    "BRAIDED", "PLAIN", "Crossing", "Multiarrow", "OneCell",
    "Multigraph", "Theory", "builtin_theory", "parse_theory",
    "format_term", "parse_term",
]
