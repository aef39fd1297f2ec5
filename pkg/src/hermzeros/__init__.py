"""Exact zero-structure analysis for finite linear combinations of Hermite
polynomials and for generalized / multiple Hermite families."""

__version__ = "0.1.0"
SCHEMA_VERSION = 1

from .exact_poly import Poly, DyadicInterval, parse_rational, format_rational  # noqa: E402
from .hermite import CombinationSpec, Normalization, SpecError, combination, hermite  # noqa: E402
from .generalized import MultiIndexSpec, SequencePair, gen_hermite, multiple_hermite  # noqa: E402
from .roots import ZeroReport, analyze, complex_roots, sturm_count  # noqa: E402

__all__ = [
    "Poly", "DyadicInterval", "parse_rational", "format_rational",
    "CombinationSpec", "Normalization", "SpecError", "combination", "hermite",
    "MultiIndexSpec", "SequencePair", "gen_hermite", "multiple_hermite",
    "ZeroReport", "analyze", "complex_roots", "sturm_count",
]
