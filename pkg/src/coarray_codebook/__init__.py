"""Identifiability-maximizing Tx-selection codebooks for index-modulation ISAC."""
from .bounds import (BoundsError, BoundsReport, binomial, bounds_report, build_nested_pair,
                     build_nonredundant_pair, build_ula_pair, exact_size_nonredundant,
                     exact_size_ula, lower_bound_nested, upper_bound)
from .codebook import (Codebook, CodebookError, CodebookKind, ParameterTuple, admissible,
                       bits_per_codeword, enumerate_constrained, enumerate_unconstrained,
                       min_selection_size)
from .geometry import (ArrayGeometry, GeometryError, canonicalize, contains_edges, is_contiguous,
                       sum_set, uniform)
from .search import (BoundCheck, SearchError, SearchOptions, SearchResult, optimal_codebook_search,
                     sweep, verify_bounds)

__version__ = "0.1.0"
