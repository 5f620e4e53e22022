"""Finite skew-lattice workbench."""
from ._accel import BACKEND
from .algebra import (FiniteSkewLattice, InvalidAlgebraError, ParseError, check_identity,
                      check_quasi_identity, evaluate_term, format_algebra, holds, load_algebra,
                      parse_algebra, validate)
from .canonical import canonical_form, find_isomorphism, is_isomorphic
from .corpus import builtin, corpus, direct_product, op_dual, transpose_dual
from .green import handedness, lattice_image, relation_D, relation_L, relation_R
from .properties import PropertyId, check, full_report, implications, verdicts
from .search import SearchConstraint, enumerate_models, find_counterexample
from .subalgebras import all_subalgebras, closure, find_embedding

__version__ = "0.1.0"

__all__ = [
    "BACKEND", "FiniteSkewLattice", "InvalidAlgebraError", "ParseError", "PropertyId",
    "SearchConstraint", "all_subalgebras", "builtin", "canonical_form", "check", "check_identity",
    "check_quasi_identity", "closure", "corpus", "direct_product", "enumerate_models",
    "evaluate_term", "find_counterexample", "find_embedding", "find_isomorphism",
    "format_algebra", "full_report", "handedness", "holds", "implications", "is_isomorphic",
    "lattice_image", "load_algebra", "op_dual", "parse_algebra", "relation_D", "relation_L",
    "relation_R", "transpose_dual", "validate", "verdicts",
]
