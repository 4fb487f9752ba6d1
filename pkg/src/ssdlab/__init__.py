"""Finite-ring laboratory for multiplicative skew semi-derivations and their additivity."""

from .ring_core import (RationalMatrix2Ring, ResourceLimitError, RingError, RingMismatchError, RingSpec,
                        TabulatedRing, UnsupportedOperation, find_idempotents, is_prime, make_ring,
                        nontrivial_idempotents, validate_axioms)
from .peirce import PeirceFrame, make_frame, project, reconstruct
from .maps import (BuiltinMap, CompositeMap, RingMap, TableMap, enumerate_automorphisms, enumerate_endomorphisms,
                   is_additive, is_automorphism, is_endomorphism)
from .search import (SearchConfig, SearchReport, counterexample_hunt, enumerate_generalized, enumerate_mssd,
                     reproduce_worked_examples, verify_additivity_theorem, verify_generalized_theorem)

__version__ = "0.1.0"

__all__ = [
    "RationalMatrix2Ring", "ResourceLimitError", "RingError", "RingMismatchError", "RingSpec", "TabulatedRing",
    "UnsupportedOperation", "find_idempotents", "is_prime", "make_ring", "nontrivial_idempotents",
    "validate_axioms", "PeirceFrame", "make_frame", "project", "reconstruct", "BuiltinMap", "CompositeMap",
    "RingMap", "TableMap", "enumerate_automorphisms", "enumerate_endomorphisms", "is_additive", "is_automorphism",
    "is_endomorphism", "SearchConfig", "SearchReport", "counterexample_hunt", "enumerate_generalized",
    "enumerate_mssd", "reproduce_worked_examples", "verify_additivity_theorem", "verify_generalized_theorem",
]
