"""knotcert: checkable certificates that a knot diagram is not the unknot."""

from .knotio import KnotDiagram, canonical_form, parse_braid, parse_diagram, parse_pd, validate
from .present import alexander, wirtinger
from .prover import Certificate, NotFound, ProverConfig, prove
from .verifier import Verdict, verify

__version__ = "0.1.0"

__all__ = [
    "Certificate",
    "KnotDiagram",
    "NotFound",
    "ProverConfig",
    "Verdict",
    "alexander",
    "canonical_form",
    "parse_braid",
    "parse_diagram",
    "parse_pd",
    "prove",
    "validate",
    "verify",
    "wirtinger",
]
