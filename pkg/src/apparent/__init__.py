"""Desk-scale computations for Higgs and connection triples on the marked
sphere: Wronskian sections, apparent-singularity divisors, spectral lifts,
Hecke transforms, residue-parameter systems, numerical monodromy, and the
symplectic pairings comparing moduli-side and configuration-side forms.
"""

from apparent.exact import (
    CertifiedComplex,
    Divisor,
    GRat,
    LaurentJet,
    Poly,
    RatFun,
    laurent_expand,
    roots_with_multiplicity,
)

__version__ = "0.1.0"

__all__ = [
    "GRat",
    "Poly",
    "RatFun",
    "LaurentJet",
    "Divisor",
    "CertifiedComplex",
    "laurent_expand",
    "roots_with_multiplicity",
]
