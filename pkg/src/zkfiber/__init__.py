"""Moment-angle complexes, their Milnor-fiber polynomials and Massey products."""

from .complex import ComplexError, SimplicialComplex, edge_contract, edge_stretch, join, star_delete
from .construct import ConstructionSpec, FamilySpec, family_complex, run_construction
from .hochster import CohomologySummary, hochster_summary
from .koszul import KoszulModel, MasseyReport, formality_bounds, triple_massey
from .milnor import MilnorPolynomial, SingularLocusReport, build_phi, sing_dim

__all__ = [
    "ComplexError", "SimplicialComplex", "edge_contract", "edge_stretch", "join", "star_delete",
    "ConstructionSpec", "FamilySpec", "family_complex", "run_construction",
    "CohomologySummary", "hochster_summary",
    "KoszulModel", "MasseyReport", "formality_bounds", "triple_massey",
    "MilnorPolynomial", "SingularLocusReport", "build_phi", "sing_dim",
]
__version__ = "0.1.0"
