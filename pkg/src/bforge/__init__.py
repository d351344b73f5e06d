"""bforge: exact construction, verification and search of Beauville structures
in finite p-groups presented by power-commutator presentations."""

__version__ = "0.1.0"

from .beauville import (
    BeauvilleCertificate,
    GenPair,
    check_beauville,
    check_strongly_real,
    exhaustive_search,
    is_generating_pair,
    lift_check,
    paper_structure,
    sigma,
)
from .errors import (
    CapExceeded,
    ConsistencyError,
    HomomorphismError,
    PcpSyntaxError,
    ShapeError,
)
from .families import (
    PaperGroup,
    build_abelian,
    build_case_i,
    build_case_ii,
    build_case_iii,
    build_family,
    build_negative,
    refinement_series,
    theta_automorphism,
)
from .groups import (
    ElementSet,
    FiniteGroup,
    Homomorphism,
    NormalSeries,
    PcGroup,
    agemo,
    conjugacy_class,
    enumerate_group,
    frattini,
    hom_from_images,
    lower_central_series,
    normal_closure,
    quotient_group,
    subgroup_closure,
)
from .nq import LayeredPresentation, TriangleParams, extend_class, initial_class_quotient, triangle_quotient
from .pc import Collector, PcPresentation, Word, consistency_check, parse_presentation

__all__ = [
    "BeauvilleCertificate",
    "CapExceeded",
    "Collector",
    "ConsistencyError",
    "ElementSet",
    "FiniteGroup",
    "GenPair",
    "Homomorphism",
    "HomomorphismError",
    "LayeredPresentation",
    "NormalSeries",
    "PaperGroup",
    "PcGroup",
    "PcPresentation",
    "PcpSyntaxError",
    "ShapeError",
    "TriangleParams",
    "Word",
    "agemo",
    "build_abelian",
    "build_case_i",
    "build_case_ii",
    "build_case_iii",
    "build_family",
    "build_negative",
    "check_beauville",
    "check_strongly_real",
    "conjugacy_class",
    "consistency_check",
    "enumerate_group",
    "exhaustive_search",
    "extend_class",
    "frattini",
    "hom_from_images",
    "initial_class_quotient",
    "is_generating_pair",
    "lift_check",
    "lower_central_series",
    "normal_closure",
    "paper_structure",
    "parse_presentation",
    "quotient_group",
    "refinement_series",
    "sigma",
    "subgroup_closure",
    "theta_automorphism",
    "triangle_quotient",
]
