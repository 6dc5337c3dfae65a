"""Singular moduli, S-unit searches, p-adic profiles and Hecke orbits on supersingular points."""

from .classpoly import (
    AlgebraicNumber,
    ClassPolynomial,
    PrecisionPolicy,
    eval_eta_quotient,
    eval_j,
    hilbert_class_poly,
    weil_height,
)
from .config import Config
from .errors import CMLabError
from .hecke import (
    HeckeDivisor,
    cm_reduction_divisor,
    hecke_image,
    hecke_orbit_measure,
    overlap_degree,
    supersingular_set,
)
from .modfunc import ModularRelation, builtin_relation, omitted_values, singular_moduli_polys
from .modpoly import classical_modular_poly
from .padic import (
    Place,
    approx_ratio,
    conjugates_in_disc,
    dispersal_table,
    newton_polygon,
    pairwise_difference_valuations,
)
from .quadforms import Discriminant, QuadForm, class_number, decompose, reduced_forms, reduction_type
from .sunits import Base, is_s_unit, norm_of_difference_cm, sunit_search

__version__ = "0.1.0"

__all__ = [
    "AlgebraicNumber",
    "ClassPolynomial",
    "PrecisionPolicy",
    "eval_eta_quotient",
    "eval_j",
    "hilbert_class_poly",
    "weil_height",
    "Config",
    "CMLabError",
    "HeckeDivisor",
    "cm_reduction_divisor",
    "hecke_image",
    "hecke_orbit_measure",
    "overlap_degree",
    "supersingular_set",
    "ModularRelation",
    "builtin_relation",
    "omitted_values",
    "singular_moduli_polys",
    "classical_modular_poly",
    "Place",
    "approx_ratio",
    "conjugates_in_disc",
    "dispersal_table",
    "newton_polygon",
    "pairwise_difference_valuations",
    "Discriminant",
    "QuadForm",
    "class_number",
    "decompose",
    "reduced_forms",
    "reduction_type",
    "Base",
    "is_s_unit",
    "norm_of_difference_cm",
    "sunit_search",
]
