"""Exact-arithmetic workbench for string algebras."""

from .presentation import (
    Presentation,
    Quiver,
    check_finite_dimensional,
    load_presentation,
    parse_presentation,
    serialize_presentation,
    validate_axioms,
)
from .words import (
    CyclicWord,
    Letter,
    Walk,
    Word,
    canonical_cyclic,
    concat,
    enumerate_words,
    fine_wolf_common_power,
    inverse,
    is_cyclic,
    is_primitive,
    is_word,
    parse_word,
)
from .reps import (
    Representation,
    band_module,
    direct_sum,
    module_from_cyclic_word_unrestricted,
    projective,
    simple,
    string_module,
)
from .homalg import ext1, ext1_basis, ext1_dim, extension_from_cocycle, hom_basis, hom_dim, middle_census
from .decomp import DecompositionReport, catalog_decompose, decompose, fitting_split
from .artheory import (
    Catalog,
    ar_sequence,
    catalog_for,
    delta_count_formula,
    enumerate_indecomposables,
    hom_leq,
    riedtmann_witness,
)
from .classify import build_witness, classify, find_bands, find_witness_triple, n_alpha_generators

__version__ = "0.1.0"
