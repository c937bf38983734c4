"""orderforge: exact finite computations around posets of dimension at most 2,
products of chains, amalgamation and the generic permutation."""

from .amalg import AmalgamReport, Span, ap_counterexample, complete_span, has_AP_upto, has_JEP_upto, wap_witness
from .decomp import (
    Decomposition,
    ProfileTable,
    growth_classify,
    is_monomorphic_decomposition,
    koenig_branch,
    minimal_interval_decomposition,
    profile,
)
from .dimension import Realizer, crown, dimension, is_realizer, minimum_realizer, two_dim_realizer
from .generic import (
    PermutationStructure,
    StageLog,
    age_upto,
    build_generic_permutation,
    reduct_to_poset,
    weak_injectivity_witness,
)
from .products import ProductTag, classify_product_embedding, product_poset, realizer_pair_set
from .relcore import ClassSpec, EmbeddingMap, FinitePoset, LinearOrder, RelationalStructure, enumerate_upto_iso

__version__ = "0.1.0"

__all__ = [
    "age_upto",
    "AmalgamReport",
    "ap_counterexample",
    "build_generic_permutation",
    "classify_product_embedding",
    "ClassSpec",
    "complete_span",
    "crown",
    "Decomposition",
    "dimension",
    "EmbeddingMap",
    "enumerate_upto_iso",
    "FinitePoset",
    "growth_classify",
    "has_AP_upto",
    "has_JEP_upto",
    "is_monomorphic_decomposition",
    "is_realizer",
    "koenig_branch",
    "LinearOrder",
    "minimal_interval_decomposition",
    "minimum_realizer",
    "PermutationStructure",
    "product_poset",
    "ProductTag",
    "profile",
    "ProfileTable",
    "Realizer",
    "realizer_pair_set",
    "reduct_to_poset",
    "RelationalStructure",
    "Span",
    "StageLog",
    "two_dim_realizer",
    "wap_witness",
    "weak_injectivity_witness",
]
