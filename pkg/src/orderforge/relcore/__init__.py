"""Relational substrate: structures, canonical forms, embeddings, class enumeration."""

from .canon import canonical_form, canonical_labeling, canonical_structure, is_isomorphic
from .classes import (
    PERMUTATION_SIGNATURE,
    ClassSpec,
    enumerate_upto_iso,
    hereditary_violations,
    induced_substructure,
    permutation_structure,
)
from .embed import automorphisms, find_embeddings, is_embedding, iter_embeddings, require_embedding
from .structures import (
    POSET_SIGNATURE,
    EmbeddingMap,
    FinitePoset,
    LinearOrder,
    RelationalStructure,
    as_structure,
)

__all__ = [
    "POSET_SIGNATURE",
    "PERMUTATION_SIGNATURE",
    "ClassSpec",
    "EmbeddingMap",
    "FinitePoset",
    "LinearOrder",
    "RelationalStructure",
    "as_structure",
    "automorphisms",
    "canonical_form",
    "canonical_labeling",
    "canonical_structure",
    "enumerate_upto_iso",
    "find_embeddings",
    "hereditary_violations",
    "induced_substructure",
    "is_embedding",
    "is_isomorphic",
    "iter_embeddings",
    "permutation_structure",
    "require_embedding",
]
