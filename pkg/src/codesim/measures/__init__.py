"""Similarity measure catalog, scoring entry points and vector assembly."""

from codesim.measures.missing import MISSING, MissingType, is_missing
from codesim.measures.registry import (
    LOCAL_MEASURE_IDS,
    MEASURE_IDS,
    PLUGGABLE_MEASURE_IDS,
    REGISTRY,
    MeasureDescriptor,
    descriptor,
    validate_measure_set,
)
from codesim.measures.textual import (
    CorpusStats,
    lcs_length,
    levenshtein_distance,
    score_sequence,
    score_set_overlap,
)
from codesim.measures.fingerprints import score_fingerprint, winnow_select, kgram_hashes
from codesim.measures.structural import score_structure
from codesim.measures.auxiliary import score_auxiliary
from codesim.measures.providers import (
    ProviderHandle,
    embedding_provider,
    execution_provider,
    open_provider,
    score_pluggable,
)
from codesim.measures.vector import (
    DEFAULT_BUDGET_MS,
    IMPUTED_FILL,
    MeasureContext,
    SimilarityVector,
    compute_vector,
    dump_header,
    dump_row,
    feature_names,
    feature_row,
    pair_key,
)

__all__ = [
    "MISSING",
    "MissingType",
    "is_missing",
    "REGISTRY",
    "MEASURE_IDS",
    "LOCAL_MEASURE_IDS",
    "PLUGGABLE_MEASURE_IDS",
    "MeasureDescriptor",
    "descriptor",
    "validate_measure_set",
    "CorpusStats",
    "levenshtein_distance",
    "lcs_length",
    "score_set_overlap",
    "score_sequence",
    "score_fingerprint",
    "score_structure",
    "score_auxiliary",
    "score_pluggable",
    "winnow_select",
    "kgram_hashes",
    "ProviderHandle",
    "open_provider",
    "embedding_provider",
    "execution_provider",
    "MeasureContext",
    "SimilarityVector",
    "compute_vector",
    "feature_names",
    "feature_row",
    "pair_key",
    "dump_header",
    "dump_row",
    "DEFAULT_BUDGET_MS",
    "IMPUTED_FILL",
]
