"""The catalog of similarity measures: ids, families, provider needs.

Exactly 21 measures are registered, in a fixed catalog order that also
fixes vector-dump column order and report row order.
"""

from __future__ import annotations

from dataclasses import dataclass

SET_OVERLAP = "set_overlap"
SEQUENCE = "sequence"
FINGERPRINT = "fingerprint"
STRUCTURE = "structure"
AUXILIARY = "auxiliary"
PLUGGABLE = "pluggable"


@dataclass(frozen=True)
class MeasureDescriptor:
    id: str
    family: str
    requires_provider: bool = False


_DESCRIPTORS = (
    MeasureDescriptor("ast", STRUCTURE),
    MeasureDescriptor("bag_of_words", SET_OVERLAP),
    MeasureDescriptor("embedding", PLUGGABLE, requires_provider=True),
    MeasureDescriptor("comment_sim", AUXILIARY),
    MeasureDescriptor("output_analysis", PLUGGABLE, requires_provider=True),
    MeasureDescriptor("function_calls", STRUCTURE),
    MeasureDescriptor("fuzzy", AUXILIARY),
    MeasureDescriptor("graph_match", STRUCTURE),
    MeasureDescriptor("rolling_hash", FINGERPRINT),
    MeasureDescriptor("perceptual_hash", FINGERPRINT),
    MeasureDescriptor("jaccard", SET_OVERLAP),
    MeasureDescriptor("lcs", SEQUENCE),
    MeasureDescriptor("levenshtein", SEQUENCE),
    MeasureDescriptor("metrics", STRUCTURE),
    MeasureDescriptor("ngram", SEQUENCE),
    MeasureDescriptor("pdg", STRUCTURE),
    MeasureDescriptor("rabin_karp", FINGERPRINT),
    MeasureDescriptor("semantic_clone", AUXILIARY),
    MeasureDescriptor("semdiff", AUXILIARY),
    MeasureDescriptor("tfidf", SET_OVERLAP),
    MeasureDescriptor("winnow", FINGERPRINT),
)

REGISTRY: dict[str, MeasureDescriptor] = {d.id: d for d in _DESCRIPTORS}
MEASURE_IDS: tuple[str, ...] = tuple(d.id for d in _DESCRIPTORS)
LOCAL_MEASURE_IDS: tuple[str, ...] = tuple(
    d.id for d in _DESCRIPTORS if not d.requires_provider
)
PLUGGABLE_MEASURE_IDS: tuple[str, ...] = tuple(
    d.id for d in _DESCRIPTORS if d.requires_provider
)

assert len(REGISTRY) == 21


def descriptor(measure_id: str) -> MeasureDescriptor:
    try:
        return REGISTRY[measure_id]
    except KeyError:
        raise KeyError(f"unknown measure id: {measure_id!r}") from None


def validate_measure_set(measure_ids) -> tuple[str, ...]:
    """Check ids against the registry and return them in catalog order."""
    requested = set(measure_ids)
    if not requested:
        raise ValueError("measure set must be non-empty")
    unknown = requested - set(MEASURE_IDS)
    if unknown:
        raise KeyError(f"unknown measure ids: {sorted(unknown)}")
    return tuple(m for m in MEASURE_IDS if m in requested)
