"""Similarity vector assembly: every requested measure scored for a pair,
under a per-measure wall-clock budget, on the canonically ordered pair."""

from __future__ import annotations

import time
from dataclasses import dataclass, field

from codesim.budget import Deadline, MeasureTimeout
from codesim.measures.auxiliary import score_auxiliary
from codesim.measures.fingerprints import score_fingerprint
from codesim.measures.missing import MISSING, is_missing
from codesim.measures.providers import ProviderHandle, score_pluggable_explained
from codesim.measures.registry import (
    MEASURE_IDS,
    REGISTRY,
    validate_measure_set,
)
from codesim.measures.structural import score_structure
from codesim.measures.textual import CorpusStats, score_set_overlap, score_sequence

DEFAULT_BUDGET_MS = 20_000.0  # per-measure wall budget


@dataclass
class MeasureContext:
    """Shared inputs for measure evaluation: corpus statistics for tf-idf,
    provider handles for the pluggable measures, and gram-size parameters."""

    corpus_stats: CorpusStats | None = None
    embedding_provider: ProviderHandle | None = None
    execution_provider: ProviderHandle | None = None
    gram_k: int = 5
    window_w: int = 4
    ngram_n: int = 3

    def provider_for(self, measure_id: str) -> ProviderHandle | None:
        if measure_id == "embedding":
            return self.embedding_provider
        if measure_id == "output_analysis":
            return self.execution_provider
        return None


@dataclass
class SimilarityVector:
    """Per-pair scores for a fixed measure set, with MISSING markers and
    per-measure wall times in milliseconds."""

    pair_id: str
    scores: dict = field(default_factory=dict)
    wall_times: dict = field(default_factory=dict)
    missing_reasons: dict = field(default_factory=dict)

    def missing_rate(self) -> float:
        if not self.scores:
            return 0.0
        gone = sum(1 for v in self.scores.values() if is_missing(v))
        return gone / len(self.scores)


def pair_key(id_a: str, id_b: str) -> str:
    lo, hi = sorted((id_a, id_b))
    return f"{lo}||{hi}"


def _evaluate_one(measure_id: str, a, b, ctx: MeasureContext, deadline: Deadline):
    """Returns (score | MISSING, reason | None)."""
    family = REGISTRY[measure_id].family
    if family == "set_overlap":
        return score_set_overlap(measure_id, a, b, ctx.corpus_stats, deadline), None
    if family == "sequence":
        return score_sequence(measure_id, a, b, ctx.ngram_n, deadline), None
    if family == "fingerprint":
        return score_fingerprint(measure_id, a, b, ctx.gram_k, ctx.window_w, deadline), None
    if family == "structure":
        return score_structure(measure_id, a, b, deadline), None
    if family == "auxiliary":
        value = score_auxiliary(measure_id, a, b, deadline)
        if is_missing(value):
            return MISSING, "inapplicable (no comment words)"
        return value, None
    if family == "pluggable":
        return score_pluggable_explained(
            measure_id, a, b, ctx.provider_for(measure_id), deadline
        )
    raise KeyError(f"unknown measure family: {family!r}")


def compute_vector(a, b, measure_set=None, budget_ms: float = DEFAULT_BUDGET_MS,
                   context: MeasureContext | None = None) -> SimilarityVector:
    """Score one fragment pair on every requested measure.

    Unknown measure ids fail before any scoring. A measure that exceeds its
    budget (or whose provider is absent) contributes MISSING; the vector is
    always produced. Symmetry is enforced by scoring the canonically
    ordered pair.
    """
    ordered = validate_measure_set(measure_set if measure_set is not None else MEASURE_IDS)
    if context is None:
        context = MeasureContext()
    if b.id < a.id:
        a, b = b, a

    vector = SimilarityVector(pair_key(a.id, b.id))
    for measure_id in ordered:
        if budget_ms <= 0:
            vector.scores[measure_id] = MISSING
            vector.wall_times[measure_id] = float(budget_ms)
            vector.missing_reasons[measure_id] = "budget exhausted"
            continue
        deadline = Deadline(budget_ms / 1000.0)
        start = time.perf_counter()
        try:
            value, reason = _evaluate_one(measure_id, a, b, context, deadline)
        except MeasureTimeout:
            vector.scores[measure_id] = MISSING
            vector.wall_times[measure_id] = float(budget_ms)
            vector.missing_reasons[measure_id] = "budget exceeded"
            continue
        elapsed_ms = (time.perf_counter() - start) * 1000.0
        if elapsed_ms > budget_ms:
            vector.scores[measure_id] = MISSING
            vector.wall_times[measure_id] = float(budget_ms)
            vector.missing_reasons[measure_id] = "budget exceeded"
            continue
        if is_missing(value):
            vector.scores[measure_id] = MISSING
            vector.missing_reasons[measure_id] = reason or "missing"
        else:
            if not 0.0 <= value <= 1.0:
                raise AssertionError(
                    f"measure {measure_id} produced out-of-range score {value}"
                )
            vector.scores[measure_id] = value
        vector.wall_times[measure_id] = elapsed_ms
    return vector


# --- learner feature view -------------------------------------------------

IMPUTED_FILL = 0.5  # maximal uncertainty for MISSING scores


def feature_names(measure_ids) -> tuple[str, ...]:
    """Feature columns for learners: one per measure, plus a was-missing
    flag per pluggable measure in the set."""
    ordered = validate_measure_set(measure_ids)
    names = list(ordered)
    names.extend(f"{m}.missing" for m in ordered if REGISTRY[m].requires_provider)
    return tuple(names)


def feature_row(vector: SimilarityVector, names) -> list[float]:
    """Imputed feature values for one vector, in the given column order."""
    row = []
    for name in names:
        if name.endswith(".missing"):
            base = name[: -len(".missing")]
            if base not in vector.scores:
                raise KeyError(f"vector {vector.pair_id} lacks measure {base!r}")
            row.append(1.0 if is_missing(vector.scores[base]) else 0.0)
        else:
            if name not in vector.scores:
                raise KeyError(f"vector {vector.pair_id} lacks measure {name!r}")
            value = vector.scores[name]
            row.append(IMPUTED_FILL if is_missing(value) else value)
    return row


def dump_header() -> str:
    return "\t".join(("pair_id",) + MEASURE_IDS)


def dump_row(vector: SimilarityVector) -> str:
    """One delimited record: pair id then one column per registry measure,
    MISSING or absent rendered as the empty field."""
    cells = [vector.pair_id]
    for measure_id in MEASURE_IDS:
        value = vector.scores.get(measure_id, MISSING)
        cells.append("" if is_missing(value) else repr(value))
    return "\t".join(cells)
