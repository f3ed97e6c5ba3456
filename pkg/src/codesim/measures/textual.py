"""Set-overlap and sequence similarity measures.

Set measures compare token populations; sequence measures compare
rename-normalized token streams. All scores land in [0, 1] with the
empty-versus-empty convention fixed at 1.0 (two empty fragments are
equivalent code).
"""

from __future__ import annotations

import math
from collections import Counter
from dataclasses import dataclass

from codesim import budget
from codesim.budget import Deadline


def cosine_counts(ca: Counter, cb: Counter) -> float:
    """Cosine similarity of two sparse nonnegative count vectors."""
    if not ca and not cb:
        return 1.0
    if not ca or not cb:
        return 0.0
    dot = sum(v * cb[k] for k, v in ca.items() if k in cb)
    norm_a = math.sqrt(sum(v * v for v in ca.values()))
    norm_b = math.sqrt(sum(v * v for v in cb.values()))
    if norm_a == 0.0 or norm_b == 0.0:
        return 1.0 if norm_a == norm_b else 0.0
    return min(1.0, max(0.0, dot / (norm_a * norm_b)))


def set_jaccard(sa, sb) -> float:
    if not sa and not sb:
        return 1.0
    if not sa or not sb:
        return 0.0
    inter = len(sa & sb)
    union = len(sa | sb)
    return inter / union


def counter_jaccard(ca: Counter, cb: Counter) -> float:
    """Multiset Jaccard: sum of min counts over sum of max counts."""
    if not ca and not cb:
        return 1.0
    if not ca or not cb:
        return 0.0
    keys = ca.keys() | cb.keys()
    inter = sum(min(ca[k], cb[k]) for k in keys)
    union = sum(max(ca[k], cb[k]) for k in keys)
    return inter / union if union else 1.0


@dataclass(frozen=True)
class CorpusStats:
    """Document frequencies over the active dataset, for tf-idf weighting."""

    doc_count: int
    doc_freq: dict

    @classmethod
    def from_fragments(cls, fragments) -> "CorpusStats":
        df: Counter = Counter()
        count = 0
        for fragment in fragments:
            count += 1
            df.update(set(fragment.lexemes()))
        return cls(count, dict(df))

    def idf(self, term: str) -> float:
        df = self.doc_freq.get(term, 0)
        return math.log((1.0 + self.doc_count) / (1.0 + df)) + 1.0


def levenshtein_distance(a, b, deadline: Deadline | None = None) -> int:
    """Edit distance between two sequences; two-row dynamic program."""
    if a == b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    for i, x in enumerate(a):
        budget.check(deadline)
        cur = [i + 1]
        for j, y in enumerate(b):
            cur.append(min(prev[j + 1] + 1, cur[j] + 1, prev[j] + (x != y)))
        prev = cur
    return prev[-1]


def lcs_length(a, b, deadline: Deadline | None = None) -> int:
    """Length of the longest common subsequence; two-row dynamic program."""
    if not a or not b:
        return 0
    if len(a) < len(b):
        a, b = b, a
    prev = [0] * (len(b) + 1)
    for x in a:
        budget.check(deadline)
        cur = [0]
        for j, y in enumerate(b):
            if x == y:
                cur.append(prev[j] + 1)
            else:
                cur.append(max(prev[j + 1], cur[j]))
        prev = cur
    return prev[-1]


def token_ngrams(seq, n: int) -> frozenset:
    if len(seq) < n:
        return frozenset()
    return frozenset(tuple(seq[i : i + n]) for i in range(len(seq) - n + 1))


def score_set_overlap(kind: str, a, b, corpus_stats: CorpusStats | None = None,
                      deadline: Deadline | None = None) -> float:
    """jaccard over identifier+keyword sets, bag-of-words or tf-idf cosine."""
    budget.check(deadline)
    if kind == "jaccard":
        return set_jaccard(a.identifier_keyword_set(), b.identifier_keyword_set())
    if kind == "bag_of_words":
        return cosine_counts(Counter(a.lexemes()), Counter(b.lexemes()))
    if kind == "tfidf":
        if corpus_stats is None:
            corpus_stats = CorpusStats.from_fragments([a, b])
        ca = Counter(a.lexemes())
        cb = Counter(b.lexemes())
        if not ca and not cb:
            return 1.0
        wa = Counter({t: c * corpus_stats.idf(t) for t, c in ca.items()})
        wb = Counter({t: c * corpus_stats.idf(t) for t, c in cb.items()})
        return cosine_counts(wa, wb)
    raise KeyError(f"unknown set-overlap kind: {kind!r}")


def sequence_similarity_levenshtein(sa, sb, deadline: Deadline | None = None) -> float:
    if not sa and not sb:
        return 1.0
    if not sa or not sb:
        return 0.0
    dist = levenshtein_distance(sa, sb, deadline)
    return 1.0 - dist / max(len(sa), len(sb))


def sequence_similarity_lcs(sa, sb, deadline: Deadline | None = None) -> float:
    if not sa and not sb:
        return 1.0
    if not sa or not sb:
        return 0.0
    return 2.0 * lcs_length(sa, sb, deadline) / (len(sa) + len(sb))


def sequence_similarity_ngram(sa, sb, n: int = 3,
                              deadline: Deadline | None = None) -> float:
    if not sa and not sb:
        return 1.0
    if not sa or not sb:
        return 0.0
    budget.check(deadline)
    ga = token_ngrams(sa, n)
    gb = token_ngrams(sb, n)
    if not ga and not gb:
        # Both too short to produce grams: fall back to exact equality.
        return 1.0 if tuple(sa) == tuple(sb) else 0.0
    if not ga or not gb:
        return 0.0
    return 2.0 * len(ga & gb) / (len(ga) + len(gb))


def score_sequence(kind: str, a, b, n: int = 3,
                   deadline: Deadline | None = None) -> float:
    """Sequence similarity over identifier-normalized token streams."""
    sa = a.normalized_lexemes()
    sb = b.normalized_lexemes()
    if kind == "levenshtein":
        return sequence_similarity_levenshtein(sa, sb, deadline)
    if kind == "lcs":
        return sequence_similarity_lcs(sa, sb, deadline)
    if kind == "ngram":
        return sequence_similarity_ngram(sa, sb, n, deadline)
    raise KeyError(f"unknown sequence kind: {kind!r}")
