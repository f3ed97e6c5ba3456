"""Auxiliary measures: comment text, fuzzy token ratios, statement
skeletons, and token-diff similarity."""

from __future__ import annotations

from collections import Counter
from difflib import SequenceMatcher

from codesim import budget
from codesim.budget import Deadline
from codesim.code_model.tokenizer import (
    IDENTIFIER,
    LITERAL_NUMBER,
    LITERAL_STRING,
    PUNCTUATION,
)
from codesim.measures.missing import MISSING
from codesim.measures.textual import (
    cosine_counts,
    sequence_similarity_levenshtein,
    set_jaccard,
)

# Above this product of lengths, let difflib junk very popular tokens so the
# diff stays tractable on degenerate inputs.
_AUTOJUNK_CELLS = 4_000_000


def comment_similarity(a, b):
    """Cosine over comment word frequencies; MISSING when either side has
    no comment words at all."""
    words_a = a.comment_words()
    words_b = b.comment_words()
    if not words_a or not words_b:
        return MISSING
    return cosine_counts(Counter(words_a), Counter(words_b))


def _token_sort_ratio(la, lb, deadline) -> float:
    return sequence_similarity_levenshtein(sorted(la), sorted(lb), deadline)


def _token_set_ratio(la, lb, deadline) -> float:
    sa, sb = set(la), set(lb)
    core = sorted(sa & sb)
    rest_a = core + sorted(sa - sb)
    rest_b = core + sorted(sb - sa)
    return max(
        sequence_similarity_levenshtein(core, rest_a, deadline),
        sequence_similarity_levenshtein(core, rest_b, deadline),
        sequence_similarity_levenshtein(rest_a, rest_b, deadline),
    )


def fuzzy_similarity(a, b, deadline: Deadline | None = None) -> float:
    """Best of token-sort and token-set ratios over raw lexemes."""
    la = list(a.lexemes())
    lb = list(b.lexemes())
    if not la and not lb:
        return 1.0
    if not la or not lb:
        return 0.0
    return max(_token_sort_ratio(la, lb, deadline), _token_set_ratio(la, lb, deadline))


def statement_signatures(fragment) -> frozenset:
    """Operand-abstracted statement skeletons: identifiers fold to ID,
    numbers to NUM, strings to STR; statements split on ';', '{', '}'."""
    python_mode = fragment.language_hint == "python"
    signatures = set()
    current: list[str] = []
    prev_line = None

    def flush():
        if current:
            signatures.add(tuple(current))
            current.clear()

    for token in fragment.tokens:
        if python_mode and prev_line is not None and token.line != prev_line:
            flush()
        prev_line = token.line
        if token.kind == PUNCTUATION and token.lexeme in (";", "{", "}"):
            flush()
            continue
        if token.kind == IDENTIFIER:
            current.append("ID")
        elif token.kind == LITERAL_NUMBER:
            current.append("NUM")
        elif token.kind == LITERAL_STRING:
            current.append("STR")
        else:
            current.append(token.lexeme)
    flush()
    return frozenset(signatures)


def semantic_clone_similarity(a, b, deadline: Deadline | None = None) -> float:
    budget.check(deadline)
    return set_jaccard(statement_signatures(a), statement_signatures(b))


def semdiff_similarity(a, b, deadline: Deadline | None = None) -> float:
    """1 - (inserted + deleted) / (|A| + |B|) from a token-level diff."""
    sa = a.normalized_lexemes()
    sb = b.normalized_lexemes()
    if not sa and not sb:
        return 1.0
    if not sa or not sb:
        return 0.0
    budget.check(deadline)
    autojunk = len(sa) * len(sb) > _AUTOJUNK_CELLS
    matcher = SequenceMatcher(a=sa, b=sb, autojunk=autojunk)
    matched = sum(block.size for block in matcher.get_matching_blocks())
    return 2.0 * matched / (len(sa) + len(sb))


def score_auxiliary(kind: str, a, b, deadline: Deadline | None = None):
    if kind == "comment_sim":
        budget.check(deadline)
        return comment_similarity(a, b)
    if kind == "fuzzy":
        return fuzzy_similarity(a, b, deadline)
    if kind == "semantic_clone":
        return semantic_clone_similarity(a, b, deadline)
    if kind == "semdiff":
        return semdiff_similarity(a, b, deadline)
    raise KeyError(f"unknown auxiliary kind: {kind!r}")
