"""Fingerprint measures: winnowing, Rabin-Karp k-grams, strided sampling,
and a 64-bit perceptual digest.

All hashing runs over the rename-normalized token stream so fingerprints
survive consistent identifier renaming. Hash functions are fixed (FNV-1a
plus a polynomial roll) so fingerprints are stable across processes.
"""

from __future__ import annotations

from codesim import budget
from codesim.budget import Deadline
from codesim.code_model.tokenizer import PUNCTUATION, TOKEN_KINDS
from codesim.measures.textual import set_jaccard

_FNV_OFFSET = 0xCBF29CE484222325
_FNV_PRIME = 0x100000001B3
_MASK64 = (1 << 64) - 1

_ROLL_BASE = 1_000_003
_ROLL_MOD = (1 << 61) - 1


def fnv1a(text: str) -> int:
    h = _FNV_OFFSET
    for byte in text.encode("utf-8"):
        h ^= byte
        h = (h * _FNV_PRIME) & _MASK64
    return h


def kgram_hashes(seq, k: int, deadline: Deadline | None = None) -> list[int]:
    """Rolling polynomial hashes of every k consecutive normalized tokens."""
    if len(seq) < k:
        return []
    values = [fnv1a(lexeme) % _ROLL_MOD for lexeme in seq]
    top = pow(_ROLL_BASE, k - 1, _ROLL_MOD)
    h = 0
    for value in values[:k]:
        h = (h * _ROLL_BASE + value) % _ROLL_MOD
    hashes = [h]
    for i in range(1, len(seq) - k + 1):
        if i % 4096 == 0:
            budget.check(deadline)
        h = ((h - values[i - 1] * top) * _ROLL_BASE + values[i + k - 1]) % _ROLL_MOD
        hashes.append(h)
    return hashes


def winnow_select(hashes: list[int], w: int) -> frozenset:
    """Winnowing: the minimum hash of each sliding window of w k-gram hashes,
    rightmost minimum on ties. Every window contributes a fingerprint."""
    if not hashes:
        return frozenset()
    if len(hashes) <= w:
        return frozenset({min(hashes)})
    selected = set()
    for start in range(len(hashes) - w + 1):
        window = hashes[start : start + w]
        best = min(window)
        # rightmost occurrence of the minimum
        idx = len(window) - 1 - window[::-1].index(best)
        selected.add(window[idx])
    return frozenset(selected)


def perceptual_digest(fragment) -> int:
    """64-bit locality-sensitive digest of token-kind frequencies and positions.

    The fragment is cut into 8 positional segments; 48 bits record which
    token kinds are locally enriched versus the whole fragment, 8 bits the
    lexeme-length profile, 8 bits where block openers sit.
    """
    tokens = fragment.tokens
    n = len(tokens)
    if n == 0:
        return 0

    total_kind = {kind: 0 for kind in TOKEN_KINDS}
    for t in tokens:
        total_kind[t.kind] += 1
    avg_len = sum(len(t.lexeme) for t in tokens) / n

    digest = 0
    bit = 0
    for seg in range(8):
        lo = seg * n // 8
        hi = (seg + 1) * n // 8
        seg_tokens = tokens[lo:hi]
        seg_n = len(seg_tokens)
        seg_kind = {kind: 0 for kind in TOKEN_KINDS}
        opener = False
        length_sum = 0
        for t in seg_tokens:
            seg_kind[t.kind] += 1
            length_sum += len(t.lexeme)
            if t.kind == PUNCTUATION and t.lexeme in "([{":
                opener = True
        for kind in TOKEN_KINDS:
            enriched = (
                seg_n > 0 and seg_kind[kind] * n > total_kind[kind] * seg_n
            )
            if enriched:
                digest |= 1 << bit
            bit += 1
        if seg_n > 0 and length_sum / seg_n > avg_len:
            digest |= 1 << (48 + seg)
        if opener:
            digest |= 1 << (56 + seg)
    return digest


def hamming_similarity(x: int, y: int, bits: int = 64) -> float:
    return 1.0 - bin((x ^ y) & ((1 << bits) - 1)).count("1") / bits


def score_fingerprint(kind: str, a, b, k: int = 5, w: int = 4,
                      deadline: Deadline | None = None) -> float:
    """Fingerprint-set similarity for one of the four fingerprint kinds."""
    sa = a.normalized_lexemes()
    sb = b.normalized_lexemes()
    budget.check(deadline)

    if min(len(sa), len(sb)) < k:
        # Too short for k-grams: compare whole-fragment hashes.
        return 1.0 if fnv1a(" ".join(sa)) == fnv1a(" ".join(sb)) else 0.0

    if kind == "perceptual_hash":
        return hamming_similarity(perceptual_digest(a), perceptual_digest(b))

    ha = kgram_hashes(sa, k, deadline)
    hb = kgram_hashes(sb, k, deadline)
    if kind == "rabin_karp":
        return set_jaccard(frozenset(ha), frozenset(hb))
    if kind == "winnow":
        return set_jaccard(winnow_select(ha, w), winnow_select(hb, w))
    if kind == "rolling_hash":
        return set_jaccard(frozenset(ha[::w]), frozenset(hb[::w]))
    raise KeyError(f"unknown fingerprint kind: {kind!r}")
