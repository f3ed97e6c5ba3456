"""The code fragment: raw text plus lazily built derived representations."""

from __future__ import annotations

import os

from codesim.budget import Deadline
from codesim.code_model import structures
from codesim.code_model.tokenizer import (
    IDENTIFIER,
    KEYWORD,
    LITERAL_NUMBER,
    LITERAL_STRING,
    Token,
    lex,
)


class CodeFragment:
    """One source-code unit and its derived structures.

    Tokens and comments are produced eagerly at construction; the syntax
    tree, call set, dependence graph and metrics profile are built on first
    use and cached. All representations are immutable once built.
    """

    __slots__ = (
        "id", "source", "language_hint", "tokens", "comments", "warnings",
        "_norm_lexemes", "_tree", "_calls", "_graph", "_metrics",
    )

    def __init__(self, fragment_id: str, source: str, language_hint: str = "generic",
                 keywords: frozenset[str] | None = None):
        result = lex(source, language_hint, keywords)
        self.id = fragment_id
        self.source = source
        self.language_hint = language_hint
        self.tokens: tuple[Token, ...] = result.tokens
        self.comments: tuple[str, ...] = result.comments
        self.warnings: tuple[str, ...] = result.warnings
        self._norm_lexemes = None
        self._tree = None
        self._calls = None
        self._graph = None
        self._metrics = None

    @classmethod
    def from_file(cls, path: str, root: str | None = None,
                  language_hint: str | None = None,
                  keywords: frozenset[str] | None = None) -> "CodeFragment":
        """Load a fragment from a text file; id defaults to the relative path."""
        fragment_id = os.path.relpath(path, root) if root else path
        if language_hint is None:
            language_hint = hint_for_path(path)
        with open(path, "r", encoding="utf-8", errors="replace") as fh:
            source = fh.read()
        return cls(fragment_id, source, language_hint, keywords)

    def __repr__(self):
        return f"CodeFragment(id={self.id!r}, tokens={len(self.tokens)})"

    def lexemes(self) -> tuple[str, ...]:
        return tuple(t.lexeme for t in self.tokens)

    def normalized_lexemes(self) -> tuple[str, ...]:
        """Token lexemes with identifiers folded to 'ID' (rename-invariant)."""
        if self._norm_lexemes is None:
            self._norm_lexemes = tuple(
                "ID" if t.kind == IDENTIFIER else t.lexeme for t in self.tokens
            )
        return self._norm_lexemes

    def identifier_keyword_set(self) -> frozenset[str]:
        return frozenset(
            t.lexeme for t in self.tokens if t.kind in (IDENTIFIER, KEYWORD)
        )

    def comment_words(self) -> tuple[str, ...]:
        words = []
        for span in self.comments:
            words.extend(w for w in span.lower().split() if w)
        return tuple(words)

    def syntax_tree(self, deadline: Deadline | None = None) -> "structures.SyntaxTree":
        if self._tree is None:
            self._tree = structures.build_syntax_tree(self, deadline)
        return self._tree

    def call_set(self) -> frozenset[str]:
        if self._calls is None:
            self._calls = structures.extract_call_set(self)
        return self._calls

    def dependence_graph(self, deadline: Deadline | None = None) -> "structures.DependenceGraph":
        if self._graph is None:
            self._graph = structures.build_dependence_graph(self, deadline)
        return self._graph

    def metrics(self) -> "structures.MetricsProfile":
        if self._metrics is None:
            self._metrics = structures.compute_metrics(self)
        return self._metrics


_EXTENSION_HINTS = {
    ".java": "java",
    ".py": "python",
}


def hint_for_path(path: str) -> str:
    _, ext = os.path.splitext(path)
    return _EXTENSION_HINTS.get(ext.lower(), "generic")


# Re-exported token kind names commonly needed next to fragments.
__all__ = [
    "CodeFragment",
    "hint_for_path",
    "IDENTIFIER",
    "KEYWORD",
    "LITERAL_NUMBER",
    "LITERAL_STRING",
]
