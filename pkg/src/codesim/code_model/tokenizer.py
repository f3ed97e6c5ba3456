"""Generic C-family lexer with a Python-comment mode.

Splits raw source into code tokens and comment spans. The lexer is
deliberately grammar-free: it only needs to be stable, deterministic and
lossless over code regions so the similarity measures downstream can rely
on it. Keyword lists are configuration data (one word per line), loadable
from plain-text files.
"""

from __future__ import annotations

from dataclasses import dataclass
from importlib import resources

LANGUAGE_HINTS = ("java", "python", "generic")

# Token kinds
IDENTIFIER = "identifier"
KEYWORD = "keyword"
LITERAL_NUMBER = "literal_number"
LITERAL_STRING = "literal_string"
OPERATOR = "operator"
PUNCTUATION = "punctuation"

TOKEN_KINDS = (
    IDENTIFIER,
    KEYWORD,
    LITERAL_NUMBER,
    LITERAL_STRING,
    OPERATOR,
    PUNCTUATION,
)

_PUNCTUATION_CHARS = set("()[]{};,.:@#")
_OPERATOR_CHARS = set("+-*/%=<>!&|^~?\\")
# Longest-match-first multi-character operators.
_MULTI_OPS = (
    ">>>=", "<<<=",
    ">>>", "<<=", ">>=", "===", "!==", "**=", "//=",
    "->", "=>", "==", "!=", "<=", ">=", "&&", "||", "++", "--",
    "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=", "<<", ">>", "::", "**", "//",
)

_IDENT_START = set("abcdefghijklmnopqrstuvwxyzABCDEFGHIJKLMNOPQRSTUVWXYZ_$")
_IDENT_CONT = _IDENT_START | set("0123456789")
_DIGITS = set("0123456789")


@dataclass(frozen=True)
class Token:
    """One lexical token with a 1-based (line, column) position."""

    lexeme: str
    kind: str
    line: int
    column: int

    def __post_init__(self):
        if not self.lexeme:
            raise ValueError("token lexeme must be non-empty")


@dataclass(frozen=True)
class LexResult:
    tokens: tuple[Token, ...]
    comments: tuple[str, ...]
    warnings: tuple[str, ...]


def load_keywords(path) -> frozenset[str]:
    """Read a keyword config file: one keyword per line, '#' lines ignored."""
    words = []
    with open(path, "r", encoding="utf-8") as fh:
        for line in fh:
            word = line.strip()
            if word and not word.startswith("#"):
                words.append(word)
    return frozenset(words)


def _load_default_keywords(language_hint: str) -> frozenset[str]:
    ref = resources.files("codesim.code_model").joinpath(f"keywords/{language_hint}.txt")
    words = []
    for line in ref.read_text(encoding="utf-8").splitlines():
        word = line.strip()
        if word and not word.startswith("#"):
            words.append(word)
    return frozenset(words)


_DEFAULT_KEYWORDS: dict[str, frozenset[str]] = {}


def default_keywords(language_hint: str) -> frozenset[str]:
    if language_hint not in LANGUAGE_HINTS:
        raise ValueError(f"unknown language hint: {language_hint!r}")
    if language_hint not in _DEFAULT_KEYWORDS:
        _DEFAULT_KEYWORDS[language_hint] = _load_default_keywords(language_hint)
    return _DEFAULT_KEYWORDS[language_hint]


class _Scanner:
    __slots__ = ("text", "pos", "line", "col", "n")

    def __init__(self, text: str):
        self.text = text
        self.n = len(text)
        self.pos = 0
        self.line = 1
        self.col = 1

    def peek(self, offset: int = 0) -> str:
        i = self.pos + offset
        return self.text[i] if i < self.n else ""

    def advance(self, count: int = 1) -> str:
        out = self.text[self.pos : self.pos + count]
        for ch in out:
            if ch == "\n":
                self.line += 1
                self.col = 1
            else:
                self.col += 1
        self.pos += count
        return out

    def startswith(self, prefix: str) -> bool:
        return self.text.startswith(prefix, self.pos)


def lex(source: str, language_hint: str = "generic",
        keywords: frozenset[str] | None = None) -> LexResult:
    """Full lexer result: tokens, comment spans and recovery warnings.

    Never raises on malformed input; unterminated strings and comments are
    closed at end-of-input with a warning recorded (clone corpora contain
    broken snippets).
    """
    if language_hint not in LANGUAGE_HINTS:
        raise ValueError(f"unknown language hint: {language_hint!r}")
    if keywords is None:
        keywords = default_keywords(language_hint)

    sc = _Scanner(source)
    tokens: list[Token] = []
    comments: list[str] = []
    warnings: list[str] = []
    python_mode = language_hint == "python"

    def emit(lexeme: str, kind: str, line: int, col: int) -> None:
        tokens.append(Token(lexeme, kind, line, col))

    while sc.pos < sc.n:
        ch = sc.peek()

        if ch in " \t\r\n\f\v":
            sc.advance()
            continue

        # Comments
        if python_mode and ch == "#":
            sc.advance()
            start = sc.pos
            while sc.pos < sc.n and sc.peek() != "\n":
                sc.advance()
            comments.append(source[start:sc.pos].strip())
            continue
        if not python_mode and ch == "/" and sc.peek(1) == "/":
            sc.advance(2)
            start = sc.pos
            while sc.pos < sc.n and sc.peek() != "\n":
                sc.advance()
            comments.append(source[start:sc.pos].strip())
            continue
        if not python_mode and ch == "/" and sc.peek(1) == "*":
            open_line = sc.line
            sc.advance(2)
            start = sc.pos
            closed = False
            while sc.pos < sc.n:
                if sc.peek() == "*" and sc.peek(1) == "/":
                    closed = True
                    break
                sc.advance()
            comments.append(source[start:sc.pos].strip())
            if closed:
                sc.advance(2)
            else:
                warnings.append(f"unterminated block comment at line {open_line}")
            continue

        # String literals (python: optional triple quotes)
        if ch in "\"'":
            line, col = sc.line, sc.col
            quote = ch
            triple = python_mode and sc.startswith(quote * 3)
            closer = quote * 3 if triple else quote
            start = sc.pos
            sc.advance(len(closer))
            closed = False
            while sc.pos < sc.n:
                if sc.peek() == "\\":
                    sc.advance(2)
                    continue
                if sc.startswith(closer):
                    sc.advance(len(closer))
                    closed = True
                    break
                if not triple and sc.peek() == "\n":
                    break
                sc.advance()
            if not closed:
                warnings.append(f"unterminated string literal at line {line}")
            emit(source[start:sc.pos], LITERAL_STRING, line, col)
            continue

        # Numbers
        if ch in _DIGITS:
            line, col = sc.line, sc.col
            start = sc.pos
            if ch == "0" and sc.peek(1) in "xXbBoO":
                sc.advance(2)
                while sc.pos < sc.n and (sc.peek() in _IDENT_CONT):
                    sc.advance()
            else:
                while sc.pos < sc.n and sc.peek() in _DIGITS:
                    sc.advance()
                if sc.peek() == "." and sc.peek(1) in _DIGITS:
                    sc.advance()
                    while sc.pos < sc.n and sc.peek() in _DIGITS:
                        sc.advance()
                if sc.peek() in "eE" and (sc.peek(1) in _DIGITS or
                                          (sc.peek(1) in "+-" and sc.peek(2) in _DIGITS)):
                    sc.advance(2)
                    while sc.pos < sc.n and sc.peek() in _DIGITS:
                        sc.advance()
                while sc.peek() in "fFdDlLuU_":  # numeric suffixes
                    sc.advance()
            emit(source[start:sc.pos], LITERAL_NUMBER, line, col)
            continue

        # Identifiers / keywords
        if ch in _IDENT_START:
            line, col = sc.line, sc.col
            start = sc.pos
            while sc.pos < sc.n and sc.peek() in _IDENT_CONT:
                sc.advance()
            word = source[start:sc.pos]
            emit(word, KEYWORD if word in keywords else IDENTIFIER, line, col)
            continue

        # Multi-character operators ('//' only reaches here in python mode,
        # where it is floor division, not a comment)
        matched = False
        for op in _MULTI_OPS:
            if sc.startswith(op):
                emit(op, OPERATOR, sc.line, sc.col)
                sc.advance(len(op))
                matched = True
                break
        if matched:
            continue

        line, col = sc.line, sc.col
        if ch in _PUNCTUATION_CHARS:
            emit(sc.advance(), PUNCTUATION, line, col)
        elif ch in _OPERATOR_CHARS:
            emit(sc.advance(), OPERATOR, line, col)
        else:
            # Unknown character (unicode symbol etc.): keep it, never drop code.
            emit(sc.advance(), PUNCTUATION, line, col)

    return LexResult(tuple(tokens), tuple(comments), tuple(warnings))


def tokenize(source: str, language_hint: str = "generic",
             keywords: frozenset[str] | None = None
             ) -> tuple[tuple[Token, ...], tuple[str, ...]]:
    """Tokenize source, returning (tokens, comment spans)."""
    result = lex(source, language_hint, keywords)
    return result.tokens, result.comments
