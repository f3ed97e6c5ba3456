"""Code model: tokenization and derived structural representations."""

from codesim.code_model.tokenizer import (
    IDENTIFIER,
    KEYWORD,
    LANGUAGE_HINTS,
    LITERAL_NUMBER,
    LITERAL_STRING,
    OPERATOR,
    PUNCTUATION,
    LexResult,
    Token,
    default_keywords,
    lex,
    load_keywords,
    tokenize,
)
from codesim.code_model.fragment import CodeFragment, hint_for_path
from codesim.code_model.structures import (
    CALL_KEYWORD_EXCLUSIONS,
    DependenceGraph,
    MetricsProfile,
    SyntaxTree,
    TreeNode,
    build_dependence_graph,
    build_syntax_tree,
    compute_metrics,
    extract_call_set,
)

__all__ = [
    "Token",
    "LexResult",
    "tokenize",
    "lex",
    "load_keywords",
    "default_keywords",
    "LANGUAGE_HINTS",
    "IDENTIFIER",
    "KEYWORD",
    "LITERAL_NUMBER",
    "LITERAL_STRING",
    "OPERATOR",
    "PUNCTUATION",
    "CodeFragment",
    "hint_for_path",
    "SyntaxTree",
    "TreeNode",
    "DependenceGraph",
    "MetricsProfile",
    "build_syntax_tree",
    "build_dependence_graph",
    "extract_call_set",
    "compute_metrics",
    "CALL_KEYWORD_EXCLUSIONS",
]
