"""Derived structural views: bracket tree, call set, dependence graph, metrics.

These are deliberate approximations. The tree is a bracket/indent structure
(not a grammar parse), the dependence graph is intraprocedural with
last-definition-wins binding and no alias analysis. Both are rename
invariant where it matters: identifier leaves are folded to 'ID'.
"""

from __future__ import annotations

from dataclasses import dataclass, field

from codesim import budget
from codesim.budget import Deadline
from codesim.code_model.tokenizer import (
    IDENTIFIER,
    KEYWORD,
    LITERAL_NUMBER,
    LITERAL_STRING,
    OPERATOR,
    PUNCTUATION,
)

_OPENERS = {"(": ")", "[": "]", "{": "}"}
_CLOSERS = {")", "]", "}"}

# Identifier-followed-by-'(' names excluded from call extraction.
CALL_KEYWORD_EXCLUSIONS = frozenset({"if", "for", "while", "switch", "catch", "return"})

CONTROL_KEYWORDS = frozenset({"if", "elif", "else", "switch", "case", "for", "while", "do", "catch"})

_ASSIGN_OPS = frozenset({
    "=", "+=", "-=", "*=", "/=", "%=", "&=", "|=", "^=",
    "<<=", ">>=", ">>>=", "**=", "//=",
})

_BRANCH_KEYWORDS = frozenset({"if", "elif", "case", "catch"})
_LOOP_KEYWORDS = frozenset({"for", "while", "do"})


@dataclass(frozen=True)
class TreeNode:
    """Syntax tree node; leaves carry token-kind labels and no children."""

    label: str
    block: bool = False
    children: tuple["TreeNode", ...] = ()


@dataclass(frozen=True)
class SyntaxTree:
    root: TreeNode
    degraded: bool = False

    def depth(self) -> int:
        """Longest root-to-leaf path, in nodes (root alone has depth 1)."""

        def go(node: TreeNode) -> int:
            return 1 + max((go(c) for c in node.children), default=0)

        return go(self.root)

    def structural_depth(self) -> int:
        """Maximum nesting of block nodes; equals the source bracket/indent depth."""

        def go(node: TreeNode) -> int:
            deepest = max((go(c) for c in node.children), default=0)
            return deepest + (1 if node.block else 0)

        return go(self.root) - 1  # discount the root block itself

    def iter_nodes(self):
        stack = [self.root]
        while stack:
            node = stack.pop()
            yield node
            stack.extend(reversed(node.children))


class _MutNode:
    __slots__ = ("label", "block", "children")

    def __init__(self, label: str, block: bool):
        self.label = label
        self.block = block
        self.children: list = []

    def freeze(self) -> TreeNode:
        return TreeNode(self.label, self.block, tuple(c.freeze() for c in self.children))


def _leaf_label(token) -> str:
    if token.kind == IDENTIFIER:
        return "ID"
    if token.kind == LITERAL_NUMBER:
        return "NUM"
    if token.kind == LITERAL_STRING:
        return "STR"
    return token.lexeme


def build_syntax_tree(fragment, deadline: Deadline | None = None) -> SyntaxTree:
    """Build the bracket-structure tree for a tokenized fragment.

    Block-open tokens ('{', '(', '[', or an indent increase under the python
    hint) open a child node labeled by the immediately preceding keyword
    ('if', 'for', ...), 'call' for identifier-then-'(', 'ID' for other
    identifier-then-bracket shapes, else 'block'. The labeling token is
    consumed by the label; all other tokens become normalized leaves, so
    consistently renamed fragments produce identical trees.
    """
    tokens = fragment.tokens
    python_mode = fragment.language_hint == "python"

    root = _MutNode("root", block=True)
    stack: list[tuple[_MutNode, str]] = [(root, "root")]
    degraded = False
    bracket_depth = 0
    indent_stack = [0]
    prev_line = None
    prev_line_label = "block"
    line_first_label = "block"

    for i, token in enumerate(tokens):
        if i % 1024 == 0:
            budget.check(deadline)

        if python_mode and token.line != prev_line:
            if bracket_depth == 0 and prev_line is not None:
                indent = token.column - 1
                if indent > indent_stack[-1]:
                    indent_stack.append(indent)
                    node = _MutNode(prev_line_label, block=True)
                    stack[-1][0].children.append(node)
                    stack.append((node, "indent"))
                else:
                    while indent < indent_stack[-1]:
                        indent_stack.pop()
                        if stack[-1][1] == "indent":
                            stack.pop()
                        else:
                            degraded = True
                            break
            if bracket_depth == 0:
                line_first_label = (
                    token.lexeme if token.kind == KEYWORD else "block"
                )
                prev_line_label = line_first_label
            prev_line = token.line
        elif prev_line is None:
            prev_line = token.line
            if python_mode and token.kind == KEYWORD:
                prev_line_label = token.lexeme

        lexeme = token.lexeme
        if lexeme in _OPENERS and token.kind == PUNCTUATION:
            label = "block"
            if i > 0:
                prev = tokens[i - 1]
                if prev.kind == KEYWORD:
                    label = prev.lexeme
                elif prev.kind == IDENTIFIER:
                    label = "call" if lexeme == "(" else "ID"
            node = _MutNode(label, block=True)
            stack[-1][0].children.append(node)
            stack.append((node, "bracket"))
            bracket_depth += 1
            continue
        if lexeme in _CLOSERS and token.kind == PUNCTUATION:
            if stack[-1][1] == "bracket":
                stack.pop()
                bracket_depth -= 1
            else:
                degraded = True
            continue

        # A keyword/identifier immediately before an opener becomes that
        # block's label rather than a leaf.
        if token.kind in (KEYWORD, IDENTIFIER) and i + 1 < len(tokens):
            nxt = tokens[i + 1]
            if nxt.kind == PUNCTUATION and nxt.lexeme in _OPENERS:
                continue
        stack[-1][0].children.append(_MutNode(_leaf_label(token), block=False))

    if bracket_depth > 0:
        degraded = True  # unclosed nodes stay attached where they were opened

    budget.check(deadline)
    return SyntaxTree(root.freeze(), degraded)


def extract_call_set(fragment) -> frozenset[str]:
    """Names of identifiers immediately followed by '(' (keyword forms excluded)."""
    tokens = fragment.tokens
    calls = set()
    for i, token in enumerate(tokens[:-1]):
        if (
            token.kind == IDENTIFIER
            and tokens[i + 1].lexeme == "("
            and token.lexeme not in CALL_KEYWORD_EXCLUSIONS
        ):
            calls.add(token.lexeme)
    return frozenset(calls)


@dataclass(frozen=True)
class DependenceGraph:
    """Approximate program dependence graph.

    nodes maps node id -> kind ('def' | 'use' | 'control'); edges are
    (src, dst, kind) with kind 'data' or 'control'.
    """

    nodes: dict = field(default_factory=dict)
    edges: frozenset = frozenset()

    def node_count(self) -> int:
        return len(self.nodes)

    def kind_counts(self) -> dict:
        counts: dict[str, int] = {}
        for kind in self.nodes.values():
            counts[kind] = counts.get(kind, 0) + 1
        return counts

    def signatures(self) -> list[tuple]:
        """Per-node (kind, sorted outgoing edge kinds) signatures, sorted."""
        out: dict[str, list[str]] = {nid: [] for nid in self.nodes}
        for src, _dst, kind in self.edges:
            out[src].append(kind)
        sigs = [
            (self.nodes[nid], tuple(sorted(out[nid]))) for nid in self.nodes
        ]
        sigs.sort()
        return sigs


def build_dependence_graph(fragment, deadline: Deadline | None = None) -> DependenceGraph:
    """Single-pass def/use/control extraction with block-scoped binding.

    Definitions flow into the same and nested blocks only (last def wins);
    a statement's first node receives a control edge from its governing
    branch keyword.
    """
    tokens = fragment.tokens
    python_mode = fragment.language_hint == "python"

    nodes: dict[str, str] = {}
    edges: set[tuple[str, str, str]] = set()
    counter = 0

    env: list[dict[str, str]] = [{}]
    owners: list[str | None] = [None]  # control owner per scope layer
    pending_defs: dict[str, str] = {}
    stmt_first: str | None = None
    inline_ctrl: str | None = None
    pending_ctrl: str | None = None
    paren_depth = 0
    prev_line = None

    def new_node(kind: str, tag: str) -> str:
        nonlocal counter
        node_id = f"{kind}:{tag}:{counter}"
        counter += 1
        nodes[node_id] = kind
        return node_id

    def lookup(name: str) -> str | None:
        for layer in reversed(env):
            if name in layer:
                return layer[name]
        return None

    def note_statement_node(node_id: str) -> None:
        nonlocal stmt_first, inline_ctrl
        if stmt_first is not None:
            return
        stmt_first = node_id
        if inline_ctrl is not None:
            edges.add((inline_ctrl, node_id, "control"))
            inline_ctrl = None
        elif owners[-1] is not None:
            edges.add((owners[-1], node_id, "control"))

    def end_statement() -> None:
        nonlocal stmt_first
        env[-1].update(pending_defs)
        pending_defs.clear()
        stmt_first = None

    for i, token in enumerate(tokens):
        if i % 1024 == 0:
            budget.check(deadline)

        if python_mode and prev_line is not None and token.line != prev_line and paren_depth == 0:
            end_statement()
        prev_line = token.line

        lexeme = token.lexeme
        if token.kind == PUNCTUATION:
            if lexeme == "{":
                env.append({})
                owners.append(pending_ctrl)
                pending_ctrl = None
                end_statement()
            elif lexeme == "}":
                end_statement()
                if len(env) > 1:
                    env.pop()
                    owners.pop()
            elif lexeme == ";":
                env[-1].update(pending_defs)
                pending_defs.clear()
                if paren_depth == 0:
                    stmt_first = None
                    inline_ctrl = None
            elif lexeme == "(":
                paren_depth += 1
            elif lexeme == ")":
                paren_depth = max(0, paren_depth - 1)
                if paren_depth == 0 and pending_ctrl is not None:
                    nxt = tokens[i + 1] if i + 1 < len(tokens) else None
                    if nxt is None or nxt.lexeme != "{":
                        inline_ctrl = pending_ctrl
                        pending_ctrl = None
                        stmt_first = None
            elif lexeme == ":" and python_mode and paren_depth == 0 and pending_ctrl is not None:
                inline_ctrl = pending_ctrl
                pending_ctrl = None
                stmt_first = None
            continue

        if token.kind == KEYWORD and lexeme in CONTROL_KEYWORDS:
            ctrl = new_node("control", lexeme)
            note_statement_node(ctrl)
            pending_ctrl = ctrl
            if lexeme == "else" and not python_mode:
                nxt = tokens[i + 1] if i + 1 < len(tokens) else None
                if nxt is not None and nxt.lexeme not in ("{", "if"):
                    inline_ctrl = ctrl
                    pending_ctrl = None
                    stmt_first = None
            continue

        if token.kind == IDENTIFIER:
            nxt = tokens[i + 1] if i + 1 < len(tokens) else None
            prev = tokens[i - 1] if i > 0 else None
            if nxt is not None and nxt.lexeme == "(":
                continue  # call name, not a variable read
            if prev is not None and prev.lexeme == ".":
                continue  # member access
            if nxt is not None and nxt.kind == OPERATOR and nxt.lexeme in _ASSIGN_OPS:
                def_node = new_node("def", lexeme)
                note_statement_node(def_node)
                if nxt.lexeme != "=":  # compound assignment also reads
                    use_node = new_node("use", lexeme)
                    bound = lookup(lexeme)
                    if bound is not None and bound != def_node:
                        edges.add((bound, use_node, "data"))
                pending_defs[lexeme] = def_node
            else:
                use_node = new_node("use", lexeme)
                note_statement_node(use_node)
                bound = lookup(lexeme)  # pre-statement env: x = x + 1 reads the old x
                if bound is not None:
                    edges.add((bound, use_node, "data"))
            continue

    budget.check(deadline)
    return DependenceGraph(nodes, frozenset(edges))


@dataclass(frozen=True)
class MetricsProfile:
    loc: int
    token_count: int
    unique_identifiers: int
    branching_points: int
    loop_count: int
    call_count: int
    max_nesting: int

    def as_vector(self) -> tuple[int, ...]:
        return (
            self.loc,
            self.token_count,
            self.unique_identifiers,
            self.branching_points,
            self.loop_count,
            self.call_count,
            self.max_nesting,
        )


def compute_metrics(fragment) -> MetricsProfile:
    """Count-based profile; all counts from one token scan."""
    tokens = fragment.tokens
    python_mode = fragment.language_hint == "python"

    lines = set()
    identifiers = set()
    branching = 0
    loops = 0
    calls = 0
    depth = 0
    max_depth = 0
    indent_stack = [0]
    prev_line = None

    for i, token in enumerate(tokens):
        lines.add(token.line)
        if python_mode and token.line != prev_line:
            if depth == 0 and prev_line is not None:
                indent = token.column - 1
                if indent > indent_stack[-1]:
                    indent_stack.append(indent)
                else:
                    while indent < indent_stack[-1]:
                        indent_stack.pop()
            prev_line = token.line
        elif prev_line is None:
            prev_line = token.line

        lexeme = token.lexeme
        if token.kind == KEYWORD:
            if lexeme in _BRANCH_KEYWORDS:
                branching += 1
            elif lexeme in _LOOP_KEYWORDS:
                loops += 1
        elif token.kind == IDENTIFIER:
            identifiers.add(lexeme)
            if (
                i + 1 < len(tokens)
                and tokens[i + 1].lexeme == "("
                and lexeme not in CALL_KEYWORD_EXCLUSIONS
            ):
                calls += 1
        elif token.kind == OPERATOR and lexeme == "?":
            branching += 1

        if token.kind == PUNCTUATION:
            if lexeme in _OPENERS:
                depth += 1
                max_depth = max(max_depth, depth + len(indent_stack) - 1)
            elif lexeme in _CLOSERS:
                depth = max(0, depth - 1)
        max_depth = max(max_depth, depth + len(indent_stack) - 1)

    return MetricsProfile(
        loc=len(lines),
        token_count=len(tokens),
        unique_identifiers=len(identifiers),
        branching_points=branching,
        loop_count=loops,
        call_count=calls,
        max_nesting=max_depth,
    )
