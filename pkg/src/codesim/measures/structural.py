"""Structure measures over the derived representations of a fragment pair."""

from __future__ import annotations

import math
from collections import Counter

from codesim import budget
from codesim.budget import Deadline
from codesim.code_model.structures import SyntaxTree, TreeNode
from codesim.measures.fingerprints import fnv1a
from codesim.measures.textual import counter_jaccard, set_jaccard


def subtree_hash_multiset(tree: SyntaxTree, deadline: Deadline | None = None) -> Counter:
    """Shape hash of the subtree rooted at every node, as a multiset."""
    counts: Counter = Counter()
    steps = 0

    def go(node: TreeNode) -> int:
        nonlocal steps
        steps += 1
        if steps % 2048 == 0:
            budget.check(deadline)
        child_hashes = tuple(go(c) for c in node.children)
        h = fnv1a(node.label + "|" + ",".join(map(str, child_hashes)))
        counts[h] += 1
        return h

    go(tree.root)
    return counts


def degree_label_multiset(tree: SyntaxTree, deadline: Deadline | None = None) -> Counter:
    """(label, degree) multiset of the syntax tree viewed as a graph."""
    counts: Counter = Counter()
    steps = 0
    stack = [(tree.root, True)]
    while stack:
        node, is_root = stack.pop()
        steps += 1
        if steps % 4096 == 0:
            budget.check(deadline)
        degree = len(node.children) + (0 if is_root else 1)
        counts[(node.label, degree)] += 1
        for child in node.children:
            stack.append((child, False))
    return counts


def metrics_cosine(pa, pb) -> float:
    va = pa.as_vector()
    vb = pb.as_vector()
    norm_a = math.sqrt(sum(x * x for x in va))
    norm_b = math.sqrt(sum(x * x for x in vb))
    if norm_a == 0.0 and norm_b == 0.0:
        return 1.0
    if norm_a == 0.0 or norm_b == 0.0:
        return 0.0
    dot = sum(x * y for x, y in zip(va, vb))
    return min(1.0, max(0.0, dot / (norm_a * norm_b)))


def score_structure(kind: str, a, b, deadline: Deadline | None = None) -> float:
    budget.check(deadline)
    if kind == "ast":
        ha = subtree_hash_multiset(a.syntax_tree(deadline), deadline)
        hb = subtree_hash_multiset(b.syntax_tree(deadline), deadline)
        return counter_jaccard(ha, hb)
    if kind == "graph_match":
        ga = degree_label_multiset(a.syntax_tree(deadline), deadline)
        gb = degree_label_multiset(b.syntax_tree(deadline), deadline)
        return counter_jaccard(ga, gb)
    if kind == "pdg":
        graph_a = a.dependence_graph(deadline)
        graph_b = b.dependence_graph(deadline)
        if not graph_a.nodes and not graph_b.nodes:
            return 1.0
        if not graph_a.nodes or not graph_b.nodes:
            return 0.0
        return counter_jaccard(Counter(graph_a.signatures()), Counter(graph_b.signatures()))
    if kind == "function_calls":
        return set_jaccard(a.call_set(), b.call_set())
    if kind == "metrics":
        return metrics_cosine(a.metrics(), b.metrics())
    raise KeyError(f"unknown structure kind: {kind!r}")
