"""Benchmark corpus loading and pairing.

Two corpora are supported: a plagiarism-style directory tree (per-task
folders holding original / plagiarized / non-plagiarized files) and a
large-scale two-file clone benchmark (a line-oriented code record file
plus a labeled pair list). Loaders are deterministic given identical
files; all returned collections are plain immutable-after-load data.
"""

from __future__ import annotations

import hashlib
import json
import math
import random
from dataclasses import dataclass, field
from pathlib import Path

from codesim.code_model import CodeFragment, hint_for_path

LABEL_CLONE = "clone"
LABEL_NOT_CLONE = "not_clone"


class DatasetError(ValueError):
    pass


@dataclass(frozen=True)
class LabeledPair:
    left: str
    right: str
    label: str
    origin: str = "synthetic"  # irplag | bcb | synthetic

    def __post_init__(self):
        if self.left == self.right:
            raise DatasetError(f"pair references one fragment twice: {self.left!r}")
        if self.label not in (LABEL_CLONE, LABEL_NOT_CLONE):
            raise DatasetError(f"bad label: {self.label!r}")


@dataclass
class LoadReport:
    skipped: int = 0
    warnings: list = field(default_factory=list)

    def warn(self, message: str) -> None:
        self.warnings.append(message)


@dataclass(frozen=True)
class SplitSpec:
    ratios: tuple = (0.8, 0.1, 0.1)  # train, validation, test
    seed: int = 0
    stratified: bool = True

    def __post_init__(self):
        if len(self.ratios) != 3 or any(r <= 0 for r in self.ratios):
            raise DatasetError(f"need three positive ratios, got {self.ratios}")
        if abs(sum(self.ratios) - 1.0) > 1e-9:
            raise DatasetError(f"ratios must sum to 1, got {sum(self.ratios)}")


def label_to_int(label: str) -> int:
    return 1 if label == LABEL_CLONE else 0


def fingerprint_pairs(pairs) -> str:
    """Stable digest of a pair list, for model metadata."""
    digest = hashlib.sha256()
    for pair in pairs:
        digest.update(f"{pair.left}|{pair.right}|{pair.label}\n".encode("utf-8"))
    return digest.hexdigest()[:16]


# --- IR-Plag-style directory tree ------------------------------------------

_ORIGINAL_DIR = "original"
_PLAGIARIZED_DIR = "plagiarized"
_NON_PLAGIARIZED_DIR = "non-plagiarized"
MANIFEST_NAME = "manifest.json"


def _files_under(directory: Path) -> list[Path]:
    if not directory.is_dir():
        return []
    return sorted(p for p in directory.rglob("*") if p.is_file())


def load_irplag(root_dir):
    """Load a per-task plagiarism tree.

    Every candidate file is paired with its own task's original:
    plagiarized -> clone, non-plagiarized -> not_clone. A manifest.json at
    the root, when present, must agree with the loaded counts.

    Returns (fragments, pairs, report).
    """
    root = Path(root_dir)
    if not root.is_dir():
        raise DatasetError(f"not a directory: {root_dir}")

    task_dirs = sorted(
        d for d in root.iterdir()
        if d.is_dir() and (
            (d / _ORIGINAL_DIR).is_dir()
            or (d / _PLAGIARIZED_DIR).is_dir()
            or (d / _NON_PLAGIARIZED_DIR).is_dir()
        )
    )
    if not task_dirs:
        raise DatasetError(f"no tasks found under {root_dir}")

    missing_originals = [d.name for d in task_dirs if not _files_under(d / _ORIGINAL_DIR)]
    if missing_originals:
        raise DatasetError(f"tasks without an original file: {missing_originals}")

    report = LoadReport()
    fragments: dict[str, CodeFragment] = {}
    pairs: list[LabeledPair] = []
    n_originals = n_plag = n_nonplag = 0

    def load_file(path: Path) -> str | None:
        rel = path.relative_to(root).as_posix()
        try:
            with open(path, "r", encoding="utf-8", errors="replace") as fh:
                source = fh.read()
        except OSError as exc:
            report.skipped += 1
            report.warn(f"unreadable file skipped: {rel} ({exc})")
            return None
        fragments[rel] = CodeFragment(rel, source, hint_for_path(str(path)))
        return rel

    for task in task_dirs:
        original_files = _files_under(task / _ORIGINAL_DIR)
        if len(original_files) > 1:
            report.warn(
                f"task {task.name} has {len(original_files)} originals; using the first"
            )
        original_id = load_file(original_files[0])
        if original_id is None:
            raise DatasetError(f"original unreadable for task {task.name}")
        n_originals += 1

        for path in _files_under(task / _PLAGIARIZED_DIR):
            rel = load_file(path)
            if rel is not None:
                pairs.append(LabeledPair(original_id, rel, LABEL_CLONE, "irplag"))
                n_plag += 1
        for path in _files_under(task / _NON_PLAGIARIZED_DIR):
            rel = load_file(path)
            if rel is not None:
                pairs.append(LabeledPair(original_id, rel, LABEL_NOT_CLONE, "irplag"))
                n_nonplag += 1

    manifest_path = root / MANIFEST_NAME
    if manifest_path.is_file():
        with open(manifest_path, "r", encoding="utf-8") as fh:
            manifest = json.load(fh)
        observed = {
            "files": len(fragments),
            "originals": n_originals,
            "plagiarized": n_plag,
            "non_plagiarized": n_nonplag,
        }
        for key, expected in manifest.items():
            if key in observed and observed[key] != expected:
                raise DatasetError(
                    f"manifest mismatch for {key}: manifest says {expected}, "
                    f"loaded {observed[key]}"
                )
    return fragments, pairs, report


# --- two-file clone benchmark format ----------------------------------------


def escape_source(source: str) -> str:
    return (
        source.replace("\\", "\\\\")
        .replace("\t", "\\t")
        .replace("\r", "\\r")
        .replace("\n", "\\n")
    )


def unescape_source(text: str) -> str:
    out = []
    i = 0
    while i < len(text):
        ch = text[i]
        if ch == "\\" and i + 1 < len(text):
            nxt = text[i + 1]
            mapped = {"\\": "\\", "t": "\t", "r": "\r", "n": "\n"}.get(nxt)
            if mapped is not None:
                out.append(mapped)
                i += 2
                continue
        out.append(ch)
        i += 1
    return "".join(out)


def load_bcb(code_file, pair_file, limit: int | None = None,
             language_hint: str = "java"):
    """Load the two-file benchmark format.

    code_file: one record per line, "<id>\\t<escaped source>" with newlines
    and tabs backslash-escaped. pair_file: "<id1>\\t<id2>\\t<label>" with
    label 1 for clone. Pairs referencing unknown ids are skipped and
    counted; malformed lines are errors naming the line number.

    Returns (fragments, pairs, report).
    """
    fragments: dict[str, CodeFragment] = {}
    report = LoadReport()

    with open(code_file, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t", 1)
            if len(parts) != 2 or not parts[0]:
                raise DatasetError(f"{code_file}:{lineno}: malformed code record")
            fragment_id, escaped = parts
            fragments[fragment_id] = CodeFragment(
                fragment_id, unescape_source(escaped), language_hint
            )

    pairs: list[LabeledPair] = []
    with open(pair_file, "r", encoding="utf-8") as fh:
        for lineno, line in enumerate(fh, start=1):
            if limit is not None and len(pairs) >= limit:
                break
            line = line.rstrip("\n")
            if not line:
                continue
            parts = line.split("\t")
            if len(parts) != 3 or parts[2] not in ("0", "1"):
                raise DatasetError(f"{pair_file}:{lineno}: malformed pair record")
            id1, id2, label = parts
            if id1 not in fragments or id2 not in fragments:
                report.skipped += 1
                report.warn(f"{pair_file}:{lineno}: unknown fragment id, pair skipped")
                continue
            pairs.append(
                LabeledPair(id1, id2,
                            LABEL_CLONE if label == "1" else LABEL_NOT_CLONE, "bcb")
            )
    return fragments, pairs, report


# --- splitting and subsampling ----------------------------------------------


def _allocate_largest_split_first(n: int, ratios) -> list[int]:
    sizes = [math.floor(n * r) for r in ratios]
    remainder = n - sum(sizes)
    order = sorted(range(len(ratios)), key=lambda i: (-ratios[i], i))
    for i in range(remainder):
        sizes[order[i % len(order)]] += 1
    return sizes


def split(pairs, spec: SplitSpec):
    """Seeded disjoint (train, validation, test) cover of the pairs."""
    if len(pairs) < 3:
        raise DatasetError(f"need at least 3 pairs to split, got {len(pairs)}")
    rng = random.Random(spec.seed)
    shuffled = list(pairs)
    rng.shuffle(shuffled)

    if not spec.stratified:
        sizes = _allocate_largest_split_first(len(shuffled), spec.ratios)
        a, b = sizes[0], sizes[0] + sizes[1]
        return shuffled[:a], shuffled[a:b], shuffled[b:]

    splits: tuple[list, list, list] = ([], [], [])
    for label in (LABEL_CLONE, LABEL_NOT_CLONE):
        class_items = [p for p in shuffled if p.label == label]
        sizes = _allocate_largest_split_first(len(class_items), spec.ratios)
        a, b = sizes[0], sizes[0] + sizes[1]
        splits[0].extend(class_items[:a])
        splits[1].extend(class_items[a:b])
        splits[2].extend(class_items[b:])
    return splits


def subsample(pairs, n: int, seed: int = 0, stratified: bool = True):
    """Seeded sample without replacement; stratified keeps label proportions
    by the largest-remainder rule."""
    if n > len(pairs):
        raise DatasetError(f"cannot sample {n} from {len(pairs)} pairs")
    rng = random.Random(seed)
    shuffled = list(pairs)
    rng.shuffle(shuffled)
    if not stratified:
        return shuffled[:n]

    classes = [
        [p for p in shuffled if p.label == LABEL_CLONE],
        [p for p in shuffled if p.label == LABEL_NOT_CLONE],
    ]
    total = len(pairs)
    exact = [n * len(c) / total for c in classes]
    counts = [math.floor(e) for e in exact]
    order = sorted(range(2), key=lambda i: (-(exact[i] - counts[i]), i))
    for i in range(n - sum(counts)):
        counts[order[i % 2]] += 1
    out = []
    for cls, count in zip(classes, counts):
        out.extend(cls[:count])
    return out
