"""Aggregators over similarity vectors: weighted linear combination,
bootstrap-bagged shallow trees, and adaptively boosted decision stumps.

Training is deterministic given (seed, data, hyperparameters); models are
immutable after fitting and serialize to a human-readable versioned JSON
format so the learned weights stay inspectable.
"""

from __future__ import annotations

import json
import math
import random
from dataclasses import dataclass, field

import numpy as np

from codesim.measures.missing import is_missing
from codesim.measures.vector import SimilarityVector, feature_row

MODEL_FORMAT = "codesim-model"
MODEL_FORMAT_VERSION = 1

WEIGHT_SUM_TOL = 1e-9


class DegenerateLabelsError(ValueError):
    """Training set carries only one class."""


class ModelFormatError(ValueError):
    """Model file is corrupt, truncated, or from an unknown format version."""


@dataclass(frozen=True)
class Stump:
    """One-threshold classifier on a single feature.

    polarity 'ge' votes clone when value >= threshold, 'lt' when value <
    threshold.
    """

    feature: str
    threshold: float
    polarity: str = "ge"

    def __post_init__(self):
        if self.polarity not in ("ge", "lt"):
            raise ValueError(f"bad polarity: {self.polarity!r}")
        if not 0.0 <= self.threshold <= 1.0:
            raise ValueError(f"stump threshold outside [0, 1]: {self.threshold}")

    def vote(self, value: float) -> int:
        hit = value >= self.threshold
        if self.polarity == "lt":
            hit = not hit
        return 1 if hit else -1


@dataclass
class EnsembleModel:
    kind: str  # linear | bagging | boosting
    feature_names: tuple
    weights: dict | None = None              # linear
    members: tuple = ()                      # bagging: nested-dict trees
    bootstrap_indices: tuple = ()            # bagging: recorded samples
    rounds: tuple = ()                       # boosting: (Stump, alpha) pairs
    stop_reason: str = ""                    # boosting early-stop note
    metadata: dict = field(default_factory=dict)


def _row_for(feature_names, v) -> list[float]:
    if isinstance(v, SimilarityVector):
        return feature_row(v, feature_names)
    row = []
    for name in feature_names:
        if name not in v:
            raise KeyError(f"vector lacks measure {name!r} required by the model")
        value = v[name]
        row.append(0.5 if is_missing(value) else float(value))
    return row


def _as_row(model: EnsembleModel, v) -> list[float]:
    return _row_for(model.feature_names, v)


def _labels_array(labels) -> np.ndarray:
    y = np.asarray(
        [1 if lab in (1, True, "clone") else 0 for lab in labels], dtype=np.int64
    )
    return y


def _training_matrix(train, feature_names):
    vectors, labels = zip(*train)
    X = np.asarray([_row_for(feature_names, v) for v in vectors], dtype=np.float64)
    y = _labels_array(labels)
    return X, y


def _infer_feature_names(train) -> tuple:
    first = train[0][0]
    if isinstance(first, SimilarityVector):
        from codesim.measures.vector import feature_names as fn

        return fn(tuple(first.scores.keys()))
    return tuple(first.keys())


def _threshold_candidates(values: np.ndarray) -> np.ndarray:
    distinct = np.unique(values)
    mids = (distinct[:-1] + distinct[1:]) / 2.0 if distinct.size > 1 else np.empty(0)
    return np.unique(np.concatenate(([0.0], mids, [1.0])))


def _column_best_f(x: np.ndarray, y: np.ndarray) -> tuple[float, float]:
    """Best F-measure of the rule 'clone iff x > theta' and its lowest theta."""
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    total_clones = int(ys.sum())
    suffix_clones = total_clones - np.concatenate(([0], np.cumsum(ys)))
    thetas = _threshold_candidates(xs)
    idx = np.searchsorted(xs, thetas, side="right")
    tp = suffix_clones[idx]
    predicted = xs.size - idx
    fp = predicted - tp
    fn = total_clones - tp
    denom = 2 * tp + fp + fn
    with np.errstate(invalid="ignore", divide="ignore"):
        f = np.where(denom > 0, 2 * tp / np.maximum(denom, 1), 0.0)
    best = int(np.argmax(f))  # argmax takes the first (lowest theta) on ties
    return float(thetas[best]), float(f[best])


# --- linear ----------------------------------------------------------------


def aggregate_linear(weights: dict, v) -> float:
    """Convex combination of measure scores; weights must be nonnegative
    and sum to one within 1e-9."""
    total = 0.0
    acc = 0.0
    for name, alpha in weights.items():
        if alpha < 0:
            raise ValueError(f"negative weight for {name!r}: {alpha}")
        total += alpha
    if abs(total - 1.0) > WEIGHT_SUM_TOL:
        raise ValueError(f"weights must sum to 1 (got {total!r})")
    if isinstance(v, SimilarityVector):
        values = {
            name: (0.5 if is_missing(v.scores[name]) else v.scores[name])
            for name in weights
            if name in v.scores
        }
        missing = set(weights) - set(values)
        if missing:
            raise KeyError(f"vector lacks measures {sorted(missing)}")
    else:
        values = v
    for name, alpha in weights.items():
        acc += alpha * float(values[name])
    return min(1.0, max(0.0, acc))


def fit_linear(train, dataset_fingerprint: str = "") -> EnsembleModel:
    """Weight each measure by its best single-threshold F-measure on the
    training pairs, normalized to sum to one."""
    if len(train) < 2:
        raise ValueError("need at least 2 training pairs")
    all_names = _infer_feature_names(train)
    # the linear combination runs over measures only, not was-missing flags
    names = tuple(n for n in all_names if not n.endswith(".missing"))
    X, y = _training_matrix(train, names)
    if y.min() == y.max():
        raise DegenerateLabelsError("degenerate labels: training set has one class")

    raw = np.array([_column_best_f(X[:, j], y)[1] for j in range(X.shape[1])])
    if raw.sum() <= 0:
        raw = np.ones_like(raw)
    weights = raw / raw.sum()
    return EnsembleModel(
        kind="linear",
        feature_names=tuple(names),
        weights={name: float(w) for name, w in zip(names, weights)},
        metadata=_metadata(seed=None, dataset_fingerprint=dataset_fingerprint,
                           hyperparameters={}),
    )


def uniform_linear_model(feature_names) -> EnsembleModel:
    """Zero-training linear ensemble with uniform weights."""
    names = tuple(feature_names)
    w = 1.0 / len(names)
    weights = {name: w for name in names}
    # absorb rounding drift into the first weight
    drift = 1.0 - sum(weights.values())
    weights[names[0]] += drift
    return EnsembleModel(
        kind="linear",
        feature_names=names,
        weights=weights,
        metadata=_metadata(seed=None, dataset_fingerprint="", hyperparameters={}),
    )


# --- bagging ---------------------------------------------------------------


def _gini_best_split(x: np.ndarray, y: np.ndarray):
    """Best (theta, impurity) Gini split of one column, or None."""
    order = np.argsort(x, kind="stable")
    xs = x[order]
    ys = y[order]
    n = xs.size
    total_clones = int(ys.sum())
    # split positions only between distinct adjacent values
    boundary = np.nonzero(xs[1:] > xs[:-1])[0] + 1
    if boundary.size == 0:
        return None
    prefix_clones = np.cumsum(ys)
    left_n = boundary
    left_c = prefix_clones[boundary - 1]
    right_n = n - left_n
    right_c = total_clones - left_c

    def gini(count, clones):
        p = clones / count
        return 1.0 - p * p - (1.0 - p) * (1.0 - p)

    impurity = (left_n * gini(left_n, left_c) + right_n * gini(right_n, right_c)) / n
    best = int(np.argmin(impurity))
    theta = float((xs[boundary[best] - 1] + xs[boundary[best]]) / 2.0)
    return theta, float(impurity[best])


def _fit_tree(X: np.ndarray, y: np.ndarray, feature_names, depth: int,
              max_depth: int, feature_order) -> dict:
    n = y.size
    clone_fraction = float(y.sum()) / n
    if depth >= max_depth or n < 2 or clone_fraction in (0.0, 1.0):
        return {"leaf": clone_fraction}

    node_gini = 1.0 - clone_fraction**2 - (1.0 - clone_fraction) ** 2
    best = None  # (impurity, feature_idx, theta)
    for j in feature_order:
        found = _gini_best_split(X[:, j], y)
        if found is None:
            continue
        theta, impurity = found
        if impurity < node_gini - 1e-12 and (best is None or impurity < best[0] - 1e-12):
            best = (impurity, j, theta)
    if best is None:
        return {"leaf": clone_fraction}

    _, j, theta = best
    mask = X[:, j] > theta
    return {
        "feature": feature_names[j],
        "threshold": theta,
        "left": _fit_tree(X[~mask], y[~mask], feature_names, depth + 1, max_depth, feature_order),
        "right": _fit_tree(X[mask], y[mask], feature_names, depth + 1, max_depth, feature_order),
    }


def _tree_vote(tree: dict, row: dict) -> float:
    node = tree
    while "leaf" not in node:
        node = node["right"] if row[node["feature"]] > node["threshold"] else node["left"]
    return node["leaf"]


def fit_bagging(train, members: int = 50, seed: int = 0, tree_depth: int = 3,
                dataset_fingerprint: str = "") -> EnsembleModel:
    """Bootstrap-aggregated depth-limited Gini trees; prediction is the
    mean member vote. Bootstrap index lists are recorded in the model."""
    if members <= 0:
        raise ValueError("member count must be >= 1")
    if not train:
        raise ValueError("empty training set")
    names = _infer_feature_names(train)
    X, y = _training_matrix(train, names)
    n = y.size
    # lexicographic feature order fixes split tie-breaking
    feature_order = sorted(range(len(names)), key=lambda j: names[j])

    rng = random.Random(seed)
    bootstraps = tuple(
        tuple(rng.randrange(n) for _ in range(n)) for _ in range(members)
    )
    trees = []
    for indices in bootstraps:
        idx = np.asarray(indices, dtype=np.int64)
        trees.append(_fit_tree(X[idx], y[idx], names, 0, tree_depth, feature_order))

    return EnsembleModel(
        kind="bagging",
        feature_names=tuple(names),
        members=tuple(trees),
        bootstrap_indices=bootstraps,
        metadata=_metadata(
            seed=seed,
            dataset_fingerprint=dataset_fingerprint,
            hyperparameters={"members": members, "tree_depth": tree_depth},
        ),
    )


# --- boosting ---------------------------------------------------------------


def _best_stump(X: np.ndarray, y_signed: np.ndarray, w: np.ndarray,
                feature_names, feature_order):
    """Minimum-weighted-error stump; ties resolved by lowest feature name,
    lowest threshold, then 'ge' before 'lt'."""
    best = None  # (error, stump)
    pos = y_signed > 0
    for j in feature_order:
        x = X[:, j]
        order = np.argsort(x, kind="stable")
        xs = x[order]
        wp = np.where(pos[order], w[order], 0.0)
        wn = np.where(pos[order], 0.0, w[order])
        pref_p = np.concatenate(([0.0], np.cumsum(wp)))
        pref_n = np.concatenate(([0.0], np.cumsum(wn)))
        tot_p = pref_p[-1]
        tot_n = pref_n[-1]
        thetas = _threshold_candidates(xs)
        idx = np.searchsorted(xs, thetas, side="left")
        # 'ge': clone for x >= theta -> errors: clones below, non-clones at/above
        err_ge = pref_p[idx] + (tot_n - pref_n[idx])
        # 'lt': clone for x < theta
        err_lt = pref_n[idx] + (tot_p - pref_p[idx])
        for polarity, errs in (("ge", err_ge), ("lt", err_lt)):
            k = int(np.argmin(errs))
            err = float(errs[k])
            if best is None or err < best[0] - 1e-15:
                best = (err, Stump(feature_names[j], float(thetas[k]), polarity))
    return best


def fit_boosting(train, rounds: int = 50, seed: int = 0,
                 dataset_fingerprint: str = "") -> EnsembleModel:
    """Discrete adaptive boosting over decision stumps.

    Per round: pick the stump with minimum weighted error e, weight it by
    alpha = ln((1 - e) / e) / 2, scale misclassified pairs up by exp(alpha)
    and the rest down by exp(-alpha), renormalize. Stops early on a perfect
    stump (alpha capped with e_min = 1 / (2n)) or when no stump beats 0.5.
    """
    if rounds <= 0:
        raise ValueError("round count must be >= 1")
    if not train:
        raise ValueError("empty training set")
    names = _infer_feature_names(train)
    X, y01 = _training_matrix(train, names)
    if y01.min() == y01.max():
        raise DegenerateLabelsError("degenerate labels: training set has one class")
    y = np.where(y01 > 0, 1.0, -1.0)
    n = y.size
    w = np.full(n, 1.0 / n)
    feature_order = sorted(range(len(names)), key=lambda j: names[j])
    column_of = {name: j for j, name in enumerate(names)}

    kept: list[tuple[Stump, float]] = []
    stop_reason = "rounds exhausted"
    for _ in range(rounds):
        if w.sum() <= 0:
            raise ValueError("zero-weight training set")
        error, stump = _best_stump(X, y, w, names, feature_order)
        if error >= 0.5 - 1e-12:
            stop_reason = "uninformative stump (error >= 0.5)"
            break
        col = X[:, column_of[stump.feature]]
        votes = np.where(col >= stump.threshold, 1.0, -1.0)
        if stump.polarity == "lt":
            votes = -votes
        if error <= 0.0:
            eps_min = 1.0 / (2.0 * n)
            alpha = 0.5 * math.log((1.0 - eps_min) / eps_min)
            kept.append((stump, alpha))
            stop_reason = "perfect stump"
            break
        alpha = 0.5 * math.log((1.0 - error) / error)
        kept.append((stump, alpha))
        w = w * np.exp(-alpha * y * votes)
        w = w / w.sum()

    return EnsembleModel(
        kind="boosting",
        feature_names=tuple(names),
        rounds=tuple(kept),
        stop_reason=stop_reason,
        metadata=_metadata(
            seed=seed,
            dataset_fingerprint=dataset_fingerprint,
            hyperparameters={"rounds": rounds},
        ),
    )


# --- prediction / explanation ----------------------------------------------


def predict(model: EnsembleModel, v) -> float:
    """Aggregated clone score in [0, 1] for one similarity vector."""
    row = _as_row(model, v)
    values = dict(zip(model.feature_names, row))
    if model.kind == "linear":
        return aggregate_linear(model.weights, values)
    if model.kind == "bagging":
        votes = [_tree_vote(tree, values) for tree in model.members]
        return sum(votes) / len(votes)
    if model.kind == "boosting":
        margin = sum(alpha * stump.vote(values[stump.feature])
                     for stump, alpha in model.rounds)
        return 1.0 / (1.0 + math.exp(-margin))
    raise ValueError(f"unknown model kind: {model.kind!r}")


def classify(model: EnsembleModel, v, theta: float = 0.5) -> str:
    """'clone' iff predict(model, v) strictly exceeds theta."""
    if not 0.0 <= theta <= 1.0:
        raise ValueError(f"theta outside [0, 1]: {theta}")
    return "clone" if predict(model, v) > theta else "not_clone"


def explain(model: EnsembleModel, v) -> list[tuple[str, float]]:
    """Per-measure contributions, largest magnitude first.

    linear: alpha_i * v_i, summing to the prediction. boosting: round
    weights alpha_t * h_t grouped by stump measure, summing to the signed
    margin (the prediction is the logistic of that sum). bagging: split
    frequency share of each measure times the prediction, summing to the
    prediction when the forest contains at least one split.
    """
    row = _as_row(model, v)
    values = dict(zip(model.feature_names, row))
    contributions: dict[str, float] = {}
    if model.kind == "linear":
        contributions = {name: alpha * values[name]
                         for name, alpha in model.weights.items()}
    elif model.kind == "boosting":
        for stump, alpha in model.rounds:
            term = alpha * stump.vote(values[stump.feature])
            contributions[stump.feature] = contributions.get(stump.feature, 0.0) + term
    elif model.kind == "bagging":
        counts: dict[str, int] = {}

        def walk(node):
            if "leaf" in node:
                return
            counts[node["feature"]] = counts.get(node["feature"], 0) + 1
            walk(node["left"])
            walk(node["right"])

        for tree in model.members:
            walk(tree)
        total = sum(counts.values())
        if total:
            score = predict(model, v)
            contributions = {name: score * c / total for name, c in counts.items()}
    else:
        raise ValueError(f"unknown model kind: {model.kind!r}")
    return sorted(contributions.items(), key=lambda kv: (-abs(kv[1]), kv[0]))


# --- serialization ----------------------------------------------------------


def _metadata(seed, dataset_fingerprint: str, hyperparameters: dict) -> dict:
    return {
        "seed": seed,
        "dataset_fingerprint": dataset_fingerprint,
        "imputation": {"fill": 0.5, "missing_flags": "per pluggable measure"},
        "hyperparameters": hyperparameters,
    }


def save_model(model: EnsembleModel, path) -> None:
    payload = {
        "format": MODEL_FORMAT,
        "format_version": MODEL_FORMAT_VERSION,
        "kind": model.kind,
        "feature_names": list(model.feature_names),
        "metadata": model.metadata,
        "stop_reason": model.stop_reason,
        "weights": model.weights,
        "members": list(model.members),
        "bootstrap_indices": [list(b) for b in model.bootstrap_indices],
        "rounds": [
            {"feature": s.feature, "threshold": s.threshold,
             "polarity": s.polarity, "alpha": alpha}
            for s, alpha in model.rounds
        ],
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(payload, fh, indent=2, sort_keys=True)
        fh.write("\n")


def load_model(path) -> EnsembleModel:
    try:
        with open(path, "r", encoding="utf-8") as fh:
            payload = json.load(fh)
    except (OSError, json.JSONDecodeError) as exc:
        raise ModelFormatError(f"unreadable model file {path}: {exc}") from exc
    if not isinstance(payload, dict) or payload.get("format") != MODEL_FORMAT:
        raise ModelFormatError(f"not a {MODEL_FORMAT} file: {path}")
    if payload.get("format_version") != MODEL_FORMAT_VERSION:
        raise ModelFormatError(
            f"unsupported model format version {payload.get('format_version')!r}"
        )
    try:
        rounds = tuple(
            (Stump(r["feature"], r["threshold"], r["polarity"]), r["alpha"])
            for r in payload["rounds"]
        )
        model = EnsembleModel(
            kind=payload["kind"],
            feature_names=tuple(payload["feature_names"]),
            weights=payload["weights"],
            members=tuple(_freeze_tree(t) for t in payload["members"]),
            bootstrap_indices=tuple(tuple(b) for b in payload["bootstrap_indices"]),
            rounds=rounds,
            stop_reason=payload.get("stop_reason", ""),
            metadata=payload["metadata"],
        )
    except (KeyError, TypeError, ValueError) as exc:
        raise ModelFormatError(f"corrupt model payload in {path}: {exc}") from exc
    if model.kind not in ("linear", "bagging", "boosting"):
        raise ModelFormatError(f"unknown model kind {model.kind!r}")
    return model


def _freeze_tree(node: dict) -> dict:
    if "leaf" in node:
        return {"leaf": float(node["leaf"])}
    return {
        "feature": node["feature"],
        "threshold": float(node["threshold"]),
        "left": _freeze_tree(node["left"]),
        "right": _freeze_tree(node["right"]),
    }
