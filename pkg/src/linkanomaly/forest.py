"""Seeded random-forest classifier over edge feature vectors.

Scores are vote fractions: the mean over trees of the positive-class
fraction in the reached leaf, where positive (label 1) means "this edge
should not exist".  Training is reproducible by construction:

* examples are canonically sorted before any sampling, so the forest is
  independent of input order;
* every random draw comes from a generator keyed on (seed, tree index),
  so serial and parallel tree construction would draw identically;
* split ties are broken by lowest feature index, then lowest threshold.

Splits use Gini impurity with midpoint thresholds between sorted distinct
values.  Like the usual reference implementations, the search keeps
scanning features beyond `features_per_split` if the drawn subset yields
no impurity-reducing split, and gives up (leaf) only when no feature does.
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Sequence

import numpy as np

from .errors import DegenerateTrainingError, ParameterError, ShapeError
from .rng import generator, seed_key

FOREST_FORMAT = "linkanomaly-forest"
FOREST_VERSION = 1

# gains below this are treated as no improvement (guards float noise)
_MIN_GAIN = 1e-12


@dataclass(frozen=True)
class TrainingExample:
    """One labeled pair: label 1 = edge does not exist (anomaly direction)."""

    features: np.ndarray
    label: int


@dataclass(frozen=True)
class ForestParams:
    tree_count: int = 100
    features_per_split: int | None = None  # None -> ceil(sqrt(n_features))
    min_leaf_size: int = 1
    max_depth: int | None = None

    def validate(self) -> None:
        if self.tree_count < 1:
            raise ParameterError("tree_count must be >= 1")
        if self.features_per_split is not None and self.features_per_split < 1:
            raise ParameterError("features_per_split must be >= 1")
        if self.min_leaf_size < 1:
            raise ParameterError("min_leaf_size must be >= 1")
        if self.max_depth is not None and self.max_depth < 0:
            raise ParameterError("max_depth must be >= 0")


@dataclass
class _Tree:
    """Flat node arrays; `feature[i] == -1` marks a leaf."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    count0: np.ndarray
    count1: np.ndarray

    def leaf_fraction(self, X: np.ndarray) -> np.ndarray:
        node = np.zeros(len(X), dtype=np.int64)
        active = self.feature[node] >= 0
        while np.any(active):
            idx = np.flatnonzero(active)
            cur = node[idx]
            go_left = X[idx, self.feature[cur]] <= self.threshold[cur]
            node[idx] = np.where(go_left, self.left[cur], self.right[cur])
            active[idx] = self.feature[node[idx]] >= 0
        c0 = self.count0[node].astype(np.float64)
        c1 = self.count1[node].astype(np.float64)
        return c1 / (c0 + c1)


def _best_split_on_feature(x: np.ndarray, y: np.ndarray, min_leaf: int,
                           parent_score: float):
    """(weighted child gini, threshold) for the best cut of x, or None."""
    n = len(x)
    order = np.argsort(x)
    xs = x[order]
    cuts = np.flatnonzero(xs[:-1] < xs[1:])  # cut after position i
    if min_leaf > 1:
        cuts = cuts[(cuts + 1 >= min_leaf) & (n - cuts - 1 >= min_leaf)]
    if len(cuts) == 0:
        return None
    left1 = np.cumsum(y[order])[cuts].astype(np.float64)
    left_n = (cuts + 1).astype(np.float64)
    left0 = left_n - left1
    total1 = float(y.sum())
    right1 = total1 - left1
    right_n = n - left_n
    right0 = right_n - right1
    score = (left_n - (left0 * left0 + left1 * left1) / left_n
             + right_n - (right0 * right0 + right1 * right1) / right_n) / n
    best = int(np.argmin(score))  # first minimum -> lowest threshold on ties
    if score[best] >= parent_score - _MIN_GAIN:
        return None
    i = cuts[best]
    thr = (xs[i] + xs[i + 1]) / 2.0
    if thr >= xs[i + 1]:  # midpoint rounded up to the right value
        thr = xs[i]
    return float(score[best]), float(thr)


def _grow_tree(X: np.ndarray, y: np.ndarray, params: ForestParams,
               mtry: int, rng: np.random.Generator) -> _Tree:
    n = len(X)
    boot = rng.integers(0, n, n)
    feature, threshold = [], []
    left, right = [], []
    count0, count1 = [], []

    def new_node() -> int:
        feature.append(-1)
        threshold.append(0.0)
        left.append(-1)
        right.append(-1)
        count0.append(0)
        count1.append(0)
        return len(feature) - 1

    stack = [(new_node(), boot, 0)]
    while stack:
        node, idx, depth = stack.pop()
        yn = y[idx]
        n1 = int(yn.sum())
        n0 = len(idx) - n1
        count0[node], count1[node] = n0, n1
        if (n0 == 0 or n1 == 0 or len(idx) < 2 * params.min_leaf_size
                or (params.max_depth is not None and depth >= params.max_depth)):
            continue
        parent_score = 1.0 - (n0 * n0 + n1 * n1) / (len(idx) * len(idx))

        best = None  # (score, feature, threshold)
        perm = rng.permutation(X.shape[1])
        for rank, f in enumerate(perm):
            found = _best_split_on_feature(X[idx, f], yn, params.min_leaf_size,
                                           parent_score)
            if found is not None:
                cand = (found[0], int(f), found[1])
                if best is None or cand < best:
                    best = cand
            if rank + 1 >= mtry and best is not None:
                break
        if best is None:
            continue
        _, f, thr = best
        go_left = X[idx, f] <= thr
        feature[node] = f
        threshold[node] = thr
        left[node] = lid = new_node()
        right[node] = rid = new_node()
        stack.append((rid, idx[~go_left], depth + 1))
        stack.append((lid, idx[go_left], depth + 1))

    return _Tree(np.array(feature, dtype=np.int32), np.array(threshold),
                 np.array(left, dtype=np.int32), np.array(right, dtype=np.int32),
                 np.array(count0, dtype=np.int64), np.array(count1, dtype=np.int64))


class LinkForest:
    """A trained forest; immutable and safe to share across threads."""

    def __init__(self, trees: list[_Tree], params: ForestParams, seed,
                 n_features: int, feature_names: Sequence[str] | None = None):
        self.trees = trees
        self.params = params
        self.seed = seed
        self.n_features = n_features
        self.feature_names = tuple(feature_names) if feature_names else None

    def predict_proba_many(self, X: np.ndarray) -> np.ndarray:
        """Vote fraction in [0, 1] per row; 1 = certainly non-existing."""
        X = np.asarray(X, dtype=np.float64)
        if X.ndim != 2 or X.shape[1] != self.n_features:
            raise ShapeError(f"expected (n, {self.n_features}) feature matrix, got {X.shape}")
        acc = np.zeros(len(X))
        for tree in self.trees:
            acc += tree.leaf_fraction(X)
        return acc / len(self.trees)

    def predict_proba(self, x) -> float:
        values = x.values if hasattr(x, "values") else x
        values = np.asarray(values, dtype=np.float64).reshape(1, -1)
        if values.shape[1] != self.n_features:
            raise ShapeError(f"expected {self.n_features} features, got {values.shape[1]}")
        return float(self.predict_proba_many(values)[0])

    # -- persistence ----------------------------------------------------

    def save(self, path) -> None:
        doc = {
            "format": FOREST_FORMAT,
            "version": FOREST_VERSION,
            "n_features": self.n_features,
            "feature_names": list(self.feature_names) if self.feature_names else None,
            "seed": list(seed_key(self.seed)),
            "params": {
                "tree_count": self.params.tree_count,
                "features_per_split": self.params.features_per_split,
                "min_leaf_size": self.params.min_leaf_size,
                "max_depth": self.params.max_depth,
            },
            "trees": [
                {
                    "feature": t.feature.tolist(),
                    "threshold": t.threshold.tolist(),
                    "left": t.left.tolist(),
                    "right": t.right.tolist(),
                    "count0": t.count0.tolist(),
                    "count1": t.count1.tolist(),
                }
                for t in self.trees
            ],
        }
        Path(path).write_text(json.dumps(doc, separators=(",", ":")) + "\n")

    @classmethod
    def load(cls, path) -> "LinkForest":
        try:
            doc = json.loads(Path(path).read_text())
        except json.JSONDecodeError as e:
            raise ShapeError(f"{path}: not a forest file ({e})") from None
        if doc.get("format") != FOREST_FORMAT:
            raise ShapeError(f"{path}: not a {FOREST_FORMAT} file")
        if doc.get("version") != FOREST_VERSION:
            raise ShapeError(f"{path}: unsupported forest version {doc.get('version')}")
        params = ForestParams(**doc["params"])
        trees = [
            _Tree(np.array(t["feature"], dtype=np.int32), np.array(t["threshold"]),
                  np.array(t["left"], dtype=np.int32), np.array(t["right"], dtype=np.int32),
                  np.array(t["count0"], dtype=np.int64), np.array(t["count1"], dtype=np.int64))
            for t in doc["trees"]
        ]
        return cls(trees, params, tuple(doc["seed"]), doc["n_features"],
                   doc["feature_names"])


def train_forest(examples: Sequence[TrainingExample] | None, params: ForestParams,
                 seed, *, X: np.ndarray | None = None, y: np.ndarray | None = None,
                 feature_names: Sequence[str] | None = None) -> LinkForest:
    """Fit a forest on TrainingExamples (or a prebuilt X, y matrix pair)."""
    params.validate()
    if examples is not None:
        lengths = {len(np.atleast_1d(ex.features)) for ex in examples}
        if len(lengths) > 1:
            raise ShapeError(f"ragged feature vectors: lengths {sorted(lengths)}")
        X = np.array([np.asarray(ex.features, dtype=np.float64).ravel() for ex in examples])
        y = np.array([ex.label for ex in examples], dtype=np.uint8)
    elif X is None or y is None:
        raise ParameterError("train_forest needs examples or an (X, y) pair")
    else:
        X = np.asarray(X, dtype=np.float64)
        y = np.asarray(y, dtype=np.uint8)

    if X.ndim != 2 or len(X) != len(y):
        raise ShapeError(f"bad training shapes X={X.shape}, y={y.shape}")
    if len(X) < 2:
        raise DegenerateTrainingError("need at least 2 training examples")
    if not np.isfinite(X).all():
        raise ShapeError("training features contain NaN or infinity")
    classes = np.unique(y)
    if len(classes) < 2:
        raise DegenerateTrainingError(f"training set contains a single class ({classes[0]})")

    # canonical order: by feature tuple, then label
    order = np.lexsort((y,) + tuple(X.T[::-1]))
    X, y = np.ascontiguousarray(X[order]), y[order]

    d = X.shape[1]
    mtry = params.features_per_split or int(np.ceil(np.sqrt(d)))
    mtry = min(mtry, d)
    key = seed_key(seed)
    trees = [_grow_tree(X, y, params, mtry, generator(key, t))
             for t in range(params.tree_count)]
    return LinkForest(trees, params, seed, d, feature_names)


def predict_proba(forest: LinkForest, x) -> float:
    """Functional alias for :meth:`LinkForest.predict_proba`."""
    return forest.predict_proba(x)
