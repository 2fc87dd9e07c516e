"""Newton-boosted decision trees for binary classification, from scratch.

Logistic-loss second-order boosting with the ten tunable hyperparameters
(class weighting, shrinkage, row/column subsampling, tree count, depth,
L2/L1 regularization, split gain threshold, minimum child hessian), plus
exact path-dependent TreeSHAP and gain-based feature importance.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field, fields

import numpy as np

from . import kernels
from .data import FeatureTable
from .util import ValidationError, rng_stream

MODEL_FORMAT_VERSION = "gbdt-1"

PARAM_RANGES = {
    "scale_pos_weight": (0.1, 10.0),
    "eta": (0.001, 0.5),
    "subsample": (0.7, 1.0),
    "n_estimators": (2, 500),
    "colsample_bytree": (0.3, 1.0),
    "max_depth": (2, 12),
    "lambda_": (0.5, 10.0),
    "alpha": (0.5, 10.0),
    "gamma": (0.0, 10.0),
    "min_child_weight": (0.0, 10.0),
}
INTEGER_PARAMS = ("n_estimators", "max_depth")


@dataclass(frozen=True)
class GbdtParams:
    scale_pos_weight: float = 1.0
    eta: float = 0.1
    subsample: float = 1.0
    n_estimators: int = 100
    colsample_bytree: float = 1.0
    max_depth: int = 6
    lambda_: float = 1.0
    alpha: float = 0.5
    gamma: float = 0.0
    min_child_weight: float = 1.0

    def validate(self):
        """Structural sanity; the search-range check is validate_in_range."""
        if not 0.0 < self.eta <= 1.0:
            raise ValidationError(f"eta={self.eta} outside (0, 1]",
                                  code="PARAM_RANGE")
        if not 0.0 < self.subsample <= 1.0:
            raise ValidationError(f"subsample={self.subsample} outside (0, 1]",
                                  code="PARAM_RANGE")
        if not 0.0 < self.colsample_bytree <= 1.0:
            raise ValidationError(
                f"colsample_bytree={self.colsample_bytree} outside (0, 1]",
                code="PARAM_RANGE")
        if self.scale_pos_weight <= 0:
            raise ValidationError("scale_pos_weight must be positive",
                                  code="PARAM_RANGE")
        for name in ("lambda_", "alpha", "gamma", "min_child_weight"):
            if getattr(self, name) < 0:
                raise ValidationError(f"{name} must be non-negative",
                                      code="PARAM_RANGE")
        for name, minimum in (("n_estimators", 1), ("max_depth", 1)):
            v = getattr(self, name)
            if int(v) != v or v < minimum:
                raise ValidationError(f"{name}={v} must be an integer >= {minimum}",
                                      code="PARAM_RANGE")
        return self

    def validate_in_range(self):
        """Enforce the hyperparameter-search bounds on every field."""
        self.validate()
        for name, (lo, hi) in PARAM_RANGES.items():
            v = getattr(self, name)
            if not (lo <= v <= hi):
                raise ValidationError(
                    f"{name}={v} outside [{lo}, {hi}]", code="PARAM_RANGE")
        return self


@dataclass
class Tree:
    """Node-parallel arrays; right == -1 marks a leaf.

    ``value`` holds the raw Newton leaf weight at leaves and the
    cover-weighted expected subtree value at internal nodes (used by
    TreeSHAP). Shrinkage is applied at prediction time.
    """
    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    value: np.ndarray
    cover: np.ndarray
    gain: np.ndarray

    def depth(self, node=0):
        if self.right[node] == -1:
            return 0
        return 1 + max(self.depth(self.left[node]), self.depth(self.right[node]))


@dataclass
class GbdtModel:
    trees: list
    params: GbdtParams
    feature_names: list
    base_margin: float = 0.0
    _flat: tuple = field(default=None, repr=False, compare=False)

    def flat_arrays(self):
        if self._flat is None:
            feats, thrs, lefts, rights, leaves = [], [], [], [], []
            offsets = [0]
            for tree in self.trees:
                off = offsets[-1]
                feats.append(tree.feature)
                thrs.append(tree.threshold)
                lefts.append(np.where(tree.left >= 0, tree.left + off, -1))
                rights.append(np.where(tree.right >= 0, tree.right + off, -1))
                leaves.append(tree.value)
                offsets.append(off + len(tree.feature))
            if self.trees:
                self._flat = (np.concatenate(feats), np.concatenate(thrs),
                              np.concatenate(lefts), np.concatenate(rights),
                              np.concatenate(leaves),
                              np.array(offsets, dtype=np.int64))
            else:
                self._flat = (np.zeros(0, dtype=np.int64), np.zeros(0),
                              np.zeros(0, dtype=np.int64),
                              np.zeros(0, dtype=np.int64), np.zeros(0),
                              np.zeros(1, dtype=np.int64))
        return self._flat


def _sigmoid(z):
    out = np.empty_like(z, dtype=np.float64)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def _leaf_weight(G, H, lam, alpha):
    # L1 soft-thresholding on the gradient sum
    mag = max(abs(G) - alpha, 0.0)
    if mag == 0.0:
        return 0.0
    return -np.sign(G) * mag / (H + lam)


class _TreeBuilder:
    def __init__(self, X, g, h, cols, params):
        self.X = X
        self.g = g
        self.h = h
        self.cols = cols
        self.p = params
        self.feature = []
        self.threshold = []
        self.left = []
        self.right = []
        self.value = []
        self.cover = []
        self.gain = []

    def _alloc(self):
        for arr in (self.feature, self.threshold, self.left, self.right,
                    self.value, self.cover, self.gain):
            arr.append(0)
        return len(self.feature) - 1

    def build(self, rows, depth):
        node = self._alloc()
        g_node = self.g[rows]
        h_node = self.h[rows]
        G, H = g_node.sum(), h_node.sum()
        self.cover[node] = float(len(rows))
        self.feature[node] = 0
        self.threshold[node] = 0.0
        self.gain[node] = 0.0

        if depth < self.p.max_depth and len(rows) >= 2:
            sub = np.ascontiguousarray(self.X[np.ix_(rows, self.cols)])
            gain, fpos, thr = kernels.best_split(
                sub, g_node, h_node, self.p.lambda_, self.p.gamma,
                self.p.min_child_weight)
            if fpos >= 0:
                feat = int(self.cols[fpos])
                mask = self.X[rows, feat] < thr
                self.feature[node] = feat
                self.threshold[node] = float(thr)
                self.gain[node] = float(gain)
                self.left[node] = self.build(rows[mask], depth + 1)
                self.right[node] = self.build(rows[~mask], depth + 1)
                return node

        self.left[node] = -1
        self.right[node] = -1
        self.value[node] = _leaf_weight(G, H, self.p.lambda_, self.p.alpha)
        return node

    def finish(self):
        tree = Tree(
            feature=np.array(self.feature, dtype=np.int64),
            threshold=np.array(self.threshold, dtype=np.float64),
            left=np.array(self.left, dtype=np.int64),
            right=np.array(self.right, dtype=np.int64),
            value=np.array(self.value, dtype=np.float64),
            cover=np.array(self.cover, dtype=np.float64),
            gain=np.array(self.gain, dtype=np.float64),
        )
        _fill_expectations(tree, 0)
        return tree


def _fill_expectations(tree, node):
    """Cover-weighted subtree expectations at internal nodes (for SHAP)."""
    if tree.right[node] == -1:
        return tree.value[node]
    li, ri = tree.left[node], tree.right[node]
    vl = _fill_expectations(tree, li)
    vr = _fill_expectations(tree, ri)
    wl, wr = tree.cover[li], tree.cover[ri]
    tree.value[node] = (wl * vl + wr * vr) / (wl + wr)
    return tree.value[node]


def _as_xy(table, labels):
    if isinstance(table, FeatureTable):
        X = table.X
        y = table.labels if labels is None else np.asarray(labels)
        names = list(table.columns)
    else:
        X = np.asarray(table, dtype=np.float64)
        y = np.asarray(labels)
        names = [f"f{j}" for j in range(X.shape[1])]
    return X, y.astype(np.int64), names


def fit(table, labels=None, params=GbdtParams(), seed=0, feature_names=None):
    """Train the Newton-boosted forest.

    Per round: weighted gradients/hessians from the current margin, row and
    feature subsampling, one exact-greedy tree, margin update shrunk by eta.
    """
    X, y, names = _as_xy(table, labels)
    if feature_names is not None:
        names = list(feature_names)
    params.validate()
    if np.isnan(X).any():
        raise ValidationError("NaN in features", code="NON_FINITE")
    if y.min() == y.max():
        raise ValidationError("labels contain a single class",
                              code="DEGENERATE_CLASS")

    n, m = X.shape
    w = np.where(y == 1, params.scale_pos_weight, 1.0)
    margin = np.zeros(n)
    rng = rng_stream(seed, "boost")
    trees = []
    for _ in range(params.n_estimators):
        p = _sigmoid(margin)
        g = w * (p - y)
        h = w * p * (1 - p)

        if params.subsample < 1.0:
            n_rows = max(int(params.subsample * n), 1)
            rows = np.sort(rng.choice(n, size=n_rows, replace=False))
        else:
            rows = np.arange(n)
        if params.colsample_bytree < 1.0:
            n_cols = max(int(round(params.colsample_bytree * m)), 1)
            cols = np.sort(rng.choice(m, size=n_cols, replace=False))
        else:
            cols = np.arange(m)

        builder = _TreeBuilder(X, g, h, cols, params)
        builder.build(rows, 0)
        tree = builder.finish()
        trees.append(tree)

        feats, thrs, lefts, rights, leaves = (tree.feature, tree.threshold,
                                              tree.left, tree.right, tree.value)
        offsets = np.array([0, len(feats)], dtype=np.int64)
        margin += params.eta * kernels.predict_forest(
            feats, thrs, lefts, rights, leaves, offsets, X)
    return GbdtModel(trees=trees, params=params, feature_names=names)


def predict_margin(model, X):
    X = np.atleast_2d(np.asarray(X, dtype=np.float64))
    if X.shape[1] != len(model.feature_names):
        raise ValidationError(
            f"row width {X.shape[1]} != model width {len(model.feature_names)}",
            code="WIDTH_MISMATCH")
    if not model.trees:
        return np.full(X.shape[0], model.base_margin)
    feats, thrs, lefts, rights, leaves, offsets = model.flat_arrays()
    return model.base_margin + model.params.eta * kernels.predict_forest(
        feats, thrs, lefts, rights, leaves, offsets, X)


def predict_proba(model, X):
    return _sigmoid(predict_margin(model, X))


@dataclass
class ShapVector:
    contributions: np.ndarray  # per feature, margin units
    base: float

    def total(self):
        return self.base + float(self.contributions.sum())


def tree_shap(model, row):
    """Exact path-dependent TreeSHAP in margin (log-odds) units.

    base + sum(contributions) equals predict_margin for the row.
    """
    x = np.asarray(row, dtype=np.float64).ravel()
    m = len(model.feature_names)
    if x.shape[0] != m:
        raise ValidationError(
            f"row width {x.shape[0]} != model width {m}", code="WIDTH_MISMATCH")
    phi = np.zeros(m)
    base = model.base_margin
    for tree in model.trees:
        tphi = np.zeros(m)
        _shap_recurse(tree, x, tphi, 0, _Path(), 1.0, 1.0, -1)
        phi += model.params.eta * tphi
        base += model.params.eta * tree.value[0]
    return ShapVector(contributions=phi, base=float(base))


class _Path:
    """Unique-feature decision path with subset-permutation weights."""

    __slots__ = ("d", "z", "o", "w")

    def __init__(self):
        self.d = []  # feature index per path element (-1 at the root)
        self.z = []  # fraction of zero (cover-weighted) paths
        self.o = []  # fraction of one paths (x follows the split)
        self.w = []  # permutation weights

    def copy(self):
        p = _Path()
        p.d = self.d[:]
        p.z = self.z[:]
        p.o = self.o[:]
        p.w = self.w[:]
        return p

    def extend(self, pz, po, pi):
        l = len(self.d)
        self.d.append(pi)
        self.z.append(pz)
        self.o.append(po)
        self.w.append(1.0 if l == 0 else 0.0)
        for i in range(l - 1, -1, -1):
            self.w[i + 1] += po * self.w[i] * (i + 1) / (l + 1)
            self.w[i] = pz * self.w[i] * (l - i) / (l + 1)

    def unwind(self, i):
        l = len(self.d) - 1
        one = self.o[i]
        zero = self.z[i]
        n = self.w[l]
        for j in range(l - 1, -1, -1):
            if one != 0:
                t = self.w[j]
                self.w[j] = n * (l + 1) / ((j + 1) * one)
                n = t - self.w[j] * zero * (l - j) / (l + 1)
            else:
                self.w[j] = self.w[j] * (l + 1) / (zero * (l - j))
        # d/z/o lose element i; the weights lose their last element
        del self.d[i], self.z[i], self.o[i]
        self.w.pop()

    def unwound_sum(self, i):
        l = len(self.d) - 1
        one = self.o[i]
        zero = self.z[i]
        n = self.w[l]
        total = 0.0
        for j in range(l - 1, -1, -1):
            if one != 0:
                t = n * (l + 1) / ((j + 1) * one)
                total += t
                n = self.w[j] - t * zero * (l - j) / (l + 1)
            else:
                total += (self.w[j] / zero) / ((l - j) / (l + 1))
        return total


def _shap_recurse(tree, x, phi, node, path, pz, po, pi):
    path = path.copy()
    path.extend(pz, po, pi)

    if tree.right[node] == -1:
        for i in range(1, len(path.d)):
            w = path.unwound_sum(i)
            phi[path.d[i]] += w * (path.o[i] - path.z[i]) * tree.value[node]
        return

    feat = int(tree.feature[node])
    li, ri = int(tree.left[node]), int(tree.right[node])
    hot, cold = (li, ri) if x[feat] < tree.threshold[node] else (ri, li)
    w = tree.cover[node]
    hot_z = tree.cover[hot] / w
    cold_z = tree.cover[cold] / w

    iz = io = 1.0
    for k in range(1, len(path.d)):
        if path.d[k] == feat:
            iz, io = path.z[k], path.o[k]
            path.unwind(k)
            break

    _shap_recurse(tree, x, phi, hot, path, iz * hot_z, io, feat)
    _shap_recurse(tree, x, phi, cold, path, iz * cold_z, 0.0, feat)


def feature_importance(model):
    """Total split gain per feature, normalized to sum to 1."""
    gains = {}
    for tree in model.trees:
        for node in range(len(tree.feature)):
            if tree.right[node] != -1:
                name = model.feature_names[tree.feature[node]]
                gains[name] = gains.get(name, 0.0) + float(tree.gain[node])
    total = sum(gains.values())
    if total <= 0:
        return {}
    return {name: g / total for name, g in sorted(gains.items())}


def model_to_json(model):
    doc = {
        "format": MODEL_FORMAT_VERSION,
        "params": {f.name: getattr(model.params, f.name)
                   for f in fields(GbdtParams)},
        "base_margin": model.base_margin,
        "feature_names": model.feature_names,
        "trees": [{
            "feature": t.feature.tolist(),
            "threshold": t.threshold.tolist(),
            "left": t.left.tolist(),
            "right": t.right.tolist(),
            "value": t.value.tolist(),
            "cover": t.cover.tolist(),
            "gain": t.gain.tolist(),
        } for t in model.trees],
    }
    return json.dumps(doc, sort_keys=True)


def model_from_json(text):
    doc = json.loads(text)
    if doc.get("format") != MODEL_FORMAT_VERSION:
        raise ValidationError("unsupported model format", code="BAD_FORMAT")
    trees = [Tree(
        feature=np.array(t["feature"], dtype=np.int64),
        threshold=np.array(t["threshold"], dtype=np.float64),
        left=np.array(t["left"], dtype=np.int64),
        right=np.array(t["right"], dtype=np.int64),
        value=np.array(t["value"], dtype=np.float64),
        cover=np.array(t["cover"], dtype=np.float64),
        gain=np.array(t["gain"], dtype=np.float64),
    ) for t in doc["trees"]]
    return GbdtModel(trees=trees, params=GbdtParams(**doc["params"]),
                     feature_names=doc["feature_names"],
                     base_margin=doc["base_margin"])
