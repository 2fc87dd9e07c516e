"""TreeSHAP correctness: local accuracy plus exhaustive-subset Shapley."""

import itertools
import math

import numpy as np

from loanscore import gbdt
from loanscore.gbdt import GbdtParams


def make_params(**over):
    base = dict(scale_pos_weight=1.0, eta=0.3, subsample=1.0, n_estimators=5,
                colsample_bytree=1.0, max_depth=3, lambda_=1.0, alpha=0.5,
                gamma=0.0, min_child_weight=0.0)
    base.update(over)
    return GbdtParams(**base).validate()


def tree_conditional_value(tree, x, known):
    """Expected tree output conditioning on the features in `known`.

    Follows the split when the feature is known; otherwise takes the
    cover-weighted average over both children.
    """
    def rec(node):
        if tree.right[node] == -1:
            return tree.value[node]
        f = tree.feature[node]
        if f in known:
            nxt = tree.left[node] if x[f] < tree.threshold[node] else tree.right[node]
            return rec(nxt)
        li, ri = tree.left[node], tree.right[node]
        wl, wr = tree.cover[li], tree.cover[ri]
        return (wl * rec(li) + wr * rec(ri)) / (wl + wr)

    return rec(0)


def brute_force_shap(model, x):
    """Exhaustive Shapley values over all feature subsets."""
    n_feat = len(model.feature_names)
    feats = list(range(n_feat))
    phi = np.zeros(n_feat)
    eta = model.params.eta
    for tree in model.trees:
        for j in feats:
            rest = [f for f in feats if f != j]
            for r in range(len(rest) + 1):
                for subset in itertools.combinations(rest, r):
                    weight = (math.factorial(r)
                              * math.factorial(n_feat - r - 1)
                              / math.factorial(n_feat))
                    with_j = tree_conditional_value(tree, x, set(subset) | {j})
                    without = tree_conditional_value(tree, x, set(subset))
                    phi[j] += eta * weight * (with_j - without)
    base = model.base_margin + eta * sum(
        tree_conditional_value(t, x, set()) for t in model.trees)
    return phi, base


def _random_model(rng, n, m, **over):
    X = rng.normal(size=(n, m))
    y = (X[:, 0] + 0.7 * rng.normal(size=n) > 0).astype(np.int64)
    if y.sum() in (0, n):
        y[0] = 1 - y[0]
    model = gbdt.fit(X, y, make_params(**over), seed=int(rng.integers(1000)))
    return model, X


def test_local_accuracy_thousand_rows():
    rng = np.random.default_rng(0)
    model, X = _random_model(rng, 1000, 8, n_estimators=20, max_depth=4)
    margins = gbdt.predict_margin(model, X)
    for i in range(1000):
        sv = gbdt.tree_shap(model, X[i])
        total = sv.base + sv.contributions.sum()
        assert abs(total - margins[i]) < 1e-6, f"row {i}"


def test_matches_exhaustive_shapley_small_forests():
    rng = np.random.default_rng(5)
    for trial in range(8):
        m = int(rng.integers(2, 5))  # at most 4 features
        model, X = _random_model(rng, 80, m, n_estimators=4, max_depth=3)
        for i in range(5):
            x = X[int(rng.integers(len(X)))]
            sv = gbdt.tree_shap(model, x)
            phi, base = brute_force_shap(model, x)
            np.testing.assert_allclose(sv.contributions, phi, atol=1e-6, rtol=0)
            assert abs(sv.base - base) < 1e-6


def test_unused_feature_gets_zero_attribution():
    rng = np.random.default_rng(9)
    X = rng.normal(size=(100, 3))
    X[:, 2] = 0.0  # constant, never split on
    y = (X[:, 0] > 0).astype(np.int64)
    model = gbdt.fit(X, y, make_params(), seed=1)
    sv = gbdt.tree_shap(model, X[0])
    assert sv.contributions[2] == 0.0


def test_shap_total_helper():
    rng = np.random.default_rng(10)
    model, X = _random_model(rng, 50, 3)
    sv = gbdt.tree_shap(model, X[0])
    assert sv.total() == sv.base + sv.contributions.sum()
