"""Parity between the compiled kernels and the pure-numpy fallbacks."""

import numpy as np
import pytest

from loanscore import kernels


def _split_case(seed):
    rng = np.random.default_rng(seed)
    n = int(rng.integers(5, 120))
    m = int(rng.integers(1, 6))
    X = np.round(rng.normal(size=(n, m)), 2)
    g = rng.normal(size=n)
    h = rng.uniform(0.01, 1.0, size=n)
    return X, g, h


@pytest.mark.skipif(not kernels.USE_NUMBA, reason="numba path disabled")
def test_best_split_matches_numpy_fallback():
    for seed in range(30):
        X, g, h = _split_case(seed)
        fast = kernels.best_split(X, g, h, 1.0, 0.1, 0.2)
        slow = kernels._best_split_py(X, g, h, 1.0, 0.1, 0.2)
        assert fast[1] == slow[1]
        assert fast[0] == pytest.approx(slow[0], abs=1e-12)
        assert fast[2] == pytest.approx(slow[2], abs=0)


@pytest.mark.skipif(not kernels.USE_NUMBA, reason="numba path disabled")
def test_predict_forest_matches_numpy_fallback():
    from loanscore import gbdt
    rng = np.random.default_rng(1)
    X = rng.normal(size=(200, 5))
    y = (X[:, 0] > 0).astype(np.int64)
    params = gbdt.GbdtParams(n_estimators=8, max_depth=4, alpha=0.0,
                             min_child_weight=0.0).validate()
    model = gbdt.fit(X, y, params, seed=0)
    args = model.flat_arrays()
    fast = kernels.predict_forest(*args, X)
    slow = kernels._predict_forest_py(*args, X)
    np.testing.assert_allclose(fast, slow, atol=1e-12, rtol=0)


def test_env_flag_parsing(monkeypatch):
    import importlib
    monkeypatch.setenv("LOANSCORE_NUMBA", "0")
    reloaded = importlib.reload(kernels)
    try:
        assert reloaded.USE_NUMBA is False
        assert reloaded.best_split is reloaded._best_split_py
    finally:
        monkeypatch.undo()
        importlib.reload(kernels)
