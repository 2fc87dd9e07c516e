"""Hot numeric kernels: exact greedy split scan and forest prediction.

Each kernel has a numba @njit build and a pure-numpy fallback. Set
``LOANSCORE_NUMBA=0`` in the environment to force the numpy path (the
default is the compiled path). ``benchmarks/bench_kernels.py`` compares
the two.
"""

from __future__ import annotations

import os

import numpy as np

USE_NUMBA = os.environ.get("LOANSCORE_NUMBA", "1").lower() not in ("0", "false", "off")

if USE_NUMBA:
    try:
        from numba import njit
    except ImportError:  # pragma: no cover
        USE_NUMBA = False


def _best_split_py(X, g, h, lam, gamma, mcw):
    """Best split over the candidate-feature block X (node rows only).

    Returns (gain, feature_position, threshold); feature_position -1 when
    no positive-gain split satisfies min_child_weight. Ties resolve to the
    lowest feature position, then the lowest threshold (strict > scan).
    """
    n, m = X.shape
    G = g.sum()
    H = h.sum()
    parent = G * G / (H + lam)
    best_gain = 0.0
    best_f = -1
    best_thr = 0.0
    for j in range(m):
        order = np.argsort(X[:, j])
        xs = X[order, j]
        gl = 0.0
        hl = 0.0
        for i in range(n - 1):
            gl += g[order[i]]
            hl += h[order[i]]
            if xs[i + 1] <= xs[i]:
                continue
            hr = H - hl
            if hl < mcw or hr < mcw:
                continue
            gr = G - gl
            gain = 0.5 * (gl * gl / (hl + lam) + gr * gr / (hr + lam) - parent) - gamma
            if gain > best_gain:
                best_gain = gain
                best_f = j
                best_thr = 0.5 * (xs[i] + xs[i + 1])
    return best_gain, best_f, best_thr


def _predict_forest_py(features, thresholds, lefts, rights, leaves, offsets, X):
    """Sum of raw leaf values over all trees, per row (numpy fallback)."""
    n = X.shape[0]
    out = np.zeros(n)
    rows = np.arange(n)
    for t in range(len(offsets) - 1):
        lo = offsets[t]
        idx = np.full(n, lo, dtype=np.int64)
        while True:
            internal = rights[idx] != -1
            if not internal.any():
                break
            f = features[idx]
            go_left = X[rows, f] < thresholds[idx]
            nxt = np.where(go_left, lefts[idx], rights[idx])
            idx = np.where(internal, nxt, idx)
        out += leaves[idx]
    return out


if USE_NUMBA:
    _best_split_nb = njit(cache=True)(_best_split_py)

    @njit(cache=True)
    def _predict_forest_nb(features, thresholds, lefts, rights, leaves, offsets, X):
        n = X.shape[0]
        out = np.zeros(n)
        for i in range(n):
            acc = 0.0
            for t in range(len(offsets) - 1):
                node = offsets[t]
                while rights[node] != -1:
                    if X[i, features[node]] < thresholds[node]:
                        node = lefts[node]
                    else:
                        node = rights[node]
                acc += leaves[node]
            out[i] = acc
        return out

    best_split = _best_split_nb
    predict_forest = _predict_forest_nb
else:
    best_split = _best_split_py
    predict_forest = _predict_forest_py
