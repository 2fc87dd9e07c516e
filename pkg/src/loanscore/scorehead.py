"""Trainable classification head over frozen encodings.

Maps an encoding vector to a default probability through a small dense-ReLU
stack with a sigmoid output, trained under weighted binary cross-entropy.
Includes the 126-configuration architecture grid and its search.
"""

from __future__ import annotations

import json
from dataclasses import dataclass, field

import numpy as np

from .util import NumericError, ValidationError, rng_stream

FIRST_DENSE_OPTIONS = (128, 256, 512)
SECOND_DENSE_UNITS = 128
DROPOUT_RATES = (0.0, 0.10, 0.20, 0.30)
DROPOUT_POSITIONS = ("before", "after")
LEARNING_RATES = (0.001, 0.0001, 0.00001)

DEFAULT_EPOCHS = 25
DEFAULT_PATIENCE = 3
DEFAULT_BATCH = 64

PROB_EPS = 1e-7  # probability clamp inside the BCE


@dataclass(frozen=True)
class ScoreHeadConfig:
    first_dense: int
    second_dense: bool
    dropout_rate: float
    dropout_position: str | None
    learning_rate: float

    def __post_init__(self):
        # rate 0 with either position is the same canonical config
        if self.dropout_rate == 0.0 and self.dropout_position is not None:
            object.__setattr__(self, "dropout_position", None)


def enumerate_grid():
    """All unique head configurations (zero-dropout duplicates collapsed)."""
    dropout_options = [(0.0, None)] + [
        (r, p) for r in DROPOUT_RATES if r > 0 for p in DROPOUT_POSITIONS
    ]
    grid = [
        ScoreHeadConfig(fd, sd, rate, pos, lr)
        for fd in FIRST_DENSE_OPTIONS
        for sd in (False, True)
        for rate, pos in dropout_options
        for lr in LEARNING_RATES
    ]
    assert len(grid) == len(set(grid))
    return grid


@dataclass
class TrainedScoreHead:
    config: ScoreHeadConfig
    weights: list  # [(W, b), ...] in forward order
    selected_epochs: int
    train_provenance: frozenset
    seed: int = 0


def balanced_class_weights(labels):
    """w_c = N / (2 * N_c); penalizes minority-class errors more."""
    y = np.asarray(labels)
    n = len(y)
    n_pos = int(y.sum())
    n_neg = n - n_pos
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("training labels contain a single class",
                              code="DEGENERATE_CLASS")
    return n / (2.0 * n_neg), n / (2.0 * n_pos)


def weighted_bce(pred, label, class_weights):
    """Mean of -w_y [y ln p + (1-y) ln(1-p)] with probability clamping."""
    p = np.asarray(pred, dtype=np.float64)
    y = np.asarray(label, dtype=np.float64)
    if p.shape != y.shape:
        raise ValidationError("pred/label length mismatch", code="LENGTH_MISMATCH")
    w0, w1 = class_weights
    pc = np.clip(p, PROB_EPS, 1.0 - PROB_EPS)
    w = np.where(y == 1, w1, w0)
    return float(np.mean(-w * (y * np.log(pc) + (1 - y) * np.log(1 - pc))))


def _layer_dims(config, input_dim):
    dims = [input_dim, config.first_dense]
    if config.second_dense:
        dims.append(SECOND_DENSE_UNITS)
    dims.append(1)
    return dims


def init_weights(config, input_dim, rng):
    """He-style uniform init scaled by fan-in."""
    dims = _layer_dims(config, input_dim)
    weights = []
    for fan_in, fan_out in zip(dims, dims[1:]):
        bound = np.sqrt(6.0 / fan_in)
        W = rng.uniform(-bound, bound, size=(fan_in, fan_out))
        b = np.zeros(fan_out)
        weights.append((W, b))
    return weights


def _sigmoid(z):
    out = np.empty_like(z)
    pos = z >= 0
    out[pos] = 1.0 / (1.0 + np.exp(-z[pos]))
    ez = np.exp(z[~pos])
    out[~pos] = ez / (1.0 + ez)
    return out


def forward(weights, config, X, dropout_rng=None):
    """Forward pass; dropout active only when a training RNG is supplied.

    Returns (probabilities, cache) where cache holds what backward() needs.
    """
    keep = 1.0 - config.dropout_rate
    train = dropout_rng is not None and config.dropout_rate > 0
    mask_before = mask_after = None

    a = X
    if config.dropout_position == "before" and train:
        mask_before = (dropout_rng.random(a.shape) < keep) / keep
        a = a * mask_before

    acts = [a]
    zs = []
    for W, b in weights[:-1]:
        z = a @ W + b
        a = np.maximum(z, 0.0)
        zs.append(z)
        acts.append(a)

    if config.dropout_position == "after" and train:
        mask_after = (dropout_rng.random(a.shape) < keep) / keep
        a = a * mask_after

    Wo, bo = weights[-1]
    zo = (a @ Wo + bo).ravel()
    p = _sigmoid(zo)
    cache = (X, acts, zs, a, p, mask_before, mask_after)
    return p, cache


def backward(weights, config, cache, y, sample_weights):
    """Gradients of the mean weighted BCE w.r.t. every weight and bias."""
    X, acts, zs, a_out, p, mask_before, mask_after = cache
    n = len(y)
    delta = (sample_weights * (p - y) / n)[:, None]

    grads = [None] * len(weights)
    Wo, _ = weights[-1]
    grads[-1] = (a_out.T @ delta, delta.sum(axis=0))
    d = delta @ Wo.T
    if mask_after is not None:
        d = d * mask_after

    for li in range(len(weights) - 2, -1, -1):
        d = d * (zs[li] > 0)
        W, _ = weights[li]
        grads[li] = (acts[li].T @ d, d.sum(axis=0))
        d = d @ W.T
        if li == 0 and mask_before is not None:
            d = d * mask_before  # gradient w.r.t. raw input; unused
    return grads


class _Adam:
    def __init__(self, weights, lr, beta1=0.9, beta2=0.999, eps=1e-8):
        self.lr, self.b1, self.b2, self.eps = lr, beta1, beta2, eps
        self.t = 0
        self.m = [(np.zeros_like(W), np.zeros_like(b)) for W, b in weights]
        self.v = [(np.zeros_like(W), np.zeros_like(b)) for W, b in weights]

    def step(self, weights, grads):
        self.t += 1
        c1 = 1 - self.b1 ** self.t
        c2 = 1 - self.b2 ** self.t
        new = []
        for (W, b), (gW, gb), (mW, mb), (vW, vb) in zip(weights, grads, self.m, self.v):
            mW[:] = self.b1 * mW + (1 - self.b1) * gW
            mb[:] = self.b1 * mb + (1 - self.b1) * gb
            vW[:] = self.b2 * vW + (1 - self.b2) * gW ** 2
            vb[:] = self.b2 * vb + (1 - self.b2) * gb ** 2
            W = W - self.lr * (mW / c1) / (np.sqrt(vW / c2) + self.eps)
            b = b - self.lr * (mb / c1) / (np.sqrt(vb / c2) + self.eps)
            new.append((W, b))
        return new


def _gather(encodings, ids):
    try:
        return np.stack([np.asarray(encodings[i], dtype=np.float64) for i in ids])
    except KeyError as exc:
        raise ValidationError(f"unknown id {exc.args[0]!r}", code="UNKNOWN_ID")


def _check_loss(loss, config, epoch):
    if not np.isfinite(loss):
        raise NumericError(
            f"non-finite loss at epoch {epoch} for config {config}")


def train_head(encodings, labels, config, split, seed=0,
               epochs=DEFAULT_EPOCHS, patience=DEFAULT_PATIENCE,
               batch_size=DEFAULT_BATCH, class_weights=None):
    """Mini-batch Adam training with validation-based early stopping.

    Stops after `patience` consecutive epochs without validation
    improvement (or at `epochs`); returns the weights of the best
    validation epoch and records it as selected_epochs.
    """
    train_ids, val_ids = split
    train_ids, val_ids = list(train_ids), list(val_ids)
    if not train_ids or not val_ids:
        raise ValidationError("empty train or validation split", code="EMPTY_SPLIT")
    if set(train_ids) & set(val_ids):
        raise ValidationError("train/validation ids overlap", code="SPLIT_OVERLAP")

    Xtr = _gather(encodings, train_ids)
    ytr = np.array([labels[i] for i in train_ids], dtype=np.float64)
    Xva = _gather(encodings, val_ids)
    yva = np.array([labels[i] for i in val_ids], dtype=np.float64)
    if class_weights is None:
        class_weights = balanced_class_weights(ytr)
    w0, w1 = class_weights
    sw_tr = np.where(ytr == 1, w1, w0)

    rng = rng_stream(seed, "head-train")
    weights = init_weights(config, Xtr.shape[1], rng)
    opt = _Adam(weights, config.learning_rate)

    best_loss = np.inf
    best_weights = [(W.copy(), b.copy()) for W, b in weights]
    best_epoch = 0
    stall = 0
    n = len(train_ids)
    for epoch in range(1, epochs + 1):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            p, cache = forward(weights, config, Xtr[idx], dropout_rng=rng)
            grads = backward(weights, config, cache, ytr[idx], sw_tr[idx])
            weights = opt.step(weights, grads)
        p_val, _ = forward(weights, config, Xva)
        val_loss = weighted_bce(p_val, yva, class_weights)
        _check_loss(val_loss, config, epoch)
        if val_loss < best_loss:
            best_loss = val_loss
            best_weights = [(W.copy(), b.copy()) for W, b in weights]
            best_epoch = epoch
            stall = 0
        else:
            stall += 1
            if stall >= patience:
                break
    return TrainedScoreHead(config, best_weights, best_epoch,
                            frozenset(train_ids), seed)


def train_head_fixed(encodings, labels, ids, config, n_epochs, seed=0,
                     batch_size=DEFAULT_BATCH, class_weights=None):
    """Refit on all given rows for a fixed number of epochs (no holdout)."""
    ids = list(ids)
    X = _gather(encodings, ids)
    y = np.array([labels[i] for i in ids], dtype=np.float64)
    if class_weights is None:
        class_weights = balanced_class_weights(y)
    w0, w1 = class_weights
    sw = np.where(y == 1, w1, w0)

    rng = rng_stream(seed, "head-refit")
    weights = init_weights(config, X.shape[1], rng)
    opt = _Adam(weights, config.learning_rate)
    n = len(ids)
    for epoch in range(1, max(n_epochs, 1) + 1):
        order = rng.permutation(n)
        for start in range(0, n, batch_size):
            idx = order[start:start + batch_size]
            p, cache = forward(weights, config, X[idx], dropout_rng=rng)
            grads = backward(weights, config, cache, y[idx], sw[idx])
            weights = opt.step(weights, grads)
        p_all, _ = forward(weights, config, X)
        _check_loss(weighted_bce(p_all, y, class_weights), config, epoch)
    return TrainedScoreHead(config, weights, max(n_epochs, 1),
                            frozenset(ids), seed)


def _stratified_split(ids, labels, train_frac, rng):
    train_ids, val_ids = [], []
    by_class = {}
    for i in ids:
        by_class.setdefault(labels[i], []).append(i)
    for cls in sorted(by_class):
        members = list(by_class[cls])
        rng.shuffle(members)
        cut = int(round(train_frac * len(members)))
        cut = min(max(cut, 1), len(members) - 1) if len(members) >= 2 else len(members)
        train_ids.extend(members[:cut])
        val_ids.extend(members[cut:])
    return train_ids, val_ids


def select_architecture(encodings, labels, fold_train_ids, seed, grid=None):
    """Grid search on a stratified 70/30 split of the fold-train rows.

    Every config is trained on the 70% and scored by weighted BCE on the
    30%; the minimizer is then refit on all fold-train rows for its
    selected_epochs. Ties go to the earlier config in enumeration order.
    """
    if grid is None:
        grid = enumerate_grid()
    fold_train_ids = list(fold_train_ids)
    rng = rng_stream(seed, "arch-split")
    sub_train, sub_val = _stratified_split(fold_train_ids, labels, 0.7, rng)

    y_train = [labels[i] for i in fold_train_ids]
    class_weights = balanced_class_weights(y_train)

    best = None
    for ci, config in enumerate(grid):
        try:
            head = train_head(encodings, labels, config,
                              (sub_train, sub_val),
                              seed=rng_stream(seed, "grid", ci).integers(2**63),
                              class_weights=class_weights)
        except (ValidationError, NumericError) as exc:
            raise type(exc)(f"config {config}: {exc}")
        p_val, _ = forward(head.weights, config, _gather(encodings, sub_val))
        loss = weighted_bce(p_val, np.array([labels[i] for i in sub_val],
                                            dtype=np.float64), class_weights)
        if best is None or loss < best[0]:
            best = (loss, config, head)

    _, config, searched = best
    refit = train_head_fixed(encodings, labels, fold_train_ids, config,
                             searched.selected_epochs,
                             seed=rng_stream(seed, "refit-seed").integers(2**63),
                             class_weights=class_weights)
    return config, refit


def score(head, encodings, ids):
    """Deterministic forward pass (dropout off); probabilities in (0,1)."""
    X = _gather(encodings, list(ids))
    p, _ = forward(head.weights, head.config, X)
    return p


def head_to_json(head):
    doc = {
        "config": {
            "first_dense": head.config.first_dense,
            "second_dense": head.config.second_dense,
            "dropout_rate": head.config.dropout_rate,
            "dropout_position": head.config.dropout_position,
            "learning_rate": head.config.learning_rate,
        },
        "layers": [{"W": W.tolist(), "b": b.tolist()} for W, b in head.weights],
        "selected_epochs": head.selected_epochs,
        "provenance": sorted(head.train_provenance),
        "seed": head.seed,
    }
    return json.dumps(doc, sort_keys=True)


def head_from_json(text):
    doc = json.loads(text)
    config = ScoreHeadConfig(**doc["config"])
    weights = [(np.array(l["W"]), np.array(l["b"])) for l in doc["layers"]]
    return TrainedScoreHead(config, weights, doc["selected_epochs"],
                            frozenset(doc["provenance"]), doc["seed"])
