"""Architecture grid, gradients, and training behavior of the score head."""

import numpy as np
import pytest

from loanscore import scorehead
from loanscore.scorehead import ScoreHeadConfig
from loanscore.util import NumericError, ValidationError


def test_grid_has_exactly_126_unique_configs():
    grid = scorehead.enumerate_grid()
    assert len(grid) == 126
    assert len(set(grid)) == 126


def test_grid_axis_counts():
    grid = scorehead.enumerate_grid()
    assert {c.first_dense for c in grid} == {128, 256, 512}
    assert {c.second_dense for c in grid} == {False, True}
    assert {c.learning_rate for c in grid} == {1e-3, 1e-4, 1e-5}
    # 7 dropout variants: zero plus 3 rates x 2 positions
    dropouts = {(c.dropout_rate, c.dropout_position) for c in grid}
    assert len(dropouts) == 7
    assert (0.0, None) in dropouts


def test_zero_dropout_position_canonicalized():
    a = ScoreHeadConfig(128, False, 0.0, "before", 1e-3)
    b = ScoreHeadConfig(128, False, 0.0, None, 1e-3)
    assert a == b


def test_balanced_class_weights():
    w0, w1 = scorehead.balanced_class_weights([0, 0, 0, 1])
    assert w0 == pytest.approx(4 / 6)
    assert w1 == pytest.approx(4 / 2)
    with pytest.raises(ValidationError):
        scorehead.balanced_class_weights([1, 1, 1])


def test_weighted_bce_hand_case():
    # single sample, y=1, p=0.5, w1=2 -> 2*ln 2
    loss = scorehead.weighted_bce([0.5], [1.0], (1.0, 2.0))
    assert loss == pytest.approx(2 * np.log(2))


def test_weighted_bce_clamps_probabilities():
    loss = scorehead.weighted_bce([0.0], [1.0], (1.0, 1.0))
    assert np.isfinite(loss)
    assert loss == pytest.approx(-np.log(1e-7))


@pytest.mark.parametrize("config", [
    ScoreHeadConfig(8, False, 0.0, None, 1e-3),
    ScoreHeadConfig(8, True, 0.0, None, 1e-3),
])
def test_gradients_match_finite_differences(config):
    rng = np.random.default_rng(0)
    n, dim = 12, 6
    X = rng.normal(size=(n, dim))
    y = rng.integers(0, 2, size=n).astype(np.float64)
    y[:2] = [0, 1]
    cw = scorehead.balanced_class_weights(y)
    sw = np.where(y == 1, cw[1], cw[0])
    weights = scorehead.init_weights(config, dim, rng)

    def loss_at(ws):
        p, _ = scorehead.forward(ws, config, X)
        return scorehead.weighted_bce(p, y, cw)

    p, cache = scorehead.forward(weights, config, X)
    grads = scorehead.backward(weights, config, cache, y, sw)
    eps = 1e-6
    for li, (W, b) in enumerate(weights):
        for arr_idx, arr in ((0, W), (1, b)):
            flat = arr.ravel()
            for pos in range(0, flat.size, max(flat.size // 10, 1)):
                orig = flat[pos]
                flat[pos] = orig + eps
                up = loss_at(weights)
                flat[pos] = orig - eps
                down = loss_at(weights)
                flat[pos] = orig
                fd = (up - down) / (2 * eps)
                an = grads[li][arr_idx].ravel()[pos]
                denom = max(abs(fd), abs(an), 1e-8)
                assert abs(fd - an) / denom < 1e-4, (li, arr_idx, pos)


def test_dropout_only_active_in_training():
    config = ScoreHeadConfig(16, False, 0.3, "before", 1e-3)
    rng = np.random.default_rng(1)
    X = rng.normal(size=(5, 4))
    weights = scorehead.init_weights(config, 4, rng)
    p1, _ = scorehead.forward(weights, config, X)
    p2, _ = scorehead.forward(weights, config, X)
    np.testing.assert_array_equal(p1, p2)  # inference is deterministic
    p3, _ = scorehead.forward(weights, config, X,
                              dropout_rng=np.random.default_rng(2))
    assert not np.array_equal(p1, p3)


def _toy_data(n=60, dim=8, seed=0):
    rng = np.random.default_rng(seed)
    ids = [f"r{i}" for i in range(n)]
    enc, labels = {}, {}
    for i, rid in enumerate(ids):
        y = i % 2
        enc[rid] = rng.normal(size=dim) + (0.8 if y else -0.8)
        labels[rid] = y
    return ids, enc, labels


def test_train_head_early_stops_and_records_best_epoch():
    ids, enc, labels = _toy_data()
    config = ScoreHeadConfig(16, False, 0.0, None, 1e-3)
    head = scorehead.train_head(enc, labels, config, (ids[:40], ids[40:]),
                                seed=3)
    assert 1 <= head.selected_epochs <= 25
    assert head.train_provenance == frozenset(ids[:40])


def test_train_head_rejects_overlapping_split():
    ids, enc, labels = _toy_data()
    config = ScoreHeadConfig(16, False, 0.0, None, 1e-3)
    with pytest.raises(ValidationError):
        scorehead.train_head(enc, labels, config, (ids[:40], ids[30:]), seed=0)
    with pytest.raises(ValidationError):
        scorehead.train_head(enc, labels, config, (ids, []), seed=0)


def test_select_architecture_refits_on_all_rows():
    ids, enc, labels = _toy_data()
    grid = [ScoreHeadConfig(8, False, 0.0, None, 1e-3),
            ScoreHeadConfig(16, False, 0.0, None, 1e-3)]
    config, head = scorehead.select_architecture(enc, labels, ids, seed=7,
                                                 grid=grid)
    assert config in grid
    assert head.train_provenance == frozenset(ids)
    s = scorehead.score(head, enc, ids)
    assert ((s > 0) & (s < 1)).all()


def test_select_architecture_deterministic():
    ids, enc, labels = _toy_data()
    grid = [ScoreHeadConfig(8, False, 0.0, None, 1e-3)]
    _, h1 = scorehead.select_architecture(enc, labels, ids, seed=7, grid=grid)
    _, h2 = scorehead.select_architecture(enc, labels, ids, seed=7, grid=grid)
    np.testing.assert_array_equal(scorehead.score(h1, enc, ids),
                                  scorehead.score(h2, enc, ids))


def test_head_json_round_trip():
    ids, enc, labels = _toy_data()
    config = ScoreHeadConfig(8, True, 0.2, "after", 1e-3)
    head = scorehead.train_head(enc, labels, config, (ids[:40], ids[40:]),
                                seed=1)
    clone = scorehead.head_from_json(scorehead.head_to_json(head))
    np.testing.assert_array_equal(scorehead.score(head, enc, ids),
                                  scorehead.score(clone, enc, ids))
    assert clone.config == config


def test_non_finite_loss_raises_numeric_error():
    ids, enc, labels = _toy_data()
    enc[ids[0]] = np.full(8, np.nan)
    config = ScoreHeadConfig(8, False, 0.0, None, 1e-3)
    with pytest.raises(NumericError):
        scorehead.train_head(enc, labels, config, (ids[:40], ids[40:]), seed=0)
