"""Metrics and statistical tests for the evaluation battery.

Normal and chi-square tail probabilities are computed with documented
approximations (Abramowitz-Stegun 7.1.26 rational erf, max abs error
< 1.5e-7; incomplete gamma by series / Lentz continued fraction), pinned
against reference values in the test suite.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np
from scipy.optimize import linprog

from .util import NumericError, ValidationError, rng_stream

# --- special functions -------------------------------------------------

_ERF_P = 0.3275911
_ERF_A = (0.254829592, -0.284496736, 1.421413741, -1.453152027, 1.061405429)


def erf_approx(x):
    sign = 1.0 if x >= 0 else -1.0
    ax = abs(x)
    t = 1.0 / (1.0 + _ERF_P * ax)
    poly = t * (_ERF_A[0] + t * (_ERF_A[1] + t * (_ERF_A[2] + t * (_ERF_A[3] + t * _ERF_A[4]))))
    return sign * (1.0 - poly * math.exp(-ax * ax))


def normal_cdf(x):
    return 0.5 * (1.0 + erf_approx(x / math.sqrt(2.0)))


def _gammp_series(a, x, itmax=500, eps=1e-14):
    ap = a
    total = term = 1.0 / a
    for _ in range(itmax):
        ap += 1.0
        term *= x / ap
        total += term
        if abs(term) < abs(total) * eps:
            break
    return total * math.exp(-x + a * math.log(x) - math.lgamma(a))


def _gammq_cf(a, x, itmax=500, eps=1e-14):
    tiny = 1e-300
    b = x + 1.0 - a
    c = 1.0 / tiny
    d = 1.0 / b
    h = d
    for i in range(1, itmax + 1):
        an = -i * (i - a)
        b += 2.0
        d = an * d + b
        if abs(d) < tiny:
            d = tiny
        c = b + an / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h * math.exp(-x + a * math.log(x) - math.lgamma(a))


def gammainc_upper(a, x):
    """Regularized upper incomplete gamma Q(a, x)."""
    if x < 0 or a <= 0:
        raise NumericError("invalid incomplete gamma arguments")
    if x == 0:
        return 1.0
    if x < a + 1.0:
        return 1.0 - _gammp_series(a, x)
    return _gammq_cf(a, x)


def chi2_sf(x, df):
    return gammainc_upper(df / 2.0, x / 2.0)


def _betacf(a, b, x, itmax=500, eps=1e-14):
    tiny = 1e-300
    qab, qap, qam = a + b, a + 1.0, a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < tiny:
        d = tiny
    d = 1.0 / d
    h = d
    for m in range(1, itmax + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < tiny:
            d = tiny
        c = 1.0 + aa / c
        if abs(c) < tiny:
            c = tiny
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < eps:
            break
    return h


def betainc_reg(a, b, x):
    """Regularized incomplete beta I_x(a, b)."""
    if x <= 0:
        return 0.0
    if x >= 1:
        return 1.0
    ln_front = (math.lgamma(a + b) - math.lgamma(a) - math.lgamma(b)
                + a * math.log(x) + b * math.log(1.0 - x))
    front = math.exp(ln_front)
    if x < (a + 1.0) / (a + b + 2.0):
        return front * _betacf(a, b, x) / a
    return 1.0 - front * _betacf(b, a, 1.0 - x) / b


def t_sf_two_sided(t, df):
    """Two-sided p-value for a t statistic."""
    return betainc_reg(df / 2.0, 0.5, df / (df + t * t))


# --- classification metrics --------------------------------------------


def midranks(x):
    x = np.asarray(x, dtype=np.float64)
    order = np.argsort(x, kind="mergesort")
    ranks = np.empty(len(x))
    i = 0
    xs = x[order]
    while i < len(x):
        j = i
        while j < len(x) and xs[j] == xs[i]:
            j += 1
        ranks[order[i:j]] = 0.5 * (i + j - 1) + 1.0
        i = j
    return ranks


def auc_rank(labels, scores):
    """AUC via the rank statistic with mid-rank tie handling."""
    y = np.asarray(labels)
    s = np.asarray(scores, dtype=np.float64)
    n_pos = int((y == 1).sum())
    n_neg = int((y == 0).sum())
    if n_pos == 0 or n_neg == 0:
        raise ValidationError("AUC undefined for single-class labels",
                              code="SINGLE_CLASS")
    r = midranks(s)
    return (r[y == 1].sum() - n_pos * (n_pos + 1) / 2.0) / (n_pos * n_neg)


@dataclass
class MetricSet:
    bacc: float
    auc: float
    f1: float
    precision: float
    recall: float
    accuracy: float

    def as_dict(self):
        return {"bacc": self.bacc, "auc": self.auc, "f1": self.f1,
                "precision": self.precision, "recall": self.recall,
                "accuracy": self.accuracy}


def confusion(labels, scores, threshold):
    y = np.asarray(labels)
    pred = (np.asarray(scores, dtype=np.float64) >= threshold).astype(int)
    tp = int(((pred == 1) & (y == 1)).sum())
    fp = int(((pred == 1) & (y == 0)).sum())
    fn = int(((pred == 0) & (y == 1)).sum())
    tn = int(((pred == 0) & (y == 0)).sum())
    return tp, fp, fn, tn


def balanced_accuracy(labels, scores, threshold=0.5):
    tp, fp, fn, tn = confusion(labels, scores, threshold)
    rec_pos = tp / (tp + fn) if tp + fn else 0.0
    rec_neg = tn / (tn + fp) if tn + fp else 0.0
    return 0.5 * (rec_pos + rec_neg)


def metrics(labels, scores, threshold=0.5):
    """Full metric set at the threshold (score >= threshold -> default)."""
    tp, fp, fn, tn = confusion(labels, scores, threshold)
    n = tp + fp + fn + tn
    rec_pos = tp / (tp + fn) if tp + fn else 0.0
    rec_neg = tn / (tn + fp) if tn + fp else 0.0
    precision = tp / (tp + fp) if tp + fp else 0.0
    f1 = (2 * precision * rec_pos / (precision + rec_pos)
          if precision + rec_pos else 0.0)
    return MetricSet(
        bacc=0.5 * (rec_pos + rec_neg),
        auc=auc_rank(labels, scores),
        f1=f1,
        precision=precision,
        recall=rec_pos,
        accuracy=(tp + tn) / n,
    )


# --- DeLong paired AUC comparison --------------------------------------


def _delong_components(labels, scores):
    y = np.asarray(labels)
    s = np.asarray(scores, dtype=np.float64)
    pos = s[y == 1]
    neg = s[y == 0]
    m, n = len(pos), len(neg)
    all_r = midranks(np.concatenate([pos, neg]))
    pos_r = midranks(pos)
    neg_r = midranks(neg)
    v10 = (all_r[:m] - pos_r) / n  # structural components per positive
    v01 = 1.0 - (all_r[m:] - neg_r) / m  # per negative
    auc = v10.mean()
    return auc, v10, v01


def delong_test(labels, scores_a, scores_b):
    """Paired DeLong test; returns (auc_a, auc_b, z, two-sided p)."""
    auc_a, v10_a, v01_a = _delong_components(labels, scores_a)
    auc_b, v10_b, v01_b = _delong_components(labels, scores_b)
    m, n = len(v10_a), len(v01_a)

    s10 = np.cov(np.stack([v10_a, v10_b]), ddof=1)
    s01 = np.cov(np.stack([v01_a, v01_b]), ddof=1)
    cov = s10 / m + s01 / n
    var_diff = cov[0, 0] + cov[1, 1] - 2 * cov[0, 1]
    if var_diff <= 0:
        if auc_a == auc_b:
            return auc_a, auc_b, 0.0, 1.0
        raise NumericError("zero variance of AUC difference with unequal AUCs")
    z = (auc_a - auc_b) / math.sqrt(var_diff)
    p = 2.0 * (1.0 - normal_cdf(abs(z)))
    return float(auc_a), float(auc_b), float(z), float(min(max(p, 0.0), 1.0))


# --- distribution tests -------------------------------------------------


def _kolmogorov_sf(lam):
    if lam <= 0:
        return 1.0
    total = 0.0
    for k in range(1, 101):
        total += (-1.0) ** (k - 1) * math.exp(-2.0 * k * k * lam * lam)
    return min(max(2.0 * total, 0.0), 1.0)


def ks_two_sample(sample_a, sample_b):
    """Two-sample KS: D = max |ECDF_a - ECDF_b|, asymptotic p-value."""
    a = np.sort(np.asarray(sample_a, dtype=np.float64))
    b = np.sort(np.asarray(sample_b, dtype=np.float64))
    if len(a) == 0 or len(b) == 0:
        raise ValidationError("empty sample", code="EMPTY_SAMPLE")
    grid = np.concatenate([a, b])
    cdf_a = np.searchsorted(a, grid, side="right") / len(a)
    cdf_b = np.searchsorted(b, grid, side="right") / len(b)
    d = float(np.max(np.abs(cdf_a - cdf_b)))
    ne = len(a) * len(b) / (len(a) + len(b))
    lam = (math.sqrt(ne) + 0.12 + 0.11 / math.sqrt(ne)) * d
    return d, _kolmogorov_sf(lam)


def chi2_independence(contingency):
    """Pearson chi-square test of independence on an r x c table."""
    obs = np.asarray(contingency, dtype=np.float64)
    row = obs.sum(axis=1, keepdims=True)
    col = obs.sum(axis=0, keepdims=True)
    total = obs.sum()
    expected = row @ col / total
    if (expected <= 0).any():
        raise ValidationError("zero expected cell count", code="ZERO_EXPECTED")
    stat = float(((obs - expected) ** 2 / expected).sum())
    df = (obs.shape[0] - 1) * (obs.shape[1] - 1)
    return stat, df, chi2_sf(stat, df)


def kruskal_wallis(groups):
    """Rank-based H with tie correction; p from chi-square with k-1 df."""
    groups = [np.asarray(g, dtype=np.float64) for g in groups]
    if len(groups) < 2:
        raise ValidationError("need at least 2 groups", code="TOO_FEW_GROUPS")
    for g in groups:
        if len(g) == 0:
            raise ValidationError("empty group", code="EMPTY_SAMPLE")
    pooled = np.concatenate(groups)
    n = len(pooled)
    ranks = midranks(pooled)
    h = 0.0
    start = 0
    for g in groups:
        r = ranks[start:start + len(g)]
        h += len(g) * (r.mean() - (n + 1) / 2.0) ** 2
        start += len(g)
    h *= 12.0 / (n * (n + 1))
    # tie correction
    _, counts = np.unique(pooled, return_counts=True)
    tie_sum = float(((counts ** 3) - counts).sum())
    denom = 1.0 - tie_sum / (n ** 3 - n)
    if denom == 0.0:
        return 0.0, 1.0  # all observations equal
    h /= denom
    df = len(groups) - 1
    return float(h), chi2_sf(h, df)


def correlations(x, y):
    """Pearson and Spearman coefficients with t-approximation p-values."""
    x = np.asarray(x, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    if len(x) != len(y) or len(x) < 3:
        raise ValidationError("need equal-length samples of size >= 3",
                              code="BAD_SAMPLE")

    def _pearson(u, v):
        u = u - u.mean()
        v = v - v.mean()
        su, sv = math.sqrt((u * u).sum()), math.sqrt((v * v).sum())
        if su == 0 or sv == 0:
            raise ValidationError("zero variance input", code="ZERO_VARIANCE")
        return float((u * v).sum() / (su * sv))

    def _pval(r, n):
        r = min(max(r, -1.0), 1.0)
        if abs(r) == 1.0:
            return 0.0
        t = r * math.sqrt((n - 2) / (1.0 - r * r))
        return t_sf_two_sided(t, n - 2)

    n = len(x)
    pearson = _pearson(x, y)
    spearman = _pearson(midranks(x), midranks(y))
    return pearson, spearman, _pval(pearson, n), _pval(spearman, n)


# --- quantile regression ------------------------------------------------

QUANTREG_TAUS = (0.05, 0.10, 0.50, 0.90, 0.95)
QUANTREG_COEF_NAMES = ("intercept", "default", "educational", "moving",
                       "default_x_educational", "default_x_moving")


def pinball_loss(y, X, beta, tau):
    u = np.asarray(y) - np.asarray(X) @ np.asarray(beta)
    return float(np.sum(u * (tau - (u < 0))))


def fit_quantile(X, y, tau):
    """Exact pinball-loss minimizer via the standard LP formulation."""
    X = np.asarray(X, dtype=np.float64)
    y = np.asarray(y, dtype=np.float64)
    n, p = X.shape
    c = np.concatenate([np.zeros(p), tau * np.ones(n), (1 - tau) * np.ones(n)])
    a_eq = np.hstack([X, np.eye(n), -np.eye(n)])
    bounds = [(None, None)] * p + [(0, None)] * (2 * n)
    res = linprog(c, A_eq=a_eq, b_eq=y, bounds=bounds, method="highs")
    if not res.success:
        raise NumericError(f"quantile LP failed: {res.message}")
    return res.x[:p]


def quantreg_design(score, default_flag, purpose):
    """Six-column design: intercept, default, D_E, D_M and interactions."""
    y = np.asarray(score, dtype=np.float64)
    d = np.asarray(default_flag, dtype=np.float64)
    de = np.array([1.0 if p == "educational" else 0.0 for p in purpose])
    dm = np.array([1.0 if p == "moving" else 0.0 for p in purpose])
    for name, col in (("educational", de), ("moving", dm)):
        if col.sum() == 0:
            raise ValidationError(f"no observations for dummy {name!r}",
                                  code="EMPTY_DUMMY")
    X = np.column_stack([np.ones(len(y)), d, de, dm, d * de, d * dm])
    return X, y


@dataclass
class QuantRegResult:
    taus: tuple
    coef: dict  # tau -> beta array (6,)
    pvalues: dict  # tau -> p array (6,)
    n_bootstrap: int


def quantile_regression(score, default_flag, purpose, taus=QUANTREG_TAUS,
                        n_bootstrap=1000, seed=0):
    """Quantile regression with interactions; bootstrap p-values.

    p-values come from row-resampling: twice the fraction of bootstrap
    coefficients on the opposite side of zero from the point estimate.
    """
    X, y = quantreg_design(score, default_flag, purpose)
    n = len(y)
    coef, pvalues = {}, {}
    rng = rng_stream(seed, "quantreg-bootstrap")
    for tau in taus:
        beta = fit_quantile(X, y, tau)
        coef[tau] = beta
        boots = np.empty((n_bootstrap, X.shape[1]))
        for b in range(n_bootstrap):
            idx = rng.integers(0, n, size=n)
            try:
                boots[b] = fit_quantile(X[idx], y[idx], tau)
            except (NumericError, ValidationError):
                boots[b] = beta
        p = np.empty(X.shape[1])
        for j in range(X.shape[1]):
            opposite = (boots[:, j] <= 0).mean() if beta[j] > 0 \
                else (boots[:, j] >= 0).mean()
            p[j] = min(1.0, 2.0 * opposite)
        pvalues[tau] = p
    return QuantRegResult(tuple(taus), coef, pvalues, n_bootstrap)


def test_record(name, statistic, p, n, params=None):
    """Canonical JSON-ready record for one statistical test."""
    return {"name": name, "statistic": float(statistic), "p": float(p),
            "n": int(n), "params": params or {}}
