"""End-to-end pipeline stages behind the CLI.

Every stage reads and writes files in one output directory and stamps its
artifacts with the seed and the SHA-256 of its primary input, so stale
intermediate files are detected before use.
"""

from __future__ import annotations

import csv
import json
from dataclasses import dataclass, field

import numpy as np

from . import data, encoder, folds, gbdt, genopt, lingfeat, stats
from .util import ValidationError, fmt_float, rng_stream, sha256_file

LING_COLUMNS = ["word_count", "flesch", "polarity", "subjectivity"]
SCORE_COLUMN = "text_score"

SUBSET_NAMES = ("all", "quantitative", "categorical", "linguistic", "score")


@dataclass
class RunConfig:
    outdir: str
    seed: int = 0
    k: int = 5
    threshold: float = 0.5
    encoder: str = "hashed"  # or "precomputed"
    embeddings_path: str = None
    hash_dim: int = 768
    column_map: dict = field(default_factory=dict)
    mu: int = genopt.DEFAULT_MU
    lam: int = genopt.DEFAULT_LAMBDA
    generations: int = genopt.DEFAULT_GENERATIONS
    crossover_p: float = genopt.CROSSOVER_P
    mutation_p: float = genopt.MUTATION_P
    full_grid: bool = True

    def path(self, name):
        import os

        return os.path.join(self.outdir, name)


def _write_meta(config, name, input_sha, extra=None):
    doc = {"seed": config.seed, "input_sha256": input_sha}
    doc.update(extra or {})
    with open(config.path(name), "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")


def _check_meta(config, name, expected_sha):
    with open(config.path(name), "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if doc["input_sha256"] != expected_sha:
        raise ValidationError(
            f"{name}: recorded input hash does not match current input; "
            "re-run the producing command", code="STALE_INPUT")
    return doc


# --- ingest --------------------------------------------------------------


def run_ingest(config, input_csv):
    """Clean and filter the raw CSV; write the feature table and texts."""
    result = data.ingest_csv(input_csv, config.column_map)
    if not result.records:
        raise ValidationError("no usable rows after filtering", code="EMPTY_INPUT")
    ling = {}
    for col in LING_COLUMNS:
        ling[col] = {}
    for r in result.records:
        feats = lingfeat.extract(r.desc)
        ling["word_count"][r.id] = float(feats.word_count)
        ling["flesch"][r.id] = float(feats.readability)
        ling["polarity"][r.id] = feats.polarity
        ling["subjectivity"][r.id] = feats.subjectivity
    table = data.build_feature_table(result.records, extra_columns=ling)
    data.write_feature_table(table, config.path("records.csv"))
    with open(config.path("descs.csv"), "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["id", "label", "purpose", "desc"])
        for r in result.records:
            writer.writerow([r.id, r.label, r.purpose, r.desc])
    input_sha = sha256_file(input_csv)
    data.write_sidecar(result, table, config.path("records.meta.json"),
                       input_sha=input_sha)
    _write_meta(config, "ingest.meta.json", input_sha,
                {"rows_kept": len(table.ids),
                 "drop_counts": result.drop_counts})
    return table, result


def load_table(config):
    return data.read_feature_table(config.path("records.csv"))


def load_descs(config):
    descs, labels, purposes = {}, {}, {}
    with open(config.path("descs.csv"), "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader)
        if header != ["id", "label", "purpose", "desc"]:
            raise ValidationError("bad descs.csv header", code="BAD_HEADER")
        for rid, label, purpose, desc in reader:
            descs[rid] = desc
            labels[rid] = int(label)
            purposes[rid] = purpose
    return descs, labels, purposes


# --- eda -----------------------------------------------------------------


def run_eda(config):
    """Summary statistics and association tests for the cleaned table."""
    table = load_table(config)
    _, _, purposes = load_descs(config)
    y = table.labels
    records = {"quantitative": {}, "tests": []}
    for col in data.QUANT_COLUMNS + LING_COLUMNS:
        v = table.X[:, table.column_index(col)]
        records["quantitative"][col] = {
            "median": float(np.median(v)),
            "mean": float(np.mean(v)),
            "std": float(np.std(v, ddof=1)),
            "median_default": float(np.median(v[y == 1])),
            "median_nondefault": float(np.median(v[y == 0])),
        }
        d, p = stats.ks_two_sample(v[y == 1], v[y == 0])
        records["tests"].append(stats.test_record(
            f"ks:{col}", d, p, len(v), {"test": "ks_two_sample"}))
        pr, sp, p_pr, p_sp = stats.correlations(v, y.astype(float))
        records["tests"].append(stats.test_record(
            f"pearson:{col}:label", pr, p_pr, len(v)))
    for cat in data.CATEGORICALS:
        cols = [c for c in table.columns if c.startswith(f"{cat}=")]
        counts = np.zeros((len(cols), 2))
        for j, c in enumerate(cols):
            mask = table.X[:, table.column_index(c)] == 1.0
            counts[j, 0] = int((y[mask] == 0).sum())
            counts[j, 1] = int((y[mask] == 1).sum())
        counts = counts[counts.sum(axis=1) > 0]
        stat, df, p = stats.chi2_independence(counts)
        records["tests"].append(stats.test_record(
            f"chi2:{cat}", stat, p, int(counts.sum()), {"df": df}))
    # rank test of the text-length distribution across employment length
    groups = []
    wc = table.X[:, table.column_index("word_count")]
    for lv in data.EMP_LENGTH_LEVELS:
        name = f"emp_length={lv}"
        if name in table.columns:
            mask = table.X[:, table.column_index(name)] == 1.0
            if mask.any():
                groups.append(wc[mask])
    if len(groups) >= 2:
        h, p = stats.kruskal_wallis(groups)
        records["tests"].append(stats.test_record(
            "kruskal:word_count:emp_length", h, p, len(wc)))
    with open(config.path("eda.json"), "w", encoding="utf-8") as fh:
        json.dump(records, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return records


# --- folds and scores ----------------------------------------------------


def run_make_folds(config):
    table = load_table(config)
    labels = {rid: int(y) for rid, y in zip(table.ids, table.labels)}
    plan = folds.make_folds(labels, config.k, config.seed)
    folds.write_fold_plan(plan, config.path("folds.csv"))
    _write_meta(config, "folds.meta.json", sha256_file(config.path("records.csv")),
                {"k": config.k})
    return plan


def load_plan(config):
    _check_meta(config, "folds.meta.json", sha256_file(config.path("records.csv")))
    return folds.read_fold_plan(config.path("folds.csv"), config.k, config.seed)


def _make_encoder(config):
    if config.encoder == "hashed":
        dim = config.hash_dim
        return lambda rid, text: encoder.hashed_encode(text, dim)
    if config.encoder == "precomputed":
        if not config.embeddings_path:
            raise ValidationError("precomputed encoder needs an embeddings file",
                                  code="MISSING_EMBEDDINGS")
        store = encoder.load_embeddings(config.embeddings_path)
        return lambda rid, text: store.vector(rid)
    raise ValidationError(f"unknown encoder {config.encoder!r}", code="BAD_ENCODER")


def run_gen_score(config, grid=None):
    """Out-of-fold text scores; aborts on any leakage violation."""
    descs, labels, _ = load_descs(config)
    plan = load_plan(config)
    column = folds.generate_leakage_free_scores(
        descs, labels, plan, _make_encoder(config), config.seed, grid=grid)
    folds.require_no_leakage(column, plan)
    folds.write_scored_column(column, config.path("score.csv"))
    _write_meta(config, "score.meta.json", sha256_file(config.path("folds.csv")),
                {"encoder": config.encoder,
                 "fold_configs": {str(f): cfg.__dict__ if hasattr(cfg, "__dict__")
                                  else str(cfg)
                                  for f, cfg in column.fold_configs.items()}})
    return column


def load_scored_table(config, with_score):
    table = load_table(config)
    if with_score:
        column = folds.read_scored_column(config.path("score.csv"))
        table = table.with_extra(SCORE_COLUMN, column.values_by_id())
    return table


# --- tune / train ---------------------------------------------------------


def _variant(with_score):
    return "with" if with_score else "without"


def run_tune(config, with_score, mu=None, lam=None, generations=None):
    table = load_scored_table(config, with_score)
    plan = load_plan(config)
    fitness = genopt.cv_fitness(table, plan, seed=config.seed,
                                threshold=config.threshold)
    best, history = genopt.evolve(
        fitness, mu=mu or config.mu, lam=lam or config.lam,
        generations=generations or config.generations, seed=config.seed,
        crossover_p=config.crossover_p, mutation_p=config.mutation_p)
    name = _variant(with_score)
    genopt.write_history(history, config.path(f"tune_{name}_history.csv"))
    params = dict(zip(genopt.GENE_ORDER, best.genome))
    _write_meta(config, f"tune_{name}.json",
                sha256_file(config.path("records.csv")),
                {"best_params": params, "best_fitness": best.fitness,
                 "children_evaluated": history.children_evaluated})
    return best, history


def load_params(config, with_score):
    path = config.path(f"tune_{_variant(with_score)}.json")
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    return gbdt.GbdtParams(**doc["best_params"]).validate()


def default_params():
    """Sane fixed hyperparameters for runs that skip the genetic search."""
    return gbdt.GbdtParams(
        scale_pos_weight=1.0, eta=0.1, subsample=0.9, n_estimators=60,
        colsample_bytree=0.8, max_depth=4, lambda_=1.0, alpha=0.5,
        gamma=0.0, min_child_weight=1.0).validate()


def run_train(config, with_score, params=None):
    table = load_scored_table(config, with_score)
    if params is None:
        try:
            params = load_params(config, with_score)
        except FileNotFoundError:
            params = default_params()
    model = gbdt.fit(table, params=params, seed=config.seed,
                     feature_names=table.columns)
    name = _variant(with_score)
    with open(config.path(f"model_{name}.json"), "w", encoding="utf-8") as fh:
        fh.write(gbdt.model_to_json(model))
        fh.write("\n")
    _write_meta(config, f"model_{name}.meta.json",
                sha256_file(config.path("records.csv")))
    return model


def load_model(config, with_score):
    _check_meta(config, f"model_{_variant(with_score)}.meta.json",
                sha256_file(config.path("records.csv")))
    with open(config.path(f"model_{_variant(with_score)}.json"), "r",
              encoding="utf-8") as fh:
        return gbdt.model_from_json(fh.read())


# --- evaluate -------------------------------------------------------------


def _subset_columns(table, subset):
    if subset == "all":
        return list(table.columns)
    if subset == "quantitative":
        return list(data.QUANT_COLUMNS)
    if subset == "categorical":
        return [c for c in table.columns if "=" in c]
    if subset == "linguistic":
        return list(LING_COLUMNS)
    if subset == "score":
        return [SCORE_COLUMN]
    raise ValidationError(f"unknown subset {subset!r}", code="BAD_SUBSET")


def oof_predictions(table, plan, params, seed):
    """Out-of-fold probabilities over the shared fold plan."""
    id_pos = {rid: i for i, rid in enumerate(table.ids)}
    proba = np.empty(len(table.ids))
    for f in range(plan.k):
        trn = np.array([id_pos[i] for i in plan.train_ids(f)], dtype=np.int64)
        val = np.array([id_pos[i] for i in plan.fold_ids(f)], dtype=np.int64)
        model = gbdt.fit(table.X[trn], table.labels[trn], params,
                         seed=rng_stream(seed, "oof", f).integers(2**63),
                         feature_names=table.columns)
        proba[val] = gbdt.predict_proba(model, table.X[val])
    return proba


def run_evaluate(config, params_with=None, params_without=None,
                 subsets=SUBSET_NAMES):
    """Cross-validated metric sets for every variable subset.

    The with-score and without-score runs share the identical fold plan,
    and their paired out-of-fold scores feed the DeLong comparison.
    """
    table = load_scored_table(config, with_score=True)
    plan = load_plan(config)
    if params_with is None:
        try:
            params_with = load_params(config, with_score=True)
        except FileNotFoundError:
            params_with = default_params()
    if params_without is None:
        try:
            params_without = load_params(config, with_score=False)
        except FileNotFoundError:
            params_without = params_with

    y = table.labels
    result = {"threshold": config.threshold, "seed": config.seed,
              "metric_sets": {}, "tests": []}
    without_cols = [c for c in table.columns if c != SCORE_COLUMN]
    proba_with = oof_predictions(table, plan, params_with, config.seed)
    proba_without = oof_predictions(table.select(without_cols), plan,
                                    params_without, config.seed)
    result["metric_sets"]["with_score"] = stats.metrics(
        y, proba_with, config.threshold).as_dict()
    result["metric_sets"]["without_score"] = stats.metrics(
        y, proba_without, config.threshold).as_dict()
    auc_a, auc_b, z, p = stats.delong_test(y, proba_with, proba_without)
    result["tests"].append(stats.test_record(
        "delong:with_vs_without", z, p, len(y),
        {"auc_with": auc_a, "auc_without": auc_b}))

    for subset in subsets:
        if subset == "all":
            continue
        sub = table.select(_subset_columns(table, subset))
        proba = oof_predictions(sub, plan, params_without, config.seed)
        result["metric_sets"][subset] = stats.metrics(
            y, proba, config.threshold).as_dict()

    oof = {"with_score": proba_with, "without_score": proba_without}
    with open(config.path("oof_scores.csv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("id,label,proba_with,proba_without\n")
        for i, rid in enumerate(table.ids):
            fh.write(f"{rid},{int(y[i])},{fmt_float(proba_with[i])},"
                     f"{fmt_float(proba_without[i])}\n")
    with open(config.path("evaluate.json"), "w", encoding="utf-8") as fh:
        json.dump(result, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return result, oof


# --- explain ---------------------------------------------------------------


def run_explain(config, instance_ids=(), with_score=True):
    """Feature importances, SHAP distributions and per-instance waterfalls."""
    table = load_scored_table(config, with_score)
    model = load_model(config, with_score)
    imp = gbdt.feature_importance(model)
    with open(config.path("importance.csv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("feature,importance\n")
        for name, v in sorted(imp.items(), key=lambda kv: -kv[1]):
            fh.write(f"{name},{fmt_float(v)}\n")

    rng = rng_stream(config.seed, "explain")
    n = len(table.ids)
    sample = np.sort(rng.choice(n, size=min(500, n), replace=False))
    shap_rows = np.empty((len(sample), table.X.shape[1]))
    for i, r in enumerate(sample):
        shap_rows[i] = gbdt.tree_shap(model, table.X[r]).contributions
    with open(config.path("shap_summary.csv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("feature,mean_abs_shap,mean_shap,min,max\n")
        for j, name in enumerate(table.columns):
            col = shap_rows[:, j]
            fh.write(f"{name},{fmt_float(np.mean(np.abs(col)))},"
                     f"{fmt_float(col.mean())},{fmt_float(col.min())},"
                     f"{fmt_float(col.max())}\n")
    # dependence data: feature value vs its contribution, per sampled row
    with open(config.path("shap_dependence.csv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("id,feature,value,shap\n")
        for i, r in enumerate(sample):
            rid = table.ids[r]
            for j, name in enumerate(table.columns):
                fh.write(f"{rid},{name},{fmt_float(table.X[r, j])},"
                         f"{fmt_float(shap_rows[i, j])}\n")

    waterfalls = {}
    for rid in instance_ids:
        r = table.row_of(rid)
        sv = gbdt.tree_shap(model, table.X[r])
        with open(config.path(f"waterfall_{rid}.csv"), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write("feature,value,shap\n")
            fh.write(f"_base,,{fmt_float(sv.base)}\n")
            for j, name in enumerate(table.columns):
                fh.write(f"{name},{fmt_float(table.X[r, j])},"
                         f"{fmt_float(sv.contributions[j])}\n")
        waterfalls[rid] = sv
    return imp, waterfalls


# --- report -----------------------------------------------------------------


def score_bins(scores, labels, width=0.01):
    """Default / non-default proportions per score bin of the given width."""
    edges = np.arange(0.0, 1.0 + width / 2, width)
    rows = []
    s = np.asarray(scores, dtype=np.float64)
    y = np.asarray(labels)
    idx = np.minimum((s / width).astype(int), len(edges) - 2)
    for b in range(len(edges) - 1):
        mask = idx == b
        n = int(mask.sum())
        if n == 0:
            rows.append((edges[b], edges[b + 1], 0, 0.0, 0.0))
            continue
        frac_def = float((y[mask] == 1).mean())
        rows.append((edges[b], edges[b + 1], n, frac_def, 1.0 - frac_def))
    return rows


def per_purpose_bacc(labels, proba_with, proba_without, purposes, ids,
                     threshold):
    """Relative BACC change per loan purpose from adding the score."""
    y = np.asarray(labels)
    purpose_arr = np.array([purposes[i] for i in ids])
    rows = []
    for purpose in sorted(set(purpose_arr)):
        mask = purpose_arr == purpose
        if len(set(y[mask].tolist())) < 2:
            continue
        b_with = stats.balanced_accuracy(y[mask], proba_with[mask], threshold)
        b_without = stats.balanced_accuracy(y[mask], proba_without[mask],
                                            threshold)
        rel = (b_with - b_without) / b_without if b_without else 0.0
        rows.append((purpose, int(mask.sum()), b_without, b_with, rel))
    return rows


def run_report(config, n_bootstrap=1000):
    """Assemble the full evaluation report from the stage artifacts."""
    table = load_scored_table(config, with_score=True)
    _, _, purposes = load_descs(config)
    ids, y = table.ids, table.labels

    with open(config.path("oof_scores.csv"), "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "id,label,proba_with,proba_without":
            raise ValidationError("bad oof_scores.csv header", code="BAD_HEADER")
        pw, pwo = {}, {}
        for line in fh:
            rid, _, a, b = line.rstrip("\n").split(",")
            pw[rid], pwo[rid] = float(a), float(b)
    proba_with = np.array([pw[i] for i in ids])
    proba_without = np.array([pwo[i] for i in ids])

    text_score = table.X[:, table.column_index(SCORE_COLUMN)]
    bins = score_bins(text_score, y)
    with open(config.path("score_bins.csv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("bin_low,bin_high,count,default_prop,nondefault_prop\n")
        for lo, hi, n, fd, fn in bins:
            fh.write(f"{fmt_float(lo)},{fmt_float(hi)},{n},"
                     f"{fmt_float(fd)},{fmt_float(fn)}\n")

    deltas = per_purpose_bacc(y, proba_with, proba_without, purposes, ids,
                              config.threshold)
    with open(config.path("purpose_bacc.csv"), "w", encoding="utf-8",
              newline="\n") as fh:
        fh.write("purpose,n,bacc_without,bacc_with,relative_change\n")
        for purpose, n, b0, b1, rel in deltas:
            fh.write(f"{purpose},{n},{fmt_float(b0)},{fmt_float(b1)},"
                     f"{fmt_float(rel)}\n")

    purpose_list = [purposes[i] for i in ids]
    quantreg = None
    try:
        quantreg = stats.quantile_regression(
            text_score, y.astype(float), purpose_list,
            n_bootstrap=n_bootstrap, seed=config.seed)
        with open(config.path("quantreg.csv"), "w", encoding="utf-8",
                  newline="\n") as fh:
            fh.write("tau," + ",".join(stats.QUANTREG_COEF_NAMES) + ","
                     + ",".join(f"p_{n}" for n in stats.QUANTREG_COEF_NAMES)
                     + "\n")
            for tau in quantreg.taus:
                coefs = ",".join(fmt_float(v) for v in quantreg.coef[tau])
                ps = ",".join(fmt_float(v) for v in quantreg.pvalues[tau])
                fh.write(f"{fmt_float(tau)},{coefs},{ps}\n")
    except ValidationError:
        pass  # dummy purposes absent from small corpora

    with open(config.path("evaluate.json"), "r", encoding="utf-8") as fh:
        evaluation = json.load(fh)
    header = {
        "seed": config.seed,
        "threshold": config.threshold,
        "k": config.k,
        "input_sha256": sha256_file(config.path("records.csv")),
    }
    manifest = {
        "header": header,
        "metric_sets": evaluation["metric_sets"],
        "tests": evaluation["tests"],
        "artifacts": {
            "score_bins": "score_bins.csv",
            "purpose_bacc": "purpose_bacc.csv",
            "importance": "importance.csv",
            "shap_summary": "shap_summary.csv",
            "shap_dependence": "shap_dependence.csv",
            "quantreg": "quantreg.csv" if quantreg else None,
        },
    }
    with open(config.path("report.json"), "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return manifest
