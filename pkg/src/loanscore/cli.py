"""Command-line interface for the loan scoring pipeline.

Exit codes: 0 success, 2 validation error, 3 leakage violation,
4 numeric failure. The output directory defaults to ``LOANSCORE_OUTDIR``
when set.
"""

from __future__ import annotations

import functools
import os
import sys

import click

from . import pipeline, synth
from .util import LeakageError, NumericError, ValidationError


def _outdir_default():
    return os.environ.get("LOANSCORE_OUTDIR", ".")


def _handle_errors(fn):
    @functools.wraps(fn)
    def wrapper(*args, **kwargs):
        try:
            return fn(*args, **kwargs)
        except LeakageError as exc:
            click.echo(f"leakage violation: {exc}", err=True)
            sys.exit(3)
        except ValidationError as exc:
            click.echo(f"validation error [{exc.code}]: {exc}", err=True)
            sys.exit(2)
        except NumericError as exc:
            click.echo(f"numeric failure: {exc}", err=True)
            sys.exit(4)

    return wrapper


def _common(fn):
    fn = click.option("--outdir", default=_outdir_default, show_default="cwd",
                      help="Artifact directory (env LOANSCORE_OUTDIR).")(fn)
    fn = click.option("--seed", default=0, show_default=True, type=int)(fn)
    fn = click.option("--threshold", default=0.5, show_default=True,
                      type=float)(fn)
    fn = click.option("--k", default=5, show_default=True, type=int)(fn)
    fn = click.option("--encoder", "encoder_name", default="hashed",
                      type=click.Choice(["hashed", "precomputed"]),
                      show_default=True)(fn)
    fn = click.option("--embeddings", default=None,
                      help="EMB1 file for the precomputed encoder.")(fn)
    return fn


def _config(outdir, seed, threshold, k, encoder_name, embeddings, **extra):
    os.makedirs(outdir, exist_ok=True)
    return pipeline.RunConfig(outdir=outdir, seed=seed, threshold=threshold,
                              k=k, encoder=encoder_name,
                              embeddings_path=embeddings, **extra)


@click.group()
def main():
    """Leakage-safe credit scoring with a text-derived risk score."""


@main.command()
@click.option("--input", "input_csv", required=True,
              type=click.Path(exists=True))
@_common
@_handle_errors
def ingest(input_csv, **kw):
    """Clean and filter the raw CSV into the canonical feature table."""
    config = _config(**kw)
    table, result = pipeline.run_ingest(config, input_csv)
    click.echo(f"kept {len(table.ids)} rows; drops: {result.drop_counts}")


@main.command()
@_common
@_handle_errors
def eda(**kw):
    """Summary statistics and association tests."""
    config = _config(**kw)
    records = pipeline.run_eda(config)
    click.echo(f"wrote eda.json with {len(records['tests'])} tests")


@main.command("embed-import")
@click.option("--input", "emb_path", required=True,
              type=click.Path(exists=True))
@_common
@_handle_errors
def embed_import(emb_path, **kw):
    """Validate an EMB1 embedding file for the precomputed encoder."""
    from . import encoder as enc

    _config(**kw)
    store = enc.load_embeddings(emb_path)
    click.echo(f"valid EMB1: dim={store.meta.dim} count={store.meta.count}")


@main.command("make-folds")
@_common
@_handle_errors
def make_folds(**kw):
    """Build the stratified fold plan shared by all downstream stages."""
    config = _config(**kw)
    plan = pipeline.run_make_folds(config)
    click.echo(f"wrote folds.csv with k={plan.k}")


@main.command("gen-score")
@click.option("--fast/--full", default=False,
              help="Use a reduced architecture grid (for smoke runs).")
@_common
@_handle_errors
def gen_score(fast, **kw):
    """Generate out-of-fold text scores with the leakage assertion."""
    from . import scorehead

    config = _config(**kw)
    grid = None
    if fast:
        grid = [c for c in scorehead.enumerate_grid()
                if c.first_dense == 128 and not c.second_dense
                and c.dropout_rate == 0.0][:2]
    column = pipeline.run_gen_score(config, grid=grid)
    click.echo(f"scored {len(column.scores)} rows, zero leakage violations")


@main.command()
@click.option("--with-score/--without-score", "with_score", default=True)
@click.option("--mu", default=None, type=int)
@click.option("--lam", default=None, type=int)
@click.option("--generations", default=None, type=int)
@_common
@_handle_errors
def tune(with_score, mu, lam, generations, **kw):
    """Genetic hyperparameter search over the boosting model."""
    config = _config(**kw)
    best, history = pipeline.run_tune(config, with_score, mu=mu, lam=lam,
                                      generations=generations)
    click.echo(f"best fitness {best.fitness:.4f} after "
               f"{history.children_evaluated} children")


@main.command()
@click.option("--with-score/--without-score", "with_score", default=True)
@_common
@_handle_errors
def train(with_score, **kw):
    """Fit the boosting model on the full table with the tuned parameters."""
    config = _config(**kw)
    model = pipeline.run_train(config, with_score)
    click.echo(f"trained {len(model.trees)} trees")


@main.command()
@_common
@_handle_errors
def evaluate(**kw):
    """Cross-validated metrics for every variable subset, plus DeLong."""
    config = _config(**kw)
    result, _ = pipeline.run_evaluate(config)
    ms = result["metric_sets"]
    click.echo(f"AUC with score {ms['with_score']['auc']:.4f}, "
               f"without {ms['without_score']['auc']:.4f}")


@main.command()
@click.option("--instance", "instances", multiple=True,
              help="Row id for a per-instance contribution waterfall.")
@_common
@_handle_errors
def explain(instances, **kw):
    """Feature importance and per-feature contribution summaries."""
    config = _config(**kw)
    pipeline.run_explain(config, instance_ids=list(instances))
    click.echo("wrote importance.csv, shap_summary.csv, shap_dependence.csv")


@main.command()
@click.option("--bootstrap", default=1000, show_default=True, type=int)
@_common
@_handle_errors
def report(bootstrap, **kw):
    """Assemble the final report manifest from the stage artifacts."""
    config = _config(**kw)
    pipeline.run_report(config, n_bootstrap=bootstrap)
    click.echo("wrote report.json")


@main.command("make-synth")
@click.option("--n", default=5000, show_default=True, type=int)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--seed", default=0, show_default=True, type=int)
@click.option("--signal", default=0.9, show_default=True, type=float)
@_handle_errors
def make_synth(n, out_path, seed, signal):
    """Write a seeded synthetic raw corpus with a planted text signal."""
    synth.generate(n, seed, signal_strength=signal, path=out_path)
    click.echo(f"wrote {n} rows to {out_path}")


if __name__ == "__main__":
    main()
