"""Command-line entry point: embedx export."""

from __future__ import annotations

import sys

import click

from .core import PINNED_MODEL, POOLINGS, ExportError, export


@click.group()
def main():
    """Export transformer sentence embeddings to the EMB1 format."""


@main.command("export")
@click.option("--input", "input_path", required=True,
              type=click.Path(exists=True), help="CSV with id,<text> rows.")
@click.option("--model", "model_id", default=PINNED_MODEL, show_default=True)
@click.option("--pool", "pooling", default="cls",
              type=click.Choice(list(POOLINGS)), show_default=True)
@click.option("--out", "out_path", required=True, type=click.Path())
@click.option("--batch-size", default=32, show_default=True, type=int)
def export_cmd(input_path, model_id, pooling, out_path, batch_size):
    """Write one embedding vector per input row, plus a JSON manifest."""
    try:
        result = export(input_path, model_id=model_id, pooling=pooling,
                        out_path=out_path, batch_size=batch_size)
    except ExportError as exc:
        click.echo(f"export error: {exc}", err=True)
        sys.exit(2)
    click.echo(f"wrote {result.count} vectors (dim {result.dim}, "
               f"{result.truncated} truncated) to {result.out_path}")


if __name__ == "__main__":
    main()
