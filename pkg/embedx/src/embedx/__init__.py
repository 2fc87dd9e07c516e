"""Batch exporter of transformer sentence embeddings to the EMB1 format.

The only pinned model is constructed locally from a fixed configuration
and a fixed weight seed, so exports are reproducible without any network
access. The exporter is inference-only.
"""

from .core import PINNED_MODEL, ExportResult, export, load_pinned

__all__ = ["PINNED_MODEL", "ExportResult", "export", "load_pinned"]

__version__ = "0.1.0"
