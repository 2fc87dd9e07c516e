"""Model construction, pooling, and the EMB1 writer."""

from __future__ import annotations

import csv
import hashlib
import importlib.resources
import json
from dataclasses import dataclass

import numpy as np
import torch
from transformers import BertConfig, BertModel, BertTokenizerFast

# The pinned model is deterministic by construction: a fixed architecture
# initialized from a fixed torch seed, run in eval mode on the CPU.
PINNED_MODEL = "local-bert-768-2l-v1"
_PINNED_SEED = 20240601
MAX_LENGTH = 128
POOLINGS = ("cls", "mean")


class ExportError(Exception):
    pass


def _vocab_path():
    ref = importlib.resources.files("embedx") / "resources" / "vocab.txt"
    # tokenizer needs a real filesystem path
    return str(ref)


def load_pinned(model_id=PINNED_MODEL):
    """Tokenizer and model for a pinned id; unknown ids are refused."""
    if model_id != PINNED_MODEL:
        raise ExportError(f"unknown model id {model_id!r}; "
                          f"only {PINNED_MODEL!r} is available offline")
    tokenizer = BertTokenizerFast(vocab_file=_vocab_path(), do_lower_case=True)
    config = BertConfig(
        vocab_size=tokenizer.vocab_size,
        hidden_size=768,
        num_hidden_layers=2,
        num_attention_heads=4,
        intermediate_size=512,
        max_position_embeddings=MAX_LENGTH,
    )
    torch.manual_seed(_PINNED_SEED)
    model = BertModel(config)
    model.eval()
    return tokenizer, model


def _pool(hidden, attention_mask, pooling):
    if pooling == "cls":
        return hidden[:, 0, :]
    if pooling == "mean":
        mask = attention_mask.unsqueeze(-1).to(hidden.dtype)
        return (hidden * mask).sum(dim=1) / mask.sum(dim=1).clamp(min=1.0)
    raise ExportError(f"unknown pooling {pooling!r}; choose from {POOLINGS}")


def read_input(path):
    """CSV with an id column and a text column (id,desc or id,text)."""
    ids, texts = [], []
    seen = set()
    with open(path, "r", encoding="utf-8", newline="") as fh:
        reader = csv.reader(fh)
        header = next(reader, None)
        if header is None or len(header) < 2 or header[0] != "id":
            raise ExportError(f"bad input header in {path}: expected id,<text>")
        text_col = len(header) - 1  # last column holds the text
        for row in reader:
            rid = row[0]
            if rid in seen:
                raise ExportError(f"duplicate id {rid}")
            seen.add(rid)
            ids.append(rid)
            texts.append(row[text_col])
    return ids, texts


@dataclass
class ExportResult:
    out_path: str
    manifest_path: str
    count: int
    dim: int
    truncated: int


def _sha256(path):
    digest = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            digest.update(chunk)
    return digest.hexdigest()


def export(input_path, model_id=PINNED_MODEL, pooling="cls", out_path=None,
           batch_size=32):
    """Run the pinned encoder over the input texts and write an EMB1 file.

    One vector per id; texts longer than the model window are truncated
    and counted in the manifest. A JSON manifest is written beside the
    output file.
    """
    if pooling not in POOLINGS:
        raise ExportError(f"unknown pooling {pooling!r}; choose from {POOLINGS}")
    if out_path is None:
        raise ExportError("out_path is required")
    ids, texts = read_input(input_path)
    tokenizer, model = load_pinned(model_id)

    vectors = []
    truncated = 0
    with torch.no_grad():
        for start in range(0, len(ids), batch_size):
            chunk = texts[start:start + batch_size]
            full = tokenizer(chunk, padding=False)
            truncated += sum(1 for row in full["input_ids"]
                             if len(row) > MAX_LENGTH)
            enc = tokenizer(chunk, padding=True, truncation=True,
                            max_length=MAX_LENGTH, return_tensors="pt")
            out = model(**enc)
            pooled = _pool(out.last_hidden_state, enc["attention_mask"],
                           pooling)
            vectors.append(pooled.numpy().astype(np.float64))
    matrix = np.vstack(vectors) if vectors else np.zeros((0, 768))
    if not np.all(np.isfinite(matrix)):
        raise ExportError("non-finite embedding produced")

    dim = matrix.shape[1]
    with open(out_path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"EMB1 {dim} {len(ids)}\n")
        for i, rid in enumerate(ids):
            fh.write(rid + "," + ",".join(repr(float(x)) for x in matrix[i])
                     + "\n")

    manifest_path = str(out_path) + ".manifest.json"
    import transformers

    manifest = {
        "model_id": model_id,
        "pooling": pooling,
        "dim": dim,
        "count": len(ids),
        "truncated_rows": truncated,
        "input_sha256": _sha256(input_path),
        "versions": {
            "torch": torch.__version__,
            "transformers": transformers.__version__,
            "numpy": np.__version__,
        },
    }
    with open(manifest_path, "w", encoding="utf-8") as fh:
        json.dump(manifest, fh, indent=2, sort_keys=True)
        fh.write("\n")
    return ExportResult(str(out_path), manifest_path, len(ids), dim, truncated)
