"""Frozen text encodings: signed feature hashing plus precomputed-embedding IO."""

from __future__ import annotations

import re
from dataclasses import dataclass

import numpy as np

from .util import ValidationError, fmt_float

_WORD_RE = re.compile(r"[a-z0-9']+")

FNV_OFFSET = 0xCBF29CE484222325
FNV_PRIME = 0x100000001B3
_MASK64 = 0xFFFFFFFFFFFFFFFF


@dataclass
class EncoderMeta:
    kind: str  # "hashed" or "precomputed"
    dim: int
    provenance: str = ""
    layer_count: int | None = None
    hidden_size: int | None = None
    attention_heads: int | None = None


@dataclass
class EmbeddingStore:
    ids: list
    matrix: np.ndarray  # (n, dim)
    meta: EncoderMeta

    def __post_init__(self):
        self._index = {rid: i for i, rid in enumerate(self.ids)}

    def vector(self, rid):
        try:
            return self.matrix[self._index[rid]]
        except KeyError:
            raise ValidationError(f"unknown id {rid!r}", code="UNKNOWN_ID")

    def __len__(self):
        return len(self.ids)


def fnv1a64(data):
    h = FNV_OFFSET
    for b in data:
        h = ((h ^ b) * FNV_PRIME) & _MASK64
    return h


def hashed_encode(text, dim=768):
    """Signed feature hashing of lowercase word unigrams and bigrams.

    FNV-1a 64-bit; index = hash mod dim, sign from bit 63; the accumulated
    vector is L2-normalized (the zero vector stays zero).
    """
    if dim < 2:
        raise ValidationError("dim must be >= 2", code="BAD_DIM")
    words = _WORD_RE.findall(text.lower())
    v = np.zeros(dim)
    grams = words + [f"{a} {b}" for a, b in zip(words, words[1:])]
    for gram in grams:
        h = fnv1a64(gram.encode("utf-8"))
        sign = 1.0 if (h >> 63) == 0 else -1.0
        v[h % dim] += sign
    norm = np.linalg.norm(v)
    if norm > 0:
        v /= norm
    return v


def hashed_store(texts_by_id, dim=768):
    """Encode a corpus into an EmbeddingStore (deterministic)."""
    ids = list(texts_by_id)
    matrix = np.stack([hashed_encode(texts_by_id[i], dim) for i in ids]) \
        if ids else np.zeros((0, dim))
    meta = EncoderMeta(kind="hashed", dim=dim,
                       provenance=f"fnv1a64 signed unigram+bigram dim={dim}")
    return EmbeddingStore(ids, matrix, meta)


def load_embeddings(path):
    """Parse an EMB1 file into a validated store.

    Header: ``EMB1 <dim> <count>``; then one ``<id>,<f0>,...,<f_{dim-1}>``
    line per row. Distinct error codes: BAD_HEADER, DIM_MISMATCH,
    DUPLICATE_ID, NON_FINITE, TRUNCATED.
    """
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(" ")
        if len(header) != 3 or header[0] != "EMB1":
            raise ValidationError(f"bad EMB1 header in {path}", code="BAD_HEADER")
        try:
            dim, count = int(header[1]), int(header[2])
        except ValueError:
            raise ValidationError(f"bad EMB1 header in {path}", code="BAD_HEADER")
        ids, rows = [], []
        seen = set()
        for line in fh:
            parts = line.rstrip("\n").split(",")
            rid = parts[0]
            if rid in seen:
                raise ValidationError(f"duplicate id {rid}", code="DUPLICATE_ID")
            seen.add(rid)
            if len(parts) - 1 != dim:
                raise ValidationError(
                    f"row {rid}: {len(parts) - 1} values, expected {dim}",
                    code="DIM_MISMATCH")
            vec = np.array([float(x) for x in parts[1:]])
            if not np.all(np.isfinite(vec)):
                raise ValidationError(f"row {rid}: non-finite value",
                                      code="NON_FINITE")
            ids.append(rid)
            rows.append(vec)
    if len(ids) != count:
        raise ValidationError(
            f"expected {count} rows, found {len(ids)}", code="TRUNCATED")
    matrix = np.stack(rows) if rows else np.zeros((0, dim))
    meta = EncoderMeta(kind="precomputed", dim=dim, provenance=str(path))
    return EmbeddingStore(ids, matrix, meta)


def write_embeddings(store, path):
    """Canonical EMB1 writer; load(write(s)) round-trips byte-identically."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(f"EMB1 {store.matrix.shape[1]} {len(store.ids)}\n")
        for i, rid in enumerate(store.ids):
            fh.write(rid + "," + ",".join(fmt_float(x) for x in store.matrix[i]) + "\n")
