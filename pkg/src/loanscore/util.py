"""Shared plumbing: error types, seeded RNG streams, file hashing."""

from __future__ import annotations

import hashlib
import zlib

import numpy as np


class ValidationError(ValueError):
    """Bad input data or configuration. CLI exit code 2.

    ``code`` is a stable machine-readable tag (e.g. DUPLICATE_ID).
    """

    def __init__(self, message, code="VALIDATION"):
        super().__init__(message)
        self.code = code


class LeakageError(RuntimeError):
    """A scored column violates the fold protocol. CLI exit code 3."""

    def __init__(self, violations):
        super().__init__(f"{len(violations)} leakage violation(s)")
        self.violations = violations


class NumericError(ArithmeticError):
    """Non-finite loss or failed numeric routine. CLI exit code 4."""


def rng_stream(seed, *key):
    """Independent generator derived from one master seed.

    Stream-split rule: the master seed plus each key element (strings are
    CRC32-hashed, ints used as-is) form the SeedSequence entropy, so e.g.
    ``rng_stream(seed, "folds")`` and ``rng_stream(seed, "head", fold, cfg)``
    never collide and reproduce across platforms.
    """
    parts = [int(seed) & 0xFFFFFFFFFFFFFFFF]
    for k in key:
        if isinstance(k, str):
            parts.append(zlib.crc32(k.encode("utf-8")))
        else:
            parts.append(int(k) & 0xFFFFFFFFFFFFFFFF)
    return np.random.default_rng(np.random.SeedSequence(parts))


def sha256_file(path):
    h = hashlib.sha256()
    with open(path, "rb") as fh:
        for chunk in iter(lambda: fh.read(1 << 20), b""):
            h.update(chunk)
    return h.hexdigest()


def fmt_float(x):
    """Shortest round-trip decimal form, used for all CSV output."""
    return repr(float(x))
