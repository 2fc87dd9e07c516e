"""Linguistic description metrics: word count, readability, polarity, subjectivity."""

from __future__ import annotations

import hashlib
import importlib.resources
import re
from dataclasses import dataclass
from functools import lru_cache

LEXICON_SHA256 = "9c0b58518d17a9f69e076245f579941a4d0c77e7e126b5089dba7a9262d554f7"

_TOKEN_RE = re.compile(r"\S+")
_WORD_RE = re.compile(r"[a-z0-9']+")
_SENT_SPLIT_RE = re.compile(r"[.!?]+")
_VOWEL_GROUP_RE = re.compile(r"[aeiouy]+")


@dataclass
class LinguisticFeatures:
    word_count: int
    readability: float  # Flesch Reading Ease; None when no words
    polarity: float
    subjectivity: float


def word_count(text):
    """Whitespace-delimited tokens containing at least one alphanumeric char."""
    return sum(1 for tok in _TOKEN_RE.findall(text)
               if any(c.isalnum() for c in tok))


def _words(text):
    return _WORD_RE.findall(text.lower())


def count_syllables(word):
    """Vowel-group heuristic with a silent-e rule; at least 1 per word."""
    w = re.sub(r"[^a-z]", "", word.lower())
    if not w:
        return 1
    groups = len(_VOWEL_GROUP_RE.findall(w))
    if w.endswith("e") and not w.endswith("le") and groups > 1:
        groups -= 1
    return max(groups, 1)


def count_sentences(text):
    """Segments delimited by runs of .!? that contain at least one word."""
    n = sum(1 for seg in _SENT_SPLIT_RE.split(text) if _WORD_RE.search(seg.lower()))
    return max(n, 1)


def flesch_reading_ease(text):
    """206.835 - 1.015*(words/sentences) - 84.6*(syllables/words).

    Returns None for texts without a single countable word; callers drop
    such rows from the linguistic analyses only.
    """
    words = [tok for tok in _TOKEN_RE.findall(text)
             if any(c.isalnum() for c in tok)]
    if not words:
        return None
    sentences = count_sentences(text)
    syllables = sum(count_syllables(w) for w in words)
    return 206.835 - 1.015 * (len(words) / sentences) - 84.6 * (syllables / len(words))


@lru_cache(maxsize=1)
def load_lexicon():
    """Bundled word -> (polarity, subjectivity) map; checksum-verified."""
    ref = importlib.resources.files("loanscore") / "resources" / "lexicon.tsv"
    raw = ref.read_bytes()
    digest = hashlib.sha256(raw).hexdigest()
    if digest != LEXICON_SHA256:
        raise RuntimeError(
            f"lexicon checksum mismatch: {digest} != {LEXICON_SHA256}")
    lex = {}
    for line in raw.decode("utf-8").splitlines():
        word, pol, subj = line.split("\t")
        lex[word] = (float(pol), float(subj))
    return lex


def polarity_subjectivity(text):
    """Mean lexicon weights over matched tokens; (0, 0) when nothing matches."""
    lex = load_lexicon()
    pols, subjs = [], []
    for w in _words(text):
        if w in lex:
            p, s = lex[w]
            pols.append(p)
            subjs.append(s)
    if not pols:
        return 0.0, 0.0
    return sum(pols) / len(pols), sum(subjs) / len(subjs)


def extract(text):
    pol, subj = polarity_subjectivity(text)
    return LinguisticFeatures(
        word_count=word_count(text),
        readability=flesch_reading_ease(text),
        polarity=pol,
        subjectivity=subj,
    )
