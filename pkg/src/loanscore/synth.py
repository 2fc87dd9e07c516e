"""Seeded synthetic loan corpus with a planted text signal.

Produces raw-application CSVs in the ingest schema. Defaulters' free-text
descriptions carry distress vocabulary so that a text-derived score adds
signal beyond the tabular variables; a fraction of rows exercise the
cleaning edge cases (timestamps, HTML entities, boilerplate).
"""

from __future__ import annotations

import csv

import numpy as np

from .data import EMP_LENGTH_LEVELS, HOME_OWNERSHIP_LEVELS, PURPOSE_LEVELS, STATE_CODES
from .util import rng_stream

# Both pools are sentiment-neutral nouns absent from the bundled lexicon
# and used in identical sentence templates, so the planted class signal is
# carried only by token identity: linguistic features (length, readability,
# polarity) stay uninformative and only a text encoder can pick it up.
_CALM_WORDS = ("garden", "bicycle", "kitchen", "window", "carpet",
               "bridge", "meadow", "lantern", "orchard", "harbor")
_DISTRESS_WORDS = ("furnace", "gravel", "timber", "copper", "marble",
                   "canvas", "ribbon", "barrel", "saddle", "anchor")
_FILLER = ("I would like to consolidate my bills into one payment.",
           "This loan will help me manage my monthly expenses.",
           "I have been at my current job for several years.",
           "My plan is to pay this off as quickly as possible.",
           "Thanks for taking the time to read my request.")


def _description(rng, label, signal_strength):
    parts = [str(rng.choice(_FILLER))]
    pool = _DISTRESS_WORDS if label == 1 else _CALM_WORDS
    n_signal = int(rng.integers(2, 5)) if rng.random() < signal_strength else 0
    for _ in range(n_signal):
        parts.append(f"I also set money aside for the {rng.choice(pool)}.")
    parts.append(str(rng.choice(_FILLER)))
    text = " ".join(parts)
    roll = rng.random()
    if roll < 0.10:
        text = f"Borrower added on {int(rng.integers(1, 13)):02d}/{int(rng.integers(1, 29)):02d}/2018 > " + text
    elif roll < 0.15:
        text = text.replace("my", "my &amp; our", 1)
    return text


def generate(n, seed, signal_strength=0.9, default_rate=0.2, path=None):
    """Write (or return) n raw rows; returns list of dict rows when path None."""
    rng = rng_stream(seed, "synth")
    rows = []
    for i in range(n):
        fico_low = int(rng.integers(640, 820) // 5 * 5)
        income = float(np.round(np.exp(rng.normal(11.0, 0.5)), 2))
        dti = float(np.round(rng.uniform(2.0, 38.0), 2))
        amount = float(np.round(rng.uniform(1000, 40000), 0))
        # weak tabular signal: low fico and high dti raise default odds
        logit = (-1.6 + 0.008 * (720 - fico_low) + 0.02 * (dti - 20)
                 - 0.3 * (income / 60000 - 1))
        base = 1.0 / (1.0 + np.exp(-logit))
        # rescale around the target default rate
        p = min(max(base * default_rate / 0.2, 0.01), 0.95)
        label = int(rng.random() < p)
        rows.append({
            "id": f"L{i:06d}",
            "loan_status": "Charged Off" if label else "Fully Paid",
            "annual_inc": f"{income}",
            "dti": f"{dti}",
            "loan_amnt": f"{amount}",
            "fico_range_low": f"{fico_low}",
            "fico_range_high": f"{fico_low + 4}",
            "emp_length": str(rng.choice(EMP_LENGTH_LEVELS)),
            "purpose": str(rng.choice(PURPOSE_LEVELS)),
            "home_ownership": str(rng.choice(HOME_OWNERSHIP_LEVELS[:3])),
            "addr_state": str(rng.choice(STATE_CODES)),
            "desc": _description(rng, label, signal_strength),
        })
    if path is None:
        return rows
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.DictWriter(fh, fieldnames=list(rows[0].keys()))
        writer.writeheader()
        writer.writerows(rows)
    return rows
