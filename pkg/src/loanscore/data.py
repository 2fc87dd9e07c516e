"""Raw loan CSV ingestion: filtering, cleaning and the canonical feature table."""

from __future__ import annotations

import html
import json
import re
from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from .util import ValidationError, fmt_float

REJECT = None  # clean_description outcome for rows that must be dropped

BOILERPLATE_PROMPT = "tell your story. what is your loan for?"

_STAMP_RE = re.compile(r"Borrower added on \d{2}/\d{2}/(?:\d{4}|\d{2})\s*>")
_WS_RE = re.compile(r"\s+")

EMP_LENGTH_LEVELS = [
    "< 1 year", "1 year", "2 years", "3 years", "4 years", "5 years",
    "6 years", "7 years", "8 years", "9 years", "10+ years", "NI",
]

PURPOSE_LEVELS = [
    "car", "credit_card", "debt_consolidation", "educational",
    "home_improvement", "house", "major_purchase", "medical", "moving",
    "other", "renewable_energy", "small_business", "vacation", "wedding",
]

HOME_OWNERSHIP_LEVELS = ["MORTGAGE", "OTHER", "OWN", "RENT"]

STATE_CODES = [
    "AK", "AL", "AR", "AZ", "CA", "CO", "CT", "DE", "FL", "GA", "HI", "IA",
    "ID", "IL", "IN", "KS", "KY", "LA", "MA", "MD", "ME", "MI", "MN", "MO",
    "MS", "MT", "NC", "ND", "NE", "NH", "NJ", "NM", "NV", "NY", "OH", "OK",
    "OR", "PA", "RI", "SC", "SD", "TN", "TX", "UT", "VA", "VT", "WA", "WI",
    "WV", "WY",
]

QUANT_COLUMNS = ["revenue", "dti_n", "loan_amnt", "fico_n"]
CATEGORICALS = {
    "emp_length": EMP_LENGTH_LEVELS,
    "purpose": PURPOSE_LEVELS,
    "home_ownership": HOME_OWNERSHIP_LEVELS,
    "addr_state": STATE_CODES,
}

# Raw CSV column names; overridable through the run config's column map.
DEFAULT_COLUMN_MAP = {
    "id": "id",
    "revenue": "annual_inc",
    "dti": "dti",
    "loan_amnt": "loan_amnt",
    "fico_low": "fico_range_low",
    "fico_high": "fico_range_high",
    "emp_length": "emp_length",
    "purpose": "purpose",
    "home_ownership": "home_ownership",
    "addr_state": "addr_state",
    "desc": "desc",
    "outcome": "loan_status",
    # optional fallback when the dti column is absent
    "monthly_debt": "monthly_debt",
    "monthly_income": "monthly_inc",
}

_OUTCOME_MAP = {
    "charged off": 1, "default": 1, "1": 1,
    "fully paid": 0, "non-default": 0, "0": 0,
}


@dataclass
class LoanRecord:
    id: str
    revenue: float
    dti_n: float
    loan_amnt: float
    fico_n: float
    emp_length: str
    purpose: str
    home_ownership: str
    addr_state: str
    desc: str
    label: int


def clean_description(raw):
    """Strip platform boilerplate from a raw description.

    Returns the cleaned text, or REJECT when nothing usable remains.
    Every date-stamped "Borrower added on ..>" prefix is removed, HTML
    entities are decoded, and whitespace is collapsed. The web-form prompt
    is matched against the whole cleaned text (case-insensitive); substring
    hits are left in place.
    """
    if raw is None:
        return REJECT
    text = html.unescape(str(raw))
    text = _STAMP_RE.sub(" ", text)
    text = _WS_RE.sub(" ", text).strip()
    if not text:
        return REJECT
    if text.lower() == BOILERPLATE_PROMPT:
        return REJECT
    return text


def derive_fico(fico_low, fico_high, row_id="?"):
    """Midpoint of the credit-bureau score range, unrounded."""
    lo, hi = float(fico_low), float(fico_high)
    if not (300.0 <= lo <= hi <= 850.0):
        raise ValidationError(
            f"row {row_id}: fico bounds ({lo}, {hi}) outside [300, 850]",
            code="FICO_RANGE",
        )
    return (lo + hi) / 2.0


def merge_home_ownership(level):
    lvl = str(level).strip().upper()
    if lvl in ("OTHER", "NONE", "ANY"):
        return "OTHER"
    if lvl in ("MORTGAGE", "OWN", "RENT"):
        return lvl
    raise ValidationError(f"unknown home_ownership level {level!r}", code="BAD_LEVEL")


def _canon_emp_length(raw):
    if raw is None or (isinstance(raw, float) and np.isnan(raw)):
        return "NI"
    s = str(raw).strip()
    if s in ("", "n/a", "NA", "NI"):
        return "NI"
    if s in EMP_LENGTH_LEVELS:
        return s
    raise ValidationError(f"unknown emp_length level {raw!r}", code="BAD_LEVEL")


def _canon_purpose(raw):
    s = str(raw).strip().lower().replace(" ", "_")
    if s in PURPOSE_LEVELS:
        return s
    raise ValidationError(f"unknown purpose level {raw!r}", code="BAD_LEVEL")


def _parse_outcome(raw):
    s = str(raw).strip().lower()
    return _OUTCOME_MAP.get(s)  # None => transitory / unresolved status


def _is_missing(v):
    if v is None:
        return True
    if isinstance(v, float) and np.isnan(v):
        return True
    return isinstance(v, str) and v.strip() == ""


@dataclass
class IngestResult:
    records: list
    drop_counts: dict
    boilerplate_substring_hits: int


def ingest_csv(path, column_map=None):
    """Read the raw CSV and apply the filtering and cleaning rules.

    Rows are dropped (and counted per reason) for: unresolved loan status,
    missing quantitative fields, and descriptions that clean to REJECT.
    Structurally invalid values (out-of-range FICO, unknown categorical
    levels) raise ValidationError naming the row.
    """
    cmap = dict(DEFAULT_COLUMN_MAP)
    if column_map:
        cmap.update(column_map)
    df = pd.read_csv(path, dtype=str, keep_default_na=False, na_values=[])
    known = set(cmap.values())
    unknown = [c for c in df.columns if c not in known]
    if unknown:
        import warnings

        warnings.warn(f"ignoring unknown columns: {unknown}")
    for logical in ("id", "loan_amnt", "emp_length", "purpose",
                    "home_ownership", "addr_state", "desc", "outcome"):
        if cmap[logical] not in df.columns:
            raise ValidationError(f"missing required column {cmap[logical]!r}",
                                  code="MISSING_COLUMN")

    records = []
    drops = {"unresolved_status": 0, "missing_quantitative": 0, "empty_desc": 0}
    substring_hits = 0
    seen_ids = set()
    for _, row in df.iterrows():
        rid = str(row[cmap["id"]])
        if rid in seen_ids:
            raise ValidationError(f"duplicate id {rid}", code="DUPLICATE_ID")
        seen_ids.add(rid)

        label = _parse_outcome(row[cmap["outcome"]])
        if label is None:
            drops["unresolved_status"] += 1
            continue

        desc = clean_description(row[cmap["desc"]])
        if desc is REJECT:
            drops["empty_desc"] += 1
            continue
        if BOILERPLATE_PROMPT in desc.lower():
            substring_hits += 1

        quant_raw = {k: row.get(cmap[k], "") for k in
                     ("revenue", "loan_amnt", "fico_low", "fico_high")}
        dti_raw = row.get(cmap["dti"], "")
        if _is_missing(dti_raw):
            md, mi = row.get(cmap["monthly_debt"], ""), row.get(cmap["monthly_income"], "")
            if _is_missing(md) or _is_missing(mi) or float(mi) <= 0:
                drops["missing_quantitative"] += 1
                continue
            dti = float(md) / float(mi) * 100.0
        else:
            dti = float(dti_raw)
        if any(_is_missing(v) for v in quant_raw.values()):
            drops["missing_quantitative"] += 1
            continue

        revenue = float(quant_raw["revenue"])
        loan_amnt = float(quant_raw["loan_amnt"])
        fico = derive_fico(quant_raw["fico_low"], quant_raw["fico_high"], rid)
        if revenue < 0 or loan_amnt <= 0 or dti < 0:
            raise ValidationError(
                f"row {rid}: negative quantitative value", code="BAD_VALUE")

        state = str(row[cmap["addr_state"]]).strip().upper()
        if state not in STATE_CODES:
            raise ValidationError(f"row {rid}: unknown state {state!r}",
                                  code="BAD_LEVEL")

        records.append(LoanRecord(
            id=rid,
            revenue=revenue,
            dti_n=dti,
            loan_amnt=loan_amnt,
            fico_n=fico,
            emp_length=_canon_emp_length(row[cmap["emp_length"]]),
            purpose=_canon_purpose(row[cmap["purpose"]]),
            home_ownership=merge_home_ownership(row[cmap["home_ownership"]]),
            addr_state=state,
            desc=desc,
            label=int(label),
        ))
    return IngestResult(records, drops, substring_hits)


@dataclass
class FeatureTable:
    ids: list
    labels: np.ndarray
    X: np.ndarray
    columns: list
    encoding: dict = field(default_factory=dict)  # categorical -> {level: col}

    def column_index(self, name):
        return self.columns.index(name)

    def row_of(self, rid):
        return self.ids.index(rid)

    def select(self, columns):
        """Sub-table restricted to the named columns (order preserved)."""
        idx = [self.columns.index(c) for c in columns]
        return FeatureTable(self.ids, self.labels, self.X[:, idx],
                            list(columns), {})

    def with_extra(self, name, values_by_id):
        """Append one numeric column aligned by id."""
        missing = [i for i in self.ids if i not in values_by_id]
        extra = [i for i in values_by_id if i not in set(self.ids)]
        if missing or extra:
            raise ValidationError(
                f"misaligned column {name!r}: missing={missing[:5]} extra={extra[:5]}",
                code="MISALIGNED_COLUMN",
            )
        col = np.array([[float(values_by_id[i])] for i in self.ids])
        return FeatureTable(self.ids, self.labels, np.hstack([self.X, col]),
                            self.columns + [name], self.encoding)


def build_feature_table(records, extra_columns=None):
    """Quantitative columns untransformed, categoricals one-hot (levels
    present in the data only), extra numeric columns appended after the
    tabular block."""
    ids = [r.id for r in records]
    if len(set(ids)) != len(ids):
        raise ValidationError("duplicate ids in records", code="DUPLICATE_ID")
    labels = np.array([r.label for r in records], dtype=np.int64)

    cols = list(QUANT_COLUMNS)
    blocks = [np.array([[r.revenue, r.dti_n, r.loan_amnt, r.fico_n]
                        for r in records], dtype=np.float64)]
    encoding = {}
    for cat, level_order in CATEGORICALS.items():
        present = [lv for lv in level_order
                   if any(getattr(r, cat) == lv for r in records)]
        encoding[cat] = {}
        block = np.zeros((len(records), len(present)))
        for j, lv in enumerate(present):
            encoding[cat][lv] = len(cols) + j
            for i, r in enumerate(records):
                if getattr(r, cat) == lv:
                    block[i, j] = 1.0
        cols.extend(f"{cat}={lv}" for lv in present)
        blocks.append(block)

    table = FeatureTable(ids, labels, np.hstack(blocks), cols, encoding)
    for name, values in (extra_columns or {}).items():
        table = table.with_extra(name, values)
    return table


def write_feature_table(table, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id,label," + ",".join(table.columns) + "\n")
        for i, rid in enumerate(table.ids):
            vals = ",".join(fmt_float(v) for v in table.X[i])
            fh.write(f"{rid},{int(table.labels[i])},{vals}\n")


def read_feature_table(path):
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n").split(",")
        if header[:2] != ["id", "label"]:
            raise ValidationError("bad feature table header", code="BAD_HEADER")
        columns = header[2:]
        ids, labels, rows = [], [], []
        for line in fh:
            if not line.strip():
                continue
            parts = line.rstrip("\n").split(",")
            ids.append(parts[0])
            labels.append(int(parts[1]))
            rows.append([float(v) for v in parts[2:]])
    return FeatureTable(ids, np.array(labels, dtype=np.int64),
                        np.array(rows, dtype=np.float64), columns)


def write_sidecar(result, table, path, input_sha=None):
    encoding = {cat: dict(m) for cat, m in table.encoding.items()}
    doc = {
        "rows_kept": len(table.ids),
        "drop_counts": result.drop_counts,
        "boilerplate_substring_hits": result.boilerplate_substring_hits,
        "encoding": encoding,
        "columns": table.columns,
        "input_sha256": input_sha,
    }
    with open(path, "w", encoding="utf-8") as fh:
        json.dump(doc, fh, indent=2, sort_keys=True)
        fh.write("\n")
