"""Ingestion, cleaning rules, and the canonical feature table."""

import numpy as np
import pytest

from loanscore import data
from loanscore.util import ValidationError


def test_clean_description_strips_stamp_and_entities():
    raw = "Borrower added on 03/15/2012 > I need &amp; want   a loan"
    assert data.clean_description(raw) == "I need & want a loan"


def test_clean_description_multiple_stamps_and_two_digit_year():
    raw = ("Borrower added on 03/15/12 > first part "
           "Borrower added on 04/01/2012 > second part")
    assert data.clean_description(raw) == "first part second part"


def test_clean_description_rejects_empty_and_boilerplate():
    assert data.clean_description("") is data.REJECT
    assert data.clean_description("   ") is data.REJECT
    assert data.clean_description(None) is data.REJECT
    assert data.clean_description(
        "Tell your story. What is your loan for?") is data.REJECT
    # substring occurrences are kept
    kept = data.clean_description(
        "Tell your story. What is your loan for? I need a car.")
    assert kept is not data.REJECT


def test_derive_fico_midpoint():
    assert data.derive_fico(660, 664) == 662.0
    assert data.derive_fico("700", "704") == 702.0
    with pytest.raises(ValidationError):
        data.derive_fico(200, 300)
    with pytest.raises(ValidationError):
        data.derive_fico(700, 660)


def test_merge_home_ownership():
    assert data.merge_home_ownership("NONE") == "OTHER"
    assert data.merge_home_ownership("ANY") == "OTHER"
    assert data.merge_home_ownership("other") == "OTHER"
    assert data.merge_home_ownership("RENT") == "RENT"
    with pytest.raises(ValidationError):
        data.merge_home_ownership("CASTLE")


HEADER = ("id,loan_status,annual_inc,dti,loan_amnt,fico_range_low,"
          "fico_range_high,emp_length,purpose,home_ownership,addr_state,desc")


def _row(rid, status="Fully Paid", desc="I want to pay off my cards.",
         dti="12.5"):
    return (f"{rid},{status},50000,{dti},10000,700,704,3 years,"
            f"credit_card,RENT,CA,{desc}")


def _write_csv(tmp_path, rows):
    p = tmp_path / "raw.csv"
    p.write_text("\n".join([HEADER] + rows) + "\n")
    return p


def test_ingest_keeps_resolved_rows_and_counts_drops(tmp_path):
    rows = [
        _row("a"),
        _row("b", status="Charged Off"),
        _row("c", status="Current"),  # unresolved
        _row("d", desc=""),  # empty description
        _row("e", dti=""),  # missing quantitative, no fallback columns
    ]
    result = data.ingest_csv(_write_csv(tmp_path, rows))
    assert [r.id for r in result.records] == ["a", "b"]
    assert result.records[0].label == 0
    assert result.records[1].label == 1
    assert result.drop_counts == {"unresolved_status": 1,
                                  "missing_quantitative": 1,
                                  "empty_desc": 1}


def test_ingest_duplicate_id_raises(tmp_path):
    p = _write_csv(tmp_path, [_row("a"), _row("a")])
    with pytest.raises(ValidationError):
        data.ingest_csv(p)


def test_ingest_bad_state_raises(tmp_path):
    row = _row("a").replace(",CA,", ",XX,")
    with pytest.raises(ValidationError):
        data.ingest_csv(_write_csv(tmp_path, [row]))


def test_ingest_dti_fallback_from_monthly_columns(tmp_path):
    header = HEADER + ",monthly_debt,monthly_inc"
    rows = [_row("a", dti="") + ",500,4000"]
    p = tmp_path / "raw.csv"
    p.write_text("\n".join([header] + rows) + "\n")
    result = data.ingest_csv(p)
    assert result.records[0].dti_n == pytest.approx(12.5)


def _records():
    base = dict(revenue=50000.0, dti_n=12.0, loan_amnt=10000.0, fico_n=702.0,
                emp_length="3 years", home_ownership="RENT", addr_state="CA",
                desc="text")
    return [
        data.LoanRecord(id="a", purpose="car", label=0, **base),
        data.LoanRecord(id="b", purpose="moving", label=1, **base),
        data.LoanRecord(id="c", purpose="car", label=0, **base),
    ]


def test_feature_table_layout_and_one_hot_sums():
    table = data.build_feature_table(_records())
    assert table.columns[:4] == ["revenue", "dti_n", "loan_amnt", "fico_n"]
    # one-hot blocks only contain levels present in the data
    assert "purpose=car" in table.columns
    assert "purpose=moving" in table.columns
    assert "purpose=wedding" not in table.columns
    j = table.column_index("purpose=car")
    assert table.X[:, j].sum() == 2.0
    # each categorical block sums to 1 per row
    for cat in data.CATEGORICALS:
        cols = [i for i, c in enumerate(table.columns)
                if c.startswith(f"{cat}=")]
        np.testing.assert_array_equal(table.X[:, cols].sum(axis=1),
                                      np.ones(3))


def test_feature_table_select_and_extra_column():
    table = data.build_feature_table(_records())
    sub = table.select(["revenue", "fico_n"])
    assert sub.columns == ["revenue", "fico_n"]
    assert sub.X.shape == (3, 2)
    extended = table.with_extra("score", {"a": 0.1, "b": 0.2, "c": 0.3})
    assert extended.columns[-1] == "score"
    np.testing.assert_array_equal(extended.X[:, -1], [0.1, 0.2, 0.3])
    with pytest.raises(ValidationError):
        table.with_extra("score", {"a": 0.1})  # misaligned


def test_feature_table_round_trip(tmp_path):
    table = data.build_feature_table(_records())
    path = tmp_path / "t.csv"
    data.write_feature_table(table, path)
    clone = data.read_feature_table(path)
    assert clone.ids == table.ids
    assert clone.columns == table.columns
    np.testing.assert_array_equal(clone.X, table.X)
    np.testing.assert_array_equal(clone.labels, table.labels)
