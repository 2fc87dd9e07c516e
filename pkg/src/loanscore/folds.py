"""Stratified fold construction and the leakage-free score-generation protocol."""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import scorehead
from .util import LeakageError, ValidationError, fmt_float, rng_stream


@dataclass
class FoldPlan:
    k: int
    seed: int
    assignment: dict  # id -> fold index in [0, k)

    def fold_ids(self, f):
        return [i for i, fi in self.assignment.items() if fi == f]

    def train_ids(self, f):
        return [i for i, fi in self.assignment.items() if fi != f]


@dataclass
class ScoredColumn:
    scores: dict  # id -> (score, producing_fold)
    fold_train_ids: dict = field(default_factory=dict)  # fold -> frozenset
    fold_configs: dict = field(default_factory=dict)  # fold -> ScoreHeadConfig

    def values_by_id(self):
        return {i: s for i, (s, _) in self.scores.items()}


def make_folds(labels, k, seed):
    """Within each class, shuffle ids with a seeded RNG and deal round-robin.

    `labels` is an ordered id -> binary label mapping. Guarantees per-class
    fold sizes differing by at most 1.
    """
    if k < 2:
        raise ValidationError("k must be >= 2", code="BAD_K")
    by_class = {}
    for rid, y in labels.items():
        by_class.setdefault(int(y), []).append(rid)
    if len(by_class) < 2:
        raise ValidationError("both classes must be present",
                              code="INSUFFICIENT_CLASS")
    for cls, members in sorted(by_class.items()):
        if len(members) < k:
            raise ValidationError(
                f"class {cls} has {len(members)} members, fewer than k={k}",
                code="INSUFFICIENT_CLASS")
    rng = rng_stream(seed, "folds")
    assignment = {}
    for cls in sorted(by_class):
        members = list(by_class[cls])
        rng.shuffle(members)
        for pos, rid in enumerate(members):
            assignment[rid] = pos % k
    # restore dataset order for deterministic iteration
    assignment = {rid: assignment[rid] for rid in labels}
    return FoldPlan(k=k, seed=seed, assignment=assignment)


def generate_leakage_free_scores(descriptions, labels, plan, encoder, seed,
                                 grid=None):
    """Out-of-fold text scores following the five-step fold protocol.

    For each fold f the architecture search (with its internal stratified
    70/30 split) runs on the rows NOT in f, and the winning refit model
    scores exactly the rows in f. `encoder` maps (id, text) -> vector.
    """
    encodings = {rid: encoder(rid, text) for rid, text in descriptions.items()}
    missing = [i for i in plan.assignment if i not in encodings]
    if missing:
        raise ValidationError(f"encoder does not cover ids {missing[:5]}",
                              code="UNKNOWN_ID")
    column = ScoredColumn(scores={})
    for f in range(plan.k):
        train_ids = plan.train_ids(f)
        heldout = plan.fold_ids(f)
        try:
            config, head = scorehead.select_architecture(
                encodings, labels, train_ids,
                seed=rng_stream(seed, "fold", f).integers(2**63), grid=grid)
        except Exception as exc:
            raise type(exc)(f"fold {f}: {exc}")
        preds = scorehead.score(head, encodings, heldout)
        for rid, p in zip(heldout, preds):
            column.scores[rid] = (float(p), f)
        column.fold_train_ids[f] = frozenset(head.train_provenance)
        column.fold_configs[f] = config
    return column


def assert_no_leakage(column, plan):
    """Verify the scored-column invariant id by id; returns all violations.

    Each id must have been scored by its own fold's model, and that model's
    training provenance (when recorded) must not contain the id.
    """
    if set(column.scores) != set(plan.assignment):
        raise ValidationError("scored column and plan cover different ids",
                              code="ID_MISMATCH")
    violations = []
    for rid, (_, producing_fold) in column.scores.items():
        own_fold = plan.assignment[rid]
        if producing_fold != own_fold:
            violations.append(
                (rid, f"scored by fold {producing_fold} model, belongs to fold {own_fold}"))
            continue
        prov = column.fold_train_ids.get(producing_fold)
        if prov is not None and rid in prov:
            violations.append(
                (rid, f"fold {producing_fold} model trained on its own held-out id"))
    return violations


def require_no_leakage(column, plan):
    violations = assert_no_leakage(column, plan)
    if violations:
        raise LeakageError(violations)


def write_fold_plan(plan, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id,fold\n")
        for rid, f in plan.assignment.items():
            fh.write(f"{rid},{f}\n")


def read_fold_plan(path, k, seed):
    assignment = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "id,fold":
            raise ValidationError("bad fold plan header", code="BAD_HEADER")
        for line in fh:
            rid, f = line.rstrip("\n").split(",")
            assignment[rid] = int(f)
    return FoldPlan(k=k, seed=seed, assignment=assignment)


def write_scored_column(column, path):
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("id,score,producing_fold\n")
        for rid, (s, f) in column.scores.items():
            fh.write(f"{rid},{fmt_float(s)},{f}\n")


def read_scored_column(path):
    scores = {}
    with open(path, "r", encoding="utf-8") as fh:
        header = fh.readline().rstrip("\n")
        if header != "id,score,producing_fold":
            raise ValidationError("bad scored column header", code="BAD_HEADER")
        for line in fh:
            rid, s, f = line.rstrip("\n").split(",")
            scores[rid] = (float(s), int(f))
    return ScoredColumn(scores=scores)
