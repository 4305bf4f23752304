"""Unlabeled evaluation of predicted trees against gold treebanks.

Covers corpus-level attachment score and exact match, the ratio of
outputs that needed no post-processing, attachment score grouped by the
dependent's PoS tag, and precision/recall/F1 binned by signed arc
displacement (dependent position minus head position).
"""

from __future__ import annotations

from dataclasses import dataclass
from decimal import ROUND_HALF_UP, Decimal
from typing import Sequence

from .conllu import DepTree, Treebank
from .repair import RepairLevel

ROOT_BUCKET = "root"


def fmt_pct(x: float) -> str:
    """Percentage with two decimals, ties rounding up."""
    return str(Decimal(repr(x)).quantize(Decimal("0.01"), rounding=ROUND_HALF_UP))


def fmt_score(x: float) -> str:
    """Unit-interval score with four decimals, ties rounding up."""
    return str(Decimal(repr(x)).quantize(Decimal("0.0001"), rounding=ROUND_HALF_UP))


def _check_aligned(gold: Treebank, pred: Sequence[DepTree]) -> None:
    if len(gold.sentences) != len(pred):
        raise ValueError(
            f"{gold.source_id}: {len(pred)} predictions for {len(gold.sentences)} sentences"
        )
    for i, ((sent, tree), p) in enumerate(zip(gold.sentences, pred), 1):
        if p.n != tree.n:
            name = sent.sent_id or f"sentence {i}"
            raise ValueError(f"{name}: prediction length {p.n} != gold length {tree.n}")


def uas(gold: Treebank, pred: Sequence[DepTree]) -> float:
    """Micro-averaged percentage of tokens with the correct head."""
    _check_aligned(gold, pred)
    correct = total = 0
    for (_, tree), p in zip(gold.sentences, pred):
        total += tree.n
        correct += sum(g == q for g, q in zip(tree.heads, p.heads))
    if total == 0:
        raise ValueError("empty corpus")
    return 100.0 * correct / total


def um(gold: Treebank, pred: Sequence[DepTree]) -> float:
    """Percentage of sentences whose whole head vector is correct."""
    _check_aligned(gold, pred)
    if not pred:
        raise ValueError("empty corpus")
    full = sum(tree.heads == p.heads for (_, tree), p in zip(gold.sentences, pred))
    return 100.0 * full / len(pred)


def pct_wellformed(levels: Sequence[RepairLevel]) -> float:
    """Percentage of outputs that required no post-processing."""
    if not levels:
        raise ValueError("no repair levels given")
    return 100.0 * sum(lv == RepairLevel.NP for lv in levels) / len(levels)


def uas_by_pos(gold: Treebank, pred: Sequence[DepTree]) -> dict[str, tuple[float, int]]:
    """Attachment score per bucket, keyed by the dependent's UPOS tag."""
    _check_aligned(gold, pred)
    correct: dict[str, int] = {}
    count: dict[str, int] = {}
    for (sent, tree), p in zip(gold.sentences, pred):
        for tok, g, q in zip(sent.tokens, tree.heads, p.heads):
            count[tok.upos] = count.get(tok.upos, 0) + 1
            correct[tok.upos] = correct.get(tok.upos, 0) + (g == q)
    return {
        tag: (100.0 * correct[tag] / count[tag], count[tag]) for tag in sorted(count)
    }


def displacement_fscore(
    gold: Treebank, pred: Sequence[DepTree]
) -> dict[int | str, tuple[float, float, float, int]]:
    """Per-displacement precision/recall/F1 over arcs.

    An arc's bucket is dependent minus head position; root arcs carry no
    displacement and land in their own bucket.  An arc counts as matched
    when gold and prediction agree on it exactly.  Values are
    (precision, recall, f1, gold arc count), with F1 zero when both
    precision and recall are zero.
    """
    _check_aligned(gold, pred)
    gold_n: dict[int | str, int] = {}
    pred_n: dict[int | str, int] = {}
    match_n: dict[int | str, int] = {}

    def bucket(d: int, h: int) -> int | str:
        return ROOT_BUCKET if h == 0 else d - h

    for (_, tree), p in zip(gold.sentences, pred):
        for d in range(1, tree.n + 1):
            g, q = tree.heads[d - 1], p.heads[d - 1]
            gb, qb = bucket(d, g), bucket(d, q)
            gold_n[gb] = gold_n.get(gb, 0) + 1
            pred_n[qb] = pred_n.get(qb, 0) + 1
            if g == q:
                match_n[gb] = match_n.get(gb, 0) + 1
    out: dict[int | str, tuple[float, float, float, int]] = {}
    for b in gold_n.keys() | pred_n.keys():
        m = match_n.get(b, 0)
        prec = m / pred_n[b] if b in pred_n else 0.0
        rec = m / gold_n[b] if b in gold_n else 0.0
        f1 = 2 * prec * rec / (prec + rec) if prec + rec else 0.0
        out[b] = (prec, rec, f1, gold_n.get(b, 0))
    return out


@dataclass(frozen=True)
class EvalReport:
    """Everything the evaluation computes for one (treebank, system) run."""

    uas: float
    um: float
    pct_w: float
    per_pos: dict[str, tuple[float, int]]
    per_displacement: dict[int | str, tuple[float, float, float, int]]
    repair_histogram: dict[RepairLevel, int]
    sentence_count: int
    token_count: int


def evaluate(
    gold: Treebank,
    pred: Sequence[DepTree],
    levels: Sequence[RepairLevel] | None = None,
) -> EvalReport:
    """Score a full run.  Missing levels mean nothing needed repair."""
    if levels is None:
        levels = [RepairLevel.NP] * len(pred)
    if len(levels) != len(pred):
        raise ValueError(f"{len(levels)} repair levels for {len(pred)} predictions")
    histogram = {lv: 0 for lv in RepairLevel}
    for lv in levels:
        histogram[lv] += 1
    return EvalReport(
        uas=uas(gold, pred),
        um=um(gold, pred),
        pct_w=pct_wellformed(levels),
        per_pos=uas_by_pos(gold, pred),
        per_displacement=displacement_fscore(gold, pred),
        repair_histogram=histogram,
        sentence_count=len(pred),
        token_count=sum(p.n for p in pred),
    )


def per_pos_tsv(per_pos: dict[str, tuple[float, int]]) -> str:
    """TSV table of the per-PoS buckets, tags sorted."""
    lines = ["upos\tuas\tarcs"]
    for tag in sorted(per_pos):
        score, count = per_pos[tag]
        lines.append(f"{tag}\t{fmt_pct(score)}\t{count}")
    return "\n".join(lines) + "\n"


def displacement_tsv(
    per_displacement: dict[int | str, tuple[float, float, float, int]]
) -> str:
    """TSV table of displacement buckets, ascending, root last."""
    lines = ["displacement\tprecision\trecall\tf1\tgold_arcs"]
    keys = sorted((k for k in per_displacement if isinstance(k, int)))
    if ROOT_BUCKET in per_displacement:
        keys.append(ROOT_BUCKET)
    for k in keys:
        prec, rec, f1, n_gold = per_displacement[k]
        lines.append(
            f"{k}\t{fmt_score(prec)}\t{fmt_score(rec)}\t{fmt_score(f1)}\t{n_gold}"
        )
    return "\n".join(lines) + "\n"
