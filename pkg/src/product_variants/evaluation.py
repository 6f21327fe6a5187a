"""Pairwise precision/recall evaluation of predicted groups against gold labels.

A predicted within-group pair counts as a true positive when both items carry
the same gold group, as a false positive when both are labeled with different
gold groups, and is ignored when either item is unlabeled.  Pairwise recall is
measured against all gold within-group pairs among labeled items; item-level
recall is the fraction of labeled items that ended up in a predicted group
containing at least one correct gold partner.
"""

from __future__ import annotations

from collections import defaultdict
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .catalog import GoldLabel, Product
from .errors import ValidationError
from .grouping import VariantGroup

DEFAULT_PRECISION_GATE = 0.9


@dataclass(frozen=True)
class EvalCounts:
    tp: int = 0
    fp: int = 0
    fn: int = 0
    ignored_pairs: int = 0
    undefined_precision: bool = False
    undefined_recall: bool = False


@dataclass(frozen=True)
class CategoryMetrics:
    precision: float
    recall_pairwise: float
    n_labeled_pairs: int


@dataclass
class EvalReport:
    precision: float = 0.0
    recall_pairwise: float = 0.0
    recall_item: float = 0.0
    f1: float = 0.0
    per_category: dict[str, CategoryMetrics] = field(default_factory=dict)
    pct_high_precision_categories: float = 0.0
    counts: EvalCounts = field(default_factory=EvalCounts)


def _safe_div(num: float, den: float) -> float:
    return num / den if den else 0.0


def evaluate(
    groups: Sequence[VariantGroup],
    gold: Sequence[GoldLabel],
    products: Sequence[Product] | Mapping[str, Product],
    precision_gate: float = DEFAULT_PRECISION_GATE,
) -> EvalReport:
    """Score predicted groups against gold labels.

    Every gold label must reference a catalog product.  Empty denominators
    report 0 and are flagged in the counts rather than raising.
    """
    if not 0.0 <= precision_gate <= 1.0:
        raise ValidationError("precision_gate must be in [0, 1]")
    if isinstance(products, Mapping):
        products_by_id = products
    else:
        products_by_id = {p.id: p for p in products}
    gold_of: dict[str, str] = {}
    for label in gold:
        if label.product_id not in products_by_id:
            raise ValidationError(
                f"gold label references unknown product {label.product_id!r}"
            )
        gold_of[label.product_id] = label.gold_group_id

    tp = fp = ignored = 0
    tp_by_cat: dict[str, int] = defaultdict(int)
    fp_by_cat: dict[str, int] = defaultdict(int)
    items_with_partner: set[str] = set()
    for group in groups:
        members = group.member_ids
        for i in range(len(members) - 1):
            gi = gold_of.get(members[i])
            for j in range(i + 1, len(members)):
                gj = gold_of.get(members[j])
                if gi is None or gj is None:
                    ignored += 1
                    continue
                category = products_by_id[members[i]].category
                if gi == gj:
                    tp += 1
                    tp_by_cat[category] += 1
                    items_with_partner.add(members[i])
                    items_with_partner.add(members[j])
                else:
                    fp += 1
                    fp_by_cat[category] += 1

    gold_members: dict[str, list[str]] = defaultdict(list)
    for product_id, group_id in gold_of.items():
        gold_members[group_id].append(product_id)
    gold_pairs = 0
    gold_pairs_by_cat: dict[str, int] = defaultdict(int)
    for members in gold_members.values():
        n = len(members)
        gold_pairs += n * (n - 1) // 2
        by_cat: dict[str, int] = defaultdict(int)
        for product_id in members:
            by_cat[products_by_id[product_id].category] += 1
        for category, k in by_cat.items():
            gold_pairs_by_cat[category] += k * (k - 1) // 2

    precision = _safe_div(tp, tp + fp)
    recall_pairwise = _safe_div(tp, gold_pairs)
    recall_item = _safe_div(len(items_with_partner), len(gold_of))
    f1 = _safe_div(2 * precision * recall_pairwise, precision + recall_pairwise)

    per_category: dict[str, CategoryMetrics] = {}
    for category in sorted(set(tp_by_cat) | set(fp_by_cat) | set(gold_pairs_by_cat)):
        cat_tp = tp_by_cat[category]
        cat_fp = fp_by_cat[category]
        per_category[category] = CategoryMetrics(
            precision=_safe_div(cat_tp, cat_tp + cat_fp),
            recall_pairwise=_safe_div(cat_tp, gold_pairs_by_cat[category]),
            n_labeled_pairs=cat_tp + cat_fp,
        )
    gated = [m for m in per_category.values() if m.n_labeled_pairs > 0]
    pct_high = _safe_div(
        sum(1 for m in gated if m.precision >= precision_gate), len(gated)
    )

    return EvalReport(
        precision=precision,
        recall_pairwise=recall_pairwise,
        recall_item=recall_item,
        f1=f1,
        per_category=per_category,
        pct_high_precision_categories=pct_high,
        counts=EvalCounts(
            tp=tp,
            fp=fp,
            fn=gold_pairs - tp,
            ignored_pairs=ignored,
            undefined_precision=(tp + fp) == 0,
            undefined_recall=gold_pairs == 0,
        ),
    )


def _fmt_pct(value: float) -> str:
    text = f"{value * 100:.1f}".rstrip("0").rstrip(".")
    return f"{text}%"


def report_to_dict(report: EvalReport) -> dict:
    """Machine-readable form of a report."""
    return {
        "precision": report.precision,
        "recall_pairwise": report.recall_pairwise,
        "recall_item": report.recall_item,
        "f1": report.f1,
        "pct_high_precision_categories": report.pct_high_precision_categories,
        "counts": {
            "tp": report.counts.tp,
            "fp": report.counts.fp,
            "fn": report.counts.fn,
            "ignored_pairs": report.counts.ignored_pairs,
            "undefined_precision": report.counts.undefined_precision,
            "undefined_recall": report.counts.undefined_recall,
        },
        "per_category": {
            category: {
                "precision": m.precision,
                "recall_pairwise": m.recall_pairwise,
                "n_labeled_pairs": m.n_labeled_pairs,
            }
            for category, m in sorted(report.per_category.items())
        },
    }


def render_report(report: EvalReport) -> str:
    """Fixed-width table with the headline metrics plus supporting lines."""
    headers = ("Precision", "Recall", "F1 Score", "Percent of Highly Accurate Categories")
    row = (
        _fmt_pct(report.precision),
        _fmt_pct(report.recall_pairwise),
        f"{report.f1:.2f}",
        _fmt_pct(report.pct_high_precision_categories),
    )
    widths = [max(len(h), len(v)) for h, v in zip(headers, row)]
    lines = [
        "  ".join(h.ljust(w) for h, w in zip(headers, widths)).rstrip(),
        "  ".join(v.ljust(w) for v, w in zip(row, widths)).rstrip(),
        "",
        f"item-level recall: {_fmt_pct(report.recall_item)}",
        (
            f"pairs: tp={report.counts.tp} fp={report.counts.fp} "
            f"fn={report.counts.fn} ignored={report.counts.ignored_pairs}"
        ),
    ]
    return "\n".join(lines)
