"""Per-category grid search for the model-number distance threshold."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .catalog import CategoryConfig, GoldLabel, Product
from .evaluation import evaluate
from .grouping import DEFAULT_THRESHOLD, group_catalog
from .normalize import NormalizationRules

DEFAULT_GRID = tuple(range(7))


@dataclass(frozen=True)
class CurvePoint:
    precision: float
    recall_pairwise: float
    f1: float


@dataclass
class TuningResult:
    category: str
    chosen_threshold: int
    objective_curve: dict[int, CurvePoint] = field(default_factory=dict)
    untunable: bool = False


def _validate_grid(grid: Sequence[int]) -> list[int]:
    grid = list(grid)
    if not grid:
        raise ValueError("grid must be non-empty")
    if any(c < 0 for c in grid):
        raise ValueError("grid thresholds must be >= 0")
    if any(b <= a for a, b in zip(grid, grid[1:])):
        raise ValueError("grid must be strictly ascending")
    return grid


def _labeled_pair_count(gold: Sequence[GoldLabel]) -> int:
    sizes: dict[str, int] = {}
    for label in gold:
        sizes[label.gold_group_id] = sizes.get(label.gold_group_id, 0) + 1
    return sum(n * (n - 1) // 2 for n in sizes.values())


def tune_threshold(
    category: str,
    products: Sequence[Product],
    gold: Sequence[GoldLabel],
    rules: NormalizationRules,
    configs: Mapping[str, CategoryConfig] | None = None,
    grid: Sequence[int] = DEFAULT_GRID,
    default_threshold: int = DEFAULT_THRESHOLD,
) -> TuningResult:
    """Grid-search the threshold for one category, maximizing F1.

    Ties break toward the smallest threshold (smaller can only help
    precision).  A category with no labeled pair is returned untunable,
    carrying the default threshold.
    """
    grid = _validate_grid(grid)
    configs = configs or {}
    cat_products = [p for p in products if p.category == category]
    ids = {p.id for p in cat_products}
    cat_gold = [g for g in gold if g.product_id in ids]
    base = configs.get(category) or CategoryConfig(category=category)

    curve: dict[int, CurvePoint] = {}
    best_c: int | None = None
    best_f1 = -1.0
    for c in grid:
        trial = dict(configs)
        trial[category] = CategoryConfig(
            category=category,
            variant_attribute_tokens=base.variant_attribute_tokens,
            model_number_threshold=c,
        )
        groups, _ = group_catalog(cat_products, rules, trial, default_threshold=c)
        report = evaluate(groups, cat_gold, cat_products)
        curve[c] = CurvePoint(report.precision, report.recall_pairwise, report.f1)
        if report.f1 > best_f1:
            best_f1 = report.f1
            best_c = c

    if _labeled_pair_count(cat_gold) == 0:
        return TuningResult(category, default_threshold, curve, untunable=True)
    return TuningResult(category, best_c if best_c is not None else grid[0], curve)


def tune_all(
    products: Sequence[Product],
    gold: Sequence[GoldLabel],
    rules: NormalizationRules,
    configs: Mapping[str, CategoryConfig] | None = None,
    grid: Sequence[int] = DEFAULT_GRID,
    default_threshold: int = DEFAULT_THRESHOLD,
) -> dict[str, TuningResult]:
    """Tune every category present in the catalog, in sorted order."""
    categories = sorted({p.category for p in products})
    return {
        category: tune_threshold(
            category, products, gold, rules, configs, grid, default_threshold
        )
        for category in categories
    }


def results_to_dict(results: Mapping[str, TuningResult]) -> dict:
    return {
        category: {
            "threshold": result.chosen_threshold,
            "untunable": result.untunable,
            "curve": {
                str(c): {
                    "precision": point.precision,
                    "recall_pairwise": point.recall_pairwise,
                    "f1": point.f1,
                }
                for c, point in sorted(result.objective_curve.items())
            },
        }
        for category, result in sorted(results.items())
    }


def merge_into_configs(
    results: Mapping[str, TuningResult],
    configs: Mapping[str, CategoryConfig],
) -> dict[str, CategoryConfig]:
    """Copy tuned thresholds into a fresh config map (untunable ones too,
    since they carry the default)."""
    merged = dict(configs)
    for category, result in results.items():
        base = merged.get(category) or CategoryConfig(category=category)
        merged[category] = CategoryConfig(
            category=category,
            variant_attribute_tokens=base.variant_attribute_tokens,
            model_number_threshold=result.chosen_threshold,
        )
    return merged
