"""Catalog data model and JSONL ingestion.

File formats (all UTF-8):
  catalog: one JSON object per line, keys exactly
           id, brand, category, title, model_number (all strings)
  gold:    one JSON object per line, keys product_id, gold_group_id
  configs: one JSON object mapping category ->
           {"variant_attribute_tokens": [...], "model_number_threshold": int|null}
"""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path
from typing import Iterable, Iterator

from .errors import ParseError, ValidationError

PRODUCT_FIELDS = ("id", "brand", "category", "title", "model_number")
GOLD_FIELDS = ("product_id", "gold_group_id")


@dataclass(frozen=True)
class Product:
    id: str
    brand: str
    category: str
    title: str
    model_number: str


@dataclass(frozen=True)
class GoldLabel:
    product_id: str
    gold_group_id: str


@dataclass(frozen=True)
class CategoryConfig:
    category: str
    variant_attribute_tokens: frozenset[str] = frozenset()
    model_number_threshold: int | None = None

    def __post_init__(self):
        if self.model_number_threshold is not None and self.model_number_threshold < 0:
            raise ValidationError(
                f"model_number_threshold for {self.category!r} must be >= 0"
            )


def _lines(source: str | Path | Iterable[str]) -> Iterator[str]:
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            yield from handle
    else:
        yield from source


def _iter_records(source: str | Path | Iterable[str], fields: tuple[str, ...]) -> Iterator[tuple[int, dict]]:
    """Yield (line_no, record) for each non-blank line, validating the schema."""
    for line_no, line in enumerate(_lines(source), start=1):
        if not line.strip():
            continue
        try:
            record = json.loads(line)
        except json.JSONDecodeError as exc:
            raise ParseError(f"invalid JSON ({exc.msg})", line_no) from exc
        if not isinstance(record, dict):
            raise ParseError("record is not a JSON object", line_no)
        missing = [f for f in fields if f not in record]
        if missing:
            raise ParseError(f"missing required field(s) {missing}", line_no)
        extra = [k for k in record if k not in fields]
        if extra:
            raise ParseError(f"unexpected field(s) {extra}", line_no)
        for field in fields:
            if not isinstance(record[field], str):
                raise ParseError(f"field {field!r} must be a string", line_no)
        yield line_no, record


def load_catalog(source: str | Path | Iterable[str]) -> list[Product]:
    """Load products in input order; duplicate ids and malformed lines are errors."""
    products: list[Product] = []
    seen: set[str] = set()
    for line_no, record in _iter_records(source, PRODUCT_FIELDS):
        if not record["id"]:
            raise ParseError("product id must be non-empty", line_no)
        if record["id"] in seen:
            raise ValidationError(f"duplicate product id {record['id']!r}")
        seen.add(record["id"])
        products.append(Product(**record))
    return products


def load_gold(source: str | Path | Iterable[str]) -> list[GoldLabel]:
    """Load gold labels; a product labeled with two different groups is an error.

    Unknown product ids are allowed here and checked at evaluation time.
    Exact duplicate lines collapse to a single label.
    """
    labels: list[GoldLabel] = []
    by_product: dict[str, str] = {}
    for _line_no, record in _iter_records(source, GOLD_FIELDS):
        product_id = record["product_id"]
        group_id = record["gold_group_id"]
        if product_id in by_product:
            if by_product[product_id] != group_id:
                raise ValidationError(
                    f"conflicting gold labels for product {product_id!r}: "
                    f"{by_product[product_id]!r} vs {group_id!r}"
                )
            continue
        by_product[product_id] = group_id
        labels.append(GoldLabel(product_id, group_id))
    return labels


def load_category_configs(source: str | Path | dict) -> dict[str, CategoryConfig]:
    """Load the per-category configuration map."""
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            payload = json.load(handle)
    else:
        payload = source
    if not isinstance(payload, dict):
        raise ValidationError("category config file must be a JSON object")
    configs: dict[str, CategoryConfig] = {}
    for category, entry in payload.items():
        if not isinstance(entry, dict):
            raise ValidationError(f"config for category {category!r} must be an object")
        tokens = entry.get("variant_attribute_tokens", [])
        threshold = entry.get("model_number_threshold")
        if threshold is not None and not isinstance(threshold, int):
            raise ValidationError(
                f"model_number_threshold for {category!r} must be an integer or null"
            )
        configs[category] = CategoryConfig(
            category=category,
            variant_attribute_tokens=frozenset(str(t).lower() for t in tokens if str(t)),
            model_number_threshold=threshold,
        )
    return configs


def product_to_dict(product: Product) -> dict:
    return {field: getattr(product, field) for field in PRODUCT_FIELDS}


def gold_to_dict(label: GoldLabel) -> dict:
    return {"product_id": label.product_id, "gold_group_id": label.gold_group_id}


def configs_to_dict(configs: dict[str, CategoryConfig]) -> dict:
    return {
        name: {
            "variant_attribute_tokens": sorted(cfg.variant_attribute_tokens),
            "model_number_threshold": cfg.model_number_threshold,
        }
        for name, cfg in sorted(configs.items())
    }
