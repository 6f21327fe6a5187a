"""Title-cleaning pipeline that reduces a product title to its family name.

The family name is the ordered token sequence that survives a fixed chain of
cleaning stages: tokenize, synonym standardization, removal of numbers and
measurement units, brand tokens, blacklisted tokens, category tokens, and
finally the category's variant-attribute tokens.  Two products belong to the
same family only if the surviving sequences are identical.
"""

from __future__ import annotations

import json
import re
import unicodedata
from dataclasses import dataclass, field
from pathlib import Path

from .catalog import CategoryConfig, Product
from .errors import ValidationError

_NUMERIC_RE = re.compile(r"\d+(?:\.\d+)?|\d+/\d+")

STAGE_NAMES = (
    "tokenize",
    "synonyms",
    "numbers_and_units",
    "brand",
    "blacklist",
    "category",
    "variant_attributes",
)


@dataclass(frozen=True)
class FamilyName:
    tokens: tuple[str, ...] = ()

    def __bool__(self) -> bool:
        return bool(self.tokens)

    def __str__(self) -> str:
        return " ".join(self.tokens)


@dataclass(frozen=True)
class NormalizationRules:
    synonyms: dict[str, str] = field(default_factory=dict)
    blacklist: frozenset[str] = frozenset()
    units: frozenset[str] = frozenset()
    brand_lexicon: dict[str, frozenset[str]] = field(default_factory=dict)
    category_lexicon: dict[str, frozenset[str]] = field(default_factory=dict)


def load_rules(source: str | Path | dict) -> NormalizationRules:
    """Load a rules file; all tokens are lowercased on the way in.

    Synonym targets may not themselves be synonym keys (one application per
    token must reach the canonical form).
    """
    if isinstance(source, (str, Path)):
        with open(source, encoding="utf-8") as handle:
            payload = json.load(handle)
    else:
        payload = source
    synonyms = {
        str(k).lower(): str(v).lower() for k, v in payload.get("synonyms", {}).items()
    }
    chained = [k for k, v in synonyms.items() if synonyms.get(v, v) != v]
    if chained:
        raise ValidationError(
            f"synonym targets must be canonical; chained keys: {sorted(chained)}"
        )
    return NormalizationRules(
        synonyms=synonyms,
        blacklist=frozenset(str(t).lower() for t in payload.get("blacklist", [])),
        units=frozenset(str(t).lower() for t in payload.get("units", [])),
        brand_lexicon={
            str(brand): frozenset(str(t).lower() for t in tokens)
            for brand, tokens in payload.get("brands", {}).items()
        },
        category_lexicon={
            str(cat): frozenset(str(t).lower() for t in tokens)
            for cat, tokens in payload.get("categories", {}).items()
        },
    )


def rules_to_dict(rules: NormalizationRules) -> dict:
    return {
        "synonyms": dict(sorted(rules.synonyms.items())),
        "blacklist": sorted(rules.blacklist),
        "units": sorted(rules.units),
        "brands": {b: sorted(t) for b, t in sorted(rules.brand_lexicon.items())},
        "categories": {c: sorted(t) for c, t in sorted(rules.category_lexicon.items())},
    }


def tokenize(title: str) -> list[str]:
    """Lowercase, replace every non-alphanumeric character with a separator,
    split, and drop empty tokens.

    Input is compatibility-decomposed and case-folded first, so accented
    letters keep their base letter and width/ligature variants collapse;
    combining marks are dropped rather than treated as separators.
    """
    text = unicodedata.normalize("NFKD", title).casefold()
    text = "".join(c for c in text if not unicodedata.combining(c))
    return "".join(c if c.isalnum() else " " for c in text).split()


def apply_synonyms(tokens: list[str], rules: NormalizationRules) -> list[str]:
    """Replace each token by its canonical form where a mapping exists."""
    return [rules.synonyms.get(t, t) for t in tokens]


def _canonical_set(tokens, rules: NormalizationRules) -> frozenset[str]:
    # Lexicon entries are matched in canonical form so that e.g. a plural
    # category word still removes the singular title token.
    return frozenset(rules.synonyms.get(t, t) for t in tokens)


def _is_numeric(token: str) -> bool:
    return _NUMERIC_RE.fullmatch(token) is not None


def strip_numbers_and_units(tokens: list[str], rules: NormalizationRules) -> list[str]:
    """Drop purely numeric tokens (integer, decimal, or fraction) and tokens
    in the units lexicon.  Mixed alphanumeric codes are kept; they carry
    model-number-like signal."""
    return [t for t in tokens if not _is_numeric(t) and t not in rules.units]


def brand_tokens(brand: str, rules: NormalizationRules) -> frozenset[str]:
    tokens = rules.brand_lexicon.get(brand)
    if tokens is None:
        tokens = tokenize(brand)
    return _canonical_set(tokens, rules)


def strip_brand(tokens: list[str], brand: str, rules: NormalizationRules) -> list[str]:
    drop = brand_tokens(brand, rules)
    return [t for t in tokens if t not in drop]


def strip_blacklist(tokens: list[str], rules: NormalizationRules) -> list[str]:
    drop = _canonical_set(rules.blacklist, rules)
    return [t for t in tokens if t not in drop]


def category_tokens(category: str, rules: NormalizationRules) -> frozenset[str]:
    tokens = rules.category_lexicon.get(category)
    if tokens is None:
        tokens = tokenize(category)
    return _canonical_set(tokens, rules)


def strip_category_tokens(
    tokens: list[str], category: str, rules: NormalizationRules
) -> list[str]:
    drop = category_tokens(category, rules)
    return [t for t in tokens if t not in drop]


def strip_variant_attributes(
    tokens: list[str], config: CategoryConfig | None
) -> list[str]:
    if config is None:
        return list(tokens)
    drop = config.variant_attribute_tokens
    return [t for t in tokens if t not in drop]


def family_name_trace(
    product: Product,
    rules: NormalizationRules,
    config: CategoryConfig | None = None,
) -> list[tuple[str, list[str]]]:
    """Token sequence after each cleaning stage, in stage order."""
    tokens = tokenize(product.title)
    trace = [("tokenize", tokens)]
    tokens = apply_synonyms(tokens, rules)
    trace.append(("synonyms", tokens))
    tokens = strip_numbers_and_units(tokens, rules)
    trace.append(("numbers_and_units", tokens))
    tokens = strip_brand(tokens, product.brand, rules)
    trace.append(("brand", tokens))
    tokens = strip_blacklist(tokens, rules)
    trace.append(("blacklist", tokens))
    tokens = strip_category_tokens(tokens, product.category, rules)
    trace.append(("category", tokens))
    tokens = strip_variant_attributes(tokens, config)
    trace.append(("variant_attributes", tokens))
    return trace


def extract_family_name(
    product: Product,
    rules: NormalizationRules,
    config: CategoryConfig | None = None,
) -> FamilyName:
    """Run the full cleaning chain; an all-stripped title yields an empty name."""
    tokens = apply_synonyms(tokenize(product.title), rules)
    tokens = strip_numbers_and_units(tokens, rules)
    tokens = strip_brand(tokens, product.brand, rules)
    tokens = strip_blacklist(tokens, rules)
    tokens = strip_category_tokens(tokens, product.category, rules)
    tokens = strip_variant_attributes(tokens, config)
    return FamilyName(tuple(tokens))
