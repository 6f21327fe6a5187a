"""Seeded synthetic catalog generator with gold labels.

Produces desk-scale catalogs whose variant families are correct by
construction, so the full pipeline can be verified end to end without a
hand-labeled dataset.  Randomness comes from numpy's PCG64 generator (a
named, portable algorithm with published constants), so a fixed seed yields
identical output on every platform.

Construction guarantees, enforced by explicit distance checks during
generation:
  * family token sequences are unique within (brand, category);
  * consecutive sibling model numbers differ by exactly the sampled edit
    count (1-3), so a family chains at a threshold >= its largest step;
  * distractors share a family's block but sit at least
    ``cross_family_model_gap`` edits from every product already in it;
  * stems of different families in a category are at least the gap apart,
    and every second family reuses its brand sibling's stem mutated by
    exactly the gap (the pairs that make model-number-only grouping
    collapse when the gap is small).

A spec is *separable* when the gap exceeds the largest suffix edit count;
inseparable specs are flagged, not rejected, since degraded output is useful
for measuring how precision falls apart.
"""

from __future__ import annotations

import json
import logging
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np

from .catalog import CategoryConfig, GoldLabel, Product
from .editdist import levenshtein
from .errors import ValidationError
from .normalize import NormalizationRules

logger = logging.getLogger(__name__)

MODEL_ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789"
_CONSONANTS = "bcdfghklmnprstvz"
_VOWELS = "aeiou"

UNIT_TOKENS = ("cm", "ft", "gal", "in", "lb", "mm", "oz", "qt")
UNIT_SYNONYMS = {
    "inch": "in",
    "inches": "in",
    "foot": "ft",
    "feet": "ft",
    "ounce": "oz",
    "ounces": "oz",
    "pound": "lb",
    "pounds": "lb",
    "gallon": "gal",
    "quart": "qt",
}
BLACKLIST_TOKENS = ("classic", "deluxe", "edition", "new", "premium", "pro", "series")

DEFAULT_VARIANT_VOCAB = (
    "black", "blue", "brass", "bronze", "chrome", "copper", "espresso",
    "gloss", "gold", "gray", "green", "ivory", "maple", "matte", "nickel",
    "oak", "pewter", "red", "satin", "walnut", "white",
)

_MAX_TRIES = 500


@dataclass
class GeneratorSpec:
    seed: int = 0
    n_categories: int = 3
    families_per_category: int = 20
    variants_per_family: dict[int, float] = field(
        default_factory=lambda: {2: 0.3, 3: 0.4, 4: 0.3}
    )
    variant_vocab: tuple[str, ...] = DEFAULT_VARIANT_VOCAB
    model_stem_length: int = 8
    suffix_edit_ops: dict[int, float] = field(default_factory=lambda: {1: 0.5, 2: 0.5})
    distractor_rate: float = 0.0
    cross_family_model_gap: int = 6

    def __post_init__(self):
        if self.n_categories < 1 or self.families_per_category < 1:
            raise ValidationError("need at least one category and one family")
        if self.model_stem_length < 4:
            raise ValidationError("model_stem_length must be >= 4")
        if not 0.0 <= self.distractor_rate <= 1.0:
            raise ValidationError("distractor_rate must be in [0, 1]")
        if self.cross_family_model_gap < 1:
            raise ValidationError("cross_family_model_gap must be >= 1")
        _check_distribution(self.variants_per_family, range(1, 9), "variants_per_family")
        _check_distribution(self.suffix_edit_ops, range(1, 4), "suffix_edit_ops")
        if len(self.variant_vocab) < max(self.variants_per_family):
            raise ValidationError(
                "variant_vocab must have at least as many tokens as the largest family"
            )

    @property
    def max_suffix_edits(self) -> int:
        return max(k for k, w in self.suffix_edit_ops.items() if w > 0)

    @property
    def separable(self) -> bool:
        return self.cross_family_model_gap > self.max_suffix_edits

    @classmethod
    def from_dict(cls, payload: dict) -> "GeneratorSpec":
        kwargs = dict(payload)
        for key in ("variants_per_family", "suffix_edit_ops"):
            if key in kwargs:
                kwargs[key] = {int(k): float(v) for k, v in kwargs[key].items()}
        if kwargs.get("variant_vocab") is None:
            kwargs.pop("variant_vocab", None)
        else:
            kwargs["variant_vocab"] = tuple(kwargs["variant_vocab"])
        unknown = set(kwargs) - set(cls.__dataclass_fields__)
        if unknown:
            raise ValidationError(f"unknown generator spec field(s): {sorted(unknown)}")
        return cls(**kwargs)

    @classmethod
    def from_file(cls, path: str | Path) -> "GeneratorSpec":
        with open(path, encoding="utf-8") as handle:
            return cls.from_dict(json.load(handle))

    def to_dict(self) -> dict:
        return {
            "seed": self.seed,
            "n_categories": self.n_categories,
            "families_per_category": self.families_per_category,
            "variants_per_family": {str(k): v for k, v in sorted(self.variants_per_family.items())},
            "variant_vocab": list(self.variant_vocab),
            "model_stem_length": self.model_stem_length,
            "suffix_edit_ops": {str(k): v for k, v in sorted(self.suffix_edit_ops.items())},
            "distractor_rate": self.distractor_rate,
            "cross_family_model_gap": self.cross_family_model_gap,
        }


@dataclass
class GeneratedData:
    products: list[Product]
    gold: list[GoldLabel]
    rules: NormalizationRules
    configs: dict[str, CategoryConfig]


def _check_distribution(dist: dict[int, float], allowed: range, name: str) -> None:
    if not dist:
        raise ValidationError(f"{name} must be non-empty")
    if any(k not in allowed for k in dist):
        raise ValidationError(
            f"{name} keys must lie in [{allowed.start}, {allowed.stop - 1}]"
        )
    if any(w < 0 for w in dist.values()) or sum(dist.values()) <= 0:
        raise ValidationError(f"{name} weights must be non-negative with positive sum")


def _pick(rng: np.random.Generator, dist: dict[int, float]) -> int:
    keys = sorted(k for k, w in dist.items() if w > 0)
    weights = np.array([dist[k] for k in keys], dtype=float)
    return int(keys[rng.choice(len(keys), p=weights / weights.sum())])


def _word(rng: np.random.Generator) -> str:
    n = 2 + int(rng.integers(0, 2))
    return "".join(
        _CONSONANTS[rng.integers(0, len(_CONSONANTS))] + _VOWELS[rng.integers(0, len(_VOWELS))]
        for _ in range(n)
    )


def _fresh_word(rng: np.random.Generator, used: set[str], reserved: frozenset[str]) -> str:
    for _ in range(_MAX_TRIES):
        word = _word(rng)
        if word not in used and word not in reserved:
            used.add(word)
            used.add(word + "s")
            return word
    raise RuntimeError("word pool exhausted; increase syllable space")


def _random_chars(rng: np.random.Generator, n: int) -> str:
    return "".join(MODEL_ALPHABET[rng.integers(0, len(MODEL_ALPHABET))] for _ in range(n))


def _mutate(rng: np.random.Generator, s: str, n_ops: int, max_len: int = 64) -> str:
    chars = list(s)
    for _ in range(n_ops):
        ops = ["sub"] if chars else []
        if len(chars) < max_len:
            ops.append("ins")
        if len(chars) > 1:
            ops.append("del")
        op = ops[rng.integers(0, len(ops))]
        if op == "sub":
            pos = int(rng.integers(0, len(chars)))
            old = chars[pos]
            new = old
            while new == old:
                new = MODEL_ALPHABET[rng.integers(0, len(MODEL_ALPHABET))]
            chars[pos] = new
        elif op == "ins":
            pos = int(rng.integers(0, len(chars) + 1))
            chars.insert(pos, MODEL_ALPHABET[rng.integers(0, len(MODEL_ALPHABET))])
        else:
            chars.pop(int(rng.integers(0, len(chars))))
    return "".join(chars)


def _mutate_to_distance(
    rng: np.random.Generator, base: str, target_distance: int, max_len: int = 64
) -> str:
    """Random edits verified to land exactly ``target_distance`` away."""
    for _ in range(_MAX_TRIES):
        cand = _mutate(rng, base, target_distance, max_len)
        if levenshtein(cand, base) == target_distance:
            return cand
    raise RuntimeError(f"could not place a string {target_distance} edits from {base!r}")


def _fresh_stem(
    rng: np.random.Generator, length: int, existing: list[str], gap: int
) -> str:
    # In a crowded category stems of the requested length may not fit the
    # gap; grow them a little rather than failing (length is a minimum).
    for extra in range(0, 6):
        for _ in range(_MAX_TRIES):
            stem = _random_chars(rng, 2) + "-" + _random_chars(rng, length - 3 + extra)
            if all(levenshtein(stem, other, limit=gap - 1) >= gap for other in existing):
                return stem
    raise RuntimeError("could not place a stem far enough from existing stems")


def _twin_stem(
    rng: np.random.Generator, base: str, existing: list[str], gap: int
) -> str:
    """A stem exactly ``gap`` edits from ``base`` and >= gap from the rest."""
    for _ in range(_MAX_TRIES):
        cand = _mutate(rng, base, gap)
        if levenshtein(cand, base) != gap:
            continue
        if all(
            other == base or levenshtein(cand, other, limit=gap - 1) >= gap
            for other in existing
        ):
            return cand
    raise RuntimeError("could not place a twin stem")


def _size_text(rng: np.random.Generator) -> str:
    kind = int(rng.integers(0, 3))
    if kind == 0:
        return str(int(rng.integers(2, 60)))
    if kind == 1:
        return f"{int(rng.integers(2, 60))}.{int(rng.integers(1, 10))}"
    return f"{int(rng.integers(1, 8))}/{int(rng.integers(2, 9))}"


def _unit_text(rng: np.random.Generator, unit: str) -> str:
    forms = [unit] + sorted(k for k, v in UNIT_SYNONYMS.items() if v == unit)
    return forms[rng.integers(0, len(forms))]


def _title(
    rng: np.random.Generator,
    brand_word: str,
    family_words: tuple[str, ...],
    noun: str,
    variant: str,
) -> str:
    parts = []
    if rng.random() < 0.3:
        parts.append(BLACKLIST_TOKENS[rng.integers(0, len(BLACKLIST_TOKENS))].title())
    parts.append(brand_word.title())
    parts.extend(w.title() for w in family_words)
    unit = UNIT_TOKENS[rng.integers(0, len(UNIT_TOKENS))]
    parts.append(_size_text(rng))
    parts.append(f"{_unit_text(rng, unit)}.")
    noun_form = noun + "s" if rng.random() < 0.5 else noun
    parts.append(noun_form.title())
    parts.append("in")
    parts.append(variant.title())
    return " ".join(parts)


def generate(spec: GeneratorSpec) -> GeneratedData:
    """Build (catalog, gold labels, rules, category configs) for a spec."""
    if not spec.separable:
        logger.info(
            "generator spec is inseparable (gap %d <= max suffix edits %d)",
            spec.cross_family_model_gap,
            spec.max_suffix_edits,
        )
    rng = np.random.Generator(np.random.PCG64(spec.seed))
    gap = spec.cross_family_model_gap

    reserved = frozenset(
        set(spec.variant_vocab)
        | set(BLACKLIST_TOKENS)
        | set(UNIT_TOKENS)
        | set(UNIT_SYNONYMS)
        | {"in"}
    )
    used_words: set[str] = set()

    synonyms = dict(UNIT_SYNONYMS)
    brand_lexicon: dict[str, frozenset[str]] = {}
    category_lexicon: dict[str, frozenset[str]] = {}
    configs: dict[str, CategoryConfig] = {}
    products: list[Product] = []
    gold: list[GoldLabel] = []
    product_seq = 0
    distractor_seq = 0

    for cat_idx in range(spec.n_categories):
        category = f"category-{cat_idx:02d}"
        noun = _fresh_word(rng, used_words, reserved)
        category_lexicon[category] = frozenset({noun})
        synonyms[noun + "s"] = noun

        vocab_size = min(len(spec.variant_vocab), max(8, max(spec.variants_per_family)))
        vocab_idx = rng.choice(len(spec.variant_vocab), size=vocab_size, replace=False)
        cat_variants = tuple(spec.variant_vocab[i] for i in sorted(vocab_idx))
        configs[category] = CategoryConfig(
            category=category, variant_attribute_tokens=frozenset(cat_variants)
        )

        n_brands = max(1, spec.families_per_category // 4)
        brand_words = [_fresh_word(rng, used_words, reserved) for _ in range(n_brands)]
        brands = [w.title() for w in brand_words]
        for word, brand in zip(brand_words, brands):
            brand_lexicon[brand] = frozenset({word})

        family_tokens_seen: set[tuple[str, str, tuple[str, ...]]] = set()
        stems: list[str] = []
        category_real_products = 0
        blocks: list[dict] = []

        for fam_idx in range(spec.families_per_category):
            brand_pos = (fam_idx // 2) % n_brands
            brand_word = brand_words[brand_pos]
            brand = brands[brand_pos]

            while True:
                n_words = 2 + int(rng.integers(0, 2))
                family_words = tuple(
                    _fresh_word(rng, used_words, reserved) for _ in range(n_words)
                )
                if (brand, category, family_words) not in family_tokens_seen:
                    family_tokens_seen.add((brand, category, family_words))
                    break

            # Every second family is a "twin": same brand, stem exactly the
            # gap away, and the same starting suffix.  With a small gap these
            # are the pairs only the family-name constraint can keep apart.
            twin_of = fam_idx - 1 if fam_idx % 2 == 1 else None
            if twin_of is not None and (twin_of // 2) % n_brands == brand_pos:
                stem = _twin_stem(rng, stems[twin_of], stems, gap)
                suffix = blocks[twin_of]["suffix0"]
            else:
                stem = _fresh_stem(rng, spec.model_stem_length, stems, gap)
                suffix = _random_chars(rng, 2)
            stems.append(stem)

            n_variants = _pick(rng, spec.variants_per_family)
            variant_idx = rng.choice(len(cat_variants), size=n_variants, replace=False)
            family_variants = [cat_variants[i] for i in variant_idx]

            gold_id = f"g{cat_idx:02d}.{fam_idx:04d}"
            model = stem + suffix
            models: list[str] = []
            for v_idx in range(n_variants):
                if v_idx > 0:
                    step = _pick(rng, spec.suffix_edit_ops)
                    prev = model
                    for _ in range(_MAX_TRIES):
                        cand_suffix = _mutate(rng, suffix, step, max_len=5)
                        if levenshtein(stem + cand_suffix, prev) == step:
                            suffix = cand_suffix
                            model = stem + suffix
                            break
                    else:
                        raise RuntimeError("could not place a sibling model number")
                product_seq += 1
                pid = f"p{product_seq:06d}"
                products.append(
                    Product(
                        id=pid,
                        brand=brand,
                        category=category,
                        title=_title(rng, brand_word, family_words, noun, family_variants[v_idx]),
                        model_number=model,
                    )
                )
                gold.append(GoldLabel(pid, gold_id))
                models.append(model)
                category_real_products += 1
            blocks.append(
                {
                    "brand": brand,
                    "brand_word": brand_word,
                    "family_words": family_words,
                    "models": models,
                    "suffix0": models[0][len(stem):],
                }
            )

        n_distractors = int(round(spec.distractor_rate * category_real_products))
        for _ in range(n_distractors):
            block = blocks[rng.integers(0, len(blocks))]
            target = block["models"][rng.integers(0, len(block["models"]))]
            for _ in range(_MAX_TRIES):
                cand = _mutate(rng, target, gap)
                if all(
                    levenshtein(cand, m, limit=gap - 1) >= gap for m in block["models"]
                ):
                    break
            else:
                raise RuntimeError("could not place a distractor model number")
            block["models"].append(cand)
            distractor_seq += 1
            product_seq += 1
            pid = f"p{product_seq:06d}"
            variant = cat_variants[rng.integers(0, len(cat_variants))]
            products.append(
                Product(
                    id=pid,
                    brand=block["brand"],
                    category=category,
                    title=_title(rng, block["brand_word"], block["family_words"], noun, variant),
                    model_number=cand,
                )
            )
            gold.append(GoldLabel(pid, f"gd.{distractor_seq:05d}"))

    rules = NormalizationRules(
        synonyms=synonyms,
        blacklist=frozenset(BLACKLIST_TOKENS),
        units=frozenset(UNIT_TOKENS),
        brand_lexicon=brand_lexicon,
        category_lexicon=category_lexicon,
    )
    return GeneratedData(products=products, gold=gold, rules=rules, configs=configs)
