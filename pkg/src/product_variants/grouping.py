"""Constrained clustering of a catalog into variant groups.

Products are first blocked on the exact-match constraints (brand, category,
family name), then each block is partitioned into the connected components of
the graph whose edges are pairs of model numbers within the category's edit
distance threshold.  Components of size one are not variant groups.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterable, Mapping, Sequence

from .catalog import CategoryConfig, Product
from .editdist import levenshtein, normalize_model_number, pairwise_links
from .errors import NonNumericAttributeError, ValidationError
from .normalize import NormalizationRules, extract_family_name

logger = logging.getLogger(__name__)

DEFAULT_THRESHOLD = 2

AGGREGATE_KINDS = ("max", "min", "avg", "sum", "count")
COMPARATORS = ("<", "<=", "!=", "=", ">=", ">")

SKIP_EMPTY_FAMILY = "empty family name"


@dataclass(frozen=True)
class BlockKey:
    brand: str
    category: str
    family: tuple[str, ...]


@dataclass(frozen=True)
class SkippedProduct:
    product_id: str
    reason: str


@dataclass
class VariantGroup:
    group_id: str
    member_ids: tuple[str, ...]
    brand: str
    category: str
    family_tokens: tuple[str, ...]
    nearest_neighbor_distances: dict[str, int]


@dataclass(frozen=True)
class AggregateConstraint:
    kind: str
    attribute: str
    comparator: str
    constant: float

    def __post_init__(self):
        if self.kind not in AGGREGATE_KINDS:
            raise ValidationError(f"unknown aggregate kind {self.kind!r}")
        if self.comparator not in COMPARATORS:
            raise ValidationError(f"unknown comparator {self.comparator!r}")


class UnionFind:
    """Disjoint sets over range(n) with path halving and union by size."""

    def __init__(self, n: int):
        self.parent = list(range(n))
        self.size = [1] * n

    def find(self, x: int) -> int:
        parent = self.parent
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    def union(self, a: int, b: int) -> None:
        ra, rb = self.find(a), self.find(b)
        if ra == rb:
            return
        if self.size[ra] < self.size[rb]:
            ra, rb = rb, ra
        self.parent[rb] = ra
        self.size[ra] += self.size[rb]


def threshold_for(
    category: str,
    configs: Mapping[str, CategoryConfig],
    default_threshold: int = DEFAULT_THRESHOLD,
) -> int:
    config = configs.get(category)
    if config is not None and config.model_number_threshold is not None:
        return config.model_number_threshold
    return default_threshold


def build_blocks(
    products: Sequence[Product],
    rules: NormalizationRules,
    configs: Mapping[str, CategoryConfig],
    use_family: bool = True,
) -> tuple[dict[BlockKey, list[Product]], list[SkippedProduct]]:
    """Assign each product to its exact-match block.

    Products whose family name comes out empty are skipped (an empty family
    would spuriously block with every other empty one).  A category without a
    config entry gets an empty variant-attribute set.  With ``use_family``
    False, blocking falls back to brand and category alone (model-number-only
    mode) and nothing is skipped.
    """
    blocks: dict[BlockKey, list[Product]] = {}
    skipped: list[SkippedProduct] = []
    missing_configs: set[str] = set()
    for product in products:
        config = configs.get(product.category)
        if config is None and product.category not in missing_configs:
            missing_configs.add(product.category)
            logger.warning(
                "no category config for %r; using empty variant-attribute set",
                product.category,
            )
        if use_family:
            family = extract_family_name(product, rules, config)
            if not family:
                skipped.append(SkippedProduct(product.id, SKIP_EMPTY_FAMILY))
                continue
            key = BlockKey(product.brand, product.category, family.tokens)
        else:
            key = BlockKey(product.brand, product.category, ())
        blocks.setdefault(key, []).append(product)
    return blocks, skipped


def are_variant_candidates(
    p_i: Product,
    p_j: Product,
    rules: NormalizationRules,
    configs: Mapping[str, CategoryConfig],
    default_threshold: int = DEFAULT_THRESHOLD,
) -> bool:
    """Pairwise variant check: equal brand, category, non-empty family name,
    and model numbers within the category's threshold."""
    if p_i.brand != p_j.brand or p_i.category != p_j.category:
        return False
    config = configs.get(p_i.category)
    family_i = extract_family_name(p_i, rules, config)
    if not family_i:
        return False
    if family_i != extract_family_name(p_j, rules, config):
        return False
    c = threshold_for(p_i.category, configs, default_threshold)
    d = levenshtein(
        normalize_model_number(p_i.model_number),
        normalize_model_number(p_j.model_number),
        limit=c,
    )
    return d <= c


def cluster_block(
    block_products: Sequence[Product],
    threshold: int,
    family_tokens: tuple[str, ...] = (),
) -> list[VariantGroup]:
    """Connected components of the within-threshold model-number graph,
    keeping components of size >= 2.

    Two products whose normalized model numbers are both empty never chain.
    """
    n = len(block_products)
    if n < 2:
        return []
    keys = [normalize_model_number(p.model_number) for p in block_products]
    links = [
        (i, j, d)
        for i, j, d in pairwise_links(keys, threshold)
        if keys[i] or keys[j]
    ]
    uf = UnionFind(n)
    nearest: dict[int, int] = {}
    for i, j, d in links:
        uf.union(i, j)
        nearest[i] = min(nearest.get(i, d), d)
        nearest[j] = min(nearest.get(j, d), d)
    components: dict[int, list[int]] = {}
    for idx in range(n):
        components.setdefault(uf.find(idx), []).append(idx)
    groups = []
    for members in components.values():
        if len(members) < 2:
            continue
        member_ids = tuple(sorted(block_products[i].id for i in members))
        groups.append(
            VariantGroup(
                group_id=member_ids[0],
                member_ids=member_ids,
                brand=block_products[members[0]].brand,
                category=block_products[members[0]].category,
                family_tokens=family_tokens,
                nearest_neighbor_distances={
                    block_products[i].id: nearest[i] for i in sorted(members, key=lambda i: block_products[i].id)
                },
            )
        )
    groups.sort(key=lambda g: g.group_id)
    return groups


def _aggregate_value(
    group: VariantGroup, products_by_id: Mapping[str, Product], constraint: AggregateConstraint
) -> float:
    if constraint.kind == "count":
        return float(len(group.member_ids))
    values = []
    for member_id in group.member_ids:
        product = products_by_id[member_id]
        raw = getattr(product, constraint.attribute, None)
        if raw is None:
            raise ValidationError(
                f"product {member_id!r} has no attribute {constraint.attribute!r}"
            )
        try:
            values.append(float(raw))
        except (TypeError, ValueError):
            raise NonNumericAttributeError(member_id, constraint.attribute, raw) from None
    if constraint.kind == "max":
        return max(values)
    if constraint.kind == "min":
        return min(values)
    if constraint.kind == "sum":
        return sum(values)
    return sum(values) / len(values)


def check_aggregate_constraint(
    group: VariantGroup,
    products: Iterable[Product] | Mapping[str, Product],
    constraint: AggregateConstraint,
) -> bool:
    """Evaluate agg(member attribute values) <comparator> constant."""
    if isinstance(products, Mapping):
        products_by_id = products
    else:
        products_by_id = {p.id: p for p in products}
    value = _aggregate_value(group, products_by_id, constraint)
    c = constraint.constant
    if constraint.comparator == "<":
        return value < c
    if constraint.comparator == "<=":
        return value <= c
    if constraint.comparator == "!=":
        return value != c
    if constraint.comparator == "=":
        return value == c
    if constraint.comparator == ">=":
        return value >= c
    return value > c


def group_catalog(
    products: Sequence[Product],
    rules: NormalizationRules,
    configs: Mapping[str, CategoryConfig],
    default_threshold: int = DEFAULT_THRESHOLD,
    use_family: bool = True,
    constraints: Sequence[AggregateConstraint] = (),
) -> tuple[list[VariantGroup], list[SkippedProduct]]:
    """Block the catalog, cluster each block at its category threshold, and
    return groups sorted by group id.  Deterministic for fixed inputs.

    Groups failing any configured aggregate constraint are dropped whole.
    """
    blocks, skipped = build_blocks(products, rules, configs, use_family=use_family)
    groups: list[VariantGroup] = []
    for key, block_products in blocks.items():
        c = threshold_for(key.category, configs, default_threshold)
        groups.extend(cluster_block(block_products, c, family_tokens=key.family))
    if constraints:
        products_by_id = {p.id: p for p in products}
        groups = [
            g
            for g in groups
            if all(check_aggregate_constraint(g, products_by_id, con) for con in constraints)
        ]
    groups.sort(key=lambda g: g.group_id)
    return groups, skipped


def verify_groups(
    groups: Sequence[VariantGroup],
    products: Sequence[Product],
    rules: NormalizationRules,
    configs: Mapping[str, CategoryConfig],
    default_threshold: int = DEFAULT_THRESHOLD,
    use_family: bool = True,
) -> list[str]:
    """Re-check emitted groups against the raw inputs, independently of how
    they were produced.  Returns human-readable violation messages (empty
    list means every group checks out)."""
    violations: list[str] = []
    products_by_id = {p.id: p for p in products}
    seen: dict[str, str] = {}
    for group in groups:
        gid = group.group_id
        members = [products_by_id.get(m) for m in group.member_ids]
        if any(m is None for m in members):
            violations.append(f"group {gid}: member id not in catalog")
            continue
        if len(group.member_ids) < 2:
            violations.append(f"group {gid}: fewer than two members")
        if gid not in group.member_ids:
            violations.append(f"group {gid}: group id is not a member id")
        for member in group.member_ids:
            if member in seen:
                violations.append(
                    f"group {gid}: member {member} already in group {seen[member]}"
                )
            seen[member] = gid
        brands = {m.brand for m in members}
        categories = {m.category for m in members}
        if len(brands) > 1:
            violations.append(f"group {gid}: brands differ: {sorted(brands)}")
        if len(categories) > 1:
            violations.append(f"group {gid}: categories differ: {sorted(categories)}")
        if use_family:
            config = configs.get(members[0].category)
            families = {extract_family_name(m, rules, config) for m in members}
            if len(families) > 1:
                violations.append(f"group {gid}: family names differ")
            elif not next(iter(families)):
                violations.append(f"group {gid}: family name is empty")
        c = threshold_for(members[0].category, configs, default_threshold)
        keys = [normalize_model_number(m.model_number) for m in members]
        for i, member in enumerate(members):
            best = None
            for j, other in enumerate(members):
                if i == j or (not keys[i] and not keys[j]):
                    continue
                d = levenshtein(keys[i], keys[j])
                if best is None or d < best:
                    best = d
            if best is None or best > c:
                violations.append(
                    f"group {gid}: member {member.id} has no partner within c={c}"
                )
    return violations
