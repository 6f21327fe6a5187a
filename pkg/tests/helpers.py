"""Shared builders and independent oracles for the test suite.

The distance oracles here are deliberately written from the recursive
definition (no banding, no DP tables shared with the package) so that kernel
bugs cannot hide behind a matching implementation.
"""

from __future__ import annotations

import random
from collections import deque

from product_variants import CategoryConfig, Product
from product_variants.editdist import normalize_model_number
from product_variants.normalize import NormalizationRules, extract_family_name


def make_product(pid, brand="Brax", category="cat-a", title="", model=""):
    return Product(id=pid, brand=brand, category=category, title=title, model_number=model)


def lev_naive(a: str, b: str) -> int:
    """Plain exponential recursion; only usable for very short strings."""
    if not a:
        return len(b)
    if not b:
        return len(a)
    if a[0] == b[0]:
        return lev_naive(a[1:], b[1:])
    return 1 + min(
        lev_naive(a[1:], b),
        lev_naive(a, b[1:]),
        lev_naive(a[1:], b[1:]),
    )


def lev_recursive(a: str, b: str) -> int:
    """Memoized top-down recursion on the textbook definition."""
    memo: dict[tuple[int, int], int] = {}

    def rec(i: int, j: int) -> int:
        if i == len(a):
            return len(b) - j
        if j == len(b):
            return len(a) - i
        key = (i, j)
        cached = memo.get(key)
        if cached is not None:
            return cached
        if a[i] == b[j]:
            value = rec(i + 1, j + 1)
        else:
            value = 1 + min(rec(i + 1, j), rec(i, j + 1), rec(i + 1, j + 1))
        memo[key] = value
        return value

    return rec(0, 0)


def random_catalog(rnd: random.Random, max_products: int = 50):
    """A small catalog with heavy brand/category/family/model collisions."""
    n = rnd.randint(0, max_products)
    brands = ["Acme", "Bolt"]
    categories = ["cat-a", "cat-b"]
    family_words = ["alpha", "beta", "gamma"]
    variant_words = {"cat-a": ["red", "blue"], "cat-b": ["zinc", "jade"]}
    rules = NormalizationRules(blacklist=frozenset({"new"}), units=frozenset({"in"}))
    products = []
    for i in range(n):
        brand = rnd.choice(brands)
        category = rnd.choice(categories)
        parts = [brand, rnd.choice(family_words)]
        if rnd.random() < 0.3:
            parts.append(str(rnd.randint(1, 40)))
        if rnd.random() < 0.5:
            parts.append(rnd.choice(variant_words[category]))
        if rnd.random() < 0.2:
            parts.append("new")
        if rnd.random() < 0.1:
            parts = []
        model = "".join(rnd.choice("AB12") for _ in range(rnd.randint(0, 4)))
        products.append(Product(f"p{i:03d}", brand, category, " ".join(parts), model))
    configs = {
        "cat-a": CategoryConfig(
            "cat-a", frozenset(variant_words["cat-a"]), rnd.choice([None, 1, 2])
        ),
        "cat-b": CategoryConfig("cat-b", frozenset(variant_words["cat-b"]), None),
    }
    return products, rules, configs, rnd.randint(0, 3)


def brute_force_groups(products, rules, configs, default_threshold):
    """Independent grouping oracle: enumerate every pair, build the constraint
    graph, BFS the connected components, keep those of size >= 2."""
    families = {
        p.id: extract_family_name(p, rules, configs.get(p.category)) for p in products
    }
    keys = {p.id: normalize_model_number(p.model_number) for p in products}
    adjacency: dict[str, set[str]] = {p.id: set() for p in products}
    for i in range(len(products)):
        for j in range(i + 1, len(products)):
            a, b = products[i], products[j]
            if a.brand != b.brand or a.category != b.category:
                continue
            if not families[a.id] or families[a.id] != families[b.id]:
                continue
            if not keys[a.id] and not keys[b.id]:
                continue
            config = configs.get(a.category)
            c = default_threshold
            if config is not None and config.model_number_threshold is not None:
                c = config.model_number_threshold
            if lev_recursive(keys[a.id], keys[b.id]) <= c:
                adjacency[a.id].add(b.id)
                adjacency[b.id].add(a.id)

    seen: set[str] = set()
    groups: dict[str, tuple[str, ...]] = {}
    nearest: dict[str, dict[str, int]] = {}
    for start in adjacency:
        if start in seen or not adjacency[start]:
            continue
        component = []
        queue = deque([start])
        seen.add(start)
        while queue:
            node = queue.popleft()
            component.append(node)
            for peer in adjacency[node]:
                if peer not in seen:
                    seen.add(peer)
                    queue.append(peer)
        members = tuple(sorted(component))
        groups[members[0]] = members
        nearest[members[0]] = {
            m: min(
                lev_recursive(keys[m], keys[other])
                for other in members
                if other != m and (keys[m] or keys[other])
            )
            for m in members
        }
    return groups, nearest


def groups_as_dict(groups):
    return {g.group_id: g.member_ids for g in groups}
