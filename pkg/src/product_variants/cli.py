"""Command-line entry point: gen, group, tune, eval, explain.

All outputs are written atomically (temp file + rename) into the --out
directory, and every command is deterministic for fixed inputs and flags.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import tempfile
from pathlib import Path

from . import catalog as catalog_mod
from . import evaluation, grouping, normalize, synthgen, tuning
from .editdist import normalize_model_number
from .errors import VariantError

GROUPS_FILE = "groups.jsonl"
SKIPPED_FILE = "skipped.jsonl"
REPORT_FILE = "report.json"
TUNING_FILE = "tuning.json"
TUNED_CONFIGS_FILE = "configs.tuned.json"


def _atomic_write(path: Path, text: str) -> None:
    path.parent.mkdir(parents=True, exist_ok=True)
    fd, tmp = tempfile.mkstemp(dir=path.parent, prefix=f".{path.name}.")
    try:
        with os.fdopen(fd, "w", encoding="utf-8") as handle:
            handle.write(text)
        os.replace(tmp, path)
    except BaseException:
        if os.path.exists(tmp):
            os.unlink(tmp)
        raise


def _write_jsonl(path: Path, rows) -> None:
    _atomic_write(path, "".join(json.dumps(row, sort_keys=True) + "\n" for row in rows))


def _write_json(path: Path, payload) -> None:
    _atomic_write(path, json.dumps(payload, indent=2, sort_keys=True) + "\n")


def _require(path: str, what: str) -> Path:
    p = Path(path)
    if not p.exists():
        raise VariantError(f"{what} file not found: {path}")
    return p


def _csv_ints(text: str) -> list[int]:
    try:
        return [int(part) for part in text.split(",") if part.strip() != ""]
    except ValueError:
        raise argparse.ArgumentTypeError(f"not a comma-separated integer list: {text!r}")


def _load_inputs(args, with_gold: bool = False):
    products = catalog_mod.load_catalog(_require(args.catalog, "catalog"))
    rules = normalize.load_rules(_require(args.rules, "rules"))
    configs = catalog_mod.load_category_configs(_require(args.configs, "configs"))
    if with_gold:
        gold = catalog_mod.load_gold(_require(args.gold, "gold"))
        return products, rules, configs, gold
    return products, rules, configs


def _group_rows(groups):
    for g in groups:
        yield {
            "group_id": g.group_id,
            "member_ids": list(g.member_ids),
            "brand": g.brand,
            "category": g.category,
            "family_tokens": list(g.family_tokens),
            "nearest_neighbor_distances": g.nearest_neighbor_distances,
        }


def _cmd_gen(args) -> int:
    spec = synthgen.GeneratorSpec.from_file(_require(args.spec, "generator spec"))
    if args.seed is not None:
        spec.seed = args.seed
    data = synthgen.generate(spec)
    out = Path(args.out)
    _write_jsonl(out / "catalog.jsonl", (catalog_mod.product_to_dict(p) for p in data.products))
    _write_jsonl(out / "gold.jsonl", (catalog_mod.gold_to_dict(g) for g in data.gold))
    _write_json(out / "rules.json", normalize.rules_to_dict(data.rules))
    _write_json(out / "configs.json", catalog_mod.configs_to_dict(data.configs))
    print(f"wrote {len(data.products)} products in {spec.n_categories} categories to {out}")
    return 0


def _cmd_group(args) -> int:
    products, rules, configs = _load_inputs(args)
    groups, skipped = grouping.group_catalog(
        products,
        rules,
        configs,
        default_threshold=args.default_threshold,
        use_family=not args.model_number_only,
    )
    out = Path(args.out)
    _write_jsonl(out / GROUPS_FILE, _group_rows(groups))
    _write_jsonl(
        out / SKIPPED_FILE,
        ({"product_id": s.product_id, "reason": s.reason} for s in skipped),
    )
    grouped = sum(len(g.member_ids) for g in groups)
    print(f"{len(groups)} groups covering {grouped} of {len(products)} products; "
          f"{len(skipped)} skipped")
    return 0


def _cmd_tune(args) -> int:
    products, rules, configs, gold = _load_inputs(args, with_gold=True)
    results = tuning.tune_all(
        products, gold, rules, configs,
        grid=args.grid, default_threshold=args.default_threshold,
    )
    untunable = sorted(c for c, r in results.items() if r.untunable)
    if len(untunable) == len(results):
        print("warning: no category has labeled pairs; all thresholds defaulted",
              file=sys.stderr)
    elif untunable:
        print(f"warning: untunable categories (no labeled pairs): {untunable}",
              file=sys.stderr)
    out = Path(args.out)
    _write_json(out / TUNING_FILE, tuning.results_to_dict(results))
    merged = tuning.merge_into_configs(results, configs)
    _write_json(out / TUNED_CONFIGS_FILE, catalog_mod.configs_to_dict(merged))
    chosen = {c: r.chosen_threshold for c, r in sorted(results.items())}
    print(f"tuned thresholds: {chosen}")
    return 0


def _cmd_eval(args) -> int:
    products, rules, configs, gold = _load_inputs(args, with_gold=True)
    groups, _skipped = grouping.group_catalog(
        products,
        rules,
        configs,
        default_threshold=args.default_threshold,
        use_family=not args.model_number_only,
    )
    report = evaluation.evaluate(groups, gold, products, precision_gate=args.precision_gate)
    _write_json(Path(args.out) / REPORT_FILE, evaluation.report_to_dict(report))
    print(evaluation.render_report(report))
    return 0


def _read_jsonl(path: Path) -> list[dict]:
    rows = []
    with open(path, encoding="utf-8") as handle:
        for line in handle:
            if line.strip():
                rows.append(json.loads(line))
    return rows


def _cmd_explain(args) -> int:
    products, rules, configs = _load_inputs(args)
    by_id = {p.id: p for p in products}
    product = by_id.get(args.product_id)
    if product is None:
        raise VariantError(f"unknown product id: {args.product_id}")
    out = Path(args.out)
    groups_path = out / GROUPS_FILE
    if not groups_path.exists():
        raise VariantError(f"no grouping run found in {out} (missing {GROUPS_FILE})")

    config = configs.get(product.category)
    trace = normalize.family_name_trace(product, rules, config)
    family = tuple(trace[-1][1])
    c = grouping.threshold_for(product.category, configs, args.default_threshold)

    lines = [
        f"product {product.id}",
        f"  brand:    {product.brand}",
        f"  category: {product.category}",
        f"  title:    {product.title}",
        f"  model number: {product.model_number!r} -> "
        f"{normalize_model_number(product.model_number)!r}",
        "  family-name derivation:",
    ]
    for stage, tokens in trace:
        lines.append(f"    {stage:<20} -> {' '.join(tokens)}")
    lines.append(
        f"  block: brand={product.brand!r} category={product.category!r} "
        f"family={' '.join(family)!r}"
    )

    group_row = next(
        (row for row in _read_jsonl(groups_path) if product.id in row["member_ids"]),
        None,
    )
    if group_row is not None:
        partners = [m for m in group_row["member_ids"] if m != product.id]
        nn = group_row["nearest_neighbor_distances"].get(product.id)
        lines.append(f"  group: {group_row['group_id']} (members: {', '.join(group_row['member_ids'])})")
        lines.append(f"  nearest-neighbor model distance: {nn} (partners: {', '.join(partners)})")
    elif not family:
        lines.append(f"  skipped: {grouping.SKIP_EMPTY_FAMILY}")
    else:
        lines.append(f"  no partner within threshold c={c}")
    print("\n".join(lines))
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="product-variants",
        description="Group catalog products into variant families and evaluate the result.",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    def add_common(p, gold=False, rules=True):
        p.add_argument("--catalog", required=True, help="catalog JSONL path")
        if gold:
            p.add_argument("--gold", required=True, help="gold labels JSONL path")
        if rules:
            p.add_argument("--rules", required=True, help="normalization rules JSON path")
            p.add_argument("--configs", required=True, help="category configs JSON path")
        p.add_argument("--out", required=True, help="output directory")
        p.add_argument("--default-threshold", type=int, default=grouping.DEFAULT_THRESHOLD,
                       help="model-number threshold for categories without a tuned value")

    p_gen = sub.add_parser("gen", help="generate a synthetic labeled catalog")
    p_gen.add_argument("spec", help="generator spec JSON path")
    p_gen.add_argument("--out", required=True, help="output directory")
    p_gen.add_argument("--seed", type=int, default=None, help="override the spec seed")
    p_gen.set_defaults(func=_cmd_gen)

    p_group = sub.add_parser("group", help="run the grouping pipeline")
    add_common(p_group)
    p_group.add_argument("--model-number-only", action="store_true",
                         help="disable family-name blocking (brand+category only)")
    p_group.set_defaults(func=_cmd_group)

    p_tune = sub.add_parser("tune", help="grid-search per-category thresholds")
    add_common(p_tune, gold=True)
    p_tune.add_argument("--grid", type=_csv_ints, default=list(tuning.DEFAULT_GRID),
                        help="comma-separated ascending thresholds (default 0..6)")
    p_tune.set_defaults(func=_cmd_tune)

    p_eval = sub.add_parser("eval", help="group and score against gold labels")
    add_common(p_eval, gold=True)
    p_eval.add_argument("--precision-gate", type=float,
                        default=evaluation.DEFAULT_PRECISION_GATE,
                        help="per-category precision required to count as highly accurate")
    p_eval.add_argument("--model-number-only", action="store_true",
                        help="disable family-name blocking (brand+category only)")
    p_eval.set_defaults(func=_cmd_eval)

    p_explain = sub.add_parser("explain", help="show why a product was (not) grouped")
    add_common(p_explain)
    p_explain.add_argument("product_id", help="product id to explain")
    p_explain.set_defaults(func=_cmd_explain)

    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except VariantError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
