"""Product variant grouping: blocking on brand/category/family name plus
model-number edit-distance chaining, with tuning and evaluation harnesses."""

from .catalog import (
    CategoryConfig,
    GoldLabel,
    Product,
    load_catalog,
    load_category_configs,
    load_gold,
)
from .editdist import levenshtein, normalize_model_number, pairwise_links
from .errors import NonNumericAttributeError, ParseError, ValidationError, VariantError
from .evaluation import EvalReport, evaluate, render_report
from .grouping import (
    AggregateConstraint,
    BlockKey,
    VariantGroup,
    are_variant_candidates,
    build_blocks,
    check_aggregate_constraint,
    cluster_block,
    group_catalog,
    verify_groups,
)
from .normalize import (
    FamilyName,
    NormalizationRules,
    extract_family_name,
    family_name_trace,
    load_rules,
    tokenize,
)
from .synthgen import GeneratedData, GeneratorSpec, generate
from .tuning import TuningResult, tune_all, tune_threshold

__version__ = "0.1.0"

__all__ = [
    "AggregateConstraint",
    "BlockKey",
    "CategoryConfig",
    "EvalReport",
    "FamilyName",
    "GeneratedData",
    "GeneratorSpec",
    "GoldLabel",
    "NonNumericAttributeError",
    "NormalizationRules",
    "ParseError",
    "Product",
    "TuningResult",
    "ValidationError",
    "VariantError",
    "VariantGroup",
    "are_variant_candidates",
    "build_blocks",
    "check_aggregate_constraint",
    "cluster_block",
    "evaluate",
    "extract_family_name",
    "family_name_trace",
    "generate",
    "group_catalog",
    "levenshtein",
    "load_catalog",
    "load_category_configs",
    "load_gold",
    "load_rules",
    "normalize_model_number",
    "pairwise_links",
    "render_report",
    "tokenize",
    "tune_all",
    "tune_threshold",
    "verify_groups",
]
