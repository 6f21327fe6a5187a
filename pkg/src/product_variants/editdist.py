"""Levenshtein distance over normalized model numbers."""

from __future__ import annotations

from typing import Sequence

from . import kernels

Link = tuple[int, int, int]


def normalize_model_number(raw: str) -> str:
    """Canonical model-number key: uppercase, all whitespace removed.

    Idempotent; the empty string maps to itself.
    """
    return "".join(raw.split()).upper()


def levenshtein(a: str, b: str, limit: int | None = None) -> int:
    """Minimum number of unit-cost character insertions, deletions, and
    substitutions transforming ``a`` into ``b``.

    With ``limit`` the result is exact when the distance is <= limit and
    ``limit + 1`` otherwise; a length difference beyond the limit short-circuits
    without running the DP.
    """
    if limit is not None and limit < 0:
        raise ValueError("limit must be >= 0")
    return kernels.levenshtein_codes(
        kernels.encode(a), kernels.encode(b), -1 if limit is None else limit
    )


def pairwise_links(keys: Sequence[str], threshold: int) -> list[Link]:
    """All index pairs ``(i, j, distance)`` with ``i < j`` and distance <= threshold."""
    if threshold < 0:
        raise ValueError("threshold must be >= 0")
    if len(keys) < 2:
        return []
    codes, lengths = kernels.encode_many(list(keys))
    ii, jj, dd = kernels.pairwise_codes(codes, lengths, threshold)
    return [(int(i), int(j), int(d)) for i, j, d in zip(ii, jj, dd)]
