"""Edit-distance kernels.

The hot inner loops (single distance and all-pairs linking within a block)
exist twice: a numba ``@njit`` version and a pure-numpy version.  The active
backend is picked once at import time from the ``PRODUCT_VARIANTS_BACKEND``
environment variable ("numba" or "numpy"; default is numba when importable).
Both implementations are always importable so they can be cross-checked and
benchmarked against each other (see ``benchmarks/bench_editdist.py``).

Distance semantics shared by both backends: ``limit < 0`` means unbounded and
the exact distance is returned; with ``limit >= 0`` the exact distance is
returned when it is ``<= limit`` and ``limit + 1`` is returned as soon as the
computation can prove the distance exceeds the limit.
"""

from __future__ import annotations

import logging
import os
from typing import Callable

import numpy as np

logger = logging.getLogger(__name__)

BACKEND_ENV_VAR = "PRODUCT_VARIANTS_BACKEND"

try:
    from numba import njit

    NUMBA_AVAILABLE = True
except ImportError:  # pragma: no cover - numba is a declared dependency
    NUMBA_AVAILABLE = False


def encode(s: str) -> np.ndarray:
    """Unicode code points of ``s`` as an int32 vector."""
    return np.array([ord(c) for c in s], dtype=np.int32)


def encode_many(keys: list[str] | tuple[str, ...]) -> tuple[np.ndarray, np.ndarray]:
    """Pack strings into a zero-padded (n, max_len) code matrix plus lengths.

    The pad value 0 is never a real code point of a non-empty key position,
    and padded columns cannot influence the DP cells that are read out, so
    padding is safe.
    """
    n = len(keys)
    lengths = np.array([len(k) for k in keys], dtype=np.int32)
    width = int(lengths.max()) if n else 0
    codes = np.zeros((n, max(width, 1)), dtype=np.int32)
    for i, key in enumerate(keys):
        if key:
            codes[i, : len(key)] = encode(key)
    return codes, lengths


# ---------------------------------------------------------------------------
# numpy backend
# ---------------------------------------------------------------------------

def levenshtein_numpy(a_codes: np.ndarray, b_codes: np.ndarray, limit: int = -1) -> int:
    """Row-vectorized Wagner-Fischer.

    The within-row dependency cur[j] = min(m[j-1], cur[j-1] + 1) is a running
    minimum, so each row is computed as
    cur[j] = j + cummin(base[s] - s)[j] with base = [i+1, m_0, m_1, ...].
    """
    la, lb = a_codes.shape[0], b_codes.shape[0]
    if limit >= 0 and abs(la - lb) > limit:
        return limit + 1
    offs = np.arange(lb + 1, dtype=np.int32)
    prev = offs.copy()
    t = np.empty(lb + 1, dtype=np.int32)
    for i in range(la):
        m = np.minimum(prev[:-1] + (b_codes != a_codes[i]), prev[1:] + 1)
        t[0] = i + 1
        t[1:] = m - offs[1:]
        prev = np.minimum.accumulate(t) + offs
        if limit >= 0 and prev.min() > limit:
            return limit + 1
    d = int(prev[lb])
    if limit >= 0 and d > limit:
        return limit + 1
    return d


def _anchor_distances_numpy(
    anchor: np.ndarray, cand: np.ndarray, cand_len: np.ndarray, limit: int
) -> np.ndarray:
    """Bounded distances from one anchor string to many padded candidates."""
    n_cand, width = cand.shape
    la = anchor.shape[0]
    out = np.full(n_cand, limit + 1, dtype=np.int32)
    live = np.abs(cand_len - la) <= limit
    if not live.any():
        return out
    rows = cand[live]
    row_len = cand_len[live]
    k = rows.shape[0]
    offs = np.arange(width + 1, dtype=np.int32)
    prev = np.tile(offs, (k, 1))
    t = np.empty((k, width + 1), dtype=np.int32)
    for i in range(la):
        m = np.minimum(prev[:, :-1] + (rows != anchor[i]), prev[:, 1:] + 1)
        t[:, 0] = i + 1
        t[:, 1:] = m - offs[1:]
        prev = np.minimum.accumulate(t, axis=1) + offs
    d = np.minimum(prev[np.arange(k), row_len], limit + 1)
    out[np.nonzero(live)[0]] = d.astype(np.int32)
    return out


def pairwise_numpy(
    codes: np.ndarray, lengths: np.ndarray, limit: int
) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All pairs (i < j) whose distance is within ``limit``."""
    n = lengths.shape[0]
    out_i: list[int] = []
    out_j: list[int] = []
    out_d: list[int] = []
    for i in range(n - 1):
        anchor = codes[i, : lengths[i]]
        dists = _anchor_distances_numpy(anchor, codes[i + 1 :], lengths[i + 1 :], limit)
        for off in np.nonzero(dists <= limit)[0]:
            out_i.append(i)
            out_j.append(i + 1 + int(off))
            out_d.append(int(dists[off]))
    return (
        np.array(out_i, dtype=np.int32),
        np.array(out_j, dtype=np.int32),
        np.array(out_d, dtype=np.int32),
    )


# ---------------------------------------------------------------------------
# numba backend
# ---------------------------------------------------------------------------

if NUMBA_AVAILABLE:

    @njit(cache=True)
    def _lev_jit(a: np.ndarray, b: np.ndarray, limit: int) -> int:
        la = a.shape[0]
        lb = b.shape[0]
        diff = la - lb if la >= lb else lb - la
        if limit >= 0 and diff > limit:
            return limit + 1
        prev = np.empty(lb + 1, dtype=np.int32)
        cur = np.empty(lb + 1, dtype=np.int32)
        for j in range(lb + 1):
            prev[j] = j
        for i in range(la):
            cur[0] = i + 1
            rowmin = cur[0]
            for j in range(lb):
                cost = 0 if a[i] == b[j] else 1
                v = prev[j] + cost
                if prev[j + 1] + 1 < v:
                    v = prev[j + 1] + 1
                if cur[j] + 1 < v:
                    v = cur[j] + 1
                cur[j + 1] = v
                if v < rowmin:
                    rowmin = v
            if limit >= 0 and rowmin > limit:
                return limit + 1
            tmp = prev
            prev = cur
            cur = tmp
        d = prev[lb]
        if limit >= 0 and d > limit:
            return limit + 1
        return d

    @njit(cache=True)
    def _pairwise_jit(codes: np.ndarray, lengths: np.ndarray, limit: int):
        n = lengths.shape[0]
        cap = 64
        out_i = np.empty(cap, dtype=np.int32)
        out_j = np.empty(cap, dtype=np.int32)
        out_d = np.empty(cap, dtype=np.int32)
        count = 0
        for i in range(n - 1):
            a = codes[i, : lengths[i]]
            for j in range(i + 1, n):
                d = _lev_jit(a, codes[j, : lengths[j]], limit)
                if d <= limit:
                    if count == cap:
                        cap *= 2
                        grown_i = np.empty(cap, dtype=np.int32)
                        grown_j = np.empty(cap, dtype=np.int32)
                        grown_d = np.empty(cap, dtype=np.int32)
                        grown_i[:count] = out_i[:count]
                        grown_j[:count] = out_j[:count]
                        grown_d[:count] = out_d[:count]
                        out_i = grown_i
                        out_j = grown_j
                        out_d = grown_d
                    out_i[count] = i
                    out_j[count] = j
                    out_d[count] = d
                    count += 1
        return out_i[:count], out_j[:count], out_d[:count]

    def levenshtein_numba(a_codes: np.ndarray, b_codes: np.ndarray, limit: int = -1) -> int:
        return int(_lev_jit(a_codes, b_codes, limit))

    def pairwise_numba(
        codes: np.ndarray, lengths: np.ndarray, limit: int
    ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        return _pairwise_jit(codes, lengths, limit)


def _select_backend() -> str:
    choice = os.environ.get(BACKEND_ENV_VAR, "").strip().lower()
    if choice not in ("", "numba", "numpy"):
        raise ValueError(
            f"{BACKEND_ENV_VAR} must be 'numba' or 'numpy', got {choice!r}"
        )
    if choice == "numba" and not NUMBA_AVAILABLE:
        logger.warning("numba requested via %s but not importable; using numpy", BACKEND_ENV_VAR)
        return "numpy"
    if not choice:
        return "numba" if NUMBA_AVAILABLE else "numpy"
    return choice


BACKEND: str = _select_backend()

levenshtein_codes: Callable[[np.ndarray, np.ndarray, int], int]
pairwise_codes: Callable[[np.ndarray, np.ndarray, int], tuple[np.ndarray, np.ndarray, np.ndarray]]

if BACKEND == "numba":
    levenshtein_codes = levenshtein_numba
    pairwise_codes = pairwise_numba
else:
    levenshtein_codes = levenshtein_numpy
    pairwise_codes = pairwise_numpy


def warmup() -> str:
    """Force JIT compilation of the active backend; returns the backend name."""
    codes, lengths = encode_many(["A1", "A2", ""])
    levenshtein_codes(codes[0, : lengths[0]], codes[1, : lengths[1]], 2)
    levenshtein_codes(codes[0, : lengths[0]], codes[1, : lengths[1]], -1)
    pairwise_codes(codes, lengths, 1)
    return BACKEND
