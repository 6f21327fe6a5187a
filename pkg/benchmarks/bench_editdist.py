#!/usr/bin/env python3
"""Benchmark the numba and numpy edit-distance backends against each other.

Times the two hot kernels (single bounded distance and all-pairs linking
within a block) on randomly generated model numbers.  Both implementations
are called directly, so the PRODUCT_VARIANTS_BACKEND env var does not matter
here.
"""

from __future__ import annotations

import argparse
import random
import time

from product_variants import kernels

ALPHABET = "ABCDEFGHIJKLMNOPQRSTUVWXYZ0123456789-"


def make_keys(rng: random.Random, n: int, length: int) -> list[str]:
    # sibling clusters sharing a stem, like real variant model numbers
    keys: list[str] = []
    while len(keys) < n:
        stem = "".join(rng.choice(ALPHABET) for _ in range(length - 2))
        for _ in range(rng.randint(1, 4)):
            suffix = "".join(rng.choice(ALPHABET) for _ in range(2))
            keys.append(stem + suffix)
    return keys[:n]


def time_scalar(fn, pairs, limit, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        acc = 0
        for a, b in pairs:
            acc += fn(a, b, limit)
        best = min(best, time.perf_counter() - t0)
    return best, acc


def time_pairwise(fn, codes, lengths, limit, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        ii, _, _ = fn(codes, lengths, limit)
        best = min(best, time.perf_counter() - t0)
    return best, len(ii)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--n", type=int, default=600, help="number of model numbers")
    parser.add_argument("--length", type=int, default=10, help="model number length")
    parser.add_argument("--threshold", type=int, default=3)
    parser.add_argument("--scalar-pairs", type=int, default=20000)
    parser.add_argument("--repeat", type=int, default=3)
    parser.add_argument("--seed", type=int, default=0)
    args = parser.parse_args()

    rng = random.Random(args.seed)
    keys = make_keys(rng, args.n, args.length)
    codes, lengths = kernels.encode_many(keys)
    pair_samples = [
        (kernels.encode(rng.choice(keys)), kernels.encode(rng.choice(keys)))
        for _ in range(args.scalar_pairs)
    ]

    backends = [("numpy", kernels.levenshtein_numpy, kernels.pairwise_numpy)]
    if kernels.NUMBA_AVAILABLE:
        kernels.levenshtein_numba(codes[0], codes[1], args.threshold)  # compile
        kernels.pairwise_numba(codes[:4], lengths[:4], args.threshold)
        backends.insert(0, ("numba", kernels.levenshtein_numba, kernels.pairwise_numba))
    else:
        print("numba not importable; benchmarking numpy only")

    print(f"{args.n} keys of length {args.length}, threshold {args.threshold}, "
          f"{args.scalar_pairs} scalar pairs, best of {args.repeat}")
    print(f"{'backend':<8} {'scalar':>12} {'pairwise':>12} {'links':>8}")
    rows = {}
    for name, scalar_fn, pairwise_fn in backends:
        t_scalar, _ = time_scalar(scalar_fn, pair_samples, args.threshold, args.repeat)
        t_pair, n_links = time_pairwise(pairwise_fn, codes, lengths, args.threshold, args.repeat)
        rows[name] = (t_scalar, t_pair)
        print(f"{name:<8} {t_scalar * 1e3:>10.1f}ms {t_pair * 1e3:>10.1f}ms {n_links:>8}")
    if len(rows) == 2:
        print(f"numba speedup: scalar x{rows['numpy'][0] / rows['numba'][0]:.1f}, "
              f"pairwise x{rows['numpy'][1] / rows['numba'][1]:.1f}")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
