#!/usr/bin/env python3
"""Benchmark the compiled GF(2) kernels against the pure-Python fallback.

The workloads mirror the hottest acceptance paths: the subspace-union
search behind the subset surjection (dominant in the d=7 preimage sweep)
and batched span materialization.

Usage: python benchmarks/bench_kernels.py [--dim 7] [--targets 4000]
"""

import argparse
import random
import time
from itertools import islice

from ddlab._kernels import _pure

try:
    from ddlab._kernels import _gf2ext
except ImportError:
    _gf2ext = None


def preimage_workload(dim, n_targets, seed=0):
    """Sets shaped like the preimage sweep feeds the surjection: a small
    target joined with a spanned block, zero included."""
    rng = random.Random(seed)
    nonzero = list(range(1, 1 << dim))
    sets = []
    for _ in range(n_targets):
        target = rng.sample(nonzero, rng.randint(0, 3))
        picked = []
        span = set(_pure.span_members(target))
        for v in range(1, 1 << dim):
            if v not in span:
                picked.append(v)
                span |= {v ^ w for w in span}
                if len(picked) == len(target) + 1:
                    break
        block = _pure.span_members(picked)
        sets.append(tuple(sorted(set(target) | set(block))))
    return sets


def span_workload(dim, count, seed=1):
    rng = random.Random(seed)
    return [[rng.getrandbits(dim) for _ in range(rng.randint(1, dim))]
            for _ in range(count)]


def timed(fn, payloads):
    start = time.perf_counter()
    for payload in payloads:
        fn(payload)
    return time.perf_counter() - start


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--dim", type=int, default=7)
    parser.add_argument("--targets", type=int, default=4000)
    parser.add_argument("--spans", type=int, default=20000)
    args = parser.parse_args()

    rows = []
    union_sets = preimage_workload(args.dim, args.targets)
    spans = span_workload(args.dim, args.spans)

    backends = [("pure", _pure)]
    if _gf2ext is not None:
        backends.append(("cython", _gf2ext))

    for label, impl in backends:
        t_union = timed(impl.union_of_max_subspaces, union_sets)
        t_span = timed(impl.span_members, spans)
        rows.append((label, t_union, t_span))

    print(f"workload: union_of_max_subspaces on {len(union_sets)} sets "
          f"(d={args.dim}), span_members on {len(spans)} batches")
    print(f"{'backend':<10} {'union (s)':>12} {'span (s)':>12}")
    for label, t_union, t_span in rows:
        print(f"{label:<10} {t_union:>12.3f} {t_span:>12.3f}")
    if len(rows) == 2:
        print(f"{'speedup':<10} {rows[0][1] / rows[1][1]:>11.1f}x "
              f"{rows[0][2] / rows[1][2]:>11.1f}x")
    else:
        print("compiled backend unavailable; built pure-only")

    # both backends must agree on every workload item
    if _gf2ext is not None:
        for s in islice(union_sets, 500):
            assert _gf2ext.union_of_max_subspaces(s) \
                == _pure.union_of_max_subspaces(s)
        print("agreement check: ok (500 sampled sets)")


if __name__ == "__main__":
    main()
