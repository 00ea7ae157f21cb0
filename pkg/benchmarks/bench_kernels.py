#!/usr/bin/env python3
"""Benchmark the compiled kernels against the pure-Python fallbacks.

Two workloads:
  explore   - marking graph of k independent toggle pairs (2^k states)
  linext    - linear extensions of a w x h grid poset

Usage: python3 benchmarks/bench_kernels.py [--toggles 14] [--grid 4x4] [--repeat 3]
"""

from __future__ import annotations

import argparse
import time

from petrikit import _core_py

try:
    from petrikit import _core
except ImportError:
    _core = None


def toggle_instance(k: int):
    """k independent two-place toggles; 2^k reachable markings."""
    num_places = 2 * k
    num_trans = 2 * k
    pre = [0] * (num_places * num_trans)
    post = [0] * (num_places * num_trans)
    for i in range(k):
        on_t, off_t = 2 * i, 2 * i + 1
        off_p, on_p = 2 * i, 2 * i + 1
        pre[on_t * num_places + off_p] = 1
        post[on_t * num_places + on_p] = 1
        pre[off_t * num_places + on_p] = 1
        post[off_t * num_places + off_p] = 1
    m0 = tuple(1 if p % 2 == 0 else 0 for p in range(num_places))
    return num_places, num_trans, pre, post, m0, 2 ** k + 1


def grid_poset(width: int, height: int):
    """Grid order: (x, y) <= (x', y') componentwise."""
    n = width * height
    preds = [[] for _ in range(n)]
    for x in range(width):
        for y in range(height):
            i = x * height + y
            if x > 0:
                preds[i].append((x - 1) * height + y)
            if y > 0:
                preds[i].append(x * height + y - 1)
    return n, preds, 10_000_000


def timed(fn, args, repeat: int) -> tuple[float, object]:
    best = float("inf")
    result = None
    for _ in range(repeat):
        start = time.perf_counter()
        result = fn(*args)
        best = min(best, time.perf_counter() - start)
    return best, result


def report(name: str, workload: str, seconds: float, size: str):
    print(f"{workload:10s} {name:9s} {seconds * 1000:10.1f} ms   ({size})")


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--toggles", type=int, default=14)
    parser.add_argument("--grid", default="4x4")
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    explore_args = toggle_instance(args.toggles)
    width, _, height = args.grid.partition("x")
    linext_args = grid_poset(int(width), int(height))

    pure_time, pure_result = timed(_core_py.explore, explore_args, args.repeat)
    report("pure", "explore", pure_time, f"{len(pure_result[0])} markings")
    if _core is not None:
        fast_time, fast_result = timed(_core.explore, explore_args, args.repeat)
        assert fast_result == pure_result
        report("compiled", "explore", fast_time, f"speedup {pure_time / fast_time:.1f}x")

    pure_time, pure_result = timed(_core_py.linear_extensions, linext_args, args.repeat)
    report("pure", "linext", pure_time, f"{len(pure_result[0])} extensions")
    if _core is not None:
        fast_time, fast_result = timed(_core.linear_extensions, linext_args, args.repeat)
        assert fast_result == pure_result
        report("compiled", "linext", fast_time, f"speedup {pure_time / fast_time:.1f}x")
    if _core is None:
        print("compiled kernel not available; showing pure timings only")


if __name__ == "__main__":
    main()
