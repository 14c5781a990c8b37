#!/usr/bin/env python3
"""Benchmark the compiled lookup kernel against the pure-Python fallback.

Usage: python3 benchmarks/bench_lookup.py [repeats]
"""

from __future__ import annotations

import random
import sys
import time

from verdd.fst import _pykernel, parse_att
from verdd.fst.transducer import _tokenize_ids

try:
    from verdd.fst import _kernel
except ImportError:
    _kernel = None


def build_machine() -> str:
    """A letters-loop generator with flag-guarded suffix branches."""
    lines = []
    for ch in "abcdefghijklmnopqrstuvwxyz":
        lines.append(f"0\t0\t{ch}\t{ch}")
    lines.append("0\t1\t@U.Stem.Open@\t@U.Stem.Open@")
    lines.append("0\t1\t@U.Stem.Closed@\t@U.Stem.Closed@")
    lines.append("1\t2\t+N\t@0@")
    lines.append("2\t3\t+Sg\t@0@\t0.0")
    lines.append("2\t4\t+Pl\ts\t0.5")
    lines.append("2\t5\t+Du\t@0@\t1.0")
    lines.append("5\t6\t@R.Stem.Open@\t@R.Stem.Open@")
    lines.append("6\t7\t@0@\tx")
    lines.append("3\t0.0")
    lines.append("4\t0.0")
    lines.append("7\t0.0")
    return "\n".join(lines)


def bench(kernel, program, token_lists, repeats: int) -> float:
    t0 = time.perf_counter()
    for _ in range(repeats):
        for tokens in token_lists:
            kernel.run(program, tokens, 100)
    return time.perf_counter() - t0


def main() -> None:
    repeats = int(sys.argv[1]) if len(sys.argv) > 1 else 200
    t = parse_att(build_machine())
    program = t.program()

    rng = random.Random(7)
    words = ["".join(rng.choices("abcdefghijklmnopqrstuvwxyz", k=rng.randint(3, 10))) for _ in range(50)]
    inputs = [w + suffix for w in words for suffix in ("+N+Sg", "+N+Pl", "+N+Du")]
    token_lists = [_tokenize_ids(program, s) for s in inputs]
    n_lookups = repeats * len(token_lists)

    pure = bench(_pykernel, program, token_lists, repeats)
    print(f"pure python : {pure:8.3f} s  ({n_lookups / pure:10.0f} lookups/s)")
    if _kernel is None:
        print("compiled    : not built (pip install -e . with Cython available)")
        return
    compiled = bench(_kernel, program, token_lists, repeats)
    print(f"compiled    : {compiled:8.3f} s  ({n_lookups / compiled:10.0f} lookups/s)")
    print(f"speedup     : {pure / compiled:8.1f}x")

    sample = inputs[0]
    py_res = sorted(_pykernel.run(program, token_lists[0], 100))
    cy_res = sorted(_kernel.run(program, token_lists[0], 100))
    assert py_res == cy_res, "kernels disagree"
    print(f"parity check: ok ({sample!r} -> {len(py_res)} paths)")


if __name__ == "__main__":
    main()
