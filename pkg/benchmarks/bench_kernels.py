"""Time the compiled kernels against the numpy fallback.

    python3 benchmarks/bench_kernels.py [--repeat N]
"""

import argparse
import time

import numpy as np

from bdcbounds import _kernels

CASES = [
    ("subsequence_table(10, 5)", lambda k: k.subsequence_table(10, 5)),
    ("subsequence_table(12, 6)", lambda k: k.subsequence_table(12, 6)),
    ("subsequence_table(12, 11)", lambda k: k.subsequence_table(12, 11)),
]


def _pairs_case(n):
    rng = np.random.default_rng(0)
    u_gen, u_del = rng.random(n), rng.random(n)
    return f"markov_deletion_pairs(n={n:.0e})", lambda k: k.markov_deletion_pairs(u_gen, u_del, 0.7, 0.4, 100)


def best_of(func, repeat):
    times = []
    for _ in range(repeat):
        start = time.perf_counter()
        func()
        times.append(time.perf_counter() - start)
    return min(times)


def main():
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--repeat", type=int, default=5)
    args = parser.parse_args()
    backends = _kernels.available_backends()
    cases = CASES + [_pairs_case(10**5), _pairs_case(10**6)]
    names = sorted(backends)
    print(f"{'case':32}" + "".join(f"{n:>12}" for n in names) + ("     speedup" if len(names) == 2 else ""))
    for label, func in cases:
        times = {n: best_of(lambda: func(backends[n]), args.repeat) for n in names}
        line = f"{label:32}" + "".join(f"{times[n] * 1e3:10.2f}ms" for n in names)
        if len(names) == 2:
            line += f"{times['python'] / times['cython']:11.1f}x"
        print(line)
    if len(names) == 1:
        print("compiled extension not built; only the numpy fallback was timed")


if __name__ == "__main__":
    main()
