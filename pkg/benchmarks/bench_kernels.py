"""Compare the compiled and pure-Python kernels on the same inputs.

    python3 benchmarks/bench_kernels.py [--n 14] [--repeat 3]
"""
import argparse
import time

import numpy as np

from subshift_lab import Alphabet, ForbiddenList, build_automaton
from subshift_lab import _kernels_py
from subshift_lab.core.language import count_language

try:
    from subshift_lab import _kernels as _kernels_c
except ImportError:
    _kernels_c = None


def best_of(fn, repeat):
    times = []
    for _ in range(repeat):
        t0 = time.perf_counter()
        out = fn()
        times.append(time.perf_counter() - t0)
    return min(times), out


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--n", type=int, default=14, help="word length for enumeration")
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    A = Alphabet(3)
    F = ForbiddenList.explicit(A, [(0, 0), (1, 2, 1), (2, 2, 2)])
    aut = build_automaton(A, F)
    trans = np.ascontiguousarray(aut.trans, dtype=np.int32)
    total = count_language(aut, args.n)
    print(f"alphabet 3, |F| = 3, n = {args.n}, |L~_n| = {total}")

    backends = [("python", _kernels_py)]
    if _kernels_c is not None:
        backends.insert(0, ("cython", _kernels_c))
    else:
        print("compiled kernels not built; only the Python backend is timed")

    results = {}
    for name, mod in backends:
        t_enum, words = best_of(lambda: mod.enumerate_words(trans, aut.dead, aut.root, args.n, total), args.repeat)
        words = np.ascontiguousarray(words, dtype=np.int32)
        starts = np.arange(aut.n_live, dtype=np.int32)
        lengths = np.full(len(words), args.n, dtype=np.int32)
        t_run, _ = best_of(lambda: mod.batch_run(trans, starts, words, lengths), args.repeat)
        pat = np.array([1, 0, 1], dtype=np.int32)
        t_occ, occ = best_of(lambda: mod.count_occurrences(words, pat), args.repeat)
        results[name] = (t_enum, t_run, t_occ, occ)

    print(f"{'kernel':<20}" + "".join(f"{name:>12}" for name, _ in backends) + ("   speedup" if len(backends) > 1 else ""))
    for i, label in enumerate(("enumerate_words", "batch_run", "count_occurrences")):
        row = [results[name][i] for name, _ in backends]
        line = f"{label:<20}" + "".join(f"{t * 1e3:>10.1f}ms" for t in row)
        if len(row) > 1:
            line += f"   {row[1] / row[0]:>6.1f}x"
        print(line)
    if len(backends) > 1:
        assert results["cython"][3] == results["python"][3], "backends disagree"


if __name__ == "__main__":
    main()
