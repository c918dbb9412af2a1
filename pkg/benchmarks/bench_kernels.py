"""Compare the compiled and pure-Python kernel backends.

Usage: python benchmarks/bench_kernels.py [--repeat N]

Times the two hot loops (marker counting, SVM dual coordinate descent)
on synthetic workloads and checks the backends agree bit-for-bit.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from fraudlex import _kernels
from fraudlex.markers import count_markers, default_lexicon
from fraudlex.synth import SynthConfig, generate


def _time(fn, repeat: int) -> float:
    best = float("inf")
    for _ in range(repeat):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_markers(repeat: int) -> None:
    lexicon = default_lexicon()
    corpus, _ = generate(SynthConfig(seed=11))
    streams = [s for t in corpus.transcripts for s in t.customer_responses()]
    print(f"marker counting: {len(streams)} responses x {len(lexicon.categories)} categories")
    results = {}
    for name in _kernels.available_backends():
        backend = _kernels.get_backend(name)
        counter = backend.count_category

        def run() -> list:
            out = []
            for stream in streams:
                ids = lexicon.token_ids(stream)
                for trie in lexicon._tries:
                    out.append(
                        counter(
                            ids,
                            trie.child_start,
                            trie.child_count,
                            trie.edge_token,
                            trie.edge_child,
                            trie.term_len,
                        )
                    )
            return out

        elapsed = _time(run, repeat)
        results[name] = (elapsed, run())
        print(f"  {name:7s} {elapsed * 1000:8.1f} ms")
    values = [v for _, v in results.values()]
    assert all(v == values[0] for v in values), "backends disagree on marker counts"
    if len(results) == 2:
        pure, native = results["pure"][0], results["native"][0]
        print(f"  speedup: {pure / native:.1f}x")


def bench_svm(repeat: int) -> None:
    rng = np.random.default_rng(3)
    n, d = 200, 28
    X = np.ascontiguousarray(rng.normal(size=(n, d)))
    X[:, -1] = 1.0
    y = np.where(rng.random(n) < 0.5, 1.0, -1.0)
    shift = np.where(y > 0, 1.0, -1.0)
    X[:, 0] += shift
    print(f"svm dual coordinate descent: {n} rows x {d} columns")
    results = {}
    for name in _kernels.available_backends():
        backend = _kernels.get_backend(name)
        elapsed = _time(lambda: backend.dual_cd(X, y, 1.0, 1e-6, 2000), repeat)
        w, alpha, epochs, residual = backend.dual_cd(X, y, 1.0, 1e-6, 2000)
        results[name] = (elapsed, np.asarray(w).tolist(), np.asarray(alpha).tolist())
        print(f"  {name:7s} {elapsed * 1000:8.1f} ms  epochs={epochs} residual={residual:.2e}")
    values = [(w, a) for _, w, a in results.values()]
    assert all(v == values[0] for v in values), "backends disagree on svm solutions"
    if len(results) == 2:
        pure, native = results["pure"][0], results["native"][0]
        print(f"  speedup: {pure / native:.1f}x")


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()
    print(f"active backend: {_kernels.BACKEND} (available: {_kernels.available_backends()})")
    bench_markers(args.repeat)
    bench_svm(args.repeat)


if __name__ == "__main__":
    main()
