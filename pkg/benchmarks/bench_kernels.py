"""Time the numba kernels against the pure-numpy fallback.

    python3 benchmarks/bench_kernels.py [--docs 200] [--sweeps 20] [--repeat 3]

Both backends are called directly, so one process measures both.  The first
numba call is a warm-up (JIT compile or cache load) and is excluded.
"""
from __future__ import annotations

import argparse
import time

import numpy as np

from skillgap import _kernels
from skillgap._accel import HAVE_NUMBA
from skillgap.topics import build_vocabulary
from skillgap.topics.synthetic import planted_corpus


def _gibbs_inputs(n_docs: int, K: int):
    pc = planted_corpus(n_topics=K, vocab_size=200, n_docs=n_docs, doc_length=50, seed=0)
    vocab = build_vocabulary(pc.docs)
    encoded = [vocab.encode(d) for d in pc.docs]
    words = np.concatenate(encoded).astype(np.int32)
    docs = np.repeat(np.arange(len(encoded), dtype=np.int32), [len(e) for e in encoded])
    return words, docs, len(encoded), len(vocab)


def _gibbs_run(kernels, words, docs, D, V, K, sweeps):
    N = len(words)
    z = np.zeros(N, dtype=np.int32)
    n_dk = np.zeros((D, K), dtype=np.int64)
    n_kw = np.zeros((K, V), dtype=np.int64)
    n_k = np.zeros(K, dtype=np.int64)
    kernels["init_assignments"](words, docs, z, n_dk, n_kw, n_k, np.uint64(1))
    t0 = time.perf_counter()
    for s in range(sweeps):
        kernels["gibbs_sweep"](words, docs, z, n_dk, n_kw, n_k, 50.0 / K, 0.01, np.uint64(1), np.uint64((s + 1) * N))
    return time.perf_counter() - t0, n_kw


def _lcs_run(kernels, pairs):
    t0 = time.perf_counter()
    total = sum(int(kernels["lcs_length"](a, b)) for a, b in pairs)
    return time.perf_counter() - t0, total


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__, formatter_class=argparse.RawDescriptionHelpFormatter)
    ap.add_argument("--docs", type=int, default=200)
    ap.add_argument("--topics", type=int, default=10)
    ap.add_argument("--sweeps", type=int, default=20)
    ap.add_argument("--pairs", type=int, default=2000)
    ap.add_argument("--repeat", type=int, default=3)
    args = ap.parse_args()

    backends = {"numpy": _kernels.NUMPY_KERNELS}
    if HAVE_NUMBA:
        backends = {"numba": _kernels.NUMBA_KERNELS, **backends}
    words, docs, D, V = _gibbs_inputs(args.docs, args.topics)
    rng = np.random.default_rng(0)
    pairs = [
        (rng.integers(97, 103, size=rng.integers(5, 60)).astype("<u4"),
         rng.integers(97, 103, size=rng.integers(5, 60)).astype("<u4"))
        for _ in range(args.pairs)
    ]
    if HAVE_NUMBA:
        _gibbs_run(_kernels.NUMBA_KERNELS, words, docs, D, V, args.topics, 1)
        _lcs_run(_kernels.NUMBA_KERNELS, pairs[:2])

    print(f"gibbs: {len(words)} tokens, K={args.topics}, {args.sweeps} sweeps; lcs: {args.pairs} pairs")
    print(f"{'backend':<8} {'gibbs s/sweep':>14} {'lcs us/pair':>12}")
    results = {}
    for name, kern in backends.items():
        g = min(_gibbs_run(kern, words, docs, D, V, args.topics, args.sweeps)[0] for _ in range(args.repeat))
        lcs = min(_lcs_run(kern, pairs)[0] for _ in range(args.repeat))
        results[name] = (g / args.sweeps, lcs / args.pairs * 1e6)
        print(f"{name:<8} {results[name][0]:>14.5f} {results[name][1]:>12.2f}")
    if len(results) == 2:
        (ga, la), (gb, lb) = results["numba"], results["numpy"]
        print(f"speed-up (numpy / numba): gibbs x{gb / ga:.1f}, lcs x{lb / la:.1f}")
    counts = {name: _gibbs_run(k, words, docs, D, V, args.topics, 2)[1] for name, k in backends.items()}
    if len(counts) == 2:
        print("backends agree bit-for-bit:", bool(np.array_equal(*counts.values())))


if __name__ == "__main__":
    main()
