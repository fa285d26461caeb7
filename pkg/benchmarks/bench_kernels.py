"""Benchmark the compiled kernels against the pure-Python fallback.

Usage: python benchmarks/bench_kernels.py [--items N] [--clusters C]

Times the two hot loops (greedy feed selection and leader clustering) on
synthetic pools of several sizes and prints a comparison table. Run after
building the extension; if it is missing, only the fallback column fills.
"""

from __future__ import annotations

import argparse
import time

import numpy as np

from epistral._kernels import load_backend
from epistral.params import ProtocolParams
from epistral.recommender import cluster_cap


def _synth_pool(n_items: int, n_clusters: int, rng: np.random.Generator):
    clusters = rng.integers(0, n_clusters, size=n_items).astype(np.int64)
    rels = rng.random(n_items)
    order = np.lexsort((np.arange(n_items), -rels))
    excluded = (rng.random(n_items) < 0.01).astype(np.uint8)
    return order, clusters, rels, excluded


def _time(fn, repeats: int = 3) -> float:
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_greedy(backend, n_items: int, n_clusters: int, params) -> float:
    rng = np.random.default_rng(7)
    order, clusters, rels, excluded = _synth_pool(n_items, n_clusters, rng)
    cap = cluster_cap(params)
    max_rel = float(rels.max())

    def run():
        backend.greedy_select(order, clusters, rels, excluded, n_clusters,
                              params.feed_size, cap,
                              params.diversity_weight, max_rel)

    return _time(run)


def bench_leader(backend, n_items: int, dim: int, tau: float) -> float:
    rng = np.random.default_rng(11)
    centers = rng.normal(size=(12, dim))
    centers /= np.linalg.norm(centers, axis=1, keepdims=True)
    picks = rng.integers(0, 12, size=n_items)
    emb = centers[picks] + 0.05 * rng.normal(size=(n_items, dim))
    emb /= np.linalg.norm(emb, axis=1, keepdims=True)

    def run():
        backend.leader_cluster(emb, tau)

    return _time(run)


def main() -> int:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--items", type=int, default=100_000)
    parser.add_argument("--clusters", type=int, default=12)
    parser.add_argument("--dim", type=int, default=16)
    args = parser.parse_args()

    py_backend, _ = load_backend("py")
    try:
        native_backend, native_name = load_backend("native")
    except ImportError:
        native_backend, native_name = None, None

    params = ProtocolParams()
    sizes = [args.items // 100, args.items // 10, args.items]
    print(f"{'kernel':<16}{'n':>10}{'pure py':>12}{'native':>12}{'speedup':>10}")
    for n in sizes:
        t_py = bench_greedy(py_backend, n, args.clusters, params)
        if native_backend is not None:
            t_na = bench_greedy(native_backend, n, args.clusters, params)
            print(f"{'greedy_select':<16}{n:>10}{t_py:>11.4f}s{t_na:>11.4f}s"
                  f"{t_py / t_na:>9.1f}x")
        else:
            print(f"{'greedy_select':<16}{n:>10}{t_py:>11.4f}s{'-':>12}{'-':>10}")
    for n in sizes:
        t_py = bench_leader(py_backend, n, args.dim, 0.8)
        if native_backend is not None:
            t_na = bench_leader(native_backend, n, args.dim, 0.8)
            print(f"{'leader_cluster':<16}{n:>10}{t_py:>11.4f}s{t_na:>11.4f}s"
                  f"{t_py / t_na:>9.1f}x")
        else:
            print(f"{'leader_cluster':<16}{n:>10}{t_py:>11.4f}s{'-':>12}{'-':>10}")
    if native_backend is None:
        print("\ncompiled extension not built; showing fallback only")
    return 0


if __name__ == "__main__":
    raise SystemExit(main())
