"""Compare the numba and numpy kernel backends.

    python3 benchmarks/bench_kernels.py [--nodes N] [--edges M] [--queries Q]

Both backends run on the same random graph; every result is cross-checked
before timings are reported. The first numba call per kernel includes JIT
compilation (or a cache load), so it is timed separately as warm-up.
"""
import argparse
import json
import time

import numpy as np

from npkg.kernels import build_csr, load_backend
from npkg.synthetic import random_edges


def timed(fn, *args, repeat=1):
    t0 = time.perf_counter()
    for _ in range(repeat):
        out = fn(*args)
    return out, (time.perf_counter() - t0) / repeat


def closure_input(n_blocks, block, per_block, seed):
    # block-local chains keep the closure size bounded, like literature graphs
    rng = np.random.default_rng(seed)
    base = np.repeat(np.arange(n_blocks) * block, per_block)
    a = base + rng.integers(0, block, base.size)
    c = base + rng.integers(0, block, base.size)
    keep = a != c
    return a[keep], c[keep], n_blocks * block


def main():
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--nodes", type=int, default=150_000)
    ap.add_argument("--edges", type=int, default=1_000_000)
    ap.add_argument("--queries", type=int, default=200)
    ap.add_argument("--closure-blocks", type=int, default=2_000)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    src, dst = random_edges(args.nodes, args.edges, args.seed)
    fptr, fidx = build_csr(src, dst, args.nodes)
    bptr, bidx = build_csr(dst, src, args.nodes)
    rng = np.random.default_rng(args.seed + 1)
    pairs = rng.integers(0, args.nodes, (args.queries, 2))
    ca, cc, cn = closure_input(args.closure_blocks, 12, 8, args.seed)

    results, report = {}, {"nodes": args.nodes, "edges": args.edges, "queries": args.queries}
    for name in ("numba", "numpy"):
        k = load_backend(name)
        row = {}
        _, row["warmup_s"] = timed(lambda: (k.bfs_distances(fptr, fidx, 0),
                                            k.bidirectional_bfs(fptr, fidx, bptr, bidx, 0, 1),
                                            k.transitive_closure(ca[:10], cc[:10], cn)))
        dist, row["bfs_full_s"] = timed(k.bfs_distances, fptr, fidx, 0, repeat=3)
        t0 = time.perf_counter()
        lengths = [k.bidirectional_bfs(fptr, fidx, bptr, bidx, int(s), int(t))[0] for s, t in pairs]
        row["bidirectional_per_query_ms"] = 1000 * (time.perf_counter() - t0) / len(pairs)
        closure, row["closure_s"] = timed(k.transitive_closure, ca, cc, cn)
        row["closure_pairs"] = int(closure[0].size)
        results[name] = (dist, lengths, closure)
        report[name] = row

    (d1, l1, c1), (d2, l2, c2) = results["numba"], results["numpy"]
    assert np.array_equal(d1, d2), "BFS distances differ between backends"
    assert l1 == l2, "bidirectional lengths differ between backends"
    assert all(np.array_equal(x, y) for x, y in zip(c1, c2)), "closure output differs between backends"
    report["speedup"] = {
        key: report["numpy"][key] / report["numba"][key]
        for key in ("bfs_full_s", "bidirectional_per_query_ms", "closure_s")
        if report["numba"][key] > 0
    }
    print(json.dumps(report, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
