"""Compare the compiled kernels against the pure numpy/scipy fallback.

Run after an editable install:

    python benchmarks/bench_kernels.py

Times the two backend implementations of the diffusion step (CSR times
dense block) and of the Lloyd loop on sizes matching the acceptance sweeps,
then a full recovery pipeline under each backend.
"""

from __future__ import annotations

import time

import numpy as np

import blindnet
from blindnet import _seeds
from blindnet.kernels import _ref

try:
    from blindnet.kernels import _fast
except ImportError:
    _fast = None


def _time(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_csr(backend, matrix, block):
    indptr = np.ascontiguousarray(matrix.indptr, dtype=np.int64)
    indices = np.ascontiguousarray(matrix.indices, dtype=np.int64)
    data = np.ascontiguousarray(matrix.data, dtype=np.float64)
    return _time(lambda: backend.csr_matmul_dense(indptr, indices, data, block))


def bench_lloyd(backend, points, init):
    return _time(lambda: backend.lloyd(points, init, 300))


def main():
    rows = []

    model = blindnet.build_planted(2000, 5, 78.99, 17.75)
    graph = blindnet.sample_graph(model, seed=0)
    operator = blindnet.normalized_adjacency(graph)
    block = _seeds.substream(0, 99).standard_normal((2000, 50))
    rows.append(("csr_matmul_dense n=2000 nnz=%d s=50" % operator.nnz,
                 bench_csr(_ref, operator, block),
                 bench_csr(_fast, operator, block) if _fast else None))

    points = _seeds.substream(1, 99).standard_normal((2000, 5))
    init = points[:5].copy()
    rows.append(("lloyd n=2000 k=5 d=5",
                 bench_lloyd(_ref, points, init),
                 bench_lloyd(_fast, points, init) if _fast else None))

    def pipeline():
        snaps = blindnet.simulate_snapshots(
            operator, blindnet.FilterSpec(), 8, 50, seed=3, check_norm=False
        )
        blindnet.recover_partition(snaps, 5, seed=3)

    rows.append((f"simulate+recover n=2000 T=8 s=50 [{blindnet.kernels.BACKEND}]",
                 _time(pipeline, repeats=3), None))

    width = max(len(r[0]) for r in rows)
    print(f"{'case'.ljust(width)}  python      compiled    speedup")
    for name, ref_t, fast_t in rows:
        if fast_t is None:
            print(f"{name.ljust(width)}  {ref_t * 1e3:8.2f}ms  {'-':>10}")
        else:
            print(f"{name.ljust(width)}  {ref_t * 1e3:8.2f}ms  "
                  f"{fast_t * 1e3:8.2f}ms  {ref_t / fast_t:6.2f}x")
    if _fast is None:
        print("compiled backend unavailable; fallback timings only")


if __name__ == "__main__":
    main()
