"""Benchmark the numba kernels against the pure-numpy fallback.

Times each hot kernel on representative workloads and prints a table
with the speedup.  The numba column includes a warm-up call so JIT
compilation is not measured.

    python benchmarks/bench_kernels.py [--repeat 5]
"""

import argparse
import time

import numpy as np

from quadbench.kernels import numpy_impl

try:
    from quadbench.kernels import numba_impl
except ImportError:
    numba_impl = None


def time_call(fn, repeat):
    best = float("inf")
    for _ in range(repeat):
        t0 = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - t0)
    return best


def make_workloads():
    rng = np.random.default_rng(0)
    lo = rng.uniform(0, 40, size=(30, 3))
    boxes = np.hstack([lo, lo + rng.uniform(0.5, 6, size=(30, 3))])
    base = rng.uniform(0, 40, size=(66, 3))
    axis = rng.normal(size=(66, 3))
    axis /= np.linalg.norm(axis, axis=1, keepdims=True)
    cyls = np.hstack([base, axis, rng.uniform(0.25, 0.5, (66, 1)), np.full((66, 1), 4.0)])
    queries = rng.uniform(0, 40, size=(20000, 3))

    vgrid = rng.random((160, 200, 16)) < 0.03
    perm256 = rng.permutation(256).astype(np.int64)
    perm = np.concatenate([perm256, perm256])

    occ_astar = (rng.random((120, 120, 20)) < 0.15).astype(np.uint8)
    occ_astar[1, 1, 1] = occ_astar[118, 118, 18] = 0

    free_bfs = rng.random((160, 240, 12)) > 0.2
    free_bfs[0, 0, 0] = free_bfs[159, 239, 11] = True

    def collision(impl):
        def run():
            for q in queries[:5000]:
                impl.point_clearance(q[0], q[1], q[2], boxes, cyls)
        return run

    def voxel(impl):
        def run():
            for q in queries[:5000]:
                impl.voxel_clearance(q[0], q[1], q[2], vgrid, 0.0, 0.0, 0.0, 0.25, 1.3)
        return run

    def rasterize(impl):
        def run():
            occ = np.zeros((160, 240, 12), dtype=np.bool_)
            impl.rasterize_boxes(occ, 0, 0, 0, 0.25, boxes, 0.5)
            impl.rasterize_cylinders(occ, 0, 0, 0, 0.25, cyls, 0.5)
        return run

    def bfs(impl):
        def run():
            impl.grid_bfs_steps(free_bfs, 0, 0, 0, 159, 239, 11)
        return run

    def astar(impl):
        def run():
            impl.astar_path(occ_astar, 1, 1, 1, 118, 118, 18, 2_000_000)
        return run

    def perlin(impl):
        def run():
            impl.perlin_field(perm, 160, 200, 16, 1.0, 0.1)
        return run

    return [
        ("point_clearance x5000 (30 boxes + 66 cylinders)", collision),
        ("voxel_clearance x5000 (160x200x16 grid)", voxel),
        ("rasterize scene into 160x240x12 grid", rasterize),
        ("grid_bfs_steps on 160x240x12", bfs),
        ("astar_path on 120x120x20, 15% blocked", astar),
        ("perlin_field 160x200x16", perlin),
    ]


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--repeat", type=int, default=3)
    args = parser.parse_args()

    print(f"{'kernel':50s} {'numpy':>10s} {'numba':>10s} {'speedup':>8s}")
    for name, factory in make_workloads():
        t_np = time_call(factory(numpy_impl), args.repeat)
        if numba_impl is None:
            print(f"{name:50s} {t_np * 1e3:9.1f}ms {'n/a':>10s} {'n/a':>8s}")
            continue
        factory(numba_impl)()  # warm-up / JIT
        t_nb = time_call(factory(numba_impl), args.repeat)
        print(f"{name:50s} {t_np * 1e3:9.1f}ms {t_nb * 1e3:9.1f}ms {t_np / t_nb:7.1f}x")


if __name__ == "__main__":
    main()
