"""Backend equivalence: the numba kernels must match the numpy fallback."""

import numpy as np
import pytest

from quadbench.kernels import numpy_impl

numba_impl = pytest.importorskip("quadbench.kernels.numba_impl")


def random_primitives(rng, n_boxes=8, n_cyls=8):
    lo = rng.uniform(0, 30, size=(n_boxes, 3))
    boxes = np.hstack([lo, lo + rng.uniform(0.5, 5, size=(n_boxes, 3))])
    base = rng.uniform(0, 30, size=(n_cyls, 3))
    axis = rng.normal(size=(n_cyls, 3))
    axis /= np.linalg.norm(axis, axis=1, keepdims=True)
    r = rng.uniform(0.1, 1.0, size=(n_cyls, 1))
    length = rng.uniform(0.5, 5.0, size=(n_cyls, 1))
    return boxes, np.hstack([base, axis, r, length])


def test_point_distances_match():
    rng = np.random.default_rng(0)
    boxes, cyls = random_primitives(rng)
    for _ in range(200):
        p = rng.uniform(-2, 32, size=3)
        a = numpy_impl.point_clearance(p[0], p[1], p[2], boxes, cyls)
        b = numba_impl.point_clearance(p[0], p[1], p[2], boxes, cyls)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_voxel_clearance_matches():
    rng = np.random.default_rng(1)
    grid = rng.random((20, 20, 10)) < 0.05
    for _ in range(100):
        p = rng.uniform(0, 5, size=3)
        a = numpy_impl.voxel_clearance(p[0], p[1], p[2], grid, 0.0, 0.0, 0.0, 0.25, 1.3)
        b = numba_impl.voxel_clearance(p[0], p[1], p[2], grid, 0.0, 0.0, 0.0, 0.25, 1.3)
        assert a == pytest.approx(b, rel=1e-12, abs=1e-12)


def test_rasterization_matches():
    rng = np.random.default_rng(2)
    boxes, cyls = random_primitives(rng, 5, 5)
    occ_a = np.zeros((64, 64, 16), dtype=np.bool_)
    occ_b = np.zeros((64, 64, 16), dtype=np.bool_)
    numpy_impl.rasterize_boxes(occ_a, 0, 0, 0, 0.5, boxes, 0.6)
    numba_impl.rasterize_boxes(occ_b, 0, 0, 0, 0.5, boxes, 0.6)
    assert (occ_a == occ_b).all()
    numpy_impl.rasterize_cylinders(occ_a, 0, 0, 0, 0.5, cyls, 0.6)
    numba_impl.rasterize_cylinders(occ_b, 0, 0, 0, 0.5, cyls, 0.6)
    assert (occ_a == occ_b).all()


def test_voxel_dilation_matches():
    rng = np.random.default_rng(3)
    vgrid = rng.random((40, 40, 8)) < 0.02
    offs = np.array([(i, j, k) for i in range(-2, 3) for j in range(-2, 3)
                     for k in range(-2, 3) if i * i + j * j + k * k <= 4],
                    dtype=np.int32)
    a = np.zeros_like(vgrid)
    b = np.zeros_like(vgrid)
    numpy_impl.dilate_voxels(a, vgrid, offs)
    numba_impl.dilate_voxels(b, vgrid, offs)
    assert (a == b).all()


def test_bfs_steps_match():
    rng = np.random.default_rng(4)
    for trial in range(10):
        free = rng.random((24, 24, 6)) > 0.25
        free[0, 0, 0] = free[23, 23, 5] = True
        a = numpy_impl.grid_bfs_steps(free, 0, 0, 0, 23, 23, 5)
        b = numba_impl.grid_bfs_steps(free, 0, 0, 0, 23, 23, 5)
        assert a == b


def test_astar_paths_identical():
    rng = np.random.default_rng(5)
    for trial in range(10):
        occ = (rng.random((30, 30, 8)) < 0.2).astype(np.uint8)
        occ[1, 1, 1] = occ[28, 28, 6] = 0
        a = numpy_impl.astar_path(occ, 1, 1, 1, 28, 28, 6, 100000)
        b = numba_impl.astar_path(occ, 1, 1, 1, 28, 28, 6, 100000)
        assert a.shape == b.shape
        assert (a == b).all()


def test_astar_empty_grid_near_straight():
    occ = np.zeros((40, 40, 4), dtype=np.uint8)
    path = numpy_impl.astar_path(occ, 0, 0, 0, 39, 39, 0, 100000)
    assert len(path) == 40  # pure diagonal
    assert tuple(path[0]) == (0, 0, 0) and tuple(path[-1]) == (39, 39, 0)


def test_perlin_fields_match():
    rng = np.random.default_rng(6)
    perm256 = rng.permutation(256).astype(np.int64)
    perm = np.concatenate([perm256, perm256])
    a = numpy_impl.perlin_field(perm, 32, 40, 8, 1.0, 0.1)
    b = numba_impl.perlin_field(perm, 32, 40, 8, 1.0, 0.1)
    assert np.allclose(a, b, rtol=1e-12, atol=1e-12)
    assert np.std(a) > 0.01  # non-degenerate field
