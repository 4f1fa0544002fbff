"""Pure-numpy implementations of the hot kernels.

Reference backend: every function here has a numba twin in
``numba_impl`` that must produce the same values (same formulas, same
tie-breaking).  Selected at import time via QUADBENCH_DISABLE_NUMBA.
"""

import heapq

import numpy as np

# 16-entry gradient table for improved Perlin noise (12 directions + 4 repeats).
_GRAD = np.array(
    [
        (1, 1, 0), (-1, 1, 0), (1, -1, 0), (-1, -1, 0),
        (1, 0, 1), (-1, 0, 1), (1, 0, -1), (-1, 0, -1),
        (0, 1, 1), (0, -1, 1), (0, 1, -1), (0, -1, -1),
        (1, 1, 0), (0, -1, 1), (-1, 1, 0), (0, -1, -1),
    ],
    dtype=np.float64,
)

# 26-connected neighbourhood in fixed scan order (shared with numba twin).
_NEIGHBORS26 = np.array(
    [(dx, dy, dz)
     for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)
     if (dx, dy, dz) != (0, 0, 0)],
    dtype=np.int32,
)
_STEP26 = np.sqrt((_NEIGHBORS26.astype(np.float64) ** 2).sum(axis=1))


def box_signed_distance(px, py, pz, boxes):
    """Signed distance from a point to each AABB in ``boxes`` (N,6: lo,hi)."""
    if len(boxes) == 0:
        return np.empty(0)
    p = np.array([px, py, pz])
    q = np.maximum(boxes[:, :3] - p, p - boxes[:, 3:])
    outside = np.sqrt((np.maximum(q, 0.0) ** 2).sum(axis=1))
    inside = np.minimum(q.max(axis=1), 0.0)
    return outside + inside


def cylinder_signed_distance(px, py, pz, cyls):
    """Signed distance to each capped solid cylinder.

    ``cyls`` is (N,8): base xyz, unit axis xyz, radius, length.
    """
    if len(cyls) == 0:
        return np.empty(0)
    w = np.array([px, py, pz]) - cyls[:, 0:3]
    axis = cyls[:, 3:6]
    h = (w * axis).sum(axis=1)
    radial = np.sqrt(np.maximum((w * w).sum(axis=1) - h * h, 0.0))
    dr = radial - cyls[:, 6]
    dh = np.maximum(-h, h - cyls[:, 7])
    out = np.sqrt(np.maximum(dr, 0.0) ** 2 + np.maximum(dh, 0.0) ** 2)
    return out + np.minimum(np.maximum(dr, dh), 0.0)


def point_clearance(px, py, pz, boxes, cyls):
    """Min signed distance from a point to all box/cylinder primitives."""
    best = np.inf
    d = box_signed_distance(px, py, pz, boxes)
    if d.size:
        best = min(best, d.min())
    d = cylinder_signed_distance(px, py, pz, cyls)
    if d.size:
        best = min(best, d.min())
    return float(best)


def voxel_clearance(px, py, pz, grid, origin_x, origin_y, origin_z, vox, cap):
    """Exact distance from a point to the nearest occupied voxel cube.

    Scans only the window that can contain a cube within ``cap``; returns
    ``cap`` when nothing occupied is closer.
    """
    nx, ny, nz = grid.shape
    reach = int(np.ceil(cap / vox)) + 1
    ci = int(np.floor((px - origin_x) / vox))
    cj = int(np.floor((py - origin_y) / vox))
    ck = int(np.floor((pz - origin_z) / vox))
    i0, i1 = max(ci - reach, 0), min(ci + reach + 1, nx)
    j0, j1 = max(cj - reach, 0), min(cj + reach + 1, ny)
    k0, k1 = max(ck - reach, 0), min(ck + reach + 1, nz)
    if i0 >= i1 or j0 >= j1 or k0 >= k1:
        return float(cap)
    sub = grid[i0:i1, j0:j1, k0:k1]
    occ = np.argwhere(sub)
    if occ.size == 0:
        return float(cap)
    lo = (occ + [i0, j0, k0]) * vox + [origin_x, origin_y, origin_z]
    hi = lo + vox
    p = np.array([px, py, pz])
    q = np.maximum(lo - p, p - hi)
    outside = np.sqrt((np.maximum(q, 0.0) ** 2).sum(axis=1))
    inside = np.minimum(q.max(axis=1), 0.0)
    return float(min((outside + inside).min(), cap))


def rasterize_boxes(occ, origin_x, origin_y, origin_z, res, boxes, pad):
    """Mark grid cells whose center is within ``pad`` of any box."""
    nx, ny, nz = occ.shape
    for b in range(len(boxes)):
        lo, hi = boxes[b, :3], boxes[b, 3:]
        i0 = max(int(np.floor((lo[0] - pad - origin_x) / res)), 0)
        j0 = max(int(np.floor((lo[1] - pad - origin_y) / res)), 0)
        k0 = max(int(np.floor((lo[2] - pad - origin_z) / res)), 0)
        i1 = min(int(np.ceil((hi[0] + pad - origin_x) / res)) + 1, nx)
        j1 = min(int(np.ceil((hi[1] + pad - origin_y) / res)) + 1, ny)
        k1 = min(int(np.ceil((hi[2] + pad - origin_z) / res)) + 1, nz)
        if i0 >= i1 or j0 >= j1 or k0 >= k1:
            continue
        xs = origin_x + (np.arange(i0, i1) + 0.5) * res
        ys = origin_y + (np.arange(j0, j1) + 0.5) * res
        zs = origin_z + (np.arange(k0, k1) + 0.5) * res
        qx = np.maximum(lo[0] - xs, xs - hi[0])[:, None, None]
        qy = np.maximum(lo[1] - ys, ys - hi[1])[None, :, None]
        qz = np.maximum(lo[2] - zs, zs - hi[2])[None, None, :]
        outside = np.sqrt(
            np.maximum(qx, 0.0) ** 2 + np.maximum(qy, 0.0) ** 2 + np.maximum(qz, 0.0) ** 2
        )
        inside = np.minimum(np.maximum(np.maximum(qx, qy), qz), 0.0)
        occ[i0:i1, j0:j1, k0:k1] |= (outside + inside) <= pad


def rasterize_cylinders(occ, origin_x, origin_y, origin_z, res, cyls, pad):
    """Mark grid cells whose center is within ``pad`` of any cylinder."""
    nx, ny, nz = occ.shape
    for c in range(len(cyls)):
        base = cyls[c, 0:3]
        axis = cyls[c, 3:6]
        r, length = cyls[c, 6], cyls[c, 7]
        tip = base + axis * length
        lo = np.minimum(base, tip) - r - pad
        hi = np.maximum(base, tip) + r + pad
        i0 = max(int(np.floor((lo[0] - origin_x) / res)), 0)
        j0 = max(int(np.floor((lo[1] - origin_y) / res)), 0)
        k0 = max(int(np.floor((lo[2] - origin_z) / res)), 0)
        i1 = min(int(np.ceil((hi[0] - origin_x) / res)) + 1, nx)
        j1 = min(int(np.ceil((hi[1] - origin_y) / res)) + 1, ny)
        k1 = min(int(np.ceil((hi[2] - origin_z) / res)) + 1, nz)
        if i0 >= i1 or j0 >= j1 or k0 >= k1:
            continue
        xs = origin_x + (np.arange(i0, i1) + 0.5) * res
        ys = origin_y + (np.arange(j0, j1) + 0.5) * res
        zs = origin_z + (np.arange(k0, k1) + 0.5) * res
        wx = xs[:, None, None] - base[0]
        wy = ys[None, :, None] - base[1]
        wz = zs[None, None, :] - base[2]
        h = wx * axis[0] + wy * axis[1] + wz * axis[2]
        radial = np.sqrt(np.maximum(wx * wx + wy * wy + wz * wz - h * h, 0.0))
        dr = radial - r
        dh = np.maximum(-h, h - length)
        out = np.sqrt(np.maximum(dr, 0.0) ** 2 + np.maximum(dh, 0.0) ** 2)
        sd = out + np.minimum(np.maximum(dr, dh), 0.0)
        occ[i0:i1, j0:j1, k0:k1] |= sd <= pad


def dilate_voxels(occ, vgrid, offsets):
    """OR an aligned voxel grid into ``occ``, dilated by integer offsets."""
    nx, ny, nz = occ.shape
    idx = np.argwhere(vgrid).astype(np.int64)
    if idx.size == 0:
        return
    for off in offsets:
        t = idx + off
        keep = (
            (t[:, 0] >= 0) & (t[:, 0] < nx)
            & (t[:, 1] >= 0) & (t[:, 1] < ny)
            & (t[:, 2] >= 0) & (t[:, 2] < nz)
        )
        t = t[keep]
        occ[t[:, 0], t[:, 1], t[:, 2]] = True


def grid_bfs_steps(free, sx, sy, sz, gx, gy, gz):
    """6-connected BFS step count from start to goal cell, -1 if unreachable."""
    if not free[sx, sy, sz] or not free[gx, gy, gz]:
        return -1
    if (sx, sy, sz) == (gx, gy, gz):
        return 0
    visited = np.zeros_like(free)
    frontier = np.zeros_like(free)
    frontier[sx, sy, sz] = True
    visited[sx, sy, sz] = True
    steps = 0
    while frontier.any():
        steps += 1
        nxt = np.zeros_like(free)
        nxt[1:, :, :] |= frontier[:-1, :, :]
        nxt[:-1, :, :] |= frontier[1:, :, :]
        nxt[:, 1:, :] |= frontier[:, :-1, :]
        nxt[:, :-1, :] |= frontier[:, 1:, :]
        nxt[:, :, 1:] |= frontier[:, :, :-1]
        nxt[:, :, :-1] |= frontier[:, :, 1:]
        nxt &= free
        nxt &= ~visited
        if nxt[gx, gy, gz]:
            return steps
        visited |= nxt
        frontier = nxt
    return -1


def astar_path(occ, sx, sy, sz, gx, gy, gz, max_expansions):
    """26-connected grid A*; returns (P,3) int32 path or an empty array.

    Tie-breaking is by push order so the numba twin expands identically.
    """
    nx, ny, nz = occ.shape
    if occ[sx, sy, sz] or occ[gx, gy, gz]:
        return np.empty((0, 3), dtype=np.int32)

    def flat(i, j, k):
        return (i * ny + j) * nz + k

    def heur(i, j, k):
        return float(np.sqrt((i - gx) ** 2 + (j - gy) ** 2 + (k - gz) ** 2))

    g = {flat(sx, sy, sz): 0.0}
    parent = {}
    counter = 0
    heap = [(heur(sx, sy, sz), counter, 0.0, sx, sy, sz)]
    expansions = 0
    goal_flat = flat(gx, gy, gz)
    while heap and expansions < max_expansions:
        _, _, g_push, ci, cj, ck = heapq.heappop(heap)
        cf = flat(ci, cj, ck)
        gc = g[cf]
        if g_push > gc:
            continue  # stale entry
        if cf == goal_flat:
            path = [(ci, cj, ck)]
            while cf in parent:
                cf = parent[cf]
                k = cf % nz
                j = (cf // nz) % ny
                i = cf // (ny * nz)
                path.append((i, j, k))
            path.reverse()
            return np.array(path, dtype=np.int32)
        expansions += 1
        for n in range(26):
            di, dj, dk = _NEIGHBORS26[n]
            ti, tj, tk = ci + di, cj + dj, ck + dk
            if ti < 0 or ti >= nx or tj < 0 or tj >= ny or tk < 0 or tk >= nz:
                continue
            if occ[ti, tj, tk]:
                continue
            tf = flat(ti, tj, tk)
            ng = gc + _STEP26[n]
            if tf not in g or ng < g[tf]:
                g[tf] = ng
                parent[tf] = cf
                counter += 1
                heapq.heappush(heap, (ng + heur(ti, tj, tk), counter, ng, ti, tj, tk))
    return np.empty((0, 3), dtype=np.int32)


def _fade(t):
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


def perlin_field(perm, nx, ny, nz, cell, freq):
    """Improved Perlin noise sampled at cell centers, scaled by ``freq``.

    ``perm`` is a 512-entry doubled permutation table.
    """
    x = (np.arange(nx) + 0.5) * cell * freq
    y = (np.arange(ny) + 0.5) * cell * freq
    z = (np.arange(nz) + 0.5) * cell * freq
    xg, yg, zg = np.meshgrid(x, y, z, indexing="ij")
    xi = np.floor(xg).astype(np.int64) & 255
    yi = np.floor(yg).astype(np.int64) & 255
    zi = np.floor(zg).astype(np.int64) & 255
    xf = xg - np.floor(xg)
    yf = yg - np.floor(yg)
    zf = zg - np.floor(zg)
    u, v, w = _fade(xf), _fade(yf), _fade(zf)

    a = perm[xi] + yi
    b = perm[xi + 1] + yi
    aa = perm[a] + zi
    ab = perm[a + 1] + zi
    ba = perm[b] + zi
    bb = perm[b + 1] + zi

    def grad(h, gx, gy, gz):
        gi = h & 15
        return _GRAD[gi, 0] * gx + _GRAD[gi, 1] * gy + _GRAD[gi, 2] * gz

    def lerp(t, lo, hi):
        return lo + t * (hi - lo)

    x1 = lerp(u, grad(perm[aa], xf, yf, zf), grad(perm[ba], xf - 1, yf, zf))
    x2 = lerp(u, grad(perm[ab], xf, yf - 1, zf), grad(perm[bb], xf - 1, yf - 1, zf))
    y1 = lerp(v, x1, x2)
    x3 = lerp(u, grad(perm[aa + 1], xf, yf, zf - 1), grad(perm[ba + 1], xf - 1, yf, zf - 1))
    x4 = lerp(u, grad(perm[ab + 1], xf, yf - 1, zf - 1), grad(perm[bb + 1], xf - 1, yf - 1, zf - 1))
    y2 = lerp(v, x3, x4)
    return lerp(w, y1, y2)
