"""Numba-jitted implementations of the hot kernels.

Mirrors ``numpy_impl`` function for function; formulas and tie-breaking
match so both backends produce the same results.
"""

import numpy as np
from numba import njit

_GRAD = np.array(
    [
        (1, 1, 0), (-1, 1, 0), (1, -1, 0), (-1, -1, 0),
        (1, 0, 1), (-1, 0, 1), (1, 0, -1), (-1, 0, -1),
        (0, 1, 1), (0, -1, 1), (0, 1, -1), (0, -1, -1),
        (1, 1, 0), (0, -1, 1), (-1, 1, 0), (0, -1, -1),
    ],
    dtype=np.float64,
)

_NEIGHBORS26 = np.array(
    [(dx, dy, dz)
     for dx in (-1, 0, 1) for dy in (-1, 0, 1) for dz in (-1, 0, 1)
     if (dx, dy, dz) != (0, 0, 0)],
    dtype=np.int32,
)
_STEP26 = np.sqrt((_NEIGHBORS26.astype(np.float64) ** 2).sum(axis=1))


@njit(cache=True)
def _box_sd(px, py, pz, lx, ly, lz, hx, hy, hz):
    qx = max(lx - px, px - hx)
    qy = max(ly - py, py - hy)
    qz = max(lz - pz, pz - hz)
    ox = max(qx, 0.0)
    oy = max(qy, 0.0)
    oz = max(qz, 0.0)
    outside = np.sqrt(ox * ox + oy * oy + oz * oz)
    inside = min(max(qx, max(qy, qz)), 0.0)
    return outside + inside


@njit(cache=True)
def _cyl_sd(px, py, pz, bx, by, bz, ax, ay, az, r, length):
    wx = px - bx
    wy = py - by
    wz = pz - bz
    h = wx * ax + wy * ay + wz * az
    radial = np.sqrt(max(wx * wx + wy * wy + wz * wz - h * h, 0.0))
    dr = radial - r
    dh = max(-h, h - length)
    out = np.sqrt(max(dr, 0.0) ** 2 + max(dh, 0.0) ** 2)
    return out + min(max(dr, dh), 0.0)


@njit(cache=True)
def box_signed_distance(px, py, pz, boxes):
    n = boxes.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = _box_sd(px, py, pz, boxes[i, 0], boxes[i, 1], boxes[i, 2],
                         boxes[i, 3], boxes[i, 4], boxes[i, 5])
    return out


@njit(cache=True)
def cylinder_signed_distance(px, py, pz, cyls):
    n = cyls.shape[0]
    out = np.empty(n)
    for i in range(n):
        out[i] = _cyl_sd(px, py, pz, cyls[i, 0], cyls[i, 1], cyls[i, 2],
                         cyls[i, 3], cyls[i, 4], cyls[i, 5], cyls[i, 6], cyls[i, 7])
    return out


@njit(cache=True)
def point_clearance(px, py, pz, boxes, cyls):
    best = np.inf
    for i in range(boxes.shape[0]):
        d = _box_sd(px, py, pz, boxes[i, 0], boxes[i, 1], boxes[i, 2],
                    boxes[i, 3], boxes[i, 4], boxes[i, 5])
        if d < best:
            best = d
    for i in range(cyls.shape[0]):
        d = _cyl_sd(px, py, pz, cyls[i, 0], cyls[i, 1], cyls[i, 2],
                    cyls[i, 3], cyls[i, 4], cyls[i, 5], cyls[i, 6], cyls[i, 7])
        if d < best:
            best = d
    return best


@njit(cache=True)
def voxel_clearance(px, py, pz, grid, origin_x, origin_y, origin_z, vox, cap):
    nx, ny, nz = grid.shape
    reach = int(np.ceil(cap / vox)) + 1
    ci = int(np.floor((px - origin_x) / vox))
    cj = int(np.floor((py - origin_y) / vox))
    ck = int(np.floor((pz - origin_z) / vox))
    best = cap
    for i in range(max(ci - reach, 0), min(ci + reach + 1, nx)):
        for j in range(max(cj - reach, 0), min(cj + reach + 1, ny)):
            for k in range(max(ck - reach, 0), min(ck + reach + 1, nz)):
                if not grid[i, j, k]:
                    continue
                lx = origin_x + i * vox
                ly = origin_y + j * vox
                lz = origin_z + k * vox
                d = _box_sd(px, py, pz, lx, ly, lz, lx + vox, ly + vox, lz + vox)
                if d < best:
                    best = d
    return best


@njit(cache=True)
def rasterize_boxes(occ, origin_x, origin_y, origin_z, res, boxes, pad):
    nx, ny, nz = occ.shape
    for b in range(boxes.shape[0]):
        lx, ly, lz = boxes[b, 0], boxes[b, 1], boxes[b, 2]
        hx, hy, hz = boxes[b, 3], boxes[b, 4], boxes[b, 5]
        i0 = max(int(np.floor((lx - pad - origin_x) / res)), 0)
        j0 = max(int(np.floor((ly - pad - origin_y) / res)), 0)
        k0 = max(int(np.floor((lz - pad - origin_z) / res)), 0)
        i1 = min(int(np.ceil((hx + pad - origin_x) / res)) + 1, nx)
        j1 = min(int(np.ceil((hy + pad - origin_y) / res)) + 1, ny)
        k1 = min(int(np.ceil((hz + pad - origin_z) / res)) + 1, nz)
        for i in range(i0, i1):
            cx = origin_x + (i + 0.5) * res
            for j in range(j0, j1):
                cy = origin_y + (j + 0.5) * res
                for k in range(k0, k1):
                    cz = origin_z + (k + 0.5) * res
                    if _box_sd(cx, cy, cz, lx, ly, lz, hx, hy, hz) <= pad:
                        occ[i, j, k] = True


@njit(cache=True)
def rasterize_cylinders(occ, origin_x, origin_y, origin_z, res, cyls, pad):
    nx, ny, nz = occ.shape
    for c in range(cyls.shape[0]):
        bx, by, bz = cyls[c, 0], cyls[c, 1], cyls[c, 2]
        ax, ay, az = cyls[c, 3], cyls[c, 4], cyls[c, 5]
        r, length = cyls[c, 6], cyls[c, 7]
        tx, ty, tz = bx + ax * length, by + ay * length, bz + az * length
        lx, hx = min(bx, tx) - r - pad, max(bx, tx) + r + pad
        ly, hy = min(by, ty) - r - pad, max(by, ty) + r + pad
        lz, hz = min(bz, tz) - r - pad, max(bz, tz) + r + pad
        i0 = max(int(np.floor((lx - origin_x) / res)), 0)
        j0 = max(int(np.floor((ly - origin_y) / res)), 0)
        k0 = max(int(np.floor((lz - origin_z) / res)), 0)
        i1 = min(int(np.ceil((hx - origin_x) / res)) + 1, nx)
        j1 = min(int(np.ceil((hy - origin_y) / res)) + 1, ny)
        k1 = min(int(np.ceil((hz - origin_z) / res)) + 1, nz)
        for i in range(i0, i1):
            cx = origin_x + (i + 0.5) * res
            for j in range(j0, j1):
                cy = origin_y + (j + 0.5) * res
                for k in range(k0, k1):
                    cz = origin_z + (k + 0.5) * res
                    if _cyl_sd(cx, cy, cz, bx, by, bz, ax, ay, az, r, length) <= pad:
                        occ[i, j, k] = True


@njit(cache=True)
def dilate_voxels(occ, vgrid, offsets):
    nx, ny, nz = occ.shape
    vx, vy, vz = vgrid.shape
    for i in range(vx):
        for j in range(vy):
            for k in range(vz):
                if not vgrid[i, j, k]:
                    continue
                for o in range(offsets.shape[0]):
                    ti = i + offsets[o, 0]
                    tj = j + offsets[o, 1]
                    tk = k + offsets[o, 2]
                    if 0 <= ti < nx and 0 <= tj < ny and 0 <= tk < nz:
                        occ[ti, tj, tk] = True


@njit(cache=True)
def grid_bfs_steps(free, sx, sy, sz, gx, gy, gz):
    nx, ny, nz = free.shape
    if not free[sx, sy, sz] or not free[gx, gy, gz]:
        return -1
    dist = np.full(nx * ny * nz, -1, dtype=np.int32)
    queue = np.empty(nx * ny * nz, dtype=np.int64)
    start = (sx * ny + sy) * nz + sz
    goal = (gx * ny + gy) * nz + gz
    dist[start] = 0
    queue[0] = start
    head, tail = 0, 1
    while head < tail:
        cur = queue[head]
        head += 1
        if cur == goal:
            return dist[cur]
        ck = cur % nz
        cj = (cur // nz) % ny
        ci = cur // (ny * nz)
        d = dist[cur] + 1
        for n in range(6):
            if n == 0:
                ti, tj, tk = ci - 1, cj, ck
            elif n == 1:
                ti, tj, tk = ci + 1, cj, ck
            elif n == 2:
                ti, tj, tk = ci, cj - 1, ck
            elif n == 3:
                ti, tj, tk = ci, cj + 1, ck
            elif n == 4:
                ti, tj, tk = ci, cj, ck - 1
            else:
                ti, tj, tk = ci, cj, ck + 1
            if ti < 0 or ti >= nx or tj < 0 or tj >= ny or tk < 0 or tk >= nz:
                continue
            if not free[ti, tj, tk]:
                continue
            t = (ti * ny + tj) * nz + tk
            if dist[t] < 0:
                dist[t] = d
                queue[tail] = t
                tail += 1
    return -1


@njit(cache=True)
def _heap_push(fkey, ckey, gval, node, size, f, c, g, n):
    fkey[size] = f
    ckey[size] = c
    gval[size] = g
    node[size] = n
    i = size
    while i > 0:
        p = (i - 1) // 2
        if fkey[p] > fkey[i] or (fkey[p] == fkey[i] and ckey[p] > ckey[i]):
            fkey[p], fkey[i] = fkey[i], fkey[p]
            ckey[p], ckey[i] = ckey[i], ckey[p]
            gval[p], gval[i] = gval[i], gval[p]
            node[p], node[i] = node[i], node[p]
            i = p
        else:
            break
    return size + 1


@njit(cache=True)
def _heap_pop(fkey, ckey, gval, node, size):
    top_g = gval[0]
    top_n = node[0]
    size -= 1
    fkey[0] = fkey[size]
    ckey[0] = ckey[size]
    gval[0] = gval[size]
    node[0] = node[size]
    i = 0
    while True:
        l = 2 * i + 1
        r = l + 1
        best = i
        if l < size and (fkey[l] < fkey[best] or (fkey[l] == fkey[best] and ckey[l] < ckey[best])):
            best = l
        if r < size and (fkey[r] < fkey[best] or (fkey[r] == fkey[best] and ckey[r] < ckey[best])):
            best = r
        if best == i:
            break
        fkey[best], fkey[i] = fkey[i], fkey[best]
        ckey[best], ckey[i] = ckey[i], ckey[best]
        gval[best], gval[i] = gval[i], gval[best]
        node[best], node[i] = node[i], node[best]
        i = best
    return top_g, top_n, size


@njit(cache=True)
def astar_path(occ, sx, sy, sz, gx, gy, gz, max_expansions):
    nx, ny, nz = occ.shape
    empty = np.empty((0, 3), dtype=np.int32)
    if occ[sx, sy, sz] or occ[gx, gy, gz]:
        return empty
    total = nx * ny * nz
    g = np.full(total, np.inf)
    parent = np.full(total, -1, dtype=np.int64)
    cap = 1024
    fkey = np.empty(cap)
    ckey = np.empty(cap, dtype=np.int64)
    gval = np.empty(cap)
    node = np.empty(cap, dtype=np.int64)
    start = (sx * ny + sy) * nz + sz
    goal = (gx * ny + gy) * nz + gz
    g[start] = 0.0
    h0 = np.sqrt(float((sx - gx) ** 2 + (sy - gy) ** 2 + (sz - gz) ** 2))
    size = _heap_push(fkey, ckey, gval, node, 0, h0, 0, 0.0, start)
    counter = 1
    expansions = 0
    while size > 0 and expansions < max_expansions:
        g_push, cur, size = _heap_pop(fkey, ckey, gval, node, size)
        if g_push > g[cur]:
            continue
        if cur == goal:
            length = 1
            walk = cur
            while parent[walk] >= 0:
                walk = parent[walk]
                length += 1
            path = np.empty((length, 3), dtype=np.int32)
            walk = cur
            for idx in range(length - 1, -1, -1):
                path[idx, 0] = walk // (ny * nz)
                path[idx, 1] = (walk // nz) % ny
                path[idx, 2] = walk % nz
                walk = parent[walk]
            return path
        expansions += 1
        ck = cur % nz
        cj = (cur // nz) % ny
        ci = cur // (ny * nz)
        gc = g[cur]
        for n in range(26):
            ti = ci + _NEIGHBORS26[n, 0]
            tj = cj + _NEIGHBORS26[n, 1]
            tk = ck + _NEIGHBORS26[n, 2]
            if ti < 0 or ti >= nx or tj < 0 or tj >= ny or tk < 0 or tk >= nz:
                continue
            if occ[ti, tj, tk]:
                continue
            t = (ti * ny + tj) * nz + tk
            ng = gc + _STEP26[n]
            if ng < g[t]:
                g[t] = ng
                parent[t] = cur
                if size >= cap:
                    cap *= 2
                    fkey = np.concatenate((fkey, np.empty(cap // 2)))
                    ckey = np.concatenate((ckey, np.empty(cap // 2, dtype=np.int64)))
                    gval = np.concatenate((gval, np.empty(cap // 2)))
                    node = np.concatenate((node, np.empty(cap // 2, dtype=np.int64)))
                h = np.sqrt(float((ti - gx) ** 2 + (tj - gy) ** 2 + (tk - gz) ** 2))
                size = _heap_push(fkey, ckey, gval, node, size, ng + h, counter, ng, t)
                counter += 1
    return empty


@njit(cache=True)
def _fade(t):
    return t * t * t * (t * (t * 6.0 - 15.0) + 10.0)


@njit(cache=True)
def _grad(h, x, y, z):
    gi = h & 15
    return _GRAD[gi, 0] * x + _GRAD[gi, 1] * y + _GRAD[gi, 2] * z


@njit(cache=True)
def perlin_field(perm, nx, ny, nz, cell, freq):
    out = np.empty((nx, ny, nz))
    for i in range(nx):
        x = (i + 0.5) * cell * freq
        xi = int(np.floor(x)) & 255
        xf = x - np.floor(x)
        u = _fade(xf)
        for j in range(ny):
            y = (j + 0.5) * cell * freq
            yi = int(np.floor(y)) & 255
            yf = y - np.floor(y)
            v = _fade(yf)
            a = perm[xi] + yi
            b = perm[xi + 1] + yi
            for k in range(nz):
                z = (k + 0.5) * cell * freq
                zi = int(np.floor(z)) & 255
                zf = z - np.floor(z)
                w = _fade(zf)
                aa = perm[a] + zi
                ab = perm[a + 1] + zi
                ba = perm[b] + zi
                bb = perm[b + 1] + zi
                x1 = _grad(perm[aa], xf, yf, zf) + u * (
                    _grad(perm[ba], xf - 1, yf, zf) - _grad(perm[aa], xf, yf, zf))
                x2 = _grad(perm[ab], xf, yf - 1, zf) + u * (
                    _grad(perm[bb], xf - 1, yf - 1, zf) - _grad(perm[ab], xf, yf - 1, zf))
                y1 = x1 + v * (x2 - x1)
                x3 = _grad(perm[aa + 1], xf, yf, zf - 1) + u * (
                    _grad(perm[ba + 1], xf - 1, yf, zf - 1) - _grad(perm[aa + 1], xf, yf, zf - 1))
                x4 = _grad(perm[ab + 1], xf, yf - 1, zf - 1) + u * (
                    _grad(perm[bb + 1], xf - 1, yf - 1, zf - 1) - _grad(perm[ab + 1], xf, yf - 1, zf - 1))
                y2 = x3 + v * (x4 - x3)
                out[i, j, k] = y1 + w * (y2 - y1)
    return out
