"""Scene geometry: obstacle primitives, exact distances, occupancy grids.

Scenes occupy x in [0, width], y in [0, length], z up; the flight axis
is +y (start near y=0, goal near y=length).  All primitives and the
Scene itself are immutable after construction.
"""

import math
import weakref
from dataclasses import dataclass

import numpy as np
from scipy.spatial import cKDTree

from . import kernels


@dataclass(frozen=True)
class Cylinder:
    """Solid capped cylinder: base point, unit axis, radius, length (m)."""

    base: tuple[float, float, float]
    axis: tuple[float, float, float]
    radius: float
    length: float

    def __post_init__(self):
        object.__setattr__(self, "base", tuple(float(v) for v in self.base))
        object.__setattr__(self, "axis", tuple(float(v) for v in self.axis))
        if self.radius <= 0 or self.length <= 0:
            raise ValueError("radius and length must be positive")
        norm = math.sqrt(sum(a * a for a in self.axis))
        if abs(norm - 1.0) > 1e-9:
            raise ValueError(f"axis must be a unit vector (norm {norm})")

    @property
    def tip(self):
        return tuple(b + a * self.length for b, a in zip(self.base, self.axis))

    @property
    def tilt(self):
        """Angle from vertical, radians in [0, pi]."""
        return math.acos(max(-1.0, min(1.0, self.axis[2])))


@dataclass(frozen=True)
class Box:
    """Axis-aligned box given by min/max corners (m)."""

    min_corner: tuple[float, float, float]
    max_corner: tuple[float, float, float]

    def __post_init__(self):
        object.__setattr__(self, "min_corner", tuple(float(v) for v in self.min_corner))
        object.__setattr__(self, "max_corner", tuple(float(v) for v in self.max_corner))
        if any(lo >= hi for lo, hi in zip(self.min_corner, self.max_corner)):
            raise ValueError("min_corner must be < max_corner component-wise")


@dataclass(frozen=True, eq=False)
class VoxelSet:
    """Occupied cubes on a lattice anchored at the scene origin.

    ``cells`` is an (N,3) integer array of occupied (i,j,k) indices;
    treat it as read-only.
    """

    voxel_size: float
    dims: tuple[int, int, int]
    cells: np.ndarray

    def __post_init__(self):
        if self.voxel_size <= 0:
            raise ValueError("voxel_size must be positive")
        cells = np.ascontiguousarray(np.asarray(self.cells, dtype=np.int32))
        if cells.ndim != 2 or cells.shape[1] != 3:
            raise ValueError("cells must be an (N,3) index array")
        cells.setflags(write=False)
        object.__setattr__(self, "cells", cells)
        object.__setattr__(self, "dims", tuple(int(d) for d in self.dims))

    def dense(self):
        """Dense boolean occupancy grid of shape ``dims``."""
        grid = np.zeros(self.dims, dtype=np.bool_)
        if len(self.cells):
            grid[self.cells[:, 0], self.cells[:, 1], self.cells[:, 2]] = True
        return grid

    @property
    def fill_fraction(self):
        return len(self.cells) / float(np.prod(self.dims))


CLASSIC_FAMILIES = ("forest", "urban", "cylinder_field")
THEORETICAL_FAMILIES = ("narrow_gap", "sudden_drop", "maze", "perlin_noise")
FAMILIES = CLASSIC_FAMILIES + THEORETICAL_FAMILIES


def family_class(family: str) -> str:
    if family in CLASSIC_FAMILIES:
        return "classic"
    if family in THEORETICAL_FAMILIES:
        return "theoretical"
    raise ValueError(f"unknown scenario family {family!r}")


@dataclass(frozen=True)
class Scene:
    """One generated scenario instance."""

    family: str
    bounds: tuple[float, float]  # (width, length)
    ceiling: float
    obstacles: tuple
    start_pose: tuple[float, float, float, float]  # x, y, z, yaw
    goal_point: tuple[float, float, float]
    seed: int
    index: int

    def __post_init__(self):
        family_class(self.family)
        object.__setattr__(self, "obstacles", tuple(self.obstacles))
        if not 1 <= self.index <= 10:
            raise ValueError("scene index must be in 1..10")

    @property
    def width(self):
        return self.bounds[0]

    @property
    def length(self):
        return self.bounds[1]

    @property
    def start_point(self):
        return self.start_pose[:3]


@dataclass(frozen=True, eq=False)
class SceneArrays:
    """Scene primitives packed for the kernels."""

    boxes: np.ndarray  # (M,6): min xyz, max xyz
    cylinders: np.ndarray  # (K,8): base xyz, axis xyz, radius, length
    voxels: VoxelSet | None


def pack_scene(scene: Scene) -> SceneArrays:
    boxes, cyls, voxels = [], [], None
    for ob in scene.obstacles:
        if isinstance(ob, Box):
            boxes.append(ob.min_corner + ob.max_corner)
        elif isinstance(ob, Cylinder):
            cyls.append(ob.base + ob.axis + (ob.radius, ob.length))
        elif isinstance(ob, VoxelSet):
            if voxels is not None:
                raise ValueError("at most one VoxelSet per scene")
            voxels = ob
        else:
            raise TypeError(f"unknown primitive {type(ob)}")
    return SceneArrays(
        boxes=np.ascontiguousarray(np.array(boxes, dtype=np.float64).reshape(-1, 6)),
        cylinders=np.ascontiguousarray(np.array(cyls, dtype=np.float64).reshape(-1, 8)),
        voxels=voxels,
    )


class SceneGeometry:
    """Per-scene caches: packed arrays, dense voxel grid, sensor KD-tree."""

    SENSOR_DENSITY = 32.0  # surface points per m^2 fed to planners

    def __init__(self, scene: Scene):
        self.scene = scene
        self.arrays = pack_scene(scene)
        self._voxel_grid = self.arrays.voxels.dense() if self.arrays.voxels else None
        self._tree = None
        self._points = None

    def clearance(self, x, y, z, cap=2.0):
        """Exact distance from a point to the nearest obstacle surface.

        Negative inside a primitive.  Values are exact below ``cap``;
        voxel scenes report at most ``cap`` for far-away clutter.
        """
        d = kernels.point_clearance(x, y, z, self.arrays.boxes, self.arrays.cylinders)
        if self._voxel_grid is not None:
            vs = self.arrays.voxels.voxel_size
            d = min(d, kernels.voxel_clearance(x, y, z, self._voxel_grid,
                                               0.0, 0.0, 0.0, vs, cap))
        return d

    def sensor_points(self):
        if self._points is None:
            self._points = sample_surface_points(self.scene, self.SENSOR_DENSITY)
            if len(self._points):
                self._tree = cKDTree(self._points)
        return self._points

    def sense(self, position, radius):
        """Obstacle surface points within ``radius`` of the vehicle."""
        pts = self.sensor_points()
        if self._tree is None:
            return pts[:0]
        idx = self._tree.query_ball_point(np.asarray(position), radius)
        return pts[np.asarray(idx, dtype=np.int64)] if idx else pts[:0]


_GEOMETRY_CACHE: "weakref.WeakKeyDictionary[Scene, SceneGeometry]" = weakref.WeakKeyDictionary()


def scene_geometry(scene: Scene) -> SceneGeometry:
    geo = _GEOMETRY_CACHE.get(scene)
    if geo is None:
        geo = SceneGeometry(scene)
        _GEOMETRY_CACHE[scene] = geo
    return geo


@dataclass(frozen=True, eq=False)
class OccupancyGrid:
    """Conservative rasterization of a scene: no obstacle cell is free."""

    resolution: float
    dims: tuple[int, int, int]
    occupancy: np.ndarray
    origin: tuple[float, float, float] = (0.0, 0.0, 0.0)

    def __post_init__(self):
        self.occupancy.setflags(write=False)

    def cell_of(self, point):
        i = int((point[0] - self.origin[0]) / self.resolution)
        j = int((point[1] - self.origin[1]) / self.resolution)
        k = int((point[2] - self.origin[2]) / self.resolution)
        nx, ny, nz = self.dims
        return (min(max(i, 0), nx - 1), min(max(j, 0), ny - 1), min(max(k, 0), nz - 1))

    @classmethod
    def from_scene(cls, scene: Scene, resolution: float = 0.25, inflate: float = 0.0):
        """Rasterize; cells within inflate + half cell diagonal of any
        primitive are marked, which keeps the grid conservative."""
        nx = max(int(math.ceil(scene.width / resolution)), 1)
        ny = max(int(math.ceil(scene.length / resolution)), 1)
        nz = max(int(math.ceil(scene.ceiling / resolution)), 1)
        occ = np.zeros((nx, ny, nz), dtype=np.bool_)
        pad = inflate + resolution * math.sqrt(3.0) / 2.0
        arrays = pack_scene(scene)
        if len(arrays.boxes):
            kernels.rasterize_boxes(occ, 0.0, 0.0, 0.0, resolution, arrays.boxes, pad)
        if len(arrays.cylinders):
            kernels.rasterize_cylinders(occ, 0.0, 0.0, 0.0, resolution, arrays.cylinders, pad)
        if arrays.voxels is not None:
            vs = arrays.voxels.voxel_size
            if abs(vs - resolution) > 1e-12:
                raise ValueError("voxel scenes must be rasterized at their voxel size")
            # Conservative center-to-center rule: pad by the voxel half diagonal too.
            pad_cc = pad + vs * math.sqrt(3.0) / 2.0
            reach = int(math.ceil(pad_cc / resolution))
            offs = [(i, j, k)
                    for i in range(-reach, reach + 1)
                    for j in range(-reach, reach + 1)
                    for k in range(-reach, reach + 1)
                    if math.sqrt(i * i + j * j + k * k) * resolution <= pad_cc]
            kernels.dilate_voxels(occ, arrays.voxels.dense(),
                                  np.array(offs, dtype=np.int32).reshape(-1, 3))
        return cls(resolution=resolution, dims=(nx, ny, nz), occupancy=occ)


@dataclass(frozen=True)
class ValidationResult:
    solvable: bool
    path_length: float | None = None


def validate_scene(scene: Scene, vehicle_radius: float = 0.3,
                   resolution: float = 0.25) -> ValidationResult:
    """Flood-fill solvability check on the inflated occupancy grid.

    Conservative: a Solvable verdict guarantees a corridor; Unsolvable
    may occasionally reject geometrically tight but flyable scenes.
    """
    grid = OccupancyGrid.from_scene(scene, resolution, inflate=vehicle_radius)
    free = ~grid.occupancy
    si, sj, sk = grid.cell_of(scene.start_point)
    gi, gj, gk = grid.cell_of(scene.goal_point)
    steps = kernels.grid_bfs_steps(free, si, sj, sk, gi, gj, gk)
    if steps < 0:
        return ValidationResult(solvable=False)
    return ValidationResult(solvable=True, path_length=steps * resolution)


def _box_face_points(lo, hi, density):
    pts = []
    ex = [hi[i] - lo[i] for i in range(3)]
    for axis in range(3):
        u, v = (axis + 1) % 3, (axis + 2) % 3
        nu = max(1, round(ex[u] * math.sqrt(density)))
        nv = max(1, round(ex[v] * math.sqrt(density)))
        us = lo[u] + (np.arange(nu) + 0.5) / nu * ex[u]
        vs = lo[v] + (np.arange(nv) + 0.5) / nv * ex[v]
        ug, vg = np.meshgrid(us, vs, indexing="ij")
        for w in (lo[axis], hi[axis]):
            face = np.empty((nu * nv, 3))
            face[:, axis] = w
            face[:, u] = ug.ravel()
            face[:, v] = vg.ravel()
            pts.append(face)
    return pts


def _cylinder_points(cyl: Cylinder, density):
    a = np.array(cyl.axis)
    ref = np.array([0.0, 0.0, 1.0]) if abs(a[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
    u = np.cross(a, ref)
    u /= np.linalg.norm(u)
    v = np.cross(a, u)
    base = np.array(cyl.base)
    pts = []
    # lateral surface
    ntheta = max(3, round(2 * math.pi * cyl.radius * math.sqrt(density)))
    nh = max(1, round(cyl.length * math.sqrt(density)))
    theta = 2 * math.pi * (np.arange(ntheta) + 0.5) / ntheta
    hs = (np.arange(nh) + 0.5) / nh * cyl.length
    ring = cyl.radius * (np.outer(np.cos(theta), u) + np.outer(np.sin(theta), v))
    for h in hs:
        pts.append(base + a * h + ring)
    # caps, sampled as concentric rings
    nr = max(1, round(cyl.radius * math.sqrt(density)))
    for cap_center in (base, base + a * cyl.length):
        for ri in range(nr):
            r = cyl.radius * (ri + 0.5) / nr
            nc = max(1, round(2 * math.pi * r * math.sqrt(density)))
            th = 2 * math.pi * (np.arange(nc) + 0.5) / nc
            pts.append(cap_center + r * (np.outer(np.cos(th), u) + np.outer(np.sin(th), v)))
    return pts


def _voxel_points(vox: VoxelSet, density):
    grid = vox.dense()
    vs = vox.voxel_size
    n_face = max(1, round(vs * math.sqrt(density)))
    offs = (np.arange(n_face) + 0.5) / n_face * vs
    og, pg = np.meshgrid(offs, offs, indexing="ij")
    face_uv = np.column_stack([og.ravel(), pg.ravel()])
    pts = []
    padded = np.pad(grid, 1, constant_values=False)
    cells = vox.cells
    if not len(cells):
        return pts
    base = cells * vs
    for axis in range(3):
        for side, shift in ((0, -1), (1, 1)):
            idx = cells.copy()
            idx[:, axis] += shift
            exposed = ~padded[idx[:, 0] + 1, idx[:, 1] + 1, idx[:, 2] + 1]
            sel = base[exposed]
            if not len(sel):
                continue
            u, v = (axis + 1) % 3, (axis + 2) % 3
            face = np.repeat(sel, len(face_uv), axis=0)
            uv = np.tile(face_uv, (len(sel), 1))
            face[:, axis] += side * vs
            face[:, u] += uv[:, 0]
            face[:, v] += uv[:, 1]
            pts.append(face)
    return pts


def sample_surface_points(scene: Scene, density: float) -> np.ndarray:
    """Deterministic lattice sampling of obstacle surfaces (points/m^2)."""
    if density <= 0:
        raise ValueError("density must be positive")
    pts = []
    for ob in scene.obstacles:
        if isinstance(ob, Box):
            pts.extend(_box_face_points(ob.min_corner, ob.max_corner, density))
        elif isinstance(ob, Cylinder):
            pts.extend(_cylinder_points(ob, density))
        elif isinstance(ob, VoxelSet):
            pts.extend(_voxel_points(ob, density))
    if not pts:
        return np.empty((0, 3))
    return np.vstack(pts)
