"""Scene export and import: ASCII point clouds and JSON manifests.

PCD v0.7 and PLY 1.0 writers emit x/y/z surface samples; the JSON
manifest records the full primitive list and round-trips exactly.
"""

import json
from pathlib import Path

import numpy as np

from .geometry import Box, Cylinder, Scene, VoxelSet, sample_surface_points

FORMATS = ("pcd", "ply", "json")


def _format_coord(v: float) -> str:
    return f"{v:.6g}"


def write_pcd(points: np.ndarray, path):
    path = Path(path)
    lines = [
        "# .PCD v0.7 - Point Cloud Data file format",
        "VERSION 0.7",
        "FIELDS x y z",
        "SIZE 4 4 4",
        "TYPE F F F",
        "COUNT 1 1 1",
        f"WIDTH {len(points)}",
        "HEIGHT 1",
        "VIEWPOINT 0 0 0 1 0 0 0",
        f"POINTS {len(points)}",
        "DATA ascii",
    ]
    for p in points:
        lines.append(f"{_format_coord(p[0])} {_format_coord(p[1])} {_format_coord(p[2])}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def write_ply(points: np.ndarray, path):
    path = Path(path)
    lines = [
        "ply",
        "format ascii 1.0",
        f"element vertex {len(points)}",
        "property float x",
        "property float y",
        "property float z",
        "end_header",
    ]
    for p in points:
        lines.append(f"{_format_coord(p[0])} {_format_coord(p[1])} {_format_coord(p[2])}")
    path.write_text("\n".join(lines) + "\n", encoding="utf-8")
    return path


def _primitive_to_dict(ob):
    if isinstance(ob, Cylinder):
        return {"type": "cylinder", "base": list(ob.base), "axis": list(ob.axis),
                "radius": ob.radius, "length": ob.length}
    if isinstance(ob, Box):
        return {"type": "box", "min_corner": list(ob.min_corner),
                "max_corner": list(ob.max_corner)}
    if isinstance(ob, VoxelSet):
        return {"type": "voxel_set", "voxel_size": ob.voxel_size,
                "dims": list(ob.dims), "occupied_cells": ob.cells.tolist()}
    raise TypeError(f"unknown primitive {type(ob)}")


def _primitive_from_dict(d):
    kind = d["type"]
    if kind == "cylinder":
        return Cylinder(base=tuple(d["base"]), axis=tuple(d["axis"]),
                        radius=d["radius"], length=d["length"])
    if kind == "box":
        return Box(min_corner=tuple(d["min_corner"]), max_corner=tuple(d["max_corner"]))
    if kind == "voxel_set":
        return VoxelSet(voxel_size=d["voxel_size"], dims=tuple(d["dims"]),
                        cells=np.array(d["occupied_cells"], dtype=np.int32).reshape(-1, 3))
    raise ValueError(f"unknown primitive type {kind!r}")


def scene_to_manifest(scene: Scene) -> dict:
    return {
        "family": scene.family,
        "seed": scene.seed,
        "index": scene.index,
        "bounds": list(scene.bounds),
        "ceiling": scene.ceiling,
        "start": list(scene.start_pose),
        "goal": list(scene.goal_point),
        "obstacles": [_primitive_to_dict(ob) for ob in scene.obstacles],
    }


def scene_from_manifest(manifest: dict) -> Scene:
    return Scene(
        family=manifest["family"],
        bounds=tuple(manifest["bounds"]),
        ceiling=manifest["ceiling"],
        obstacles=tuple(_primitive_from_dict(d) for d in manifest["obstacles"]),
        start_pose=tuple(manifest["start"]),
        goal_point=tuple(manifest["goal"]),
        seed=manifest["seed"],
        index=manifest["index"],
    )


def manifest_json(scene: Scene) -> str:
    return json.dumps(scene_to_manifest(scene), indent=2) + "\n"


def save_manifest(scene: Scene, path):
    path = Path(path)
    path.write_text(manifest_json(scene), encoding="utf-8")
    return path


def load_manifest(path) -> Scene:
    return scene_from_manifest(json.loads(Path(path).read_text(encoding="utf-8")))


def export_scene(scene: Scene, fmt: str, path, surface_sample_density: float = 100.0):
    """Write one scene file; point-cloud formats sample obstacle surfaces."""
    fmt = fmt.lower()
    if fmt not in FORMATS:
        raise ValueError(f"format must be one of {FORMATS}, got {fmt!r}")
    if fmt == "json":
        return save_manifest(scene, path)
    points = sample_surface_points(scene, surface_sample_density)
    if fmt == "pcd":
        return write_pcd(points, path)
    return write_ply(points, path)
