import json
import math

import numpy as np
import pytest

from quadbench.geometry import Box, Scene
from quadbench.sceneio import (
    export_scene,
    load_manifest,
    manifest_json,
    save_manifest,
    scene_from_manifest,
    scene_to_manifest,
    write_pcd,
    write_ply,
)
from quadbench.scenegen import generate


def tiny_scene(obstacles=()):
    return Scene(family="urban", bounds=(10.0, 20.0), ceiling=5.0, obstacles=obstacles,
                 start_pose=(5.0, 2.0, 1.5, math.pi / 2), goal_point=(5.0, 18.0, 1.5),
                 seed=1, index=1)


UNIT_BOX = Box(min_corner=(4.0, 8.0, 1.0), max_corner=(5.0, 9.0, 2.0))


class TestPcd:
    def test_header_and_count(self, tmp_path):
        path = export_scene(tiny_scene((UNIT_BOX,)), "pcd", tmp_path / "s.pcd",
                            surface_sample_density=100.0)
        lines = path.read_text().splitlines()
        assert lines[1] == "VERSION 0.7"
        assert lines[2] == "FIELDS x y z"
        assert lines[3] == "SIZE 4 4 4"
        assert lines[4] == "TYPE F F F"
        assert lines[5] == "COUNT 1 1 1"
        assert lines[8] == "VIEWPOINT 0 0 0 1 0 0 0"
        assert lines[10] == "DATA ascii"
        n = int(lines[9].split()[1])
        assert n == 600  # 6 unit faces at 100 pts/m^2
        assert lines[6] == f"WIDTH {n}"
        data = lines[11:]
        assert len(data) == n
        assert all(len(row.split()) == 3 for row in data)

    def test_empty_scene_valid_header(self, tmp_path):
        path = write_pcd(np.empty((0, 3)), tmp_path / "empty.pcd")
        lines = path.read_text().splitlines()
        assert lines[9] == "POINTS 0"
        assert len(lines) == 11


class TestPly:
    def test_header(self, tmp_path):
        path = write_ply(np.array([[1.0, 2.0, 3.0]]), tmp_path / "s.ply")
        lines = path.read_text().splitlines()
        assert lines[0] == "ply"
        assert lines[1] == "format ascii 1.0"
        assert lines[2] == "element vertex 1"
        assert lines[3:6] == ["property float x", "property float y", "property float z"]
        assert lines[6] == "end_header"
        assert lines[7] == "1 2 3"

    def test_export_counts_match_pcd(self, tmp_path):
        scene = tiny_scene((UNIT_BOX,))
        ply = export_scene(scene, "ply", tmp_path / "s.ply", 64.0)
        pcd = export_scene(scene, "pcd", tmp_path / "s.pcd", 64.0)
        n_ply = int(ply.read_text().splitlines()[2].split()[-1])
        n_pcd = int(pcd.read_text().splitlines()[9].split()[-1])
        assert n_ply == n_pcd > 0


class TestManifest:
    @pytest.mark.parametrize("family", ["forest", "narrow_gap", "maze", "perlin_noise"])
    def test_roundtrip_byte_identical(self, family, tmp_path):
        scene = generate(family, seed=6, index=2)
        first = manifest_json(scene)
        reimported = scene_from_manifest(json.loads(first))
        assert manifest_json(reimported) == first

    def test_manifest_keys(self):
        m = scene_to_manifest(tiny_scene((UNIT_BOX,)))
        assert set(m) == {"family", "seed", "index", "bounds", "ceiling",
                          "start", "goal", "obstacles"}
        assert m["obstacles"][0]["type"] == "box"

    def test_save_load(self, tmp_path):
        scene = generate("cylinder_field", 2, 1)
        path = save_manifest(scene, tmp_path / "scene.json")
        again = load_manifest(path)
        assert again == scene

    def test_voxel_manifest_roundtrip(self):
        scene = generate("perlin_noise", 2, 1)
        m = scene_to_manifest(scene)
        again = scene_from_manifest(m)
        assert (again.obstacles[0].cells == scene.obstacles[0].cells).all()


def test_unknown_format_rejected(tmp_path):
    with pytest.raises(ValueError):
        export_scene(tiny_scene(), "dae", tmp_path / "x.dae")
