"""Hot-kernel backend selection.

The numba backend is used when available; set QUADBENCH_DISABLE_NUMBA=1
to force the pure-numpy fallback (same results, slower).  Both backends
are importable directly for side-by-side benchmarking.
"""

import os

_flag = os.environ.get("QUADBENCH_DISABLE_NUMBA", "").strip()
if _flag not in ("", "0"):
    from . import numpy_impl as _impl
    BACKEND = "numpy"
else:
    try:
        from . import numba_impl as _impl
        BACKEND = "numba"
    except ImportError:
        from . import numpy_impl as _impl
        BACKEND = "numpy"

box_signed_distance = _impl.box_signed_distance
cylinder_signed_distance = _impl.cylinder_signed_distance
point_clearance = _impl.point_clearance
voxel_clearance = _impl.voxel_clearance
rasterize_boxes = _impl.rasterize_boxes
rasterize_cylinders = _impl.rasterize_cylinders
dilate_voxels = _impl.dilate_voxels
grid_bfs_steps = _impl.grid_bfs_steps
astar_path = _impl.astar_path
perlin_field = _impl.perlin_field

__all__ = [
    "BACKEND",
    "box_signed_distance",
    "cylinder_signed_distance",
    "point_clearance",
    "voxel_clearance",
    "rasterize_boxes",
    "rasterize_cylinders",
    "dilate_voxels",
    "grid_bfs_steps",
    "astar_path",
    "perlin_field",
]
