"""Quadrotor navigation benchmark harness.

Couples a platform capability model, seven procedural scenario
families, a kinodynamically-limited trial simulator and a weighted
composite scoring system into one reproducible evaluation pipeline.
"""

from .evaluate import (Algorithm, ConfidenceInterval, SuccessMatrix, bootstrap_ci,
                       run_matrix, summarize)
from .geometry import (Box, Cylinder, FAMILIES, OccupancyGrid, Scene,
                       ValidationResult, VoxelSet, validate_scene)
from .kinodyn import (G_STANDARD, KinodynamicProfile, PlatformRecord, RigidBody,
                      RotorSet, alpha_max, load_platform_dataset, performance_vector,
                      scale_platform, torque_max, total_thrust, twr_max)
from .planners import greedy_reference_planner, straight_flight_planner
from .scenegen import SceneGenerationError, generate
from .sceneio import export_scene, load_manifest, save_manifest
from .scoring import (ScoreEntry, WeightConfig, composite_score, composite_scores,
                      normalize_weights, rank, renormalize_missing)
from .sim import (PlannerCommand, PlannerDone, PlannerNoPath, TaskSpec, TrialResult,
                  VehicleState, check_collision, run_trial, step_dynamics)

__version__ = "0.1.0"
