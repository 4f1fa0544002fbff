"""Kinodynamically-limited trial simulation.

The vehicle is a velocity-commanded point mass.  Capability limits come
from the platform profile: peak acceleration (twr_max - 1) * g with a
0.5 m/s^2 floor, an acceleration slew rate scaling with
sqrt(alpha_xy_max) (thrust reorientation delay), and yaw-rate changes
bounded by alpha_z_max.  Fixed 50 Hz integration.
"""

import math
from dataclasses import dataclass
from typing import NamedTuple

import numpy as np

from .geometry import Scene, scene_geometry
from .kinodyn import G_STANDARD, KinodynamicProfile

SENSOR_PERIOD = 0.1  # s between point-cloud refreshes fed to planners
ACCEL_FLOOR = 0.5  # m/s^2 lower bound on usable acceleration


@dataclass(frozen=True)
class TaskSpec:
    """Benchmark task protocol parameters."""

    v_max: float = 4.0
    t_max: float = 90.0
    goal_radius: float = 2.0
    settle_speed: float = 0.2
    vehicle_radius: float = 0.3
    dt: float = 0.02
    sensing_radius: float = 5.0
    settle_hold: float = 1.0  # seconds the settle condition must persist

    def __post_init__(self):
        vals = (self.v_max, self.t_max, self.goal_radius, self.settle_speed,
                self.vehicle_radius, self.dt, self.sensing_radius, self.settle_hold)
        if any(v <= 0 for v in vals):
            raise ValueError("all task parameters must be positive")
        if self.dt > 0.05:
            raise ValueError("dt must be <= 0.05 s")


@dataclass(frozen=True)
class VehicleState:
    """Point-mass state; ``accel``/``yaw_rate`` carry integrator memory."""

    position: tuple[float, float, float]
    velocity: tuple[float, float, float]
    yaw: float
    time: float
    accel: tuple[float, float, float] = (0.0, 0.0, 0.0)
    yaw_rate: float = 0.0

    @property
    def speed(self):
        vx, vy, vz = self.velocity
        return math.sqrt(vx * vx + vy * vy + vz * vz)


@dataclass(frozen=True)
class PlannerCommand:
    desired_velocity: tuple[float, float, float]
    desired_yaw_rate: float = 0.0

    def __post_init__(self):
        if not all(math.isfinite(v) for v in (*self.desired_velocity, self.desired_yaw_rate)):
            raise ValueError("command components must be finite")


@dataclass(frozen=True)
class PlannerDone:
    """Planner declares the task complete."""


@dataclass(frozen=True)
class PlannerNoPath:
    """Planner reports no path to the goal exists."""

    reason: str = ""


class SceneInfo(NamedTuple):
    """Scene metadata planners may use (never the obstacle list)."""

    bounds: tuple[float, float]
    ceiling: float
    start_pose: tuple[float, float, float, float]
    goal_point: tuple[float, float, float]


def scene_info(scene: Scene) -> SceneInfo:
    return SceneInfo(scene.bounds, scene.ceiling, scene.start_pose, scene.goal_point)


OUTCOME_SUCCESS = "success"
OUTCOME_COLLISION = "collision"
OUTCOME_TIMEOUT = "timeout"
OUTCOME_GOAL_MISS = "goal_miss"
OUTCOME_PLAN_FAILURE = "plan_failure"


@dataclass(frozen=True)
class TrialResult:
    outcome: str
    elapsed: float
    path: np.ndarray  # sampled positions, one row per step
    min_clearance: float
    detail: str = ""
    log: np.ndarray | None = None  # optional rows t,x,y,z,vx,vy,vz,yaw,min_clearance

    @property
    def success(self):
        return self.outcome == OUTCOME_SUCCESS


def max_acceleration(profile: KinodynamicProfile, g: float = G_STANDARD) -> float:
    """Usable translational acceleration: (TWR-1) g, floored at 0.5 m/s^2."""
    return max(ACCEL_FLOOR, (profile.twr_max - 1.0) * g)


def _clip_vec(vx, vy, vz, limit):
    mag = math.sqrt(vx * vx + vy * vy + vz * vz)
    if mag <= limit or mag == 0.0:
        return vx, vy, vz
    s = limit / mag
    return vx * s, vy * s, vz * s


def step_dynamics(state: VehicleState, command: PlannerCommand,
                  profile: KinodynamicProfile, task: TaskSpec,
                  g: float = G_STANDARD) -> VehicleState:
    """Advance one dt with capability-limited point-mass dynamics.

    Acceleration tracks the commanded velocity, bounded by a_max, and
    may change at most a_max * sqrt(alpha_xy_max) per second once
    engaged (a fresh vehicle, or one coasting with zero acceleration,
    re-aims freely); the commanded yaw rate is bounded by alpha_z_max.
    Velocity is clamped to v_max and position integrated semi-implicitly.
    """
    dt = task.dt
    a_max = max_acceleration(profile, g)
    vx, vy, vz = state.velocity
    dvx = command.desired_velocity[0] - vx
    dvy = command.desired_velocity[1] - vy
    dvz = command.desired_velocity[2] - vz
    ax, ay, az = _clip_vec(dvx / dt, dvy / dt, dvz / dt, a_max)

    pax, pay, paz = state.accel
    prev_mag = math.sqrt(pax * pax + pay * pay + paz * paz)
    if prev_mag > 1e-12:
        slew = a_max * math.sqrt(max(profile.alpha_xy_max, 0.0)) * dt
        dx, dy, dz = _clip_vec(ax - pax, ay - pay, az - paz, slew)
        ax, ay, az = pax + dx, pay + dy, paz + dz

    nvx, nvy, nvz = _clip_vec(vx + ax * dt, vy + ay * dt, vz + az * dt, task.v_max)
    px, py, pz = state.position
    npx, npy, npz = px + nvx * dt, py + nvy * dt, pz + nvz * dt

    max_dyr = profile.alpha_z_max * dt
    yr = state.yaw_rate + min(max(command.desired_yaw_rate - state.yaw_rate, -max_dyr), max_dyr)
    return VehicleState(
        position=(npx, npy, npz),
        velocity=(nvx, nvy, nvz),
        yaw=state.yaw + yr * dt,
        time=state.time + dt,
        accel=(ax, ay, az),
        yaw_rate=yr,
    )


def check_collision(scene: Scene, position, vehicle_radius: float) -> bool:
    """True when the vehicle touches an obstacle, floor or ceiling.

    Uses exact primitive distances (not the occupancy grid); contact at
    exactly vehicle_radius counts as collision.
    """
    x, y, z = position
    if z < vehicle_radius or z > scene.ceiling:
        return True
    geo = scene_geometry(scene)
    return geo.clearance(x, y, z, cap=vehicle_radius + 1.0) <= vehicle_radius


def _state_clearance(geo, scene, position, vehicle_radius):
    x, y, z = position
    obstacle = geo.clearance(x, y, z, cap=vehicle_radius + 1.05) - vehicle_radius
    return min(obstacle, z - vehicle_radius, scene.ceiling - z)


def run_trial(planner, scene: Scene, profile: KinodynamicProfile,
              task: TaskSpec, trial_seed: int = 0, collect_log: bool = False) -> TrialResult:
    """Run one navigation trial to termination.

    The planner is reset with the scene metadata, task, profile and
    seed; each step it observes its own state, the latest sensed point
    cloud and the goal, and returns a command (or Done / NoPath).
    Deterministic for fixed (planner, scene, profile, task, trial_seed).
    Scene validity is the caller's concern.
    """
    geo = scene_geometry(scene)
    planner.reset(scene_info(scene), task, profile, trial_seed)
    sx, sy, sz, syaw = scene.start_pose
    state = VehicleState(position=(sx, sy, sz), velocity=(0.0, 0.0, 0.0), yaw=syaw, time=0.0)
    goal = scene.goal_point

    path = [state.position]
    log_rows = [] if collect_log else None
    clearance = _state_clearance(geo, scene, state.position, task.vehicle_radius)
    min_clearance = clearance
    if clearance <= 0.0:
        return TrialResult(OUTCOME_COLLISION, 0.0, np.array(path), min_clearance,
                           detail="collision at start pose")

    wants_points = getattr(planner, "uses_points", True)
    points = np.empty((0, 3))
    next_sense = 0.0
    hold = 0.0

    def finish(outcome, detail=""):
        log = None
        if log_rows is not None:
            log = np.array(log_rows).reshape(-1, 9)
        return TrialResult(outcome, state.time, np.array(path), min_clearance,
                           detail=detail, log=log)

    while True:
        if wants_points and state.time >= next_sense:
            points = geo.sense(state.position, task.sensing_radius)
            next_sense = state.time + SENSOR_PERIOD
        try:
            decision = planner.observe(state, points, goal)
        except Exception as exc:  # planner bugs surface as plan failures
            return finish(OUTCOME_PLAN_FAILURE, detail=f"planner raised {exc!r}")
        if isinstance(decision, PlannerNoPath):
            return finish(OUTCOME_PLAN_FAILURE, detail=decision.reason or "planner reported no path")
        if isinstance(decision, PlannerDone):
            dist = math.dist(state.position, goal)
            if dist <= task.goal_radius and state.speed <= task.settle_speed:
                return finish(OUTCOME_SUCCESS, detail="planner declared done at goal")
            return finish(OUTCOME_GOAL_MISS,
                          detail=f"planner declared done {dist:.2f} m from goal")

        state = step_dynamics(state, decision, profile, task)
        path.append(state.position)
        clearance = _state_clearance(geo, scene, state.position, task.vehicle_radius)
        if clearance < min_clearance:
            min_clearance = clearance
        if log_rows is not None:
            log_rows.append((state.time, *state.position, *state.velocity, state.yaw,
                             clearance))

        if state.time > task.t_max:
            return finish(OUTCOME_TIMEOUT)
        if clearance <= 0.0:
            return finish(OUTCOME_COLLISION)
        if (math.dist(state.position, goal) <= task.goal_radius
                and state.speed <= task.settle_speed):
            hold += task.dt
            if hold >= task.settle_hold:
                return finish(OUTCOME_SUCCESS)
        else:
            hold = 0.0
