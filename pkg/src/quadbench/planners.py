"""Planners shipped with the harness.

The straight-flight baseline flies the direct start-goal line with no
avoidance; the greedy grid planner runs A* over the occupancy map it
accumulates from sensed points, replanning at 5 Hz.  Third-party
planners integrate by implementing the same reset/observe protocol.
"""

import math

import numpy as np

from . import kernels
from .sim import PlannerCommand, PlannerNoPath, max_acceleration

BRAKE_MARGIN = 0.9  # fraction of a_max budgeted for deceleration
APPROACH_TAU = 0.5  # s; proportional terminal slowdown, keeps the 50 Hz loop stable


def _braking_speed(dist, a_max, v_max):
    # Trapezoidal profile plus a proportional terminal law: the sqrt term
    # alone is unstable in discrete time for high-accel platforms.
    dist = max(dist, 0.0)
    return min(v_max, math.sqrt(2.0 * BRAKE_MARGIN * a_max * dist), dist / APPROACH_TAU)


class StraightFlightPlanner:
    """Constant-velocity direct flight from start to goal, no avoidance.

    Decelerates on a braking profile so the vehicle settles at the goal
    without overshoot; with a start at rest the trajectory stays on the
    start-goal segment exactly.
    """

    name = "straight"
    uses_points = False

    def __init__(self):
        self._a_max = None
        self._task = None

    def reset(self, info, task, profile, seed):
        self._task = task
        self._a_max = max_acceleration(profile)

    def observe(self, state, local_points, goal):
        px, py, pz = state.position
        dx, dy, dz = goal[0] - px, goal[1] - py, goal[2] - pz
        dist = math.sqrt(dx * dx + dy * dy + dz * dz)
        if dist < 1e-9:
            return PlannerCommand(desired_velocity=(0.0, 0.0, 0.0))
        speed = _braking_speed(dist, self._a_max, self._task.v_max)
        s = speed / dist
        return PlannerCommand(desired_velocity=(dx * s, dy * s, dz * s))


class GreedyGridPlanner:
    """Grid A* over the sensed occupancy, replanned at 5 Hz.

    Unknown space is treated as free; sensed points are rasterized into
    a coarse grid inflated by one cell.  Repeated planning failures on a
    fully sensed dead end yield NoPath.
    """

    name = "greedy"
    uses_points = True

    def __init__(self, resolution=0.5, replan_period=0.2, lookahead=0.75,
                 max_expansions=400000, fail_limit=10):
        self.resolution = resolution
        self.replan_period = replan_period
        self.lookahead = lookahead
        self.max_expansions = max_expansions
        self.fail_limit = fail_limit

    def reset(self, info, task, profile, seed):
        self._task = task
        self._a_max = max_acceleration(profile)
        res = self.resolution
        nx = max(int(math.ceil(info.bounds[0] / res)), 1)
        ny = max(int(math.ceil(info.bounds[1] / res)), 1)
        nz = max(int(math.ceil(info.ceiling / res)), 1)
        self._occ = np.zeros((nx, ny, nz), dtype=np.uint8)
        self._path = None
        self._last_plan = -math.inf
        self._failures = 0
        self._last_points = None

    def _cell(self, p):
        nx, ny, nz = self._occ.shape
        i = min(max(int(p[0] / self.resolution), 0), nx - 1)
        j = min(max(int(p[1] / self.resolution), 0), ny - 1)
        k = min(max(int(p[2] / self.resolution), 0), nz - 1)
        return i, j, k

    def _integrate(self, points):
        if len(points) == 0 or points is self._last_points:
            return
        self._last_points = points
        nx, ny, nz = self._occ.shape
        cells = np.floor(points / self.resolution).astype(np.int64)
        for di in (-1, 0, 1):  # inflate by one cell
            for dj in (-1, 0, 1):
                for dk in (-1, 0, 1):
                    t = cells + (di, dj, dk)
                    keep = ((t[:, 0] >= 0) & (t[:, 0] < nx)
                            & (t[:, 1] >= 0) & (t[:, 1] < ny)
                            & (t[:, 2] >= 0) & (t[:, 2] < nz))
                    t = t[keep]
                    self._occ[t[:, 0], t[:, 1], t[:, 2]] = 1

    def _nearest_free(self, cell):
        if not self._occ[cell]:
            return cell
        nx, ny, nz = self._occ.shape
        best, best_d = None, math.inf
        for di in range(-2, 3):
            for dj in range(-2, 3):
                for dk in range(-2, 3):
                    i, j, k = cell[0] + di, cell[1] + dj, cell[2] + dk
                    if 0 <= i < nx and 0 <= j < ny and 0 <= k < nz and not self._occ[i, j, k]:
                        d = di * di + dj * dj + dk * dk
                        if d < best_d:
                            best, best_d = (i, j, k), d
        return best

    def _replan(self, state, goal):
        start = self._nearest_free(self._cell(state.position))
        target = self._nearest_free(self._cell(goal))
        if start is None or target is None:
            return None
        path = kernels.astar_path(self._occ, start[0], start[1], start[2],
                                  target[0], target[1], target[2], self.max_expansions)
        return None if len(path) == 0 else np.asarray(path)

    def _carrot(self, state, goal):
        pts = (self._path + 0.5) * self.resolution
        p = np.asarray(state.position)
        nearest = int(np.argmin(((pts - p) ** 2).sum(axis=1)))
        travelled = 0.0
        i = nearest
        while i + 1 < len(pts) and travelled < self.lookahead:
            travelled += float(np.linalg.norm(pts[i + 1] - pts[i]))
            i += 1
        if i == len(pts) - 1:
            return goal
        return tuple(pts[i])

    def observe(self, state, local_points, goal):
        self._integrate(local_points)
        if self._path is None or state.time - self._last_plan >= self.replan_period:
            self._last_plan = state.time
            path = self._replan(state, goal)
            if path is None:
                self._failures += 1
                self._path = None
                if self._failures >= self.fail_limit:
                    return PlannerNoPath(reason="no route in sensed map")
            else:
                self._failures = 0
                self._path = path
        if self._path is None:
            return PlannerCommand(desired_velocity=(0.0, 0.0, 0.0))  # hover and retry
        carrot = self._carrot(state, goal)
        px, py, pz = state.position
        dx, dy, dz = carrot[0] - px, carrot[1] - py, carrot[2] - pz
        norm = math.sqrt(dx * dx + dy * dy + dz * dz)
        dist_goal = math.dist(state.position, goal)
        if norm < 1e-9:
            return PlannerCommand(desired_velocity=(0.0, 0.0, 0.0))
        speed = _braking_speed(dist_goal, self._a_max, self._task.v_max)
        s = speed / norm
        return PlannerCommand(desired_velocity=(dx * s, dy * s, dz * s))


def straight_flight_planner() -> StraightFlightPlanner:
    """The benchmark's floor reference: no obstacle avoidance."""
    return StraightFlightPlanner()


def greedy_reference_planner(**params) -> GreedyGridPlanner:
    """A nontrivial reference planner exercising the full harness."""
    return GreedyGridPlanner(**params)
