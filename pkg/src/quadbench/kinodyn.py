"""Quadrotor kinodynamic capability model.

Reduces a platform to three numbers: maximum thrust-to-weight ratio
(translational authority), maximum roll-axis angular acceleration
(thrust reorientation agility) and maximum yaw angular acceleration.
Also houses the 36-platform benchmark dataset and a parameter-scaling
helper for synthesizing virtual platforms.
"""

import csv
import importlib.resources
import math
from dataclasses import dataclass

G_STANDARD = 9.80665  # m/s^2

LAYOUT_PLUS = "plus"
LAYOUT_CROSS = "cross"


@dataclass(frozen=True)
class RotorSet:
    """Four rotors: thrust/torque coefficients, arm length and speed limits.

    Thrust per rotor is thrust_coef * omega^2 (N with omega in rad/s);
    reaction torque is torque_coef * omega^2.  ``arm_length`` is the
    distance from the body center to each motor.
    """

    layout: str
    thrust_coef: float
    torque_coef: float
    arm_length: float
    omega_max: tuple[float, float, float, float]
    omega_min: tuple[float, float, float, float] = (0.0, 0.0, 0.0, 0.0)

    def __post_init__(self):
        if self.layout not in (LAYOUT_PLUS, LAYOUT_CROSS):
            raise ValueError(f"unknown layout {self.layout!r}")
        if self.thrust_coef <= 0 or self.torque_coef <= 0 or self.arm_length <= 0:
            raise ValueError("thrust_coef, torque_coef and arm_length must be positive")
        object.__setattr__(self, "omega_max", tuple(float(w) for w in self.omega_max))
        object.__setattr__(self, "omega_min", tuple(float(w) for w in self.omega_min))
        if len(self.omega_max) != 4 or len(self.omega_min) != 4:
            raise ValueError("omega_max and omega_min must have 4 entries")
        for i in range(4):
            if self.omega_min[i] < 0:
                raise ValueError(f"rotor {i}: omega_min must be >= 0")
            if self.omega_min[i] >= self.omega_max[i]:
                raise ValueError(f"rotor {i}: omega_min must be < omega_max")

    @classmethod
    def uniform(cls, layout, thrust_coef, torque_coef, arm_length, omega_max, omega_min=0.0):
        """All four rotors identical (the common case)."""
        return cls(layout, thrust_coef, torque_coef, arm_length,
                   (omega_max,) * 4, (omega_min,) * 4)


@dataclass(frozen=True)
class RigidBody:
    """Point-symmetric rigid body: mass plus diagonal inertia (kg m^2)."""

    mass: float
    inertia: tuple[float, float, float]  # (Jxx, Jyy, Jzz); off-diagonals are zero

    def __post_init__(self):
        object.__setattr__(self, "inertia", tuple(float(j) for j in self.inertia))
        if self.mass <= 0:
            raise ValueError("mass must be positive")
        if len(self.inertia) != 3 or any(j <= 0 for j in self.inertia):
            raise ValueError("all principal inertia terms must be positive")


@dataclass(frozen=True)
class KinodynamicProfile:
    """Capability vector: (TWR_max, alpha_xy_max, alpha_z_max).

    ``alpha_xy_max`` is the roll-axis value, used as the single
    horizontal agility figure.
    """

    twr_max: float
    alpha_xy_max: float
    alpha_z_max: float

    def __post_init__(self):
        if self.twr_max <= 0 or self.alpha_xy_max < 0 or self.alpha_z_max < 0:
            raise ValueError("profile components must be positive (alphas may be 0 only "
                             "for degenerate zero-torque platforms)")


@dataclass(frozen=True)
class PlatformRecord:
    """One benchmark platform: dataset row with its capability profile."""

    name: str
    category: str  # "real" | "virtual"
    profile: KinodynamicProfile
    mass: float

    def __post_init__(self):
        if self.category not in ("real", "virtual"):
            raise ValueError(f"category must be 'real' or 'virtual', got {self.category!r}")


def total_thrust(rotors: RotorSet, omegas) -> float:
    """Total thrust (N) at the given rotor speeds: thrust_coef * sum(omega^2)."""
    omegas = tuple(float(w) for w in omegas)
    if len(omegas) != 4:
        raise ValueError("expected 4 rotor speeds")
    for i, w in enumerate(omegas):
        if w < rotors.omega_min[i] or w > rotors.omega_max[i]:
            raise ValueError(
                f"rotor {i}: speed {w} outside [{rotors.omega_min[i]}, {rotors.omega_max[i]}]")
    return rotors.thrust_coef * sum(w * w for w in omegas)


def twr_max(rotors: RotorSet, body: RigidBody, g: float = G_STANDARD) -> float:
    """Maximum thrust-to-weight ratio: thrust_coef * sum(omega_max^2) / (m g)."""
    if g <= 0:
        raise ValueError("g must be positive")
    return rotors.thrust_coef * sum(w * w for w in rotors.omega_max) / (body.mass * g)


def _axis_torque_max(coef, plus_idx, minus_idx, rotors):
    # Largest magnitude of coef * (sum_plus omega^2 - sum_minus omega^2)
    # over independent per-rotor speed boxes; each direction is achieved
    # by driving contributing rotors to their extremes.
    w_max = rotors.omega_max
    w_min = rotors.omega_min
    pos = sum(w_max[i] ** 2 for i in plus_idx) - sum(w_min[i] ** 2 for i in minus_idx)
    neg = sum(w_max[i] ** 2 for i in minus_idx) - sum(w_min[i] ** 2 for i in plus_idx)
    return coef * max(pos, neg)


def torque_max(rotors: RotorSet) -> tuple[float, float, float]:
    """Peak torque magnitude per body axis (N m).

    Each axis is maximized independently with rotor speeds at their box
    extremes (no simultaneous total-thrust constraint): an optimistic
    envelope.  Rotor order is 1..4 with arms front/left/back/right for
    the plus layout and front-left/back-left/back-right/front-right for
    the cross layout.
    """
    d_ct = rotors.arm_length * rotors.thrust_coef
    if rotors.layout == LAYOUT_PLUS:
        tx = _axis_torque_max(d_ct, (3,), (1,), rotors)
        ty = _axis_torque_max(d_ct, (0,), (2,), rotors)
    else:
        half_sqrt2 = math.sqrt(2.0) / 2.0
        tx = _axis_torque_max(d_ct * half_sqrt2, (0, 3), (1, 2), rotors)
        ty = _axis_torque_max(d_ct * half_sqrt2, (0, 1), (2, 3), rotors)
    tz = _axis_torque_max(rotors.torque_coef, (0, 2), (1, 3), rotors)
    return (tx, ty, tz)


def alpha_max(torques, body: RigidBody) -> tuple[float, float, float]:
    """Peak angular accelerations (rad/s^2): torque / principal inertia per axis."""
    tx, ty, tz = torques
    if tx < 0 or ty < 0 or tz < 0:
        raise ValueError("torques must be non-negative")
    jx, jy, jz = body.inertia
    return (tx / jx, ty / jy, tz / jz)


def performance_vector(rotors: RotorSet, body: RigidBody, g: float = G_STANDARD) -> KinodynamicProfile:
    """Derive the capability profile from physical parameters.

    The horizontal agility entry is the roll-axis (x) angular
    acceleration; pitch is dropped as near-identical for symmetric
    frames.
    """
    ax, _, az = alpha_max(torque_max(rotors), body)
    return KinodynamicProfile(twr_max(rotors, body, g), ax, az)


def scale_platform(rotors: RotorSet, body: RigidBody, mass_factor: float = 1.0,
                   arm_factor: float = 1.0, omega_factor: float = 1.0):
    """Scale a platform's mass, arm length and rotor speed limits.

    Inertia follows rigid-body similarity, J ~ m d^2, so it is rescaled
    by mass_factor * arm_factor^2.  Returns the scaled (RotorSet,
    RigidBody); recompute the profile via performance_vector.
    """
    if mass_factor <= 0 or arm_factor <= 0 or omega_factor <= 0:
        raise ValueError("all scale factors must be positive")
    scaled_rotors = RotorSet(
        layout=rotors.layout,
        thrust_coef=rotors.thrust_coef,
        torque_coef=rotors.torque_coef,
        arm_length=rotors.arm_length * arm_factor,
        omega_max=tuple(w * omega_factor for w in rotors.omega_max),
        omega_min=tuple(w * omega_factor for w in rotors.omega_min),
    )
    j_factor = mass_factor * arm_factor ** 2
    scaled_body = RigidBody(
        mass=body.mass * mass_factor,
        inertia=tuple(j * j_factor for j in body.inertia),
    )
    return scaled_rotors, scaled_body


# Published aggregate means for the dataset categories, used as a
# cross-check next to values recomputed from the table itself.
REFERENCE_MEANS = {
    "real": (2.30, 99.92, 7.17),
    "virtual": (3.47, 824.20, 41.88),
}

_DATASET: tuple[PlatformRecord, ...] | None = None


def load_platform_dataset() -> list[PlatformRecord]:
    """The embedded 36-platform dataset (18 real + 18 virtual).

    Profile values are canonical data shipped with the package, not
    recomputed from motor parameters.
    """
    global _DATASET
    if _DATASET is None:
        text = importlib.resources.files("quadbench.data").joinpath("platforms.csv").read_text("utf-8")
        records = []
        for row in csv.DictReader(text.splitlines()):
            records.append(PlatformRecord(
                name=row["name"],
                category=row["category"].lower(),
                profile=KinodynamicProfile(
                    twr_max=float(row["twr_max"]),
                    alpha_xy_max=float(row["alpha_xy_max"]),
                    alpha_z_max=float(row["alpha_z_max"]),
                ),
                mass=float(row["mass_kg"]),
            ))
        names = [r.name for r in records]
        if len(set(names)) != len(names):
            raise ValueError("platform names must be unique")
        _DATASET = tuple(records)
    return list(_DATASET)


def find_platform(name: str) -> PlatformRecord:
    """Dataset lookup by exact name."""
    for rec in load_platform_dataset():
        if rec.name == name:
            return rec
    raise KeyError(f"no platform named {name!r}")


def dataset_means(category: str) -> tuple[float, float, float]:
    """Mean (TWR, alpha_xy, alpha_z) over one dataset category."""
    rows = [r for r in load_platform_dataset() if r.category == category]
    if not rows:
        raise ValueError(f"no platforms in category {category!r}")
    n = len(rows)
    return (
        sum(r.profile.twr_max for r in rows) / n,
        sum(r.profile.alpha_xy_max for r in rows) / n,
        sum(r.profile.alpha_z_max for r in rows) / n,
    )
