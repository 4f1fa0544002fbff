import math

import numpy as np
import pytest

from quadbench.kinodyn import (
    KinodynamicProfile,
    RigidBody,
    RotorSet,
    alpha_max,
    dataset_means,
    find_platform,
    load_platform_dataset,
    performance_vector,
    scale_platform,
    torque_max,
    total_thrust,
    twr_max,
)


def plus_rotors(thrust_coef=1.0, torque_coef=0.01, arm=0.2, omega=10.0):
    return RotorSet.uniform("plus", thrust_coef, torque_coef, arm, omega)


def cross_rotors(thrust_coef=1.0, torque_coef=0.01, arm=0.2, omega=10.0):
    return RotorSet.uniform("cross", thrust_coef, torque_coef, arm, omega)


class TestTotalThrust:
    def test_zero_speeds(self):
        assert total_thrust(plus_rotors(), (0, 0, 0, 0)) == 0.0

    def test_unit_speeds(self):
        r = RotorSet.uniform("plus", 1.0, 0.01, 0.2, 2.0)
        assert total_thrust(r, (1, 1, 1, 1)) == 4.0

    def test_hand_evaluated(self):
        r = RotorSet.uniform("plus", 8.5e-6, 1e-7, 0.2, 900.0)
        assert total_thrust(r, (800, 800, 800, 800)) == pytest.approx(21.76)

    def test_out_of_bounds_names_rotor(self):
        r = RotorSet.uniform("plus", 1.0, 0.01, 0.2, 10.0)
        with pytest.raises(ValueError, match="rotor 2"):
            total_thrust(r, (5.0, 5.0, 11.0, 5.0))


class TestTwrMax:
    def test_hover_exact(self):
        r = RotorSet.uniform("plus", 1.0, 0.01, 0.2, 1.0)
        body = RigidBody(mass=2.0, inertia=(1, 1, 1))
        assert twr_max(r, body, g=2.0) == 1.0  # m*g = 4 N exactly

    def test_linear_in_weight(self):
        r = RotorSet.uniform("plus", 1.0, 0.01, 0.2, 1.0)
        body = RigidBody(mass=1.0, inertia=(1, 1, 1))
        assert twr_max(r, body, g=2.0) == 2.0

    def test_doubling_speed_quadruples(self):
        body = RigidBody(mass=1.3, inertia=(1, 1, 1))
        base = twr_max(plus_rotors(omega=10.0), body)
        assert twr_max(plus_rotors(omega=20.0), body) == pytest.approx(4.0 * base)


class TestTorqueMax:
    def test_plus_roll(self):
        tx, ty, tz = torque_max(plus_rotors())
        assert tx == pytest.approx(0.2 * 100.0)  # omega4 at max, omega2 at 0
        assert ty == pytest.approx(0.2 * 100.0)

    def test_cross_is_sqrt2_times_plus(self):
        px, _, _ = torque_max(plus_rotors())
        cx, _, _ = torque_max(cross_rotors())
        assert cx == pytest.approx(math.sqrt(2.0) * px, rel=1e-9)

    def test_yaw_identical_for_layouts(self):
        assert torque_max(plus_rotors())[2] == torque_max(cross_rotors())[2]

    def test_nonnegative_for_asymmetric_limits(self):
        # rotor 4 weaker than rotor 2's idle floor: signed supremum of the
        # roll expression is negative, the magnitude envelope is not
        r = RotorSet("plus", 1.0, 0.01, 0.2,
                     omega_max=(10.0, 10.0, 10.0, 1.0),
                     omega_min=(0.0, 5.0, 0.0, 0.0))
        tx, ty, tz = torque_max(r)
        assert tx >= 0 and ty >= 0 and tz >= 0
        assert tx == pytest.approx(0.2 * 100.0)  # rotor 2 at max, rotor 4 idle

    def test_monotonic_in_omega_max(self):
        body = RigidBody(mass=1.0, inertia=(1, 1, 1))
        r1 = RotorSet("plus", 1.0, 0.01, 0.2, (10.0, 10.0, 10.0, 10.0))
        r2 = RotorSet("plus", 1.0, 0.01, 0.2, (10.0, 10.0, 10.0, 12.0))
        assert twr_max(r2, body) >= twr_max(r1, body)
        for a, b in zip(torque_max(r1), torque_max(r2)):
            assert b >= a

    def test_homogeneity_k_squared(self):
        rng = np.random.default_rng(3)
        for _ in range(20):
            omega = tuple(rng.uniform(5.0, 50.0, size=4))
            k = rng.uniform(0.5, 3.0)
            r1 = RotorSet("cross", 2.0, 0.05, 0.3, omega)
            r2 = RotorSet("cross", 2.0, 0.05, 0.3, tuple(k * w for w in omega))
            body = RigidBody(mass=1.0, inertia=(1, 1, 1))
            assert twr_max(r2, body) == pytest.approx(k * k * twr_max(r1, body), rel=1e-9)
            for a, b in zip(torque_max(r1), torque_max(r2)):
                assert b == pytest.approx(k * k * a, rel=1e-9)


class TestAlphaMax:
    def test_identity_ratio(self):
        body = RigidBody(mass=1.0, inertia=(1, 2, 3))
        assert alpha_max((1, 2, 3), body) == (1.0, 1.0, 1.0)

    def test_zero_torque(self):
        body = RigidBody(mass=1.0, inertia=(1, 2, 3))
        assert alpha_max((0, 0, 0), body) == (0.0, 0.0, 0.0)

    def test_hand_division(self):
        body = RigidBody(mass=1.0, inertia=(0.05, 0.05, 0.1))
        assert alpha_max((20, 20, 2), body) == pytest.approx((400.0, 400.0, 20.0))


class TestPerformanceVector:
    def test_chained_hand_computation(self):
        # plus layout, d=0.2, c_T=1, omega_max=10, c_M=0.01: roll torque 20 N m,
        # yaw torque 2 N m; with J=(0.05,0.05,0.1) and m*g=100 N the profile
        # chains to TWR 4.0, alpha_xy 400, alpha_z 20
        rotors = plus_rotors()
        body = RigidBody(mass=10.0, inertia=(0.05, 0.05, 0.1))
        p = performance_vector(rotors, body, g=10.0)
        assert p.twr_max == pytest.approx(4.0)
        assert p.alpha_xy_max == pytest.approx(400.0)
        assert p.alpha_z_max == pytest.approx(20.0)

    def test_zero_torque_limit_is_well_defined(self):
        r = RotorSet.uniform("plus", 1.0, 1e-300, 1e-300, 1.0)
        body = RigidBody(mass=2.0, inertia=(1, 1, 1))
        p = performance_vector(r, body, g=2.0)
        assert p.twr_max == 1.0
        assert p.alpha_xy_max == pytest.approx(0.0, abs=1e-250)
        assert p.alpha_z_max == pytest.approx(0.0, abs=1e-250)

    def test_components_nonnegative(self):
        rng = np.random.default_rng(11)
        for _ in range(30):
            r = RotorSet(
                rng.choice(["plus", "cross"]),
                rng.uniform(1e-6, 2.0), rng.uniform(1e-8, 0.1), rng.uniform(0.05, 0.5),
                tuple(rng.uniform(10.0, 100.0, size=4)),
            )
            body = RigidBody(mass=rng.uniform(0.2, 6.0),
                             inertia=tuple(rng.uniform(0.001, 0.5, size=3)))
            p = performance_vector(r, body)
            assert p.twr_max > 0 and p.alpha_xy_max >= 0 and p.alpha_z_max >= 0

    def test_uses_roll_axis_for_alpha_xy(self):
        rotors = plus_rotors()
        body = RigidBody(mass=1.0, inertia=(0.05, 0.08, 0.1))  # Jxx != Jyy
        p = performance_vector(rotors, body)
        assert p.alpha_xy_max == pytest.approx(torque_max(rotors)[0] / 0.05)

    def test_permutation_of_identical_rotors(self):
        body = RigidBody(mass=1.0, inertia=(0.05, 0.05, 0.1))
        r1 = RotorSet("cross", 1.0, 0.01, 0.2, (10.0,) * 4, (1.0,) * 4)
        r2 = RotorSet("cross", 1.0, 0.01, 0.2, (10.0,) * 4, (1.0,) * 4)
        assert performance_vector(r1, body) == performance_vector(r2, body)


class TestScalePlatform:
    BODY = RigidBody(mass=10.0, inertia=(0.05, 0.05, 0.1))

    def test_identity(self):
        rotors, body = scale_platform(plus_rotors(), self.BODY, 1.0, 1.0, 1.0)
        assert performance_vector(rotors, body, g=10.0) == \
            performance_vector(plus_rotors(), self.BODY, g=10.0)

    def test_mass_factor_halves_twr_and_alpha(self):
        base = performance_vector(plus_rotors(), self.BODY, g=10.0)
        rotors, body = scale_platform(plus_rotors(), self.BODY, mass_factor=2.0)
        p = performance_vector(rotors, body, g=10.0)
        assert p.twr_max == pytest.approx(base.twr_max / 2.0)
        assert p.alpha_xy_max == pytest.approx(base.alpha_xy_max / 2.0)
        assert p.alpha_z_max == pytest.approx(base.alpha_z_max / 2.0)

    def test_arm_factor_halves_alpha_xy(self):
        base = performance_vector(plus_rotors(), self.BODY, g=10.0)
        rotors, body = scale_platform(plus_rotors(), self.BODY, arm_factor=2.0)
        p = performance_vector(rotors, body, g=10.0)
        # roll torque doubles, J quadruples
        assert p.alpha_xy_max == pytest.approx(base.alpha_xy_max / 2.0)
        assert p.twr_max == pytest.approx(base.twr_max)

    def test_rejects_nonpositive_factors(self):
        with pytest.raises(ValueError):
            scale_platform(plus_rotors(), self.BODY, mass_factor=0.0)


class TestDataset:
    def test_row_counts(self):
        records = load_platform_dataset()
        assert len(records) == 36
        assert sum(1 for r in records if r.category == "real") == 18
        assert sum(1 for r in records if r.category == "virtual") == 18
        assert len({r.name for r in records}) == 36

    def test_lookup_real_row(self):
        r = find_platform("0.60kg-EMAX")
        assert r.category == "real"
        assert (r.profile.twr_max, r.profile.alpha_xy_max, r.profile.alpha_z_max) == \
            (2.2, 114.7, 8.4)

    def test_lookup_virtual_row(self):
        r = find_platform("0.98kg-EGO Planner DIY")
        assert r.category == "virtual"
        assert (r.profile.twr_max, r.profile.alpha_xy_max, r.profile.alpha_z_max) == \
            (4.6, 1083.3, 57.7)

    def test_real_twr_mean_matches_published(self):
        twr, _, _ = dataset_means("real")
        assert twr == pytest.approx(2.317, abs=1e-3)
        assert abs(twr - 2.30) <= 0.05

    def test_unknown_platform(self):
        with pytest.raises(KeyError):
            find_platform("nonexistent")


class TestInvariants:
    def test_rotor_set_validation(self):
        with pytest.raises(ValueError):
            RotorSet.uniform("plus", -1.0, 0.01, 0.2, 10.0)
        with pytest.raises(ValueError):
            RotorSet.uniform("hex", 1.0, 0.01, 0.2, 10.0)
        with pytest.raises(ValueError):
            RotorSet.uniform("plus", 1.0, 0.01, 0.2, 10.0, omega_min=10.0)

    def test_rigid_body_validation(self):
        with pytest.raises(ValueError):
            RigidBody(mass=0.0, inertia=(1, 1, 1))
        with pytest.raises(ValueError):
            RigidBody(mass=1.0, inertia=(1, -1, 1))

    def test_profile_validation(self):
        with pytest.raises(ValueError):
            KinodynamicProfile(twr_max=0.0, alpha_xy_max=1.0, alpha_z_max=1.0)
