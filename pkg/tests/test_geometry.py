"""Level-set geometry: polynomial, scaling flow, sampling, isotopy."""

import math

import numpy as np
import pytest

from brieskorn_lab.exterior import to_real
from brieskorn_lab.geometry import (
    LevelSpec,
    _solve_scale_time,
    brieskorn_poly,
    check_exponents,
    flow_time_to_level,
    isotopy_from_level,
    isotopy_to_level,
    jacobian_full_rank,
    poly_gradient,
    sample_level_set,
    sample_level_set_with_stats,
    scale_flow,
    scaling_field,
    transversality_value,
)


class TestPolynomial:
    def test_square_sum_root(self):
        assert brieskorn_poly((2, 2), [1.0, 1j]) == pytest.approx(0.0, abs=1e-15)

    def test_origin(self):
        assert brieskorn_poly((2, 2, 2), [0.0, 0.0, 0.0]) == 0.0

    def test_mixed_powers(self):
        assert brieskorn_poly((3, 2), [1.0, 1.0]) == pytest.approx(2.0)

    def test_gradient_matches_difference_quotient(self):
        rng = np.random.default_rng(0)
        e = (3, 2, 4)
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        grad = poly_gradient(e, z)
        h = 1e-7
        for j in range(3):
            bump = np.zeros(3, dtype=complex)
            bump[j] = h
            fd = (brieskorn_poly(e, z + bump) - brieskorn_poly(e, z - bump)) / (2 * h)
            assert abs(fd - grad[j]) < 1e-6 * max(1.0, abs(grad[j]))

    def test_exponent_validation(self):
        with pytest.raises(ValueError):
            check_exponents((2,))
        with pytest.raises(ValueError):
            check_exponents((2, 0))
        with pytest.raises(ValueError):
            check_exponents((2, 2.5))


class TestDefiningJacobian:
    def test_singular_at_origin(self):
        assert jacobian_full_rank((2, 2), [0.0, 0.0]) is False
        assert jacobian_full_rank((3, 2, 2), [0.0, 0.0, 0.0]) is False

    def test_full_rank_away_from_origin(self):
        assert jacobian_full_rank((2, 2), [1.0, 1j]) is True
        r = 1 / math.sqrt(2)
        assert jacobian_full_rank((2, 2, 2), [0.0, r, 1j * r]) is True

    def test_unit_exponent_smooth_at_origin(self):
        assert jacobian_full_rank((1, 2), [0.0, 0.0]) is True


class TestScalingField:
    def test_halved_components(self):
        field = scaling_field((2, 2), [1.0, 1j])
        assert np.allclose(field, [0.5, 0.5j])

    def test_vanishes_at_origin(self):
        assert np.allclose(scaling_field((3, 2), [0.0, 0.0]), 0.0)

    def test_unit_exponents_identity(self):
        z = np.array([0.3 + 1j, -2.0 + 0.5j])
        assert np.allclose(scaling_field((1, 1), z), z)

    def test_flow_preserves_variety_exactly_in_structure(self):
        # f(flow_t z) = e^t f(z) for the weighted scaling
        rng = np.random.default_rng(1)
        e = (3, 2, 2)
        z = rng.standard_normal(3) + 1j * rng.standard_normal(3)
        t = 0.37
        lhs = brieskorn_poly(e, scale_flow(e, z, t))
        assert lhs == pytest.approx(math.exp(t) * brieskorn_poly(e, z), rel=1e-12)


class TestLevelSpec:
    def test_cylinder_matches_zero_level_weights(self):
        e = (3, 2, 2)
        assert LevelSpec.cylinder(e).radius_weights == LevelSpec.level(e, 0.0).radius_weights

    def test_frame_dimensions(self):
        assert LevelSpec.level((2, 2, 2), 1.0).frame_dim == 3
        assert LevelSpec.cylinder((2, 2, 2)).frame_dim == 3
        assert LevelSpec.sphere((2, 3, 4)).frame_dim == 5

    def test_bad_inputs(self):
        with pytest.raises(ValueError):
            LevelSpec.level((2, 2), 1.5)
        with pytest.raises(ValueError):
            LevelSpec((2, 2), 1.0, "torus")

    def test_labels(self):
        assert LevelSpec.level((2, 2), 0.5).label() == "level(2,2; s=0.5)"
        assert LevelSpec.cylinder((3, 2)).label() == "cylinder(3,2)"
        assert LevelSpec.sphere((2, 3)).label() == "sphere(2,3)"


class TestTransversality:
    def test_sphere_level_value(self):
        r = 1 / math.sqrt(2)
        spec = LevelSpec.level((2, 2), 1.0)
        value = transversality_value(spec, [r, 1j * r])
        assert value == pytest.approx(0.5, abs=1e-12)

    def test_cylinder_value(self):
        spec = LevelSpec.cylinder((2, 2, 2))
        z = sample_level_set(spec, 1, 3)[0]
        expected = float(np.sum(np.abs(z[1:]) ** 2)) / 2.0
        assert transversality_value(spec, z) == pytest.approx(expected, abs=1e-12)
        assert transversality_value(spec, z) == pytest.approx(0.5, abs=1e-9)

    @pytest.mark.parametrize(
        "spec",
        [
            LevelSpec.level((2, 2, 2), 1.0),
            LevelSpec.level((3, 2, 2), 0.4),
            LevelSpec.cylinder((3, 2, 2)),
        ],
    )
    def test_positive_on_samples(self, spec):
        for z in sample_level_set(spec, 100, 13):
            assert transversality_value(spec, z) > 0.0

    def test_off_manifold_rejected(self):
        with pytest.raises(ValueError):
            transversality_value(LevelSpec.level((2, 2), 1.0), [2.0, 0.0])


class TestSampling:
    def test_residuals_below_tolerance(self):
        spec = LevelSpec.level((2, 2, 2), 1.0)
        cs = spec.constraint_set()
        pts = sample_level_set(spec, 100, 42)
        assert len(pts) == 100
        assert max(cs.max_residual(z) for z in pts) < 1e-12

    def test_determinism_bit_identical(self):
        spec = LevelSpec.cylinder((3, 2, 2))
        a = sample_level_set(spec, 20, 5)
        b = sample_level_set(spec, 20, 5)
        for u, v in zip(a, b):
            assert np.array_equal(u, v)

    def test_cylinder_tail_norm(self):
        spec = LevelSpec.cylinder((2, 2, 2))
        for z in sample_level_set(spec, 10, 9):
            assert abs(np.sum(np.abs(z[1:]) ** 2) - 1.0) < 1e-12

    def test_prefix_stability(self):
        # per-index streams: the first points do not depend on the count
        spec = LevelSpec.level((2, 2, 2), 1.0)
        short = sample_level_set(spec, 5, 21)
        long = sample_level_set(spec, 10, 21)
        for u, v in zip(short, long[:5]):
            assert np.array_equal(u, v)

    def test_stats_reported(self):
        spec = LevelSpec.level((3, 2, 2), 1.0)
        pts, stats = sample_level_set_with_stats(spec, 25, 2)
        assert stats.requested == 25
        assert len(pts) == 25
        assert stats.projection_failures >= 0

    def test_count_validation(self):
        with pytest.raises(ValueError):
            sample_level_set(LevelSpec.sphere((2, 2)), 0, 1)


class TestFlowTime:
    def test_identity_at_unit_weight(self):
        z = sample_level_set(LevelSpec.level((2, 2, 2), 1.0), 5, 4)
        for point in z:
            assert abs(flow_time_to_level((2, 2, 2), point, 1.0)) < 1e-12

    def test_closed_form_log_two(self):
        r = 1 / math.sqrt(2)
        t = flow_time_to_level((2, 2), [r, 1j * r], 0.0)
        assert t == pytest.approx(math.log(2.0), abs=1e-12)

    def test_closed_form_log_three_halves(self):
        r = 1 / math.sqrt(2)
        t = flow_time_to_level((2, 2), [r, 1j * r], 1.0 / 3.0)
        assert t == pytest.approx(math.log(1.5), abs=1e-12)

    def test_residual_and_increasing_slope(self):
        e = (3, 2, 2)
        pts = sample_level_set(LevelSpec.level(e, 1.0), 50, 6)
        arr = np.asarray(e)
        for z in pts:
            for s in (0.0, 0.25, 0.5, 0.75):
                t = flow_time_to_level(e, z, s)
                weights = np.array((s, 1.0, 1.0))
                c = weights * np.abs(z) ** 2
                residual = abs(float(np.sum(c * np.exp(2 * t / arr))) - 1.0)
                assert residual < 1e-12
                slope = float(np.sum(c * (2.0 / arr) * np.exp(2 * t / arr)))
                assert slope > 0.0

    def test_no_solution_when_everything_vanishes(self):
        with pytest.raises(ValueError):
            _solve_scale_time((2, 2), np.zeros(2))

    def test_off_manifold_rejected(self):
        with pytest.raises(ValueError):
            flow_time_to_level((2, 2), [1.0, 1.0], 0.5)


class TestIsotopy:
    def test_identity_at_one(self):
        pts = sample_level_set(LevelSpec.level((2, 2, 2), 1.0), 5, 8)
        for z in pts:
            assert np.max(np.abs(isotopy_to_level((2, 2, 2), z, 1.0) - z)) < 1e-12

    def test_closed_form_image(self):
        r = 1 / math.sqrt(2)
        image = isotopy_to_level((2, 2), [r, 1j * r], 0.0)
        assert np.allclose(image, [1.0, 1j], atol=1e-12)
        back = isotopy_from_level((2, 2), image, 0.0)
        assert np.allclose(back, [r, 1j * r], atol=1e-12)

    def test_variety_preserved_along_family(self):
        e = (2, 2, 2)
        pts = sample_level_set(LevelSpec.level(e, 1.0), 100, 10)
        for z in pts:
            for s in (0.0, 0.25, 0.5, 0.75):
                image = isotopy_to_level(e, z, s)
                assert abs(brieskorn_poly(e, image)) < 1e-10
                weights = np.array((s, 1.0, 1.0))
                assert abs(np.sum(weights * np.abs(image) ** 2) - 1.0) < 1e-10

    def test_round_trip_both_ways(self):
        e = (2, 2, 2)
        pts = sample_level_set(LevelSpec.level(e, 1.0), 100, 11)
        for z in pts:
            image = isotopy_to_level(e, z, 0.5)
            assert np.max(np.abs(isotopy_from_level(e, image, 0.5) - z)) < 1e-9
        halfway = sample_level_set(LevelSpec.level(e, 0.5), 100, 12)
        for w in halfway:
            lifted = isotopy_from_level(e, w, 0.5)
            assert np.max(np.abs(isotopy_to_level(e, lifted, 0.5) - w)) < 1e-9
