"""Open books, Reeb dynamics, bindings, and the branched-covering model."""

import cmath
import math

import numpy as np
import pytest

from brieskorn_lab.exterior import eval_one_form, eval_two_form, tangent_frame, weighted_contact_form
from brieskorn_lab.geometry import LevelSpec, brieskorn_poly, sample_level_set
from brieskorn_lab.openbook import (
    BindingLoop,
    CoveringSpec,
    OpenBookSpec,
    base_projection,
    binding_components,
    binding_orientation_integrals,
    cover_page_phase,
    fibers_over,
    page_phase,
    page_rotation_residual,
    page_symplectic_check,
    radial_profile,
    reeb_field,
    reeb_flow,
)
from brieskorn_lab.verify import sample_branch_locus


class TestPagePhase:
    def test_real_point(self):
        assert page_phase(OpenBookSpec((2, 2)), [1.0, 0.0]) == pytest.approx(1.0)

    def test_phase_doubling(self):
        z = [0.0, cmath.exp(1j * math.pi / 4)]
        assert page_phase(OpenBookSpec((2, 2)), z) == pytest.approx(1j, abs=1e-15)

    def test_binding_rejected(self):
        r = 1 / math.sqrt(2)
        with pytest.raises(ValueError):
            page_phase(OpenBookSpec((2, 2)), [r, 1j * r])

    def test_unit_phase_validation(self):
        with pytest.raises(ValueError):
            OpenBookSpec((2, 2), page_phase=2.0)


class TestReeb:
    def test_components(self):
        assert np.allclose(reeb_field(OpenBookSpec((2, 2)), [1.0, 0.0]), [0.5j, 0.0])

    def test_pairing_is_one_on_sphere(self):
        tail = (2, 3)
        book = OpenBookSpec(tail)
        beta = weighted_contact_form(tail)
        for z in sample_level_set(LevelSpec.sphere(tail), 100, 3):
            assert abs(eval_one_form(beta, z, reeb_field(book, z)) - 1.0) < 1e-12

    def test_two_form_annihilates_sphere_tangents(self):
        tail = (2, 2, 2)
        book = OpenBookSpec(tail)
        beta = weighted_contact_form(tail)
        spec = LevelSpec.sphere(tail)
        cs = spec.constraint_set()
        for z in sample_level_set(spec, 50, 4):
            reeb = reeb_field(book, z)
            frame = tangent_frame(cs, z, spec.frame_dim)
            for v in frame.basis:
                assert abs(eval_two_form(beta, z, reeb, v)) < 1e-10

    def test_flow_shifts_pages(self):
        book = OpenBookSpec((2, 2))
        assert page_rotation_residual(book, [1.0, 0.0], 0.0) == 0.0
        # quarter flow on the first coordinate: phase advances by the flow time
        assert page_rotation_residual(book, [1.0, 0.0], math.pi) < 1e-12
        flowed = reeb_flow(book, [1.0, 0.0], math.pi)
        assert np.allclose(flowed, [1j, 0.0], atol=1e-15)

    def test_rotation_residual_grid(self):
        tail = (3, 2)
        book = OpenBookSpec(tail)
        for z in sample_level_set(LevelSpec.sphere(tail), 60, 5):
            if abs(brieskorn_poly(tail, z)) < 1e-9:
                continue
            for t in (0.1, 0.9, 2.4, 5.0):
                assert page_rotation_residual(book, z, t) < 1e-12


class TestPages:
    @pytest.mark.parametrize("tail", [(2, 2, 2), (3, 2)])
    def test_symplectic_pages(self, tail):
        samples = sample_level_set(LevelSpec.sphere(tail), 300, 6)
        rep = page_symplectic_check(OpenBookSpec(tail), samples, seed=6)
        assert rep.passed
        assert rep.extras["min_reeb_transversality"] > 0.0
        assert rep.extras["max_rotation_rate_residual"] < 1e-10

    def test_page_tangents_annihilate_phase_derivative(self):
        tail = (2, 2, 2)
        book = OpenBookSpec(tail)
        samples = [
            z
            for z in sample_level_set(LevelSpec.sphere(tail), 40, 7)
            if abs(brieskorn_poly(tail, z)) > 1e-3
        ]
        from brieskorn_lab.openbook import _page_constraint_set

        for z in samples:
            theta0 = page_phase(book, z)
            cs = _page_constraint_set(book, theta0, len(tail))
            frame = tangent_frame(cs, z, 2 * len(tail) - 2)
            grad = cs.constraints[1].grad(z)
            from brieskorn_lab.exterior import to_real

            for v in frame.basis:
                assert abs(np.dot(to_real(grad), to_real(v))) < 1e-10


class TestBinding:
    def test_component_counts(self):
        assert len(binding_components(2, 2)) == 2
        assert len(binding_components(3, 2)) == 1
        assert len(binding_components(4, 2)) == 2
        assert len(binding_components(6, 4)) == 2

    def test_equal_radii_for_symmetric_exponents(self):
        loops = binding_components(2, 2)
        r0, r1 = loops[0].radii
        assert r0 == pytest.approx(1 / math.sqrt(2), abs=1e-12)
        assert r1 == pytest.approx(1 / math.sqrt(2), abs=1e-12)

    @pytest.mark.parametrize("pair", [(2, 2), (3, 2), (5, 3)])
    def test_loops_lie_on_the_link(self, pair):
        for loop in binding_components(*pair):
            for z in loop.sample(64):
                assert abs(brieskorn_poly(pair, z)) < 1e-12
                assert abs(np.sum(np.abs(z) ** 2) - 1.0) < 1e-12

    def test_loops_close_up(self):
        for loop in binding_components(3, 2):
            assert np.allclose(loop.point(0.0), loop.point(loop.period), atol=1e-12)

    def test_components_are_disjoint(self):
        loops = binding_components(2, 2)
        a = np.array(loops[0].sample(128))
        b = np.array(loops[1].sample(128))
        gap = min(np.min(np.abs(a - pt).sum(axis=1)) for pt in b)
        assert gap > 0.1

    @pytest.mark.parametrize("pair", [(2, 2), (3, 2)])
    def test_orientation_integrals(self, pair):
        integrals = binding_orientation_integrals(*pair, nodes=4096)
        assert len(integrals) == math.gcd(*pair)
        assert all(v > 0 for v in integrals)
        spread = max(integrals) - min(integrals)
        assert spread <= 1e-8 * max(integrals)
        refined = binding_orientation_integrals(*pair, nodes=8192)
        assert max(abs(x - y) for x, y in zip(integrals, refined)) < 1e-10

    @pytest.mark.parametrize("pair", [(2, 2), (3, 2), (4, 2)])
    def test_closed_form_value(self, pair):
        # the integrand is constant equal to the second weight, so each
        # component integrates to a1 * period
        a0, a1 = pair
        g = math.gcd(a0, a1)
        expected = a1 * 2.0 * math.pi * a0 / g
        for value in binding_orientation_integrals(a0, a1):
            assert value == pytest.approx(expected, rel=1e-12)

    def test_custom_form(self):
        values = binding_orientation_integrals(2, 2, form=weighted_contact_form((1.0, 1.0)))
        assert all(v > 0 for v in values)

    def test_node_validation(self):
        with pytest.raises(ValueError):
            binding_orientation_integrals(2, 2, nodes=2)


class TestCovering:
    def test_projection_drops_first(self):
        assert np.allclose(base_projection([1j, 2.0, 3.0]), [2.0, 3.0])

    def test_default_root(self):
        spec = CoveringSpec((3, 2, 2))
        assert abs(spec.root**3 + 1.0) < 1e-14

    def test_bad_root_rejected(self):
        with pytest.raises(ValueError):
            CoveringSpec((3, 2, 2), root=1.0)

    def test_generic_fiber_count(self):
        spec = CoveringSpec((3, 2, 2))
        cylinder_cs = LevelSpec.cylinder((3, 2, 2)).constraint_set()
        for w in sample_level_set(LevelSpec.sphere((2, 2)), 50, 8):
            if abs(brieskorn_poly((2, 2), w)) < 1e-3:
                continue
            fibers = fibers_over(spec, w)
            assert len(fibers) == 3
            for z in fibers:
                assert cylinder_cs.max_residual(z) < 1e-12
                assert np.allclose(base_projection(z), w)

    def test_branch_fiber(self):
        spec = CoveringSpec((3, 2, 2))
        for z in sample_branch_locus((3, 2, 2), 10, 9):
            fibers = fibers_over(spec, base_projection(z))
            assert len(fibers) == 1
            assert fibers[0][0] == 0.0

    def test_square_roots_of_minus_one(self):
        spec = CoveringSpec((2, 2))
        fibers = fibers_over(spec, [1.0])
        roots = sorted((z[0] for z in fibers), key=lambda c: c.imag)
        assert np.allclose(roots, [-1j, 1j], atol=1e-12)

    def test_off_sphere_rejected(self):
        with pytest.raises(ValueError):
            fibers_over(CoveringSpec((2, 2)), [2.0])

    def test_cover_phase_power_identity(self):
        e = (3, 2, 2)
        spec = CoveringSpec(e)
        book = OpenBookSpec(e[1:])
        samples = [
            z
            for z in sample_level_set(LevelSpec.cylinder(e), 220, 10)
            if abs(brieskorn_poly(e[1:], base_projection(z))) > 1e-3
        ][:200]
        assert len(samples) == 200
        for z in samples:
            lifted = cover_page_phase(spec, z)
            downstairs = page_phase(book, base_projection(z))
            assert abs(lifted**3 - downstairs) < 1e-12

    def test_positive_real_first_coordinate(self):
        spec = CoveringSpec((4, 2, 2))
        z = np.array([0.5, 0.6, 0.7j])
        assert cover_page_phase(spec, z) == pytest.approx(cmath.exp(1j * math.pi / 4))

    def test_branch_point_rejected(self):
        spec = CoveringSpec((3, 2, 2))
        with pytest.raises(ValueError):
            cover_page_phase(spec, [0.0, 1.0, 0.0])


class TestRadialProfile:
    def test_power_region(self):
        assert radial_profile(3, 0.5, 0.0) == 0.0
        assert radial_profile(3, 0.5, 0.1) == pytest.approx(0.1**3)

    def test_linear_region(self):
        assert radial_profile(3, 0.5, 0.5) == pytest.approx(0.5)
        assert radial_profile(3, 0.5, 1.2) == pytest.approx(1.2)

    @pytest.mark.parametrize("k,delta", [(2, 0.5), (3, 0.25), (5, 1.0)])
    def test_strictly_increasing_on_grid(self, k, delta):
        grid = np.linspace(0.0, 2.0, 10_001)
        values = radial_profile(k, delta, grid)
        assert np.all(np.diff(values) > 0.0)

    def test_continuity_at_blend_edges(self):
        k, delta = 4, 0.5
        lo, hi = delta / 2, delta
        assert radial_profile(k, delta, lo) == pytest.approx(lo**k, rel=1e-12)
        assert radial_profile(k, delta, hi) == pytest.approx(hi, rel=1e-12)

    def test_validation(self):
        with pytest.raises(ValueError):
            radial_profile(0, 0.5, 0.1)
        with pytest.raises(ValueError):
            radial_profile(2, -1.0, 0.1)
        with pytest.raises(ValueError):
            radial_profile(2, 0.5, -0.1)
