import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plugins.module_utils.bench import fit_order
from plugins.module_utils.curvature_errors import DegenerateBasis, InvalidRecurrence
from plugins.module_utils.curvature_schemes import g1, g3
from plugins.module_utils.geometry_core import star_quantities
from plugins.module_utils.sphere_hull import average_edge_length
from plugins.module_utils.synthesis import (
    BUILTIN_SURFACES,
    DEFAULT_BASIS,
    FiniteDifferenceSurface,
    QuadraticForm,
    QuadraticGraph,
    SphereMap,
    SurfaceMap,
    TorusMap,
    builtin_surface,
    counterexample_fan,
    counterexample_family,
    has_equal_apex_angles,
    icosahedron_mesh,
    is_regular_vertex,
    octahedron_mesh,
    parallelogram_fan,
    parallelogram_family,
    parallelogram_offsets,
    projected_angles,
    refine,
    regular_family,
    regular_fan,
    spherical_fan,
    true_curvatures,
    weight_residual,
)

LEVELS = [1 / 8, 1 / 16, 1 / 32, 1 / 64, 1 / 128]

coefficients = st.floats(-1.0, 1.0, allow_nan=False)


class TestQuadraticForm:
    @pytest.mark.parametrize("coeffs, expected", [
        ((1.0, 1.0, 1.0), (3.0, 2.0)),
        ((1.0, 0.0, -1.0), (-4.0, 0.0)),
        ((1.0, 0.0, 1.0), (4.0, 2.0)),
    ])
    def test_true_curvatures(self, coeffs, expected):
        assert tuple(true_curvatures(QuadraticForm(*coeffs))) == expected

    def test_rejects_non_finite(self):
        with pytest.raises(ValueError):
            QuadraticForm(1.0, float("nan"), 0.0)

    def test_random_is_seeded(self):
        a = QuadraticForm.random(np.random.default_rng([1, 6]))
        b = QuadraticForm.random(np.random.default_rng([1, 6]))
        assert a == b
        assert all(-1.0 <= c <= 1.0 for c in a.as_tuple())


class TestRegularFan:
    def test_symmetric_form_keeps_l1(self):
        fan = regular_fan(QuadraticForm(1.0, 1.0, 1.0), 4, 1 / 8)
        lengths = np.hypot(fan.neighbors[:, 0], fan.neighbors[:, 1])
        assert lengths[1] == pytest.approx(1 / 8, rel=1e-15)

    @settings(max_examples=100, deadline=None)
    @given(coefficients, coefficients, coefficients, st.integers(3, 10), st.sampled_from(LEVELS))
    def test_spoke_lengths_are_equal(self, a20, a11, a02, n, l1):
        form = QuadraticForm(a20, a11, a02)
        fan = regular_fan(form, n, l1)
        assert fan.valence == n
        eta = np.linalg.norm(fan.spokes, axis=1)
        assert np.max(eta) - np.min(eta) <= 1e-12 * np.max(eta)
        assert np.allclose(fan.neighbors[:, 2], [form(x, y) for x, y in fan.neighbors[:, :2]], rtol=0, atol=1e-15)
        assert is_regular_vertex(fan)

    def test_projected_angles(self):
        fan = regular_fan(QuadraticForm(0.3, -0.8, 0.5), 7, 1 / 16)
        assert np.allclose(projected_angles(fan), 2.0 * math.pi / 7, atol=1e-12)

    def test_apex_angles_approach_projected_angles(self):
        form = QuadraticForm(0.7, 0.3, -0.2)
        gaps, etas = [], []
        for level in LEVELS:
            fan = regular_fan(form, 5, level)
            q = star_quantities(fan)
            gaps.append(float(np.max(np.abs(projected_angles(fan) - q.gamma))))
            etas.append(q.eta_max)
        assert fit_order(gaps, etas) >= 1.8

    def test_flat_form(self):
        fan = regular_fan(QuadraticForm(0.0, 0.0, 0.0), 6, 0.5)
        assert np.all(fan.neighbors[:, 2] == 0.0)
        assert has_equal_apex_angles(fan)

    @pytest.mark.parametrize("l1", [0.0, -0.1, float("nan"), float("inf")])
    def test_invalid_l1(self, l1):
        with pytest.raises(InvalidRecurrence):
            regular_fan(QuadraticForm(1.0, 0.0, 1.0), 5, l1)

    def test_valence_below_three(self):
        with pytest.raises(ValueError):
            regular_fan(QuadraticForm(1.0, 0.0, 1.0), 2, 0.1)

    @pytest.mark.parametrize("n", [5, 6, 7, 8])
    def test_unit_weight_residual_is_third_order(self, n):
        form = QuadraticForm(0.7, 0.3, -0.2)
        residuals = [weight_residual(form, n, level) for level in LEVELS]
        etas = [float(np.max(np.linalg.norm(regular_fan(form, n, level).spokes, axis=1))) for level in LEVELS]
        assert fit_order(residuals, etas) >= 2.5

    def test_family(self):
        family = regular_family(QuadraticForm(1.0, 1.0, 1.0), 6)
        assert (family.true_gaussian, family.true_mean, family.valence) == (3.0, 2.0, 6)
        assert family.fan(0.25).valence == 6


class TestSurfaces:
    def test_graph_matches_form(self):
        form = QuadraticForm(0.625, 0.375, -0.875)
        graph = QuadraticGraph(form)
        assert graph.gaussian_curvature((0.0, 0.0)) == pytest.approx(true_curvatures(form).gaussian)
        assert graph.mean_curvature((0.0, 0.0)) == pytest.approx(true_curvatures(form).mean)

    @pytest.mark.parametrize("u", [(0.3, 1.1), (1.0, 0.375), (2.2, -0.4)])
    def test_sphere(self, u):
        sphere = SphereMap(2.0)
        assert sphere.gaussian_curvature(u) == 0.25
        assert SurfaceMap.gaussian_curvature(sphere, u) == pytest.approx(0.25, rel=1e-6)
        assert abs(sphere.mean_curvature(u)) == pytest.approx(0.5, rel=1e-6)

    @pytest.mark.parametrize("u", [(0.25, 0.5), (1.0, 2.0), (-0.7, 3.0)])
    def test_torus(self, u):
        torus = TorusMap(2.0, 0.75)
        b = u[1]
        ring = 2.0 + 0.75 * math.cos(b)
        assert SurfaceMap.gaussian_curvature(torus, u) == pytest.approx(torus.gaussian_curvature(u), rel=1e-6)
        expected_mean = (2.0 + 1.5 * math.cos(b)) / (2.0 * 0.75 * ring)
        assert abs(torus.mean_curvature(u)) == pytest.approx(expected_mean, rel=1e-6)

    def test_finite_difference_wrapper_matches_torus(self):
        torus = TorusMap(2.0, 0.75)
        wrapped = FiniteDifferenceSurface(torus.point, "torus_fd")
        u = (0.25, 0.5)
        assert wrapped.name == "torus_fd"
        assert np.allclose(wrapped.partials(u)[1], torus.partials(u)[1], rtol=0, atol=1e-6)
        assert wrapped.gaussian_curvature(u) == pytest.approx(torus.gaussian_curvature(u), rel=1e-5)

    def test_builtin_surfaces_are_regular(self):
        for name in BUILTIN_SURFACES:
            surface, u = builtin_surface(name)
            assert surface.is_regular(u), name

    def test_unknown_surface(self):
        with pytest.raises(ValueError):
            builtin_surface("klein_bottle")


class TestParallelogram:
    def test_offsets_satisfy_identity_exactly(self):
        offsets = parallelogram_offsets(DEFAULT_BASIS)
        for j in range(6):
            assert np.array_equal(offsets[j], offsets[j - 1] + offsets[(j + 1) % 6])

    def test_degenerate_basis(self):
        with pytest.raises(DegenerateBasis):
            parallelogram_offsets(((1.0, 0.0), (2.0, 0.0)))
        with pytest.raises(DegenerateBasis):
            parallelogram_family(SphereMap(), (1.0, 0.5), basis=((0.0, 0.0), (1.0, 1.0)))

    def test_fan(self):
        surface, u = builtin_surface("torus")
        fan = parallelogram_fan(surface, u, DEFAULT_BASIS, 0.125)
        assert fan.valence == 6
        assert np.array_equal(fan.center, surface.point(u))
        with pytest.raises(ValueError):
            parallelogram_fan(surface, u, DEFAULT_BASIS, 0.0)

    def test_umbilic_graph_quadratic_order(self):
        family = parallelogram_family(QuadraticGraph(QuadraticForm(1.0, 0.0, 1.0)), (0.0, 0.0),
                                      basis=((1.0, 0.0), (0.0, 1.0)))
        assert family.true_gaussian == 4.0
        errors, etas = [], []
        for _, fan in refine(family, LEVELS):
            q = star_quantities(fan)
            errors.append(abs(g1(q) - 4.0))
            etas.append(q.eta_max)
        assert fit_order(errors, etas) >= 1.8

    @pytest.mark.parametrize("name", ["paraboloid", "wave"])
    def test_g3_quadratic_order(self, name):
        surface, u = builtin_surface(name)
        family = parallelogram_family(surface, u)
        errors, etas = [], []
        for _, fan in refine(family, LEVELS):
            q = star_quantities(fan)
            errors.append(abs(g3(q) - family.true_gaussian))
            etas.append(q.eta_max)
        assert fit_order(errors, etas) >= 1.8


class TestCounterexample:
    def test_geometry_ignores_c(self):
        fans = [counterexample_fan(c, 1 / 16) for c in (0.0, 0.5, 1.0, 1.5)]
        assert all(f.fan.same_coordinates(fans[0].fan) for f in fans)
        assert [f.true_gaussian for f in fans] == [4.0, 3.75, 3.0, 1.75]

    def test_family(self):
        family = counterexample_family(1.5)
        assert (family.true_gaussian, family.true_mean, family.valence) == (1.75, 2.0, 4)

    def test_rejects_nonpositive_radius(self):
        with pytest.raises(ValueError):
            counterexample_fan(0.5, 0.0)


class TestRefine:
    def test_pairs(self):
        out = refine(counterexample_family(0.0), [0.5, 0.25])
        assert [r for r, _ in out] == [0.5, 0.25]
        assert out[1][1].neighbors[0].tolist() == [0.25, 0.0, 0.0625]

    @pytest.mark.parametrize("levels", [[], [0.5, 0.0], [0.25, 0.5], [0.25, 0.25]])
    def test_invalid_levels(self, levels):
        with pytest.raises(ValueError):
            refine(counterexample_family(0.0), levels)


class TestSphericalFan:
    def test_on_sphere(self):
        fan = spherical_fan(5, 0.1, radius=2.0)
        assert np.allclose(np.linalg.norm(fan.neighbors, axis=1), 2.0)
        assert fan.center.tolist() == [0.0, 0.0, 2.0]
        assert is_regular_vertex(fan)


class TestPlatonicMeshes:
    def test_octahedron_scale(self):
        mesh = octahedron_mesh(2.0)
        assert average_edge_length(mesh) == pytest.approx(2.0, rel=1e-12)
        assert mesh.is_closed()

    def test_icosahedron(self):
        mesh = icosahedron_mesh()
        assert (mesh.vertex_count, mesh.edge_count, mesh.face_count) == (12, 30, 20)
        assert mesh.is_closed()
        assert average_edge_length(mesh) == pytest.approx(1.0, rel=1e-12)
