import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from plugins.module_utils.bench import fit_order
from plugins.module_utils.curvature_errors import IllConditioned
from plugins.module_utils.curvature_schemes import (
    ALL_SCHEMES,
    GAUSSIAN_SCHEMES,
    SchemeId,
    VertexFlag,
    estimate_mesh,
    evaluate_fan,
    g1,
    g2,
    g3,
    g4,
    g5,
    h1,
    parse_schemes,
    principal_curvatures,
    regular_closed_forms,
)
from plugins.module_utils.geometry_core import (
    OneRingFan,
    VoronoiRule,
    aniso_area,
    build_one_ring,
    module_sp,
    star_quantities,
)
from plugins.module_utils.synthesis import QuadraticForm, regular_fan, spherical_fan

LEVELS = [1 / 8, 1 / 16, 1 / 32, 1 / 64, 1 / 128]


class RecordingLog:
    def __init__(self):
        self.debugs = []
        self.warnings = []

    def debug(self, msg):
        self.debugs.append(msg)

    def warn(self, msg):
        self.warnings.append(msg)


@st.composite
def flat_fans(draw):
    n = draw(st.integers(min_value=5, max_value=8))
    weights = np.array(draw(st.lists(st.floats(0.8, 1.2), min_size=n, max_size=n)))
    theta = np.concatenate([[0.0], np.cumsum(2.0 * math.pi * weights / weights.sum())[:-1]])
    radii = np.array(draw(st.lists(st.floats(0.8, 1.25), min_size=n, max_size=n)))
    return OneRingFan(np.zeros(3), np.column_stack([radii * np.cos(theta), radii * np.sin(theta), np.zeros(n)]))


def random_fan(rng):
    """Fan with angular gaps of at least 0.2 rad and gently varying heights."""
    n = int(rng.integers(3, 11))
    while True:
        theta = np.sort(rng.uniform(0.0, 2.0 * math.pi, n))
        gaps = np.diff(np.append(theta, theta[0] + 2.0 * math.pi))
        if gaps.min() >= 0.2 and gaps.max() < math.pi - 0.2:
            break
    radii = rng.uniform(0.8, 1.25, n)
    heights = rng.uniform(-0.3, 0.3, n) * radii
    center = rng.uniform(-1.0, 1.0, 3)
    return OneRingFan(center, center + np.column_stack([radii * np.cos(theta), radii * np.sin(theta), heights]))


class TestPlatonicFixtures:
    def test_octahedron_vertex(self, octahedron):
        fan = build_one_ring(octahedron, 0)
        q = star_quantities(fan)
        expected = 2.0 * math.pi / math.sqrt(3.0)
        assert g1(q) == pytest.approx(expected, abs=1e-12)
        assert g2(q) == pytest.approx(expected, abs=1e-12)
        assert g3(q) == pytest.approx(expected, abs=1e-12)
        assert g4(fan, VoronoiRule.MIXED) == pytest.approx(expected, abs=1e-12)
        assert g4(fan, VoronoiRule.CIRCUMCENTRIC) == pytest.approx(expected, abs=1e-12)

    def test_octahedron_mean_curvature_is_inverse_circumradius(self, octahedron):
        assert h1(build_one_ring(octahedron, 3)) == pytest.approx(math.sqrt(2.0), abs=1e-12)

    def test_icosahedron_vertex(self, icosahedron):
        fan = build_one_ring(icosahedron, 0)
        assert fan.valence == 5
        area = 5.0 * math.sqrt(3.0) / 4.0
        assert g1(star_quantities(fan)) == pytest.approx(3.0 * (math.pi / 3.0) / area, abs=1e-12)


class TestFlatFans:
    @settings(max_examples=200, deadline=None)
    @given(flat_fans())
    def test_every_scheme_vanishes(self, fan):
        for scheme in ALL_SCHEMES:
            assert abs(evaluate_fan(fan, scheme)) < 1e-12, scheme


class TestEquivalence:
    def test_module_and_law_of_cosines_denominators(self):
        rng = np.random.default_rng(41)
        worst = 0.0
        for _ in range(10000):
            q = star_quantities(random_fan(rng))
            a, b = g2(q), g3(q)
            if a != 0.0:
                worst = max(worst, abs(a - b) / abs(a))
        assert worst <= 1e-10

    @pytest.mark.parametrize("scale", [0.125, 3.0, 8.0])
    def test_schemes_scale_with_inverse_length(self, scale):
        rng = np.random.default_rng(17)
        for _ in range(200):
            fan = random_fan(rng)
            big = fan.scaled(scale)
            for scheme in ALL_SCHEMES:
                try:
                    value = evaluate_fan(fan, scheme)
                except IllConditioned:
                    continue
                power = 1 if scheme is SchemeId.H1 else 2
                scaled = evaluate_fan(big, scheme) * scale ** power
                assert scaled == pytest.approx(value, rel=1e-9, abs=1e-10), (scheme, fan.valence)

    def test_circumcentric_g4_equals_g2(self):
        rng = np.random.default_rng(5)
        for _ in range(200):
            fan = random_fan(rng)
            assert g4(fan, "circumcentric") == pytest.approx(g2(star_quantities(fan)), rel=1e-9, abs=1e-12)


class TestRegularClosedForms:
    @pytest.mark.parametrize("n", range(3, 13))
    def test_module_splits_into_area_and_b(self, n):
        forms = regular_closed_forms(n, 0.37)
        assert forms.s_p == pytest.approx(forms.a + 2.0 * forms.b, rel=1e-12)

    def test_valence_three_leading_term_vanishes(self):
        forms = regular_closed_forms(3, 1.0)
        assert abs(forms.a - 2.0 * forms.b) < 1e-12 * forms.s_p

    def test_hexagon_values(self):
        forms = regular_closed_forms(6, 1.0)
        assert forms.a == pytest.approx(math.sqrt(3.0) / 2.0, rel=1e-12)
        assert forms.s_p == pytest.approx(math.sqrt(3.0) / 2.0, rel=1e-12)
        assert forms.b == pytest.approx(0.0, abs=1e-14)

    @pytest.mark.parametrize("n, eta", [(2, 1.0), (6, 0.0), (6, -1.0)])
    def test_rejects_bad_input(self, n, eta):
        with pytest.raises(ValueError):
            regular_closed_forms(n, eta)

    @pytest.mark.parametrize("n", [3, 5, 6, 7, 8])
    def test_residuals_are_fourth_order(self, n):
        form = QuadraticForm(0.7, 0.3, -0.2)
        area_res, module_res, etas = [], [], []
        for level in LEVELS:
            fan = regular_fan(form, n, level)
            q = star_quantities(fan)
            closed = regular_closed_forms(n, q.eta_max)
            area_res.append(abs(aniso_area(q) - closed.a))
            module_res.append(abs(module_sp(q) - closed.s_p))
            etas.append(q.eta_max)
        assert fit_order(area_res, etas) >= 3.5
        assert fit_order(module_res, etas) >= 3.5


class TestMeanCurvature:
    @pytest.mark.parametrize("n", [5, 6, 7, 8])
    def test_regular_fans_converge(self, n):
        rng = np.random.default_rng([11, n])
        forms = [QuadraticForm.random(rng) for _ in range(10)]
        errors, etas = [], []
        for level in LEVELS:
            errs, spokes = [], []
            for form in forms:
                fan = regular_fan(form, n, level)
                errs.append(abs(h1(fan) - abs(form.a20 + form.a02)))
                spokes.append(np.mean(np.linalg.norm(fan.spokes, axis=1)))
            errors.append(np.mean(errs))
            etas.append(np.mean(spokes))
        assert fit_order(errors, etas) >= 0.9

    @pytest.mark.parametrize("n", [4, 5, 6, 7, 8])
    def test_umbilic_graph(self, n):
        form = QuadraticForm(1.0, 0.0, 1.0)
        errors, etas = [], []
        for level in LEVELS:
            fan = regular_fan(form, n, level)
            errors.append(abs(h1(fan) - 2.0))
            etas.append(level)
        assert fit_order(errors, etas) >= 0.9

    @pytest.mark.parametrize("angle", [0.2, 0.05, 0.01])
    def test_regular_spherical_fan_is_exact(self, angle):
        assert h1(spherical_fan(6, angle)) == pytest.approx(1.0, abs=1e-9)


class TestG5:
    def test_valence_three_is_ill_conditioned(self):
        fan = regular_fan(QuadraticForm(0.5, 0.1, 0.4), 3, 1 / 16)
        with pytest.raises(IllConditioned) as exc:
            g5(fan)
        assert exc.value.scheme == "G5"

    def test_flat_hexagon(self, flat_hexagon):
        assert abs(g5(flat_hexagon)) < 1e-12

    def test_sphere_fan_close_to_one(self):
        assert g5(spherical_fan(7, 0.01)) == pytest.approx(1.0, abs=1e-2)


class TestPrincipalCurvatures:
    def test_from_mean_and_gaussian(self):
        pc = principal_curvatures(2.0, 3.0)
        assert (pc.k_min, pc.k_max, pc.clamped) == (pytest.approx(1.0), pytest.approx(3.0), False)

    def test_negative_radicand_is_clamped(self):
        pc = principal_curvatures(1.0, 1.0 + 1e-9)
        assert pc.clamped
        assert pc.k_min == pc.k_max == 1.0


class TestParseSchemes:
    def test_orders_and_deduplicates(self):
        assert parse_schemes(["h1", "g2", "G2", SchemeId.G1]) == (SchemeId.G1, SchemeId.G2, SchemeId.H1)

    def test_unknown_scheme(self):
        with pytest.raises(ValueError):
            parse_schemes(["G9"])

    def test_gaussian_property(self):
        assert all(s.is_gaussian for s in GAUSSIAN_SCHEMES)
        assert not SchemeId.H1.is_gaussian


class TestEstimateMesh:
    def test_octahedron(self, octahedron):
        log = RecordingLog()
        report = estimate_mesh(octahedron, ["G1", "G2", "G3", "G4", "H1"], log=log)
        assert len(report) == 6
        assert np.allclose(report.values(SchemeId.G1), 2.0 * math.pi / math.sqrt(3.0), atol=1e-12)
        assert np.allclose(report.values(SchemeId.H1), math.sqrt(2.0), atol=1e-12)
        assert report.flag_counts(SchemeId.G2) == {"ok": 6}
        assert log.warnings == []
        mean, used = report.mean_abs_error(SchemeId.G2, 2.0 * math.pi / math.sqrt(3.0))
        assert used == 6
        assert mean < 1e-12

    def test_principal_curvatures_clamp_on_octahedron(self, octahedron):
        report = estimate_mesh(octahedron, ["G2", "H1"])
        pc = report.principal_curvatures(0, gaussian="G2")
        assert pc.clamped
        assert pc.k_min == pytest.approx(math.sqrt(2.0))

    def test_boundary_vertices_are_flagged(self, open_fan_mesh):
        log = RecordingLog()
        report = estimate_mesh(open_fan_mesh, ["G1", "H1"], log=log)
        assert report.flag_counts(SchemeId.G1) == {VertexFlag.BOUNDARY_SKIPPED.value: 7}
        assert np.all(np.isnan(report.values(SchemeId.G1)))
        mean, used = report.mean_abs_error(SchemeId.G1, 0.0)
        assert used == 0 and math.isnan(mean)
        assert len(log.warnings) == 2

    def test_rows(self, octahedron):
        rows = estimate_mesh(octahedron, ["G5", "H1"]).as_rows(principal=True)
        assert [r["vertex"] for r in rows] == list(range(6))
        assert set(rows[0]) == {"vertex", "G5", "H1", "flags", "k_min", "k_max"}
        assert rows[0]["flags"] == "ok"
